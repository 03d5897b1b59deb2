//! The d-by-d period matrix, its numeric Ramificant determinant, the
//! closed-form identity check, coefficient recovery from periods, and the
//! period-map Jacobian.
//!
//! Row `l` holds the asymptotic values along `omega_l`; column `k` (1-based)
//! holds the periods of `F_{k-1}`, so the entry at `(l, k)` is
//! `Omega_{kl} = int_0^{+inf*omega_l} t^{k-1} exp(P0(t)) dt`.

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::algebra::NormalizedP0;
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::quadrature::{integrate_ray, QuadConfig, Quadrature, RayIntegralSpec};
use crate::universal_pi::{delta_zero, pi_polynomial};

/// Relative pivot threshold below which a period matrix is treated as
/// numerically singular (inconsistent or corrupted input periods).
pub const SINGULAR_PIVOT_REL_TOL: f64 = 1e-12;

/// Numeric period matrix with aggregated quadrature error metadata.
#[derive(Clone, Debug)]
pub struct PeriodMatrix {
    d: usize,
    /// `entries[l-1][k-1] = Omega_{kl}`; rows are directions.
    entries: Vec<Vec<Complex64>>,
    /// Worst per-entry quadrature estimate times `d` (conservative
    /// determinant propagation is intentionally not attempted).
    est_error: f64,
}

impl PeriodMatrix {
    pub fn new(d: usize, entries: Vec<Vec<Complex64>>, est_error: f64) -> Result<Self> {
        if entries.len() != d || entries.iter().any(|row| row.len() != d) {
            return Err(Error::InvalidInput(format!("period matrix must be {d}x{d}")));
        }
        if entries
            .iter()
            .flatten()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::InvalidInput("period matrix entries must be finite".into()));
        }
        Ok(PeriodMatrix {
            d,
            entries,
            est_error,
        })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn est_error(&self) -> f64 {
        self.est_error
    }

    /// `Omega_{kl}` with `l, k` both 1-based.
    pub fn omega(&self, k: usize, l: usize) -> Complex64 {
        self.entries[l - 1][k - 1]
    }

    pub fn rows(&self) -> &[Vec<Complex64>] {
        &self.entries
    }

    pub fn to_cmatrix(&self) -> CMatrix {
        CMatrix::from_rows(&self.entries)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "d": self.d,
            "entries": self
                .entries
                .iter()
                .map(|row| row.iter().map(|c| json!([c.re, c.im])).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "est_error": self.est_error,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let d = v
            .get("d")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::InvalidInput("period matrix JSON needs integer \"d\"".into()))?
            as usize;
        let rows = v
            .get("entries")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::InvalidInput("period matrix JSON needs \"entries\"".into()))?;
        let mut entries = Vec::with_capacity(rows.len());
        for row in rows {
            let row = row
                .as_array()
                .ok_or_else(|| Error::InvalidInput("entries rows must be arrays".into()))?;
            let mut out = Vec::with_capacity(row.len());
            for item in row {
                out.push(crate::algebra::complex_from_json(item)?);
            }
            entries.push(out);
        }
        let est_error = v.get("est_error").and_then(Value::as_f64).unwrap_or(0.0);
        Self::new(d, entries, est_error)
    }
}

/// Compute all `d*d` periods of `p0`. Entries are independent; this spreads
/// them over `threads` workers (row-major striding, deterministic placement).
pub fn period_matrix_with_threads(
    p0: &NormalizedP0,
    cfg: &QuadConfig,
    threads: usize,
) -> Result<PeriodMatrix> {
    let d = p0.degree();
    let jobs: Vec<(usize, usize)> = (1..=d)
        .flat_map(|l| (1..=d).map(move |k| (l, k)))
        .collect();
    let threads = threads.clamp(1, jobs.len());
    let mut results: Vec<Option<Result<Quadrature>>> = vec![None; jobs.len()];
    if threads == 1 {
        for (slot, &(l, k)) in results.iter_mut().zip(&jobs) {
            let spec = RayIntegralSpec::new(p0.clone(), (k - 1) as u32, l)?;
            *slot = Some(integrate_ray(&spec, cfg));
        }
    } else {
        let chunks: Vec<Vec<usize>> = (0..threads)
            .map(|t| (t..jobs.len()).step_by(threads).collect())
            .collect();
        let partials: Vec<Vec<(usize, Result<Quadrature>)>> = std::thread::scope(|scope| {
            let handles: Vec<_> = chunks
                .into_iter()
                .map(|chunk| {
                    let jobs = &jobs;
                    scope.spawn(move || {
                        chunk
                            .into_iter()
                            .map(|i| {
                                let (l, k) = jobs[i];
                                let r = RayIntegralSpec::new(p0.clone(), (k - 1) as u32, l)
                                    .and_then(|spec| integrate_ray(&spec, cfg));
                                (i, r)
                            })
                            .collect()
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
        });
        for part in partials {
            for (i, r) in part {
                results[i] = Some(r);
            }
        }
    }

    let mut entries = vec![vec![Complex64::new(0.0, 0.0); d]; d];
    let mut worst = 0.0f64;
    for (i, slot) in results.into_iter().enumerate() {
        let (l, k) = jobs[i];
        let q = slot.expect("all jobs filled")?;
        entries[l - 1][k - 1] = q.value;
        worst = worst.max(q.est_error);
    }
    PeriodMatrix::new(d, entries, worst * d as f64)
}

/// [`period_matrix_with_threads`] with one worker per available core.
pub fn period_matrix(p0: &NormalizedP0, cfg: &QuadConfig) -> Result<PeriodMatrix> {
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    period_matrix_with_threads(p0, cfg, threads)
}

/// Determinant of the period matrix by pivoted complex elimination.
///
/// A numerically singular matrix returns a value near zero; that the
/// determinant never vanishes is a theorem this toolkit tests, not assumes.
pub fn ramificant_det(m: &PeriodMatrix) -> Complex64 {
    m.to_cmatrix().det()
}

/// Comparison of the quadrature determinant ratio against `exp(Pi_d(a))`,
/// with both readings of the `Delta(0)` constant attached.
#[derive(Clone, Debug)]
pub struct IdentityReport {
    pub delta_numeric: Complex64,
    pub delta_zero_numeric: Complex64,
    pub ratio_numeric: Complex64,
    pub exp_pi: Complex64,
    pub rel_err: f64,
    /// `(2 pi d)^{d/2} / sqrt(2 pi)`.
    pub simplified_constant: f64,
    /// Gamma-product prefactor times the determinant Vandermonde.
    pub vandermonde_constant: Complex64,
    pub est_error: f64,
}

impl IdentityReport {
    pub fn to_json(&self) -> Value {
        json!({
            "delta_numeric": [self.delta_numeric.re, self.delta_numeric.im],
            "delta_zero_numeric": [self.delta_zero_numeric.re, self.delta_zero_numeric.im],
            "ratio_numeric": [self.ratio_numeric.re, self.ratio_numeric.im],
            "exp_pi": [self.exp_pi.re, self.exp_pi.im],
            "rel_err": self.rel_err,
            "simplified_constant": self.simplified_constant,
            "vandermonde_constant": [self.vandermonde_constant.re, self.vandermonde_constant.im],
            "est_error": self.est_error,
        })
    }
}

/// Check `Delta(a)/Delta(0) = exp(Pi_d(a))` numerically for one `p0`.
pub fn verify_identity(p0: &NormalizedP0, cfg: &QuadConfig) -> Result<IdentityReport> {
    let d = p0.degree();
    let m_a = period_matrix(p0, cfg)?;
    let zero = NormalizedP0::new(d, vec![Complex64::new(0.0, 0.0); d])?;
    let m_0 = period_matrix(&zero, cfg)?;
    let delta_numeric = ramificant_det(&m_a);
    let delta_zero_numeric = ramificant_det(&m_0);
    let ratio_numeric = delta_numeric / delta_zero_numeric;
    let pi = pi_polynomial(d)?;
    let exponent = pi.pi.eval_complex(p0.lower_coeffs());
    if exponent.re > 709.0 {
        return Err(Error::ExpOverflow { exponent: exponent.re });
    }
    let exp_pi = exponent.exp();
    let dz = delta_zero(d);
    Ok(IdentityReport {
        delta_numeric,
        delta_zero_numeric,
        ratio_numeric,
        exp_pi,
        rel_err: (ratio_numeric - exp_pi).norm() / exp_pi.norm(),
        simplified_constant: dz.simplified,
        vandermonde_constant: dz.value,
        est_error: m_a.est_error().max(m_0.est_error()),
    })
}

/// Coefficients recovered from one linear solve against the period matrix.
#[derive(Clone, Debug)]
pub struct RecoveryResult {
    /// `e^{a_0}`; the constant term itself is only determined mod `2 pi i`.
    pub exp_a0: Complex64,
    /// `a_1 .. a_{d-1}`.
    pub a: Vec<Complex64>,
    /// `|M y - 1|_inf` of the solve behind the recovery.
    pub residual: f64,
}

impl RecoveryResult {
    /// Principal-branch logarithm of `exp_a0`; imaginary part only
    /// meaningful mod `2 pi`.
    pub fn a0_principal(&self) -> Complex64 {
        self.exp_a0.ln()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "exp_a0": [self.exp_a0.re, self.exp_a0.im],
            "a0_principal_mod_2pi_i": [self.a0_principal().re, self.a0_principal().im],
            "a": self.a.iter().map(|c| json!([c.re, c.im])).collect::<Vec<_>>(),
            "residual": self.residual,
        })
    }
}

/// Solve `M y = (1, ..., 1)` and read off `e^{a_0} = 1/y_d`,
/// `a_j = -y_j / (j y_d)`.
pub fn recover_coefficients(m: &PeriodMatrix) -> Result<RecoveryResult> {
    let d = m.dim();
    let ones = vec![Complex64::new(1.0, 0.0); d];
    let cm = m.to_cmatrix();
    let y = cm.solve(&ones, SINGULAR_PIVOT_REL_TOL)?;
    let mut residual = 0.0f64;
    for l in 0..d {
        let mut acc = Complex64::new(-1.0, 0.0);
        for k in 0..d {
            acc += cm[(l, k)] * y[k];
        }
        residual = residual.max(acc.norm());
    }
    let y_last = y[d - 1];
    let exp_a0 = Complex64::new(1.0, 0.0) / y_last;
    let a = (1..d)
        .map(|j| -y[j - 1] / (j as f64 * y_last))
        .collect();
    Ok(RecoveryResult {
        exp_a0,
        a,
        residual,
    })
}

/// Finite-difference check that the period mapping's differential is the
/// period matrix and that its determinant equals the Ramificant.
#[derive(Clone, Debug)]
pub struct JacobianReport {
    pub jacobian: Vec<Vec<Complex64>>,
    /// Max over entries of `|J_{lj} - Omega_{(j+1)l}| / |Omega_{(j+1)l}|`.
    pub max_entry_rel_dev: f64,
    /// `|det J - Delta| / |Delta|` with `Delta` from the same period matrix.
    pub det_rel_dev: f64,
}

impl JacobianReport {
    pub fn to_json(&self) -> Value {
        json!({
            "jacobian": self
                .jacobian
                .iter()
                .map(|row| row.iter().map(|c| json!([c.re, c.im])).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "max_entry_rel_dev": self.max_entry_rel_dev,
            "det_rel_dev": self.det_rel_dev,
        })
    }
}

/// Central finite differences of `Upsilon(a) = (F_0(+inf*omega_l))_l` in each
/// coefficient direction; the analytic derivative in `a_j` is the period of
/// `F_j`, so the Jacobian must reproduce the period matrix itself.
pub fn jacobian_check(p0: &NormalizedP0, h: f64, cfg: &QuadConfig) -> Result<JacobianReport> {
    if !(1e-6..=1e-3).contains(&h) {
        return Err(Error::InvalidInput(format!(
            "finite-difference step {h:e} outside [1e-6, 1e-3]"
        )));
    }
    let d = p0.degree();
    let m = period_matrix(p0, cfg)?;
    let first_column = |coeffs: Vec<Complex64>| -> Result<Vec<Complex64>> {
        let shifted = NormalizedP0::new(d, coeffs)?;
        (1..=d)
            .map(|l| {
                let spec = RayIntegralSpec::new(shifted.clone(), 0, l)?;
                Ok(integrate_ray(&spec, cfg)?.value)
            })
            .collect()
    };
    let mut jacobian = vec![vec![Complex64::new(0.0, 0.0); d]; d];
    for j in 0..d {
        let mut plus = p0.lower_coeffs().to_vec();
        plus[j] += h;
        let mut minus = p0.lower_coeffs().to_vec();
        minus[j] -= h;
        let col_plus = first_column(plus)?;
        let col_minus = first_column(minus)?;
        for l in 0..d {
            jacobian[l][j] = (col_plus[l] - col_minus[l]) / (2.0 * h);
        }
    }
    let mut max_entry_rel_dev = 0.0f64;
    for l in 1..=d {
        for j in 0..d {
            let reference = m.omega(j + 1, l);
            let dev = (jacobian[l - 1][j] - reference).norm() / reference.norm().max(1e-12);
            max_entry_rel_dev = max_entry_rel_dev.max(dev);
        }
    }
    let det_j = CMatrix::from_rows(&jacobian).det();
    let delta = ramificant_det(&m);
    Ok(JacobianReport {
        jacobian,
        max_entry_rel_dev,
        det_rel_dev: (det_j - delta).norm() / delta.norm(),
    })
}

/// Minimum sup-norm gap between rows; distinct directions must have distinct
/// asymptotic vectors, so the gap has to clear the error estimate.
#[derive(Clone, Debug)]
pub struct SeparationReport {
    /// `+inf` sentinel when `d = 1` (vacuous).
    pub min_row_gap: f64,
    pub est_error: f64,
    pub separated: bool,
}

impl SeparationReport {
    pub fn to_json(&self) -> Value {
        json!({
            "min_row_gap": if self.min_row_gap.is_finite() { json!(self.min_row_gap) } else { json!("inf") },
            "est_error": self.est_error,
            "separated": self.separated,
        })
    }
}

pub fn separation_check(m: &PeriodMatrix) -> SeparationReport {
    let d = m.dim();
    let mut min_gap = f64::INFINITY;
    for l in 0..d {
        for r in l + 1..d {
            let gap = (0..d)
                .map(|k| (m.rows()[l][k] - m.rows()[r][k]).norm())
                .fold(0.0, f64::max);
            min_gap = min_gap.min(gap);
        }
    }
    SeparationReport {
        min_row_gap: min_gap,
        est_error: m.est_error(),
        separated: min_gap > 10.0 * m.est_error(),
    }
}
