//! Integrability in finite terms of `int Q e^{P0}`, decided two independent
//! ways and cross-checked:
//!
//! * exact algebra: solve `A P0' + A' = Q` by descending back-substitution
//!   (the leading coefficient of `P0'` is exactly -1), declaring solvable when
//!   the residual vanishes;
//! * numeric periods: the primitive is computable in finite terms exactly
//!   when its `d` asymptotic values coincide, equivalently when the periods
//!   over the connecting paths `gamma_l` all vanish.

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::algebra::{CPoly, NormalizedP0};
use crate::error::{Error, Result};
use crate::periods::{period_matrix, PeriodMatrix};
use crate::quadrature::QuadConfig;
use crate::reduction::reduce_primitive;

mod gauss;

pub use gauss::solve_finite_terms_exact;

/// Residual threshold for declaring `A P0' + A' = Q` solved in floats.
pub const SOLVE_RESIDUAL_REL_TOL: f64 = 1e-9;

/// Absolute floor of the all-values-equal spread threshold.
pub const SPREAD_ABS_FLOOR: f64 = 1e-6;

/// Joint verdict of the two branches.
#[derive(Clone, Debug)]
pub struct IntegrabilityReport {
    /// Exact-branch verdict: a polynomial antiderivative factor exists.
    pub integrable_exact: bool,
    /// `A` with `A P0' + A' = Q`, present iff `integrable_exact`.
    pub antiderivative: Option<CPoly>,
    /// `Omega_l(F)` for `l = 1..=d`.
    pub asymptotic_values: Vec<Complex64>,
    /// Max pairwise `|Omega_l - Omega_m|`.
    pub max_spread: f64,
    /// The common asymptotic value when integrable.
    pub omega_constant: Option<Complex64>,
    /// Periods over the connecting paths: `Omega_{l+1} - Omega_l`, cyclically.
    pub gamma_periods: Vec<Complex64>,
    /// `max(SPREAD_ABS_FLOOR, 100 * est_error)` used for the numeric verdict.
    pub spread_threshold: f64,
    /// Quadrature error estimate behind the asymptotic values.
    pub est_error: f64,
    /// Whether the two verdicts coincide.
    pub agree: bool,
}

impl IntegrabilityReport {
    pub fn to_json(&self) -> Value {
        json!({
            "integrable_exact": self.integrable_exact,
            "antiderivative": self.antiderivative.as_ref().map(CPoly::to_json),
            "asymptotic_values": self
                .asymptotic_values
                .iter()
                .map(|c| json!([c.re, c.im]))
                .collect::<Vec<_>>(),
            "max_spread": self.max_spread,
            "omega_constant": self.omega_constant.map(|c| json!([c.re, c.im])),
            "gamma_periods": self
                .gamma_periods
                .iter()
                .map(|c| json!([c.re, c.im]))
                .collect::<Vec<_>>(),
            "spread_threshold": self.spread_threshold,
            "est_error": self.est_error,
            "agree": self.agree,
        })
    }
}

/// Try to solve `A P0' + A' = Q` over complex doubles.
///
/// Coefficients of `A` are determined descending from the leading term; the
/// equation is then declared solved when the full residual is below
/// [`SOLVE_RESIDUAL_REL_TOL`] relative to `max(1, |Q|_inf)`. Returns the
/// antiderivative factor, or `None` when no polynomial solution exists.
pub fn solve_finite_terms(p0: &NormalizedP0, q: &CPoly) -> Option<CPoly> {
    let d = p0.degree();
    let dp = p0.derivative();
    let candidate = solve_candidate(d, &dp, q)?;
    let residual = &(&(&candidate * &dp) + &candidate.derivative()) - q;
    if residual.norm_inf() <= SOLVE_RESIDUAL_REL_TOL * q.norm_inf().max(1.0) {
        Some(candidate)
    } else {
        None
    }
}

/// Back-substitution candidate shared by the float and exact paths; `None`
/// when the degree bookkeeping already rules a solution out.
fn solve_candidate(d: usize, dp: &CPoly, q: &CPoly) -> Option<CPoly> {
    let Some(m) = q.degree() else {
        return Some(CPoly::zero()); // Q = 0 integrates to a constant
    };
    if d == 1 {
        // P0' = -1: alpha_j = (j+1) alpha_{j+1} - q_j, always solvable
        let mut alpha = vec![Complex64::new(0.0, 0.0); m + 1];
        for j in (0..=m).rev() {
            let higher = if j + 1 <= m {
                alpha[j + 1] * (j + 1) as f64
            } else {
                Complex64::new(0.0, 0.0)
            };
            alpha[j] = higher - q.coeff(j);
        }
        return Some(CPoly::from_coeffs(alpha));
    }
    if m < d - 1 {
        return None; // deg(A P0' + A') >= d-1 for nonzero A
    }
    let n = m - (d - 1);
    let lead = dp.coeff(d - 1); // exactly -1
    let mut alpha = vec![Complex64::new(0.0, 0.0); n + 1];
    // match coefficients of z^s for s = m down to d-1
    for s in (d - 1..=m).rev() {
        let i = s - (d - 1);
        if i > n {
            continue;
        }
        // known contributions from alpha_t with t > i
        let mut acc = Complex64::new(0.0, 0.0);
        for t in i + 1..=n.min(s) {
            // A * P0' term: alpha_t * dp_{s-t}
            if s - t < d {
                acc += alpha[t] * dp.coeff(s - t);
            }
        }
        // A' term: (s+1) alpha_{s+1}
        if s + 1 <= n {
            acc += alpha[s + 1] * (s + 1) as f64;
        }
        alpha[i] = (q.coeff(s) - acc) / lead;
    }
    Some(CPoly::from_coeffs(alpha))
}

/// Asymptotic values `Omega_l(F)` of `F = int_0^z q e^{P0}`, via reduction to
/// the period basis: the `A0 e^{P0}` part decays along every ray, so
/// `Omega_l(F) = const_term + sum_k b_k Omega_{(k+1) l}`.
///
/// Returns the values together with the quadrature error estimate.
pub fn asymptotic_values(
    p0: &NormalizedP0,
    q: &CPoly,
    cfg: &QuadConfig,
) -> Result<(Vec<Complex64>, f64)> {
    let m = period_matrix(p0, cfg)?;
    Ok(asymptotic_values_from_matrix(p0, q, &m))
}

/// Same as [`asymptotic_values`] but reusing a precomputed period matrix.
pub fn asymptotic_values_from_matrix(
    p0: &NormalizedP0,
    q: &CPoly,
    m: &PeriodMatrix,
) -> (Vec<Complex64>, f64) {
    let d = p0.degree();
    let red = reduce_primitive(p0, q);
    let scale: f64 = red.basis_coeffs.iter().map(|b| b.norm()).fold(1.0, f64::max);
    let values = (1..=d)
        .map(|l| {
            let mut acc = red.const_term;
            for (k, b) in red.basis_coeffs.iter().enumerate() {
                acc += b * m.omega(k + 1, l);
            }
            acc
        })
        .collect();
    (values, m.est_error() * scale)
}

/// Run both branches and cross-check them.
///
/// `spread_tol` overrides the absolute floor of the numeric threshold
/// (defaults to [`SPREAD_ABS_FLOOR`]). Disagreement beyond tolerance is an
/// error carrying the full report, signalling quadrature failure or
/// ill-conditioning rather than a mathematical outcome.
pub fn check_integrability(
    p0: &NormalizedP0,
    q: &CPoly,
    cfg: &QuadConfig,
    spread_tol: Option<f64>,
) -> Result<IntegrabilityReport> {
    let d = p0.degree();
    let antiderivative = solve_finite_terms(p0, q);
    let integrable_exact = antiderivative.is_some();

    let (values, est_error) = asymptotic_values(p0, q, cfg)?;
    let mut max_spread = 0.0f64;
    for l in 0..d {
        for r in l + 1..d {
            max_spread = max_spread.max((values[l] - values[r]).norm());
        }
    }
    let gamma_periods = (0..d)
        .map(|l| values[(l + 1) % d] - values[l])
        .collect::<Vec<_>>();
    let spread_threshold = spread_tol.unwrap_or(SPREAD_ABS_FLOOR).max(100.0 * est_error);
    let integrable_numeric = max_spread <= spread_threshold;
    let agree = integrable_exact == integrable_numeric;
    let omega_constant = if integrable_numeric {
        let sum: Complex64 = values.iter().sum();
        Some(sum / d as f64)
    } else {
        None
    };
    let report = IntegrabilityReport {
        integrable_exact,
        antiderivative,
        asymptotic_values: values,
        max_spread,
        omega_constant,
        gamma_periods,
        spread_threshold,
        est_error,
        agree,
    };
    if !agree {
        return Err(Error::Disagreement {
            report: Box::new(report),
        });
    }
    Ok(report)
}
