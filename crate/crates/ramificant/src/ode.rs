//! The order-d homogeneous linear ODE with polynomial coefficients whose
//! fundamental solutions are `z^k e^{P0}` (equivalently: order d+1 for the
//! primitives `1, F_0, ..., F_{d-1}`).
//!
//! Everything rests on the double sequence `y_{n,m}` built by the Pascal rule
//! with one derivative, `y_{n,m+1} = y_{n-1,m} + y'_{n,m}`; writing
//! `y_{n,m} = Q_{n,m} e^{P0}` turns it into the polynomial recurrence
//! `Q_{n,m+1} = Q_{n-1,m} + Q'_{n,m} + P0' Q_{n,m}`. Substituting the
//! candidate solutions yields a triangular system with unit diagonal, solved
//! by back-substitution without any linear algebra.
//!
//! This module accepts arbitrary (non-normalized) polynomials `P0`.

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::algebra::CPoly;
use crate::error::{Error, Result};

/// Table of the polynomials `Q_{n,m}` for `0 <= n <= m <= d`;
/// `Q_{n,m} = 0` outside that wedge and `Q_{n,n} = 1` on the diagonal.
#[derive(Clone, Debug)]
pub struct QTable {
    d: usize,
    // columns[m][n], n <= m
    columns: Vec<Vec<CPoly>>,
}

impl QTable {
    pub fn order(&self) -> usize {
        self.d
    }

    /// `Q_{n,m}`; zero outside the wedge.
    pub fn q(&self, n: usize, m: usize) -> CPoly {
        if m > self.d || n > m {
            return CPoly::zero();
        }
        self.columns[m][n].clone()
    }
}

/// Build the `Q_{n,m}` table for the given polynomial, up to column `d`.
pub fn q_table(p0_poly: &CPoly, d: usize) -> Result<QTable> {
    match p0_poly.degree() {
        Some(deg) if deg == d && d >= 1 => {}
        _ => {
            return Err(Error::InvalidInput(format!(
                "q_table needs deg(P0) = d >= 1, got degree {:?} with d = {d}",
                p0_poly.degree()
            )))
        }
    }
    let dp = p0_poly.derivative();
    let mut columns: Vec<Vec<CPoly>> = vec![vec![CPoly::one()]];
    for m in 0..d {
        let prev = &columns[m];
        let mut col = Vec::with_capacity(m + 2);
        for n in 0..=m + 1 {
            // Q_{n,m+1} = Q_{n-1,m} + Q'_{n,m} + P0' Q_{n,m}
            let mut entry = if n >= 1 && n - 1 < prev.len() {
                prev[n - 1].clone()
            } else {
                CPoly::zero()
            };
            if n < prev.len() {
                entry = &entry + &prev[n].derivative();
                entry = &entry + &(&dp * &prev[n]);
            }
            col.push(entry);
        }
        columns.push(col);
    }
    Ok(QTable { d, columns })
}

/// The constructed operator `y^{(d)} + b_{d-1} y^{(d-1)} + ... + b_0 y = 0`
/// together with the table it came from.
#[derive(Clone, Debug)]
pub struct OdeResult {
    pub p0_poly: CPoly,
    /// `b_0 .. b_{d-1}`.
    pub b: Vec<CPoly>,
    pub q_table: QTable,
}

impl OdeResult {
    pub fn order(&self) -> usize {
        self.b.len()
    }

    /// `y_k^{(l)} / e^{P0}` as a polynomial:
    /// `sum_{j<=min(k,l)} k!/(k-j)! z^{k-j} Q_{j,l}`.
    pub fn solution_derivative_factor(&self, k: usize, l: usize) -> CPoly {
        solution_derivative_factor(&self.q_table, k, l)
    }

    /// Relative coefficient norm of the operator applied to `z^k e^{P0}`,
    /// which is zero in exact arithmetic, for `k = 0..d`.
    pub fn residuals(&self) -> Vec<f64> {
        let d = self.order();
        (0..d)
            .map(|k| {
                let mut acc = self.solution_derivative_factor(k, d);
                let mut scale = acc.norm_inf();
                for (j, bj) in self.b.iter().enumerate() {
                    let term = bj * &self.solution_derivative_factor(k, j);
                    scale = scale.max(term.norm_inf());
                    acc = &acc + &term;
                }
                acc.norm_inf() / scale.max(1.0)
            })
            .collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "d": self.order(),
            "p0_poly": self.p0_poly.to_json(),
            "b": self.b.iter().map(CPoly::to_json).collect::<Vec<_>>(),
        })
    }
}

fn solution_derivative_factor(qt: &QTable, k: usize, l: usize) -> CPoly {
    let mut acc = CPoly::zero();
    let mut falling = 1.0f64;
    for j in 0..=k.min(l) {
        if j > 0 {
            falling *= (k - j + 1) as f64;
        }
        let term = &CPoly::monomial(k - j, Complex64::new(falling, 0.0)) * &qt.q(j, l);
        acc = &acc + &term;
    }
    acc
}

/// Solve the triangular system `b_j = -Q_{j,d} - sum_{i>j} b_i Q_{j,i}` for
/// the polynomial coefficients of the annihilating operator.
pub fn build_ode(p0_poly: &CPoly) -> Result<OdeResult> {
    let d = p0_poly
        .degree()
        .filter(|&deg| deg >= 1)
        .ok_or_else(|| Error::InvalidInput("build_ode needs deg(P0) >= 1".into()))?;
    let qt = q_table(p0_poly, d)?;
    let mut b = vec![CPoly::zero(); d];
    for j in (0..d).rev() {
        let mut acc = -&qt.q(j, d);
        for i in j + 1..d {
            acc = &acc - &(&b[i] * &qt.q(j, i));
        }
        b[j] = acc;
    }
    Ok(OdeResult {
        p0_poly: p0_poly.clone(),
        b,
        q_table: qt,
    })
}

/// Wronskian of the fundamental solutions `z^k e^{P0}`: symbolically it is
/// `c * e^{d P0}` for a constant `c`, reported here together with its
/// consistency across the sample points.
#[derive(Clone, Debug)]
pub struct WronskianReport {
    /// The constant factor `c` (constant term of the symbolic determinant).
    pub constant: Complex64,
    /// Relative size of any non-constant leftover in the symbolic determinant.
    pub nonconstant_rel: f64,
    /// Determinant evaluated at the sample points.
    pub sample_values: Vec<Complex64>,
    /// Max relative deviation of the sample values from `c`.
    pub max_rel_dev: f64,
}

impl WronskianReport {
    pub fn to_json(&self) -> Value {
        json!({
            "constant": [self.constant.re, self.constant.im],
            "nonconstant_rel": self.nonconstant_rel,
            "sample_values": self
                .sample_values
                .iter()
                .map(|c| json!([c.re, c.im]))
                .collect::<Vec<_>>(),
            "max_rel_dev": self.max_rel_dev,
        })
    }
}

/// Compute the Wronskian factor `det[ y_k^{(l)} / e^{P0} ]` symbolically and
/// verify it is one constant at every sample point.
pub fn wronskian_check(p0_poly: &CPoly, sample_points: &[Complex64]) -> Result<WronskianReport> {
    if sample_points.len() < 2 {
        return Err(Error::InvalidInput("wronskian_check needs at least 2 sample points".into()));
    }
    let d = p0_poly
        .degree()
        .filter(|&deg| deg >= 1)
        .ok_or_else(|| Error::InvalidInput("wronskian_check needs deg(P0) >= 1".into()))?;
    let qt = q_table(p0_poly, d)?;
    let rows: Vec<Vec<CPoly>> = (0..d)
        .map(|l| (0..d).map(|k| solution_derivative_factor(&qt, k, l)).collect())
        .collect();
    let det = poly_det(&rows);
    let constant = det.coeff(0);
    let nonconstant: f64 = det
        .coeffs()
        .iter()
        .skip(1)
        .map(|c| c.norm())
        .fold(0.0, f64::max);
    let sample_values: Vec<Complex64> = sample_points.iter().map(|&z| det.eval(z)).collect();
    let max_rel_dev = sample_values
        .iter()
        .map(|v| (v - constant).norm() / constant.norm().max(1e-300))
        .fold(0.0, f64::max);
    Ok(WronskianReport {
        constant,
        nonconstant_rel: nonconstant / constant.norm().max(1e-300),
        sample_values,
        max_rel_dev,
    })
}

/// Cofactor-expansion determinant of a small polynomial matrix.
fn poly_det(rows: &[Vec<CPoly>]) -> CPoly {
    let n = rows.len();
    if n == 0 {
        return CPoly::one();
    }
    if n == 1 {
        return rows[0][0].clone();
    }
    let mut acc = CPoly::zero();
    for (j, top) in rows[0].iter().enumerate() {
        if top.is_zero() {
            continue;
        }
        let minor: Vec<Vec<CPoly>> = rows[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter_map(|(c, p)| (c != j).then(|| p.clone()))
                    .collect()
            })
            .collect();
        let cofactor = &poly_det(&minor) * top;
        if j % 2 == 0 {
            acc = &acc + &cofactor;
        } else {
            acc = &acc - &cofactor;
        }
    }
    acc
}
