//! Reduction of primitives `int_0^z Q(t) exp(P0(t)) dt` to the canonical
//! space `z C[z] e^{P0} (+) C*1 (+) C F_0 (+) ... (+) C F_{d-1}`, and the
//! exact remainder tables `A_{n,k}` of `z^n` modulo `z P0'`.
//!
//! The reduction runs repeated Euclidean division by `P0'` with integration
//! by parts, iterating on the quotient derivative, whose degree drops
//! strictly; the loop therefore ends after at most `deg Q` rounds.

use num_complex::Complex64;
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::algebra::{CPoly, MultiPoly, NormalizedP0};
use crate::error::{Error, Result};

/// Canonical decomposition of a primitive vanishing at the origin:
///
/// `F(z) = a0_poly(z) e^{P0(z)} + const_term + sum_k basis_coeffs[k] F_k(z)`.
#[derive(Clone, Debug)]
pub struct ReductionResult {
    /// Polynomial factor of `e^{P0}`; vanishes at 0 so the direct-sum
    /// decomposition is the unique one.
    pub a0_poly: CPoly,
    /// Coefficient of the constant function 1. Zero up to rounding for
    /// primitives based at the origin; kept because folding the constant part
    /// of the accumulated quotient through `e^{P0}` produces it transiently.
    pub const_term: Complex64,
    /// Coefficients `b_0..b_{d-1}` of `F_0..F_{d-1}`.
    pub basis_coeffs: Vec<Complex64>,
}

impl ReductionResult {
    /// Residual of the defining identity `A0' + A0 P0' + sum b_k z^k - q`,
    /// relative to `max(1, |q|_inf)`.
    pub fn derivative_residual(&self, p0: &NormalizedP0, q: &CPoly) -> f64 {
        let reconstructed = &(&self.a0_poly.derivative() + &(&self.a0_poly * &p0.derivative()))
            + &CPoly::from_coeffs(self.basis_coeffs.clone());
        (&reconstructed - q).norm_inf() / q.norm_inf().max(1.0)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "a0_poly": self.a0_poly.to_json(),
            "const_term": [self.const_term.re, self.const_term.im],
            "basis_coeffs": self.basis_coeffs.iter().map(|c| json!([c.re, c.im])).collect::<Vec<_>>(),
        })
    }
}

/// Reduce `int_0^z q(t) e^{P0(t)} dt` to its canonical decomposition.
///
/// Total over every polynomial `q`, including zero.
pub fn reduce_primitive(p0: &NormalizedP0, q: &CPoly) -> ReductionResult {
    let d = p0.degree();
    let dp = p0.derivative();
    let mut quotient_acc = CPoly::zero();
    let mut basis = vec![Complex64::new(0.0, 0.0); d];
    let mut current = q.clone();

    // Divide out P0' while the degree reaches d; each round replaces the
    // integrand polynomial by B - A' with strictly smaller degree.
    while current.degree().is_some_and(|deg| deg >= d) {
        let (a, b) = current
            .divmod(&dp)
            .expect("P0' has degree d-1 >= 0 and leading coefficient -1");
        quotient_acc = &quotient_acc + &a;
        current = &b - &a.derivative();
    }
    // What remains integrates directly to basis elements.
    for k in 0..d {
        basis[k] += current.coeff(k);
    }

    // The boundary terms of the divisions contribute -A(0) e^{P0(0)}.
    let alpha = quotient_acc.coeff(0);
    let exp_a0 = p0.a0().exp();
    let mut const_term = -alpha * exp_a0;

    // Fold the constant part of the quotient through
    // e^{P0} = e^{P0(0)} + a1 F0 + 2 a2 F1 + ... + (d-1) a_{d-1} F_{d-2} - F_{d-1}
    // so that the polynomial factor vanishes at the origin.
    if alpha != Complex64::new(0.0, 0.0) {
        const_term += alpha * exp_a0;
        let a = p0.lower_coeffs();
        for k in 0..d.saturating_sub(1) {
            basis[k] += alpha * a[k + 1] * (k + 1) as f64;
        }
        basis[d - 1] -= alpha;
    }
    let mut a0_coeffs: Vec<Complex64> = quotient_acc.coeffs().to_vec();
    if !a0_coeffs.is_empty() {
        a0_coeffs[0] = Complex64::new(0.0, 0.0);
    }

    ReductionResult {
        a0_poly: CPoly::from_coeffs(a0_coeffs),
        const_term,
        basis_coeffs: basis,
    }
}

/// Exact coefficients `A_{n,k}` of the remainder of `z^n` modulo `z P0'`,
/// as polynomials in the symbolic coefficients `X_0..X_{d-1}`:
///
/// `z^n = A_{n,d-1} z^{d-1} + ... + A_{n,1} z + A_{n,0}  [z P0']`.
#[derive(Clone, Debug)]
pub struct RemainderTable {
    d: usize,
    rows: Vec<Vec<MultiPoly>>,
}

impl RemainderTable {
    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn n_max(&self) -> usize {
        self.rows.len() - 1
    }

    /// `A_{n,k}`.
    pub fn entry(&self, n: usize, k: usize) -> &MultiPoly {
        &self.rows[n][k]
    }

    /// Evaluate row `n` at a numeric coefficient vector, returning the
    /// degree `< d` remainder polynomial.
    pub fn eval_row(&self, n: usize, a: &[Complex64]) -> CPoly {
        CPoly::from_coeffs(self.rows[n].iter().map(|p| p.eval_complex(a)).collect())
    }
}

/// Build rows `0..=n_max` of the remainder table by the induction
/// `A_{n+1,k} = (d-1) a_{d-1} A_{n,k} + (d-2) a_{d-2} A_{n-1,k} + ... + a_1 A_{n-d+2,k}`
/// over base rows `A_{n,k} = delta_{nk}` for `n <= d-1`.
pub fn remainder_table(d: usize, n_max: usize) -> Result<RemainderTable> {
    if d < 1 {
        return Err(Error::InvalidInput("remainder table needs d >= 1".into()));
    }
    if n_max < d {
        return Err(Error::InvalidInput(format!(
            "remainder table needs n_max >= d, got n_max={n_max}, d={d}"
        )));
    }
    let mut rows: Vec<Vec<MultiPoly>> = Vec::with_capacity(n_max + 1);
    for n in 0..d.min(n_max + 1) {
        rows.push(
            (0..d)
                .map(|k| {
                    if k == n {
                        MultiPoly::constant(d, BigRational::from_integer(1.into()))
                    } else {
                        MultiPoly::zero(d)
                    }
                })
                .collect(),
        );
    }
    for n in d..=n_max {
        // row n from rows n-1 down to n-d+1; for d = 1 the sum is empty and
        // every remainder above the base row is zero (z^n = -z^{n} P0' exactly).
        let mut row = vec![MultiPoly::zero(d); d];
        for j in 1..d {
            let scaled_var = MultiPoly::var(d, j)?.scale(&BigRational::from_integer(j.into()));
            let src = &rows[n - d + j];
            for (k, dst) in row.iter_mut().enumerate() {
                if !src[k].is_zero() {
                    *dst = dst.try_add(&scaled_var.try_mul(&src[k])?)?;
                }
            }
        }
        rows.push(row);
    }
    Ok(RemainderTable { d, rows })
}
