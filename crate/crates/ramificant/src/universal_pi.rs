//! Exact computation of the universal polynomials `Pi_d` and the closed-form
//! Ramificant value `Delta(0) * exp(Pi_d(a))`.
//!
//! The gradient components come from the remainder tables; `Pi_d` itself is
//! recovered by Euler integration of the exact form: each total-degree-`g`
//! homogeneous component of `sum_k X_k c_k` equals `g` times the matching
//! component of `Pi_d`, so one exact rational division per degree suffices.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_complex::Complex64;
use num_rational::BigRational;

use crate::algebra::{MultiPoly, NormalizedP0};
use crate::error::{Error, Result};
use crate::reduction::remainder_table;

/// `Pi_d` with the gradient components it was integrated from.
#[derive(Clone, Debug)]
pub struct PiResult {
    pub d: usize,
    /// The universal polynomial; no constant term.
    pub pi: MultiPoly,
    /// `c_0..c_{d-1}` with `d(log Delta)/d a_k = c_k`.
    pub gradient: Vec<MultiPoly>,
}

/// Gradient components of `log Delta` as exact polynomials.
///
/// `c_0` is the constant `d` (the `a_0` dependence factors out of every
/// period); for `k >= 1` the component is the `k`-term diagonal sum
/// `A_{d-1+k,d-1} + A_{d-2+k,d-2} + ... + A_{d,d-k}` over the remainder table.
pub fn pi_gradient(d: usize) -> Result<Vec<MultiPoly>> {
    if d < 1 {
        return Err(Error::InvalidInput("pi_gradient needs d >= 1".into()));
    }
    let mut grads = Vec::with_capacity(d);
    grads.push(MultiPoly::constant_i64(d, d as i64));
    if d >= 2 {
        let table = remainder_table(d, 2 * d - 2)?;
        for k in 1..d {
            let mut sum = MultiPoly::zero(d);
            for i in 0..k {
                sum = sum.try_add(table.entry(d - 1 + k - i, d - 1 - i))?;
            }
            grads.push(sum);
        }
    }
    Ok(grads)
}

fn build_pi(d: usize) -> Result<PiResult> {
    let gradient = pi_gradient(d)?;
    // the produced gradient must be an exact form
    for j in 0..d {
        for k in j + 1..d {
            if gradient[k].partial(j)? != gradient[j].partial(k)? {
                return Err(Error::ExactnessViolation { j, k });
            }
        }
    }
    let mut weighted = MultiPoly::zero(d);
    for (k, c) in gradient.iter().enumerate() {
        weighted = weighted.try_add(&MultiPoly::var(d, k)?.try_mul(c)?)?;
    }
    let mut pi = MultiPoly::zero(d);
    for g in 1..=weighted.total_degree() {
        let component = weighted.homogeneous_component(g);
        pi = pi.try_add(&component.scale(&BigRational::new(1.into(), g.into())))?;
    }
    // gradient fidelity; failure here means the Euler step is broken
    for (k, c) in gradient.iter().enumerate() {
        if &pi.partial(k)? != c {
            return Err(Error::ExactnessViolation { j: k, k });
        }
    }
    Ok(PiResult { d, pi, gradient })
}

fn cache() -> &'static RwLock<HashMap<usize, Arc<PiResult>>> {
    static CACHE: OnceLock<RwLock<HashMap<usize, Arc<PiResult>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// The unique polynomial with zero constant term whose gradient is
/// [`pi_gradient`]. Results are cached per degree; the cache is safe for
/// concurrent readers.
pub fn pi_polynomial(d: usize) -> Result<Arc<PiResult>> {
    if let Some(hit) = cache().read().expect("pi cache poisoned").get(&d) {
        return Ok(hit.clone());
    }
    let built = Arc::new(build_pi(d)?);
    cache()
        .write()
        .expect("pi cache poisoned")
        .entry(d)
        .or_insert_with(|| built.clone());
    Ok(built)
}

/// `Delta(0, ..., 0)` in two readings.
#[derive(Clone, Copy, Debug)]
pub struct DeltaZero {
    /// Assembled from the gamma-product prefactor times the directly computed
    /// Vandermonde determinant of the roots of unity. This is the value the
    /// quadrature oracle confirms.
    pub value: Complex64,
    /// The simplified constant `(2 pi d)^{d/2} / sqrt(2 pi)`, which reads the
    /// Vandermonde as the full product over ordered pairs; kept as a
    /// diagnostic because it differs from `value` by a factor of modulus
    /// `d^{d/2}`.
    pub simplified: f64,
}

/// `Delta(0)`: the prefactor `(2 pi / d)^{d/2} / sqrt(2 pi)` from the
/// gamma-function product, times `(-1)^{d-1}` times the Vandermonde
/// determinant `prod_{i<j} (omega_j - omega_i)` of the `d`-th roots of unity.
pub fn delta_zero(d: usize) -> DeltaZero {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut vandermonde = Complex64::new(1.0, 0.0);
    for i in 1..=d {
        for j in i + 1..=d {
            vandermonde *= crate::quadrature::root_of_unity(d, j) - crate::quadrature::root_of_unity(d, i);
        }
    }
    let sign = if d % 2 == 0 { -1.0 } else { 1.0 };
    let prefactor = (two_pi / d as f64).powf(d as f64 / 2.0) / two_pi.sqrt();
    DeltaZero {
        value: vandermonde * (sign * prefactor),
        simplified: (two_pi * d as f64).powf(d as f64 / 2.0) / two_pi.sqrt(),
    }
}

/// Closed-form Ramificant determinant `Delta(0) * exp(Pi_d(a))`.
pub fn delta_closed_form(p0: &NormalizedP0) -> Result<Complex64> {
    let d = p0.degree();
    let pi = pi_polynomial(d)?;
    let exponent = pi.pi.eval_complex(p0.lower_coeffs());
    // exp overflows doubles past ~709.78
    if exponent.re > 709.0 {
        return Err(Error::ExpOverflow { exponent: exponent.re });
    }
    Ok(delta_zero(d).value * exponent.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn rat(n: i64, den: i64) -> BigRational {
        BigRational::new(n.into(), den.into())
    }

    fn x(d: usize, i: usize) -> MultiPoly {
        MultiPoly::var(d, i).unwrap()
    }

    fn xpow(d: usize, i: usize, e: u32) -> MultiPoly {
        let mut p = MultiPoly::constant_i64(d, 1);
        for _ in 0..e {
            p = p.try_mul(&x(d, i)).unwrap();
        }
        p
    }

    // ---- gradients ----

    #[test]
    fn gradient_d2() {
        let g = pi_gradient(2).unwrap();
        assert_eq!(g[0], MultiPoly::constant_i64(2, 2));
        assert_eq!(g[1], x(2, 1));
    }

    #[test]
    fn gradient_first_component_general() {
        // c_1 = (d-1) X_{d-1} for every d >= 2
        for d in 2..=6usize {
            let g = pi_gradient(d).unwrap();
            assert_eq!(g[1], x(d, d - 1).scale(&rat(d as i64 - 1, 1)), "d={d}");
        }
    }

    #[test]
    fn gradient_d3_second_component() {
        // c_2 = 2 X1 + 4 X2^2
        let g = pi_gradient(3).unwrap();
        let expect = x(3, 1)
            .scale(&rat(2, 1))
            .try_add(&xpow(3, 2, 2).scale(&rat(4, 1)))
            .unwrap();
        assert_eq!(g[2], expect);
    }

    // ---- Pi_d ----

    #[test]
    fn pi_1_through_3_exact() {
        let p1 = pi_polynomial(1).unwrap();
        assert_eq!(p1.pi, x(1, 0));

        let p2 = pi_polynomial(2).unwrap();
        let expect2 = x(2, 0)
            .scale(&rat(2, 1))
            .try_add(&xpow(2, 1, 2).scale(&rat(1, 2)))
            .unwrap();
        assert_eq!(p2.pi, expect2);

        let p3 = pi_polynomial(3).unwrap();
        let expect3 = x(3, 0)
            .scale(&rat(3, 1))
            .try_add(&x(3, 1).try_mul(&x(3, 2)).unwrap().scale(&rat(2, 1)))
            .unwrap()
            .try_add(&xpow(3, 2, 3).scale(&rat(4, 3)))
            .unwrap();
        assert_eq!(p3.pi, expect3);
    }

    #[test]
    fn pi_4_named_terms_and_pure_top_variable_residual() {
        use crate::algebra::Monomial;
        let p4 = pi_polynomial(4).unwrap();
        // 4 X0 + 3 X3 X1 + 2 X2^2 + 9 X3^2 X2 + pure-X3 remainder
        assert_eq!(p4.pi.coefficient(&Monomial(vec![1, 0, 0, 0])), rat(4, 1));
        assert_eq!(p4.pi.coefficient(&Monomial(vec![0, 1, 0, 1])), rat(3, 1));
        assert_eq!(p4.pi.coefficient(&Monomial(vec![0, 0, 2, 0])), rat(2, 1));
        assert_eq!(p4.pi.coefficient(&Monomial(vec![0, 0, 1, 2])), rat(9, 1));
        // everything else only involves X3
        for (mono, _) in p4.pi.terms() {
            let named = [
                Monomial(vec![1, 0, 0, 0]),
                Monomial(vec![0, 1, 0, 1]),
                Monomial(vec![0, 0, 2, 0]),
                Monomial(vec![0, 0, 1, 2]),
            ];
            if !named.contains(mono) {
                assert!(
                    mono.0[0] == 0 && mono.0[1] == 0 && mono.0[2] == 0,
                    "unexpected mixed term {mono:?}"
                );
            }
        }
    }

    #[test]
    fn pi_normalization_and_low_variable_linearity() {
        for d in 1..=6usize {
            let p = pi_polynomial(d).unwrap();
            assert!(p.pi.constant_term().is_zero(), "d={d}: constant term");
            for k in 0..d {
                if (k as f64) < d as f64 / 2.0 {
                    assert!(p.pi.degree_in(k) <= 1, "d={d}, k={k}: degree {}", p.pi.degree_in(k));
                }
            }
        }
    }

    #[test]
    fn gradient_exactness_and_fidelity_up_to_6() {
        // pi_polynomial verifies both internally; also re-check here explicitly.
        for d in 1..=6usize {
            let p = pi_polynomial(d).unwrap();
            for j in 0..d {
                for k in 0..d {
                    assert_eq!(
                        p.gradient[k].partial(j).unwrap(),
                        p.gradient[j].partial(k).unwrap(),
                        "d={d}: mixed partials ({j},{k})"
                    );
                }
                assert_eq!(p.pi.partial(j).unwrap(), p.gradient[j], "d={d}: fidelity at {j}");
            }
        }
    }

    #[test]
    fn cache_returns_shared_result() {
        let a = pi_polynomial(3).unwrap();
        let b = pi_polynomial(3).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
    }

    // ---- Delta(0) and the closed form ----

    #[test]
    fn delta_zero_small_degrees() {
        let d1 = delta_zero(1);
        assert!((d1.value - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        assert!((d1.simplified - 1.0).abs() < 1e-14);

        // d = 2: sqrt(2 pi), while the simplified reading gives twice that
        let d2 = delta_zero(2);
        let sqrt_two_pi = (2.0 * std::f64::consts::PI).sqrt();
        assert!((d2.value - Complex64::new(sqrt_two_pi, 0.0)).norm() < 1e-13);
        assert!((d2.simplified - 2.0 * sqrt_two_pi).abs() < 1e-12);
    }

    #[test]
    fn delta_zero_reading_ratio_is_d_to_the_d_over_2() {
        for d in 1..=5usize {
            let dz = delta_zero(d);
            let ratio = dz.simplified / dz.value.norm();
            assert!(
                (ratio - (d as f64).powf(d as f64 / 2.0)).abs() < 1e-9,
                "d={d}: ratio {ratio}"
            );
        }
    }

    #[test]
    fn closed_form_d1() {
        let p0 = NormalizedP0::from_real(1, &[0.0]).unwrap();
        assert!((delta_closed_form(&p0).unwrap() - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        let a0 = Complex64::new(0.42, -1.3);
        let p0 = NormalizedP0::new(1, vec![a0]).unwrap();
        assert!((delta_closed_form(&p0).unwrap() - a0.exp()).norm() < 1e-13);
    }

    #[test]
    fn closed_form_overflow_reported() {
        let p0 = NormalizedP0::from_real(1, &[800.0]).unwrap();
        assert!(matches!(
            delta_closed_form(&p0),
            Err(Error::ExpOverflow { exponent }) if exponent > 709.0
        ));
    }
}
