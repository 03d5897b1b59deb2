//! Degree-`d` polynomials normalized to leading coefficient `-1/d`.

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::algebra::cpoly::{complex_from_json, CPoly};
use crate::error::{Error, Result};

/// `P0(z) = -(1/d) z^d + a[d-1] z^{d-1} + ... + a[1] z + a[0]`.
///
/// The leading coefficient is implied, never stored. With this normalization
/// the `d`-th roots of unity are the decay directions of `exp(P0)`.
#[derive(Clone, PartialEq, Debug)]
pub struct NormalizedP0 {
    d: usize,
    a: Vec<Complex64>,
}

impl NormalizedP0 {
    pub fn new(d: usize, a: Vec<Complex64>) -> Result<Self> {
        if d < 1 {
            return Err(Error::InvalidInput("degree d must be >= 1".into()));
        }
        if a.len() != d {
            return Err(Error::InvalidInput(format!(
                "expected {} coefficients a0..a{}, got {}",
                d,
                d - 1,
                a.len()
            )));
        }
        if a.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidInput("coefficients must be finite".into()));
        }
        Ok(NormalizedP0 { d, a })
    }

    /// Convenience constructor from real lower coefficients.
    pub fn from_real(d: usize, a: &[f64]) -> Result<Self> {
        Self::new(d, a.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    /// Lower coefficients `a0..a_{d-1}`.
    pub fn lower_coeffs(&self) -> &[Complex64] {
        &self.a
    }

    pub fn a0(&self) -> Complex64 {
        self.a[0]
    }

    /// The full polynomial including the implied `-1/d` leading term.
    pub fn to_cpoly(&self) -> CPoly {
        let mut coeffs = self.a.clone();
        coeffs.push(Complex64::new(-1.0 / self.d as f64, 0.0));
        CPoly::from_coeffs(coeffs)
    }

    /// `P0'(z) = -z^{d-1} + sum_{j>=1} j a_j z^{j-1}`; leading coefficient is
    /// exactly `-1`.
    pub fn derivative(&self) -> CPoly {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); self.d];
        for j in 1..self.d {
            coeffs[j - 1] = self.a[j] * j as f64;
        }
        coeffs[self.d - 1] = Complex64::new(-1.0, 0.0);
        CPoly::from_coeffs(coeffs)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.to_cpoly().eval(z)
    }

    /// Serialize as `{"d": d, "a": [[re, im], ...]}`.
    pub fn to_json(&self) -> Value {
        json!({
            "d": self.d,
            "a": self.a.iter().map(|c| json!([c.re, c.im])).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let d = v
            .get("d")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::InvalidInput("NormalizedP0 JSON needs integer \"d\"".into()))?
            as usize;
        let arr = v
            .get("a")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::InvalidInput("NormalizedP0 JSON needs array \"a\"".into()))?;
        let mut a = Vec::with_capacity(arr.len());
        for item in arr {
            a.push(complex_from_json(item)?);
        }
        Self::new(d, a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_has_unit_leading() {
        let p0 = NormalizedP0::from_real(3, &[0.1, 0.2, 0.3]).unwrap();
        let dp = p0.derivative();
        assert_eq!(dp.degree(), Some(2));
        assert_eq!(dp.leading().unwrap(), Complex64::new(-1.0, 0.0));
        // -z^2 + 2*0.3 z + 0.2
        assert!((dp.coeff(0) - Complex64::new(0.2, 0.0)).norm() < 1e-15);
        assert!((dp.coeff(1) - Complex64::new(0.6, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn d1_derivative_is_minus_one() {
        let p0 = NormalizedP0::from_real(1, &[0.5]).unwrap();
        assert_eq!(p0.derivative(), CPoly::constant(Complex64::new(-1.0, 0.0)));
    }

    #[test]
    fn eval_matches_full_poly() {
        let p0 = NormalizedP0::from_real(2, &[0.1, 0.3]).unwrap();
        let z = Complex64::new(0.7, -0.4);
        let direct = -0.5 * z * z + 0.3 * z + 0.1;
        assert!((p0.eval(z) - direct).norm() < 1e-15);
    }

    #[test]
    fn json_roundtrip_and_validation() {
        let p0 = NormalizedP0::new(2, vec![Complex64::new(0.1, -0.2), Complex64::new(0.3, 0.4)]).unwrap();
        let q = NormalizedP0::from_json(&p0.to_json()).unwrap();
        assert_eq!(p0, q);
        assert!(NormalizedP0::new(0, vec![]).is_err());
        assert!(NormalizedP0::new(2, vec![Complex64::new(0.0, 0.0)]).is_err());
    }
}
