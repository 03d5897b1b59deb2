//! Univariate polynomials with complex double coefficients, ascending degree.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::error::{Error, Result};

/// Polynomial `c[0] + c[1] z + ... + c[n] z^n`.
///
/// The zero polynomial is the empty coefficient list; otherwise the leading
/// coefficient is nonzero.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct CPoly {
    coeffs: Vec<Complex64>,
}

impl CPoly {
    pub fn zero() -> Self {
        CPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    pub fn constant(c: Complex64) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c * z^k`.
    pub fn monomial(k: usize, c: Complex64) -> Self {
        if c == Complex64::new(0.0, 0.0) {
            return Self::zero();
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); k + 1];
        coeffs[k] = c;
        CPoly { coeffs }
    }

    /// Build from an ascending coefficient list, trimming exact trailing zeros.
    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Self {
        let mut p = CPoly { coeffs };
        p.trim();
        p
    }

    pub fn from_real_coeffs(coeffs: &[f64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    fn trim(&mut self) {
        while let Some(last) = self.coeffs.last() {
            if *last == Complex64::new(0.0, 0.0) {
                self.coeffs.pop();
            } else {
                break;
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    /// Coefficient of `z^k` (zero beyond the stored length).
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<Complex64> {
        self.coeffs.last().copied()
    }

    /// Max coefficient modulus.
    pub fn norm_inf(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Euclidean division: `self = q * den + r` with `deg r < deg den`.
    ///
    /// Uses the leading coefficient of `den` directly; callers guarantee a
    /// well-conditioned divisor.
    pub fn divmod(&self, den: &CPoly) -> Result<(CPoly, CPoly)> {
        let dd = den.degree().ok_or(Error::DivisionByZeroPoly)?;
        let lead = den.coeffs[dd];
        let nd = match self.degree() {
            None => return Ok((CPoly::zero(), CPoly::zero())),
            Some(nd) if nd < dd => return Ok((CPoly::zero(), self.clone())),
            Some(nd) => nd,
        };
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Complex64::new(0.0, 0.0); nd - dd + 1];
        for t in (dd..=nd).rev() {
            let factor = rem[t] / lead;
            quot[t - dd] = factor;
            if factor != Complex64::new(0.0, 0.0) {
                for j in 0..=dd {
                    rem[t - dd + j] -= factor * den.coeffs[j];
                }
            }
            rem[t] = Complex64::new(0.0, 0.0);
        }
        rem.truncate(dd);
        Ok((CPoly::from_coeffs(quot), CPoly::from_coeffs(rem)))
    }

    /// Serialize as `[[re, im], ...]` ascending degree.
    pub fn to_json(&self) -> Value {
        Value::Array(self.coeffs.iter().map(|c| json!([c.re, c.im])).collect())
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::InvalidInput("CPoly JSON must be an array of [re,im] pairs".into()))?;
        let mut coeffs = Vec::with_capacity(arr.len());
        for item in arr {
            coeffs.push(complex_from_json(item)?);
        }
        Ok(Self::from_coeffs(coeffs))
    }
}

/// Parse one `[re, im]` pair, rejecting non-finite components.
pub fn complex_from_json(v: &Value) -> Result<Complex64> {
    let pair = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| Error::InvalidInput("expected [re, im] pair".into()))?;
    let re = pair[0]
        .as_f64()
        .ok_or_else(|| Error::InvalidInput("re must be a number".into()))?;
    let im = pair[1]
        .as_f64()
        .ok_or_else(|| Error::InvalidInput("im must be a number".into()))?;
    if !re.is_finite() || !im.is_finite() {
        return Err(Error::InvalidInput("coefficients must be finite".into()));
    }
    Ok(Complex64::new(re, im))
}

impl Add for &CPoly {
    type Output = CPoly;
    fn add(self, rhs: &CPoly) -> CPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        CPoly::from_coeffs((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &CPoly {
    type Output = CPoly;
    fn sub(self, rhs: &CPoly) -> CPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        CPoly::from_coeffs((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &CPoly {
    type Output = CPoly;
    fn mul(self, rhs: &CPoly) -> CPoly {
        if self.is_zero() || rhs.is_zero() {
            return CPoly::zero();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        CPoly::from_coeffs(out)
    }
}

impl Neg for &CPoly {
    type Output = CPoly;
    fn neg(self) -> CPoly {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl fmt::Display for CPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if *c == Complex64::new(0.0, 0.0) {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*z")?,
                _ => write!(f, "({c})*z^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
