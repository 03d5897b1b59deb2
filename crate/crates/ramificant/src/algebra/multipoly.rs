//! Sparse multivariate polynomials over `BigRational` in variables `X0..X{d-1}`.
//!
//! Terms live in a `BTreeMap` keyed by graded-lexicographic monomial order, so
//! iteration (and therefore serialization) is canonical byte-for-byte.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::algebra::rational;
use crate::error::{Error, Result};

/// Exponent vector of a single term; one entry per variable.
///
/// Ordered graded-lexicographically: first by total degree, then
/// lexicographically on the exponents.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn constant(num_vars: usize) -> Self {
        Monomial(vec![0; num_vars])
    }

    pub fn var(num_vars: usize, index: usize) -> Self {
        let mut e = vec![0; num_vars];
        e[index] = 1;
        Monomial(e)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Multivariate polynomial with exact rational coefficients.
///
/// Invariants: no stored zero coefficients; every exponent vector has length
/// `num_vars`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultiPoly {
    num_vars: usize,
    terms: BTreeMap<Monomial, BigRational>,
}

impl MultiPoly {
    pub fn zero(num_vars: usize) -> Self {
        MultiPoly {
            num_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(num_vars: usize, c: BigRational) -> Self {
        let mut p = Self::zero(num_vars);
        if !c.is_zero() {
            p.terms.insert(Monomial::constant(num_vars), c);
        }
        p
    }

    pub fn constant_i64(num_vars: usize, c: i64) -> Self {
        Self::constant(num_vars, BigRational::from_integer(c.into()))
    }

    /// The variable `X_index`.
    pub fn var(num_vars: usize, index: usize) -> Result<Self> {
        if index >= num_vars {
            return Err(Error::VarIndexOutOfRange { index, num_vars });
        }
        let mut p = Self::zero(num_vars);
        p.terms.insert(Monomial::var(num_vars, index), BigRational::one());
        Ok(p)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, mono: &Monomial) -> BigRational {
        self.terms.get(mono).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Constant term (coefficient of the all-zero monomial).
    pub fn constant_term(&self) -> BigRational {
        self.coefficient(&Monomial::constant(self.num_vars))
    }

    fn insert_term(&mut self, mono: Monomial, coef: BigRational) {
        if coef.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(mono) {
            Entry::Vacant(v) => {
                v.insert(coef);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + coef;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.num_vars != other.num_vars {
            return Err(Error::MismatchedVars {
                left: self.num_vars,
                right: other.num_vars,
            });
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale(&BigRational::from_integer((-1).into())))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.num_vars != other.num_vars {
            return Err(Error::MismatchedVars {
                left: self.num_vars,
                right: other.num_vars,
            });
        }
        let mut out = Self::zero(self.num_vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.insert_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    /// Multiply every coefficient by the scalar `s`.
    pub fn scale(&self, s: &BigRational) -> Self {
        if s.is_zero() {
            return Self::zero(self.num_vars);
        }
        let mut out = Self::zero(self.num_vars);
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), c * s);
        }
        out
    }

    /// Exact partial derivative with respect to `X_index`.
    pub fn partial(&self, index: usize) -> Result<Self> {
        if index >= self.num_vars {
            return Err(Error::VarIndexOutOfRange {
                index,
                num_vars: self.num_vars,
            });
        }
        let mut out = Self::zero(self.num_vars);
        for (m, c) in &self.terms {
            let e = m.0[index];
            if e == 0 {
                continue;
            }
            let mut me = m.clone();
            me.0[index] = e - 1;
            out.insert_term(me, c * BigRational::from_integer(e.into()));
        }
        Ok(out)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::total_degree).max().unwrap_or(0)
    }

    /// Largest exponent of `X_index` over all terms.
    pub fn degree_in(&self, index: usize) -> u32 {
        self.terms.keys().map(|m| m.0[index]).max().unwrap_or(0)
    }

    /// The sum of the terms of total degree exactly `degree`.
    pub fn homogeneous_component(&self, degree: u32) -> Self {
        let mut out = Self::zero(self.num_vars);
        for (m, c) in &self.terms {
            if m.total_degree() == degree {
                out.terms.insert(m.clone(), c.clone());
            }
        }
        out
    }

    /// Evaluate at a complex point, embedding coefficients as doubles.
    pub fn eval_complex(&self, point: &[Complex64]) -> Complex64 {
        assert_eq!(point.len(), self.num_vars, "point dimension mismatch");
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut term = Complex64::new(rational::to_f64(c), 0.0);
            for (x, &e) in point.iter().zip(&m.0) {
                term *= x.powu(e);
            }
            acc += term;
        }
        acc
    }

    /// Serialize as a list of `{"exp": [...], "coef": "num/den"}` in graded-lex order.
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(m, c)| json!({ "exp": m.0, "coef": rational::to_string(c) }))
            .collect();
        Value::Array(terms)
    }

    pub fn from_json(num_vars: usize, v: &Value) -> Result<Self> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::InvalidInput("MultiPoly JSON must be an array".into()))?;
        let mut p = Self::zero(num_vars);
        for item in arr {
            let exp = item
                .get("exp")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::InvalidInput("term missing \"exp\" array".into()))?;
            if exp.len() != num_vars {
                return Err(Error::InvalidInput(format!(
                    "exponent vector length {} does not match num_vars {}",
                    exp.len(),
                    num_vars
                )));
            }
            let mut e = Vec::with_capacity(num_vars);
            for x in exp {
                let n = x
                    .as_u64()
                    .ok_or_else(|| Error::InvalidInput("exponents must be nonnegative integers".into()))?;
                e.push(n as u32);
            }
            let coef = item
                .get("coef")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::InvalidInput("term missing \"coef\" string".into()))?;
            p.insert_term(Monomial(e), rational::parse(coef)?);
        }
        Ok(p)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if m.total_degree() == 0 {
                write!(f, "{c}")?;
                continue;
            }
            if !c.is_one() {
                write!(f, "{c}*")?;
            }
            let mut started = false;
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if started {
                    write!(f, "*")?;
                }
                started = true;
                if e == 1 {
                    write!(f, "X{i}")?;
                } else {
                    write!(f, "X{i}^{e}")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn x(num_vars: usize, i: usize) -> MultiPoly {
        MultiPoly::var(num_vars, i).unwrap()
    }

    #[test]
    fn monomial_product() {
        // X0 * X0 = X0^2
        let p = x(1, 0).try_mul(&x(1, 0)).unwrap();
        assert_eq!(p.degree_in(0), 2);
        assert_eq!(p.num_terms(), 1);
        assert_eq!(p.coefficient(&Monomial(vec![2])), rat(1, 1));
    }

    #[test]
    fn additive_inverse_gives_empty_map() {
        // 2*X0 + (-2*X0) = 0
        let two_x0 = x(1, 0).scale(&rat(2, 1));
        let sum = two_x0.try_add(&two_x0.scale(&rat(-1, 1))).unwrap();
        assert!(sum.is_zero());
        assert_eq!(sum.num_terms(), 0);
    }

    #[test]
    fn scalar_distributes() {
        // (X1 + 1/2 X2) * 2 = 2 X1 + X2
        let p = x(3, 1).try_add(&x(3, 2).scale(&rat(1, 2))).unwrap();
        let q = p.scale(&rat(2, 1));
        assert_eq!(q.coefficient(&Monomial(vec![0, 1, 0])), rat(2, 1));
        assert_eq!(q.coefficient(&Monomial(vec![0, 0, 1])), rat(1, 1));
    }

    #[test]
    fn partial_of_pi2_shape() {
        // d/dX1 (2 X0 + 1/2 X1^2) = X1
        let p = x(2, 0)
            .scale(&rat(2, 1))
            .try_add(&x(2, 1).try_mul(&x(2, 1)).unwrap().scale(&rat(1, 2)))
            .unwrap();
        let dp = p.partial(1).unwrap();
        assert_eq!(dp, x(2, 1));
    }

    #[test]
    fn partial_of_pi3_shape() {
        // d/dX2 (3 X0 + 2 X1 X2 + 4/3 X2^3) = 2 X1 + 4 X2^2
        let x0 = x(3, 0);
        let x1 = x(3, 1);
        let x2 = x(3, 2);
        let p = x0
            .scale(&rat(3, 1))
            .try_add(&x1.try_mul(&x2).unwrap().scale(&rat(2, 1)))
            .unwrap()
            .try_add(
                &x2.try_mul(&x2)
                    .unwrap()
                    .try_mul(&x2)
                    .unwrap()
                    .scale(&rat(4, 3)),
            )
            .unwrap();
        let dp = p.partial(2).unwrap();
        let expect = x1
            .scale(&rat(2, 1))
            .try_add(&x2.try_mul(&x2).unwrap().scale(&rat(4, 1)))
            .unwrap();
        assert_eq!(dp, expect);
    }

    #[test]
    fn partial_of_constant_is_zero() {
        let c = MultiPoly::constant(2, rat(5, 3));
        assert!(c.partial(0).unwrap().is_zero());
    }

    #[test]
    fn mismatched_vars_rejected() {
        assert!(matches!(
            x(2, 0).try_add(&x(3, 0)),
            Err(Error::MismatchedVars { .. })
        ));
        assert!(matches!(
            x(2, 1).partial(2),
            Err(Error::VarIndexOutOfRange { .. })
        ));
    }

    #[test]
    fn graded_lex_order_is_canonical() {
        // constant < X1 < X0 < X1^2 < X0 X1 < X0^2 in graded lex with X0 > X1.
        let mut monos = vec![
            Monomial(vec![2, 0]),
            Monomial(vec![0, 0]),
            Monomial(vec![1, 1]),
            Monomial(vec![0, 1]),
            Monomial(vec![1, 0]),
            Monomial(vec![0, 2]),
        ];
        monos.sort();
        let degrees: Vec<u32> = monos.iter().map(Monomial::total_degree).collect();
        assert_eq!(degrees, vec![0, 1, 1, 2, 2, 2]);
        assert_eq!(monos[1], Monomial(vec![0, 1]));
        assert_eq!(monos[2], Monomial(vec![1, 0]));
        assert_eq!(monos[3], Monomial(vec![0, 2]));
    }

    #[test]
    fn json_roundtrip() {
        let p = x(2, 0)
            .scale(&rat(2, 1))
            .try_add(&x(2, 1).try_mul(&x(2, 1)).unwrap().scale(&rat(1, 2)))
            .unwrap();
        let v = p.to_json();
        let q = MultiPoly::from_json(2, &v).unwrap();
        assert_eq!(p, q);
        // canonical order: serialize twice gives identical text
        assert_eq!(v.to_string(), q.to_json().to_string());
    }

    #[test]
    fn ring_axioms_randomized() {
        // associativity and distributivity on seeded random triples
        use rand::{rngs::StdRng, Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(42);
        let rand_poly = |rng: &mut StdRng| {
            let mut p = MultiPoly::zero(3);
            for _ in 0..rng.gen_range(1..6) {
                let mono = Monomial((0..3).map(|_| rng.gen_range(0..4u32)).collect());
                let coef = rat(rng.gen_range(-9..10), rng.gen_range(1..7));
                p = p
                    .try_add(&MultiPoly::constant(3, coef).try_mul(&{
                        let mut m = MultiPoly::constant_i64(3, 1);
                        for (i, &e) in mono.0.iter().enumerate() {
                            for _ in 0..e {
                                m = m.try_mul(&MultiPoly::var(3, i).unwrap()).unwrap();
                            }
                        }
                        m
                    }).unwrap())
                    .unwrap();
            }
            p
        };
        for _ in 0..20 {
            let a = rand_poly(&mut rng);
            let b = rand_poly(&mut rng);
            let c = rand_poly(&mut rng);
            let ab_c = a.try_mul(&b).unwrap().try_mul(&c).unwrap();
            let a_bc = a.try_mul(&b.try_mul(&c).unwrap()).unwrap();
            assert_eq!(ab_c, a_bc);
            let a_bpc = a.try_mul(&b.try_add(&c).unwrap()).unwrap();
            let ab_pac = a.try_mul(&b).unwrap().try_add(&a.try_mul(&c).unwrap()).unwrap();
            assert_eq!(a_bpc, ab_pac);
        }
    }

    #[test]
    fn partials_commute_randomized() {
        use rand::{rngs::StdRng, Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..20 {
            let mut p = MultiPoly::zero(4);
            for _ in 0..8 {
                let mono = Monomial((0..4).map(|_| rng.gen_range(0..5u32)).collect());
                let mut t = MultiPoly::constant(4, rat(rng.gen_range(-5..6), 1 + rng.gen_range(0..4)));
                for (i, &e) in mono.0.iter().enumerate() {
                    for _ in 0..e {
                        t = t.try_mul(&MultiPoly::var(4, i).unwrap()).unwrap();
                    }
                }
                p = p.try_add(&t).unwrap();
            }
            for j in 0..4 {
                for k in 0..4 {
                    let jk = p.partial(j).unwrap().partial(k).unwrap();
                    let kj = p.partial(k).unwrap().partial(j).unwrap();
                    assert_eq!(jk, kj);
                }
            }
        }
    }
}
