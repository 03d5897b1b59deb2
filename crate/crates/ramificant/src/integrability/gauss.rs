//! Exact decision path for `A P0' + A' = Q` over the Gaussian rationals.
//!
//! Every finite double is a dyadic rational, so complex-float inputs lift
//! exactly to `Q(i)` coefficients. The back-substitution divides only by the
//! leading coefficient of `P0'`, which is exactly -1, so the whole solve stays
//! in the ring and solvability is decided by an exact zero test on the
//! residual.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

use crate::algebra::{CPoly, NormalizedP0};
use crate::algebra::rational;

/// Complex number with rational real and imaginary parts.
#[derive(Clone, PartialEq, Eq, Debug)]
struct GaussRat {
    re: BigRational,
    im: BigRational,
}

impl GaussRat {
    fn zero() -> Self {
        GaussRat {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn from_c64(c: Complex64) -> Option<Self> {
        Some(GaussRat {
            re: BigRational::from_float(c.re)?,
            im: BigRational::from_float(c.im)?,
        })
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(rational::to_f64(&self.re), rational::to_f64(&self.im))
    }

    fn add(&self, o: &Self) -> Self {
        GaussRat {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }

    fn sub(&self, o: &Self) -> Self {
        GaussRat {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }

    fn mul(&self, o: &Self) -> Self {
        GaussRat {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    fn neg(&self) -> Self {
        GaussRat {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }

    fn scale_int(&self, n: i64) -> Self {
        let f = BigRational::from_integer(n.into());
        GaussRat {
            re: &self.re * &f,
            im: &self.im * &f,
        }
    }
}

/// Ascending coefficient list, exact trailing zeros trimmed.
type GPoly = Vec<GaussRat>;

fn trim(p: &mut GPoly) {
    while p.last().is_some_and(GaussRat::is_zero) {
        p.pop();
    }
}

fn coeff(p: &GPoly, k: usize) -> GaussRat {
    p.get(k).cloned().unwrap_or_else(GaussRat::zero)
}

fn derivative(p: &GPoly) -> GPoly {
    let mut out: GPoly = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c.scale_int(k as i64))
        .collect();
    trim(&mut out);
    out
}

fn mul(a: &GPoly, b: &GPoly) -> GPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![GaussRat::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        for (j, cb) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&ca.mul(cb));
        }
    }
    trim(&mut out);
    out
}

fn add(a: &GPoly, b: &GPoly) -> GPoly {
    let n = a.len().max(b.len());
    let mut out: GPoly = (0..n).map(|k| coeff(a, k).add(&coeff(b, k))).collect();
    trim(&mut out);
    out
}

fn lift_cpoly(p: &CPoly) -> Option<GPoly> {
    let mut out = Vec::with_capacity(p.coeffs().len());
    for &c in p.coeffs() {
        out.push(GaussRat::from_c64(c)?);
    }
    trim(&mut out);
    Some(out)
}

/// Exact `P0'`: `-z^{d-1} + sum_{j>=1} j a_j z^{j-1}` with dyadic `a_j`.
fn lift_dp(p0: &NormalizedP0) -> Option<GPoly> {
    let d = p0.degree();
    let mut out = vec![GaussRat::zero(); d];
    for j in 1..d {
        out[j - 1] = GaussRat::from_c64(p0.lower_coeffs()[j])?.scale_int(j as i64);
    }
    out[d - 1] = GaussRat {
        re: BigRational::from_integer((-1).into()),
        im: BigRational::zero(),
    };
    Some(out)
}

/// Decide solvability of `A P0' + A' = Q` exactly over `Q(i)`, treating the
/// complex-double inputs as the dyadic rationals they are. Returns the exact
/// solution embedded back into doubles, or `None` when no polynomial solution
/// exists.
pub fn solve_finite_terms_exact(p0: &NormalizedP0, q: &CPoly) -> Option<CPoly> {
    let d = p0.degree();
    let dp = lift_dp(p0)?;
    let qq = lift_cpoly(q)?;
    if qq.is_empty() {
        return Some(CPoly::zero());
    }
    let m = qq.len() - 1;
    let alpha: GPoly = if d == 1 {
        // P0' = -1: alpha_j = (j+1) alpha_{j+1} - q_j
        let mut alpha = vec![GaussRat::zero(); m + 1];
        for j in (0..=m).rev() {
            let higher = if j + 1 <= m {
                alpha[j + 1].scale_int(j as i64 + 1)
            } else {
                GaussRat::zero()
            };
            alpha[j] = higher.sub(&coeff(&qq, j));
        }
        alpha
    } else {
        if m < d - 1 {
            return None;
        }
        let n = m - (d - 1);
        let mut alpha = vec![GaussRat::zero(); n + 1];
        for s in (d - 1..=m).rev() {
            let i = s - (d - 1);
            if i > n {
                continue;
            }
            let mut acc = GaussRat::zero();
            for (t, at) in alpha.iter().enumerate().take(n.min(s) + 1).skip(i + 1) {
                acc = acc.add(&at.mul(&coeff(&dp, s - t)));
            }
            if s + 1 <= n {
                acc = acc.add(&alpha[s + 1].scale_int(s as i64 + 1));
            }
            // leading coefficient is exactly -1
            alpha[i] = coeff(&qq, s).sub(&acc).neg();
        }
        alpha
    };
    // exact residual test
    let reconstructed = add(&mul(&alpha, &dp), &derivative(&alpha));
    let n = reconstructed.len().max(qq.len());
    for k in 0..n {
        if coeff(&reconstructed, k) != coeff(&qq, k) {
            return None;
        }
    }
    let mut a = alpha;
    trim(&mut a);
    Some(CPoly::from_coeffs(a.iter().map(GaussRat::to_c64).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrability::solve_finite_terms;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn exact_positive_instance_with_dyadic_data() {
        // dyadic coefficients keep the float construction of q exact,
        // so the lifted problem is solvable on the nose
        let p0 = NormalizedP0::new(3, vec![c(0.25, -0.5), c(0.5, 0.125), c(-0.75, 0.25)]).unwrap();
        let a_true = CPoly::from_coeffs(vec![c(0.5, 0.0), c(-0.25, 0.125), c(1.0, -0.5)]);
        let q = &(&a_true * &p0.derivative()) + &a_true.derivative();
        let a = solve_finite_terms_exact(&p0, &q).expect("dyadic instance must solve exactly");
        assert_eq!(a, a_true);
    }

    #[test]
    fn exact_negative_instance() {
        let p0 = NormalizedP0::from_real(2, &[0.25, 0.5]).unwrap();
        assert!(solve_finite_terms_exact(&p0, &CPoly::one()).is_none());
    }

    #[test]
    fn exact_path_rejects_what_floats_accept() {
        // perturb an integrable q by one representable ulp-scale nudge: the
        // float branch stays within its residual tolerance, the exact branch
        // sees a nonzero residual and says no
        let p0 = NormalizedP0::from_real(2, &[0.25, 0.5]).unwrap();
        let q = p0.derivative();
        let perturbed = &q + &CPoly::constant(c(1e-16, 0.0));
        assert!(perturbed != q, "perturbation must survive rounding");
        assert!(solve_finite_terms(&p0, &perturbed).is_some());
        assert!(solve_finite_terms_exact(&p0, &perturbed).is_none());
        assert!(solve_finite_terms_exact(&p0, &q).is_some());
    }

    #[test]
    fn exact_d1_total() {
        let p0 = NormalizedP0::from_real(1, &[0.5]).unwrap();
        let q = CPoly::from_coeffs(vec![c(1.0, 0.5), c(-2.0, 0.25), c(0.5, 0.0)]);
        let a = solve_finite_terms_exact(&p0, &q).unwrap();
        // verify the defining identity in floats (inputs dyadic, so exact)
        let resid = &(&(&a * &p0.derivative()) + &a.derivative()) - &q;
        assert!(resid.is_zero());
    }

    #[test]
    fn zero_q() {
        let p0 = NormalizedP0::from_real(2, &[0.1, 0.2]).unwrap();
        assert_eq!(solve_finite_terms_exact(&p0, &CPoly::zero()).unwrap(), CPoly::zero());
    }
}
