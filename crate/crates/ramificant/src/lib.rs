//! Exact-symbolic plus validated-numeric toolkit for the family of
//! transcendental integrals `F_k(z) = int_0^z t^k exp(P0(t)) dt`.
//!
//! For a degree-`d` polynomial `P0` normalized to leading coefficient `-1/d`,
//! the primitives `F_0 .. F_{d-1}` have `d` asymptotic values each along the
//! roots-of-unity directions: the exponential periods `Omega_{kl}`. The
//! toolkit computes, exactly where possible and with validated quadrature
//! elsewhere:
//!
//! * the universal polynomials `Pi_d` and the closed-form Ramificant
//!   determinant `Delta = Delta(0) exp(Pi_d(a))` ([`universal_pi`]);
//! * the reduction of any primitive `int Q e^{P0}` to the canonical basis
//!   ([`reduction`]);
//! * period matrices, determinant checks, coefficient recovery from periods
//!   and the period-map Jacobian ([`periods`]);
//! * integrability in finite terms, decided by exact algebra and by numeric
//!   periods in parallel ([`integrability`]);
//! * the annihilating linear ODE of the fundamental solutions ([`ode`]);
//! * adaptive complex-path quadrature with analytic ray-tail bounds
//!   ([`quadrature`]).

pub mod algebra;
pub mod error;
pub mod integrability;
pub mod linalg;
pub mod ode;
pub mod periods;
pub mod quadrature;
pub mod reduction;
pub mod selftest;
pub mod universal_pi;

pub use algebra::{BigRational, CPoly, Complex64, MultiPoly, NormalizedP0};
pub use error::{Error, Result};
pub use quadrature::{QuadConfig, Quadrature, RayIntegralSpec};
