//! Exact scalars and the two polynomial rings everything else builds on:
//! multivariate polynomials over arbitrary-precision rationals and univariate
//! polynomials over complex doubles.
//!
//! Exactness lives entirely in [`BigRational`]/[`MultiPoly`]; the complex
//! layer is double precision because the periods it feeds are transcendental.

mod cpoly;
mod multipoly;
mod normalized;
pub mod rational;

pub use cpoly::{complex_from_json, CPoly};
pub use multipoly::{Monomial, MultiPoly};
pub use normalized::NormalizedP0;

pub use num_complex::Complex64;
pub use num_rational::BigRational;
