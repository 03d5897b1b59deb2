//! Crate-wide error type.

use num_complex::Complex64;
use std::fmt;

use crate::integrability::IntegrabilityReport;

/// Errors produced by the exact-algebra layer, the quadrature engine and the
/// higher-level checks.
#[derive(Debug, Clone)]
pub enum Error {
    /// Two multivariate polynomials with different variable counts were combined.
    MismatchedVars { left: usize, right: usize },
    /// Variable index outside `0..num_vars`.
    VarIndexOutOfRange { index: usize, num_vars: usize },
    /// Euclidean division by the zero polynomial.
    DivisionByZeroPoly,
    /// Malformed input (JSON shape, non-finite number, violated precondition).
    InvalidInput(String),
    /// `gamma_fn` called outside its `x > 0` domain.
    GammaDomain { x: f64 },
    /// Adaptive quadrature exhausted its subdivision budget. Carries the best
    /// estimate together with the error actually achieved.
    ToleranceNotMet {
        value: Complex64,
        est_error: f64,
        requested: f64,
    },
    /// No admissible truncation radius satisfies the ray tail bound.
    TailBoundFailure { r_cap: f64 },
    /// `exp(Re Π_d(a))` exceeds the double-precision range.
    ExpOverflow { exponent: f64 },
    /// Linear solve hit a pivot below the singularity threshold.
    SingularMatrix { pivot: f64, threshold: f64 },
    /// Mixed partials of a produced gradient disagree; indicates an
    /// implementation bug, not a bad input.
    ExactnessViolation { j: usize, k: usize },
    /// The exact and numeric integrability verdicts conflict beyond tolerance.
    /// Carries the full report so callers can inspect both branches.
    Disagreement { report: Box<IntegrabilityReport> },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::MismatchedVars { left, right } => {
                write!(f, "mismatched variable counts: {left} vs {right}")
            }
            Error::VarIndexOutOfRange { index, num_vars } => {
                write!(f, "variable index {index} out of range for {num_vars} variables")
            }
            Error::DivisionByZeroPoly => write!(f, "division by the zero polynomial"),
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::GammaDomain { x } => write!(f, "gamma_fn requires x > 0, got {x}"),
            Error::ToleranceNotMet {
                value,
                est_error,
                requested,
            } => write!(
                f,
                "quadrature tolerance not met: best estimate {value}, achieved {est_error:.3e}, requested {requested:.3e}"
            ),
            Error::TailBoundFailure { r_cap } => {
                write!(f, "no truncation radius below {r_cap:.3e} satisfies the ray tail bound")
            }
            Error::ExpOverflow { exponent } => {
                write!(f, "exp overflow: real exponent {exponent:.6e} exceeds double range")
            }
            Error::SingularMatrix { pivot, threshold } => {
                write!(f, "singular matrix: pivot {pivot:.3e} below threshold {threshold:.3e}")
            }
            Error::ExactnessViolation { j, k } => {
                write!(f, "gradient exactness violated: mixed partials ({j},{k}) disagree")
            }
            Error::Disagreement { report } => write!(
                f,
                "integrability branches disagree: exact={}, spread={:.3e}, threshold={:.3e}",
                report.integrable_exact, report.max_spread, report.spread_threshold
            ),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
