//! Exact arithmetic: rationals, quadratic surds, continued fractions,
//! eventually periodic binary expansions and a fraction-preserving linear
//! solver.

mod binary;
mod cf;
mod exact;
mod matrix;
mod rational;
mod surd;

pub use binary::{PeriodicBinary, MAX_BINARY_BITS};
pub use cf::{ContinuedFraction, MAX_CF_TERMS};
pub use exact::Exact;
pub use matrix::{is_diagonally_dominant, solve_exact, RationalMatrix};
pub use rational::Rational;
pub use surd::QuadraticSurd;

use thiserror::Error;

/// Largest partial quotient (equivalently, largest power-of-two exponent)
/// that the special-function evaluators will materialize.
pub const MAX_PARTIAL_QUOTIENT: u64 = 1 << 22;

/// Bit length of the largest radicand accepted when building a surd.
pub const MAX_RADICAND_BITS: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumericError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("cannot parse {input:?}: {reason}")]
    Parse { input: String, reason: &'static str },
    #[error("{what} out of range: {value}")]
    OutOfRange { what: &'static str, value: String },
    #[error("value is rational, not a quadratic irrational")]
    NotIrrational,
    #[error("radicand {0} is too large to reduce to squarefree form")]
    RadicandTooLarge(String),
    #[error("partial quotient {0} exceeds the supported bound")]
    QuotientTooLarge(String),
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("malformed continued fraction: {0}")]
    MalformedContinuedFraction(&'static str),
    #[error("expansion exceeds {0} digits")]
    ExpansionTooLong(usize),
}

pub(crate) fn parse_err(input: &str, reason: &'static str) -> NumericError {
    NumericError::Parse {
        input: input.chars().take(64).collect(),
        reason,
    }
}
