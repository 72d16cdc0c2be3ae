//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("truncation bounds differ: {lhs} vs {rhs}")]
    TruncationMismatch { lhs: String, rhs: String },

    #[error("geometric expansion needs a strictly positive q-exponent, got {0}")]
    NonPositiveQExponent(String),

    #[error("non-integer z-exponent {0} reached the constant-term map")]
    NonIntegerZExponent(String),

    #[error("weight {0} is not in the root lattice")]
    NotInRootLattice(String),

    #[error("invalid string problem: {0}")]
    InvalidProblem(String),

    #[error("Kostant table lookup ({b}, {d}) outside the reliable window (|b| <= {bmax}, 0 <= d <= {dmax})")]
    TableWindow { b: i64, d: i64, bmax: i64, dmax: i64 },

    #[error("series window too small: {0}")]
    WindowTooSmall(String),

    #[error("point ({x}, {y}) lies outside the positivity cone U+")]
    OutsideCone { x: String, y: String },

    #[error("point ({x}, {y}) is not in coset L{coset} intersected with the fundamental domain")]
    CosetPrecondition { x: String, y: String, coset: u8 },

    #[error("dual-route disagreement: {0}")]
    RouteMismatch(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("invalid evaluation config: {0}")]
    InvalidConfig(String),

    #[error("invalid rational literal `{0}`")]
    BadRational(String),
}
