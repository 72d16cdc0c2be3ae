//! Exact and numeric machinery for t-analogs of string functions of the
//! rank-one affine Lie algebra.
//!
//! Two independent pipelines produce the same object and are checked against
//! each other:
//!
//! * **Weyl-sum route** ([`kostant`]): a dynamic program for the t-Kostant
//!   partition function, Kostka-Foulkes polynomials as alternating Weyl sums,
//!   and the string generating function `a`.
//! * **Lattice route** ([`lattice`]): enumeration of an indefinite binary
//!   quadratic lattice inside its positivity cone, reduction to a fundamental
//!   domain, and assembly of the theta series whose constant-term pairing
//!   against the triple product reproduces `q^s a`.
//!
//! The [`analytic`] module evaluates both sides numerically and verifies the
//! radial-average identity: the string function at real `0 < t < 1` equals
//! the Poisson-kernel average of the extended theta function times the
//! extended eta factor over a circle of radius `t`. [`verify`] packages the
//! exact and numeric comparisons behind small report types.
//!
//! All exact work uses rational exponents and big-integer coefficients; the
//! `parallel` feature (on by default) enables rayon data-parallel inner
//! loops, with sequential fallbacks compiled in otherwise.

pub mod analytic;
pub mod error;
pub mod kostant;
pub mod lattice;
mod par;
pub mod rat;
pub mod series;
pub mod tpoly;
pub mod verify;
pub mod weyl;

pub use error::{Error, Result};
pub use series::Series3;
pub use tpoly::TPoly;
pub use weyl::{StringProblem, WeightVec, WeylElem};
