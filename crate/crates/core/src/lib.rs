//! Exact and high-precision arithmetic for the level-2 eta quotient
//! `eta^24(tau) / eta^24(2*tau)` and the trace of singular moduli.
//!
//! The crate computes the Fourier coefficients `c(n)` of that Hauptmodul
//! by two fully independent routes — exact truncated q-series arithmetic,
//! and the trace formula evaluated at CM points with rigorous precision
//! control — and ships range checkers for the sign, bound and identity
//! statements those coefficients satisfy.
//!
//! Module map:
//! - [`qseries`]: truncated Laurent series over `BigInt`, named expansions
//!   (η²⁴, Δ, E₄, j, the Hauptmodul, 1/j).
//! - [`numerics`]: explicit-precision floats/complexes, `exp`, `ln`,
//!   `sin`/`cos`, `q = e^{2πiα}`.
//! - [`bqf`]: reduced binary quadratic forms, class enumeration, CM roots.
//! - [`traces`]: `t(d)` with conventions, integrality validation and a CSV
//!   cache.
//! - [`identities`]: divisor sums and the coefficient formulas that tie
//!   traces to `c(n)` and `a(n)`.
//! - [`verify`]: range checkers producing structured reports.

pub mod bqf;
pub mod error;
pub mod identities;
pub mod numerics;
pub mod qseries;
pub mod traces;
pub mod verify;

pub use bqf::{enumerate_reduced, hurwitz_class_number, reduce_form, QuadraticForm, ReducedForm};
pub use error::{Error, Result};
pub use numerics::{qparam, BigComplex, BigFloat};
pub use qseries::{named_series, LaurentSeries, NamedSeries};
pub use traces::{TraceEngine, TraceRecord};
pub use verify::VerificationReport;
