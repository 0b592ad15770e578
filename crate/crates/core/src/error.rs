//! Crate-wide error type.

use thiserror::Error;

/// Errors raised by series arithmetic, form manipulation, numerics and
/// trace evaluation.
#[derive(Debug, Error)]
pub enum Error {
    /// A series was constructed or combined with an empty coefficient window.
    #[error("degenerate series: truncation {truncation} does not exceed valuation {valuation}")]
    DegenerateSeries { valuation: i64, truncation: i64 },

    /// Coefficient access at or above the truncation order.
    #[error("coefficient of q^{exponent} not represented (truncation {truncation})")]
    CoefficientOutOfWindow { exponent: i64, truncation: i64 },

    /// Series inversion requires a unit leading coefficient.
    #[error("cannot invert series with leading coefficient {leading} (must be 1 or -1)")]
    NonUnitLeadingCoefficient { leading: String },

    /// Negative exponents are not accepted by `pow`; invert first.
    #[error("negative series power {exponent}; invert explicitly instead")]
    NegativeSeriesPower { exponent: i64 },

    #[error("unknown named series `{0}`")]
    UnknownSeries(String),

    /// The requested truncation does not reach past the series valuation.
    #[error("order {order} too small for series with valuation {valuation}")]
    OrderTooSmall { order: i64, valuation: i64 },

    #[error("form [{a},{b},{c}] is not positive-definite")]
    NotPositiveDefinite { a: String, b: String, c: String },

    /// `enumerate_reduced` is only defined for d >= 3 with d = 0, 3 (mod 4).
    #[error("no forms of discriminant -{0}: d must be >= 3 and congruent to 0 or 3 (mod 4)")]
    InvalidDiscriminant(i64),

    #[error("precision {0} below the supported minimum of 8 bits")]
    PrecisionTooSmall(u32),

    #[error("square root of a negative value")]
    NegativeSqrt,

    #[error("logarithm of a non-positive value")]
    NonPositiveLog,

    #[error("division by zero")]
    DivisionByZero,

    #[error("cannot parse `{0}` as a decimal number")]
    InvalidDecimal(String),

    #[error("exp argument {0} outside the supported range")]
    ExpArgumentOutOfRange(f64),

    /// γ is embedded as a checked literal of finite length.
    #[error("Euler constant requested at {0} bits, only {1} are stored")]
    GammaPrecisionExceeded(u32, u32),

    /// `qparam` and `eval_j` need a point in the upper half plane.
    #[error("imaginary part must be positive")]
    NonPositiveImaginaryPart,

    /// `eval_j` refuses points where the q-series converges too slowly.
    #[error("imaginary part {im} below convergence threshold; reduce the form first")]
    ImaginaryPartTooSmall { im: f64 },

    /// The weighted trace sum failed to round to an integer after retries.
    #[error("trace sum for d={d} has rounding residual {residual} after {retries} retries")]
    TraceResidual { d: i64, residual: f64, retries: u32 },

    /// An identity's braced sum must be divisible by n.
    #[error("{identity} braced sum {sum} not divisible by n={n}")]
    IdentityDivisibility { identity: &'static str, n: u64, sum: String },

    #[error("{0} requires n >= {1}")]
    RangeTooSmall(&'static str, i64),

    #[error("trace cache {path}: {source}")]
    CacheIo { path: String, source: std::io::Error },
}

pub type Result<T> = std::result::Result<T, Error>;
