//! Arbitrary-precision real and complex arithmetic.
//!
//! Values carry an explicit precision in bits; every operation rounds to
//! the smaller operand precision with relative error at most `2^(1-p)`
//! (faithful rounding). Transcendental functions work at the requested
//! precision plus guard bits and round once at the end. This is enough to
//! evaluate `q = exp(2*pi*i*alpha)` and polynomial tails at CM points with
//! a provable error budget; correctly-rounded (0.5 ulp) results are not a
//! goal.

mod bigfloat;
mod complex;
mod consts;
mod elementary;

pub use bigfloat::BigFloat;
pub use complex::{qparam, BigComplex};
pub use consts::{const_euler_gamma, const_ln2, const_pi, GAMMA_MAX_BITS};
pub use elementary::{real_exp, real_ln, sin_cos};
