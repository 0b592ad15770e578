//! exp, ln, sin/cos by argument reduction plus Taylor series.
//!
//! Each function works at the requested precision plus guard bits and
//! rounds once on return, so the delivered relative error stays within
//! the `2^(1-p)` contract with room to spare.

use super::consts::{const_ln2, const_pi};
use super::BigFloat;
use crate::error::{Error, Result};

// Stop a Taylor loop once the running term drops this far below the sum.
fn converged(term: &BigFloat, reference_msb: i64, w: u32) -> bool {
    term.is_zero() || term.msb_exponent() < reference_msb - (w as i64 + 8)
}

/// `e^x` to relative error at most `2^(1-prec)`.
///
/// Reduction `x = k ln2 + r` with `|r| <= ln2/2`, then the series for
/// `e^r`, then an exact scale by `2^k`.
pub fn real_exp(x: &BigFloat, prec: u32) -> Result<BigFloat> {
    if prec < 2 {
        return Err(Error::PrecisionTooSmall(prec));
    }
    if x.is_zero() {
        return Ok(BigFloat::one(prec));
    }
    let xf = x.to_f64();
    if !xf.is_finite() || xf.abs() > 1e12 {
        return Err(Error::ExpArgumentOutOfRange(xf));
    }
    let k = (xf / std::f64::consts::LN_2).round() as i64;
    let kbits = 64 - (k.unsigned_abs() + 2).leading_zeros();
    let w = prec + 40 + kbits;
    let r = x.with_prec(w).sub(&const_ln2(w).mul_small(k));
    let mut term = BigFloat::one(w);
    let mut sum = BigFloat::one(w);
    let mut i: i64 = 1;
    loop {
        term = term.mul(&r).div_small(i)?;
        sum = sum.add(&term);
        // e^r is within [0.7, 1.5]; its msb exponent is 0 or -1
        if converged(&term, 1, w) {
            break;
        }
        i += 1;
    }
    Ok(sum.mul_pow2(k).with_prec(prec))
}

/// Natural logarithm of a positive value.
///
/// Splits `x = m 2^s` with `m` in `[1,2)` and sums the atanh series of
/// `u = (m-1)/(m+1)`, which converges one bit per ~3.2 terms.
pub fn real_ln(x: &BigFloat, prec: u32) -> Result<BigFloat> {
    if x.is_zero() || x.is_negative() {
        return Err(Error::NonPositiveLog);
    }
    let w = prec + 40;
    let s = x.msb_exponent();
    let m = x.with_prec(w).mul_pow2(-s);
    let one = BigFloat::one(w);
    let num = m.sub(&one);
    let scaled_exp = const_ln2(w).mul_small(s);
    if num.is_zero() {
        return Ok(scaled_exp.with_prec(prec));
    }
    let u = num.div(&m.add(&one))?;
    let u2 = u.mul(&u);
    let mut power = u.clone();
    let mut sum = u.clone();
    let mut k: i64 = 1;
    loop {
        power = power.mul(&u2);
        let contrib = power.div_small(2 * k + 1)?;
        sum = sum.add(&contrib);
        if converged(&contrib, sum.msb_exponent(), w) {
            break;
        }
        k += 1;
    }
    Ok(sum.mul_pow2(1).add(&scaled_exp).with_prec(prec))
}

/// Simultaneous sine and cosine.
///
/// Range reduction modulo 2π at working precision plus 32 guard bits,
/// then one interleaved Taylor pass over `[-π, π]`. Errors are absolute
/// (≤ `2^(-prec-8)`), which is also relative away from the zeros.
pub fn sin_cos(x: &BigFloat, prec: u32) -> Result<(BigFloat, BigFloat)> {
    let w = prec + 48;
    let two_pi = const_pi(w + 32).mul_pow2(1);
    let xf = x.to_f64();
    if !xf.is_finite() || xf.abs() > 1e12 {
        return Err(Error::ExpArgumentOutOfRange(xf));
    }
    let n = (xf / (2.0 * std::f64::consts::PI)).round() as i64;
    let y = x.with_prec(w + 32).sub(&two_pi.mul_small(n)).with_prec(w);
    let y2 = y.mul(&y);
    let mut cos_term = BigFloat::one(w);
    let mut sin_term = y.clone();
    let mut cos_acc = cos_term.clone();
    let mut sin_acc = sin_term.clone();
    let mut m: i64 = 1;
    loop {
        cos_term = cos_term.mul(&y2).div_small((2 * m - 1) * 2 * m)?;
        sin_term = sin_term.mul(&y2).div_small(2 * m * (2 * m + 1))?;
        if m % 2 == 1 {
            cos_acc = cos_acc.sub(&cos_term);
            sin_acc = sin_acc.sub(&sin_term);
        } else {
            cos_acc = cos_acc.add(&cos_term);
            sin_acc = sin_acc.add(&sin_term);
        }
        if converged(&cos_term, 0, w) && converged(&sin_term, 0, w) {
            break;
        }
        m += 1;
    }
    Ok((sin_acc.with_prec(prec), cos_acc.with_prec(prec)))
}
