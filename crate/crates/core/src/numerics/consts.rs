//! Shared mathematical constants with precision-keyed caching.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::sync::Mutex;
use std::sync::OnceLock;

use super::BigFloat;
use crate::error::{Error, Result};

/// Euler's constant is embedded as a checked literal; requests above this
/// precision are refused rather than silently padded.
pub const GAMMA_MAX_BITS: u32 = 640;

// 215 significant digits (~714 bits), more than the 2^700-scaled hex twin.
const GAMMA_DECIMAL: &str = "0.57721566490153286060651209008240243104215933593992359880576723488486772677766467093694706329174674951463144724980708248096050401448654283622417399764492353625350033374293733773767394279259525824709491600873520394817";

// round(gamma * 2^700) in hex; independent transcription used as a
// startup self-check against the decimal literal.
const GAMMA_HEX_SCALED: &str = "93c467e37db0c7a4d1be3f810152cb56a1cecc3af65cc0190c03df34709affbd8e4b59fa03a9f0eed0649ccb621057d11056ae9132135a08e43b4673d74bafea58deb878cc86d733dbe7bf38154b36cf8a96d1567899aab";

static PI_CACHE: Mutex<Option<BigFloat>> = Mutex::new(None);
static LN2_CACHE: Mutex<Option<BigFloat>> = Mutex::new(None);
static GAMMA: OnceLock<BigFloat> = OnceLock::new();

fn cached(slot: &Mutex<Option<BigFloat>>, prec: u32, compute: fn(u32) -> BigFloat) -> BigFloat {
    let mut guard = slot.lock().unwrap();
    if let Some(v) = guard.as_ref() {
        if v.precision() >= prec {
            return v.with_prec(prec);
        }
    }
    // compute with headroom so nearby requests hit the cache
    let fresh = compute(prec + 64);
    let out = fresh.with_prec(prec);
    *guard = Some(fresh);
    out
}

/// π to relative error at most `2^(1-prec)`.
pub fn const_pi(prec: u32) -> BigFloat {
    cached(&PI_CACHE, prec.max(8), compute_pi)
}

/// ln 2 to relative error at most `2^(1-prec)`.
pub fn const_ln2(prec: u32) -> BigFloat {
    cached(&LN2_CACHE, prec.max(8), compute_ln2)
}

/// Euler's constant γ from the embedded literal.
pub fn const_euler_gamma(prec: u32) -> Result<BigFloat> {
    if prec > GAMMA_MAX_BITS {
        return Err(Error::GammaPrecisionExceeded(prec, GAMMA_MAX_BITS));
    }
    let g = GAMMA.get_or_init(|| {
        let dec = BigFloat::from_decimal_str(GAMMA_DECIMAL, 712).expect("gamma literal");
        let scaled = BigInt::parse_bytes(GAMMA_HEX_SCALED.as_bytes(), 16).expect("gamma hex");
        let hex = BigFloat::from_scaled(scaled, -700, 712);
        let diff = dec.sub(&hex).abs();
        // both strings carry ~700 good bits; disagreement means a typo
        assert!(
            diff.is_zero() || diff.msb_exponent() < -695,
            "embedded digit strings for Euler's constant disagree"
        );
        hex
    });
    Ok(g.with_prec(prec))
}

// atan(1/m) * 2^w by the alternating Taylor series, integer fixed point.
fn atan_recip_scaled(m: u64, w: u64) -> BigInt {
    let m2 = BigInt::from(m * m);
    let mut power = (BigInt::one() << w) / BigInt::from(m);
    let mut sum = power.clone();
    let mut k = 1u64;
    loop {
        power = power / &m2;
        if power.is_zero() {
            break;
        }
        let contrib = &power / BigInt::from(2 * k + 1);
        if k % 2 == 1 {
            sum -= contrib;
        } else {
            sum += contrib;
        }
        k += 1;
    }
    sum
}

// Machin: pi = 16 atan(1/5) - 4 atan(1/239).
fn compute_pi(prec: u32) -> BigFloat {
    let w = prec as u64 + 16;
    let p = atan_recip_scaled(5, w) * 16 - atan_recip_scaled(239, w) * 4;
    BigFloat::from_scaled(p, -(w as i64), prec)
}

// ln 2 = 2 atanh(1/3) = 2 sum_{k>=0} 3^-(2k+1) / (2k+1).
fn compute_ln2(prec: u32) -> BigFloat {
    let w = prec as u64 + 16;
    let nine = BigInt::from(9);
    let mut power = (BigInt::one() << w) / BigInt::from(3);
    let mut sum = power.clone();
    let mut k = 1u64;
    loop {
        power = power / &nine;
        if power.is_zero() {
            break;
        }
        sum += &power / BigInt::from(2 * k + 1);
        k += 1;
    }
    BigFloat::from_scaled(sum * 2, -(w as i64), prec)
}
