//! Sign/significand/exponent floating point over `BigInt`.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// An arbitrary-precision binary float: `value = mant * 2^exp`.
///
/// Nonzero values are normalized so the significand has exactly `prec`
/// magnitude bits; arithmetic rounds to nearest (ties to even) which keeps
/// the relative error of every operation within `2^(1-prec)`.
#[derive(Debug, Clone)]
pub struct BigFloat {
    mant: BigInt,
    exp: i64,
    prec: u32,
}

impl BigFloat {
    pub fn zero(prec: u32) -> Self {
        BigFloat {
            mant: BigInt::zero(),
            exp: 0,
            prec,
        }
    }

    pub fn one(prec: u32) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        Self::rounded(BigInt::from(v), 0, prec)
    }

    pub fn from_u64(v: u64, prec: u32) -> Self {
        Self::rounded(BigInt::from(v), 0, prec)
    }

    pub fn from_bigint(v: &BigInt, prec: u32) -> Self {
        Self::rounded(v.clone(), 0, prec)
    }

    /// `num/den` rounded to `prec` bits.
    pub fn from_ratio(num: i64, den: i64, prec: u32) -> Result<Self> {
        Self::div_raw(&BigInt::from(num), &BigInt::from(den), 0, prec)
    }

    /// Interpret `mant * 2^exp` and round to `prec` bits.
    pub(crate) fn from_scaled(mant: BigInt, exp: i64, prec: u32) -> Self {
        Self::rounded(mant, exp, prec)
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    /// Exponent of the most significant bit: `2^msb <= |v| < 2^(msb+1)`.
    /// `i64::MIN` for zero.
    pub fn msb_exponent(&self) -> i64 {
        if self.is_zero() {
            i64::MIN
        } else {
            self.exp + self.mant.bits() as i64 - 1
        }
    }

    /// Round to a (possibly different) precision.
    pub fn with_prec(&self, prec: u32) -> Self {
        Self::rounded(self.mant.clone(), self.exp, prec)
    }

    // Normalize to exactly `prec` significand bits, round to nearest even.
    fn rounded(mant: BigInt, exp: i64, prec: u32) -> Self {
        let prec = prec.max(2);
        if mant.is_zero() {
            return Self::zero(prec);
        }
        let bits = mant.bits();
        let p = prec as u64;
        if bits <= p {
            let sh = (p - bits) as usize;
            return BigFloat {
                mant: mant << sh,
                exp: exp - sh as i64,
                prec,
            };
        }
        let sh = (bits - p) as usize;
        let (sign, mag) = mant.into_parts();
        let round = mag.bit(sh as u64 - 1);
        let sticky = sh >= 2 && mag.trailing_zeros().unwrap_or(0) < sh as u64 - 1;
        let mut head = mag >> sh;
        let mut e = exp + sh as i64;
        if round && (sticky || head.is_odd()) {
            head += 1u32;
            if head.bits() > p {
                head >>= 1;
                e += 1;
            }
        }
        BigFloat {
            mant: BigInt::from_biguint(sign, head),
            exp: e,
            prec,
        }
    }

    pub fn neg(&self) -> Self {
        BigFloat {
            mant: -&self.mant,
            exp: self.exp,
            prec: self.prec,
        }
    }

    pub fn abs(&self) -> Self {
        BigFloat {
            mant: self.mant.abs(),
            exp: self.exp,
            prec: self.prec,
        }
    }

    /// Exact scaling by `2^k`.
    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        BigFloat {
            mant: self.mant.clone(),
            exp: self.exp + k,
            prec: self.prec,
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let prec = self.prec.min(rhs.prec);
        if self.is_zero() {
            return rhs.with_prec(prec);
        }
        if rhs.is_zero() {
            return self.with_prec(prec);
        }
        let (a, b) = if self.exp >= rhs.exp {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let b_msb = b.exp + b.mant.bits() as i64;
        if a.exp > b_msb + prec as i64 + 64 {
            // b lies entirely below a's rounding range; keep only its
            // direction so ties still break faithfully.
            let shift = prec as i64 + 66;
            let nudge = if b.mant.is_negative() { -1 } else { 1 };
            let m = (&a.mant << shift as usize) + nudge;
            return Self::rounded(m, a.exp - shift, prec);
        }
        let sh = (a.exp - b.exp) as usize;
        Self::rounded((&a.mant << sh) + &b.mant, b.exp, prec)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let prec = self.prec.min(rhs.prec);
        if self.is_zero() || rhs.is_zero() {
            return Self::zero(prec);
        }
        Self::rounded(&self.mant * &rhs.mant, self.exp + rhs.exp, prec)
    }

    /// Multiply by a machine integer (cheap, one rounding).
    pub fn mul_small(&self, k: i64) -> Self {
        if k == 0 || self.is_zero() {
            return Self::zero(self.prec);
        }
        Self::rounded(&self.mant * k, self.exp, self.prec)
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        Self::div_raw(
            &self.mant,
            &rhs.mant,
            self.exp - rhs.exp,
            self.prec.min(rhs.prec),
        )
    }

    pub fn div_small(&self, k: i64) -> Result<Self> {
        Self::div_raw(&self.mant, &BigInt::from(k), self.exp, self.prec)
    }

    // num/den * 2^exp, faithful: quotient taken with prec+4 bits plus a
    // sticky bit from the remainder.
    fn div_raw(num: &BigInt, den: &BigInt, exp: i64, prec: u32) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero(prec));
        }
        let nm = num.magnitude();
        let dm = den.magnitude();
        let s = (prec as i64 + 4 + dm.bits() as i64 - nm.bits() as i64).max(0) as usize;
        let (q, r) = (nm << s).div_rem(dm);
        let m = (q << 1u8) + BigUint::from(u32::from(!r.is_zero()));
        let sign = if num.is_negative() == den.is_negative() {
            Sign::Plus
        } else {
            Sign::Minus
        };
        Ok(Self::rounded(
            BigInt::from_biguint(sign, m),
            exp - s as i64 - 1,
            prec,
        ))
    }

    pub fn sqrt(&self) -> Result<Self> {
        if self.is_negative() {
            return Err(Error::NegativeSqrt);
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        let bits = self.mant.bits() as i64;
        let mut t = (2 * self.prec as i64 + 6 - bits).max(0);
        if (self.exp - t).rem_euclid(2) != 0 {
            t += 1;
        }
        let mag = self.mant.magnitude() << t as usize;
        let r = mag.sqrt();
        let sticky = (&r * &r) != mag;
        let m = (r << 1u8) + BigUint::from(u32::from(sticky));
        Ok(Self::rounded(
            BigInt::from_biguint(Sign::Plus, m),
            (self.exp - t) / 2 - 1,
            self.prec,
        ))
    }

    /// Total order on values (precision does not participate).
    pub fn cmp_val(&self, rhs: &Self) -> Ordering {
        let sa = if self.is_zero() {
            0
        } else if self.is_negative() {
            -1
        } else {
            1
        };
        let sb = if rhs.is_zero() {
            0
        } else if rhs.is_negative() {
            -1
        } else {
            1
        };
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        let ma = self.msb_exponent();
        let mb = rhs.msb_exponent();
        if ma != mb {
            let ord = ma.cmp(&mb);
            return if sa > 0 { ord } else { ord.reverse() };
        }
        let e = self.exp.min(rhs.exp);
        let a = &self.mant << (self.exp - e) as usize;
        let b = &rhs.mant << (rhs.exp - e) as usize;
        a.cmp(&b)
    }

    /// Nearest integer (ties away from zero).
    pub fn to_nearest_int(&self) -> BigInt {
        if self.is_zero() || self.msb_exponent() < -1 {
            return BigInt::zero();
        }
        if self.exp >= 0 {
            return &self.mant << self.exp as usize;
        }
        let sh = (-self.exp) as usize;
        let (sign, mag) = self.mant.clone().into_parts();
        let half = BigUint::from(1u8) << (sh - 1);
        BigInt::from_biguint(sign, (mag + half) >> sh)
    }

    /// Lossy conversion for diagnostics and coarse estimates.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits();
        let take = bits.min(53);
        let sh = (bits - take) as usize;
        let head = (self.mant.magnitude() >> sh).to_u64().unwrap_or(u64::MAX);
        let e = self.exp + sh as i64;
        let v = if e.abs() > 2000 {
            if e > 0 {
                f64::INFINITY
            } else {
                0.0
            }
        } else {
            head as f64 * (e as f64).exp2()
        };
        if self.is_negative() {
            -v
        } else {
            v
        }
    }

    /// Parse a decimal literal (optional sign, point and exponent).
    pub fn from_decimal_str(s: &str, prec: u32) -> Result<Self> {
        let bad = || Error::InvalidDecimal(s.to_string());
        let t = s.trim();
        let (neg, t) = match t.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t.strip_prefix('+').unwrap_or(t)),
        };
        let (body, exp10) = match t.split_once(['e', 'E']) {
            Some((b, e)) => (b, e.parse::<i64>().map_err(|_| bad())?),
            None => (t, 0),
        };
        let (int_part, frac_part) = match body.split_once('.') {
            Some((i, f)) => (i, f),
            None => (body, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        let digits: String = [int_part, frac_part].concat();
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let d: BigInt = digits.parse().map_err(|_| bad())?;
        let k = exp10 - frac_part.len() as i64;
        let d = if neg { -d } else { d };
        if k >= 0 {
            Ok(Self::rounded(d * BigInt::from(10u8).pow(k as u32), 0, prec))
        } else {
            Self::div_raw(&d, &BigInt::from(10u8).pow((-k) as u32), 0, prec)
        }
    }

    /// Decimal rendering with `digits` significant digits.
    pub fn to_decimal_string(&self, digits: usize) -> String {
        let digits = digits.max(1);
        if self.is_zero() {
            return "0".to_string();
        }
        let msb = self.msb_exponent();
        let mut d10 = (msb as f64 * std::f64::consts::LOG10_2).floor() as i64;
        let mut scaled = self.scale_to_decimal(digits as i64 - 1 - d10);
        // the log10 estimate can be off by one either way
        loop {
            let n = scaled.to_string().len();
            if n > digits {
                scaled = (scaled + 5u8) / 10u8;
                d10 += 1;
            } else if n < digits {
                scaled *= 10u8;
                d10 -= 1;
            } else {
                break;
            }
        }
        let str_digits = scaled.to_string();
        let sign = if self.is_negative() { "-" } else { "" };
        if (0..digits as i64).contains(&d10) {
            let point = d10 as usize + 1;
            if point == digits {
                format!("{sign}{str_digits}")
            } else {
                format!("{sign}{}.{}", &str_digits[..point], &str_digits[point..])
            }
        } else if (-4..0).contains(&d10) {
            let zeros = "0".repeat((-d10 - 1) as usize);
            format!("{sign}0.{zeros}{str_digits}")
        } else {
            format!("{sign}{}.{}e{}", &str_digits[..1], &str_digits[1..], d10)
        }
    }

    // round(|v| * 10^k) as a nonnegative integer
    fn scale_to_decimal(&self, k: i64) -> BigUint {
        let mag = self.mant.magnitude().clone();
        let mut num = if k >= 0 {
            mag * BigUint::from(10u8).pow(k as u32)
        } else {
            mag
        };
        let mut den = if k < 0 {
            BigUint::from(10u8).pow((-k) as u32)
        } else {
            BigUint::from(1u8)
        };
        if self.exp >= 0 {
            num <<= self.exp as usize;
        } else {
            den <<= (-self.exp) as usize;
        }
        ((num << 1u8) + &den) / (den << 1u8)
    }
}

impl PartialEq for BigFloat {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_val(other) == Ordering::Equal
    }
}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp_val(other))
    }
}

impl fmt::Display for BigFloat {
    // enough digits to round-trip the stored precision
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = (self.prec as f64 * std::f64::consts::LOG10_2).ceil() as usize + 2;
        f.write_str(&self.to_decimal_string(digits))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(v: f64, p: u32) -> BigFloat {
        BigFloat::from_decimal_str(&format!("{v:.17e}"), p).unwrap()
    }

    #[test]
    fn dyadic_arithmetic_is_exact() {
        let a = BigFloat::from_i64(3, 64);
        let b = BigFloat::from_ratio(1, 4, 64).unwrap();
        let s = a.add(&b);
        assert_eq!(s.to_f64(), 3.25);
        assert_eq!(a.mul(&b).to_f64(), 0.75);
        assert_eq!(a.sub(&a).to_f64(), 0.0);
        assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn rounding_to_smaller_precision() {
        let x = BigFloat::from_ratio(1, 3, 200).unwrap();
        let y = x.with_prec(53);
        assert!((y.to_f64() - 1.0 / 3.0).abs() < 1e-16);
        // mixed precision rounds to the smaller operand
        assert_eq!(x.add(&y).precision(), 53);
    }

    #[test]
    fn division_and_sqrt() {
        let two = BigFloat::from_i64(2, 128);
        let r = two.sqrt().unwrap();
        let back = r.mul(&r);
        let err = back.sub(&two).abs();
        assert!(err.msb_exponent() < -120, "err {err:?}");
        let frozen = BigFloat::from_decimal_str(
            "1.41421356237309504880168872420969807856967187537694807317668",
            128,
        )
        .unwrap();
        assert!(r.sub(&frozen).abs().msb_exponent() < -120);

        assert!(BigFloat::from_i64(-1, 53).sqrt().is_err());
        assert!(two.div(&BigFloat::zero(53)).is_err());
    }

    #[test]
    fn comparison_total_order() {
        let a = f(1.5, 64);
        let b = f(1.5, 200);
        assert_eq!(a, b);
        assert!(f(-2.0, 53) < f(0.25, 53));
        assert!(f(3.0, 53) > f(2.9999, 53));
        assert!(BigFloat::zero(53) < f(1e-9, 53));
    }

    #[test]
    fn nearest_int() {
        assert_eq!(f(2.5, 64).to_nearest_int(), BigInt::from(3));
        assert_eq!(f(-2.5, 64).to_nearest_int(), BigInt::from(-3));
        assert_eq!(f(491.9999999, 64).to_nearest_int(), BigInt::from(492));
        assert_eq!(f(0.4999, 64).to_nearest_int(), BigInt::from(0));
        let huge = BigFloat::from_bigint(&BigInt::from(1u64 << 60), 30);
        assert_eq!(huge.to_nearest_int(), BigInt::from(1u64 << 60));
    }

    #[test]
    fn decimal_round_trip() {
        let x = BigFloat::from_decimal_str("535.49165552476473650304932958904718147", 150).unwrap();
        let s = x.to_decimal_string(30);
        assert!(s.starts_with("535.491655524764736503049329589"), "{s}");
        let tiny = BigFloat::from_decimal_str("0.0018674427317079888144302129", 100).unwrap();
        let s = tiny.to_decimal_string(20);
        assert!(s.starts_with("0.0018674427317079888"), "{s}");
        let neg = BigFloat::from_decimal_str("-4.3334205e-3", 80).unwrap();
        assert!(neg.is_negative());
        assert!(BigFloat::from_decimal_str("x1.5", 53).is_err());
    }

    #[test]
    fn sticky_add_far_apart() {
        let big = BigFloat::from_i64(1, 64);
        let tiny = BigFloat::from_scaled(BigInt::from(1), -500, 64);
        let s = big.add(&tiny);
        // result rounds to 1 but must stay >= 1
        assert!(s >= big);
        let s2 = big.sub(&tiny);
        assert!(s2 <= big);
        assert!(!s2.is_zero());
    }
}
