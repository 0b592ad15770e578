//! Truncated Laurent series over arbitrary-precision integers.
//!
//! A [`LaurentSeries`] keeps a contiguous coefficient window
//! `[valuation, truncation)`: coefficients below the valuation are zero,
//! coefficients at or above the truncation are unknown. Binary operations
//! propagate the tightest truncation justified by their operands, so no
//! coefficient is ever reported that the inputs cannot support.

mod named;

pub use named::{named_series, NamedSeries};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;

use crate::error::{Error, Result};

/// A finitely truncated Laurent series with exact integer coefficients.
///
/// `coeffs[i]` holds the coefficient of `q^(valuation + i)`; the truncation
/// order is `valuation + coeffs.len()` and is always strictly above the
/// valuation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentSeries {
    valuation: i64,
    coeffs: Vec<BigInt>,
}

impl LaurentSeries {
    /// Build a series from the coefficient window starting at `valuation`.
    pub fn from_coeffs(valuation: i64, coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::DegenerateSeries {
                valuation,
                truncation: valuation,
            });
        }
        let mut s = LaurentSeries { valuation, coeffs };
        s.normalize();
        Ok(s)
    }

    /// The constant series `1` with window `[0, truncation)`.
    pub fn one(truncation: i64) -> Result<Self> {
        Self::monomial(0, truncation)
    }

    /// The series `q^exponent` with window `[exponent, truncation)`.
    pub fn monomial(exponent: i64, truncation: i64) -> Result<Self> {
        if truncation <= exponent {
            return Err(Error::DegenerateSeries {
                valuation: exponent,
                truncation,
            });
        }
        let len = (truncation - exponent) as usize;
        let mut coeffs = vec![BigInt::zero(); len];
        coeffs[0] = BigInt::one();
        Ok(LaurentSeries {
            valuation: exponent,
            coeffs,
        })
    }

    /// Index of the lowest retained power of `q`.
    pub fn valuation(&self) -> i64 {
        self.valuation
    }

    /// First power of `q` that is *not* represented.
    pub fn truncation(&self) -> i64 {
        self.valuation + self.coeffs.len() as i64
    }

    /// Coefficient of `q^exponent`. Zero below the valuation, an error at or
    /// above the truncation.
    pub fn coeff(&self, exponent: i64) -> Result<BigInt> {
        if exponent >= self.truncation() {
            return Err(Error::CoefficientOutOfWindow {
                exponent,
                truncation: self.truncation(),
            });
        }
        if exponent < self.valuation {
            return Ok(BigInt::zero());
        }
        Ok(self.coeffs[(exponent - self.valuation) as usize].clone())
    }

    /// The raw coefficient window (index 0 is the valuation coefficient).
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    // Leading zeros carry no information: fold them into the valuation,
    // keeping at least one coefficient so the window stays non-degenerate.
    fn normalize(&mut self) {
        let lead = self
            .coeffs
            .iter()
            .take_while(|c| c.is_zero())
            .count()
            .min(self.coeffs.len() - 1);
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.valuation += lead as i64;
        }
    }

    /// Restrict the window to `[valuation, new_truncation)`.
    pub fn truncated(&self, new_truncation: i64) -> Result<Self> {
        if new_truncation <= self.valuation {
            return Err(Error::DegenerateSeries {
                valuation: self.valuation,
                truncation: new_truncation,
            });
        }
        if new_truncation >= self.truncation() {
            return Ok(self.clone());
        }
        let len = (new_truncation - self.valuation) as usize;
        let mut s = LaurentSeries {
            valuation: self.valuation,
            coeffs: self.coeffs[..len].to_vec(),
        };
        s.normalize();
        Ok(s)
    }

    /// Cauchy product. The result window is the tightest one justified by
    /// the operands: `min(lhs.trunc + rhs.val, rhs.trunc + lhs.val)`.
    pub fn mul(&self, rhs: &Self) -> Self {
        // Window length of the product = min of the operand window lengths.
        let len = self.coeffs.len().min(rhs.coeffs.len());
        let mut out = vec![BigInt::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() || i >= len {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().take(len - i).enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        let mut s = LaurentSeries {
            valuation: self.valuation + rhs.valuation,
            coeffs: out,
        };
        s.normalize();
        s
    }

    /// Multiplicative inverse. Requires leading coefficient ±1; the result
    /// window is `[-valuation, truncation - 2*valuation)`.
    pub fn invert(&self) -> Result<Self> {
        let lead = &self.coeffs[0];
        if !lead.is_one() && *lead != -BigInt::one() {
            return Err(Error::NonUnitLeadingCoefficient {
                leading: lead.to_string(),
            });
        }
        let len = self.coeffs.len();
        let mut out = vec![BigInt::zero(); len];
        out[0] = lead.clone(); // 1/(+1) = +1, 1/(-1) = -1
        for m in 1..len {
            let mut acc = BigInt::zero();
            for i in 1..=m {
                if !self.coeffs[i].is_zero() {
                    acc += &self.coeffs[i] * &out[m - i];
                }
            }
            // lead is ±1, so division is a sign flip at most
            out[m] = -lead * acc;
        }
        Ok(LaurentSeries {
            valuation: -self.valuation,
            coeffs: out,
        })
    }

    /// `k`-th power by binary exponentiation; `k = 0` yields the constant 1
    /// on the window the zeroth power can support.
    pub fn pow(&self, k: i64) -> Result<Self> {
        if k < 0 {
            return Err(Error::NegativeSeriesPower { exponent: k });
        }
        if k == 0 {
            return LaurentSeries::one(self.coeffs.len() as i64);
        }
        let mut result: Option<LaurentSeries> = None;
        let mut base = self.clone();
        let mut e = k as u64;
        loop {
            if e & 1 == 1 {
                result = Some(match result {
                    None => base.clone(),
                    Some(r) => r.mul(&base),
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.mul(&base);
        }
        Ok(result.expect("k >= 1"))
    }

    /// Substitute `q -> q^m`: coefficient of `q^(m*e)` equals the original
    /// coefficient of `q^e`.
    pub fn dilate(&self, m: i64) -> Result<Self> {
        if m < 1 {
            return Err(Error::RangeTooSmall("dilate", 1));
        }
        if m == 1 {
            return Ok(self.clone());
        }
        // valuation and truncation both scale by m
        let len = self.coeffs.len() * m as usize;
        let mut out = vec![BigInt::zero(); len];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i * m as usize] = c.clone();
        }
        LaurentSeries::from_coeffs(m * self.valuation, out)
    }

    /// Pointwise sum on the shared window `[min(val), min(trunc))`.
    pub fn add(&self, rhs: &Self) -> Result<Self> {
        let val = self.valuation.min(rhs.valuation);
        let trunc = self.truncation().min(rhs.truncation());
        if trunc <= val {
            return Err(Error::DegenerateSeries {
                valuation: val,
                truncation: trunc,
            });
        }
        let coeffs = (val..trunc)
            .map(|e| {
                let a = self.coeff_or_zero(e);
                let b = rhs.coeff_or_zero(e);
                a + b
            })
            .collect();
        LaurentSeries::from_coeffs(val, coeffs)
    }

    /// Pointwise difference on the shared window.
    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        LaurentSeries {
            valuation: self.valuation,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    /// True when both series agree at every exponent both windows represent.
    pub fn agrees_with(&self, rhs: &Self) -> bool {
        let lo = self.valuation.min(rhs.valuation);
        let hi = self.truncation().min(rhs.truncation());
        (lo..hi).all(|e| self.coeff_or_zero(e) == rhs.coeff_or_zero(e))
    }

    fn coeff_or_zero(&self, exponent: i64) -> BigInt {
        if exponent < self.valuation || exponent >= self.truncation() {
            BigInt::zero()
        } else {
            self.coeffs[(exponent - self.valuation) as usize].clone()
        }
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut shown = 0;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if shown == 8 {
                write!(f, " + ...")?;
                break;
            }
            let e = self.valuation + i as i64;
            if shown == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            }
            let mag = c.abs();
            match e {
                0 => write!(f, "{mag}")?,
                1 => write!(f, "{mag}*q")?,
                _ => write!(f, "{mag}*q^{e}")?,
            }
            shown += 1;
        }
        if shown == 0 {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.truncation())
    }
}
