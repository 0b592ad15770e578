//! Complex arithmetic over [`BigFloat`] and the q-parameter map.

use super::elementary::{real_exp, sin_cos};
use super::{const_pi, BigFloat};
use crate::error::{Error, Result};
use std::fmt;

/// A complex number with a shared component precision.
#[derive(Debug, Clone, PartialEq)]
pub struct BigComplex {
    re: BigFloat,
    im: BigFloat,
}

impl BigComplex {
    /// Harmonizes both components to the smaller precision.
    pub fn new(re: BigFloat, im: BigFloat) -> Self {
        let p = re.precision().min(im.precision());
        BigComplex {
            re: re.with_prec(p),
            im: im.with_prec(p),
        }
    }

    pub fn from_real(re: BigFloat) -> Self {
        let p = re.precision();
        BigComplex {
            re,
            im: BigFloat::zero(p),
        }
    }

    pub fn re(&self) -> &BigFloat {
        &self.re
    }

    pub fn im(&self) -> &BigFloat {
        &self.im
    }

    pub fn precision(&self) -> u32 {
        self.re.precision().min(self.im.precision())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        BigComplex {
            re: self.re.add(&rhs.re),
            im: self.im.add(&rhs.im),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        BigComplex {
            re: self.re.sub(&rhs.re),
            im: self.im.sub(&rhs.im),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let re = self.re.mul(&rhs.re).sub(&self.im.mul(&rhs.im));
        let im = self.re.mul(&rhs.im).add(&self.im.mul(&rhs.re));
        BigComplex { re, im }
    }

    pub fn scale(&self, k: &BigFloat) -> Self {
        BigComplex {
            re: self.re.mul(k),
            im: self.im.mul(k),
        }
    }

    pub fn add_real(&self, k: &BigFloat) -> Self {
        BigComplex {
            re: self.re.add(k),
            im: self.im.clone(),
        }
    }

    pub fn conj(&self) -> Self {
        BigComplex {
            re: self.re.clone(),
            im: self.im.neg(),
        }
    }

    pub fn norm_sqr(&self) -> BigFloat {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    pub fn abs(&self) -> Result<BigFloat> {
        self.norm_sqr().sqrt()
    }

    pub fn recip(&self) -> Result<Self> {
        let d = self.norm_sqr();
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(BigComplex {
            re: self.re.div(&d)?,
            im: self.im.neg().div(&d)?,
        })
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_negative() {
            write!(f, "{} - {}i", self.re, self.im.abs())
        } else {
            write!(f, "{} + {}i", self.re, self.im)
        }
    }
}

/// `q = e^{2 pi i alpha}` for `alpha` in the upper half plane.
///
/// Component error is at most `2^(4-prec)` relative to `|q|`; the modulus
/// satisfies `|q| = e^{-2 pi Im(alpha)} < 1`.
pub fn qparam(alpha: &BigComplex, prec: u32) -> Result<BigComplex> {
    if !alpha.im().is_positive() {
        return Err(Error::NonPositiveImaginaryPart);
    }
    let w = prec + 16;
    let two_pi = const_pi(w).mul_pow2(1);
    let mag = real_exp(&two_pi.mul(&alpha.im().with_prec(w)).neg(), w)?;
    let theta = two_pi.mul(&alpha.re().with_prec(w));
    let (s, c) = sin_cos(&theta, w)?;
    Ok(BigComplex::new(
        mag.mul(&c).with_prec(prec),
        mag.mul(&s).with_prec(prec),
    ))
}
