//! The named q-expansions: η²⁴, Δ, E₄, j, the level-2 Hauptmodul Δ(τ)/Δ(2τ)
//! and 1/j.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::str::FromStr;

use super::LaurentSeries;
use crate::error::{Error, Result};

/// The series this crate can construct by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedSeries {
    Eta24,
    Delta,
    E4,
    J,
    Hauptmodul,
    JInverse,
}

impl NamedSeries {
    /// Valuation (lowest exponent) of the full expansion.
    pub fn valuation(self) -> i64 {
        match self {
            NamedSeries::Eta24 | NamedSeries::Delta | NamedSeries::JInverse => 1,
            NamedSeries::E4 => 0,
            NamedSeries::J | NamedSeries::Hauptmodul => -1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            NamedSeries::Eta24 => "eta24",
            NamedSeries::Delta => "delta",
            NamedSeries::E4 => "e4",
            NamedSeries::J => "j",
            NamedSeries::Hauptmodul => "hauptmodul",
            NamedSeries::JInverse => "j_inverse",
        }
    }
}

impl FromStr for NamedSeries {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "eta24" => Ok(NamedSeries::Eta24),
            "delta" => Ok(NamedSeries::Delta),
            "e4" => Ok(NamedSeries::E4),
            "j" => Ok(NamedSeries::J),
            "hauptmodul" => Ok(NamedSeries::Hauptmodul),
            "j_inverse" | "j-inverse" => Ok(NamedSeries::JInverse),
            other => Err(Error::UnknownSeries(other.to_string())),
        }
    }
}

/// Exact expansion of the named series on the window `[valuation, order)`.
pub fn named_series(name: NamedSeries, order: i64) -> Result<LaurentSeries> {
    if order <= name.valuation() {
        return Err(Error::OrderTooSmall {
            order,
            valuation: name.valuation(),
        });
    }
    match name {
        NamedSeries::Eta24 | NamedSeries::Delta => delta(order),
        NamedSeries::E4 => e4(order),
        NamedSeries::J => {
            // j = E4^3 / Delta; build with margin, clip to the request.
            let t = order + 2;
            let j = e4(t)?.pow(3)?.mul(&delta(t)?.invert()?);
            debug_assert!(j.truncation() >= order);
            j.truncated(order)
        }
        NamedSeries::Hauptmodul => {
            // Delta(tau) / Delta(2*tau)
            let t = order + 2;
            let d = delta(t)?;
            let h = d.mul(&d.dilate(2)?.invert()?);
            debug_assert!(h.truncation() >= order);
            h.truncated(order)
        }
        NamedSeries::JInverse => named_series(NamedSeries::J, (order - 2).max(0))?.invert(),
    }
}

/// `prod_{n>=1} (1 - q^n)` on `[0, order)` via the pentagonal number theorem:
/// exponents k(3k-1)/2 for k in Z, sign (-1)^k.
pub(crate) fn euler_product(order: i64) -> Result<LaurentSeries> {
    if order < 1 {
        return Err(Error::OrderTooSmall {
            order,
            valuation: 0,
        });
    }
    let mut coeffs = vec![BigInt::zero(); order as usize];
    coeffs[0] = BigInt::one();
    let mut k: i64 = 1;
    loop {
        let g1 = k * (3 * k - 1) / 2;
        let g2 = k * (3 * k + 1) / 2;
        if g1 >= order && g2 >= order {
            break;
        }
        let sign = if k % 2 == 1 { -1 } else { 1 };
        for g in [g1, g2] {
            if g < order {
                coeffs[g as usize] += sign;
            }
        }
        k += 1;
    }
    LaurentSeries::from_coeffs(0, coeffs)
}

// Delta = eta^24 = q * euler_product^24.
fn delta(order: i64) -> Result<LaurentSeries> {
    let p24 = euler_product(order - 1)?.pow(24)?;
    Ok(p24.mul(&LaurentSeries::monomial(1, order)?))
}

// E4 = 1 + 240 * sum sigma_3(n) q^n.
fn e4(order: i64) -> Result<LaurentSeries> {
    let n = order as usize;
    let mut s3 = vec![0u128; n];
    for d in 1..n as u128 {
        let cube = d * d * d;
        let mut m = d as usize;
        while m < n {
            s3[m] += cube;
            m += d as usize;
        }
    }
    let coeffs = s3
        .iter()
        .enumerate()
        .map(|(i, &s)| {
            if i == 0 {
                BigInt::one()
            } else {
                BigInt::from(s) * 240
            }
        })
        .collect();
    LaurentSeries::from_coeffs(0, coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hauptmodul_head_matches_classical_table() {
        let h = named_series(NamedSeries::Hauptmodul, 7).unwrap();
        assert_eq!(h.valuation(), -1);
        assert_eq!(h.truncation(), 7);
        let want: [i64; 8] = [1, -24, 276, -2048, 11202, -49152, 184024, -614400];
        for (i, w) in want.iter().enumerate() {
            assert_eq!(
                h.coeff(i as i64 - 1).unwrap(),
                BigInt::from(*w),
                "c({})",
                i as i64 - 1
            );
        }
    }

    #[test]
    fn j_head() {
        let j = named_series(NamedSeries::J, 2).unwrap();
        assert_eq!(j.coeff(-1).unwrap(), BigInt::one());
        assert_eq!(j.coeff(0).unwrap(), BigInt::from(744));
        assert_eq!(j.coeff(1).unwrap(), BigInt::from(196884));
    }

    #[test]
    fn delta_leading_term() {
        let d = named_series(NamedSeries::Delta, 3).unwrap();
        assert_eq!(d.valuation(), 1);
        assert_eq!(d.coeff(1).unwrap(), BigInt::one());
        assert_eq!(d.coeff(2).unwrap(), BigInt::from(-24));
    }

    #[test]
    fn e4_head() {
        let e = named_series(NamedSeries::E4, 4).unwrap();
        assert_eq!(e.coeff(0).unwrap(), BigInt::one());
        assert_eq!(e.coeff(1).unwrap(), BigInt::from(240));
        assert_eq!(e.coeff(2).unwrap(), BigInt::from(2160));
        assert_eq!(e.coeff(3).unwrap(), BigInt::from(6720));
    }

    #[test]
    fn j_inverse_head_alternates() {
        let ji = named_series(NamedSeries::JInverse, 5).unwrap();
        assert_eq!(ji.valuation(), 1);
        assert_eq!(ji.coeff(1).unwrap(), BigInt::one());
        assert_eq!(ji.coeff(2).unwrap(), BigInt::from(-744));
        assert_eq!(ji.coeff(3).unwrap(), BigInt::from(356652));
        assert_eq!(ji.coeff(4).unwrap(), BigInt::from(-140361152));
    }

    #[test]
    fn hauptmodul_times_dilated_delta_is_delta() {
        let h = named_series(NamedSeries::Hauptmodul, 12).unwrap();
        let d = named_series(NamedSeries::Delta, 14).unwrap();
        let lhs = h.mul(&d.dilate(2).unwrap());
        assert!(lhs.agrees_with(&d));
    }

    #[test]
    fn unknown_name_and_small_order() {
        assert!(matches!(
            "weierstrass".parse::<NamedSeries>(),
            Err(Error::UnknownSeries(_))
        ));
        assert!(matches!(
            named_series(NamedSeries::J, -1),
            Err(Error::OrderTooSmall { .. })
        ));
        assert!(matches!(
            named_series(NamedSeries::Delta, 1),
            Err(Error::OrderTooSmall { .. })
        ));
    }

    #[test]
    fn name_round_trip() {
        for n in [
            NamedSeries::Eta24,
            NamedSeries::Delta,
            NamedSeries::E4,
            NamedSeries::J,
            NamedSeries::Hauptmodul,
            NamedSeries::JInverse,
        ] {
            assert_eq!(n.name().parse::<NamedSeries>().unwrap(), n);
        }
    }
}
