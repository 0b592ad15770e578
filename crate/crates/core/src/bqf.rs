//! Positive-definite integral binary quadratic forms.
//!
//! Gauss reduction, enumeration of the reduced representatives of
//! discriminant `-d` (imprimitive forms included), stabilizer orders,
//! Hurwitz class numbers and CM roots.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::numerics::{BigComplex, BigFloat};

/// The form `a X^2 + b X Y + c Y^2` with discriminant `b^2 - 4ac`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct QuadraticForm {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

/// A Gauss-reduced positive-definite form: `|b| <= a <= c`, with `b >= 0`
/// whenever `|b| = a` or `a = c`. One per Γ-orbit.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ReducedForm(QuadraticForm);

impl QuadraticForm {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>) -> Self {
        QuadraticForm {
            a: a.into(),
            b: b.into(),
            c: c.into(),
        }
    }

    pub fn discriminant(&self) -> BigInt {
        &self.b * &self.b - 4 * &self.a * &self.c
    }

    pub fn is_positive_definite(&self) -> bool {
        self.a.is_positive() && self.discriminant().is_negative()
    }

    fn not_positive_definite(&self) -> Error {
        Error::NotPositiveDefinite {
            a: self.a.to_string(),
            b: self.b.to_string(),
            c: self.c.to_string(),
        }
    }

    /// Action of `[[1, k], [0, 1]]`: substitute `X -> X + kY`.
    pub fn translate(&self, k: i64) -> Self {
        let a = self.a.clone();
        let b = &self.b + 2 * k * &self.a;
        let c = k * k * &self.a + k * &self.b + &self.c;
        QuadraticForm { a, b, c }
    }

    /// The root of `Q(X, 1)` in the upper half plane:
    /// `alpha = (-b + i sqrt(d)) / (2a)` with `d = -disc`.
    pub fn root(&self, prec: u32) -> Result<BigComplex> {
        if !self.is_positive_definite() {
            return Err(self.not_positive_definite());
        }
        let w = prec + 8;
        let d = -self.discriminant();
        let two_a = BigFloat::from_bigint(&(2 * &self.a), w);
        let re = BigFloat::from_bigint(&-&self.b, w).div(&two_a)?;
        let im = BigFloat::from_bigint(&d, w).sqrt()?.div(&two_a)?;
        Ok(BigComplex::new(re.with_prec(prec), im.with_prec(prec)))
    }
}

impl ReducedForm {
    pub fn form(&self) -> &QuadraticForm {
        &self.0
    }

    pub fn discriminant(&self) -> BigInt {
        self.0.discriminant()
    }

    pub fn root(&self, prec: u32) -> Result<BigComplex> {
        self.0.root(prec)
    }

    fn satisfies_invariants(f: &QuadraticForm) -> bool {
        let ab = f.b.abs();
        if ab > f.a || f.a > f.c {
            return false;
        }
        if (ab == f.a || f.a == f.c) && f.b.is_negative() {
            return false;
        }
        true
    }

    /// Size of the projective stabilizer: 3 for `[a,a,a]`, 2 for `[a,0,a]`,
    /// 1 otherwise.
    pub fn stabilizer_order(&self) -> u32 {
        let f = &self.0;
        if f.a == f.b && f.b == f.c {
            3
        } else if f.b.is_zero() && f.a == f.c {
            2
        } else {
            1
        }
    }
}

/// Gauss reduction: alternate translation of `b` into `(-a, a]` with the
/// swap `(a, b, c) -> (c, -b, a)` while `a > c`, then normalize the sign
/// of `b` on the boundary. `a` strictly decreases away from the boundary,
/// so this terminates.
pub fn reduce_form(f: &QuadraticForm) -> Result<ReducedForm> {
    if !f.is_positive_definite() {
        return Err(f.not_positive_definite());
    }
    let d = -f.discriminant();
    let mut a = f.a.clone();
    let mut b = f.b.clone();
    let mut c = f.c.clone();
    loop {
        if c < a {
            std::mem::swap(&mut a, &mut c);
            b = -b;
        }
        if b.abs() > a {
            // shift b into (-a, a]; c follows from the fixed discriminant
            let two_a = 2 * &a;
            let k = (&a - &b).div_floor(&two_a);
            b += k * two_a;
            c = (&b * &b + &d) / (4 * &a);
            continue;
        }
        if c < a {
            continue;
        }
        break;
    }
    if (b.abs() == a || a == c) && b.is_negative() {
        b = -b;
    }
    let reduced = QuadraticForm { a, b, c };
    debug_assert!(ReducedForm::satisfies_invariants(&reduced));
    debug_assert_eq!(reduced.discriminant(), f.discriminant());
    Ok(ReducedForm(reduced))
}

/// All reduced forms of discriminant `-d`, imprimitive ones included,
/// ordered by `(a, b)`.
///
/// For each `b >= 0` of the right parity with `3b^2 <= d`, every divisor
/// `a` of `m = (b^2 + d)/4` with `b <= a <= sqrt(m)` yields `[a, b, m/a]`,
/// plus the mirror `[a, -b, m/a]` when `0 < b < a < m/a`.
pub fn enumerate_reduced(d: i64) -> Result<Vec<ReducedForm>> {
    if d < 3 || !matches!(d % 4, 0 | 3) {
        return Err(Error::InvalidDiscriminant(d));
    }
    let mut out = Vec::new();
    let mut b = d % 2; // b^2 = -d (mod 4) forces b = d (mod 2)
    while 3 * b * b <= d {
        let m = (b * b + d) / 4;
        let mut a = b.max(1);
        while a * a <= m {
            if m % a == 0 && a >= b {
                let c = m / a;
                out.push(ReducedForm(QuadraticForm::new(a, b, c)));
                if 0 < b && b < a && a < c {
                    out.push(ReducedForm(QuadraticForm::new(a, -b, c)));
                }
            }
            a += 1;
        }
        b += 2;
    }
    out.sort_by(|x, y| (&x.0.a, &x.0.b).cmp(&(&y.0.a, &y.0.b)));
    debug_assert!(out
        .iter()
        .all(|f| ReducedForm::satisfies_invariants(&f.0) && f.discriminant() == BigInt::from(-d)));
    Ok(out)
}

/// Hurwitz class number `H(d) = sum over reduced forms of 1/w_Q`, exact.
pub fn hurwitz_class_number(d: i64) -> Result<Ratio<u64>> {
    let forms = enumerate_reduced(d)?;
    Ok(forms
        .iter()
        .map(|f| Ratio::new(1, f.stabilizer_order() as u64))
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qf(a: i64, b: i64, c: i64) -> QuadraticForm {
        QuadraticForm::new(a, b, c)
    }

    fn forms_as_tuples(d: i64) -> Vec<(i64, i64, i64)> {
        enumerate_reduced(d)
            .unwrap()
            .iter()
            .map(|f| {
                let q = f.form();
                (
                    i64::try_from(&q.a).unwrap(),
                    i64::try_from(&q.b).unwrap(),
                    i64::try_from(&q.c).unwrap(),
                )
            })
            .collect()
    }

    #[test]
    fn reduce_already_reduced() {
        let f = qf(1, 0, 1);
        let r = reduce_form(&f).unwrap();
        assert_eq!(r.form(), &f);
    }

    #[test]
    fn reduce_gamma_translate_of_principal_form() {
        // [1,5,7] is [1,1,1] shifted by X -> X + 2Y
        assert_eq!(qf(1, 1, 1).translate(2), qf(1, 5, 7));
        let r = reduce_form(&qf(1, 5, 7)).unwrap();
        assert_eq!(r.form(), &qf(1, 1, 1));
        assert_eq!(r.discriminant(), BigInt::from(-3));
    }

    #[test]
    fn reduce_normalizes_boundary_sign() {
        let r = reduce_form(&qf(2, -1, 2)).unwrap();
        assert_eq!(r.form(), &qf(2, 1, 2));
    }

    #[test]
    fn reduce_is_constant_on_gamma_orbits() {
        // brute-force over translates and the inversion swap
        let seed = qf(3, 1, 5); // disc -59
        let reduced = reduce_form(&seed).unwrap();
        for k in -6..=6 {
            let t = seed.translate(k);
            assert_eq!(reduce_form(&t).unwrap(), reduced, "translate {k}");
            // S-action: (a,b,c) -> (c,-b,a)
            let s = qf(
                i64::try_from(&t.c).unwrap(),
                -i64::try_from(&t.b).unwrap(),
                i64::try_from(&t.a).unwrap(),
            );
            assert_eq!(reduce_form(&s).unwrap(), reduced, "swap of translate {k}");
        }
    }

    #[test]
    fn reduce_rejects_indefinite() {
        assert!(matches!(
            reduce_form(&qf(1, 5, 1)),
            Err(Error::NotPositiveDefinite { .. })
        ));
        assert!(reduce_form(&qf(-1, 0, -1)).is_err());
    }

    #[test]
    fn enumerate_small_discriminants() {
        assert_eq!(forms_as_tuples(3), vec![(1, 1, 1)]);
        assert_eq!(forms_as_tuples(15), vec![(1, 1, 4), (2, 1, 2)]);
        // imprimitive [2,2,2] must be present
        assert_eq!(forms_as_tuples(12), vec![(1, 0, 3), (2, 2, 2)]);
        assert_eq!(forms_as_tuples(23), vec![(1, 1, 6), (2, -1, 3), (2, 1, 3)]);
    }

    #[test]
    fn enumerate_rejects_wrong_residue() {
        for d in [1, 2, 5, 6, 9, 10] {
            assert!(matches!(
                enumerate_reduced(d),
                Err(Error::InvalidDiscriminant(_))
            ));
        }
        assert!(enumerate_reduced(-4).is_err());
    }

    #[test]
    fn stabilizer_orders() {
        let rho = reduce_form(&qf(1, 1, 1)).unwrap();
        assert_eq!(rho.stabilizer_order(), 3);
        let gauss = reduce_form(&qf(1, 0, 1)).unwrap();
        assert_eq!(gauss.stabilizer_order(), 2);
        let generic = reduce_form(&qf(1, 1, 4)).unwrap();
        assert_eq!(generic.stabilizer_order(), 1);
    }

    #[test]
    fn hurwitz_class_number_table() {
        // oracle values recomputed by exhaustive scan in `oracle_hurwitz`
        let table: [(i64, (u64, u64)); 12] = [
            (3, (1, 3)),
            (4, (1, 2)),
            (7, (1, 1)),
            (8, (1, 1)),
            (11, (1, 1)),
            (12, (4, 3)),
            (15, (2, 1)),
            (16, (3, 2)),
            (19, (1, 1)),
            (20, (2, 1)),
            (23, (3, 1)),
            (24, (2, 1)),
        ];
        for (d, (num, den)) in table {
            let h = hurwitz_class_number(d).unwrap();
            assert_eq!(h, Ratio::new(num, den), "H({d})");
            assert_eq!(h, oracle_hurwitz(d), "oracle H({d})");
        }
    }

    // Independent oracle: scan every (a, b, c) with |b| <= a <= c directly
    // from the reduced-form inequalities, no divisor logic shared with
    // `enumerate_reduced`.
    fn oracle_hurwitz(d: i64) -> Ratio<u64> {
        let mut h = Ratio::new(0, 1);
        let mut a = 1i64;
        while 3 * a * a <= d {
            for b in -a..=a {
                let num = b * b + d;
                if num % (4 * a) != 0 {
                    continue;
                }
                let c = num / (4 * a);
                if c < a {
                    continue;
                }
                if (b.abs() == a || a == c) && b < 0 {
                    continue;
                }
                let w = if a == b && b == c {
                    3
                } else if b == 0 && a == c {
                    2
                } else {
                    1
                };
                h += Ratio::new(1, w);
            }
            a += 1;
        }
        h
    }

    #[test]
    fn enumeration_matches_reduction_closure() {
        // every reduced form of disc -d reduces to itself and every random
        // form reduces into the enumerated set
        for d in [3, 4, 12, 23, 48, 163, 400] {
            if d % 4 == 1 || d % 4 == 2 {
                continue;
            }
            let forms = enumerate_reduced(d).unwrap();
            for f in &forms {
                assert_eq!(&reduce_form(f.form()).unwrap(), f);
                // a <= sqrt(d/3)
                let a = &f.form().a;
                assert!(3 * a * a <= BigInt::from(d));
            }
        }
    }

    #[test]
    fn roots_of_classical_forms() {
        let p = 128;
        // [1,0,1] -> i
        let r = qf(1, 0, 1).root(p).unwrap();
        assert!(r.re().is_zero());
        assert_eq!(r.im().with_prec(100), BigFloat::one(100));

        // [1,1,1] -> (-1 + i sqrt(3))/2
        let r = qf(1, 1, 1).root(p).unwrap();
        assert_eq!(
            r.re().with_prec(100),
            BigFloat::from_ratio(-1, 2, 100).unwrap()
        );
        let want = BigFloat::from_i64(3, p).sqrt().unwrap().mul_pow2(-1);
        assert!(r.im().sub(&want).abs().msb_exponent() < -(p as i64 - 8));

        // [2,1,2] -> (-1 + i sqrt(15))/4
        let r = qf(2, 1, 2).root(p).unwrap();
        assert_eq!(
            r.re().with_prec(100),
            BigFloat::from_ratio(-1, 4, 100).unwrap()
        );
        let want = BigFloat::from_i64(15, p)
            .sqrt()
            .unwrap()
            .div(&BigFloat::from_i64(4, p))
            .unwrap();
        assert!(r.im().sub(&want).abs().msb_exponent() < -(p as i64 - 8));

        // reduced forms live above the fundamental-domain floor
        let floor = BigFloat::from_decimal_str("0.8660254037844386467", 64).unwrap();
        for f in enumerate_reduced(48).unwrap() {
            let root = f.root(64).unwrap();
            assert!(root.im() >= &floor, "im too small for {:?}", f.form());
        }
    }
}
