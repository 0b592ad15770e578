//! Coefficient identities tying traces of singular moduli to Fourier
//! coefficients.
//!
//! All three formulas share the convention-aware trace `t(d)`: sums over
//! `r` truncate where the argument drops below `-1`, but the `t(-1) = -1`
//! term is genuinely nonzero and must be kept — dropping it silently
//! breaks `c(2)`. The braced sums are exactly divisible by `n`; that is
//! validated, not assumed.

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::traces::TraceEngine;

/// A divisor-sum request: σ(n), or the odd-divisor sum when `odd_only`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DivisorSumQuery {
    pub n: u64,
    pub odd_only: bool,
}

/// `sum of d over d | n` (optionally odd divisors only), exact.
pub fn divisor_sum(q: &DivisorSumQuery) -> u64 {
    let n = q.n;
    let mut sum = 0u64;
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            let e = n / d;
            if !q.odd_only || d % 2 == 1 {
                sum += d;
            }
            if e != d && (!q.odd_only || e % 2 == 1) {
                sum += e;
            }
        }
        d += 1;
    }
    sum
}

// sum over all integers r (both signs, r = 0 once) of t(n - r^2),
// truncated at r^2 <= n + 1 because t vanishes below -1.
fn sum_all_r(n: i64, traces: &TraceEngine) -> Result<BigInt> {
    let mut sum = traces.trace(n)?;
    let mut r = 1i64;
    while r * r <= n + 1 {
        sum += 2 * traces.trace(n - r * r)?;
        r += 1;
    }
    Ok(sum)
}

/// The Hauptmodul coefficient `c(n)` from traces:
/// `n c(n) = Σ_r t(n-r²) + (-1)^n Σ_{r odd >= 1} t(4n-r²) + 24 σ_odd(n)`.
pub fn ohta_c(n: u64, traces: &TraceEngine) -> Result<BigInt> {
    if n == 0 {
        return Err(Error::RangeTooSmall("ohta_c", 1));
    }
    let ni = n as i64;
    let mut odd_sum = BigInt::zero();
    let mut r = 1i64;
    while r * r <= 4 * ni + 1 {
        odd_sum += traces.trace(4 * ni - r * r)?;
        r += 2;
    }
    if n % 2 == 1 {
        odd_sum = -odd_sum;
    }
    let braced = sum_all_r(ni, traces)?
        + odd_sum
        + 24 * BigInt::from(divisor_sum(&DivisorSumQuery { n, odd_only: true }));
    exact_quotient("ohta_c", n, braced)
}

/// The j-invariant coefficient `a(n)` from traces:
/// `n a(n) = Σ_r t(n-r²) + Σ_{r odd >= 1} ((-1)^n t(4n-r²) - t(16n-r²))`.
pub fn kaneko_a(n: u64, traces: &TraceEngine) -> Result<BigInt> {
    if n == 0 {
        return Err(Error::RangeTooSmall("kaneko_a", 1));
    }
    let ni = n as i64;
    let mut odd_sum = BigInt::zero();
    let sign = if n % 2 == 0 { 1 } else { -1 };
    let mut r = 1i64;
    while r * r <= 16 * ni + 1 {
        odd_sum += sign * traces.trace(4 * ni - r * r)? - traces.trace(16 * ni - r * r)?;
        r += 2;
    }
    let braced = sum_all_r(ni, traces)? + odd_sum;
    exact_quotient("kaneko_a", n, braced)
}

fn exact_quotient(identity: &'static str, n: u64, braced: BigInt) -> Result<BigInt> {
    let n_big = BigInt::from(n);
    if (&braced % &n_big).is_zero() {
        Ok(braced / n_big)
    } else {
        Err(Error::IdentityDivisibility {
            identity,
            n,
            sum: braced.to_string(),
        })
    }
}

/// Both sides of the weight-3/2 trace identity for one `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZagierSum {
    /// `Σ_{|r| < 2 sqrt(n)} t(4n - r²)`, literally.
    pub computed: BigInt,
    /// `-4` when `n` is a square, `2` when `4n+1` is, `0` otherwise.
    pub expected: BigInt,
}

/// The Zagier sum with its case value. The bound `|r| < 2 sqrt(n)` is
/// strict: when `4n` is a perfect square, `r = ±2 sqrt(n)` would hit the
/// nonzero `t(0)` and is excluded.
pub fn zagier_sum(n: u64, traces: &TraceEngine) -> Result<ZagierSum> {
    if n == 0 {
        return Err(Error::RangeTooSmall("zagier_sum", 1));
    }
    let ni = n as i64;
    let mut computed = traces.trace(4 * ni)?;
    let mut r = 1i64;
    while r * r < 4 * ni {
        computed += 2 * traces.trace(4 * ni - r * r)?;
        r += 1;
    }
    let expected = if is_square(n) {
        BigInt::from(-4)
    } else if is_square(4 * n + 1) {
        BigInt::from(2)
    } else {
        BigInt::zero()
    };
    Ok(ZagierSum { computed, expected })
}

fn is_square(n: u64) -> bool {
    let r = n.sqrt();
    r * r == n
}
