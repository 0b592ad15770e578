//! Traces of singular moduli.
//!
//! `t(d)` is the stabilizer-weighted sum of `j(alpha_Q) - 744` over the
//! reduced forms of discriminant `-d`, with the conventions `t(0) = 2`,
//! `t(-1) = -1` and `t(d) = 0` for `d < -1` or `d = 1, 2 (mod 4)`.
//!
//! Evaluation is numerical but validated: the weighted sum is computed at
//! a precision chosen from `d`, must round to an integer with residual
//! below `1e-6`, and escalates precision (at most three doublings) before
//! reporting a hard error. Nothing is ever silently rounded.

mod cache;

pub use cache::{CacheWarning, TraceCache};

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use crate::bqf::enumerate_reduced;
use crate::error::{Error, Result};
use crate::numerics::{qparam, BigComplex, BigFloat};
use crate::qseries::{named_series, NamedSeries};

/// One computed trace: the unit of the persistent cache.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceRecord {
    pub d: i64,
    pub t: BigInt,
    pub class_size: u32,
    pub precision_bits: u32,
}

/// Result of a bulk [`TraceEngine::trace_table`] run.
#[derive(Debug)]
pub struct TraceTable {
    /// Records for every valid `d` in the requested range, sorted by `d`.
    pub records: Vec<TraceRecord>,
    /// How many records were evaluated in this run.
    pub computed: usize,
    /// How many came from the cache (file or in-memory memo).
    pub cache_hits: usize,
    /// Parse problems found in the cache file, if any.
    pub warnings: Vec<CacheWarning>,
}

/// Shared state for trace computation: the j-expansion used at CM points,
/// an in-memory memo of finished traces, and an evaluation counter.
///
/// All methods take `&self`; the engine can be shared across threads and
/// `trace_table` partitions its range over the rayon pool.
pub struct TraceEngine {
    j_coeffs: Mutex<Vec<BigInt>>, // index i holds a(i-1); a(-1) = 1
    memo: Mutex<BTreeMap<i64, TraceRecord>>,
    evals: AtomicU64,
}

impl Default for TraceEngine {
    fn default() -> Self {
        Self::new()
    }
}

/// Working precision for discriminant `d`: the principal form contributes
/// `|1/q| = e^{pi sqrt(d)}`, so that many bits are needed before anything
/// else, plus 64 guard bits and a class-size margin. Floored at 128.
pub fn precision_policy(d: i64) -> u32 {
    let d = d.max(3) as f64;
    let main = (std::f64::consts::PI * d.sqrt() / std::f64::consts::LN_2).ceil() as u32;
    let margin = 8 * ((d + 2.0).log2().ceil() as u32);
    (main + 64 + margin).max(128)
}

/// Smallest series cutoff `M` with
/// `pi sqrt(3) M - 4 pi sqrt(M) >= (p + 8) ln 2`: beyond it the q-series
/// tail of `j` at a reduced CM point is below the precision target, using
/// `|q| <= e^{-pi sqrt(3)}` and `|a(n)| <= e^{4 pi sqrt(n)}`.
pub fn series_cutoff(p: u32) -> usize {
    use std::f64::consts::{LN_2, PI};
    let target = (p as f64 + 8.0) * LN_2;
    // solve pi sqrt(3) s^2 - 4 pi s = target for s = sqrt(M)
    let a = PI * 3f64.sqrt();
    let s = (4.0 * PI + (16.0 * PI * PI + 4.0 * a * target).sqrt()) / (2.0 * a);
    let mut m = (s * s).ceil() as usize;
    while PI * 3f64.sqrt() * m as f64 - 4.0 * PI * (m as f64).sqrt() < target {
        m += 1;
    }
    m.max(1)
}

impl TraceEngine {
    pub fn new() -> Self {
        TraceEngine {
            j_coeffs: Mutex::new(Vec::new()),
            memo: Mutex::new(BTreeMap::new()),
            evals: AtomicU64::new(0),
        }
    }

    /// Number of `eval_j` calls performed so far (cache-hit diagnostics).
    pub fn evals_performed(&self) -> u64 {
        self.evals.load(Ordering::Relaxed)
    }

    /// Seed the in-memory memo, e.g. from a previously loaded cache.
    pub fn preload(&self, records: impl IntoIterator<Item = TraceRecord>) {
        let mut memo = self.memo.lock().unwrap();
        for r in records {
            memo.entry(r.d).or_insert(r);
        }
    }

    // j-expansion coefficients a(-1)..a(upto), cloned out of the shared
    // cache, extending it if needed.
    fn j_coefficients(&self, upto: usize) -> Vec<BigInt> {
        let mut guard = self.j_coeffs.lock().unwrap();
        if guard.len() < upto + 2 {
            let series =
                named_series(NamedSeries::J, upto as i64 + 1).expect("j-series construction");
            *guard = (-1..=upto as i64)
                .map(|n| series.coeff(n).expect("coefficient in window"))
                .collect();
        }
        guard[..upto + 2].to_vec()
    }

    /// `j(alpha)` by its q-expansion, for `alpha` at or above the
    /// fundamental-domain floor `Im >= sqrt(3)/2` (roots of reduced forms).
    pub fn eval_j(&self, alpha: &BigComplex, p: u32) -> Result<BigComplex> {
        let im = alpha.im().to_f64();
        // slack below sqrt(3)/2 only forgives rounding, not unreduced forms
        if im < 0.8660254037844386 - 1e-3 {
            return Err(Error::ImaginaryPartTooSmall { im });
        }
        self.evals.fetch_add(1, Ordering::Relaxed);
        let w = p + 16;
        let cutoff = series_cutoff(p);
        let coeffs = self.j_coefficients(cutoff);
        let q = qparam(alpha, w)?;
        // Horner over a(cutoff) .. a(1), then + 744 + 1/q
        let mut acc = BigComplex::from_real(BigFloat::from_bigint(&coeffs[cutoff + 1], w));
        for n in (1..cutoff).rev() {
            acc = acc
                .mul(&q)
                .add_real(&BigFloat::from_bigint(&coeffs[n + 1], w));
        }
        let tail = acc.mul(&q);
        let jval = tail
            .add_real(&BigFloat::from_i64(744, w))
            .add(&q.recip()?);
        Ok(BigComplex::new(
            jval.re().with_prec(p),
            jval.im().with_prec(p),
        ))
    }

    /// `t(d)` with the conventions, memoized for `d >= 3`.
    pub fn trace(&self, d: i64) -> Result<BigInt> {
        match d {
            i64::MIN..=-2 => Ok(BigInt::zero()),
            -1 => Ok(BigInt::from(-1)),
            0 => Ok(BigInt::from(2)),
            _ if d % 4 == 1 || d % 4 == 2 => Ok(BigInt::zero()),
            _ => Ok(self.trace_record(d)?.t),
        }
    }

    /// Full record for a valid discriminant (`d >= 3`, `d = 0, 3 (mod 4)`).
    pub fn trace_record(&self, d: i64) -> Result<TraceRecord> {
        if d < 3 || !matches!(d % 4, 0 | 3) {
            return Err(Error::InvalidDiscriminant(d));
        }
        if let Some(r) = self.memo.lock().unwrap().get(&d) {
            return Ok(r.clone());
        }
        let record = self.compute_trace(d)?;
        self.memo
            .lock()
            .unwrap()
            .entry(d)
            .or_insert_with(|| record.clone());
        Ok(record)
    }

    fn compute_trace(&self, d: i64) -> Result<TraceRecord> {
        let forms = enumerate_reduced(d)?;
        let class_size = forms.len() as u32;
        let base = precision_policy(d);
        let threshold = BigFloat::from_ratio(1, 1_000_000, 64).unwrap();
        let mut p = base;
        let mut last_residual = f64::NAN;
        for retry in 0..=3u32 {
            let mut sum_re = BigFloat::zero(p);
            let mut sum_im = BigFloat::zero(p);
            let offset = BigFloat::from_i64(-744, p);
            for f in &forms {
                let jval = self.eval_j(&f.root(p)?, p)?;
                let term = jval.re().add(&offset);
                let w = f.stabilizer_order();
                sum_re = sum_re.add(&if w == 1 { term } else { term.div_small(w as i64)? });
                sum_im = sum_im.add(jval.im());
            }
            let t = sum_re.to_nearest_int();
            let residual = sum_re.sub(&BigFloat::from_bigint(&t, p)).abs();
            if residual.cmp_val(&threshold).is_lt() && sum_im.abs().cmp_val(&threshold).is_lt() {
                return Ok(TraceRecord {
                    d,
                    t,
                    class_size,
                    precision_bits: p,
                });
            }
            last_residual = residual.to_f64();
            if retry < 3 {
                p *= 2;
            }
        }
        Err(Error::TraceResidual {
            d,
            residual: last_residual,
            retries: 3,
        })
    }

    /// Records for every `d = 0, 3 (mod 4)` in `[3, d_max]`. With a cache
    /// path, hits are loaded first and the updated table is written back in
    /// canonical form; missing entries are computed in parallel.
    pub fn trace_table(&self, d_max: i64, cache_path: Option<&Path>) -> Result<TraceTable> {
        if d_max < 3 {
            return Err(Error::RangeTooSmall("trace_table", 3));
        }
        let mut warnings = Vec::new();
        let mut persistent = match cache_path {
            Some(path) => {
                let loaded = TraceCache::load(path)?;
                warnings = loaded.warnings;
                self.preload(loaded.records.values().cloned());
                loaded.records
            }
            None => BTreeMap::new(),
        };

        let targets: Vec<i64> = (3..=d_max).filter(|d| matches!(d % 4, 0 | 3)).collect();
        let missing: Vec<i64> = {
            let memo = self.memo.lock().unwrap();
            targets.iter().copied().filter(|d| !memo.contains_key(d)).collect()
        };
        let computed = missing.len();
        let cache_hits = targets.len() - computed;

        let fresh: Vec<TraceRecord> = missing
            .par_iter()
            .map(|&d| self.compute_trace(d))
            .collect::<Result<_>>()?;
        {
            let mut memo = self.memo.lock().unwrap();
            for r in fresh {
                memo.entry(r.d).or_insert(r);
            }
        }

        let memo = self.memo.lock().unwrap();
        let records: Vec<TraceRecord> = targets.iter().map(|d| memo[d].clone()).collect();
        if let Some(path) = cache_path {
            for r in &records {
                persistent.insert(r.d, r.clone());
            }
            TraceCache::save(path, persistent.values())?;
        }
        Ok(TraceTable {
            records,
            computed,
            cache_hits,
            warnings,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_j_close(engine: &TraceEngine, alpha: &BigComplex, p: u32, want: i64) {
        let j = engine.eval_j(alpha, p).unwrap();
        let err = j.re().sub(&BigFloat::from_i64(want, p)).abs();
        let tol = BigFloat::from_ratio(1, 1 << 30, 64).unwrap();
        assert!(
            err.cmp_val(&tol).is_lt(),
            "j = {} expected {want}",
            j.re()
        );
        assert!(j.im().abs().cmp_val(&tol).is_lt());
    }

    #[test]
    fn eval_j_at_i_rho_2i() {
        let engine = TraceEngine::new();
        let p = 160;
        let i_pt = BigComplex::new(BigFloat::zero(p), BigFloat::one(p));
        assert_j_close(&engine, &i_pt, p, 1728);

        let rho = BigComplex::new(
            BigFloat::from_ratio(-1, 2, p).unwrap(),
            BigFloat::from_i64(3, p).sqrt().unwrap().mul_pow2(-1),
        );
        assert_j_close(&engine, &rho, p, 0);

        let two_i = BigComplex::new(BigFloat::zero(p), BigFloat::from_i64(2, p));
        assert_j_close(&engine, &two_i, p, 287496);
    }

    #[test]
    fn eval_j_rejects_low_points() {
        let engine = TraceEngine::new();
        let low = BigComplex::new(BigFloat::zero(64), BigFloat::from_ratio(1, 2, 64).unwrap());
        assert!(matches!(
            engine.eval_j(&low, 64),
            Err(Error::ImaginaryPartTooSmall { .. })
        ));
    }

    #[test]
    fn trace_conventions() {
        let engine = TraceEngine::new();
        assert_eq!(engine.trace(0).unwrap(), BigInt::from(2));
        assert_eq!(engine.trace(-1).unwrap(), BigInt::from(-1));
        for d in [-2, -5, -100, 1, 2, 5, 6, 9, 10, 401] {
            if d > 0 && matches!(d % 4, 0 | 3) {
                continue;
            }
            assert_eq!(engine.trace(d).unwrap(), BigInt::zero(), "t({d})");
        }
        // no CM evaluation happens for convention values
        assert_eq!(engine.evals_performed(), 0);
    }

    #[test]
    fn traces_of_small_discriminants() {
        let engine = TraceEngine::new();
        let table: [(i64, i64); 12] = [
            (3, -248),
            (4, 492),
            (7, -4119),
            (8, 7256),
            (11, -33512),
            (12, 53008),
            (15, -192513),
            (16, 287244),
            (19, -885480),
            (20, 1262512),
            (23, -3493982),
            (24, 4833456),
        ];
        for (d, want) in table {
            assert_eq!(engine.trace(d).unwrap(), BigInt::from(want), "t({d})");
        }
    }

    #[test]
    fn trace_record_structure() {
        let engine = TraceEngine::new();
        let r = engine.trace_record(12).unwrap();
        assert_eq!(r.t, BigInt::from(53008));
        assert_eq!(r.class_size, 2); // [1,0,3] and [2,2,2]
        assert_eq!(r.precision_bits, precision_policy(12));
        assert!(matches!(
            engine.trace_record(5),
            Err(Error::InvalidDiscriminant(5))
        ));
    }

    #[test]
    fn large_discriminant_spot_checks() {
        // frozen from an independent high-precision evaluation
        let engine = TraceEngine::new();
        assert_eq!(
            engine.trace(160).unwrap(),
            BigInt::parse_bytes(b"181195520250329136", 10).unwrap()
        );
        assert_eq!(
            engine.trace(400).unwrap(),
            BigInt::parse_bytes(b"1938773508354916749344893500", 10).unwrap()
        );
    }

    #[test]
    fn trace_table_ranges_and_counts() {
        let engine = TraceEngine::new();
        let table = engine.trace_table(4, None).unwrap();
        assert_eq!(
            table.records.iter().map(|r| (r.d, r.t.clone())).collect::<Vec<_>>(),
            vec![(3, BigInt::from(-248)), (4, BigInt::from(492))]
        );
        let table = engine.trace_table(12, None).unwrap();
        assert_eq!(table.records.len(), 6);
        assert_eq!(
            table.records.iter().map(|r| r.d).collect::<Vec<_>>(),
            vec![3, 4, 7, 8, 11, 12]
        );
        assert!(engine.trace_table(2, None).is_err());
    }

    #[test]
    fn determinism_across_engines() {
        let a = TraceEngine::new().trace_table(48, None).unwrap();
        let b = TraceEngine::new().trace_table(48, None).unwrap();
        assert_eq!(a.records, b.records);
    }

    #[test]
    fn memo_means_zero_reevaluations() {
        let engine = TraceEngine::new();
        engine.trace(23).unwrap();
        let evals = engine.evals_performed();
        assert!(evals > 0);
        engine.trace(23).unwrap();
        assert_eq!(engine.evals_performed(), evals);
    }

    #[test]
    fn sign_law_holds_on_small_range() {
        let engine = TraceEngine::new();
        for r in engine.trace_table(48, None).unwrap().records {
            if r.d % 4 == 0 {
                assert!(r.t > BigInt::zero(), "t({}) sign", r.d);
            } else {
                assert!(r.t < BigInt::zero(), "t({}) sign", r.d);
            }
        }
    }

    #[test]
    fn precision_policy_shape() {
        assert_eq!(precision_policy(3), 128); // floored
        let p160 = precision_policy(160);
        assert!(p160 >= 180 && p160 <= 200, "{p160}");
        assert!(precision_policy(400) > precision_policy(160));
        // cutoff grows with precision and stays desk-scale
        assert!(series_cutoff(128) >= 20);
        assert!(series_cutoff(512) < 120);
    }
}
