//! Persistent trace cache.
//!
//! UTF-8 CSV with header `d,t,class_size,precision_bits`, one record per
//! line, `d` strictly increasing, LF endings, decimal integers without
//! padding. Corrupt lines are skipped with a warning carrying the line
//! number; saving always writes the canonical form, so a load/save round
//! trip of a canonical file is byte-identical.

use num_bigint::BigInt;
use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::path::Path;

use super::TraceRecord;
use crate::error::{Error, Result};

const HEADER: &str = "d,t,class_size,precision_bits";

/// A cache line that could not be used, with its 1-based line number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CacheWarning {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for CacheWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cache line {}: {}", self.line, self.message)
    }
}

/// Loaded cache contents.
#[derive(Debug, Default)]
pub struct TraceCache {
    pub records: BTreeMap<i64, TraceRecord>,
    pub warnings: Vec<CacheWarning>,
}

impl TraceCache {
    /// Read a cache file. A missing file is an empty cache; unreadable
    /// bytes are an error; individually corrupt lines are skipped and
    /// reported.
    pub fn load(path: &Path) -> Result<TraceCache> {
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
                return Ok(TraceCache::default())
            }
            Err(e) => {
                return Err(Error::CacheIo {
                    path: path.display().to_string(),
                    source: e,
                })
            }
        };
        let mut cache = TraceCache::default();
        let mut warn = |line: usize, message: String| {
            cache_warn(&mut cache.warnings, line, message);
        };
        let mut last_d: Option<i64> = None;
        for (idx, line) in text.lines().enumerate() {
            let lineno = idx + 1;
            if idx == 0 {
                if line != HEADER {
                    warn(lineno, format!("expected header `{HEADER}`"));
                }
                continue;
            }
            if line.is_empty() {
                continue;
            }
            match parse_line(line) {
                Ok(rec) => {
                    if last_d.is_some_and(|prev| rec.d <= prev) {
                        warn(lineno, format!("d={} out of order, skipped", rec.d));
                        continue;
                    }
                    last_d = Some(rec.d);
                    cache.records.insert(rec.d, rec);
                }
                Err(msg) => warn(lineno, msg),
            }
        }
        Ok(cache)
    }

    /// Write the canonical form: header plus records sorted by `d`.
    pub fn save<'a>(path: &Path, records: impl Iterator<Item = &'a TraceRecord>) -> Result<()> {
        let io_err = |e| Error::CacheIo {
            path: path.display().to_string(),
            source: e,
        };
        let mut buf = String::from(HEADER);
        buf.push('\n');
        let mut sorted: Vec<&TraceRecord> = records.collect();
        sorted.sort_by_key(|r| r.d);
        for r in sorted {
            buf.push_str(&format!(
                "{},{},{},{}\n",
                r.d, r.t, r.class_size, r.precision_bits
            ));
        }
        let mut file = std::fs::File::create(path).map_err(io_err)?;
        file.write_all(buf.as_bytes()).map_err(io_err)?;
        Ok(())
    }
}

fn cache_warn(warnings: &mut Vec<CacheWarning>, line: usize, message: String) {
    warnings.push(CacheWarning { line, message });
}

fn parse_line(line: &str) -> std::result::Result<TraceRecord, String> {
    let fields: Vec<&str> = line.split(',').collect();
    if fields.len() != 4 {
        return Err(format!("expected 4 fields, found {}", fields.len()));
    }
    let d: i64 = fields[0]
        .parse()
        .map_err(|_| format!("bad discriminant `{}`", fields[0]))?;
    let t: BigInt = fields[1]
        .parse()
        .map_err(|_| format!("bad trace `{}`", fields[1]))?;
    let class_size: u32 = fields[2]
        .parse()
        .map_err(|_| format!("bad class size `{}`", fields[2]))?;
    let precision_bits: u32 = fields[3]
        .parse()
        .map_err(|_| format!("bad precision `{}`", fields[3]))?;
    Ok(TraceRecord {
        d,
        t,
        class_size,
        precision_bits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::traces::TraceEngine;

    fn tmp(name: &str) -> std::path::PathBuf {
        let mut p = std::env::temp_dir();
        p.push(format!("trace-cache-{name}-{}", std::process::id()));
        p
    }

    #[test]
    fn round_trip_is_byte_identical() {
        let path = tmp("roundtrip");
        let engine = TraceEngine::new();
        engine.trace_table(12, Some(&path)).unwrap();
        let first = std::fs::read(&path).unwrap();
        // reload and save again without computing anything
        let loaded = TraceCache::load(&path).unwrap();
        assert!(loaded.warnings.is_empty());
        TraceCache::save(&path, loaded.records.values()).unwrap();
        let second = std::fs::read(&path).unwrap();
        assert_eq!(first, second);
        assert!(first.ends_with(b"\n"));
        assert!(!String::from_utf8(first).unwrap().contains("\r"));
        std::fs::remove_file(&path).ok();
    }

    #[test]
    fn second_run_hits_cache_without_evaluations() {
        let path = tmp("hits");
        TraceEngine::new().trace_table(8, Some(&path)).unwrap();
        let engine = TraceEngine::new();
        let table = engine.trace_table(8, Some(&path)).unwrap();
        assert_eq!(engine.evals_performed(), 0);
        assert_eq!(table.cache_hits, 4); // d = 3, 4, 7, 8
        assert_eq!(table.computed, 0);
        std::fs::remove_file(&path).ok();
    }

    #[test]
    fn corrupt_lines_are_skipped_with_line_numbers() {
        let path = tmp("corrupt");
        std::fs::write(
            &path,
            "d,t,class_size,precision_bits\n3,-248,1,128\nnot,a,number\n4,492,1\n8,7256,1,144\n",
        )
        .unwrap();
        let loaded = TraceCache::load(&path).unwrap();
        assert_eq!(
            loaded.records.keys().copied().collect::<Vec<_>>(),
            vec![3, 8]
        );
        let lines: Vec<usize> = loaded.warnings.iter().map(|w| w.line).collect();
        assert_eq!(lines, vec![3, 4]);
        assert!(loaded.warnings[0].to_string().contains("line 3"));

        // computation proceeds, replacing the lost entries
        let engine = TraceEngine::new();
        let table = engine.trace_table(8, Some(&path)).unwrap();
        assert_eq!(table.records.len(), 4);
        assert_eq!(table.computed, 2); // d = 4 and 7
        let reloaded = TraceCache::load(&path).unwrap();
        assert!(reloaded.warnings.is_empty());
        assert_eq!(reloaded.records.len(), 4);
        std::fs::remove_file(&path).ok();
    }

    #[test]
    fn out_of_order_entries_are_rejected() {
        let path = tmp("order");
        std::fs::write(
            &path,
            "d,t,class_size,precision_bits\n8,7256,1,144\n3,-248,1,128\n",
        )
        .unwrap();
        let loaded = TraceCache::load(&path).unwrap();
        assert_eq!(loaded.records.keys().copied().collect::<Vec<_>>(), vec![8]);
        assert_eq!(loaded.warnings.len(), 1);
        std::fs::remove_file(&path).ok();
    }

    #[test]
    fn missing_file_is_empty_cache() {
        let loaded = TraceCache::load(Path::new("/nonexistent/trace.csv")).unwrap();
        assert!(loaded.records.is_empty());
        assert!(loaded.warnings.is_empty());
    }
}
