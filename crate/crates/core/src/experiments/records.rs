//! Per-prime records, computed in parallel and cached as append-only CSV.

use std::fs::{self, File, OpenOptions};
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use log::info;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::sieve::{sieve_primes, ResidueClass};
use crate::classgroup::{class_data, e_from_v2h};
use crate::cyclotomic::{normalize_u_mod8, solve_pell};
use crate::error::{Error, Result};
use crate::spin::{self, SpinRecord};
use crate::symbols::SymbolValue;

pub const CACHE_ENV: &str = "SPINLAB_CACHE_DIR";

const HEADER: &str = "p,u,v,w0,w1,w2,w3,bracket_w,h,v2h,e_spin,e_lw,e_oracle";

/// Which routes to `e_p` are evaluated. The class-number oracle is applied
/// only to primes `<= oracle_to`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Routes {
    pub spin: bool,
    pub lw: bool,
    pub oracle_to: u64,
}

impl Default for Routes {
    fn default() -> Self {
        Routes {
            spin: true,
            lw: true,
            oracle_to: 0,
        }
    }
}

impl Routes {
    /// Identifies the cache file; runs with different routes never share rows.
    pub fn key(&self) -> String {
        let mut parts = Vec::new();
        if self.spin {
            parts.push("spin".to_string());
        }
        if self.lw {
            parts.push("lw".to_string());
        }
        if self.oracle_to > 0 {
            parts.push(format!("oracle{}", self.oracle_to));
        }
        if parts.is_empty() {
            parts.push("none".into());
        }
        parts.join("-")
    }
}

#[derive(Debug, Clone)]
pub struct RecordConfig {
    pub routes: Routes,
    pub workers: usize,
    /// Primes per parallel chunk.
    pub chunk: usize,
    /// `None` disables caching.
    pub cache_dir: Option<PathBuf>,
}

impl Default for RecordConfig {
    fn default() -> Self {
        RecordConfig {
            routes: Routes::default(),
            workers: 1,
            chunk: 4096,
            cache_dir: None,
        }
    }
}

/// `$SPINLAB_CACHE_DIR`, falling back to `.spinlab-cache` in the working directory.
pub fn default_cache_dir() -> PathBuf {
    std::env::var_os(CACHE_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(".spinlab-cache"))
}

/// Evaluates the selected routes at `p = 1 mod 4` and insists they agree.
pub fn compute_record(p: u64, routes: &Routes) -> Result<SpinRecord> {
    if p % 4 != 1 {
        return Err(Error::BadPrime(p));
    }
    let mut rec = SpinRecord {
        p,
        u: None,
        v: None,
        w: None,
        bracket_w: None,
        h: None,
        v2h: None,
        e_spin: None,
        e_lw: None,
        e_oracle: None,
    };
    let split = p % 8 == 1;
    if routes.spin {
        rec.e_spin = Some(if split {
            let w = spin::spin_generator(p)?;
            rec.w = w.to_i64s();
            rec.bracket_w = Some(spin::bracket(&w)?);
            spin::e_from_generator(&w, p)?
        } else {
            spin::e_p_spin(p)?
        });
    }
    if routes.lw {
        rec.e_lw = Some(if split {
            let s = solve_pell(p)?;
            match normalize_u_mod8(s) {
                Ok(n) => {
                    (rec.u, rec.v) = (Some(n.u), Some(n.v));
                    spin::lw_sign(n.u, p)?
                }
                Err(Error::NotNormalizable(_)) => {
                    (rec.u, rec.v) = (Some(s.u), Some(s.v));
                    0
                }
                Err(e) => return Err(e),
            }
        } else {
            spin::e_p_lw(p)?
        });
    }
    if p <= routes.oracle_to {
        let c = class_data(p)?;
        rec.h = Some(c.h);
        rec.v2h = Some(c.v2h);
        rec.e_oracle = Some(e_from_v2h(c.v2h));
    }
    let es: Vec<i8> = [rec.e_spin, rec.e_lw, rec.e_oracle]
        .into_iter()
        .flatten()
        .collect();
    if es.windows(2).any(|w| w[0] != w[1]) {
        return Err(Error::RouteDisagreement {
            p,
            details: format!("{rec:?}"),
        });
    }
    Ok(rec)
}

/// The `e_p` a record settles on, from whichever route ran.
pub fn record_e(rec: &SpinRecord) -> Option<i8> {
    rec.e_spin.or(rec.e_lw).or(rec.e_oracle)
}

#[derive(Debug, Serialize, Deserialize)]
struct Row {
    p: u64,
    u: Option<i128>,
    v: Option<i128>,
    w0: Option<i64>,
    w1: Option<i64>,
    w2: Option<i64>,
    w3: Option<i64>,
    bracket_w: Option<SymbolValue>,
    h: Option<u64>,
    v2h: Option<u32>,
    e_spin: Option<i8>,
    e_lw: Option<i8>,
    e_oracle: Option<i8>,
}

impl From<&SpinRecord> for Row {
    fn from(r: &SpinRecord) -> Row {
        let w = r.w.map(|w| w.map(Some)).unwrap_or([None; 4]);
        Row {
            p: r.p,
            u: r.u,
            v: r.v,
            w0: w[0],
            w1: w[1],
            w2: w[2],
            w3: w[3],
            bracket_w: r.bracket_w,
            h: r.h,
            v2h: r.v2h,
            e_spin: r.e_spin,
            e_lw: r.e_lw,
            e_oracle: r.e_oracle,
        }
    }
}

impl TryFrom<Row> for SpinRecord {
    type Error = Error;
    fn try_from(r: Row) -> Result<SpinRecord> {
        let w = match (r.w0, r.w1, r.w2, r.w3) {
            (Some(a), Some(b), Some(c), Some(d)) => Some([a, b, c, d]),
            (None, None, None, None) => None,
            _ => return Err(Error::Cache(format!("partial w at p = {}", r.p))),
        };
        Ok(SpinRecord {
            p: r.p,
            u: r.u,
            v: r.v,
            w,
            bracket_w: r.bracket_w,
            h: r.h,
            v2h: r.v2h,
            e_spin: r.e_spin,
            e_lw: r.e_lw,
            e_oracle: r.e_oracle,
        })
    }
}

/// Writes records as CSV with the cache column layout (header included).
pub fn write_records_csv<W: Write>(out: W, records: &[SpinRecord]) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    w.write_record(HEADER.split(','))
        .map_err(|e| Error::Cache(e.to_string()))?;
    for r in records {
        w.serialize(Row::from(r))
            .map_err(|e| Error::Cache(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

fn parse_row(line: &str) -> Result<SpinRecord> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(line.as_bytes());
    let headers = csv::StringRecord::from(HEADER.split(',').collect::<Vec<_>>());
    let rec = rdr
        .records()
        .next()
        .ok_or_else(|| Error::Cache("empty row".into()))?
        .map_err(|e| Error::Cache(e.to_string()))?;
    let row: Row = rec
        .deserialize(Some(&headers))
        .map_err(|e| Error::Cache(e.to_string()))?;
    row.try_into()
}

/// The append-only record cache for one route configuration.
pub struct RecordCache {
    path: PathBuf,
    records: Vec<SpinRecord>,
}

impl RecordCache {
    fn banner(routes: &Routes) -> String {
        let key = routes.key();
        let digest = Sha256::digest(format!("{HEADER}\n{key}").as_bytes());
        format!("# spinlab records routes={key} sha256={digest:x}")
    }

    pub fn path_for(dir: &Path, routes: &Routes) -> PathBuf {
        dir.join(format!("records-{}.csv", routes.key()))
    }

    /// Opens or creates the cache file, dropping an incomplete or corrupt
    /// final line.
    pub fn open(dir: &Path, routes: &Routes) -> Result<RecordCache> {
        fs::create_dir_all(dir)?;
        let path = Self::path_for(dir, routes);
        let banner = Self::banner(routes);
        if !path.exists() {
            let mut f = File::create(&path)?;
            writeln!(f, "{banner}\n{HEADER}")?;
            f.sync_all()?;
            return Ok(RecordCache {
                path,
                records: Vec::new(),
            });
        }
        let mut text = String::new();
        File::open(&path)?.read_to_string(&mut text)?;
        let complete = text.rfind('\n').map_or(0, |i| i + 1);
        let mut lines: Vec<&str> = text[..complete].lines().collect();
        if lines.len() < 2 || lines[0] != banner || lines[1] != HEADER {
            return Err(Error::Cache(format!(
                "{} has a mismatched header; delete it to rebuild",
                path.display()
            )));
        }
        let mut keep = complete;
        let mut records = Vec::with_capacity(lines.len());
        let rows = lines.split_off(2);
        for (i, line) in rows.iter().enumerate() {
            match parse_row(line) {
                Ok(r) => {
                    if records.last().is_some_and(|l: &SpinRecord| l.p >= r.p) {
                        return Err(Error::Cache(format!("rows out of order at p = {}", r.p)));
                    }
                    records.push(r);
                }
                Err(_) if i + 1 == rows.len() => {
                    keep = complete - line.len() - 1;
                    log::warn!("dropping corrupt final cache line {line:?}");
                }
                Err(e) => return Err(e),
            }
        }
        if keep != text.len() {
            OpenOptions::new()
                .write(true)
                .open(&path)?
                .set_len(keep as u64)?;
        }
        Ok(RecordCache { path, records })
    }

    pub fn records(&self) -> &[SpinRecord] {
        &self.records
    }

    /// Largest cached prime; every `p = 1 mod 4` below it is present.
    pub fn high_water(&self) -> u64 {
        self.records.last().map_or(0, |r| r.p)
    }

    pub fn append(&mut self, batch: &[SpinRecord]) -> Result<()> {
        if batch.is_empty() {
            return Ok(());
        }
        if batch[0].p <= self.high_water() {
            return Err(Error::Cache("append below the high-water mark".into()));
        }
        let f = OpenOptions::new().append(true).open(&self.path)?;
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(f);
        for r in batch {
            w.serialize(Row::from(r))
                .map_err(|e| Error::Cache(e.to_string()))?;
        }
        w.flush()?;
        self.records.extend_from_slice(batch);
        Ok(())
    }
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Cache(format!("thread pool: {e}")))
}

/// Runs `f` over `items` in order-preserving parallel chunks, handing each
/// finished chunk to `sink` in ascending order.
pub(crate) fn chunked_map<T, U, F, S>(
    items: &[T],
    workers: usize,
    chunk: usize,
    f: F,
    mut sink: S,
) -> Result<()>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Result<U> + Sync,
    S: FnMut(Vec<U>) -> Result<()>,
{
    let pool = pool(workers)?;
    for part in items.chunks(chunk.max(1)) {
        let out: Vec<U> = pool.install(|| part.par_iter().map(&f).collect::<Result<_>>())?;
        sink(out)?;
    }
    Ok(())
}

/// Records for every prime `p = 1 mod 4` up to `x`, resuming from the cache.
pub fn compute_records(x: u64, cfg: &RecordConfig) -> Result<Vec<SpinRecord>> {
    let mut cache = match &cfg.cache_dir {
        Some(dir) => Some(RecordCache::open(dir, &cfg.routes)?),
        None => None,
    };
    let start = cache.as_ref().map_or(0, |c| c.high_water());
    let mut out: Vec<SpinRecord> = cache
        .as_ref()
        .map(|c| c.records().iter().filter(|r| r.p <= x).cloned().collect())
        .unwrap_or_default();
    let todo: Vec<u64> = sieve_primes(x, Some(ResidueClass::new(4, 1)))
        .filter(|&p| p > start)
        .collect();
    if !todo.is_empty() {
        info!(
            "computing {} records above {start} (routes {})",
            todo.len(),
            cfg.routes.key()
        );
    }
    chunked_map(
        &todo,
        cfg.workers,
        cfg.chunk,
        |&p| compute_record(p, &cfg.routes),
        |batch| {
            if let Some(last) = batch.last() {
                info!("records through p = {}", last.p);
            }
            if let Some(c) = cache.as_mut() {
                c.append(&batch)?;
            }
            out.extend(batch);
            Ok(())
        },
    )?;
    Ok(out)
}
