//! Densities of `2^k | h(-8p)` and partial sums of `e_p`.

use serde::{Deserialize, Serialize};

use super::records::{chunked_map, record_e};
use super::sieve::sieve_primes;
use crate::classgroup::class_data_any;
use crate::error::{Error, Result};
use crate::spin::SpinRecord;

/// An exact proportion with its decimal value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
    pub value: f64,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Self {
        Ratio {
            num,
            den,
            value: if den == 0 {
                0.0
            } else {
                num as f64 / den as f64
            },
        }
    }
}

impl std::fmt::Display for Ratio {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{} = {:.6}", self.num, self.den, self.value)
    }
}

/// Labels of the `h_2` buckets, the last one open-ended.
pub const H2_BUCKETS: [&str; 5] = ["1", "2", "4", "8", ">=16"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub x: u64,
    /// Number of primes `p = 1 mod 4` up to `x`.
    pub denominator: u64,
    /// `n_k = #{p : 2^k | h(-8p)}` for `k = 1..4`.
    pub counts: [u64; 4],
    pub ratios: [Ratio; 4],
    /// `n_4 / n_2`: the share of `16 | h` among primes `p = 1 mod 8`.
    pub ratio16_given_split: Ratio,
    /// Number of primes up to `x`, including 2.
    pub all_primes: u64,
    /// Primes with `h_2(-8p)` in each of [`H2_BUCKETS`].
    pub h2_counts: [u64; 5],
    pub h2_ratios: [Ratio; 5],
}

/// Lower bound on `v_2(h(-8p))`, exact below 4, for `p = 1 mod 4`.
pub fn v2h_from_record(rec: &SpinRecord) -> Result<u32> {
    let implied = match (rec.p % 8, record_e(rec)) {
        (5, _) => 1,
        (1, Some(0)) => 2,
        (1, Some(-1)) => 3,
        (1, Some(1)) => 4,
        _ => {
            return Err(Error::RouteDisagreement {
                p: rec.p,
                details: format!("no usable route in {rec:?}"),
            })
        }
    };
    match rec.v2h {
        Some(v) if v.min(4) != implied => Err(Error::RouteDisagreement {
            p: rec.p,
            details: format!("v2(h) = {v} but e_p implies {implied}: {rec:?}"),
        }),
        _ => Ok(implied),
    }
}

/// Builds the report from records covering every `p = 1 mod 4` up to `x`.
/// Primes `p = 2` and `p = 3 mod 4` are handled by counting forms, using
/// `workers` threads.
pub fn density(x: u64, records: &[SpinRecord], workers: usize) -> Result<DensityReport> {
    let mut counts = [0u64; 4];
    let mut h2_counts = [0u64; 5];
    let mut denominator = 0;
    for rec in records.iter().filter(|r| r.p <= x) {
        let v = v2h_from_record(rec)?;
        denominator += 1;
        for (k, c) in counts.iter_mut().enumerate() {
            if v > k as u32 {
                *c += 1;
            }
        }
        h2_counts[v.min(4) as usize] += 1;
    }
    let others: Vec<u64> = sieve_primes(x, None).filter(|p| p % 4 != 1).collect();
    let mut all_primes = denominator;
    chunked_map(
        &others,
        workers,
        4096,
        |&p| class_data_any(p).map(|c| c.v2h),
        |vs| {
            for v in vs {
                all_primes += 1;
                h2_counts[v.min(4) as usize] += 1;
            }
            Ok(())
        },
    )?;
    Ok(DensityReport {
        x,
        denominator,
        counts,
        ratios: counts.map(|c| Ratio::new(c, denominator)),
        ratio16_given_split: Ratio::new(counts[3], counts[1]),
        all_primes,
        h2_counts,
        h2_ratios: h2_counts.map(|c| Ratio::new(c, all_primes)),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PartialSum {
    pub x: u64,
    /// `S(x) = sum of e_p over p <= x, p = 1 mod 4`.
    pub s: i64,
    /// `log max(|S|, 1) / log x`.
    pub exponent_estimate: f64,
    /// `#{p <= x : p = 1 mod 8}`, a trivial bound on `|S|`.
    pub trivial_bound: u64,
}

/// Running sums of `e_p` at each grid point (sorted ascending on output).
pub fn partial_sum(grid: &[u64], records: &[SpinRecord]) -> Result<Vec<PartialSum>> {
    let mut grid = grid.to_vec();
    grid.sort_unstable();
    let mut out = Vec::with_capacity(grid.len());
    let mut it = records.iter().peekable();
    let (mut s, mut split) = (0i64, 0u64);
    for x in grid {
        while let Some(rec) = it.next_if(|r| r.p <= x) {
            let e = record_e(rec).ok_or_else(|| Error::RouteDisagreement {
                p: rec.p,
                details: "no route evaluated".into(),
            })?;
            s += e as i64;
            split += (rec.p % 8 == 1) as u64;
        }
        let exponent_estimate = if x > 1 {
            (s.unsigned_abs().max(1) as f64).ln() / (x as f64).ln()
        } else {
            0.0
        };
        out.push(PartialSum {
            x,
            s,
            exponent_estimate,
            trivial_bound: split,
        });
    }
    Ok(out)
}
