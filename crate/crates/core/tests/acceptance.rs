//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spinlab::arith::{factor, FactorConfig};
use spinlab::classgroup::{class_data_any, class_number, e_p_oracle};
use spinlab::cyclotomic::{self, enumerate_domain, in_domain, to_domain, CycInt};
use spinlab::experiments::{
    compute_records, density, lemma_suite, partial_sum, sieve_primes, RecordConfig, ResidueClass,
    Routes,
};
use spinlab::spin::{e_p_lw, e_p_spin, SpinRecord};

const X: u64 = 1_000_000;
const ORACLE_TO: u64 = 50_000;
const LEMMA_SEED: u64 = 0x5eed;

struct Verdict {
    ok: bool,
    detail: String,
}

fn verdict(ok: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        ok,
        detail: detail.into(),
    }
}

fn workers() -> usize {
    std::thread::available_parallelism().map_or(4, |n| n.get())
}

fn records() -> Result<Vec<SpinRecord>, String> {
    let cfg = RecordConfig {
        routes: Routes {
            spin: true,
            lw: true,
            oracle_to: ORACLE_TO,
        },
        workers: workers(),
        cache_dir: None,
        ..RecordConfig::default()
    };
    compute_records(X, &cfg).map_err(|e| e.to_string())
}

fn criterion_1(recs: &[SpinRecord]) -> Verdict {
    let checked: Vec<&SpinRecord> = recs.iter().filter(|r| r.p <= ORACLE_TO).collect();
    let bad = checked
        .iter()
        .filter(|r| r.e_oracle.is_none() || r.e_spin != r.e_lw || r.e_spin != r.e_oracle)
        .count();
    verdict(
        bad == 0 && !checked.is_empty(),
        format!(
            "{} primes p = 1 mod 4 up to {ORACLE_TO}, {bad} disagreements among spin, LW and forms",
            checked.len()
        ),
    )
}

fn criterion_2(recs: &[SpinRecord]) -> Verdict {
    let bad = recs
        .iter()
        .filter(|r| r.e_spin.is_none() || r.e_spin != r.e_lw)
        .count();
    let want: Vec<u64> = sieve_primes(X, Some(ResidueClass::new(4, 1))).collect();
    let complete = recs.iter().map(|r| r.p).eq(want.iter().copied());
    verdict(
        bad == 0 && complete,
        format!(
            "{} primes up to {X}, {bad} spin/LW disagreements",
            recs.len()
        ),
    )
}

fn close(x: f64, target: f64) -> bool {
    (x - target).abs() <= 0.01
}

fn criterion_3(recs: &[SpinRecord]) -> Verdict {
    match density(X, recs, workers()) {
        Ok(d) => {
            let [_, d4, d8, d16] = d.ratios.map(|r| r.value);
            verdict(
                close(d4, 0.5) && close(d8, 0.25) && close(d16, 0.125),
                format!(
                    "delta(4) = {d4:.5}, delta(8) = {d8:.5}, delta(16) = {d16:.5} over {} primes (tolerance 0.01)",
                    d.denominator
                ),
            )
        }
        Err(e) => verdict(false, e.to_string()),
    }
}

fn criterion_4(recs: &[SpinRecord]) -> Verdict {
    let d = match density(X, recs, workers()) {
        Ok(d) => d,
        Err(e) => return verdict(false, e.to_string()),
    };
    // p = 2 is the one prime with odd h(-8p)
    let two_trivial = class_data_any(2).is_ok_and(|c| c.v2h == 0);
    let trivial_above_two = d.h2_counts[0] - two_trivial as u64;
    let [_, d2, d4, d8, _] = d.h2_ratios.map(|r| r.value);
    verdict(
        close(d2, 0.5) && close(d4, 0.25) && close(d8, 0.125) && trivial_above_two == 0,
        format!(
            "delta'(2) = {d2:.5}, delta'(4) = {d4:.5}, delta'(8) = {d8:.5} over {} primes; h_2 = 1 for {trivial_above_two} primes p > 2",
            d.all_primes
        ),
    )
}

fn criterion_5(recs: &[SpinRecord]) -> Verdict {
    let sums = match partial_sum(&[10_000, 100_000, X], recs) {
        Ok(s) => s,
        Err(e) => return verdict(false, e.to_string()),
    };
    let within = sums
        .iter()
        .all(|s| (s.s.unsigned_abs() as f64) <= (s.x as f64).powf(0.9));
    let last = sums.last().unwrap();
    let shown: Vec<String> = sums
        .iter()
        .map(|s| format!("S({}) = {}", s.x, s.s))
        .collect();
    verdict(
        within && last.exponent_estimate <= 0.75,
        format!(
            "{}; exponent at {X} = {:.4} (bounds |S| <= X^0.9, exponent <= 0.75)",
            shown.join(", "),
            last.exponent_estimate
        ),
    )
}

fn criterion_6() -> Verdict {
    let t0 = Instant::now();
    let rep = lemma_suite(1000, LEMMA_SEED);
    let secs = t0.elapsed().as_secs_f64();
    let failures: Vec<String> = rep
        .checks
        .iter()
        .filter(|c| c.failures > 0)
        .map(|c| format!("{}: {}", c.name, c.failures))
        .collect();
    let trials: usize = rep.checks.iter().map(|c| c.trials).sum();
    verdict(
        rep.passed && rep.checks.len() == 8 && secs < 300.0,
        format!(
            "{} checks, {trials} trials, seed {LEMMA_SEED:#x}, {secs:.1} s; failures: [{}]",
            rep.checks.len(),
            failures.join("; ")
        ),
    )
}

/// Ideals of norm exactly `n` (odd), from how each rational prime splits.
fn ideals_of_norm(n: u64) -> u64 {
    factor(n, &FactorConfig::default())
        .unwrap()
        .into_iter()
        .map(|(p, e)| {
            let e = e as u64;
            match (p % 8, e % 2) {
                (1, _) => (e + 1) * (e + 2) * (e + 3) / 6,
                (_, 0) => e / 2 + 1,
                _ => 0,
            }
        })
        .product()
}

fn criterion_7() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut tried, mut bad) = (0, 0);
    let limit = BigInt::from(100_000_000u64);
    while tried < 10_000 {
        // |c_i| <= 25 keeps the norm below (4 * 25)^4 = 10^8
        let w = CycInt::from_coeffs([0; 4].map(|_| rng.gen_range(-25i64..=25)));
        if w.is_zero() || cyclotomic::norm(&w) > limit {
            continue;
        }
        tried += 1;
        let base = to_domain(&w);
        let k = rng.gen_range(-8i64..=8);
        let moved = to_domain(&w.mul_eps_pow(k));
        let unique = (-3..=3).all(|j| in_domain(&w.mul_eps_pow(base.n + j)) == (j == 0));
        if moved.representative != base.representative || moved.n != base.n - k || !unique {
            bad += 1;
        }
    }

    let x = 10_000;
    let mut by_norm: BTreeMap<BigInt, Vec<Vec<CycInt>>> = BTreeMap::new();
    for w in enumerate_domain(x, true) {
        let groups = by_norm.entry(cyclotomic::norm(&w)).or_default();
        match groups
            .iter_mut()
            .find(|g| g[0].divides(&w) && w.divides(&g[0]))
        {
            Some(g) => g.push(w),
            None => groups.push(vec![w]),
        }
    }
    let groups: Vec<usize> = by_norm.values().flatten().map(Vec::len).collect();
    let wrong = groups.iter().filter(|&&n| n != 8).count();
    let expected: u64 = (1..=x).step_by(2).map(ideals_of_norm).sum();
    verdict(
        bad == 0 && wrong == 0 && groups.len() as u64 == expected,
        format!(
            "{tried} random w, {bad} translation failures; {} odd ideals of norm <= {x} (expected {expected}), {wrong} without exactly 8 generators",
            groups.len()
        ),
    )
}

fn criterion_8() -> Verdict {
    let mut notes = Vec::new();
    let mut ok = true;
    for (d, h) in [(-136, 4), (-584, 16), (-712, 8), (-40, 2)] {
        let got = class_number(d).ok();
        ok &= got == Some(h);
        notes.push(format!("h({d}) = {got:?}"));
    }
    for (p, e) in [(73u64, 1i8), (89, -1), (17, 0), (5, 0)] {
        let routes = [e_p_spin(p).ok(), e_p_lw(p).ok(), e_p_oracle(p).ok()];
        ok &= routes.iter().all(|&r| r == Some(e));
        notes.push(format!("e_{p} = {:?}", routes[2]));
    }
    let cfg = RecordConfig {
        routes: Routes {
            spin: true,
            lw: true,
            oracle_to: 100,
        },
        cache_dir: None,
        ..RecordConfig::default()
    };
    let s100 = compute_records(100, &cfg)
        .and_then(|r| partial_sum(&[100], &r))
        .map(|s| s[0].s);
    ok &= matches!(s100, Ok(0));
    notes.push(format!("S(100) = {s100:?}"));
    verdict(ok, notes.join(", "))
}

fn main() -> ExitCode {
    let t0 = Instant::now();
    let recs = records();
    let shared = |f: fn(&[SpinRecord]) -> Verdict| match &recs {
        Ok(r) => f(r),
        Err(e) => verdict(false, format!("record computation failed: {e}")),
    };
    let results = [
        shared(criterion_1),
        shared(criterion_2),
        shared(criterion_3),
        shared(criterion_4),
        shared(criterion_5),
        criterion_6(),
        criterion_7(),
        criterion_8(),
    ];
    let mut all = true;
    for (i, v) in results.iter().enumerate() {
        all &= v.ok;
        println!(
            "criterion {} {}: {}",
            i + 1,
            if v.ok { "PASS" } else { "FAIL" },
            v.detail
        );
    }
    println!("acceptance finished in {:.1} s", t0.elapsed().as_secs_f64());
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
