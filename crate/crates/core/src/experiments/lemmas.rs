//! Randomized checks of the symbol identities, with optional fault injection
//! to confirm the suite can fail.

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::{CycInt, SubringTag};
use crate::error::{Error, Result};
use crate::spin::bracket;
use crate::symbols::{
    check_field_lowering, descend_residue, in_extended_ideal, m_primes_above, quadratic_symbol,
    quartic_symbol, reciprocity_unit, subprimes_above, LoweringCase, SubPrime, SubPrimeKind,
    SymbolRing, SymbolValue,
};

/// A deliberate bug the suite must detect.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Fault {
    /// Uses `tau` wherever `sigma` is called for.
    SwapSigmaTau,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaCheck {
    pub name: String,
    /// Trials that ran to a verdict.
    pub trials: usize,
    pub failures: usize,
    pub first_counterexample: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub seed: u64,
    pub trials: usize,
    pub fault: Option<Fault>,
    pub checks: Vec<LemmaCheck>,
    pub passed: bool,
}

enum Outcome {
    Pass,
    /// Inputs outside the identity's hypotheses; redraw.
    Skip,
    Fail(String),
}

struct Ctx {
    fault: Option<Fault>,
}

impl Ctx {
    fn sigma(&self, w: &CycInt) -> CycInt {
        match self.fault {
            Some(Fault::SwapSigmaTau) => w.tau(),
            None => w.sigma(),
        }
    }
}

type Check = fn(&mut ChaCha8Rng, &Ctx) -> Result<Outcome>;

const SMALL_PRIMES: [u64; 20] = [
    3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73,
];

fn random_elt(rng: &mut ChaCha8Rng, r: i64) -> CycInt {
    CycInt::from_coeffs([0; 4].map(|_| rng.gen_range(-r..=r)))
}

fn random_odd(rng: &mut ChaCha8Rng, r: i64) -> CycInt {
    loop {
        let w = random_elt(rng, r);
        if w.is_odd() {
            return w;
        }
    }
}

fn verdict(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Outcome::Pass
    } else {
        Outcome::Fail(msg())
    }
}

fn quartic_periodicity(rng: &mut ChaCha8Rng, _: &Ctx) -> Result<Outcome> {
    let alpha = random_odd(rng, 3);
    let b1 = random_odd(rng, 4);
    let g = random_elt(rng, 1);
    let b2 = &b1 + &(&alpha * &g).scale(&BigInt::from(16));
    let (s1, s2) = (quartic_symbol(&alpha, &b1)?, quartic_symbol(&alpha, &b2)?);
    Ok(verdict(s1 == s2, || {
        format!("alpha = {alpha}, beta1 = {b1}, beta2 = {b2}: {s1} vs {s2}")
    }))
}

fn reciprocity_class(rng: &mut ChaCha8Rng, _: &Ctx) -> Result<Outcome> {
    let (a, b) = (random_odd(rng, 4), random_odd(rng, 4));
    let base = match reciprocity_unit(&a, &b) {
        Ok(u) => u,
        Err(Error::NotCoprime) => return Ok(Outcome::Skip),
        Err(e) => return Err(e),
    };
    let sixteen = BigInt::from(16);
    let a2 = &a + &random_elt(rng, 1).scale(&sixteen);
    let b2 = &b + &random_elt(rng, 1).scale(&sixteen);
    let lifted = match reciprocity_unit(&a2, &b2) {
        Ok(u) => u,
        Err(Error::NotCoprime) => return Ok(Outcome::Skip),
        Err(e) => return Err(e),
    };
    debug_assert_eq!(base.key, lifted.key);
    Ok(verdict(base.mu == lifted.mu, || {
        format!("({a}, {b}) -> {}, ({a2}, {b2}) -> {}", base.mu, lifted.mu)
    }))
}

fn bracket_zeta(rng: &mut ChaCha8Rng, _: &Ctx) -> Result<Outcome> {
    let w = random_odd(rng, 6);
    let k = rng.gen_range(1..8);
    let (x, y) = (bracket(&w)?, bracket(&w.mul_zeta_pow(k))?);
    Ok(verdict(x == y, || format!("w = {w}, k = {k}: {x} vs {y}")))
}

fn bracket_eps2(rng: &mut ChaCha8Rng, _: &Ctx) -> Result<Outcome> {
    let w = random_odd(rng, 6);
    let e2 = CycInt::eps().pow(2);
    let (x, y) = (bracket(&w)?, bracket(&(&e2 * &w))?);
    Ok(verdict(x == y, || format!("w = {w}: {x} vs {y}")))
}

fn bracket_eps(rng: &mut ChaCha8Rng, ctx: &Ctx) -> Result<Outcome> {
    let w = random_odd(rng, 6);
    let eps = CycInt::eps();
    let lhs = bracket(&(&eps * &w))?;
    let rhs = quadratic_symbol(&ctx.sigma(&eps), &w, SymbolRing::M)? * bracket(&w)?;
    Ok(verdict(lhs == rhs, || format!("w = {w}: {lhs} vs {rhs}")))
}

fn mu3(ctx: &Ctx, w: &CycInt, z: &CycInt) -> Result<Option<SymbolValue>> {
    let parts = [
        bracket(&(w * z))?,
        bracket(w)?,
        bracket(z)?,
        quadratic_symbol(z, &ctx.sigma(w), SymbolRing::M)?,
    ];
    if parts.iter().any(|s| s.is_zero()) {
        return Ok(None);
    }
    Ok(Some(parts[0] * (parts[1] * parts[2] * parts[3]).conj()))
}

fn twisted_class(rng: &mut ChaCha8Rng, ctx: &Ctx) -> Result<Outcome> {
    let (w, z) = (random_odd(rng, 3), random_odd(rng, 3));
    let sixteen = BigInt::from(16);
    let w2 = &w + &random_elt(rng, 2).scale(&sixteen);
    let z2 = &z + &random_elt(rng, 2).scale(&sixteen);
    match (mu3(ctx, &w, &z)?, mu3(ctx, &w2, &z2)?) {
        (Some(a), Some(b)) => Ok(verdict(a == b, || {
            format!("({w}, {z}) -> {a}, ({w2}, {z2}) -> {b}")
        })),
        _ => Ok(Outcome::Skip),
    }
}

const QUADRATIC_RINGS: [SubringTag; 3] = [SubringTag::Zi, SubringTag::Zsqrt2, SubringTag::Zsqrtm2];

fn random_subprime(rng: &mut ChaCha8Rng) -> SubPrime {
    let ring = *QUADRATIC_RINGS.choose(rng).expect("non-empty");
    let p = *SMALL_PRIMES.choose(rng).expect("non-empty");
    *subprimes_above(ring, p)
        .choose(rng)
        .expect("some prime above p")
}

fn random_in_subring(rng: &mut ChaCha8Rng, ring: SubringTag, r: i64) -> CycInt {
    let a = BigInt::from(rng.gen_range(-r..=r));
    let b = BigInt::from(rng.gen_range(-r..=r));
    &CycInt::from_int(a) + &ring.generator().scale(&b)
}

fn field_lowering(rng: &mut ChaCha8Rng, _: &Ctx) -> Result<Outcome> {
    let sp = random_subprime(rng);
    let alpha = random_in_subring(rng, sp.ring, 50);
    if alpha.is_zero() {
        return Ok(Outcome::Skip);
    }
    let case = match (m_primes_above(&sp).len(), sp.kind) {
        (2, _) if sp.ring == SubringTag::Zi || !sp.contains(&alpha)? => LoweringCase::Split,
        (1, SubPrimeKind::Split { .. }) => LoweringCase::Inert,
        _ => return Ok(Outcome::Skip),
    };
    let rep = check_field_lowering(&sp, &alpha, case)?;
    Ok(verdict(rep.holds, || {
        format!("{sp:?}, alpha = {alpha}: {rep:?}")
    }))
}

fn descend(rng: &mut ChaCha8Rng, _: &Ctx) -> Result<Outcome> {
    let sp = random_subprime(rng);
    let gamma = random_in_subring(rng, sp.ring, 40);
    let p = BigInt::from(sp.p);
    let mut delta = random_elt(rng, 3).scale(&p);
    if let SubPrimeKind::Split { s } = sp.kind {
        let pi = &sp.ring.generator() - &CycInt::from_int(s);
        delta = &delta + &(&pi * &random_elt(rng, 3));
    }
    let beta = &gamma + &delta;
    let down = descend_residue(&beta, &sp)?;
    let ok = down.in_subring(sp.ring) && in_extended_ideal(&(&beta - &down), &sp);
    Ok(verdict(ok, || format!("{sp:?}, beta = {beta} -> {down}")))
}

const CHECKS: [(&str, Check); 8] = [
    ("quartic symbol periodic mod 16 alpha", quartic_periodicity),
    (
        "reciprocity unit fixed by classes mod 16",
        reciprocity_class,
    ),
    ("[zeta w] = [w]", bracket_zeta),
    ("[eps^2 w] = [w]", bracket_eps2),
    ("[eps w] = (sigma(eps)/w)_2 [w]", bracket_eps),
    (
        "twisted multiplicativity unit fixed by classes mod 16",
        twisted_class,
    ),
    ("field lowering, split and inert", field_lowering),
    ("descended residue is congruent", descend),
];

/// Runs every check `trials` times with a fixed seed.
pub fn lemma_suite(trials: usize, seed: u64) -> LemmaReport {
    lemma_suite_with_fault(trials, seed, None)
}

pub fn lemma_suite_with_fault(trials: usize, seed: u64, fault: Option<Fault>) -> LemmaReport {
    let ctx = Ctx { fault };
    let checks: Vec<LemmaCheck> = CHECKS
        .iter()
        .enumerate()
        .map(|(i, (name, check))| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((i as u64 + 1) << 56));
            let mut out = LemmaCheck {
                name: name.to_string(),
                trials: 0,
                failures: 0,
                first_counterexample: None,
            };
            let mut attempts = 0;
            while out.trials < trials {
                attempts += 1;
                if attempts > 50 * trials {
                    out.failures += 1;
                    out.first_counterexample
                        .get_or_insert_with(|| "hypotheses almost never met".into());
                    break;
                }
                let failure = match check(&mut rng, &ctx) {
                    Ok(Outcome::Skip) => continue,
                    Ok(Outcome::Pass) => None,
                    Ok(Outcome::Fail(msg)) => Some(msg),
                    Err(e) => Some(format!("error: {e}")),
                };
                out.trials += 1;
                if let Some(msg) = failure {
                    out.failures += 1;
                    out.first_counterexample.get_or_insert(msg);
                }
            }
            out
        })
        .collect();
    let passed = checks.iter().all(|c| c.failures == 0);
    LemmaReport {
        seed,
        trials,
        fault,
        checks,
        passed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_trial_passes() {
        let r = lemma_suite(1, 0);
        assert!(r.passed, "{r:#?}");
        assert!(r.checks.iter().all(|c| c.trials == 1));
    }

    #[test]
    fn swapped_galois_is_caught() {
        let r = lemma_suite_with_fault(40, 3, Some(Fault::SwapSigmaTau));
        assert!(!r.passed);
        let bad = r.checks.iter().find(|c| c.failures > 0).unwrap();
        assert!(bad.first_counterexample.is_some());
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        assert_eq!(lemma_suite(20, 5), lemma_suite(20, 5));
    }
}
