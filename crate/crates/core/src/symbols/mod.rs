//! Quadratic and quartic power-residue symbols.
//!
//! For an odd prime `P` of a ring containing `i`, `(alpha/P)_4` is the fourth
//! root of unity congruent to `alpha^((N P - 1)/4)` modulo `P`, and zero when
//! `P` divides `alpha`. The quadratic symbol uses the exponent `(N P - 1)/2`.
//! Both extend multiplicatively to odd moduli. Even moduli are rejected.

mod lowering;
mod prime;
mod subring;
mod value;

pub use lowering::{
    check_field_lowering, descend_residue, in_extended_ideal, quartic_over_extension, LoweringCase,
    LoweringReport,
};
pub use prime::{factor_ideal, primes_above, PrimeIdealM, Residue, ResidueEmbedding};
pub use subring::{m_primes_above, quadratic_symbol_at, subprimes_above, SubPrime, SubPrimeKind};
pub use value::SymbolValue;

use std::sync::Arc;

use crate::arith::FactorConfig;
use crate::cyclotomic::{CycInt, SubringTag};
use crate::error::{Error, Result};

/// Power residue of `alpha` at `prime` of order 2 or 4.
fn power_residue(alpha: &CycInt, prime: &PrimeIdealM, order: u64) -> Result<SymbolValue> {
    let x = prime.reduce(alpha);
    if x.is_zero() {
        return Ok(SymbolValue::Zero);
    }
    let y = prime.field_pow(x, (prime.residue_norm() - 1) / order);
    let roots = prime.fourth_roots();
    let k = roots
        .iter()
        .position(|r| *r == y)
        .ok_or_else(|| Error::MatchFailure(format!("{y:?} at p = {}", prime.p)))?;
    if order == 2 && k % 2 == 1 {
        return Err(Error::MatchFailure(format!("{y:?} at p = {}", prime.p)));
    }
    Ok(SymbolValue::from_i_power(k as u32))
}

/// `(alpha / P)_4` for an odd prime ideal `P` of Z[zeta_8].
pub fn quartic_symbol_prime(alpha: &CycInt, prime: &PrimeIdealM) -> Result<SymbolValue> {
    power_residue(alpha, prime, 4)
}

/// `(alpha / P)_2` for an odd prime ideal `P` of Z[zeta_8].
pub fn quadratic_symbol_prime(alpha: &CycInt, prime: &PrimeIdealM) -> Result<SymbolValue> {
    power_residue(alpha, prime, 2)
}

/// `(alpha / beta)_k` for `k = 2` or `4`, given the prime factorization of
/// `(beta)` from [`factor_ideal`].
pub fn symbol_over_factors(
    alpha: &CycInt,
    factors: &[(Arc<PrimeIdealM>, u32)],
    order: u64,
) -> Result<SymbolValue> {
    assert!(order == 2 || order == 4);
    let mut acc = SymbolValue::One;
    for (prime, v) in factors {
        acc = acc * power_residue(alpha, prime, order)?.pow(*v as u64);
        if acc.is_zero() {
            break;
        }
    }
    Ok(acc)
}

fn symbol_over_m(
    alpha: &CycInt,
    beta: &CycInt,
    order: u64,
    cfg: &FactorConfig,
) -> Result<SymbolValue> {
    symbol_over_factors(alpha, &factor_ideal(beta, cfg)?, order)
}

/// `(alpha / beta)_4` over Z[zeta_8] for odd `beta`.
pub fn quartic_symbol(alpha: &CycInt, beta: &CycInt) -> Result<SymbolValue> {
    quartic_symbol_with(alpha, beta, &FactorConfig::default())
}

pub fn quartic_symbol_with(
    alpha: &CycInt,
    beta: &CycInt,
    cfg: &FactorConfig,
) -> Result<SymbolValue> {
    symbol_over_m(alpha, beta, 4, cfg)
}

/// The ring a quadratic symbol is taken over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymbolRing {
    /// Z[zeta_8] itself.
    M,
    Sub(SubringTag),
}

/// `(alpha / beta)_2` over the given ring, for odd `beta`.
///
/// Over a subring both arguments must lie in it.
pub fn quadratic_symbol(alpha: &CycInt, beta: &CycInt, ring: SymbolRing) -> Result<SymbolValue> {
    let cfg = FactorConfig::default();
    match ring {
        SymbolRing::M => symbol_over_m(alpha, beta, 2, &cfg),
        SymbolRing::Sub(tag) => subring::quadratic_symbol_sub(alpha, beta, tag, &cfg),
    }
}

/// `mu` with `(alpha/beta)_4 = mu (beta/alpha)_4`, keyed by both classes mod 16.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReciprocityUnit {
    pub mu: SymbolValue,
    pub key: ([u64; 4], [u64; 4]),
}

pub fn reciprocity_unit(alpha: &CycInt, beta: &CycInt) -> Result<ReciprocityUnit> {
    if !alpha.is_odd() || !beta.is_odd() {
        let bad = if alpha.is_odd() { beta } else { alpha };
        return Err(Error::EvenModulus(bad.to_string()));
    }
    let forward = quartic_symbol(alpha, beta)?;
    let backward = quartic_symbol(beta, alpha)?;
    let inv = backward.inverse().ok_or(Error::NotCoprime)?;
    if forward.is_zero() {
        return Err(Error::NotCoprime);
    }
    Ok(ReciprocityUnit {
        mu: forward * inv,
        key: (alpha.rem_coords(16), beta.rem_coords(16)),
    })
}
