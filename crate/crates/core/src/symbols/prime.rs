//! Odd prime ideals of Z[zeta_8] and their residue fields.
//!
//! An odd rational prime `p` has residue degree 1 in Z[zeta_8] when
//! `p = 1 mod 8` and degree 2 otherwise. The primes above `p` correspond to the
//! irreducible factors of `x^4 + 1` modulo `p`: four linear factors `x - r`, or
//! two quadratics obtained from one modular square root,
//!
//! ```text
//! p = 7 mod 8:  (x^2 - s x + 1)(x^2 + s x + 1),  s^2 =  2
//! p = 5 mod 8:  (x^2 - t)(x^2 + t),              t^2 = -1
//! p = 3 mod 8:  (x^2 - s x - 1)(x^2 + s x - 1),  s^2 = -2
//! ```

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use once_cell::sync::{Lazy, OnceCell};
use parking_lot::RwLock;

use crate::arith::{self, add_mod, mul_mod, sub_mod};
use crate::cyclotomic::{self, CycInt};
use crate::error::{Error, Result};

/// How `zeta` maps into the residue field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ResidueEmbedding {
    /// `zeta -> r` in F_p, with `r^4 = -1`.
    Linear { r: u64 },
    /// `zeta -> x` in F_p[x]/(x^2 + g1 x + g0).
    Quadratic { g1: u64, g0: u64 },
}

/// An element `a + b x` of a residue field; `b = 0` in degree 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Residue {
    pub a: u64,
    pub b: u64,
}

impl Residue {
    pub fn is_zero(self) -> bool {
        self.a == 0 && self.b == 0
    }

    pub fn constant(a: u64) -> Residue {
        Residue { a, b: 0 }
    }
}

/// An odd prime ideal of Z[zeta_8].
#[derive(Debug)]
pub struct PrimeIdealM {
    pub p: u64,
    pub embedding: ResidueEmbedding,
    generator: OnceCell<CycInt>,
}

impl PrimeIdealM {
    fn new(p: u64, embedding: ResidueEmbedding) -> Self {
        PrimeIdealM {
            p,
            embedding,
            generator: OnceCell::new(),
        }
    }

    pub fn degree(&self) -> u32 {
        match self.embedding {
            ResidueEmbedding::Linear { .. } => 1,
            ResidueEmbedding::Quadratic { .. } => 2,
        }
    }

    /// Size of the residue field, `p^f`.
    pub fn residue_norm(&self) -> u64 {
        self.p.pow(self.degree())
    }

    fn field_mul(&self, x: Residue, y: Residue) -> Residue {
        let p = self.p;
        match self.embedding {
            ResidueEmbedding::Linear { .. } => Residue::constant(mul_mod(x.a, y.a, p)),
            ResidueEmbedding::Quadratic { g1, g0 } => {
                // x^2 = -g1 x - g0
                let aa = mul_mod(x.a, y.a, p);
                let ab = add_mod(mul_mod(x.a, y.b, p), mul_mod(x.b, y.a, p), p);
                let bb = mul_mod(x.b, y.b, p);
                Residue {
                    a: sub_mod(aa, mul_mod(bb, g0, p), p),
                    b: sub_mod(ab, mul_mod(bb, g1, p), p),
                }
            }
        }
    }

    pub fn field_pow(&self, mut x: Residue, mut e: u64) -> Residue {
        let mut acc = Residue::constant(1 % self.p);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.field_mul(acc, x);
            }
            x = self.field_mul(x, x);
            e >>= 1;
        }
        acc
    }

    fn neg(&self, x: Residue) -> Residue {
        Residue {
            a: sub_mod(0, x.a, self.p),
            b: sub_mod(0, x.b, self.p),
        }
    }

    /// Image of `alpha` in the residue field.
    pub fn reduce(&self, alpha: &CycInt) -> Residue {
        let p = self.p;
        match self.embedding {
            ResidueEmbedding::Linear { r } => Residue::constant(alpha.eval_mod(r, p)),
            ResidueEmbedding::Quadratic { .. } => {
                let m = BigInt::from(p);
                let zeta = Residue { a: 0, b: 1 };
                let mut acc = Residue::constant(0);
                for c in alpha.coeffs().iter().rev() {
                    let cr = c.mod_floor(&m).to_u64().expect("reduced");
                    acc = self.field_mul(acc, zeta);
                    acc.a = add_mod(acc.a, cr, p);
                }
                acc
            }
        }
    }

    pub fn contains(&self, alpha: &CycInt) -> bool {
        self.reduce(alpha).is_zero()
    }

    /// Image of `i = zeta^2`, a primitive fourth root of unity.
    pub fn image_of_i(&self) -> Residue {
        self.reduce(&CycInt::i())
    }

    /// The four fourth roots of unity in order `1, i, -1, -i`.
    pub fn fourth_roots(&self) -> [Residue; 4] {
        let one = Residue::constant(1);
        let i = self.image_of_i();
        [one, i, self.neg(one), self.neg(i)]
    }

    /// A generator of this (principal) ideal, computed on first use.
    pub fn generator(&self) -> &CycInt {
        self.generator.get_or_init(|| {
            let poly = match self.embedding {
                ResidueEmbedding::Linear { r } => CycInt::from_coeffs([-(r as i64), 1, 0, 0]),
                ResidueEmbedding::Quadratic { g1, g0 } => {
                    CycInt::from_coeffs([g0 as i64, g1 as i64, 1, 0])
                }
            };
            let g = cyclotomic::gcd(&CycInt::from_int(self.p), &poly)
                .expect("Z[zeta_8] is norm-Euclidean");
            debug_assert_eq!(cyclotomic::norm(&g), BigInt::from(self.residue_norm()));
            g
        })
    }

    /// Multiplicity of this prime in `(beta)`. `beta` must be non-zero.
    pub fn valuation(&self, beta: &CycInt) -> u32 {
        let mut v = 0;
        let mut cur = beta.clone();
        while self.contains(&cur) {
            cur = cur
                .div_exact(self.generator())
                .expect("membership implies divisibility by the generator");
            v += 1;
        }
        v
    }
}

impl PartialEq for PrimeIdealM {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.embedding == other.embedding
    }
}

impl Eq for PrimeIdealM {}

fn build_primes_above(p: u64) -> Vec<Arc<PrimeIdealM>> {
    assert!(p % 2 == 1 && arith::is_prime(p), "{p} is not an odd prime");
    let make = |e| Arc::new(PrimeIdealM::new(p, e));
    match p % 8 {
        1 => {
            let r = cyclotomic::eighth_root_of_unity(p).expect("p = 1 mod 8");
            let mut roots: Vec<u64> = [1u32, 3, 5, 7]
                .iter()
                .map(|&k| arith::pow_mod(r, k as u64, p))
                .collect();
            roots.sort_unstable();
            roots
                .into_iter()
                .map(|r| make(ResidueEmbedding::Linear { r }))
                .collect()
        }
        7 => {
            let s = arith::sqrt_mod(2, p).expect("2 is a square mod p = 7 (8)");
            vec![
                make(ResidueEmbedding::Quadratic {
                    g1: sub_mod(0, s, p),
                    g0: 1,
                }),
                make(ResidueEmbedding::Quadratic { g1: s, g0: 1 }),
            ]
        }
        5 => {
            let t = arith::sqrt_mod(p - 1, p).expect("-1 is a square mod p = 5 (8)");
            vec![
                make(ResidueEmbedding::Quadratic {
                    g1: 0,
                    g0: sub_mod(0, t, p),
                }),
                make(ResidueEmbedding::Quadratic { g1: 0, g0: t }),
            ]
        }
        _ => {
            let s = arith::sqrt_mod(p - 2, p).expect("-2 is a square mod p = 3 (8)");
            vec![
                make(ResidueEmbedding::Quadratic {
                    g1: sub_mod(0, s, p),
                    g0: p - 1,
                }),
                make(ResidueEmbedding::Quadratic { g1: s, g0: p - 1 }),
            ]
        }
    }
}

static PRIME_MEMO: Lazy<RwLock<HashMap<u64, Arc<[Arc<PrimeIdealM>]>>>> =
    Lazy::new(|| RwLock::new(HashMap::new()));

/// All prime ideals above the odd prime `p`, memoized process-wide.
///
/// Construction is deterministic, so racing inserts are harmless.
pub fn primes_above(p: u64) -> Arc<[Arc<PrimeIdealM>]> {
    if let Some(hit) = PRIME_MEMO.read().get(&p) {
        return hit.clone();
    }
    let built: Arc<[Arc<PrimeIdealM>]> = build_primes_above(p).into();
    PRIME_MEMO.write().insert(p, built.clone());
    built
}

/// `(P, v_P(beta))` for every prime dividing the odd non-zero `beta`.
pub fn factor_ideal(
    beta: &CycInt,
    cfg: &arith::FactorConfig,
) -> Result<Vec<(Arc<PrimeIdealM>, u32)>> {
    if beta.is_zero() {
        return Err(Error::ZeroModulus);
    }
    let n = cyclotomic::norm_u64(beta)?;
    if n % 2 == 0 {
        return Err(Error::EvenModulus(beta.to_string()));
    }
    let rational = arith::factor(n, cfg).map_err(Error::FactorizationTimeout)?;
    let mut out = Vec::new();
    for (p, e) in rational {
        let primes = primes_above(p);
        let f = primes[0].degree();
        let mut found = 0;
        for prime in primes.iter() {
            if found == e {
                break;
            }
            if !prime.contains(beta) {
                continue;
            }
            // a lone prime of degree f accounts for the whole p-part
            let v = if e == f && found == 0 {
                1
            } else {
                prime.valuation(beta)
            };
            found += v * f;
            out.push((prime.clone(), v));
        }
        debug_assert_eq!(found, e, "valuations at {p} do not add up");
    }
    Ok(out)
}
