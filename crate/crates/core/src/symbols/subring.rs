//! Primes and quadratic symbols of the subrings Z[i], Z[sqrt 2], Z[sqrt -2] and Z.
//!
//! An odd `p` is unramified in each `Z[sqrt d]`. It splits as
//! `(p, sqrt d - s)(p, sqrt d + s)` when `d` is a square mod `p` and is inert
//! otherwise. Valuations at split primes come from a Hensel lift of `s`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::prime::{primes_above, PrimeIdealM, Residue};
use super::SymbolValue;
use crate::arith::{self, add_mod, mul_mod, FactorConfig};
use crate::cyclotomic::{CycInt, SubringTag};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SubPrimeKind {
    /// `(p, sqrt d - s)`, residue degree 1.
    Split { s: u64 },
    /// `(p)`, residue degree 2.
    Inert,
    /// `(p)` in Z.
    Rational,
}

/// An odd prime ideal of one of the subrings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SubPrime {
    pub ring: SubringTag,
    pub p: u64,
    pub kind: SubPrimeKind,
}

fn mod_u64(x: &BigInt, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p)).to_u64().expect("reduced")
}

impl SubPrime {
    pub fn degree(&self) -> u32 {
        match self.kind {
            SubPrimeKind::Inert => 2,
            _ => 1,
        }
    }

    pub fn residue_norm(&self) -> u64 {
        self.p.pow(self.degree())
    }

    fn radicand_mod_p(&self) -> u64 {
        let d = self.ring.radicand().unwrap_or(0);
        d.rem_euclid(self.p as i64) as u64
    }

    fn reduce_coords(&self, a: &BigInt, b: &BigInt) -> Residue {
        let p = self.p;
        match self.kind {
            SubPrimeKind::Split { s } => {
                Residue::constant(add_mod(mod_u64(a, p), mul_mod(mod_u64(b, p), s, p), p))
            }
            SubPrimeKind::Inert => Residue {
                a: mod_u64(a, p),
                b: mod_u64(b, p),
            },
            SubPrimeKind::Rational => Residue::constant(mod_u64(a, p)),
        }
    }

    /// Image of a subring element in the residue field.
    pub fn reduce(&self, alpha: &CycInt) -> Result<Residue> {
        let (a, b) = alpha.subring_coords(self.ring)?;
        Ok(self.reduce_coords(&a, &b))
    }

    pub fn contains(&self, alpha: &CycInt) -> Result<bool> {
        Ok(self.reduce(alpha)?.is_zero())
    }

    fn field_mul(&self, x: Residue, y: Residue) -> Residue {
        let p = self.p;
        let d = self.radicand_mod_p();
        Residue {
            a: add_mod(mul_mod(x.a, y.a, p), mul_mod(mul_mod(x.b, y.b, p), d, p), p),
            b: add_mod(mul_mod(x.a, y.b, p), mul_mod(x.b, y.a, p), p),
        }
    }

    fn field_pow(&self, mut x: Residue, mut e: u64) -> Residue {
        let mut acc = Residue::constant(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.field_mul(acc, x);
            }
            x = self.field_mul(x, x);
            e >>= 1;
        }
        acc
    }

    /// Multiplicity of this prime in `(beta)`.
    pub fn valuation(&self, beta: &CycInt) -> Result<u32> {
        let (a, b) = beta.subring_coords(self.ring)?;
        if a.is_zero() && b.is_zero() {
            return Err(Error::ZeroModulus);
        }
        let pb = BigInt::from(self.p);
        let vp = |x: &BigInt| -> u32 {
            if x.is_zero() {
                return u32::MAX;
            }
            let mut x = x.clone();
            let mut v = 0;
            while (&x % &pb).is_zero() {
                x /= &pb;
                v += 1;
            }
            v
        };
        match self.kind {
            SubPrimeKind::Rational => Ok(vp(&a)),
            SubPrimeKind::Inert => Ok(vp(&a).min(vp(&b))),
            SubPrimeKind::Split { s } => {
                if !self.reduce_coords(&a, &b).is_zero() {
                    return Ok(0);
                }
                let d = self.ring.radicand().expect("quadratic ring");
                let n = (&a * &a - &b * &b * d).abs();
                let e = vp(&n);
                if e == 1 {
                    return Ok(1);
                }
                let modulus = pb.pow(e + 1);
                let lifted = hensel_sqrt(d, s, self.p, &modulus);
                let t = (&a + &b * lifted).mod_floor(&modulus);
                Ok(vp(&t).min(e))
            }
        }
    }
}

/// Lifts `s^2 = d (mod p)` to a root modulo `modulus`, a power of `p`.
fn hensel_sqrt(d: i64, s: u64, p: u64, modulus: &BigInt) -> BigInt {
    let d = BigInt::from(d);
    let mut x = BigInt::from(s);
    let mut m = BigInt::from(p);
    while &m < modulus {
        m = (&m * &m).min(modulus.clone());
        // Newton: x <- x - (x^2 - d) / (2x)
        let f = (&x * &x - &d).mod_floor(&m);
        let two_x = (&x * BigInt::from(2)).mod_floor(&m);
        let inv = mod_inverse(&two_x, &m);
        x = (&x - f * inv).mod_floor(&m);
    }
    x
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let g = a.extended_gcd(m);
    debug_assert!(g.gcd.is_one());
    g.x.mod_floor(m)
}

/// Primes of the subring above the odd prime `p`.
pub fn subprimes_above(ring: SubringTag, p: u64) -> Vec<SubPrime> {
    let Some(d) = ring.radicand() else {
        return vec![SubPrime {
            ring,
            p,
            kind: SubPrimeKind::Rational,
        }];
    };
    let dp = d.rem_euclid(p as i64) as u64;
    match arith::sqrt_mod(dp, p) {
        Some(s) if arith::legendre(dp, p) == 1 => {
            let mut roots = [s, p - s];
            roots.sort_unstable();
            roots
                .into_iter()
                .map(|s| SubPrime {
                    ring,
                    p,
                    kind: SubPrimeKind::Split { s },
                })
                .collect()
        }
        _ => vec![SubPrime {
            ring,
            p,
            kind: SubPrimeKind::Inert,
        }],
    }
}

/// `(alpha / P)_2` at a single subring prime.
pub fn quadratic_symbol_at(alpha: &CycInt, sp: &SubPrime) -> Result<SymbolValue> {
    let x = sp.reduce(alpha)?;
    if x.is_zero() {
        return Ok(SymbolValue::Zero);
    }
    let y = sp.field_pow(x, (sp.residue_norm() - 1) / 2);
    match (y.a, y.b) {
        (1, 0) => Ok(SymbolValue::One),
        (a, 0) if a == sp.p - 1 => Ok(SymbolValue::MinusOne),
        _ => Err(Error::MatchFailure(format!("{y:?} at p = {}", sp.p))),
    }
}

pub(super) fn quadratic_symbol_sub(
    alpha: &CycInt,
    beta: &CycInt,
    ring: SubringTag,
    cfg: &FactorConfig,
) -> Result<SymbolValue> {
    alpha.subring_coords(ring)?;
    let (a, b) = beta.subring_coords(ring)?;
    if a.is_zero() && b.is_zero() {
        return Err(Error::ZeroModulus);
    }
    let d = ring.radicand().unwrap_or(0);
    let n = (&a * &a - &b * &b * d).abs();
    let n = n
        .to_u64()
        .ok_or_else(|| Error::NormTooLarge(n.to_string()))?;
    if n % 2 == 0 {
        return Err(Error::EvenModulus(beta.to_string()));
    }
    let mut acc = SymbolValue::One;
    for (p, _) in arith::factor(n, cfg).map_err(Error::FactorizationTimeout)? {
        for sp in subprimes_above(ring, p) {
            let v = sp.valuation(beta)?;
            if v > 0 {
                acc = acc * quadratic_symbol_at(alpha, &sp)?.pow(v as u64);
            }
        }
    }
    Ok(acc)
}

/// Primes of Z[zeta_8] dividing `sp * Z[zeta_8]`.
pub fn m_primes_above(sp: &SubPrime) -> Vec<Arc<PrimeIdealM>> {
    let all = primes_above(sp.p);
    match sp.kind {
        SubPrimeKind::Split { s } => {
            let root = sp.ring.generator();
            all.iter()
                .filter(|pr| pr.reduce(&root) == Residue::constant(s))
                .cloned()
                .collect()
        }
        _ => all.to_vec(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitting_types() {
        assert_eq!(subprimes_above(SubringTag::Zi, 5).len(), 2);
        assert_eq!(subprimes_above(SubringTag::Zi, 3).len(), 1);
        assert_eq!(subprimes_above(SubringTag::Zsqrt2, 7).len(), 2);
        assert_eq!(subprimes_above(SubringTag::Zsqrtm2, 3).len(), 2);
        assert_eq!(subprimes_above(SubringTag::Zsqrtm2, 5).len(), 1);
    }

    #[test]
    fn m_primes_partition_the_primes_above_p() {
        for ring in [SubringTag::Zi, SubringTag::Zsqrt2, SubringTag::Zsqrtm2] {
            for p in [3u64, 5, 7, 17, 41, 43] {
                let total: usize = subprimes_above(ring, p)
                    .iter()
                    .map(|sp| m_primes_above(sp).len())
                    .sum();
                assert_eq!(total, primes_above(p).len(), "{ring:?} p = {p}");
            }
        }
    }

    #[test]
    fn split_valuation_uses_hensel_lift() {
        // 5 = (2 + i)(2 - i); (2 + i)^3 has valuation 3 at one prime, 0 at the other
        let g = CycInt::from_gaussian(2, 1);
        let cube = &(&g * &g) * &g;
        let vals: Vec<u32> = subprimes_above(SubringTag::Zi, 5)
            .iter()
            .map(|sp| sp.valuation(&cube).unwrap())
            .collect();
        let mut sorted = vals.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![0, 3]);
    }

    #[test]
    fn rational_symbol_is_legendre() {
        for p in [3u64, 5, 7, 11, 13] {
            for a in 1..20i64 {
                let got = quadratic_symbol_sub(
                    &CycInt::from_int(a),
                    &CycInt::from_int(p as i64),
                    SubringTag::Z,
                    &FactorConfig::default(),
                )
                .unwrap();
                assert_eq!(
                    got,
                    SymbolValue::from_sign(arith::legendre(a as u64, p) as i64)
                );
            }
        }
    }
}
