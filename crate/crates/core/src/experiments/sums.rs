//! Linear sums of `a(chi)` over ideals and bilinear sums of quadratic symbols
//! over the fundamental domain.

use std::sync::Arc;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::FactorConfig;
use crate::cyclotomic::{self, enumerate_domain, CycInt};
use crate::error::{Error, Result};
use crate::spin::{a_chi, DirichletCharMod8};
use crate::symbols::{factor_ideal, symbol_over_factors, PrimeIdealM};

/// `true` iff `w` (assumed in the domain) is the least of its eight
/// `zeta`-multiples, i.e. the canonical generator of its ideal.
fn is_canonical_in_domain(w: &CycInt) -> bool {
    (1..8).all(|k| *w <= w.mul_zeta_pow(k))
}

/// One canonical generator per ideal of norm `<= x`, in scan order.
pub fn ideal_generators(x: u64, odd_only: bool) -> impl Iterator<Item = CycInt> {
    enumerate_domain(x, odd_only).filter(is_canonical_in_domain)
}

/// The first odd ideal of norm exactly `k`, by canonical generator in scan order.
pub fn ideal_of_norm(k: u64) -> Option<CycInt> {
    if k % 2 == 0 {
        return None;
    }
    let target = num_bigint::BigInt::from(k);
    ideal_generators(k, true).find(|w| cyclotomic::norm(w) == target)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TypeISumResult {
    pub x: u64,
    pub m: [i64; 4],
    pub m_norm: u64,
    pub chi: DirichletCharMod8,
    pub re: i64,
    pub im: i64,
    /// Odd ideals of norm `<= x` divisible by `m`.
    pub terms: u64,
}

impl TypeISumResult {
    pub fn value(&self) -> Complex<i64> {
        Complex::new(self.re, self.im)
    }
}

/// `A(x) = sum of a(chi)_a over odd ideals a with N(a) <= x and m | a`.
pub fn type_i_sum(x: u64, m: &CycInt, chi: DirichletCharMod8) -> Result<TypeISumResult> {
    if m.is_zero() {
        return Err(Error::ZeroModulus);
    }
    if !m.is_odd() {
        return Err(Error::EvenModulus(m.to_string()));
    }
    let m_norm = cyclotomic::norm_u64(m)?;
    let mut total = Complex::new(0i64, 0);
    let mut terms = 0u64;
    if m_norm <= x {
        for a in ideal_generators(x, true) {
            let n = cyclotomic::norm_u64(&a)?;
            if n % m_norm != 0 || !m.divides(&a) {
                continue;
            }
            total += a_chi(&a, chi)?;
            terms += 1;
        }
    }
    Ok(TypeISumResult {
        x,
        m: m.to_i64s()
            .ok_or_else(|| Error::NormTooLarge(m.to_string()))?,
        m_norm,
        chi,
        re: total.re,
        im: total.im,
        terms,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoeffMode {
    Ones,
    RandomPm1,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeIIParams {
    pub big_m: u64,
    pub big_n: u64,
    /// Class of `w` modulo 16, coordinatewise.
    pub omega: [u64; 4],
    /// Class of `z` modulo 16, coordinatewise.
    pub zeta: [u64; 4],
    pub coeffs: CoeffMode,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeIISumResult {
    pub params: TypeIIParams,
    /// `B = sum alpha_w beta_z (z / sigma(w))_2`.
    pub value: i64,
    /// The same coefficients with the roles swapped: `sum alpha_w beta_z (w / sigma(z))_2`.
    pub swapped_value: i64,
    pub terms: u64,
}

fn class_members(bound: u64, class: [u64; 4]) -> Vec<CycInt> {
    enumerate_domain(bound, true)
        .filter(|w| w.rem_coords(16) == class)
        .collect()
}

fn coefficients(n: usize, mode: CoeffMode, rng: &mut ChaCha8Rng) -> Vec<i64> {
    (0..n)
        .map(|_| match mode {
            CoeffMode::Ones => 1,
            CoeffMode::RandomPm1 => {
                if rng.gen::<bool>() {
                    1
                } else {
                    -1
                }
            }
        })
        .collect()
}

type Factored = Vec<(Arc<PrimeIdealM>, u32)>;

fn sigma_factors(xs: &[CycInt], cfg: &FactorConfig) -> Result<Vec<Factored>> {
    xs.iter().map(|x| factor_ideal(&x.sigma(), cfg)).collect()
}

/// Bilinear sum over `w, z` in the domain with `N(w) <= M`, `w = omega`,
/// `N(z) <= N`, `z = zeta` (mod 16).
pub fn type_ii_sum(params: &TypeIIParams) -> Result<TypeIISumResult> {
    for class in [params.omega, params.zeta] {
        if class.iter().sum::<u64>() % 2 == 0 {
            return Err(Error::EvenModulus(format!("{class:?} mod 16")));
        }
    }
    let cfg = FactorConfig::default();
    let ws = class_members(params.big_m, params.omega.map(|c| c % 16));
    let zs = class_members(params.big_n, params.zeta.map(|c| c % 16));
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let alpha = coefficients(ws.len(), params.coeffs, &mut rng);
    let beta = coefficients(zs.len(), params.coeffs, &mut rng);
    let sw = sigma_factors(&ws, &cfg)?;
    let sz = sigma_factors(&zs, &cfg)?;
    let (mut value, mut swapped) = (0i64, 0i64);
    for (i, w) in ws.iter().enumerate() {
        for (j, z) in zs.iter().enumerate() {
            let c = alpha[i] * beta[j];
            let fwd = symbol_over_factors(z, &sw[i], 2)?;
            let back = symbol_over_factors(w, &sz[j], 2)?;
            value += c * fwd.to_sign().expect("quadratic symbol");
            swapped += c * back.to_sign().expect("quadratic symbol");
        }
    }
    Ok(TypeIISumResult {
        params: params.clone(),
        value,
        swapped_value: swapped,
        terms: (ws.len() * zs.len()) as u64,
    })
}

/// Parses a class mod 16 given as one integer `c` (the class of `c`) or four
/// comma-separated coordinates.
pub fn parse_class(s: &str) -> std::result::Result<[u64; 4], String> {
    let parts: Vec<i64> = s
        .split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<std::result::Result<_, _>>()?;
    let coords = match parts.as_slice() {
        [c] => [*c, 0, 0, 0],
        [a, b, c, d] => [*a, *b, *c, *d],
        _ => return Err(format!("expected 1 or 4 coordinates, got {}", parts.len())),
    };
    Ok(coords.map(|c| c.rem_euclid(16) as u64))
}
