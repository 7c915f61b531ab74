//! The spin symbol `[w] = (rat(w tau(w)) / w)_4`, its twists by the Dirichlet
//! characters modulo 8, and three independent routes to `e_p`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::cyclotomic::{self, canonical_associate, normalize_u_mod8, solve_pell, CycInt};
use crate::error::{Error, Result};
use crate::symbols::{quadratic_symbol, quartic_symbol, SymbolRing, SymbolValue};

/// A Dirichlet character modulo 8.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DirichletCharMod8 {
    #[serde(rename = "chi0")]
    Chi0,
    #[serde(rename = "chi_m4")]
    ChiM4,
    #[serde(rename = "chi_8")]
    Chi8,
    #[serde(rename = "chi_m8")]
    ChiM8,
}

impl DirichletCharMod8 {
    pub const ALL: [DirichletCharMod8; 4] = [
        DirichletCharMod8::Chi0,
        DirichletCharMod8::ChiM4,
        DirichletCharMod8::Chi8,
        DirichletCharMod8::ChiM8,
    ];

    /// Values at the residues `1, 3, 5, 7`.
    pub fn table(self) -> [i64; 4] {
        match self {
            DirichletCharMod8::Chi0 => [1, 1, 1, 1],
            DirichletCharMod8::ChiM4 => [1, -1, 1, -1],
            DirichletCharMod8::Chi8 => [1, -1, -1, 1],
            DirichletCharMod8::ChiM8 => [1, 1, -1, -1],
        }
    }

    /// `chi(n)`, zero for even `n`.
    pub fn eval(self, n: &BigInt) -> i64 {
        let r = n
            .mod_floor(&BigInt::from(8))
            .to_u8()
            .expect("residue mod 8");
        if r % 2 == 0 {
            0
        } else {
            self.table()[(r / 2) as usize]
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            DirichletCharMod8::Chi0 => "chi0",
            DirichletCharMod8::ChiM4 => "chi_m4",
            DirichletCharMod8::Chi8 => "chi_8",
            DirichletCharMod8::ChiM8 => "chi_m8",
        }
    }
}

impl fmt::Display for DirichletCharMod8 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for DirichletCharMod8 {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        DirichletCharMod8::ALL
            .into_iter()
            .find(|c| c.label() == s)
            .ok_or_else(|| {
                format!("unknown character {s:?}; expected chi0, chi_m4, chi_8 or chi_m8")
            })
    }
}

/// One row of per-prime output. Absent fields belong to routes that were
/// skipped or do not apply (no `w` or `u` when `p = 5 mod 8`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpinRecord {
    pub p: u64,
    pub u: Option<i128>,
    pub v: Option<i128>,
    pub w: Option<[i64; 4]>,
    pub bracket_w: Option<SymbolValue>,
    pub h: Option<u64>,
    pub v2h: Option<u32>,
    pub e_spin: Option<i8>,
    pub e_lw: Option<i8>,
    pub e_oracle: Option<i8>,
}

/// `rat(w tau(w))`, a positive integer for `w != 0`.
pub fn spin_numerator(w: &CycInt) -> BigInt {
    w.hermitian().0
}

/// `[w] = (rat(w tau(w)) / w)_4` for odd `w`.
pub fn bracket(w: &CycInt) -> Result<SymbolValue> {
    quartic_symbol(&CycInt::from_int(spin_numerator(w)), w)
}

/// `[w]_chi = [w] chi(rat(w tau(w)))`, as a Gaussian integer.
pub fn bracket_chi(w: &CycInt, chi: DirichletCharMod8) -> Result<Complex<i64>> {
    let b = bracket(w)?;
    Ok(b.to_complex() * chi.eval(&spin_numerator(w)))
}

/// `a(chi)_n = [w]_chi + [eps w]_chi` for the ideal `n = (w)`; zero when `n` is even.
///
/// `w` is replaced by its canonical associate first, so every generator of
/// the same ideal yields the same computation.
pub fn a_chi(n: &CycInt, chi: DirichletCharMod8) -> Result<Complex<i64>> {
    if n.is_zero() {
        return Err(Error::ZeroModulus);
    }
    if !n.is_odd() {
        return Ok(Complex::new(0, 0));
    }
    let w = canonical_associate(n);
    let ew = &CycInt::eps() * &w;
    Ok(bracket_chi(&w, chi)? + bracket_chi(&ew, chi)?)
}

fn sign_of(x: i64) -> i8 {
    x.signum() as i8
}

fn check_one_mod_four(p: u64) -> Result<()> {
    if p % 4 != 1 || !arith::is_prime(p) {
        return Err(Error::BadPrime(p));
    }
    Ok(())
}

/// The generator of a prime above `p = 1 mod 8` used by the spin route.
pub fn spin_generator(p: u64) -> Result<CycInt> {
    Ok(canonical_associate(&cyclotomic::split_prime(p)?))
}

/// `e_p` as the character average `1/4 sum_chi a(chi)_P`.
pub fn e_p_spin(p: u64) -> Result<i8> {
    check_one_mod_four(p)?;
    if p % 8 == 5 {
        return Ok(0);
    }
    let w = spin_generator(p)?;
    e_from_generator(&w, p)
}

pub(crate) fn e_from_generator(w: &CycInt, p: u64) -> Result<i8> {
    let total: Complex<i64> = DirichletCharMod8::ALL
        .iter()
        .map(|&chi| a_chi(w, chi))
        .sum::<Result<Complex<i64>>>()?;
    if total.im != 0 || total.re % 4 != 0 || total.re.abs() > 4 {
        return Err(Error::NonIntegralAverage(format!("({total})/4"), p));
    }
    Ok(sign_of(total.re / 4))
}

/// `e_p` from `p = u^2 - 2v^2`, `u = 1 mod 8`: whether `u` is a fourth power mod `p`.
pub fn e_p_lw(p: u64) -> Result<i8> {
    check_one_mod_four(p)?;
    if p % 8 == 5 {
        return Ok(0);
    }
    match normalize_u_mod8(solve_pell(p)?) {
        Err(Error::NotNormalizable(_)) => Ok(0),
        Err(e) => Err(e),
        Ok(s) => lw_sign(s.u, p),
    }
}

pub(crate) fn lw_sign(u: i128, p: u64) -> Result<i8> {
    let r = arith::pow_mod(arith::reduce_i128(u, p), (p - 1) / 4, p);
    match r {
        1 => Ok(1),
        r if r == p - 1 => Ok(-1),
        residue => Err(Error::Inconsistent { p, residue }),
    }
}

/// Outcome of [`twisted_mult_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistedMult {
    pub mu3: SymbolValue,
    /// Number of resampled lifts that were evaluated.
    pub lifts: usize,
    pub verified: bool,
}

/// `mu_3 = [wz] ([w][z](z/sigma(w))_2)^{-1}`.
pub fn twisted_mu3(w: &CycInt, z: &CycInt) -> Result<SymbolValue> {
    let wz = w * z;
    let parts = [
        bracket(w)?,
        bracket(z)?,
        quadratic_symbol(z, &w.sigma(), SymbolRing::M)?,
    ];
    let full = bracket(&wz)?;
    if full.is_zero() || parts.iter().any(|s| s.is_zero()) {
        return Err(Error::ZeroSymbol);
    }
    let denom: SymbolValue = parts.into_iter().product();
    Ok(full * denom.conj())
}

fn random_lift<R: Rng>(x: &CycInt, rng: &mut R) -> CycInt {
    let g = CycInt::from_coeffs([0; 4].map(|_| rng.gen_range(-3..=3)));
    x + &g.scale(&BigInt::from(16))
}

/// Computes `mu_3` at `(w, z)` and compares it against `lifts` random
/// resamplings `(w + 16 g, z + 16 h)`. Lifts where a symbol vanishes are
/// redrawn, up to a fixed budget.
pub fn twisted_mult_check<R: Rng>(
    w: &CycInt,
    z: &CycInt,
    lifts: usize,
    rng: &mut R,
) -> Result<TwistedMult> {
    if !w.is_odd() || !z.is_odd() {
        let bad = if w.is_odd() { z } else { w };
        return Err(Error::EvenModulus(bad.to_string()));
    }
    let mu3 = twisted_mu3(w, z)?;
    let mut done = 0;
    let mut attempts = 0;
    let mut verified = true;
    while done < lifts && attempts < 20 * lifts.max(1) {
        attempts += 1;
        let (w2, z2) = (random_lift(w, rng), random_lift(z, rng));
        match twisted_mu3(&w2, &z2) {
            Ok(m) => {
                done += 1;
                if m != mu3 {
                    verified = false;
                    break;
                }
            }
            Err(Error::ZeroSymbol) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(TwistedMult {
        mu3,
        lifts: done,
        verified,
    })
}
