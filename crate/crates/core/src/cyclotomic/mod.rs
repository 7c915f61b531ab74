//! Exact arithmetic in Z[zeta_8], the ring of integers of Q(zeta_8) = Q(sqrt 2, i).
//!
//! Elements are stored in the power basis `c0 + c1 z + c2 z^2 + c3 z^3` with
//! `z^4 = -1`. Inside this basis
//!
//! * `i = z^2`,
//! * `sqrt 2 = z - z^3`,
//! * `sqrt -2 = z + z^3`,
//! * `eps = 1 + sqrt 2 = (1, 1, 0, -1)`,
//!
//! so membership in each quadratic subring is a linear condition on coordinates.

mod domain;
mod pell;

pub use domain::{
    canonical_associate, coord_ratio, domain_generators, domain_key, enumerate_domain, in_domain,
    to_domain, DomainPosition, DOMAIN_COORD_BOUND,
};
pub use pell::{normalize_u_mod8, solve_pell, PellSolution};

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith;
use crate::error::{Error, Result};

/// An element of Z[zeta_8].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct CycInt {
    c: [BigInt; 4],
}

impl CycInt {
    pub fn new(c0: BigInt, c1: BigInt, c2: BigInt, c3: BigInt) -> Self {
        CycInt {
            c: [c0, c1, c2, c3],
        }
    }

    pub fn from_coeffs(c: [i64; 4]) -> Self {
        CycInt {
            c: c.map(BigInt::from),
        }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        CycInt::new(n.into(), BigInt::zero(), BigInt::zero(), BigInt::zero())
    }

    pub fn zero() -> Self {
        CycInt::default()
    }

    pub fn one() -> Self {
        CycInt::from_coeffs([1, 0, 0, 0])
    }

    pub fn zeta() -> Self {
        CycInt::from_coeffs([0, 1, 0, 0])
    }

    /// `i = zeta^2`.
    pub fn i() -> Self {
        CycInt::from_coeffs([0, 0, 1, 0])
    }

    pub fn sqrt2() -> Self {
        CycInt::from_coeffs([0, 1, 0, -1])
    }

    pub fn sqrt_m2() -> Self {
        CycInt::from_coeffs([0, 1, 0, 1])
    }

    /// The fundamental unit `1 + sqrt 2`.
    pub fn eps() -> Self {
        CycInt::from_coeffs([1, 1, 0, -1])
    }

    /// `eps^-1 = sqrt 2 - 1`.
    pub fn eps_inv() -> Self {
        CycInt::from_coeffs([-1, 1, 0, -1])
    }

    /// `a + b sqrt 2`.
    pub fn from_zsqrt2(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        let b = b.into();
        CycInt::new(a.into(), b.clone(), BigInt::zero(), -b)
    }

    /// `a + b i`.
    pub fn from_gaussian(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        CycInt::new(a.into(), BigInt::zero(), b.into(), BigInt::zero())
    }

    /// `a + b sqrt -2`.
    pub fn from_zsqrtm2(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        let b = b.into();
        CycInt::new(a.into(), b.clone(), BigInt::zero(), b)
    }

    pub fn coeffs(&self) -> &[BigInt; 4] {
        &self.c
    }

    /// Coordinates as `i64`, if they all fit.
    pub fn to_i64s(&self) -> Option<[i64; 4]> {
        Some([
            self.c[0].to_i64()?,
            self.c[1].to_i64()?,
            self.c[2].to_i64()?,
            self.c[3].to_i64()?,
        ])
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, k: &BigInt) -> CycInt {
        CycInt {
            c: [
                &self.c[0] * k,
                &self.c[1] * k,
                &self.c[2] * k,
                &self.c[3] * k,
            ],
        }
    }

    /// `zeta^k * self`, a signed rotation of coordinates.
    pub fn mul_zeta_pow(&self, k: u32) -> CycInt {
        let mut out = self.clone();
        for _ in 0..(k % 8) {
            let [c0, c1, c2, c3] = out.c;
            out.c = [-c3, c0, c1, c2];
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> CycInt {
        let mut base = self.clone();
        let mut acc = CycInt::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// `eps^n * self` for any integer `n`.
    pub fn mul_eps_pow(&self, n: i64) -> CycInt {
        let unit = if n >= 0 {
            CycInt::eps().pow(n as u32)
        } else {
            CycInt::eps_inv().pow(n.unsigned_abs() as u32)
        };
        &unit * self
    }

    /// Coordinatewise reduction into `[0, m)`.
    pub fn rem_coords(&self, m: u64) -> [u64; 4] {
        let m = BigInt::from(m);
        self.c
            .clone()
            .map(|x| x.mod_floor(&m).to_u64().expect("reduced coordinate fits"))
    }

    /// Congruence of `self` and `other` modulo the rational integer `m`.
    pub fn congruent_mod(&self, other: &CycInt, m: u64) -> bool {
        self.rem_coords(m) == other.rem_coords(m)
    }

    /// Odd means coprime to 2, i.e. not in the ramified prime `(1 + zeta)`.
    ///
    /// Reducing modulo `1 + zeta` sends `zeta` to `-1 = 1 (mod 2)`, so the
    /// residue is the coordinate sum mod 2.
    pub fn is_odd(&self) -> bool {
        let s = &self.c[0] + &self.c[1] + &self.c[2] + &self.c[3];
        s.is_odd()
    }

    pub fn galois(&self, g: GaloisElement) -> CycInt {
        let [c0, c1, c2, c3] = &self.c;
        let c = match g {
            GaloisElement::Identity => [c0.clone(), c1.clone(), c2.clone(), c3.clone()],
            // zeta -> zeta^5 = -zeta
            GaloisElement::Sigma => [c0.clone(), -c1, c2.clone(), -c3],
            // zeta -> zeta^7 = -zeta^3
            GaloisElement::Tau => [c0.clone(), -c3, -c2, -c1],
            // zeta -> zeta^3
            GaloisElement::SigmaTau => [c0.clone(), c3.clone(), -c2, c1.clone()],
        };
        CycInt { c }
    }

    pub fn sigma(&self) -> CycInt {
        self.galois(GaloisElement::Sigma)
    }

    pub fn tau(&self) -> CycInt {
        self.galois(GaloisElement::Tau)
    }

    pub fn sigma_tau(&self) -> CycInt {
        self.galois(GaloisElement::SigmaTau)
    }

    /// Product of the three non-trivial conjugates; `self * adj = norm(self)`.
    pub fn adjugate(&self) -> CycInt {
        &(&self.sigma() * &self.tau()) * &self.sigma_tau()
    }

    /// `w tau(w) = A + B sqrt 2` as the pair `(A, B)`.
    ///
    /// With `tau` acting as complex conjugation under the embedding
    /// `zeta -> e^{i pi/4}`, this is `|w|^2`; `A` is the sum of squares and
    /// `B = c0 c1 + c1 c2 + c2 c3 - c0 c3`.
    pub fn hermitian(&self) -> (BigInt, BigInt) {
        let [c0, c1, c2, c3] = &self.c;
        let a = c0 * c0 + c1 * c1 + c2 * c2 + c3 * c3;
        let b = c0 * c1 + c1 * c2 + c2 * c3 - c0 * c3;
        (a, b)
    }

    pub fn in_subring(&self, ring: SubringTag) -> bool {
        let [_, c1, c2, c3] = &self.c;
        match ring {
            SubringTag::Zi => c1.is_zero() && c3.is_zero(),
            SubringTag::Zsqrt2 => c2.is_zero() && *c1 == -c3,
            SubringTag::Zsqrtm2 => c2.is_zero() && c1 == c3,
            SubringTag::Z => c1.is_zero() && c2.is_zero() && c3.is_zero(),
        }
    }

    /// Coordinates `(a, b)` of `self = a + b t` where `t` is the subring generator.
    pub fn subring_coords(&self, ring: SubringTag) -> Result<(BigInt, BigInt)> {
        if !self.in_subring(ring) {
            return Err(Error::NotInSubring {
                element: self.to_string(),
                ring: ring.name(),
            });
        }
        let [c0, c1, c2, _] = &self.c;
        Ok(match ring {
            SubringTag::Zi => (c0.clone(), c2.clone()),
            SubringTag::Zsqrt2 | SubringTag::Zsqrtm2 => (c0.clone(), c1.clone()),
            SubringTag::Z => (c0.clone(), BigInt::zero()),
        })
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &CycInt) -> Option<CycInt> {
        if d.is_zero() {
            return None;
        }
        let n = norm(d);
        let num = self * &d.adjugate();
        let mut q = [
            BigInt::zero(),
            BigInt::zero(),
            BigInt::zero(),
            BigInt::zero(),
        ];
        for (slot, x) in q.iter_mut().zip(num.c.iter()) {
            let (quo, rem) = x.div_rem(&n);
            if !rem.is_zero() {
                return None;
            }
            *slot = quo;
        }
        Some(CycInt { c: q })
    }

    pub fn divides(&self, other: &CycInt) -> bool {
        other.div_exact(self).is_some()
    }

    /// Evaluation at an integer root `r` of `x^4 + 1` modulo `p`.
    pub fn eval_mod(&self, r: u64, p: u64) -> u64 {
        let m = BigInt::from(p);
        let mut acc = 0u64;
        for x in self.c.iter().rev() {
            let xr = x.mod_floor(&m).to_u64().expect("reduced");
            acc = arith::add_mod(arith::mul_mod(acc, r, p), xr, p);
        }
        acc
    }
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {}, {})",
            self.c[0], self.c[1], self.c[2], self.c[3]
        )
    }
}

impl fmt::Debug for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycInt{self}")
    }
}

impl<'a> Add<&'a CycInt> for &'a CycInt {
    type Output = CycInt;
    fn add(self, rhs: &CycInt) -> CycInt {
        CycInt {
            c: [
                &self.c[0] + &rhs.c[0],
                &self.c[1] + &rhs.c[1],
                &self.c[2] + &rhs.c[2],
                &self.c[3] + &rhs.c[3],
            ],
        }
    }
}

impl<'a> Sub<&'a CycInt> for &'a CycInt {
    type Output = CycInt;
    fn sub(self, rhs: &CycInt) -> CycInt {
        CycInt {
            c: [
                &self.c[0] - &rhs.c[0],
                &self.c[1] - &rhs.c[1],
                &self.c[2] - &rhs.c[2],
                &self.c[3] - &rhs.c[3],
            ],
        }
    }
}

impl<'a> Mul<&'a CycInt> for &'a CycInt {
    type Output = CycInt;
    fn mul(self, rhs: &CycInt) -> CycInt {
        let a = &self.c;
        let b = &rhs.c;
        let mut out = [
            BigInt::zero(),
            BigInt::zero(),
            BigInt::zero(),
            BigInt::zero(),
        ];
        for i in 0..4 {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..4 {
                let t = &a[i] * &b[j];
                let k = i + j;
                if k < 4 {
                    out[k] += t;
                } else {
                    out[k - 4] -= t;
                }
            }
        }
        CycInt { c: out }
    }
}

impl<'a> Neg for &'a CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        CycInt {
            c: self.c.clone().map(|x| -x),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<CycInt> for CycInt {
            type Output = CycInt;
            fn $m(self, rhs: CycInt) -> CycInt {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a CycInt> for CycInt {
            type Output = CycInt;
            fn $m(self, rhs: &CycInt) -> CycInt {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        -&self
    }
}

/// Elements of Gal(Q(zeta_8)/Q), the Klein four-group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GaloisElement {
    Identity,
    /// Fixes Q(i).
    Sigma,
    /// Fixes Q(sqrt 2).
    Tau,
    /// Fixes Q(sqrt -2).
    SigmaTau,
}

impl GaloisElement {
    pub const ALL: [GaloisElement; 4] = [
        GaloisElement::Identity,
        GaloisElement::Sigma,
        GaloisElement::Tau,
        GaloisElement::SigmaTau,
    ];

    /// Group law; the group is elementary abelian of order 4.
    pub fn compose(self, other: GaloisElement) -> GaloisElement {
        let bits = |g: GaloisElement| match g {
            GaloisElement::Identity => 0u8,
            GaloisElement::Sigma => 1,
            GaloisElement::Tau => 2,
            GaloisElement::SigmaTau => 3,
        };
        match bits(self) ^ bits(other) {
            0 => GaloisElement::Identity,
            1 => GaloisElement::Sigma,
            2 => GaloisElement::Tau,
            _ => GaloisElement::SigmaTau,
        }
    }

    /// The exponent `k` with `g(zeta) = zeta^k`.
    pub fn zeta_exponent(self) -> u32 {
        match self {
            GaloisElement::Identity => 1,
            GaloisElement::Sigma => 5,
            GaloisElement::Tau => 7,
            GaloisElement::SigmaTau => 3,
        }
    }

    /// Subring fixed by the subgroup generated by `self`.
    pub fn fixed_subring(self) -> Option<SubringTag> {
        match self {
            GaloisElement::Identity => None,
            GaloisElement::Sigma => Some(SubringTag::Zi),
            GaloisElement::Tau => Some(SubringTag::Zsqrt2),
            GaloisElement::SigmaTau => Some(SubringTag::Zsqrtm2),
        }
    }
}

/// The proper subrings of Z[zeta_8] that occur as fixed rings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SubringTag {
    Zi,
    Zsqrt2,
    Zsqrtm2,
    Z,
}

impl SubringTag {
    pub fn name(self) -> &'static str {
        match self {
            SubringTag::Zi => "Z[i]",
            SubringTag::Zsqrt2 => "Z[sqrt 2]",
            SubringTag::Zsqrtm2 => "Z[sqrt -2]",
            SubringTag::Z => "Z",
        }
    }

    /// `d` with the subring equal to `Z[sqrt d]`; `None` for `Z`.
    pub fn radicand(self) -> Option<i64> {
        match self {
            SubringTag::Zi => Some(-1),
            SubringTag::Zsqrt2 => Some(2),
            SubringTag::Zsqrtm2 => Some(-2),
            SubringTag::Z => None,
        }
    }

    /// Generator of the relative Galois group Gal(M/K).
    pub fn relative_automorphism(self) -> Option<GaloisElement> {
        match self {
            SubringTag::Zi => Some(GaloisElement::Sigma),
            SubringTag::Zsqrt2 => Some(GaloisElement::Tau),
            SubringTag::Zsqrtm2 => Some(GaloisElement::SigmaTau),
            SubringTag::Z => None,
        }
    }

    /// `sqrt d` embedded in Z[zeta_8].
    pub fn generator(self) -> CycInt {
        match self {
            SubringTag::Zi => CycInt::i(),
            SubringTag::Zsqrt2 => CycInt::sqrt2(),
            SubringTag::Zsqrtm2 => CycInt::sqrt_m2(),
            SubringTag::Z => CycInt::one(),
        }
    }
}

/// Absolute norm `w sigma(w) tau(w) sigma tau(w)`.
///
/// # Panics
///
/// If the product has a non-rational component, which would mean the ring
/// arithmetic is broken.
pub fn norm(w: &CycInt) -> BigInt {
    let prod = w * &w.adjugate();
    let [n, c1, c2, c3] = prod.c;
    assert!(
        c1.is_zero() && c2.is_zero() && c3.is_zero(),
        "norm of {w} is not rational"
    );
    debug_assert!(!n.is_negative());
    n
}

/// Norm as `u64`, for handing to the factoring routines.
pub fn norm_u64(w: &CycInt) -> Result<u64> {
    let n = norm(w);
    n.to_u64().ok_or_else(|| Error::NormTooLarge(n.to_string()))
}

/// `(alpha + sigma(alpha)) / 2` for `alpha = u + v sqrt 2`, i.e. `u`.
pub fn rat(alpha: &CycInt) -> Result<BigInt> {
    let (u, _) = alpha.subring_coords(SubringTag::Zsqrt2)?;
    let sum = alpha + &alpha.sigma();
    debug_assert_eq!(&sum.c[0], &(&u * 2));
    Ok(u)
}

/// Rounds `n / d` to the nearest integer, ties toward +infinity. `d > 0`.
fn round_div(n: &BigInt, d: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    (n * &two + d).div_floor(&(d * &two))
}

/// Euclidean division: `a = q b + r` with `norm(r) < norm(b)`.
pub fn div_rem(a: &CycInt, b: &CycInt) -> Result<(CycInt, CycInt)> {
    let nb = norm(b);
    let num = a * &b.adjugate();
    let q0 = CycInt {
        c: num.c.clone().map(|x| round_div(&x, &nb)),
    };
    let r0 = a - &(&q0 * b);
    if norm(&r0) < nb {
        return Ok((q0, r0));
    }
    for k in 0..81u32 {
        let mut off = [0i64; 4];
        let mut t = k;
        for slot in off.iter_mut() {
            *slot = (t % 3) as i64 - 1;
            t /= 3;
        }
        let q = &q0 + &CycInt::from_coeffs(off);
        let r = a - &(&q * b);
        if norm(&r) < nb {
            return Ok((q, r));
        }
    }
    Err(Error::DivisionStuck)
}

/// Generator of the ideal `(a, b)`, normalized to the canonical associate.
pub fn gcd(a: &CycInt, b: &CycInt) -> Result<CycInt> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::ZeroGcd);
    }
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_zero() {
        let (_, r) = div_rem(&x, &y)?;
        x = y;
        y = r;
    }
    Ok(canonical_associate(&x))
}

/// A root `r` of `x^4 + 1` modulo a prime `p = 1 mod 8`.
///
/// Takes the least quadratic non-residue `g` and returns `g^((p-1)/8)`.
pub fn eighth_root_of_unity(p: u64) -> Result<u64> {
    if p % 8 != 1 {
        return Err(Error::NoEighthRoot(p));
    }
    let mut g = 2u64;
    while arith::legendre(g, p) != -1 {
        g += 1;
    }
    let r = arith::pow_mod(g, (p - 1) / 8, p);
    debug_assert_eq!(arith::pow_mod(r, 4, p), p - 1);
    Ok(r)
}

/// An element of norm `p` for a prime `p = 1 mod 8`: `gcd(p, zeta - r)`.
pub fn split_prime(p: u64) -> Result<CycInt> {
    let r = eighth_root_of_unity(p)?;
    let w = gcd(
        &CycInt::from_int(p),
        &CycInt::from_coeffs([-(r as i64), 1, 0, 0]),
    )?;
    debug_assert_eq!(norm(&w), BigInt::from(p));
    Ok(w)
}

/// `true` iff `u` is a unit of Z[zeta_8].
pub fn is_unit(u: &CycInt) -> bool {
    norm(u).is_one()
}
