//! A fundamental domain for multiplication by the unit `eps = 1 + sqrt 2`.
//!
//! Fix the embedding `phi(zeta) = e^{i pi/4}`. For `w != 0` put
//! `t(w) = log(|phi(w)| / N(w)^{1/4})`. Multiplying by `eps` shifts `t` by
//! `log eps` and roots of unity leave it alone, so
//!
//! ```text
//! D = { w != 0 : 0 <= t(w) < log eps }
//! ```
//!
//! contains exactly one `eps`-translate of every non-zero element and exactly
//! eight generators (the `zeta`-orbit) of every non-zero ideal.
//!
//! With `w tau(w) = A + B sqrt 2` we have `|phi(w)|^2 = A + B sqrt 2` and
//! `N(w) = A^2 - 2 B^2`, so `t >= 0` iff `B >= 0`, and `t < log eps` iff
//! `A + B sqrt 2 < eps^4 (A - B sqrt 2)`, which simplifies to `2A > 3B`. The
//! membership test is therefore exact integer arithmetic; floating point is only
//! used to guess the exponent before exact correction.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{norm, CycInt};

/// Proven bound `(1 + eps) / 2 = 1 + 1/sqrt 2` on `|c_i| / N(w)^{1/4}` over `D`.
///
/// Coordinates are averages of the four embeddings; in `D` one pair has
/// absolute value below `eps N^{1/4}` and the other at most `N^{1/4}`.
pub const DOMAIN_COORD_BOUND: f64 = 1.707_106_781_186_547_6;

/// `eps^n * input = representative`, with the representative in `D`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainPosition {
    pub n: i64,
    pub representative: CycInt,
}

pub fn in_domain(w: &CycInt) -> bool {
    if w.is_zero() {
        return false;
    }
    let (a, b) = w.hermitian();
    !b.is_negative() && a * 2 > b * 3
}

fn ln_big(x: &BigInt) -> f64 {
    debug_assert!(x.is_positive());
    let bits = x.bits();
    if bits < 1000 {
        x.to_f64().expect("finite").ln()
    } else {
        let shift = bits - 64;
        let top = (x >> shift).to_f64().expect("finite");
        top.ln() + shift as f64 * std::f64::consts::LN_2
    }
}

/// Floating estimate of `t(w)`; cancellation-free for either sign of `B`.
fn log_ratio(w: &CycInt) -> f64 {
    let (a, b) = w.hermitian();
    let n = &a * &a - &b * &b * 2;
    let ln_n = ln_big(&n);
    // ln(a + |b| sqrt 2) as a log-sum-exp, no cancellation
    let big = |a: &BigInt, b: &BigInt| {
        let la = ln_big(a);
        if b.is_zero() {
            return la;
        }
        let lb = ln_big(&b.abs()) + 0.5 * std::f64::consts::LN_2;
        let (hi, lo) = if la > lb { (la, lb) } else { (lb, la) };
        hi + (lo - hi).exp().ln_1p()
    };
    let ln_plus = if b.is_negative() {
        ln_n - big(&a, &b)
    } else {
        big(&a, &b)
    };
    0.5 * ln_plus - 0.25 * ln_n
}

/// The unique `n` with `eps^n w` in `D`, and that translate.
pub fn to_domain(w: &CycInt) -> DomainPosition {
    assert!(!w.is_zero(), "to_domain of zero");
    let ln_eps = std::f64::consts::SQRT_2.ln_1p();
    let guess = -(log_ratio(w) / ln_eps).floor();
    let mut n = if guess.is_finite() { guess as i64 } else { 0 };
    let mut rep = w.mul_eps_pow(n);
    loop {
        let (a, b) = rep.hermitian();
        if b.is_negative() {
            rep = &CycInt::eps() * &rep;
            n += 1;
        } else if a * 2 <= b * 3 {
            rep = &CycInt::eps_inv() * &rep;
            n -= 1;
        } else {
            break;
        }
    }
    DomainPosition {
        n,
        representative: rep,
    }
}

/// The eight generators of `(w)` lying in `D`, in order `zeta^0 .. zeta^7`.
pub fn domain_generators(w: &CycInt) -> Vec<CycInt> {
    let rep = to_domain(w).representative;
    (0..8).map(|k| rep.mul_zeta_pow(k)).collect()
}

/// The lexicographically least domain generator of `(w)`.
///
/// Two non-zero elements generate the same ideal iff their canonical
/// associates coincide.
pub fn canonical_associate(w: &CycInt) -> CycInt {
    domain_generators(w)
        .into_iter()
        .min()
        .expect("eight generators")
}

/// Alias of [`canonical_associate`] used where the value serves as an ideal key.
pub fn domain_key(w: &CycInt) -> CycInt {
    canonical_associate(w)
}

/// All elements of `D` with `1 <= N(w) <= x`, optionally only odd ones.
///
/// Scans the box `|c_i| <= DOMAIN_COORD_BOUND * x^{1/4} + 1` in lexicographic
/// order and filters exactly. Inside `D`, `A = (|phi_1|^2 + |phi_3|^2) / 2` is
/// below `(eps^2 + 1)/2 * sqrt x`, which prunes partial sums of squares.
pub fn enumerate_domain(x: u64, odd_only: bool) -> impl Iterator<Item = CycInt> {
    DomainScan::new(x, odd_only).flat_map(|batch| batch.into_iter())
}

struct DomainScan {
    x: i128,
    odd_only: bool,
    bound: i64,
    a_cap: i64,
    next_c0: i64,
}

impl DomainScan {
    fn new(x: u64, odd_only: bool) -> Self {
        let bound = (DOMAIN_COORD_BOUND * (x as f64).powf(0.25)).floor() as i64 + 1;
        let a_cap = (3.0_f64 + 2.0 * std::f64::consts::SQRT_2 + 1.0) / 2.0 * (x as f64).sqrt();
        DomainScan {
            x: x as i128,
            odd_only,
            bound,
            a_cap: a_cap.ceil() as i64 + 1,
            next_c0: -bound,
        }
    }

    fn batch(&self, c0: i64) -> Vec<CycInt> {
        let mut out = Vec::new();
        let b = self.bound;
        let s0 = c0 * c0;
        if s0 > self.a_cap {
            return out;
        }
        for c1 in -b..=b {
            let s1 = s0 + c1 * c1;
            if s1 > self.a_cap {
                continue;
            }
            for c2 in -b..=b {
                let s2 = s1 + c2 * c2;
                if s2 > self.a_cap {
                    continue;
                }
                for c3 in -b..=b {
                    let a = s2 + c3 * c3;
                    if a > self.a_cap || a == 0 {
                        continue;
                    }
                    let bb = c0 * c1 + c1 * c2 + c2 * c3 - c0 * c3;
                    if bb < 0 || 2 * a <= 3 * bb {
                        continue;
                    }
                    let n = (a as i128) * (a as i128) - 2 * (bb as i128) * (bb as i128);
                    if n > self.x || (self.odd_only && n % 2 == 0) {
                        continue;
                    }
                    out.push(CycInt::from_coeffs([c0, c1, c2, c3]));
                }
            }
        }
        out
    }
}

impl Iterator for DomainScan {
    type Item = Vec<CycInt>;

    fn next(&mut self) -> Option<Vec<CycInt>> {
        while self.next_c0 <= self.bound {
            let c0 = self.next_c0;
            self.next_c0 += 1;
            let batch = self.batch(c0);
            if !batch.is_empty() {
                return Some(batch);
            }
        }
        None
    }
}

/// `max |c_i| / N(w)^{1/4}` for a non-zero element.
pub fn coord_ratio(w: &CycInt) -> f64 {
    let n = norm(w).to_f64().expect("finite");
    let m = w
        .coeffs()
        .iter()
        .map(|c| c.abs().to_f64().expect("finite"))
        .fold(0.0, f64::max);
    m / n.powf(0.25)
}
