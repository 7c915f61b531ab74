use std::collections::HashMap;

use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spinlab::arith::is_prime;
use spinlab::cyclotomic::{self, CycInt};
use spinlab::symbols::{
    primes_above, quadratic_symbol, quartic_symbol, quartic_symbol_prime, PrimeIdealM,
    ResidueEmbedding, SymbolRing, SymbolValue,
};

/// Residue field arithmetic written out independently: elements are pairs
/// `(a, b)` meaning `a + b x`, with `x^2 = -g1 x - g0` in degree 2.
struct Field {
    p: i64,
    g: Option<(i64, i64)>,
}

impl Field {
    fn of(prime: &PrimeIdealM) -> Field {
        let g = match prime.embedding {
            ResidueEmbedding::Linear { .. } => None,
            ResidueEmbedding::Quadratic { g1, g0 } => Some((g1 as i64, g0 as i64)),
        };
        Field {
            p: prime.p as i64,
            g,
        }
    }

    fn mul(&self, x: (i64, i64), y: (i64, i64)) -> (i64, i64) {
        let p = self.p;
        let (aa, ab, bb) = (x.0 * y.0, x.0 * y.1 + x.1 * y.0, x.1 * y.1);
        match self.g {
            None => ((aa).rem_euclid(p), 0),
            Some((g1, g0)) => (
                (aa - bb % p * g0).rem_euclid(p),
                (ab - bb % p * g1).rem_euclid(p),
            ),
        }
    }

    /// Image of `zeta`.
    fn zeta(&self, prime: &PrimeIdealM) -> (i64, i64) {
        match prime.embedding {
            ResidueEmbedding::Linear { r } => (r as i64, 0),
            ResidueEmbedding::Quadratic { .. } => (0, 1),
        }
    }

    fn reduce(&self, prime: &PrimeIdealM, w: &CycInt) -> (i64, i64) {
        let c = w.to_i64s().unwrap();
        let z = self.zeta(prime);
        let mut acc = (0, 0);
        let mut pw = (1, 0);
        for ci in c {
            let t = self.mul(pw, (ci.rem_euclid(self.p), 0));
            acc = ((acc.0 + t.0) % self.p, (acc.1 + t.1) % self.p);
            pw = self.mul(pw, z);
        }
        acc
    }

    fn size(&self) -> i64 {
        if self.g.is_some() {
            self.p * self.p
        } else {
            self.p
        }
    }

    /// Discrete logarithms to some primitive root, found by brute force.
    fn log_table(&self) -> HashMap<(i64, i64), i64> {
        let q = self.size();
        let bs = if self.g.is_some() { self.p } else { 1 };
        for g in (1..self.p).flat_map(|a| (0..bs).map(move |b| (a, b))) {
            // order of g: first k > 0 with g^k = 1
            let mut x = g;
            let mut order = 1;
            while x != (1, 0) {
                x = self.mul(x, g);
                order += 1;
            }
            if order == q - 1 {
                let mut table = HashMap::with_capacity(q as usize);
                let mut x = (1, 0);
                for k in 0..q - 1 {
                    table.insert(x, k);
                    x = self.mul(x, g);
                }
                return table;
            }
        }
        unreachable!("finite field has a primitive root")
    }
}

/// `(alpha / P)_4` from discrete logs: writing the image of `i` as
/// `g^((q-1)/4 t)`, the symbol is `i^(t log alpha)`.
fn oracle_quartic(
    field: &Field,
    logs: &HashMap<(i64, i64), i64>,
    prime: &PrimeIdealM,
    w: &CycInt,
) -> SymbolValue {
    let x = field.reduce(prime, w);
    if x == (0, 0) {
        return SymbolValue::Zero;
    }
    let quarter = (field.size() - 1) / 4;
    let z = field.zeta(prime);
    let li = logs[&field.mul(z, z)];
    assert_eq!(li % quarter, 0);
    let t = li / quarter;
    SymbolValue::from_i_power(((logs[&x] * t) % 4) as u32)
}

fn check_prime(prime: &PrimeIdealM, rng: &mut ChaCha8Rng, samples: usize) {
    let field = Field::of(prime);
    let logs = field.log_table();
    let gen = prime.generator().clone();
    for _ in 0..samples {
        let alpha = CycInt::from_coeffs([0; 4].map(|_| rng.gen_range(-60i64..=60)));
        let want = oracle_quartic(&field, &logs, prime, &alpha);
        assert_eq!(
            quartic_symbol_prime(&alpha, prime).unwrap(),
            want,
            "{prime:?} {alpha}"
        );
        assert_eq!(quartic_symbol(&alpha, &gen).unwrap(), want, "{gen} {alpha}");
    }
}

#[test]
fn quartic_symbol_matches_discrete_log_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut seen, mut expected) = (0, 0);
    for p in (3..10_000u64).filter(|&p| is_prime(p)) {
        expected += match p % 8 {
            1 => 4,
            _ if p * p <= 10_000 => 2,
            _ => 0,
        };
        for prime in primes_above(p).iter() {
            if prime.residue_norm() > 10_000 {
                continue;
            }
            check_prime(prime, &mut rng, 6);
            seen += 1;
        }
    }
    assert_eq!(seen, expected);
}

fn odd(r: i64) -> impl Strategy<Value = CycInt> {
    prop::array::uniform4(-r..=r)
        .prop_map(CycInt::from_coeffs)
        .prop_filter("odd", |w| w.is_odd() && !cyclotomic::is_unit(w))
}

fn any(r: i64) -> impl Strategy<Value = CycInt> {
    prop::array::uniform4(-r..=r).prop_map(CycInt::from_coeffs)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn multiplicative_in_both_arguments(a1 in any(8), a2 in any(8), b1 in odd(5), b2 in odd(5)) {
        let s = |a: &CycInt, b: &CycInt| quartic_symbol(a, b).unwrap();
        prop_assert_eq!(s(&(&a1 * &a2), &b1), s(&a1, &b1) * s(&a2, &b1));
        prop_assert_eq!(s(&a1, &(&b1 * &b2)), s(&a1, &b1) * s(&a1, &b2));
    }

    #[test]
    fn galois_equivariance(a in any(10), b in odd(6)) {
        let s = quartic_symbol(&a, &b).unwrap();
        prop_assert_eq!(quartic_symbol(&a.sigma(), &b.sigma()).unwrap(), s);
        prop_assert_eq!(quartic_symbol(&a.tau(), &b.tau()).unwrap(), s.conj());
        prop_assert_eq!(quartic_symbol(&a.sigma_tau(), &b.sigma_tau()).unwrap(), s.conj());
    }

    #[test]
    fn quadratic_is_square_of_quartic(a in any(10), b in odd(6)) {
        let s = quartic_symbol(&a, &b).unwrap();
        prop_assert_eq!(quadratic_symbol(&a, &b, SymbolRing::M).unwrap(), s * s);
    }

    #[test]
    fn symbol_depends_on_alpha_mod_beta(a in any(10), b in odd(5), g in any(4)) {
        let shifted = &a + &(&b * &g);
        prop_assert_eq!(quartic_symbol(&shifted, &b).unwrap(), quartic_symbol(&a, &b).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn periodic_in_beta_mod_sixteen_alpha(a in odd(3), b in odd(4), g in any(1)) {
        let b2 = &b + &(&a * &g).scale(&BigInt::from(16));
        prop_assume!(b2.is_odd());
        prop_assert_eq!(quartic_symbol(&a, &b2).unwrap(), quartic_symbol(&a, &b).unwrap());
    }
}

#[test]
fn symbol_of_shared_factor_is_zero() {
    let b = CycInt::from_coeffs([2, 1, 0, 0]);
    let a = &b * &CycInt::from_coeffs([1, 0, 1, 1]);
    assert_eq!(quartic_symbol(&a, &b).unwrap(), SymbolValue::Zero);
    assert_eq!(
        quartic_symbol(&a, &CycInt::one()).unwrap(),
        SymbolValue::One
    );
}
