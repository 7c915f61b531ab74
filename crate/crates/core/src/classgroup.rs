//! Class numbers of imaginary quadratic orders by counting reduced forms.
//!
//! [`reduced_forms`] lists forms by scanning `a` directly and serves as the
//! reference. [`class_number`] counts the same set by enumerating divisors of
//! `(b^2 - D)/4` from a smallest-prime-factor table, which is fast enough to
//! run over every prime up to 10^6.

use std::sync::Arc;

use num_integer::Integer;
use once_cell::sync::Lazy;
use parking_lot::RwLock;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};

/// A binary quadratic form `a x^2 + b xy + c y^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuadForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QuadForm {
    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        a > 0 && b.abs() <= a && a <= c && (b >= 0 || (b.abs() != a && a != c))
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c) == 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassData {
    pub d: i64,
    pub h: u64,
    pub v2h: u32,
}

fn check_discriminant(d: i64) -> Result<()> {
    if d >= 0 || !matches!(d.rem_euclid(4), 0 | 1) {
        return Err(Error::BadDiscriminant(d));
    }
    Ok(())
}

/// All primitive reduced forms of discriminant `d`, sorted.
pub fn reduced_forms(d: i64) -> Result<Vec<QuadForm>> {
    check_discriminant(d)?;
    let mut out = Vec::new();
    let mut b = d.rem_euclid(2);
    while 3 * b * b <= -d {
        let n = (b * b - d) / 4;
        let mut a = b.max(1);
        while a * a <= n {
            if n % a == 0 {
                let c = n / a;
                for f in [QuadForm { a, b, c }, QuadForm { a, b: -b, c }] {
                    if f.is_reduced() && f.is_primitive() && !out.contains(&f) {
                        out.push(f);
                    }
                }
            }
            a += 1;
        }
        b += 2;
    }
    out.sort();
    Ok(out)
}

/// Smallest-prime-factor table for fast divisor enumeration.
#[derive(Debug)]
pub struct DivisorSieve {
    spf: Vec<u32>,
}

impl DivisorSieve {
    pub fn new(limit: usize) -> Self {
        let mut spf = vec![0u32; limit + 1];
        for i in 2..=limit {
            if spf[i] == 0 {
                for j in (i..=limit).step_by(i) {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                }
            }
        }
        DivisorSieve { spf }
    }

    pub fn limit(&self) -> usize {
        self.spf.len() - 1
    }

    /// Divisors of `n` in unspecified order, written into `out`.
    pub fn divisors_into(&self, mut n: usize, out: &mut Vec<u64>) {
        assert!(n >= 1 && n <= self.limit());
        out.clear();
        out.push(1);
        while n > 1 {
            let p = self.spf[n] as usize;
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            let len = out.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p as u64;
                for i in 0..len {
                    out.push(out[i] * pk);
                }
            }
        }
    }
}

static SIEVE: Lazy<RwLock<Arc<DivisorSieve>>> =
    Lazy::new(|| RwLock::new(Arc::new(DivisorSieve::new(1 << 16))));

/// A shared sieve covering at least `limit`, grown on demand.
pub fn shared_sieve(limit: usize) -> Arc<DivisorSieve> {
    {
        let s = SIEVE.read();
        if s.limit() >= limit {
            return s.clone();
        }
    }
    let mut s = SIEVE.write();
    if s.limit() < limit {
        *s = Arc::new(DivisorSieve::new(limit.next_power_of_two()));
    }
    s.clone()
}

/// Number of primitive reduced forms of discriminant `d`.
pub fn class_number(d: i64) -> Result<u64> {
    check_discriminant(d)?;
    let need = ((-d) / 3 - d) / 4 + 1;
    class_number_with(d, &shared_sieve(need as usize))
}

pub fn class_number_with(d: i64, sieve: &DivisorSieve) -> Result<u64> {
    check_discriminant(d)?;
    let mut h = 0u64;
    let mut divs = Vec::new();
    let mut b = d.rem_euclid(2);
    while 3 * b * b <= -d {
        let n = (b * b - d) / 4;
        sieve.divisors_into(n as usize, &mut divs);
        for &a in &divs {
            let a = a as i64;
            let c = n / a;
            if a < b.max(1)
                || a > c
                || (b > 0 && b.gcd(&a).gcd(&c) != 1)
                || (b == 0 && a.gcd(&c) != 1)
            {
                continue;
            }
            // (a, -b, c) is reduced too unless b = 0, b = a or a = c
            h += if b == 0 || b == a || a == c { 1 } else { 2 };
        }
        b += 2;
    }
    Ok(h)
}

/// `h(-8p)` for any prime `p`.
pub fn class_data_any(p: u64) -> Result<ClassData> {
    if !arith::is_prime(p) {
        return Err(Error::BadPrime(p));
    }
    let d = -8 * p as i64;
    let h = class_number(d)?;
    Ok(ClassData {
        d,
        h,
        v2h: arith::v2(h),
    })
}

/// `h(-8p)` for a prime `p = 1 mod 4`.
pub fn class_data(p: u64) -> Result<ClassData> {
    if p % 4 != 1 {
        return Err(Error::BadPrime(p));
    }
    class_data_any(p)
}

/// `e_p` read off the 2-adic valuation of `h(-8p)`, whose 2-part is cyclic.
pub fn e_from_v2h(v2h: u32) -> i8 {
    match v2h {
        0..=2 => 0,
        3 => -1,
        _ => 1,
    }
}

pub fn e_p_oracle(p: u64) -> Result<i8> {
    Ok(e_from_v2h(class_data(p)?.v2h))
}
