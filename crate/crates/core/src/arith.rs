//! Word-size modular arithmetic: powers, square roots, primality and factoring.
//!
//! Everything here works on `u64` moduli with `u128` intermediates. Norms of the
//! elements handled at desk scale stay far below 2^63.

use num_integer::Integer;

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + b as u128) % m as u128) as u64
}

#[inline]
pub fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        m - (b - a)
    }
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Reduces a signed value into `[0, m)`.
#[inline]
pub fn reduce_i128(x: i128, m: u64) -> u64 {
    x.rem_euclid(m as i128) as u64
}

/// Euler's criterion. Returns 1, -1, or 0.
pub fn legendre(a: u64, p: u64) -> i32 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Tonelli-Shanks square root modulo an odd prime. `None` for non-residues.
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    if legendre(a, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    let mut q = p - 1;
    let mut s = 0u32;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2u64;
    while legendre(z, p) != -1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0u32;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1u64 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// Deterministic Miller-Rabin for the full `u64` range.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &SMALL {
        if n % q == 0 {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// 2-adic valuation of a non-zero integer.
pub fn v2(n: u64) -> u32 {
    n.trailing_zeros()
}

/// Effort limits for [`factor`].
#[derive(Debug, Clone, Copy)]
pub struct FactorConfig {
    /// Trial division runs over all candidates up to this bound.
    pub trial_bound: u64,
    /// Pollard rho iterations per attempt, summed over restarts.
    pub rho_budget: u64,
}

impl Default for FactorConfig {
    fn default() -> Self {
        FactorConfig {
            trial_bound: 1_000_000,
            rho_budget: 5_000_000,
        }
    }
}

/// Prime factorization as ascending `(prime, exponent)` pairs.
///
/// Returns `Err(n)` with the offending cofactor when Pollard rho exhausts its
/// budget.
pub fn factor(n: u64, cfg: &FactorConfig) -> Result<Vec<(u64, u32)>, u64> {
    let mut out = Vec::new();
    let mut n = n;
    if n <= 1 {
        return Ok(out);
    }
    let mut push = |q: u64, n: &mut u64| {
        let mut e = 0;
        while *n % q == 0 {
            *n /= q;
            e += 1;
        }
        if e > 0 {
            out.push((q, e));
        }
    };
    push(2, &mut n);
    let mut q = 3u64;
    while q <= cfg.trial_bound && q.saturating_mul(q) <= n {
        if n % q == 0 {
            push(q, &mut n);
        }
        q += 2;
    }
    if n == 1 {
        return Ok(out);
    }
    if q.saturating_mul(q) > n || is_prime(n) {
        out.push((n, 1));
        return Ok(out);
    }
    let mut stack = vec![n];
    let mut large: Vec<u64> = Vec::new();
    while let Some(m) = stack.pop() {
        if is_prime(m) {
            large.push(m);
            continue;
        }
        let d = pollard_rho(m, cfg.rho_budget).ok_or(m)?;
        stack.push(d);
        stack.push(m / d);
    }
    large.sort_unstable();
    for q in large {
        match out.last_mut() {
            Some((last, e)) if *last == q => *e += 1,
            _ => out.push((q, 1)),
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Brent's variant of Pollard rho. Returns a non-trivial factor of composite `n`.
fn pollard_rho(n: u64, budget: u64) -> Option<u64> {
    if n % 2 == 0 {
        return Some(2);
    }
    let mut spent = 0u64;
    for c in 1..u64::MAX {
        let f = |x: u64| add_mod(mul_mod(x, x, n), c, n);
        let mut y = 2u64;
        let mut r = 1u64;
        let mut q = 1u64;
        let mut g = 1u64;
        let mut x = y;
        let mut ys = y;
        const BLOCK: u64 = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BLOCK.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += BLOCK;
            }
            r *= 2;
            spent += r;
            if spent > budget {
                return None;
            }
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return Some(g);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_mod_matches_squares() {
        for p in [3u64, 5, 7, 13, 17, 41, 73, 97, 1_000_003] {
            for a in 1..60u64 {
                match sqrt_mod(a, p) {
                    Some(r) => assert_eq!(mul_mod(r, r, p), a % p),
                    None => assert_eq!(legendre(a, p), -1),
                }
            }
        }
    }

    #[test]
    fn primality_small_range() {
        let brute = |n: u64| n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
        for n in 0..5000 {
            assert_eq!(is_prime(n), brute(n), "{n}");
        }
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(3_215_031_751));
    }

    #[test]
    fn factor_recombines() {
        let cfg = FactorConfig::default();
        for n in [
            1u64,
            2,
            360,
            1_000_003 * 999_983,
            2u64.pow(40) * 3,
            600_851_475_143,
        ] {
            let f = factor(n, &cfg).unwrap();
            let back: u64 = f.iter().map(|&(q, e)| q.pow(e)).product();
            assert_eq!(back, n.max(1));
            assert!(f.iter().all(|&(q, _)| is_prime(q)));
        }
    }

    #[test]
    fn factor_semiprime_beyond_trial_bound() {
        let cfg = FactorConfig {
            trial_bound: 1000,
            rho_budget: 1_000_000,
        };
        let n = 1_000_003u64 * 1_000_033;
        assert_eq!(
            factor(n, &cfg).unwrap(),
            vec![(1_000_003, 1), (1_000_033, 1)]
        );
    }

    #[test]
    fn factor_budget_exhaustion_is_reported() {
        let cfg = FactorConfig {
            trial_bound: 10,
            rho_budget: 1,
        };
        let n = 1_000_003u64 * 1_000_033;
        assert_eq!(factor(n, &cfg), Err(n));
    }
}
