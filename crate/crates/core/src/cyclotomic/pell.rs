//! Solving `p = u^2 - 2 v^2` through Euclid's algorithm in Z[sqrt 2].

use crate::arith;
use crate::error::{Error, Result};

/// A solution of `u^2 - 2 v^2 = p` with `u > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PellSolution {
    pub u: i128,
    pub v: i128,
    pub p: u64,
}

impl PellSolution {
    fn check(&self) -> bool {
        self.u > 0 && self.u * self.u - 2 * self.v * self.v == self.p as i128
    }
}

/// `x + y sqrt 2`.
type Zs2 = (i128, i128);

fn zs2_norm((x, y): Zs2) -> i128 {
    x * x - 2 * y * y
}

fn zs2_mul((a, b): Zs2, (c, d): Zs2) -> Zs2 {
    (a * c + 2 * b * d, a * d + b * c)
}

fn round_div(n: i128, d: i128) -> i128 {
    let (n, d) = if d < 0 { (-n, -d) } else { (n, d) };
    (2 * n + d).div_euclid(2 * d)
}

/// Remainder of nearest-integer division; `|N(r)| <= |N(b)| / 2`.
fn zs2_rem(a: Zs2, b: Zs2) -> Zs2 {
    let n = zs2_norm(b);
    let (x, y) = zs2_mul(a, (b.0, -b.1));
    let q = (round_div(x, n), round_div(y, n));
    let qb = zs2_mul(q, b);
    (a.0 - qb.0, a.1 - qb.1)
}

fn zs2_gcd(mut a: Zs2, mut b: Zs2) -> Zs2 {
    while b != (0, 0) {
        let r = zs2_rem(a, b);
        a = b;
        b = r;
    }
    a
}

/// Minimal solution of `u^2 - 2 v^2 = p` (least `u`, with `v >= 0`).
///
/// Takes `s` with `s^2 = 2 mod p`, computes `gcd(p, s - sqrt 2)` in Z[sqrt 2],
/// fixes the sign of the norm with `eps`, then walks down the `eps^2`-orbit.
pub fn solve_pell(p: u64) -> Result<PellSolution> {
    if p % 8 != 1 && p % 8 != 7 {
        return Err(Error::NoSolution(p));
    }
    let s = arith::sqrt_mod(2, p).ok_or(Error::NoSolution(p))? as i128;
    let mut g = zs2_gcd((p as i128, 0), (s, -1));
    match zs2_norm(g) {
        n if n == p as i128 => {}
        n if n == -(p as i128) => g = zs2_mul(g, (1, 1)),
        _ => return Err(Error::NoSolution(p)),
    }
    let (mut u, mut v) = (g.0.abs(), g.1.abs());
    loop {
        // eps^-2 (u + v sqrt 2) = (3u - 4v) + (3v - 2u) sqrt 2
        let (nu, nv) = ((3 * u - 4 * v).abs(), (3 * v - 2 * u).abs());
        if nu < u {
            u = nu;
            v = nv;
        } else {
            break;
        }
    }
    let sol = PellSolution { u, v, p };
    debug_assert!(sol.check());
    Ok(sol)
}

/// Moves `s` within its class to a solution with `u = 1 mod 8`.
///
/// Breadth-first over `(u, v) -> eps^2 (u + v sqrt 2)` and
/// `(u, v) -> eps^2 (u - v sqrt 2)`, at most eight steps. Multiplication by
/// `eps^2` sends `u` to `3u mod 8` when `v` is even, so the reachable residues
/// are `{1, 3}` or `{5, 7}` and the search decides quickly.
pub fn normalize_u_mod8(s: PellSolution) -> Result<PellSolution> {
    let mut frontier = vec![s];
    for _ in 0..=8 {
        let mut next = Vec::with_capacity(frontier.len() * 2);
        for cand in &frontier {
            if cand.u.rem_euclid(8) == 1 {
                return Ok(*cand);
            }
            for sign in [1i128, -1] {
                let (u, v) = (cand.u, sign * cand.v);
                let (nu, nv) = (3 * u + 4 * v, 2 * u + 3 * v);
                let (nu, nv) = if nu < 0 { (-nu, -nv) } else { (nu, nv) };
                next.push(PellSolution {
                    u: nu,
                    v: nv,
                    p: s.p,
                });
            }
        }
        frontier = next;
    }
    Err(Error::NotNormalizable(s.p))
}
