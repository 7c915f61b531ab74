//! Segmented sieve of Eratosthenes.

const SEGMENT: u64 = 1 << 18;

/// Residue filter applied to the sieve output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResidueClass {
    pub modulus: u64,
    pub residue: u64,
}

impl ResidueClass {
    pub const fn new(modulus: u64, residue: u64) -> Self {
        ResidueClass { modulus, residue }
    }

    pub fn contains(&self, n: u64) -> bool {
        n % self.modulus == self.residue
    }
}

fn small_primes(limit: u64) -> Vec<u64> {
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            out.push(i as u64);
            for j in (i * i..=limit).step_by(i) {
                composite[j] = true;
            }
        }
    }
    out
}

/// Ascending primes `<= x`, lazily, one segment at a time.
pub struct PrimeSieve {
    x: u64,
    base: Vec<u64>,
    lo: u64,
    buf: Vec<u64>,
    pos: usize,
}

impl PrimeSieve {
    pub fn new(x: u64) -> Self {
        let root = (x as f64).sqrt() as u64 + 1;
        PrimeSieve {
            x,
            base: small_primes(root),
            lo: 2,
            buf: Vec::new(),
            pos: 0,
        }
    }

    fn fill(&mut self) -> bool {
        self.buf.clear();
        self.pos = 0;
        while self.buf.is_empty() && self.lo <= self.x {
            let hi = (self.lo + SEGMENT - 1).min(self.x);
            let mut composite = vec![false; (hi - self.lo + 1) as usize];
            for &q in &self.base {
                if q * q > hi {
                    break;
                }
                let start = (q * q).max(self.lo.div_ceil(q) * q);
                for m in (start..=hi).step_by(q as usize) {
                    composite[(m - self.lo) as usize] = true;
                }
            }
            self.buf.extend(
                composite
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| !c)
                    .map(|(i, _)| self.lo + i as u64),
            );
            self.lo = hi + 1;
        }
        !self.buf.is_empty()
    }
}

impl Iterator for PrimeSieve {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.pos >= self.buf.len() && !self.fill() {
            return None;
        }
        self.pos += 1;
        Some(self.buf[self.pos - 1])
    }
}

/// Primes `<= x`, optionally restricted to one residue class.
pub fn sieve_primes(x: u64, class: Option<ResidueClass>) -> impl Iterator<Item = u64> {
    PrimeSieve::new(x).filter(move |&p| class.is_none_or(|c| c.contains(p)))
}
