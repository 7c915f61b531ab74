use thiserror::Error;

/// Every failure the library can report.
///
/// Structural misuse (wrong residue class, even modulus, element outside the
/// requested subring) and internal-consistency failures (routes disagreeing,
/// a symbol landing outside its codomain) share one enum so that the CLI can
/// map them onto exit codes in one place.
#[derive(Debug, Error)]
pub enum Error {
    #[error("u^2 - 2v^2 = {0} has no solution (need p = +-1 mod 8)")]
    NoSolution(u64),
    #[error("no solution for p = {0} has u = 1 mod 8 (8 does not divide h(-8p))")]
    NotNormalizable(u64),
    #[error("Euclidean division stuck: no norm-decreasing remainder found")]
    DivisionStuck,
    #[error("gcd(0, 0) is undefined")]
    ZeroGcd,
    #[error("{0} is not 1 mod 8, so x^4 + 1 has no root modulo it")]
    NoEighthRoot(u64),
    #[error("{element} does not lie in {ring}")]
    NotInSubring { element: String, ring: &'static str },
    #[error("power residue {0} is not a fourth root of unity; modulus is not prime")]
    MatchFailure(String),
    #[error("modulus has even norm {0}")]
    EvenModulus(String),
    #[error("modulus must be non-zero")]
    ZeroModulus,
    #[error("could not factor {0} within the configured effort")]
    FactorizationTimeout(u64),
    #[error("norm {0} exceeds the 64-bit factoring range")]
    NormTooLarge(String),
    #[error("symbols vanish: inputs are not coprime")]
    NotCoprime,
    #[error("residue is not fixed by the relative automorphism modulo the prime")]
    NotDescendable,
    #[error("field-lowering hypotheses not met: {0}")]
    HypothesisMismatch(String),
    #[error("character average {0} is not in {{-1, 0, 1}} for p = {1}")]
    NonIntegralAverage(String, u64),
    #[error("u^((p-1)/4) = {residue} mod {p} after normalization; expected +-1")]
    Inconsistent { p: u64, residue: u64 },
    #[error("a constituent symbol vanished")]
    ZeroSymbol,
    #[error("{0} is not a negative discriminant")]
    BadDiscriminant(i64),
    #[error("{0} is not a prime = 1 mod 4")]
    BadPrime(u64),
    #[error("routes disagree at p = {p}: {details}")]
    RouteDisagreement { p: u64, details: String },
    #[error("cache error: {0}")]
    Cache(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
