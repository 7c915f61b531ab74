//! Relating quartic symbols over Z[zeta_8] to quadratic symbols over a
//! quadratic subring `K`, and pulling residues down into `K`.
//!
//! With `psi` the generator of Gal(M/K) and `P` an odd prime of `K`:
//!
//! * `P` split in `M`, `psi(i) = i`: `(alpha / P O_M)_4 = (alpha / P)_{K,2}`;
//! * `P` split in `M`, `psi(i) = -i`, `P` not dividing `alpha`: the symbol is 1;
//! * `P` of degree 1 over `p` and inert in `M`:
//!   `(alpha / P O_M)_4 = (alpha / P)_{K,2}^((p+1)/2)`.

use num_bigint::BigInt;
use num_integer::Integer;

use super::subring::{m_primes_above, quadratic_symbol_at, SubPrime, SubPrimeKind};
use super::{quartic_symbol_prime, SymbolValue};
use crate::cyclotomic::{CycInt, SubringTag};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LoweringCase {
    Split,
    Inert,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoweringReport {
    pub case: LoweringCase,
    /// `(alpha / P O_M)_4`.
    pub left: SymbolValue,
    /// The predicted value from the subring side.
    pub right: SymbolValue,
    pub holds: bool,
}

/// `(alpha / P O_M)_4` as the product over the primes of M above `P`.
pub fn quartic_over_extension(alpha: &CycInt, sp: &SubPrime) -> Result<SymbolValue> {
    m_primes_above(sp)
        .iter()
        .map(|pr| quartic_symbol_prime(alpha, pr))
        .product()
}

/// Computes both sides of the applicable field-lowering identity.
pub fn check_field_lowering(
    sp: &SubPrime,
    alpha: &CycInt,
    case: LoweringCase,
) -> Result<LoweringReport> {
    if sp.ring == SubringTag::Z {
        return Err(Error::HypothesisMismatch(
            "K must be a quadratic subring".into(),
        ));
    }
    if !alpha.in_subring(sp.ring) {
        return Err(Error::NotInSubring {
            element: alpha.to_string(),
            ring: sp.ring.name(),
        });
    }
    let above = m_primes_above(sp).len();
    let right = match case {
        LoweringCase::Split => {
            if above != 2 {
                return Err(Error::HypothesisMismatch(format!(
                    "prime over {} of {} does not split in M",
                    sp.p,
                    sp.ring.name()
                )));
            }
            if sp.ring == SubringTag::Zi {
                quadratic_symbol_at(alpha, sp)?
            } else {
                if sp.contains(alpha)? {
                    return Err(Error::HypothesisMismatch(
                        "prime divides alpha while psi moves i".into(),
                    ));
                }
                SymbolValue::One
            }
        }
        LoweringCase::Inert => {
            if above != 1 || !matches!(sp.kind, SubPrimeKind::Split { .. }) {
                return Err(Error::HypothesisMismatch(format!(
                    "prime over {} of {} is not a degree-1 prime inert in M",
                    sp.p,
                    sp.ring.name()
                )));
            }
            quadratic_symbol_at(alpha, sp)?.pow((sp.p + 1) / 2)
        }
    };
    let left = quartic_over_extension(alpha, sp)?;
    Ok(LoweringReport {
        case,
        left,
        right,
        holds: left == right,
    })
}

/// `true` iff `x` lies in `P O_M`; the extension is unramified, so this is
/// membership in every prime of M above `P`.
pub fn in_extended_ideal(x: &CycInt, sp: &SubPrime) -> bool {
    m_primes_above(sp).iter().all(|pr| pr.contains(x))
}

/// Some `beta'` in the subring with `beta' = beta (mod P O_M)`.
///
/// Requires `beta = psi(beta) (mod P O_M)`. With `h = (p + 1)/2` the inverse of
/// 2 mod `p`, `beta' = h (beta + psi(beta))` lies in `K` and differs from `beta`
/// by `h (beta - psi(beta))`. The coordinates are reduced mod `p`.
pub fn descend_residue(beta: &CycInt, sp: &SubPrime) -> Result<CycInt> {
    let psi = sp
        .ring
        .relative_automorphism()
        .ok_or_else(|| Error::HypothesisMismatch("K must be a quadratic subring".into()))?;
    let conj = beta.galois(psi);
    if !in_extended_ideal(&(beta - &conj), sp) {
        return Err(Error::NotDescendable);
    }
    let half = BigInt::from((sp.p + 1) / 2);
    let trace = beta + &conj;
    let (a, b) = trace.subring_coords(sp.ring)?;
    let pb = BigInt::from(sp.p);
    let a = (a * &half).mod_floor(&pb);
    let b = (b * &half).mod_floor(&pb);
    let out = &CycInt::from_int(a) + &sp.ring.generator().scale(&b);
    debug_assert!(in_extended_ideal(&(beta - &out), sp));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::subprimes_above;

    #[test]
    fn inert_case_for_sqrt_m2_at_three() {
        for sp in subprimes_above(SubringTag::Zsqrtm2, 3) {
            let rep = check_field_lowering(&sp, &CycInt::from_int(2), LoweringCase::Inert).unwrap();
            assert!(rep.holds, "{rep:?}");
        }
    }

    #[test]
    fn hypothesis_mismatch_is_reported() {
        // (3) is inert in Z[i] and splits into two primes of norm 9 in M
        let sp = subprimes_above(SubringTag::Zi, 3)[0];
        assert!(matches!(
            check_field_lowering(&sp, &CycInt::from_int(2), LoweringCase::Inert),
            Err(Error::HypothesisMismatch(_))
        ));
        let rep =
            check_field_lowering(&sp, &CycInt::from_gaussian(2, 1), LoweringCase::Split).unwrap();
        assert!(rep.holds);
        // degree-1 primes of Z[sqrt -2] over 3 stay inert in M
        let sp = subprimes_above(SubringTag::Zsqrtm2, 3)[0];
        assert!(matches!(
            check_field_lowering(&sp, &CycInt::from_int(2), LoweringCase::Split),
            Err(Error::HypothesisMismatch(_))
        ));
    }

    #[test]
    fn split_case_psi_moves_i_gives_one() {
        for ring in [SubringTag::Zsqrt2, SubringTag::Zsqrtm2] {
            for sp in subprimes_above(ring, 17) {
                for a in 1..16 {
                    let alpha =
                        &CycInt::from_int(a) + &ring.generator().scale(&BigInt::from(a + 3));
                    if sp.contains(&alpha).unwrap() {
                        continue;
                    }
                    let rep = check_field_lowering(&sp, &alpha, LoweringCase::Split).unwrap();
                    assert_eq!(rep.left, SymbolValue::One);
                }
            }
        }
    }

    #[test]
    fn descend_fixed_points() {
        let sp = subprimes_above(SubringTag::Zi, 13)[0];
        let beta = CycInt::from_gaussian(5, 7);
        let d = descend_residue(&beta, &sp).unwrap();
        assert!(in_extended_ideal(&(&beta - &d), &sp));
        assert!(matches!(
            descend_residue(&CycInt::zeta(), &sp),
            Err(Error::NotDescendable)
        ));
    }
}
