//! Spin symbols in Z[zeta_8] and the 16-rank of Cl(-8p).
//!
//! The library is layered bottom-up:
//!
//! * [`cyclotomic`]: exact arithmetic in Z[zeta_8], Galois action, norms,
//!   Euclid, `p = u^2 - 2v^2`, and a fundamental domain for the unit `1 + sqrt 2`.
//! * [`symbols`]: quadratic and quartic residue symbols, reciprocity units and
//!   field-lowering identities.
//! * [`spin`]: the spin symbol `[w]`, its twists by characters mod 8, and three
//!   routes to the indicator `e_p`.
//! * [`classgroup`]: class numbers by counting reduced forms.
//! * [`experiments`]: sieving, cached per-prime records, densities, partial
//!   sums and linear/bilinear sums over the fundamental domain.

pub mod arith;
pub mod classgroup;
pub mod cli;
pub mod cyclotomic;
pub mod error;
pub mod experiments;
pub mod spin;
pub mod symbols;

pub use cyclotomic::CycInt;
pub use error::{Error, Result};
