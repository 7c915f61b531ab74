//! Sieving, cached per-prime records, densities, partial sums, linear and
//! bilinear sums, and the randomized lemma suite.

mod lemmas;
mod records;
mod sieve;
mod stats;
mod sums;

pub use lemmas::{lemma_suite, lemma_suite_with_fault, Fault, LemmaCheck, LemmaReport};
pub use records::{
    compute_record, compute_records, default_cache_dir, record_e, write_records_csv, RecordCache,
    RecordConfig, Routes, CACHE_ENV,
};
pub use sieve::{sieve_primes, PrimeSieve, ResidueClass};
pub use stats::{
    density, partial_sum, v2h_from_record, DensityReport, PartialSum, Ratio, H2_BUCKETS,
};
pub use sums::{
    ideal_generators, ideal_of_norm, parse_class, type_i_sum, type_ii_sum, CoeffMode, TypeIIParams,
    TypeIISumResult, TypeISumResult,
};
