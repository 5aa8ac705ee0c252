//! Bounded enumeration, the pruned odd search, theorem drivers and the
//! reference-table auditor.

mod audit;
mod enumerate;
mod odd;
mod record;
mod seeds;
mod theorems;

pub use audit::{audit_tables, AuditRow, AuditStatus, FLOAT_TOLERANCE};
pub use enumerate::{
    count_alpha, count_alpha_with, enumerate_alpha, enumerate_alpha_with, enumerate_range,
    make_record, reverify, ClassCounts,
};
pub use odd::{
    cross_check_odd, even_roots, generator_table, seed_search_from_roots, seed_search_odd,
    seed_search_odd_stats, CrossCheck, GeneratorCap, SearchStats,
};
pub use record::{AlphaRecord, Parity};
pub use seeds::{
    allowance, build_seeds, chi_alpha, AlphaSeed, Generator, PruneReason, VirtualAlpha,
};
pub use theorems::{sandor_profile, verify_theorem, verify_with_sieve, TheoremId, TheoremReport};
