//! Exact integer arithmetic: factorization, divisor functions, reduced
//! ratios and the bulk sieve backing enumeration.

mod divisors;
mod factorization;
mod primality;
mod ratio;
mod sieve;

pub use divisors::{
    divisor_stats, divisors_list, divisors_list_with_cap, is_ore_harmonic, sigma_k_exact,
    sigma_prime_power, tau, DivisorStats, DEFAULT_DIVISOR_CAP,
};
pub use factorization::{factorize, factorize_u64, Factorization, PrimePower};
pub use primality::{is_prime, is_prime_u64};
pub use ratio::{reduce_ratio, reduce_ratio_u64, ReducedRatio};
pub use sieve::{sieve_cap, small_primes, SieveTable, DEFAULT_SIEVE_CAP, SIEVE_CAP_ENV, TRIAL_LIMIT};

/// [`SieveTable::build`] under its operation name.
pub fn build_sieve(bound: u64) -> crate::Result<SieveTable> {
    SieveTable::build(bound)
}
