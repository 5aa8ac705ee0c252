//! Linear smallest-prime-factor sieve with a per-entry divisor sum table.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Default ceiling on sieve entries.
pub const DEFAULT_SIEVE_CAP: u64 = 100_000_000;

/// Environment variable that overrides [`DEFAULT_SIEVE_CAP`].
pub const SIEVE_CAP_ENV: &str = "ALPHANUM_SIEVE_CAP";

/// Trial-division primes used ahead of rho in [`super::factorize`].
pub const TRIAL_LIMIT: u32 = 1_000_000;

/// The sieve cap in effect, honouring [`SIEVE_CAP_ENV`] when it parses.
pub fn sieve_cap() -> u64 {
    std::env::var(SIEVE_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().replace('_', "").parse::<u64>().ok())
        .unwrap_or(DEFAULT_SIEVE_CAP)
}

fn check_cap(bound: u64, cap: u64) -> Result<()> {
    if bound > cap {
        return Err(Error::ResourceCap {
            what: "sieve bound",
            count: bound.to_string(),
            cap,
        });
    }
    Ok(())
}

/// Primes up to [`TRIAL_LIMIT`], computed once.
pub fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| linear_spf(TRIAL_LIMIT as usize).1)
}

/// Returns `(spf, primes)` for `0..=limit`; `spf[0]` and `spf[1]` are zero.
fn linear_spf(limit: usize) -> (Vec<u32>, Vec<u32>) {
    let mut spf = vec![0u32; limit + 1];
    let mut primes = Vec::new();
    for i in 2..=limit {
        if spf[i] == 0 {
            spf[i] = i as u32;
            primes.push(i as u32);
        }
        let si = spf[i];
        for &p in &primes {
            let m = i * p as usize;
            if p > si || m > limit {
                break;
            }
            spf[m] = p;
        }
    }
    (spf, primes)
}

/// Smallest prime factors and `σ(n)` for every `n ≤ bound`.
///
/// Immutable once built, so it can be shared across threads by reference.
#[derive(Debug, Clone)]
pub struct SieveTable {
    bound: u64,
    spf: Vec<u32>,
    sigma1: Vec<u64>,
    primes: Vec<u32>,
}

impl SieveTable {
    /// Builds the table, respecting the environment-configured cap.
    pub fn build(bound: u64) -> Result<Self> {
        Self::build_with_cap(bound, sieve_cap())
    }

    pub fn build_with_cap(bound: u64, cap: u64) -> Result<Self> {
        if bound < 2 {
            return Err(Error::OutOfDomain(format!("sieve bound must be at least 2, got {bound}")));
        }
        check_cap(bound, cap)?;
        if bound > u32::MAX as u64 {
            return Err(Error::ResourceCap {
                what: "sieve bound",
                count: bound.to_string(),
                cap: u32::MAX as u64,
            });
        }
        let limit = bound as usize;
        let (spf, primes) = linear_spf(limit);

        let mut sigma1 = vec![0u64; limit + 1];
        sigma1[1] = 1;
        for n in 2..=limit {
            // n = p^e * rest with gcd(p, rest) = 1
            let p = spf[n] as usize;
            let mut rest = n / p;
            let mut pk = p as u64;
            let mut block = 1 + p as u64;
            while rest.is_multiple_of(p) {
                rest /= p;
                pk *= p as u64;
                block += pk;
            }
            sigma1[n] = block * sigma1[rest];
        }

        Ok(Self {
            bound,
            spf,
            sigma1,
            primes,
        })
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    /// Smallest prime factor of `n`, for `2 ≤ n ≤ bound`.
    pub fn spf(&self, n: u64) -> u32 {
        self.spf[n as usize]
    }

    /// `σ(n)` for `1 ≤ n ≤ bound`.
    pub fn sigma1(&self, n: u64) -> u64 {
        self.sigma1[n as usize]
    }

    pub fn sigma1_table(&self) -> &[u64] {
        &self.sigma1
    }

    pub fn is_prime(&self, n: u64) -> bool {
        n >= 2 && n <= self.bound && self.spf[n as usize] as u64 == n
    }

    /// Primes up to the bound, ascending.
    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    /// Prime-power decomposition of `n` by walking the spf chain.
    ///
    /// Panics if `n` is beyond the bound.
    pub fn factor_small(&self, mut n: u64) -> Vec<(u64, u32)> {
        let mut out = Vec::new();
        while n > 1 {
            let p = self.spf[n as usize] as u64;
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_sigma(n: u64) -> u64 {
        (1..=n).filter(|d| n.is_multiple_of(*d)).sum()
    }

    #[test]
    fn first_ten_divisor_sums() {
        let t = SieveTable::build(10).unwrap();
        let got: Vec<u64> = (1..=10).map(|n| t.sigma1(n)).collect();
        assert_eq!(got, vec![1, 3, 4, 7, 6, 12, 8, 15, 13, 18]);
    }

    #[test]
    fn spot_values() {
        let t = SieveTable::build(400).unwrap();
        assert_eq!(t.sigma1(28), 56);
        assert_eq!(t.spf(49), 7);
        assert_eq!(t.spf(97), 97);
        assert_eq!(t.factor_small(360), vec![(2, 3), (3, 2), (5, 1)]);
    }

    #[test]
    fn spf_marks_exactly_the_primes() {
        let t = SieveTable::build(3000).unwrap();
        for n in 2..=3000u64 {
            let trial = (2..).take_while(|d| d * d <= n).all(|d| n % d != 0);
            assert_eq!(t.spf(n) as u64 == n, trial, "n = {n}");
            assert_eq!(t.sigma1(n), brute_sigma(n), "n = {n}");
        }
    }

    #[test]
    fn cap_is_enforced() {
        let err = SieveTable::build_with_cap(1_000, 999).unwrap_err();
        assert!(err.is_resource());
        assert!(SieveTable::build(1).is_err());
    }

    #[test]
    fn small_prime_list() {
        let p = small_primes();
        assert_eq!(&p[..6], &[2, 3, 5, 7, 11, 13]);
        assert_eq!(p.len(), 78_498);
    }
}
