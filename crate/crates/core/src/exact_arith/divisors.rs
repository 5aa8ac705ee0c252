use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::factorization::Factorization;
use crate::error::{Error, Result};

/// Largest divisor count [`divisors_list`] will materialize by default.
pub const DEFAULT_DIVISOR_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorStats {
    /// ω(n), distinct primes.
    pub omega: usize,
    /// Ω(n), primes with multiplicity.
    pub big_omega: u64,
    /// τ(n), number of divisors.
    pub tau: BigUint,
    /// φ(n), Euler's totient.
    pub phi: BigUint,
}

pub fn divisor_stats(f: &Factorization) -> DivisorStats {
    let mut tau = BigUint::one();
    let mut phi = BigUint::one();
    for part in f.parts() {
        tau *= part.exp + 1;
        // φ(p^e) = p^(e-1) (p - 1)
        phi *= part.prime.pow(part.exp - 1) * (&part.prime - 1u32);
    }
    DivisorStats {
        omega: f.omega(),
        big_omega: f.big_omega(),
        tau,
        phi,
    }
}

/// τ(n) alone, without the totient work.
pub fn tau(f: &Factorization) -> BigUint {
    f.parts().iter().map(|p| BigUint::from(p.exp + 1)).product()
}

/// `σ_k(p^e) = 1 + p^k + … + p^(ek)`.
pub fn sigma_prime_power(prime: &BigUint, exp: u32, k: u32) -> BigUint {
    if k == 0 {
        return BigUint::from(exp + 1);
    }
    let pk = prime.pow(k);
    (pk.pow(exp + 1) - 1u32) / (pk - 1u32)
}

/// `σ_k(n) = Σ_{d|n} d^k`, exact. `k = 0` gives τ(n).
pub fn sigma_k_exact(f: &Factorization, k: u32) -> BigUint {
    f.parts()
        .iter()
        .map(|p| sigma_prime_power(&p.prime, p.exp, k))
        .product()
}

/// All divisors in ascending order, refusing when τ(n) exceeds the default cap.
pub fn divisors_list(f: &Factorization) -> Result<Vec<BigUint>> {
    divisors_list_with_cap(f, DEFAULT_DIVISOR_CAP)
}

pub fn divisors_list_with_cap(f: &Factorization, cap: u64) -> Result<Vec<BigUint>> {
    let count = tau(f);
    if count > BigUint::from(cap) {
        return Err(Error::ResourceCap {
            what: "divisor count",
            count: count.to_string(),
            cap,
        });
    }
    let mut divs = Vec::with_capacity(count.to_usize().unwrap_or(0));
    divs.push(BigUint::one());
    for part in f.parts() {
        let len = divs.len();
        let mut pk = BigUint::one();
        for _ in 0..part.exp {
            pk *= &part.prime;
            for i in 0..len {
                let d = &divs[i] * &pk;
                divs.push(d);
            }
        }
    }
    divs.sort();
    Ok(divs)
}

/// Whether the harmonic mean of the divisors is an integer, i.e. σ(n) | n·τ(n).
pub fn is_ore_harmonic(f: &Factorization) -> bool {
    let sigma = sigma_k_exact(f, 1);
    (f.n() * tau(f)).mod_floor(&sigma).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::factorize_u64;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn stats_examples() {
        let s = divisor_stats(&factorize_u64(9).unwrap());
        assert_eq!((s.omega, s.big_omega, s.tau, s.phi), (1, 2, big(3), big(6)));

        let s = divisor_stats(&factorize_u64(10920).unwrap());
        assert_eq!((s.omega, s.big_omega, s.tau, s.phi), (5, 7, big(64), big(2304)));

        let s = divisor_stats(&factorize_u64(11172).unwrap());
        assert_eq!((s.omega, s.tau), (4, big(36)));

        let s = divisor_stats(&Factorization::one());
        assert_eq!((s.omega, s.big_omega, s.tau, s.phi), (0, 0, big(1), big(1)));
    }

    #[test]
    fn phi_matches_gcd_count() {
        for n in 1..=500u64 {
            let brute = (1..=n).filter(|k| k.gcd(&n) == 1).count() as u64;
            assert_eq!(divisor_stats(&factorize_u64(n).unwrap()).phi, big(brute), "n = {n}");
        }
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(sigma_k_exact(&factorize_u64(28).unwrap(), 1), big(56));
        assert_eq!(sigma_k_exact(&factorize_u64(10).unwrap(), 2), big(130));
        for k in 0..5 {
            assert_eq!(sigma_k_exact(&Factorization::one(), k), big(1));
        }
        assert_eq!(sigma_k_exact(&factorize_u64(24).unwrap(), 0), big(8));
    }

    #[test]
    fn divisor_lists() {
        let list = |n| divisors_list(&factorize_u64(n).unwrap()).unwrap();
        assert_eq!(list(6), vec![big(1), big(2), big(3), big(6)]);
        assert_eq!(list(9), vec![big(1), big(3), big(9)]);
        assert_eq!(list(24).iter().sum::<BigUint>(), big(60));
        assert_eq!(list(1), vec![big(1)]);
    }

    #[test]
    fn divisor_cap() {
        let f = factorize_u64(720720).unwrap(); // τ = 240
        assert!(divisors_list_with_cap(&f, 240).is_ok());
        let err = divisors_list_with_cap(&f, 239).unwrap_err();
        assert!(err.is_resource());
    }

    #[test]
    fn ore_harmonic() {
        let check = |n| is_ore_harmonic(&factorize_u64(n).unwrap());
        assert!(check(1));
        assert!(check(6));
        assert!(check(140));
        assert!(!check(10));
        // the first few harmonic divisor numbers
        let found: Vec<u64> = (1..=10_000).filter(|&n| check(n)).collect();
        assert_eq!(found, vec![1, 6, 28, 140, 270, 496, 672, 1638, 2970, 6200, 8128, 8190]);
    }
}
