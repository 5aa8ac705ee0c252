use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::primality::{is_prime, is_prime_u64, rho_big, rho_u64};
use super::sieve::{small_primes, SieveTable};
use crate::error::{Error, Result};

/// One `p^e` component of a factorization.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimePower {
    pub prime: BigUint,
    pub exp: u32,
}

impl PrimePower {
    pub fn value(&self) -> BigUint {
        self.prime.pow(self.exp)
    }
}

/// Canonical prime-power decomposition of a positive integer.
///
/// Primes are strictly increasing, exponents are at least one, and the parts
/// multiply back to `n`. The unit has no parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Factorization {
    n: BigUint,
    parts: Vec<PrimePower>,
}

impl Factorization {
    pub fn one() -> Self {
        Self {
            n: BigUint::one(),
            parts: Vec::new(),
        }
    }

    /// Builds a factorization from explicit parts, checking every invariant.
    pub fn from_parts<I>(parts: I) -> Result<Self>
    where
        I: IntoIterator<Item = (BigUint, u32)>,
    {
        let mut out: Vec<PrimePower> = Vec::new();
        let mut n = BigUint::one();
        for (prime, exp) in parts {
            if exp == 0 {
                return Err(Error::Parse(format!("zero exponent on {prime}")));
            }
            if !is_prime(&prime) {
                return Err(Error::Parse(format!("{prime} is not prime")));
            }
            if let Some(last) = out.last() {
                if last.prime >= prime {
                    return Err(Error::Parse("primes must be strictly increasing".into()));
                }
            }
            n *= prime.pow(exp);
            out.push(PrimePower { prime, exp });
        }
        Ok(Self { n, parts: out })
    }

    /// Trusted constructor for parts already known to be canonical.
    pub(crate) fn from_u64_parts(parts: &[(u64, u32)]) -> Self {
        let mut n = BigUint::one();
        let parts = parts
            .iter()
            .map(|&(p, e)| {
                let prime = BigUint::from(p);
                n *= prime.pow(e);
                PrimePower { prime, exp: e }
            })
            .collect();
        Self { n, parts }
    }

    /// Factorization read off a sieve, for `1 ≤ n ≤ sieve.bound()`.
    pub fn from_sieve(n: u64, sieve: &SieveTable) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroInput);
        }
        if n > sieve.bound() {
            return Err(Error::OutOfDomain(format!(
                "{n} is beyond the sieve bound {}",
                sieve.bound()
            )));
        }
        Ok(Self::from_u64_parts(&sieve.factor_small(n)))
    }

    pub fn n(&self) -> &BigUint {
        &self.n
    }

    pub fn parts(&self) -> &[PrimePower] {
        &self.parts
    }

    pub fn is_one(&self) -> bool {
        self.parts.is_empty()
    }

    /// Number of distinct prime factors.
    pub fn omega(&self) -> usize {
        self.parts.len()
    }

    /// Number of prime factors counted with multiplicity.
    pub fn big_omega(&self) -> u64 {
        self.parts.iter().map(|p| p.exp as u64).sum()
    }

    pub fn is_odd(&self) -> bool {
        self.n.is_odd()
    }

    pub fn is_prime_power(&self) -> bool {
        self.parts.len() == 1
    }

    pub fn is_squarefree(&self) -> bool {
        self.parts.iter().all(|p| p.exp == 1)
    }

    pub fn is_square(&self) -> bool {
        self.parts.iter().all(|p| p.exp % 2 == 0)
    }

    /// Product of the parts, recomputed from scratch.
    pub fn product(&self) -> BigUint {
        self.parts.iter().map(PrimePower::value).product()
    }
}

impl fmt::Display for Factorization {
    /// `p^e*p^e` with `^1` omitted; the unit prints as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return f.write_str("1");
        }
        for (i, part) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            if part.exp == 1 {
                write!(f, "{}", part.prime)?;
            } else {
                write!(f, "{}^{}", part.prime, part.exp)?;
            }
        }
        Ok(())
    }
}

impl FromStr for Factorization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "1" {
            return Ok(Self::one());
        }
        let mut parts = Vec::new();
        for token in s.split('*') {
            let (p, e) = match token.split_once('^') {
                Some((p, e)) => (p, e),
                None => (token, "1"),
            };
            let prime = p
                .trim()
                .parse::<BigUint>()
                .map_err(|_| Error::Parse(format!("bad prime {p:?}")))?;
            let exp = e
                .trim()
                .parse::<u32>()
                .map_err(|_| Error::Parse(format!("bad exponent {e:?}")))?;
            parts.push((prime, exp));
        }
        Self::from_parts(parts)
    }
}

/// Factors a positive integer: trial division by the primes below one
/// million, then Pollard–Brent rho on whatever cofactor is left.
pub fn factorize(n: &BigUint) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::ZeroInput);
    }
    if let Some(small) = n.to_u64() {
        return factorize_u64(small);
    }

    let mut rest = n.clone();
    let mut found: Vec<(BigUint, u32)> = Vec::new();
    for &p in small_primes() {
        let pb = BigUint::from(p);
        if &pb * &pb > rest {
            break;
        }
        let mut e = 0;
        loop {
            let (q, r) = rest.div_rem(&pb);
            if !r.is_zero() {
                break;
            }
            rest = q;
            e += 1;
        }
        if e > 0 {
            found.push((pb, e));
        }
        if rest.to_u64().is_some() {
            break;
        }
    }

    if let Some(small) = rest.to_u64() {
        let tail = factorize_u64(small)?;
        for part in tail.parts {
            found.push((part.prime, part.exp));
        }
    } else {
        let mut primes = Vec::new();
        split_big(rest, &mut primes);
        primes.sort();
        for p in primes {
            match found.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => found.push((p, 1)),
            }
        }
    }
    found.sort();
    Ok(Factorization::from_sorted_parts(found))
}

impl Factorization {
    fn from_sorted_parts(parts: Vec<(BigUint, u32)>) -> Self {
        let mut merged: Vec<PrimePower> = Vec::with_capacity(parts.len());
        let mut n = BigUint::one();
        for (prime, exp) in parts {
            n *= prime.pow(exp);
            match merged.last_mut() {
                Some(last) if last.prime == prime => last.exp += exp,
                _ => merged.push(PrimePower { prime, exp }),
            }
        }
        Self { n, parts: merged }
    }
}

fn split_big(n: BigUint, out: &mut Vec<BigUint>) {
    if n.is_one() {
        return;
    }
    if let Some(small) = n.to_u64() {
        let mut v = Vec::new();
        split_u64(small, &mut v);
        out.extend(v.into_iter().map(BigUint::from));
        return;
    }
    if is_prime(&n) {
        out.push(n);
        return;
    }
    let d = rho_big(&n);
    let other = &n / &d;
    split_big(d, out);
    split_big(other, out);
}

fn split_u64(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime_u64(n) {
        out.push(n);
        return;
    }
    let d = rho_u64(n);
    split_u64(d, out);
    split_u64(n / d, out);
}

/// Machine-word fast path of [`factorize`].
pub fn factorize_u64(mut n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::ZeroInput);
    }
    let mut parts: Vec<(u64, u32)> = Vec::new();
    for &p in small_primes() {
        let p = p as u64;
        if p * p > n {
            break;
        }
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            parts.push((p, e));
        }
    }
    if n > 1 {
        let mut rest = Vec::new();
        split_u64(n, &mut rest);
        rest.sort_unstable();
        for p in rest {
            match parts.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => parts.push((p, 1)),
            }
        }
    }
    Ok(Factorization::from_u64_parts(&parts))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parts(f: &Factorization) -> Vec<(u64, u32)> {
        f.parts()
            .iter()
            .map(|p| (p.prime.to_u64().unwrap(), p.exp))
            .collect()
    }

    #[test]
    fn unit_and_zero() {
        let one = factorize_u64(1).unwrap();
        assert!(one.parts().is_empty());
        assert_eq!(one.to_string(), "1");
        assert_eq!(factorize_u64(0).unwrap_err(), Error::ZeroInput);
        assert_eq!(factorize(&BigUint::zero()).unwrap_err(), Error::ZeroInput);
    }

    #[test]
    fn known_factorizations() {
        let f = factorize_u64(10920).unwrap();
        assert_eq!(parts(&f), vec![(2, 3), (3, 1), (5, 1), (7, 1), (13, 1)]);
        assert_eq!(f.product(), BigUint::from(10920u32));

        let f = factorize_u64(523776).unwrap();
        assert_eq!(parts(&f), vec![(2, 9), (3, 1), (11, 1), (31, 1)]);
        assert_eq!(f.to_string(), "2^9*3*11*31");
    }

    #[test]
    fn beyond_trial_range() {
        // two primes above the trial limit
        let n = 1_000_003u64 * 1_000_033;
        let f = factorize_u64(n).unwrap();
        assert_eq!(parts(&f), vec![(1_000_003, 1), (1_000_033, 1)]);

        let f = factorize_u64(u64::MAX).unwrap();
        assert_eq!(f.product(), BigUint::from(u64::MAX));
        assert_eq!(
            parts(&f),
            vec![(3, 1), (5, 1), (17, 1), (257, 1), (641, 1), (65537, 1), (6700417, 1)]
        );
    }

    #[test]
    fn big_inputs() {
        let p = BigUint::from(1_000_000_007u64);
        let q = BigUint::from(18446744073709551557u64);
        let n = &p * &q * 12u32;
        let f = factorize(&n).unwrap();
        assert_eq!(f.product(), n);
        assert_eq!(f.to_string(), "2^2*3*1000000007*18446744073709551557");

        let n = BigUint::from(3u32).pow(50) * BigUint::from(1_000_003u32).pow(2);
        let f = factorize(&n).unwrap();
        assert_eq!(f.to_string(), "3^50*1000003^2");
    }

    #[test]
    fn display_round_trip() {
        let f: Factorization = "2^2*7".parse().unwrap();
        assert_eq!(f.n(), &BigUint::from(28u32));
        assert_eq!(f.to_string(), "2^2*7");
        assert!("4*7".parse::<Factorization>().is_err());
        assert!("7*2".parse::<Factorization>().is_err());
        assert!("2^0".parse::<Factorization>().is_err());
    }

    #[test]
    fn sieve_and_trial_agree() {
        let t = SieveTable::build(20_000).unwrap();
        for n in 1..=20_000u64 {
            assert_eq!(Factorization::from_sieve(n, &t).unwrap(), factorize_u64(n).unwrap());
        }
    }
}
