use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_arith::{factorize, is_prime_u64, sigma_prime_power, Factorization};

/// Forced primes a closure will chase before giving up.
const MAX_CLOSURE: usize = 32;

/// Least prime strictly greater than `p`.
pub(crate) fn next_prime(p: u64) -> u64 {
    let mut q = p + 1;
    while !is_prime_u64(q) {
        q += 1;
    }
    q
}

/// `σ(p^e)` factored, as `(prime, exponent)` pairs.
pub(crate) fn sigma_pp_parts(p: u64, e: u32) -> Vec<(u64, u32)> {
    let s = sigma_prime_power(&BigUint::from(p), e, 1);
    factorize(&s)
        .expect("σ(p^e) is positive")
        .parts()
        .iter()
        .map(|q| (q.prime.to_u64().unwrap_or(u64::MAX), q.exp))
        .collect()
}

fn checked_pow(p: u64, e: u32) -> Option<u64> {
    p.checked_pow(e)
}

fn value_of(parts: &[(u64, u32)]) -> Option<u64> {
    parts
        .iter()
        .try_fold(1u64, |acc, &(p, e)| acc.checked_mul(checked_pow(p, e)?))
}

/// `ω(u)` plus the most further distinct odd primes above `p★` that fit under
/// `bound` alongside `u`, taking the smallest candidates first.
///
/// Any `n ≤ bound` built on `u` from primes above `p★` has at most this many
/// distinct prime factors.
pub fn allowance(parts: &[(u64, u32)], bound: u64) -> usize {
    let Some(&(p_star, _)) = parts.iter().min() else {
        return 0;
    };
    let Some(mut prod) = value_of(parts) else {
        return parts.len();
    };
    let mut extra = 0;
    let mut q = p_star;
    loop {
        q = next_prime(q);
        if parts.iter().any(|&(p, _)| p == q) {
            continue;
        }
        match prod.checked_mul(q) {
            Some(v) if v <= bound => {
                prod = v;
                extra += 1;
            }
            _ => break,
        }
    }
    parts.len() + extra
}

/// The least prime power `p★^λ★` of a seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Generator {
    pub prime: u64,
    pub exp: u32,
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.prime, self.exp)
    }
}

/// An odd partial product `u ≤ bound` whose least prime power is the generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaSeed {
    generator: Generator,
    factors: Factorization,
    parts: Vec<(u64, u32)>,
    value: u64,
    bound: u64,
}

impl AlphaSeed {
    /// Validates and sorts the parts; the least prime becomes the generator.
    pub fn new(parts: &[(u64, u32)], bound: u64) -> Result<Self> {
        let mut parts = parts.to_vec();
        parts.sort_unstable();
        if parts.is_empty() {
            return Err(Error::OutOfDomain("a seed needs at least one prime power".into()));
        }
        for w in parts.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::OutOfDomain(format!("prime {} repeated", w[0].0)));
            }
        }
        for &(p, e) in &parts {
            if p == 2 || !is_prime_u64(p) || e == 0 {
                return Err(Error::OutOfDomain(format!("{p}^{e} is not an odd prime power")));
            }
        }
        let value = value_of(&parts)
            .filter(|&v| v <= bound)
            .ok_or_else(|| Error::OutOfDomain(format!("seed exceeds the bound {bound}")))?;
        Ok(Self {
            generator: Generator {
                prime: parts[0].0,
                exp: parts[0].1,
            },
            factors: Factorization::from_u64_parts(&parts),
            parts,
            value,
            bound,
        })
    }

    pub fn generator(&self) -> Generator {
        self.generator
    }

    pub fn factors(&self) -> &Factorization {
        &self.factors
    }

    pub fn parts(&self) -> &[(u64, u32)] {
        &self.parts
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    /// Components adjoined to the generator.
    pub fn length(&self) -> usize {
        self.parts.len() - 1
    }
}

impl fmt::Display for AlphaSeed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.factors.fmt(f)
    }
}

/// Seeds grown from `p★^λ★`.
///
/// Odd primes in `σ` of the generator that exceed its allowance must divide
/// `n`; so must those in `σ` of each forced component, recursively. A forced
/// prime below `p★` contradicts `p★` being least, leaving no seeds. Otherwise
/// the seeds are the generator times every forced prime at its minimal
/// exponent or higher, capped by `bound`.
pub fn build_seeds(generator: Generator, bound: u64) -> Result<Vec<AlphaSeed>> {
    let Generator { prime: p, exp: lam } = generator;
    if p == 2 || !is_prime_u64(p) || lam == 0 {
        return Err(Error::OutOfDomain(format!("{generator} is not an odd prime power")));
    }
    if checked_pow(p, lam).is_none_or(|v| v > bound) {
        return Err(Error::OutOfDomain(format!("{generator} exceeds the bound {bound}")));
    }
    let cap = allowance(&[(p, lam)], bound) as u64;

    let mut forced: BTreeMap<u64, u32> = BTreeMap::new();
    let mut frontier = vec![(p, lam)];
    while let Some((q, e)) = frontier.pop() {
        for (r, f) in sigma_pp_parts(q, e) {
            if r == 2 || r <= cap || r == p || forced.contains_key(&r) {
                continue;
            }
            if r < p {
                return Ok(Vec::new());
            }
            forced.insert(r, f);
            if forced.len() > MAX_CLOSURE {
                return Ok(Vec::new());
            }
            frontier.push((r, f));
        }
    }

    let forced: Vec<(u64, u32)> = forced.into_iter().collect();
    let mut out = Vec::new();
    let mut chosen = vec![(p, lam)];
    extend_seeds(&forced, p.pow(lam), bound, &mut chosen, &mut out)?;
    out.sort_by_key(AlphaSeed::value);
    Ok(out)
}

fn extend_seeds(
    forced: &[(u64, u32)],
    value: u64,
    bound: u64,
    chosen: &mut Vec<(u64, u32)>,
    out: &mut Vec<AlphaSeed>,
) -> Result<()> {
    let Some((&(r, min_exp), rest)) = forced.split_first() else {
        out.push(AlphaSeed::new(chosen, bound)?);
        return Ok(());
    };
    let mut e = min_exp;
    while let Some(v) = checked_pow(r, e).and_then(|x| value.checked_mul(x)) {
        if v > bound {
            break;
        }
        chosen.push((r, e));
        extend_seeds(rest, v, bound, chosen, out)?;
        chosen.pop();
        e += 1;
    }
    Ok(())
}

/// Why a virtual alpha number was discarded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PruneReason {
    ForcedSmallerPrime,
    ExceedsBound,
    ForcedEvenFactor,
    Viable,
}

impl PruneReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            PruneReason::ForcedSmallerPrime => "forced-smaller-prime",
            PruneReason::ExceedsBound => "exceeds-bound",
            PruneReason::ForcedEvenFactor => "forced-even-factor",
            PruneReason::Viable => "viable",
        }
    }
}

impl fmt::Display for PruneReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The least integer a seed forces, with its viability verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VirtualAlpha {
    pub seed: AlphaSeed,
    /// `n̄`: the seed times every forced prime power.
    pub value: BigUint,
    /// Odd primes outside the seed that must divide `n`, with minimal exponents.
    pub forced: Vec<(u64, u32)>,
    /// Allowance on `α₁` for this seed.
    pub allowance: usize,
    /// Total power of two contributed by `σ` of the seed and forced parts.
    pub two_adic: u32,
    /// Every failed test, most decisive first; empty when viable.
    pub reasons: Vec<PruneReason>,
}

impl VirtualAlpha {
    pub fn chi(&self) -> u8 {
        u8::from(self.reasons.is_empty())
    }

    /// The first failed test, or `Viable`.
    pub fn reason(&self) -> PruneReason {
        self.reasons.first().copied().unwrap_or(PruneReason::Viable)
    }
}

/// Evaluates `χ_α` for a seed.
///
/// Chases forced primes through `σ` of the seed and of each forced component.
/// For odd `n` every factor of two in `σ(n)` divides `α₁`, so a 2-power above
/// the allowance is fatal. Reasons are reported in the order forced smaller
/// prime, bound overflow, forced even factor.
pub fn chi_alpha(seed: &AlphaSeed, bound: u64) -> VirtualAlpha {
    let p_star = seed.generator.prime;
    let cap = allowance(&seed.parts, bound);
    let in_seed = |r: u64| seed.parts.iter().any(|&(p, _)| p == r);

    let mut forced: BTreeMap<u64, u32> = BTreeMap::new();
    let mut smaller = false;
    let mut two_adic = 0u32;
    let mut queue: VecDeque<(u64, u32)> = seed.parts.iter().copied().collect();
    while let Some((q, e)) = queue.pop_front() {
        for (r, f) in sigma_pp_parts(q, e) {
            if r == 2 {
                two_adic += f;
                continue;
            }
            if r as u128 <= cap as u128 || in_seed(r) || forced.contains_key(&r) {
                continue;
            }
            if r < p_star {
                smaller = true;
            }
            if forced.len() < MAX_CLOSURE {
                forced.insert(r, f);
                queue.push_back((r, f));
            }
        }
    }

    let mut value = BigUint::from(seed.value);
    for (&r, &f) in &forced {
        value *= BigUint::from(r).pow(f);
    }
    let mut reasons = Vec::new();
    if smaller {
        reasons.push(PruneReason::ForcedSmallerPrime);
    }
    if value > BigUint::from(bound) {
        reasons.push(PruneReason::ExceedsBound);
    }
    if two_adic >= 64 || (1u64 << two_adic) > cap as u64 {
        reasons.push(PruneReason::ForcedEvenFactor);
    }
    VirtualAlpha {
        seed: seed.clone(),
        value,
        forced: forced.into_iter().collect(),
        allowance: cap,
        two_adic,
        reasons,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use PruneReason::*;

    const B: u64 = 100_000;

    fn seeds(p: u64, e: u32) -> Vec<String> {
        build_seeds(Generator { prime: p, exp: e }, B)
            .unwrap()
            .iter()
            .map(|s| s.to_string())
            .collect()
    }

    #[test]
    fn generator_allowances() {
        let cases = [
            ((3, 7), 3),
            ((3, 6), 3),
            ((3, 5), 4),
            ((3, 4), 4),
            ((3, 3), 4),
            ((3, 2), 5),
            ((5, 4), 3),
            ((5, 3), 3),
            ((5, 2), 4),
            ((7, 3), 3),
            ((7, 2), 3),
            ((11, 2), 3),
            ((13, 2), 3),
        ];
        for ((p, e), a) in cases {
            assert_eq!(allowance(&[(p, e)], B), a, "{p}^{e}");
        }
    }

    #[test]
    fn seed_sets() {
        assert_eq!(seeds(3, 5), vec!["3^5*7*13"]);
        assert!(seeds(3, 4).is_empty());
        assert_eq!(seeds(3, 3), vec!["3^3*5", "3^3*5^2", "3^3*5^3", "3^3*5^4", "3^3*5^5"]);
        assert_eq!(
            seeds(3, 2),
            vec!["3^2*7*13", "3^2*7^2*13", "3^2*7*13^2", "3^2*7^3*13", "3^2*7^2*13^2"]
        );
        assert_eq!(seeds(5, 3), vec!["5^3*7*13", "5^3*7^2*13"]);
        assert_eq!(seeds(5, 2), vec!["5^2*31", "5^2*31^2"]);
        for (p, e) in [(3, 7), (3, 6), (5, 4), (7, 3), (7, 2), (11, 2), (13, 2)] {
            assert!(seeds(p, e).is_empty(), "{p}^{e}");
        }
    }

    #[test]
    fn seed_validation() {
        assert!(AlphaSeed::new(&[(2, 3)], B).is_err());
        assert!(AlphaSeed::new(&[(9, 1)], B).is_err());
        assert!(AlphaSeed::new(&[(3, 20)], B).is_err());
        let s = AlphaSeed::new(&[(13, 1), (3, 2), (7, 1)], B).unwrap();
        assert_eq!(s.generator(), Generator { prime: 3, exp: 2 });
        assert_eq!((s.value(), s.length()), (819, 2));
        assert!(build_seeds(Generator { prime: 9, exp: 1 }, B).is_err());
    }

    fn chi(parts: &[(u64, u32)]) -> VirtualAlpha {
        chi_alpha(&AlphaSeed::new(parts, B).unwrap(), B)
    }

    #[test]
    fn chi_examples() {
        let v = chi(&[(5, 2), (31, 2)]);
        assert_eq!(v.chi(), 0);
        assert_eq!(v.reason(), ForcedSmallerPrime);
        assert_eq!(v.reasons, vec![ForcedSmallerPrime, ExceedsBound, ForcedEvenFactor]);
        assert_eq!(v.forced, vec![(3, 1), (7, 1), (83, 1), (331, 1)]);
        assert_eq!(v.value, BigUint::from(13_860_815_325u64));

        let v = chi(&[(3, 3), (5, 4)]);
        assert_eq!(v.reason(), ExceedsBound);
        assert_eq!(v.forced, vec![(11, 1), (71, 1)]);
        assert_eq!((v.allowance, v.two_adic), (2, 8));

        let v = chi(&[(3, 3), (5, 1)]);
        assert_eq!(v.reasons, vec![ForcedEvenFactor]);
        assert_eq!(v.value, BigUint::from(135u32));
    }

    #[test]
    fn chi_can_be_viable() {
        // σ(3) = 4 fits under an allowance of 8 primes
        let big = 1_000_000_000;
        let v = chi_alpha(&AlphaSeed::new(&[(3, 1)], big).unwrap(), big);
        assert_eq!((v.allowance, v.two_adic), (8, 2));
        assert_eq!(v.reason(), Viable);
        assert_eq!(v.chi(), 1);
    }
}
