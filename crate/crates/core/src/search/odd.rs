use std::collections::BTreeMap;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::enumerate::{enumerate_alpha, make_record};
use super::record::{AlphaRecord, Parity};
use super::seeds::{allowance, next_prime, sigma_pp_parts};
use crate::classifier::{band, Order, Variant, Verdict};
use crate::error::{Error, Result};
use crate::exact_arith::{sieve_cap, SieveTable};
use crate::hyper_arith::Precision;

/// Admissible least prime for odd strong numbers up to a bound, with the
/// largest exponent it can carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorCap {
    pub prime: u64,
    pub lambda_cap: u32,
    /// Allowance of `prime^lambda_cap` alone.
    pub allowance: usize,
}

/// Generators for odd strong numbers `≤ bound`.
///
/// An odd strong number has at least three distinct primes and is not
/// squarefree, so with least prime `p` and the next two odd primes
/// `q₁ < q₂` it is at least `p²·q₁·q₂`; and `p^λ·q₁·q₂` caps the exponent.
pub fn generator_table(bound: u64) -> Vec<GeneratorCap> {
    let mut out = Vec::new();
    let mut p = 3u64;
    loop {
        let q1 = next_prime(p);
        let q2 = next_prime(q1);
        let tail = q1.saturating_mul(q2);
        if p.saturating_mul(p).saturating_mul(tail) > bound {
            break;
        }
        let mut lam = 2;
        while p
            .checked_pow(lam + 1)
            .and_then(|v| v.checked_mul(tail))
            .is_some_and(|v| v <= bound)
        {
            lam += 1;
        }
        out.push(GeneratorCap {
            prime: p,
            lambda_cap: lam,
            allowance: allowance(&[(p, lam)], bound),
        });
        p = next_prime(p);
    }
    out
}

/// Node counts from a seed search.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub roots: u64,
    pub nodes: u64,
    pub pruned: u64,
}

impl SearchStats {
    fn merge(mut self, o: Self) -> Self {
        self.roots += o.roots;
        self.nodes += o.nodes;
        self.pruned += o.pruned;
        self
    }
}

struct Dfs<'a> {
    bound: u64,
    primes: &'a [u32],
    found: Vec<u64>,
    stats: SearchStats,
}

/// Partial product `u = ∏ pᵢ^eᵢ` with primes ascending, plus `σ(u)` factored.
#[derive(Clone)]
struct Node {
    parts: Vec<(u64, u32)>,
    value: u64,
    sigma: BTreeMap<u64, u32>,
}

impl Node {
    fn root(p: u64, e: u32) -> Self {
        let mut n = Self {
            parts: Vec::new(),
            value: 1,
            sigma: BTreeMap::new(),
        };
        n.push(p, e);
        n
    }

    fn push(&mut self, p: u64, e: u32) {
        self.parts.push((p, e));
        self.value *= p.pow(e);
        for (r, f) in sigma_pp_parts(p, e) {
            *self.sigma.entry(r).or_default() += f;
        }
    }

    fn exp_of(&self, r: u64) -> u32 {
        self.parts
            .iter()
            .find(|&&(p, _)| p == r)
            .map_or(0, |&(_, e)| e)
    }
}

/// Distinct primes any completion of `u` by primes above `last` can have.
fn omega_cap(node: &Node, last: u64, bound: u64) -> u64 {
    let mut prod = node.value;
    let mut k = node.parts.len() as u64;
    let mut q = last;
    loop {
        q = next_prime(q);
        match prod.checked_mul(q) {
            Some(v) if v <= bound => {
                prod = v;
                k += 1;
            }
            _ => return k,
        }
    }
}

fn pow_capped(r: u64, e: u32) -> u128 {
    (r as u128).checked_pow(e).unwrap_or(u128::MAX)
}

impl Dfs<'_> {
    /// Every completion `n = u·z ≤ bound` with the primes of `z` above the
    /// last prime of `u` must satisfy `α₁ ≤ ω(n) ≤ cap`, and each prime power
    /// of `σ(u)` that `n` cannot absorb divides `α₁`.
    fn visit(&mut self, node: &Node) {
        self.stats.nodes += 1;
        let last = node.parts.last().expect("nonempty").0;
        let cap = omega_cap(node, last, self.bound) as u128;

        let mut locked: u128 = 1;
        let mut pending: Vec<(u64, u32)> = Vec::new();
        for (&r, &f) in &node.sigma {
            let have = node.exp_of(r);
            if have > 0 || r < last {
                // v_r(n) is settled, so r^(f - have) divides α₁
                let excess = f.saturating_sub(have);
                locked = locked.saturating_mul(pow_capped(r, excess));
            } else {
                // r may still join n; it has to when r^f alone is too large
                let mut need = 0;
                while pow_capped(r, f - need) > cap {
                    need += 1;
                }
                if need > 0 {
                    pending.push((r, need));
                }
            }
        }
        if locked > cap {
            self.stats.pruned += 1;
            return;
        }
        let required = pending
            .iter()
            .fold(node.value as u128, |acc, &(r, g)| acc.saturating_mul(pow_capped(r, g)));
        if required > self.bound as u128 {
            self.stats.pruned += 1;
            return;
        }

        if pending.is_empty() && is_strong(node) {
            self.found.push(node.value);
        }

        // a pending prime must be the next one adjoined, or a later one
        let limit = pending.iter().map(|&(r, _)| r).min().unwrap_or(u64::MAX);
        let start = self.primes.partition_point(|&p| p as u64 <= last);
        for &p in &self.primes[start..] {
            let p = p as u64;
            if p > limit {
                break;
            }
            let Some(mut v) = node.value.checked_mul(p) else {
                break;
            };
            if v > self.bound {
                break;
            }
            let mut e = 1;
            while v <= self.bound {
                let mut child = node.clone();
                child.push(p, e);
                self.visit(&child);
                match v.checked_mul(p) {
                    Some(w) => v = w,
                    None => break,
                }
                e += 1;
            }
        }
    }
}

fn is_strong(node: &Node) -> bool {
    let n = node.value;
    if n < 2 {
        return false;
    }
    let sigma: u128 = node
        .sigma
        .iter()
        .fold(1u128, |acc, (&r, &f)| acc.saturating_mul(pow_capped(r, f)));
    let n128 = n as u128;
    let g = sigma.gcd(&n128);
    let max = (sigma / g).max(n128 / g);
    let omega = node.parts.len() as u128;
    let tau: u128 = node.parts.iter().map(|&(_, e)| e as u128 + 1).product();
    band(&max, &omega, &tau, &n128) == Verdict::Strong
}

/// Strong numbers of order (1,1) up to `bound` whose least prime power is one
/// of `roots`, found by pruned depth-first search.
pub fn seed_search_from_roots(bound: u64, roots: &[(u64, u32)]) -> Result<(Vec<u64>, SearchStats)> {
    let least = roots.iter().map(|&(p, _)| p).min().unwrap_or(2).max(2);
    let table = SieveTable::build_with_cap((bound / least).max(2), sieve_cap())?;
    let primes = table.primes();
    let results: Vec<(Vec<u64>, SearchStats)> = roots
        .par_iter()
        .filter(|&&(p, e)| p.checked_pow(e).is_some_and(|v| v <= bound))
        .map(|&(p, e)| {
            let mut dfs = Dfs {
                bound,
                primes,
                found: Vec::new(),
                stats: SearchStats {
                    roots: 1,
                    ..SearchStats::default()
                },
            };
            dfs.visit(&Node::root(p, e));
            (dfs.found, dfs.stats)
        })
        .collect();
    let mut found = Vec::new();
    let mut stats = SearchStats::default();
    for (f, s) in results {
        found.extend(f);
        stats = stats.merge(s);
    }
    found.sort_unstable();
    Ok((found, stats))
}

fn records(ns: &[u64]) -> Result<Vec<AlphaRecord>> {
    let order = Order::integer(1, 1);
    let prec = Precision::default();
    ns.iter()
        .map(|&n| {
            let f = crate::exact_arith::factorize_u64(n)?;
            make_record(&f, &order, Variant::Exact, &prec)
        })
        .collect()
}

/// Odd strong numbers of order (1,1) up to `bound`, with search statistics.
pub fn seed_search_odd_stats(bound: u64) -> Result<(Vec<AlphaRecord>, SearchStats)> {
    if bound < 9 {
        return Err(Error::OutOfDomain(format!("seed search needs a bound of at least 9, got {bound}")));
    }
    let roots: Vec<(u64, u32)> = generator_table(bound)
        .iter()
        .flat_map(|g| (1..=g.lambda_cap).map(move |e| (g.prime, e)))
        .collect();
    let (found, stats) = seed_search_from_roots(bound, &roots)?;
    Ok((records(&found)?, stats))
}

pub fn seed_search_odd(bound: u64) -> Result<Vec<AlphaRecord>> {
    Ok(seed_search_odd_stats(bound)?.0)
}

/// Outcome of running the seed search next to the sieve.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossCheck {
    pub seed: Vec<AlphaRecord>,
    pub sieve: Vec<AlphaRecord>,
    pub stats: SearchStats,
}

impl CrossCheck {
    pub fn agree(&self) -> bool {
        self.seed == self.sieve
    }
}

pub fn cross_check_odd(bound: u64) -> Result<CrossCheck> {
    let (seed, stats) = seed_search_odd_stats(bound)?;
    let sieve = enumerate_alpha(bound, &Order::integer(1, 1), &[Verdict::Strong], Parity::Odd)?;
    Ok(CrossCheck { seed, sieve, stats })
}

/// Even roots `2^λ`, for exercising the search where it has hits.
pub fn even_roots(bound: u64) -> Vec<(u64, u32)> {
    (1..64)
        .take_while(|&e| 2u64.checked_pow(e).is_some_and(|v| v.saturating_mul(3) <= bound))
        .map(|e| (2, e))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_caps() {
        let t = generator_table(100_000);
        let caps: Vec<(u64, u32, usize)> =
            t.iter().map(|g| (g.prime, g.lambda_cap, g.allowance)).collect();
        assert_eq!(caps, vec![(3, 7, 3), (5, 4, 3), (7, 3, 3), (11, 2, 3), (13, 2, 3)]);
    }

    #[test]
    fn no_odd_strong_small() {
        for b in [9, 1000, 10_000] {
            let c = cross_check_odd(b).unwrap();
            assert!(c.seed.is_empty() && c.agree(), "bound {b}");
        }
    }

    #[test]
    fn finds_even_strong() {
        let (found, stats) = seed_search_from_roots(100_000, &even_roots(100_000)).unwrap();
        assert_eq!(found, vec![6, 28, 120, 496, 672, 8128, 30240, 32760]);
        assert!(stats.pruned > 0);
    }

    #[test]
    fn bound_too_small() {
        assert!(seed_search_odd(8).is_err());
    }
}
