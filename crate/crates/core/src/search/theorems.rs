use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::enumerate::verdict_sigma1;
use super::seeds::sigma_pp_parts;
use crate::classifier::{classify_exact, totient_bound, Order, Verdict};
use crate::error::{Error, Result};
use crate::exact_arith::{Factorization, SieveTable};

/// The finitely checkable statements the verifier knows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TheoremId {
    /// `σ(n) = k·n` with `2 ≤ k ≤ ω(n)` implies strong.
    T3_1r,
    /// Prime powers are never @-numbers of order (1,1).
    T3_2,
    /// Odd squarefree `n` with `ω ≥ 2` is neither strong nor weak.
    T3_3,
    /// Odd `n` with every exponent `≥ 2` and every `σ(pᵢ^eᵢ)` prime is not strong.
    T3_4,
    /// A strong `p₁^a·p₂` is perfect.
    T3_5,
    /// `σ(n)/n` stays below the totient bound for `n ≥ 3`.
    T3_8,
    /// Squares with `ω ≤ 2` are not strong for orders in `{1,2,3}²`.
    T3_9,
    /// Nothing is strong of order `(a, a+3)` for `a ∈ {1,2}`.
    T3_10,
}

impl TheoremId {
    pub const ALL: [TheoremId; 8] = [
        TheoremId::T3_1r,
        TheoremId::T3_2,
        TheoremId::T3_3,
        TheoremId::T3_4,
        TheoremId::T3_5,
        TheoremId::T3_8,
        TheoremId::T3_9,
        TheoremId::T3_10,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            TheoremId::T3_1r => "3.1r",
            TheoremId::T3_2 => "3.2",
            TheoremId::T3_3 => "3.3",
            TheoremId::T3_4 => "3.4",
            TheoremId::T3_5 => "3.5",
            TheoremId::T3_8 => "3.8",
            TheoremId::T3_9 => "3.9",
            TheoremId::T3_10 => "3.10",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        Self::ALL
            .into_iter()
            .find(|t| t.as_str() == key || (key == "3.1" && *t == TheoremId::T3_1r))
            .ok_or_else(|| Error::Parse(format!("unknown theorem id {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub id: TheoremId,
    pub bound: u64,
    /// Integers the statement actually constrained.
    pub checked: u64,
    /// Least failing `n`, if any.
    pub counterexample: Option<u64>,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Outcome of one `n`: not covered, covered and fine, or a failure.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Check {
    Skip,
    Pass,
    Fail,
}

fn check(cond: bool, holds: bool) -> Check {
    match (cond, holds) {
        (false, _) => Check::Skip,
        (true, true) => Check::Pass,
        (true, false) => Check::Fail,
    }
}

fn check_one(id: TheoremId, sieve: &SieveTable, n: u64) -> Result<Check> {
    let parts = sieve.factor_small(n);
    let omega = parts.len();
    Ok(match id {
        TheoremId::T3_1r => {
            let s = sieve.sigma1(n);
            let k = s / n;
            let cond = n > 1 && s.is_multiple_of(n) && 2 <= k && k <= omega as u64;
            check(cond, cond && verdict_sigma1(sieve, n) == Verdict::Strong)
        }
        TheoremId::T3_2 => check(omega == 1, verdict_sigma1(sieve, n) == Verdict::NotAlpha),
        TheoremId::T3_3 => {
            let cond = n % 2 == 1 && omega >= 2 && parts.iter().all(|&(_, e)| e == 1);
            let v = verdict_sigma1(sieve, n);
            check(cond, v != Verdict::Strong && v != Verdict::Weak)
        }
        TheoremId::T3_4 => {
            let cond = n % 2 == 1
                && omega >= 1
                && parts.iter().all(|&(p, e)| {
                    e >= 2 && matches!(sigma_pp_parts(p, e).as_slice(), [(_, 1)])
                });
            check(cond, verdict_sigma1(sieve, n) != Verdict::Strong)
        }
        TheoremId::T3_5 => {
            let cond = omega == 2 && parts.iter().any(|&(_, e)| e == 1);
            let strong = verdict_sigma1(sieve, n) == Verdict::Strong;
            check(cond, !strong || sieve.sigma1(n) == 2 * n)
        }
        TheoremId::T3_8 => {
            let cond = n >= 3;
            check(cond, cond && (sieve.sigma1(n) as f64 / n as f64) < totient_bound(n as f64))
        }
        TheoremId::T3_9 => {
            let cond = n > 1 && omega <= 2 && parts.iter().all(|&(_, e)| e % 2 == 0);
            if !cond {
                return Ok(Check::Skip);
            }
            let f = Factorization::from_sieve(n, sieve)?;
            let mut ok = true;
            for a in 1..=3 {
                for b in 1..=3 {
                    ok &= classify_exact(&f, &Order::integer(a, b))?.verdict != Verdict::Strong;
                }
            }
            check(true, ok)
        }
        TheoremId::T3_10 => {
            let f = Factorization::from_sieve(n, sieve)?;
            let mut ok = true;
            for a in 1..=2 {
                ok &= classify_exact(&f, &Order::integer(a, a + 3))?.verdict != Verdict::Strong;
            }
            check(true, ok)
        }
    })
}

/// Exhaustive check of a theorem over `1 ≤ n ≤ bound`.
pub fn verify_theorem(id: TheoremId, bound: u64) -> Result<TheoremReport> {
    let sieve = SieveTable::build(bound.max(2))?;
    verify_with_sieve(id, &sieve, bound)
}

/// Same as [`verify_theorem`] over a prebuilt sieve covering `bound`.
pub fn verify_with_sieve(id: TheoremId, sieve: &SieveTable, bound: u64) -> Result<TheoremReport> {
    if bound > sieve.bound() {
        return Err(Error::OutOfDomain(format!(
            "bound {bound} is beyond the sieve bound {}",
            sieve.bound()
        )));
    }
    const CHUNK: u64 = 1 << 14;
    let blocks: Vec<u64> = (0..bound.div_ceil(CHUNK)).collect();
    let outcomes: Vec<(u64, Option<u64>)> = blocks
        .into_par_iter()
        .map(|i| {
            let mut checked = 0u64;
            for n in (i * CHUNK + 1)..=((i + 1) * CHUNK).min(bound) {
                match check_one(id, sieve, n) {
                    Ok(Check::Skip) => {}
                    Ok(Check::Pass) => checked += 1,
                    Ok(Check::Fail) | Err(_) => return (checked + 1, Some(n)),
                }
            }
            (checked, None)
        })
        .collect();
    let checked = outcomes.iter().map(|o| o.0).sum();
    let counterexample = outcomes.iter().filter_map(|o| o.1).min();
    Ok(TheoremReport {
        id,
        bound,
        checked,
        counterexample,
    })
}

/// Largest `σ(n) / (n · ln ln φ(n))` over `n ≤ bound` where the logarithm is positive.
pub fn sandor_profile(bound: u64) -> Result<crate::classifier::SandorProfile> {
    let mut best = crate::classifier::SandorProfile {
        bound,
        samples: 0,
        max_quotient: 0.0,
        argmax: 0,
    };
    for n in 1..=bound {
        let f = crate::exact_arith::factorize_u64(n)?;
        if let Some(q) = crate::classifier::sandor_quotient(&f) {
            best.samples += 1;
            if q > best.max_quotient {
                best.max_quotient = q;
                best.argmax = n;
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_pass_small() {
        let sieve = SieveTable::build(20_000).unwrap();
        for id in TheoremId::ALL {
            let r = verify_with_sieve(id, &sieve, 20_000).unwrap();
            assert!(r.passed(), "{id}: {:?}", r.counterexample);
            assert!(r.checked > 0, "{id} checked nothing");
        }
    }

    #[test]
    fn id_parsing() {
        for id in TheoremId::ALL {
            assert_eq!(id.as_str().parse::<TheoremId>().unwrap(), id);
        }
        assert_eq!("3.1".parse::<TheoremId>().unwrap(), TheoremId::T3_1r);
        assert!("3.6".parse::<TheoremId>().is_err());
    }

    #[test]
    fn multiperfect_counts() {
        let sieve = SieveTable::build(1000).unwrap();
        let r = verify_with_sieve(TheoremId::T3_1r, &sieve, 1000).unwrap();
        // 6, 28, 120, 496, 672
        assert_eq!(r.checked, 5);
    }

    #[test]
    fn profile_reports_a_maximum() {
        let p = sandor_profile(2000).unwrap();
        assert!(p.samples > 1900 && p.max_quotient > 1.0 && p.argmax > 0);
    }
}
