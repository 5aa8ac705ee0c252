use std::ops::RangeInclusive;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::record::{AlphaRecord, Parity};
use crate::classifier::{band, classify, classify_exact, Order, Variant, Verdict};
use crate::error::{Error, Result};
use crate::exact_arith::{sigma_k_exact, Factorization, SieveTable};
use crate::hyper_arith::Precision;

/// Width of the ranges handed to worker threads.
const CHUNK: u64 = 1 << 15;

/// Verdict of order (1,1) straight from the sieve tables, all in `u64`.
pub(crate) fn verdict_sigma1(sieve: &SieveTable, n: u64) -> Verdict {
    if n < 2 {
        return Verdict::NotAlpha;
    }
    let sigma = sieve.sigma1(n);
    let g = sigma.gcd(&n);
    // σ(n) > n for n > 1, so the numerator is the larger term
    let max = sigma / g;
    let parts = sieve.factor_small(n);
    let omega = parts.len() as u64;
    let tau: u64 = parts.iter().map(|&(_, e)| e as u64 + 1).product();
    band(&max, &omega, &tau, &n)
}

fn verdict_of(
    sieve: &SieveTable,
    n: u64,
    order: &Order,
    variant: Variant,
    prec: &Precision,
) -> Result<Verdict> {
    if variant == Variant::Exact && order.as_integers() == Some((1, 1)) {
        return Ok(verdict_sigma1(sieve, n));
    }
    let f = Factorization::from_sieve(n, sieve)?;
    Ok(classify(&f, order, variant, prec)?.verdict)
}

/// Builds the full record for `n`, recomputing everything from the factorization.
pub fn make_record(
    f: &Factorization,
    order: &Order,
    variant: Variant,
    prec: &Precision,
) -> Result<AlphaRecord> {
    let classification = classify(f, order, variant, prec)?;
    let sigma = match variant {
        Variant::Exact => {
            let (under, _) = order.as_integers().expect("classify accepted the order");
            sigma_k_exact(f, under)
        }
        _ => {
            let mode = variant.round_mode().expect("rounded variant");
            let s = crate::hyper_arith::sigma_general(f, order.under(), prec)?;
            crate::hyper_arith::rounded_modulus(s, mode, prec)?.value
        }
    };
    Ok(AlphaRecord {
        n: f.n().clone(),
        factorization: f.clone(),
        sigma,
        classification,
        order: *order,
    })
}

fn check_request(order: &Order, variant: Variant) -> Result<()> {
    if variant == Variant::Exact && order.as_integers().is_none() {
        return Err(Error::InvalidOrder(format!(
            "exact enumeration needs an integer order, got {order}"
        )));
    }
    Ok(())
}

/// Records for the `n` in `range` whose verdict is in `classes`.
///
/// The range must lie inside the sieve.
pub fn enumerate_range(
    sieve: &SieveTable,
    range: RangeInclusive<u64>,
    order: &Order,
    variant: Variant,
    prec: &Precision,
    classes: &[Verdict],
    parity: Parity,
) -> Result<Vec<AlphaRecord>> {
    check_request(order, variant)?;
    let (lo, hi) = (*range.start().max(&1), *range.end());
    if hi > sieve.bound() {
        return Err(Error::OutOfDomain(format!(
            "range end {hi} is beyond the sieve bound {}",
            sieve.bound()
        )));
    }
    let mut out = Vec::new();
    for n in lo..=hi {
        if !parity.admits(n) {
            continue;
        }
        if classes.contains(&verdict_of(sieve, n, order, variant, prec)?) {
            let f = Factorization::from_sieve(n, sieve)?;
            out.push(make_record(&f, order, variant, prec)?);
        }
    }
    Ok(out)
}

fn chunks(bound: u64) -> Vec<RangeInclusive<u64>> {
    (0..bound.div_ceil(CHUNK))
        .map(|i| (i * CHUNK + 1)..=((i + 1) * CHUNK).min(bound))
        .collect()
}

/// Every `n ≤ bound` of the requested parity whose verdict is in `classes`,
/// ascending.
pub fn enumerate_alpha_with(
    bound: u64,
    order: &Order,
    variant: Variant,
    prec: &Precision,
    classes: &[Verdict],
    parity: Parity,
) -> Result<Vec<AlphaRecord>> {
    check_request(order, variant)?;
    let sieve = SieveTable::build(bound)?;
    let parts: Vec<Vec<AlphaRecord>> = chunks(bound)
        .into_par_iter()
        .map(|r| enumerate_range(&sieve, r, order, variant, prec, classes, parity))
        .collect::<Result<_>>()?;
    Ok(parts.into_iter().flatten().collect())
}

/// Exact-variant enumeration.
pub fn enumerate_alpha(
    bound: u64,
    order: &Order,
    classes: &[Verdict],
    parity: Parity,
) -> Result<Vec<AlphaRecord>> {
    enumerate_alpha_with(bound, order, Variant::Exact, &Precision::default(), classes, parity)
}

/// Per-verdict tallies over `1 ≤ n ≤ bound`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts {
    pub strong: u64,
    pub weak: u64,
    pub very_weak: u64,
    pub not_alpha: u64,
}

impl ClassCounts {
    pub fn get(&self, v: Verdict) -> u64 {
        match v {
            Verdict::Strong => self.strong,
            Verdict::Weak => self.weak,
            Verdict::VeryWeak => self.very_weak,
            Verdict::NotAlpha => self.not_alpha,
        }
    }

    fn bump(&mut self, v: Verdict) {
        match v {
            Verdict::Strong => self.strong += 1,
            Verdict::Weak => self.weak += 1,
            Verdict::VeryWeak => self.very_weak += 1,
            Verdict::NotAlpha => self.not_alpha += 1,
        }
    }

    fn merge(mut self, o: Self) -> Self {
        self.strong += o.strong;
        self.weak += o.weak;
        self.very_weak += o.very_weak;
        self.not_alpha += o.not_alpha;
        self
    }

    pub fn total(&self) -> u64 {
        self.strong + self.weak + self.very_weak + self.not_alpha
    }
}

pub fn count_alpha_with(
    bound: u64,
    order: &Order,
    variant: Variant,
    prec: &Precision,
    parity: Parity,
) -> Result<ClassCounts> {
    check_request(order, variant)?;
    let sieve = SieveTable::build(bound)?;
    chunks(bound)
        .into_par_iter()
        .map(|r| {
            let mut c = ClassCounts::default();
            for n in r.filter(|&n| parity.admits(n)) {
                c.bump(verdict_of(&sieve, n, order, variant, prec)?);
            }
            Ok(c)
        })
        .try_reduce(ClassCounts::default, |a, b| Ok(a.merge(b)))
}

pub fn count_alpha(bound: u64, order: &Order, parity: Parity) -> Result<ClassCounts> {
    count_alpha_with(bound, order, Variant::Exact, &Precision::default(), parity)
}

/// Recomputes a record from a fresh factorization and compares.
pub fn reverify(record: &AlphaRecord) -> Result<bool> {
    let f = crate::exact_arith::factorize(&record.n)?;
    let fresh = classify_exact(&f, &record.order)?;
    Ok(fresh == record.classification && f == record.factorization)
}
