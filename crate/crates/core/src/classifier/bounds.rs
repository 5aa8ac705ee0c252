use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_arith::{divisor_stats, sigma_k_exact, Factorization};

/// `e^γ`, Euler–Mascheroni exponentiated.
pub const EXP_GAMMA: f64 = 1.781_072_417_990_198;

/// Second-order constant of the totient bound.
pub const TOTIENT_CORRECTION: f64 = 0.6483;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioBound {
    pub ratio: f64,
    pub bound: f64,
    pub ok: bool,
}

fn to_f64(x: &num_bigint::BigUint) -> Result<f64> {
    x.to_f64()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::OutOfDomain(format!("{x} does not fit a double")))
}

/// `e^γ ln ln n + 0.6483 / ln ln n`, for `n ≥ 3`.
pub fn totient_bound(n: f64) -> f64 {
    let ll = n.ln().ln();
    EXP_GAMMA * ll + TOTIENT_CORRECTION / ll
}

/// Compares `σ(n)/n` with the totient bound.
pub fn ratio_bound_check(f: &Factorization) -> Result<RatioBound> {
    let n = to_f64(f.n())?;
    if n < 3.0 {
        return Err(Error::OutOfDomain(format!(
            "the ratio bound needs n ≥ 3, got {}",
            f.n()
        )));
    }
    let ratio = to_f64(&sigma_k_exact(f, 1))? / n;
    let bound = totient_bound(n);
    Ok(RatioBound {
        ratio,
        bound,
        ok: ratio < bound,
    })
}

/// `σ(n) / (n · ln ln φ(n))`, or `None` when `φ(n) ≤ e` makes the logarithm
/// nonpositive.
pub fn sandor_quotient(f: &Factorization) -> Option<f64> {
    let phi = to_f64(&divisor_stats(f).phi).ok()?;
    let ll = phi.ln().ln();
    if !(ll > 0.0) {
        return None;
    }
    let n = to_f64(f.n()).ok()?;
    let sigma = to_f64(&sigma_k_exact(f, 1)).ok()?;
    Some(sigma / (n * ll))
}

/// Empirical maximum of [`sandor_quotient`] over a range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SandorProfile {
    pub bound: u64,
    pub samples: u64,
    pub max_quotient: f64,
    pub argmax: u64,
}
