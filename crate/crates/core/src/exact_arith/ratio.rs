use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A nonnegative rational `num/den` in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ReducedRatio {
    num: BigUint,
    den: BigUint,
}

impl ReducedRatio {
    pub fn num(&self) -> &BigUint {
        &self.num
    }

    pub fn den(&self) -> &BigUint {
        &self.den
    }

    /// `max(num, den)`, the quantity the verdict bands are stated in.
    pub fn max_term(&self) -> &BigUint {
        if self.num >= self.den {
            &self.num
        } else {
            &self.den
        }
    }

    pub fn to_f64(&self) -> f64 {
        // both sides may overflow f64 while the quotient does not
        let shift = self.num.bits().max(self.den.bits()).saturating_sub(1000);
        let n = (&self.num >> shift).to_f64().unwrap_or(f64::INFINITY);
        let d = (&self.den >> shift).to_f64().unwrap_or(f64::INFINITY);
        n / d
    }

    pub fn is_integer(&self) -> bool {
        self.den.is_one()
    }
}

impl fmt::Display for ReducedRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl PartialOrd for ReducedRatio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ReducedRatio {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.num * &other.den).cmp(&(&other.num * &self.den))
    }
}

/// Reduces `num/den` to lowest terms. `0/d` normalizes to `0/1`.
pub fn reduce_ratio(num: &BigUint, den: &BigUint) -> Result<ReducedRatio> {
    if den.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    if num.is_zero() {
        return Ok(ReducedRatio {
            num: BigUint::zero(),
            den: BigUint::one(),
        });
    }
    let g = num.gcd(den);
    Ok(ReducedRatio {
        num: num / &g,
        den: den / &g,
    })
}

/// Convenience wrapper for machine-word inputs.
pub fn reduce_ratio_u64(num: u64, den: u64) -> Result<ReducedRatio> {
    reduce_ratio(&BigUint::from(num), &BigUint::from(den))
}
