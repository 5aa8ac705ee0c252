use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_arith::{reduce_ratio, sigma_k_exact, tau, Factorization, ReducedRatio};
use crate::hyper_arith::{
    real_pow_quat, rounded_modulus, sigma_general, Precision, Quaternion, RoundMode,
};

/// Whether an order can be evaluated in exact integer arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Exactness {
    ExactInteger,
    Floating,
}

/// The order `(under, upper)`: the `σ` exponent and the power of `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Order {
    under: Quaternion,
    upper: Quaternion,
    exactness: Exactness,
}

impl Order {
    /// An exact integer order.
    pub fn integer(under: u32, upper: u32) -> Self {
        Self {
            under: Quaternion::real(under as f64),
            upper: Quaternion::real(upper as f64),
            exactness: Exactness::ExactInteger,
        }
    }

    /// Any quaternion order. Nonnegative integer pairs are marked exact.
    pub fn general(under: Quaternion, upper: Quaternion) -> Result<Self> {
        if !under.is_finite() || !upper.is_finite() {
            return Err(Error::InvalidOrder("components must be finite".into()));
        }
        let exactness = match (under.as_nonneg_integer(), upper.as_nonneg_integer()) {
            (Some(_), Some(_)) => Exactness::ExactInteger,
            _ => Exactness::Floating,
        };
        Ok(Self {
            under,
            upper,
            exactness,
        })
    }

    /// Same values, forced onto the floating route.
    pub fn floating(self) -> Self {
        Self {
            exactness: Exactness::Floating,
            ..self
        }
    }

    pub fn under(&self) -> Quaternion {
        self.under
    }

    pub fn upper(&self) -> Quaternion {
        self.upper
    }

    pub fn exactness(&self) -> Exactness {
        self.exactness
    }

    /// `(under, upper)` as integers when the order is exact.
    pub fn as_integers(&self) -> Option<(u32, u32)> {
        if self.exactness != Exactness::ExactInteger {
            return None;
        }
        Some((self.under.as_nonneg_integer()?, self.upper.as_nonneg_integer()?))
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.under, self.upper)
    }
}

impl FromStr for Order {
    type Err = Error;

    /// `a,b` with nonnegative integers.
    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once(',')
            .ok_or_else(|| Error::InvalidOrder(format!("expected `a,b`, got {s:?}")))?;
        let parse = |t: &str| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| Error::InvalidOrder(format!("{t:?} is not a nonnegative integer")))
        };
        Ok(Self::integer(parse(a)?, parse(b)?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Verdict {
    Strong,
    Weak,
    VeryWeak,
    NotAlpha,
}

impl Verdict {
    pub const BANDS: [Verdict; 3] = [Verdict::Strong, Verdict::Weak, Verdict::VeryWeak];

    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Strong => "Strong",
            Verdict::Weak => "Weak",
            Verdict::VeryWeak => "VeryWeak",
            Verdict::NotAlpha => "NotAlpha",
        }
    }

    pub fn is_alpha(&self) -> bool {
        *self != Verdict::NotAlpha
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Verdict {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "strong" => Ok(Verdict::Strong),
            "weak" => Ok(Verdict::Weak),
            "veryweak" => Ok(Verdict::VeryWeak),
            "notalpha" | "none" => Ok(Verdict::NotAlpha),
            _ => Err(Error::Parse(format!("unknown class {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Exact,
    Floored,
    Ceiled,
}

impl Variant {
    pub fn as_str(&self) -> &'static str {
        match self {
            Variant::Exact => "exact",
            Variant::Floored => "floored",
            Variant::Ceiled => "ceiled",
        }
    }

    pub fn round_mode(&self) -> Option<RoundMode> {
        match self {
            Variant::Exact => None,
            Variant::Floored => Some(RoundMode::Floor),
            Variant::Ceiled => Some(RoundMode::Ceiling),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "exact" => Ok(Variant::Exact),
            "floored" | "floor" => Ok(Variant::Floored),
            "ceiled" | "ceiling" | "ceil" => Ok(Variant::Ceiled),
            _ => Err(Error::Parse(format!("unknown variant {s:?}"))),
        }
    }
}

/// The verdict band for `max(α₁, α₂)`.
///
/// Strong: `2 ≤ max ≤ ω`. Weak: `2 ≤ ω < max ≤ τ`. Very weak:
/// `2 ≤ τ < max < n`. Since `ω < τ` whenever `n > 1`, at most one holds.
pub fn band<T>(max: &T, omega: &T, tau: &T, n: &T) -> Verdict
where
    T: PartialOrd + From<u32>,
{
    let two = T::from(2u32);
    if &two <= max && max <= omega {
        Verdict::Strong
    } else if &two <= omega && omega < max && max <= tau {
        Verdict::Weak
    } else if &two <= tau && tau < max && max < n {
        Verdict::VeryWeak
    } else {
        Verdict::NotAlpha
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub verdict: Verdict,
    pub ratio: ReducedRatio,
    pub omega: usize,
    pub tau: BigUint,
    pub variant: Variant,
    pub boundary_flag: bool,
}

fn classify_ratio(
    f: &Factorization,
    ratio: ReducedRatio,
    variant: Variant,
    boundary_flag: bool,
) -> Classification {
    let omega = f.omega();
    let tau = tau(f);
    let verdict = band(ratio.max_term(), &BigUint::from(omega), &tau, f.n());
    Classification {
        verdict,
        ratio,
        omega,
        tau,
        variant,
        boundary_flag,
    }
}

/// `σ(n)/n` in lowest terms.
pub fn alpha_ratio(f: &Factorization) -> ReducedRatio {
    reduce_ratio(&sigma_k_exact(f, 1), f.n()).expect("n is positive")
}

/// Exact classification for an integer order: the ratio is
/// `σ_under(n) / n^upper` reduced.
pub fn classify_exact(f: &Factorization, order: &Order) -> Result<Classification> {
    let (under, upper) = order.as_integers().ok_or_else(|| {
        Error::InvalidOrder(format!(
            "exact classification needs a nonnegative integer order, got {order}"
        ))
    })?;
    let num = sigma_k_exact(f, under);
    let den = f.n().pow(upper);
    let ratio = reduce_ratio(&num, &den)?;
    Ok(classify_ratio(f, ratio, Variant::Exact, false))
}

/// `|n^x| = n^{Re x}`, evaluated through the quaternion power.
fn power_modulus(f: &Factorization, x: Quaternion, prec: &Precision) -> Result<Quaternion> {
    let n = f
        .n()
        .to_f64()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::OutOfDomain(format!("{} does not fit a double", f.n())))?;
    real_pow_quat(n, x, prec)
}

/// Floored or ceiled classification: the ratio is built from the rounded
/// moduli of `σ_under(n)` and `n^upper`.
pub fn classify_rounded(
    f: &Factorization,
    order: &Order,
    mode: RoundMode,
    prec: &Precision,
) -> Result<Classification> {
    let sigma = sigma_general(f, order.under(), prec)?;
    let top = rounded_modulus(sigma, mode, prec)?;
    let bottom = rounded_modulus(power_modulus(f, order.upper(), prec)?, mode, prec)?;
    if bottom.value.bits() == 0 {
        return Err(Error::DegenerateDenominator);
    }
    let ratio = reduce_ratio(&top.value, &bottom.value)?;
    let variant = match mode {
        RoundMode::Floor => Variant::Floored,
        RoundMode::Ceiling => Variant::Ceiled,
    };
    Ok(classify_ratio(f, ratio, variant, top.boundary || bottom.boundary))
}

/// Dispatches on the variant.
pub fn classify(
    f: &Factorization,
    order: &Order,
    variant: Variant,
    prec: &Precision,
) -> Result<Classification> {
    match variant.round_mode() {
        None => classify_exact(f, order),
        Some(mode) => classify_rounded(f, order, mode, prec),
    }
}

/// The quaternion α with `σ_under(n) = α · n^upper`, i.e. `σ_under(n) · (n^upper)⁻¹`.
pub fn partial_alpha(f: &Factorization, order: &Order, prec: &Precision) -> Result<Quaternion> {
    let sigma = sigma_general(f, order.under(), prec)?;
    let power = power_modulus(f, order.upper(), prec)?;
    sigma
        .div_right(power)
        .ok_or_else(|| Error::OutOfDomain("n^upper underflowed to zero".into()))
}

/// Whether a reduced ratio is the integer one, as for `n = 1` at order (1,1).
pub fn is_unit_ratio(r: &ReducedRatio) -> bool {
    r.num().is_one() && r.den().is_one()
}
