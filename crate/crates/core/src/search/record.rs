use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::classifier::{Classification, Exactness, Order, Variant, Verdict};
use crate::error::{Error, Result};
use crate::exact_arith::{reduce_ratio, Factorization, ReducedRatio};
use crate::hyper_arith::Quaternion;

/// Which integers an enumeration visits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
    All,
}

impl Parity {
    pub fn admits(&self, n: u64) -> bool {
        match self {
            Parity::Odd => n % 2 == 1,
            Parity::Even => n.is_multiple_of(2),
            Parity::All => true,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Parity::Odd => "odd",
            Parity::Even => "even",
            Parity::All => "all",
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Parity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "odd" => Ok(Parity::Odd),
            "even" => Ok(Parity::Even),
            "all" => Ok(Parity::All),
            _ => Err(Error::Parse(format!("unknown parity {s:?}"))),
        }
    }
}

/// One classified integer.
///
/// For the exact variant `sigma` is `σ_under(n)`; for the rounded variants
/// it is the rounded modulus that formed the ratio's numerator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "RecordWire", try_from = "RecordWire")]
pub struct AlphaRecord {
    pub n: BigUint,
    pub factorization: Factorization,
    pub sigma: BigUint,
    pub classification: Classification,
    pub order: Order,
}

impl AlphaRecord {
    pub fn ratio(&self) -> &ReducedRatio {
        &self.classification.ratio
    }

    pub fn verdict(&self) -> Verdict {
        self.classification.verdict
    }

    pub fn variant(&self) -> Variant {
        self.classification.variant
    }
}

/// Flat JSON shape: every integer that may exceed 53 bits is a decimal string.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct RecordWire {
    n: String,
    factorization: String,
    sigma: String,
    alpha1: String,
    alpha2: String,
    omega: usize,
    tau: String,
    verdict: Verdict,
    variant: Variant,
    under: String,
    upper: String,
    exactness: Exactness,
    boundary_flag: bool,
}

impl From<AlphaRecord> for RecordWire {
    fn from(r: AlphaRecord) -> Self {
        let c = r.classification;
        Self {
            n: r.n.to_string(),
            factorization: r.factorization.to_string(),
            sigma: r.sigma.to_string(),
            alpha1: c.ratio.num().to_string(),
            alpha2: c.ratio.den().to_string(),
            omega: c.omega,
            tau: c.tau.to_string(),
            verdict: c.verdict,
            variant: c.variant,
            under: r.order.under().to_string(),
            upper: r.order.upper().to_string(),
            exactness: r.order.exactness(),
            boundary_flag: c.boundary_flag,
        }
    }
}

fn big(field: &str, s: &str) -> Result<BigUint> {
    s.parse()
        .map_err(|_| Error::Parse(format!("{field}: {s:?} is not a decimal integer")))
}

impl TryFrom<RecordWire> for AlphaRecord {
    type Error = Error;

    fn try_from(w: RecordWire) -> Result<Self> {
        let factorization: Factorization = w.factorization.parse()?;
        let n = big("n", &w.n)?;
        if factorization.n() != &n {
            return Err(Error::Parse(format!(
                "factorization {} does not multiply to {n}",
                w.factorization
            )));
        }
        let ratio = reduce_ratio(&big("alpha1", &w.alpha1)?, &big("alpha2", &w.alpha2)?)?;
        let under: Quaternion = w.under.parse()?;
        let upper: Quaternion = w.upper.parse()?;
        let mut order = Order::general(under, upper)?;
        if w.exactness == Exactness::Floating {
            order = order.floating();
        }
        Ok(Self {
            n,
            factorization,
            sigma: big("sigma", &w.sigma)?,
            classification: Classification {
                verdict: w.verdict,
                ratio,
                omega: w.omega,
                tau: big("tau", &w.tau)?,
                variant: w.variant,
                boundary_flag: w.boundary_flag,
            },
            order,
        })
    }
}
