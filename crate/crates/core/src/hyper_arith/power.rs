use num_bigint::BigUint;
use num_traits::{FromPrimitive, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::quaternion::Quaternion;
use crate::error::{Error, Result};
use crate::exact_arith::{divisors_list, Factorization};

/// Floating tolerance policy.
///
/// `eps_rel` is the relative agreement expected between floating and exact
/// evaluations; `boundary_eps` is the (relative) distance from an integer
/// below which a modulus is treated as sitting on that integer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Precision {
    pub eps_rel: f64,
    pub boundary_eps: f64,
}

impl Default for Precision {
    fn default() -> Self {
        Self {
            eps_rel: 1e-12,
            boundary_eps: 1e-9,
        }
    }
}

impl Precision {
    pub fn new(eps_rel: f64, boundary_eps: f64) -> Result<Self> {
        if !(0.0 < eps_rel && eps_rel < boundary_eps && boundary_eps < 1.0) {
            return Err(Error::InvalidPrecision(format!(
                "need 0 < eps_rel < boundary_eps < 1, got {eps_rel} and {boundary_eps}"
            )));
        }
        Ok(Self {
            eps_rel,
            boundary_eps,
        })
    }
}

/// `base^x := exp(x · ln base)`.
///
/// `ln base` is real and commutes with every quaternion, so the definition
/// has no left/right ambiguity. Real exponents go through `powf`, which keeps
/// integer powers of small integers exact.
pub fn real_pow_quat(base: f64, x: Quaternion, _prec: &Precision) -> Result<Quaternion> {
    if !(base > 0.0) || !base.is_finite() {
        return Err(Error::NonPositiveBase(base.to_string()));
    }
    if !x.is_finite() {
        return Err(Error::OutOfDomain(format!("exponent {x:?} is not finite")));
    }
    let out = if x.is_real() {
        Quaternion::real(base.powf(x.a))
    } else {
        x.scale(base.ln()).exp()
    };
    if !out.is_finite() {
        return Err(Error::OutOfDomain(format!("{base}^({x}) overflows a double")));
    }
    Ok(out)
}

/// `σ_x(n) = Σ_{d|n} d^x` for an arbitrary quaternion exponent.
pub fn sigma_general(f: &Factorization, x: Quaternion, prec: &Precision) -> Result<Quaternion> {
    let mut acc = Quaternion::ZERO;
    for d in divisors_list(f)? {
        let d = d
            .to_f64()
            .filter(|v| v.is_finite())
            .ok_or_else(|| Error::OutOfDomain(format!("divisor {d} does not fit a double")))?;
        acc += real_pow_quat(d, x, prec)?;
    }
    if !acc.is_finite() {
        return Err(Error::OutOfDomain(format!("σ_({x}) overflows a double")));
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RoundMode {
    Floor,
    Ceiling,
}

/// `⌊|v|⌋` or `⌈|v|⌉`, with a flag when the modulus sat within
/// `boundary_eps` of an integer and was snapped onto it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundedModulus {
    pub value: BigUint,
    pub boundary: bool,
}

pub fn rounded_modulus(v: Quaternion, mode: RoundMode, prec: &Precision) -> Result<RoundedModulus> {
    if !v.is_finite() {
        return Err(Error::OutOfDomain(format!("{v:?} is not finite")));
    }
    let m = v.norm();
    let nearest = m.round();
    let tol = prec.boundary_eps * m.max(1.0);
    let (value, boundary) = if m == nearest {
        (nearest, false)
    } else if (m - nearest).abs() <= tol {
        (nearest, true)
    } else {
        match mode {
            RoundMode::Floor => (m.floor(), false),
            RoundMode::Ceiling => (m.ceil(), false),
        }
    };
    let value = BigUint::from_f64(value)
        .ok_or_else(|| Error::OutOfDomain(format!("modulus {m} is not representable")))?;
    Ok(RoundedModulus { value, boundary })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::{factorize_u64, sigma_k_exact};

    fn p() -> Precision {
        Precision::default()
    }

    fn sigma(n: u64, x: Quaternion) -> Quaternion {
        sigma_general(&factorize_u64(n).unwrap(), x, &p()).unwrap()
    }

    #[test]
    fn precision_validation() {
        assert!(Precision::new(1e-12, 1e-9).is_ok());
        assert!(Precision::new(1e-9, 1e-12).is_err());
        assert!(Precision::new(0.0, 1e-9).is_err());
        assert!(Precision::new(1e-3, 1.0).is_err());
    }

    #[test]
    fn power_examples() {
        assert_eq!(real_pow_quat(4.0, Quaternion::real(0.5), &p()).unwrap(), Quaternion::real(2.0));
        let two_i = real_pow_quat(2.0, Quaternion::I, &p()).unwrap();
        assert!((two_i.a - 0.7692).abs() < 1e-4 && (two_i.b - 0.6390).abs() < 1e-4);
        for d in [1.0, 2.0, 7.5, 1e6] {
            assert_eq!(real_pow_quat(d, Quaternion::ZERO, &p()).unwrap(), Quaternion::ONE);
        }
        assert!(matches!(
            real_pow_quat(0.0, Quaternion::ONE, &p()),
            Err(Error::NonPositiveBase(_))
        ));
        assert!(real_pow_quat(-2.0, Quaternion::ONE, &p()).is_err());
    }

    #[test]
    fn modulus_of_power_is_real_power() {
        let x = Quaternion::new(0.7, -1.3, 2.2, 0.4);
        for d in [2.0f64, 3.0, 10.0, 97.0] {
            let v = real_pow_quat(d, x, &p()).unwrap();
            assert!((v.norm() - d.powf(0.7)).abs() <= 1e-12 * d.powf(0.7));
        }
    }

    #[test]
    fn sigma_examples() {
        let s = sigma(6, Quaternion::real(0.5));
        assert!((s.a - 6.5959).abs() < 1e-3 && s.is_real());
        let s = sigma(30, Quaternion::I);
        assert!((s.a + 0.5759).abs() < 1e-3 && (s.b - 4.412).abs() < 1e-3);
        assert_eq!(sigma(1, Quaternion::new(1.0, 2.0, 3.0, 4.0)), Quaternion::ONE);
    }

    #[test]
    fn sign_convention_on_prime_29() {
        // 1 + 29^i with 29^i = cos(ln 29) + i sin(ln 29); the imaginary part is negative
        let s = sigma(29, Quaternion::I);
        assert!((s.a - 0.02536).abs() < 1e-4);
        assert!((s.b + 0.22379).abs() < 1e-4);
        assert_eq!(rounded_modulus(s, RoundMode::Floor, &p()).unwrap().value, BigUint::from(0u32));
    }

    #[test]
    fn integer_exponents_match_exact() {
        for n in 1..=60u64 {
            let f = factorize_u64(n).unwrap();
            for k in 0..3u32 {
                let exact = sigma_k_exact(&f, k).to_f64().unwrap();
                let s = sigma_general(&f, Quaternion::real(k as f64), &p()).unwrap();
                assert_eq!(s, Quaternion::real(exact), "n = {n}, k = {k}");
            }
        }
    }

    #[test]
    fn rounding_examples() {
        let floor = |v| rounded_modulus(v, RoundMode::Floor, &p()).unwrap();
        let ceil = |v| rounded_modulus(v, RoundMode::Ceiling, &p()).unwrap();
        assert_eq!(floor(sigma(24, Quaternion::I)).value, BigUint::from(4u32));
        assert_eq!(floor(sigma(8, Quaternion::real(0.5))).value, BigUint::from(7u32));
        assert_eq!(ceil(sigma(24, Quaternion::real(0.5))).value, BigUint::from(20u32));

        let exact = ceil(Quaternion::real(12.0));
        assert_eq!((exact.value, exact.boundary), (BigUint::from(12u32), false));

        let snapped = floor(Quaternion::real(12.0 - 1e-11));
        assert_eq!((snapped.value, snapped.boundary), (BigUint::from(12u32), true));
        let snapped = ceil(Quaternion::real(12.0 + 1e-11));
        assert_eq!((snapped.value, snapped.boundary), (BigUint::from(12u32), true));

        let off = floor(Quaternion::real(12.0 - 1e-6));
        assert_eq!((off.value, off.boundary), (BigUint::from(11u32), false));
    }
}
