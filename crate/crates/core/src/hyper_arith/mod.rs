//! Quaternion algebra and `σ_x(n)` for real, complex and quaternion `x`.

mod literal;
mod power;
mod quaternion;

pub use power::{
    real_pow_quat, rounded_modulus, sigma_general, Precision, RoundMode, RoundedModulus,
};
pub use quaternion::{quat_mul, Quaternion};
