//! Verdicts for @-numbers, partial α and the abundancy bound.

mod bounds;
mod classify;

pub use bounds::{
    ratio_bound_check, sandor_quotient, totient_bound, RatioBound, SandorProfile, EXP_GAMMA,
    TOTIENT_CORRECTION,
};
pub use classify::{
    alpha_ratio, band, classify, classify_exact, classify_rounded, is_unit_ratio, partial_alpha,
    Classification, Exactness, Order, Variant, Verdict,
};
