//! Generalized divisor sums and @-numbers.
//!
//! An integer `n` is an @-number of order `(under, upper)` when
//! `σ_under(n) = (α₁/α₂)·n^upper` for a coprime pair `(α₁, α₂)`. Where
//! `max(α₁, α₂)` lands relative to `ω(n)`, `τ(n)` and `n` decides whether `n`
//! is strong, weak or very weak. The floored and ceiled variants apply the
//! same test to `⌊|·|⌋` / `⌈|·|⌉` of both sides, which gives meaning to
//! complex and quaternion orders.
//!
//! Layout:
//! - [`exact_arith`]: factorization, exact `σ_k`, divisor statistics, sieves.
//! - [`hyper_arith`]: quaternion algebra and `σ_x` for non-integer `x`.
//! - [`classifier`]: verdicts, partial α and the abundancy bound check.
//! - [`search`]: enumeration, the seed-pruned odd search, theorem drivers
//!   and the table auditor.
//! - [`cli`]: the `alphanum` command line and report encoders.

pub mod classifier;
pub mod cli;
pub mod error;
pub mod exact_arith;
pub mod hyper_arith;
pub mod search;

pub use error::{Error, Result};
