//! Minkowski-enlargement approximation of mean densities of
//! lower-dimensional random closed sets.
//!
//! A random closed set `Θ_n` of Hausdorff dimension `n` in ℝ^d has mean
//! density `λ(x)` when `E[H^n(Θ_n ∩ ·)]` is absolutely continuous. The
//! estimators here approximate it through the hit probability of the
//! enlarged set,
//!
//! ```text
//! δ^{⊕r}(x) = P(x ∈ Θ_n⊕r) / (b_{d−n} r^{d−n}),
//! ```
//!
//! whose integrals over a region converge to `E[H^n(Θ_n ∩ A)]` as `r ↓ 0`.
//!
//! * [`geometry`] exact primitive sets, clipping and enlargement quadrature
//! * [`processes`] seeded samplers for the supported random-set families
//! * [`estimators`] Monte Carlo estimators, sweeps and property checks
//! * [`mincontent`] deterministic Minkowski-content checks
//! * [`reporting`] CSV/JSON output

// `!(x > 0.0)` is how NaN is rejected throughout.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod geometry;
pub mod mincontent;
pub mod estimators;
pub mod processes;
pub mod reporting;

pub use error::{Error, Result};
