//! Classical simulation of weak Schur sampling and the estimators built on it.
//!
//! The crate has three layers:
//!
//! * exact combinatorics: [`partitions`], [`schur`] and [`exact_dist`] give
//!   exact-rational probability tables for the Schur-Weyl distribution
//!   `SW^n(α)` and the Plancherel distribution, plus the distances and
//!   moments computed from them;
//! * Monte-Carlo: [`sampling`] draws Young diagrams from `SW^n(α)` by
//!   Robinson-Schensted insertion of i.i.d. letters (or by an exact rejection
//!   sampler when `n` is huge), and [`spectrum_estimation`] /
//!   [`power_trace`] run the median-of-batches spectrum estimator and the
//!   truncated `tr(ρ^q)` estimators on top of it;
//! * [`lower_bounds`]: the discrimination instances that show the estimators
//!   are near optimal, with the distance and fidelity quantities they rely on.
//!
//! All randomness flows through [`rng::RngStream`], so every experiment is
//! reproducible from a `(seed, stream_id)` pair regardless of thread count.

pub mod error;
pub mod exact_dist;
pub mod lower_bounds;
pub mod numeric;
pub mod partitions;
pub mod power_trace;
pub mod rng;
pub mod sampling;
pub mod schur;
pub mod spectrum;
pub mod spectrum_estimation;

pub use error::{Error, Result};
pub use exact_dist::ExactDistribution;
pub use partitions::Partition;
pub use rng::RngStream;
pub use spectrum::{ExactSpectrum, Spectrum};
