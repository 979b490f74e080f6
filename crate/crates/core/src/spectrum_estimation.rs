//! Entry-wise spectrum estimation by the median of independent weak Schur
//! sampling batches.
//!
//! Each batch draws `λ ~ SW^n(α)` and reads off `λ_j/n`; the estimate of
//! `α_j` is the median over `k` batches. With `E[(λ_j/n − α_j)²] ≤ c/n`,
//! Markov's inequality puts a single batch within `2√(c/n)` of `α_j` with
//! probability at least `3/4`, and a Hoeffding bound on the number of bad
//! batches gives `n = ⌈4c/ε²⌉`, `k = ⌈72 ln(2/δ)⌉` for
//! `Pr[|α̂_j − α_j| ≤ ε] ≥ 1 − δ`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{out_of_range, Error, Result};
use crate::numeric::ceil_snap;
use crate::partitions::Partition;
use crate::rng::RngStream;
use crate::sampling::SwSampler;
use crate::spectrum::Spectrum;

/// Default value of the second-moment constant `c`.
pub const DEFAULT_C: f64 = 2.0;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumEstimate {
    /// Raw medians `α̂_1..α̂_d`; neither sorted nor projected to the simplex.
    pub values: Vec<f64>,
    pub n_per_batch: u64,
    pub k_batches: u64,
    pub epsilon: f64,
    pub delta: f64,
    pub c: f64,
    pub seed: u64,
    pub stream_id: u64,
    pub total_samples: u64,
}

fn check_unit_interval(name: &'static str, v: f64) -> Result<()> {
    if !(v > 0.0 && v < 1.0) {
        return Err(out_of_range(name, format!("must lie in (0,1), got {v}")));
    }
    Ok(())
}

/// Copies per batch, `⌈4c/ε²⌉`.
pub fn batch_size(epsilon: f64, c: f64) -> Result<u32> {
    check_unit_interval("epsilon", epsilon)?;
    if !(c > 0.0 && c.is_finite()) {
        return Err(out_of_range("c", format!("must be positive, got {c}")));
    }
    let n = ceil_snap(4.0 * c / (epsilon * epsilon));
    if n > u32::MAX as f64 {
        return Err(Error::SizeLimit {
            what: "copies per batch",
            value: n.min(u64::MAX as f64) as u64,
            limit: u32::MAX as u64,
        });
    }
    Ok(n as u32)
}

/// Number of batches, `⌈72 ln(2/δ)⌉` rounded up to an odd integer.
pub fn batch_count(delta: f64) -> Result<u64> {
    check_unit_interval("delta", delta)?;
    let k = ceil_snap(72.0 * (2.0 / delta).ln()) as u64;
    Ok(if k.is_multiple_of(2) { k + 1 } else { k })
}

/// Middle order statistic of an odd-length sample.
pub fn median(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::Empty("median input"));
    }
    if values.len().is_multiple_of(2) {
        return Err(out_of_range(
            "values",
            format!("median needs an odd number of values, got {}", values.len()),
        ));
    }
    let mut v = values.to_vec();
    let mid = v.len() / 2;
    let (_, m, _) = v.select_nth_unstable_by(mid, f64::total_cmp);
    Ok(*m)
}

/// `k` independent draws from `SW^n(α)`; batch `l` uses `stream.derive(l)`,
/// so the result does not depend on how the work is scheduled.
pub fn draw_batches(alpha: &Spectrum, n: u32, k: u64, stream: RngStream) -> Result<Vec<Partition>> {
    let sampler = SwSampler::new(alpha, n)?;
    Ok((0..k)
        .into_par_iter()
        .map(|l| sampler.sample(&mut stream.derive(l).rng()))
        .collect())
}

/// Entry-wise medians of `λ_j/n` over the batches, for `j = 1..=d`.
pub fn median_of_batches(batches: &[Partition], n: u32, d: usize) -> Result<Vec<f64>> {
    let mut column = vec![0.0; batches.len()];
    (1..=d)
        .map(|j| {
            for (slot, lam) in column.iter_mut().zip(batches) {
                *slot = lam.row(j) as f64 / n as f64;
            }
            median(&column)
        })
        .collect()
}

/// Median-of-batches estimate of every eigenvalue of `α_true`.
pub fn spectrum_estimate(
    alpha_true: &Spectrum,
    epsilon: f64,
    delta: f64,
    c: f64,
    stream: RngStream,
) -> Result<SpectrumEstimate> {
    let n = batch_size(epsilon, c)?;
    let k = batch_count(delta)?;
    let batches = draw_batches(alpha_true, n, k, stream)?;
    let values = median_of_batches(&batches, n, alpha_true.dim())?;
    Ok(SpectrumEstimate {
        values,
        n_per_batch: n as u64,
        k_batches: k,
        epsilon,
        delta,
        c,
        seed: stream.seed,
        stream_id: stream.stream_id,
        total_samples: n as u64 * k,
    })
}
