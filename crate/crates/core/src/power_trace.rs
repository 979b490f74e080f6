//! Truncated estimators of `tr(ρ^q) = Σ_j α_j^q` for `q > 1`, the plug-in
//! baseline, and the deterministic bounds their analysis rests on.
//!
//! Both truncated estimators run the median-of-batches spectrum estimator
//! at precision `ε'` and failure probability `δ' = 1/(3m)`, then sum the
//! `q`-th powers of the first `m = min(⌈1/ε'⌉, d)` estimated entries:
//!
//! * `q ≥ 2`: `ε' = ε/(q+3)`;
//! * `1 < q < 2`: `ε' = (ε/5)^{1/(q−1)}`.

use serde::Serialize;

use crate::error::{out_of_range, Result};
use crate::numeric::ceil_snap;
use crate::partitions::Partition;
use crate::rng::RngStream;
use crate::sampling::SwSampler;
use crate::spectrum::Spectrum;
use crate::spectrum_estimation::{spectrum_estimate, SpectrumEstimate};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Algorithm {
    /// `q ≥ 2`.
    TruncatedHighQ,
    /// `1 < q < 2`.
    TruncatedLowQ,
    /// `Σ_i (λ_i/n)^q` from a single diagram.
    PlugIn,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::TruncatedHighQ => "TruncatedHighQ",
            Algorithm::TruncatedLowQ => "TruncatedLowQ",
            Algorithm::PlugIn => "PlugIn",
        }
    }
}

/// Derived parameters of a truncated run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Truncation {
    pub algorithm: Algorithm,
    pub eps_prime: f64,
    pub m: usize,
    /// `⌈1/ε'⌉` before capping at `d`.
    pub m_uncapped: u64,
    pub delta_prime: f64,
    /// `ε'` came out ≥ 1 and was replaced by 0.5.
    pub eps_prime_clamped: bool,
}

const CLAMPED_EPS_PRIME: f64 = 0.5;

/// `(ε', m, δ')` for a `d`-dimensional state.
pub fn truncation(q: f64, epsilon: f64, d: usize) -> Result<Truncation> {
    if !(q > 1.0 && q.is_finite()) {
        return Err(out_of_range("q", format!("need q > 1, got {q}")));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(out_of_range("epsilon", format!("must lie in (0,1), got {epsilon}")));
    }
    if d == 0 {
        return Err(out_of_range("d", "need d ≥ 1"));
    }
    let (algorithm, raw) = if q >= 2.0 {
        (Algorithm::TruncatedHighQ, epsilon / (q + 3.0))
    } else {
        (Algorithm::TruncatedLowQ, (epsilon / 5.0).powf(1.0 / (q - 1.0)))
    };
    let eps_prime_clamped = raw >= 1.0;
    let eps_prime = if eps_prime_clamped { CLAMPED_EPS_PRIME } else { raw };
    let m_uncapped = ceil_snap(1.0 / eps_prime);
    let m = m_uncapped.min(d as f64) as usize;
    Ok(Truncation {
        algorithm,
        eps_prime,
        m,
        m_uncapped: m_uncapped as u64,
        delta_prime: 1.0 / (3.0 * m as f64),
        eps_prime_clamped,
    })
}

/// One estimator run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EstimateReport {
    pub q: f64,
    /// `None` for the plug-in baseline, as are `eps_prime`, `m_uncapped`,
    /// `delta_prime` and `c`.
    pub epsilon: Option<f64>,
    pub estimate: f64,
    pub eps_prime: Option<f64>,
    pub m: usize,
    pub m_uncapped: Option<u64>,
    pub delta_prime: Option<f64>,
    pub eps_prime_clamped: bool,
    pub c: Option<f64>,
    pub n_per_batch: u64,
    pub k_batches: u64,
    pub total_samples: u64,
    pub seed: u64,
    pub stream_id: u64,
    pub algorithm: Algorithm,
}

/// `Σ_j α_j^q` with `0^q = 0`.
pub fn true_power_trace(alpha: &Spectrum, q: f64) -> f64 {
    alpha
        .values()
        .iter()
        .filter(|&&a| a > 0.0)
        .map(|a| a.powf(q))
        .sum()
}

/// Truncated estimate of `tr(ρ^q)`, dispatching on `q`.
pub fn power_trace_estimate(
    alpha_true: &Spectrum,
    q: f64,
    epsilon: f64,
    c: f64,
    stream: RngStream,
) -> Result<EstimateReport> {
    power_trace_estimate_detailed(alpha_true, q, epsilon, c, stream).map(|(r, _)| r)
}

/// As [`power_trace_estimate`], also returning the inner spectrum estimate.
pub fn power_trace_estimate_detailed(
    alpha_true: &Spectrum,
    q: f64,
    epsilon: f64,
    c: f64,
    stream: RngStream,
) -> Result<(EstimateReport, SpectrumEstimate)> {
    let t = truncation(q, epsilon, alpha_true.dim())?;
    let spec = spectrum_estimate(alpha_true, t.eps_prime, t.delta_prime, c, stream)?;
    let estimate = spec.values[..t.m].iter().map(|a| a.powf(q)).sum();
    let report = EstimateReport {
        q,
        epsilon: Some(epsilon),
        estimate,
        eps_prime: Some(t.eps_prime),
        m: t.m,
        m_uncapped: Some(t.m_uncapped),
        delta_prime: Some(t.delta_prime),
        eps_prime_clamped: t.eps_prime_clamped,
        c: Some(c),
        n_per_batch: spec.n_per_batch,
        k_batches: spec.k_batches,
        total_samples: spec.total_samples,
        seed: stream.seed,
        stream_id: stream.stream_id,
        algorithm: t.algorithm,
    };
    Ok((report, spec))
}

/// `Σ_i (λ_i/n)^q` over all rows of `λ ⊢ n`.
pub fn plugin_baseline(lambda: &Partition, n: u32, q: f64) -> Result<f64> {
    if lambda.n() != n {
        return Err(crate::Error::MismatchedN {
            left: lambda.n(),
            right: n,
        });
    }
    Ok(lambda
        .rows()
        .iter()
        .map(|&r| (r as f64 / n as f64).powf(q))
        .sum())
}

/// Plug-in estimate from a single `λ ~ SW^n(α)` using all `n` copies.
pub fn plugin_estimate(alpha_true: &Spectrum, q: f64, n: u32, stream: RngStream) -> Result<EstimateReport> {
    if !(q > 1.0 && q.is_finite()) {
        return Err(out_of_range("q", format!("need q > 1, got {q}")));
    }
    let lambda = SwSampler::new(alpha_true, n)?.sample(&mut stream.rng());
    Ok(EstimateReport {
        q,
        epsilon: None,
        estimate: plugin_baseline(&lambda, n, q)?,
        eps_prime: None,
        m: alpha_true.dim(),
        m_uncapped: None,
        delta_prime: None,
        eps_prime_clamped: false,
        c: None,
        n_per_batch: n as u64,
        k_batches: 1,
        total_samples: n as u64,
        seed: stream.seed,
        stream_id: stream.stream_id,
        algorithm: Algorithm::PlugIn,
    })
}

/// Error bound for `q ≥ 2` when every used entry is within `ε'`:
/// `qε' + mε'² + (m^{1−q} − d^{1−q})/(q−1)`.
pub fn error_budget_high_q(q: f64, eps_prime: f64, m: usize, d: usize) -> f64 {
    let m = m as f64;
    let d = d as f64;
    q * eps_prime + m * eps_prime * eps_prime + (m.powf(1.0 - q) - d.powf(1.0 - q)) / (q - 1.0)
}

/// Error bound for `1 < q < 2` under the same event:
/// `ε' m^{2−q} (mε' + 1)^{q−1} + ε'^{q−1} + Σ_{j>m} α_j^q`.
pub fn error_budget_low_q(q: f64, eps_prime: f64, m: usize, alpha: &Spectrum) -> f64 {
    let mf = m as f64;
    let tail: f64 = alpha.values().iter().skip(m).filter(|&&a| a > 0.0).map(|a| a.powf(q)).sum();
    eps_prime * mf.powf(2.0 - q) * (mf * eps_prime + 1.0).powf(q - 1.0) + eps_prime.powf(q - 1.0) + tail
}

/// `Σ_{i>m} x_i^q` (1-based `i`).
pub fn tail_power_sum(x: &[f64], m: usize, q: f64) -> f64 {
    x.iter().skip(m).filter(|&&v| v > 0.0).map(|v| v.powf(q)).sum()
}

/// `1/m^{q−1}`, the bound on `Σ_{i>m} x_i^q` for a sorted probability vector.
pub fn tail_bound(m: usize, q: f64) -> f64 {
    (m as f64).powf(1.0 - q)
}

/// Pushes tail mass upward without increasing any entry past `x_m`: the
/// first entry below `x_m` is raised by taking mass from the last positive
/// entry, until the tail reads `x_m, …, x_m, y, 0, …`. For `q > 1` each
/// step does not decrease `Σ_{i>m} x_i^q`, so the result is a worst case
/// for the tail sum. `x` must be non-increasing and `1 ≤ m ≤ x.len()`.
pub fn rearrange_tail(x: &[f64], m: usize) -> Vec<f64> {
    assert!(m >= 1 && m <= x.len(), "need 1 ≤ m ≤ N");
    let mut y = x.to_vec();
    let cap = y[m - 1];
    let mut j = m;
    loop {
        while j < y.len() && y[j] >= cap {
            j += 1;
        }
        let Some(k) = (j + 1..y.len()).rev().find(|&k| y[k] > 0.0) else {
            return y;
        };
        let room = cap - y[j];
        if y[k] >= room {
            y[k] -= room;
            y[j] = cap;
        } else {
            y[j] += y[k];
            y[k] = 0.0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parameters_high_q() {
        let t = truncation(3.0, 0.12, 1_000_000).unwrap();
        assert_eq!(t.algorithm, Algorithm::TruncatedHighQ);
        assert!((t.eps_prime - 0.02).abs() < 1e-15);
        assert_eq!(t.m, 50);
        assert!((t.delta_prime - 1.0 / 150.0).abs() < 1e-15);
        assert_eq!(truncation(2.0, 0.1, 10).unwrap().algorithm, Algorithm::TruncatedHighQ);
        assert_eq!(truncation(3.0, 0.12, 7).unwrap().m, 7);
    }

    #[test]
    fn parameters_low_q() {
        let t = truncation(1.5, 0.2, 1_000_000).unwrap();
        assert_eq!(t.algorithm, Algorithm::TruncatedLowQ);
        assert!((t.eps_prime - 0.0016).abs() < 1e-15);
        assert_eq!(t.m, 625);
        assert!((t.delta_prime - 1.0 / 1875.0).abs() < 1e-15);
        assert!(!t.eps_prime_clamped);
    }

    #[test]
    fn parameter_errors() {
        assert!(truncation(1.0, 0.1, 3).is_err());
        assert!(truncation(0.5, 0.1, 3).is_err());
        assert!(truncation(2.0, 1.0, 3).is_err());
        assert!(truncation(2.0, 0.0, 3).is_err());
    }

    #[test]
    fn ground_truth() {
        let u = Spectrum::uniform(4).unwrap();
        assert!((true_power_trace(&u, 2.5) - 0.125).abs() < 1e-15);
        let pure = Spectrum::new(vec![1.0, 0.0]).unwrap();
        assert_eq!(true_power_trace(&pure, 1.7), 1.0);
        let a = Spectrum::new(vec![0.7, 0.2, 0.1]).unwrap();
        let direct = 0.7f64.powf(1.5) + 0.2f64.powf(1.5) + 0.1f64.powf(1.5);
        assert_eq!(true_power_trace(&a, 1.5), direct);
        assert!((direct - 0.706_727_514_275_528_3).abs() < 1e-15);
    }

    #[test]
    fn plugin_values() {
        let p = |rows: &[u32]| Partition::new(rows.to_vec()).unwrap();
        assert_eq!(plugin_baseline(&p(&[7]), 7, 1.3).unwrap(), 1.0);
        assert_eq!(plugin_baseline(&p(&[3, 1]), 4, 2.0).unwrap(), 0.625);
        assert_eq!(plugin_baseline(&p(&[1, 1]), 2, 2.0).unwrap(), 0.5);
        assert!(plugin_baseline(&p(&[1, 1]), 3, 2.0).is_err());
    }

    #[test]
    fn pure_state_estimates_exactly_one() {
        let pure = Spectrum::new(vec![1.0, 0.0, 0.0, 0.0]).unwrap();
        for (q, eps) in [(3.0, 0.3), (1.5, 0.5), (2.0, 0.4)] {
            let r = power_trace_estimate(&pure, q, eps, 2.0, RngStream::new(2, 0)).unwrap();
            assert_eq!(r.estimate, 1.0);
        }
    }

    #[test]
    fn rearrangement_fills_to_cap() {
        let x = [0.4, 0.2, 0.15, 0.15, 0.1];
        let y = rearrange_tail(&x, 2);
        assert_eq!(y[..2], [0.4, 0.2]);
        assert!((y[2] - 0.2).abs() < 1e-15 && (y[3] - 0.2).abs() < 1e-15);
        assert!(y[4].abs() < 1e-15);
        assert!(tail_power_sum(&y, 2, 1.5) >= tail_power_sum(&x, 2, 1.5));
        assert!(tail_power_sum(&y, 2, 1.5) <= tail_bound(2, 1.5));
    }
}
