//! Hard instances for estimating `tr(ρ^q)` and the quantities that bound
//! how well they can be told apart.
//!
//! Both instances consist of simultaneously diagonal states, so trace
//! distance and fidelity reduce to classical formulas on the diagonals.

use std::collections::HashMap;

use num_rational::BigRational;
use rand::Rng;
use serde::Serialize;

use crate::error::{out_of_range, Error, Result};
use crate::exact_dist::{l1_distance, sw_uniform_exact, ExactCap, ExactDistribution};
use crate::numeric::{floor_snap, rational_to_f64};
use crate::partitions::Partition;
use crate::power_trace::{power_trace_estimate, true_power_trace};
use crate::rng::RngStream;
use crate::sampling::SwSampler;
use crate::spectrum::Spectrum;

/// Relative slack when checking the floor-based separations in binary64.
const SEPARATION_SLACK: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum InstanceKind {
    /// `(2/3 ± ε)|0⟩⟨0| + (1/3 ∓ ε)|1⟩⟨1|`.
    QubitPair,
    /// `D_{r,d}` versus `D_{d,d}`.
    MixedPair,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Analytic {
    /// `tr(ρ_1^q) − tr(ρ_2^q)`.
    pub trace_gap: f64,
    /// `1 − F(ρ_1, ρ_2)` with `F = Σ_j √(α_j β_j)`.
    pub infidelity: f64,
    /// Single-copy `‖ρ_1 − ρ_2‖₁`.
    pub l1: f64,
    /// Rank of the first state and the dimension (mixed pair only).
    pub r: Option<usize>,
    pub d: Option<usize>,
}

/// A pair of states to discriminate, with its analytic quantities.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HardInstance {
    pub kind: InstanceKind,
    /// Diagonals in the common eigenbasis (not re-sorted).
    #[serde(skip)]
    pub diagonals: [Vec<f64>; 2],
    /// Sorted spectra, as consumed by the samplers.
    #[serde(skip)]
    pub spectra: [Spectrum; 2],
    pub q: f64,
    pub epsilon: f64,
    pub analytic: Analytic,
}

/// `Σ_j √(α_j β_j)` for states diagonal in one basis.
pub fn fidelity_commuting(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "diagonals must have equal length");
    a.iter().zip(b).map(|(x, y)| (x * y).sqrt()).sum()
}

/// `Σ_j |α_j − β_j|` for states diagonal in one basis.
pub fn l1_commuting(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "diagonals must have equal length");
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

/// Closed form of the qubit-pair infidelity, `1 − √(4/9−ε²) − √(1/9−ε²)`.
pub fn qubit_infidelity_closed_form(epsilon: f64) -> f64 {
    1.0 - ((4.0 / 9.0 - epsilon * epsilon).sqrt() + (1.0 / 9.0 - epsilon * epsilon).sqrt())
}

/// Small-`ε` slope of the qubit trace gap, `2q((2/3)^{q−1} − (1/3)^{q−1})`.
pub fn qubit_gap_slope(q: f64) -> f64 {
    2.0 * q * ((2.0f64 / 3.0).powf(q - 1.0) - (1.0f64 / 3.0).powf(q - 1.0))
}

/// The qubit pair with eigenvalues `2/3 ± ε`, `1/3 ∓ ε`.
pub fn hard_pair_qubit(q: f64, epsilon: f64) -> Result<HardInstance> {
    if !(q > 1.0 && q.is_finite()) {
        return Err(out_of_range("q", format!("need q > 1, got {q}")));
    }
    if !(0.0..1.0 / 3.0).contains(&epsilon) {
        return Err(out_of_range(
            "epsilon",
            format!("need 0 ≤ ε < 1/3 to stay on the simplex, got {epsilon}"),
        ));
    }
    let plus = vec![2.0 / 3.0 + epsilon, 1.0 / 3.0 - epsilon];
    let minus = vec![2.0 / 3.0 - epsilon, 1.0 / 3.0 + epsilon];
    let spectra = [
        Spectrum::from_unsorted(plus.clone())?,
        Spectrum::from_unsorted(minus.clone())?,
    ];
    let trace_gap = (2.0 / 3.0 + epsilon).powf(q) - (2.0 / 3.0 - epsilon).powf(q)
        + (1.0 / 3.0 - epsilon).powf(q)
        - (1.0 / 3.0 + epsilon).powf(q);
    let analytic = Analytic {
        trace_gap,
        infidelity: qubit_infidelity_closed_form(epsilon),
        l1: l1_commuting(&plus, &minus),
        r: None,
        d: None,
    };
    Ok(HardInstance {
        kind: InstanceKind::QubitPair,
        diagonals: [plus, minus],
        spectra,
        q,
        epsilon,
        analytic,
    })
}

/// Rank and dimension of the maximally mixed pair:
/// `r = ⌊1/(2ε)^{1/(q−1)}⌋`, `d = ⌊1/ε^{1/(q−1)}⌋ + 1`.
pub fn mixed_pair_dimensions(q: f64, epsilon: f64) -> Result<(usize, usize)> {
    if !(q > 1.0 && q < 2.0) {
        return Err(out_of_range("q", format!("need 1 < q < 2, got {q}")));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(out_of_range("epsilon", format!("must lie in (0,1), got {epsilon}")));
    }
    let exponent = 1.0 / (q - 1.0);
    let r = floor_snap((2.0 * epsilon).powf(-exponent));
    let d = floor_snap(epsilon.powf(-exponent)) + 1.0;
    if r < 1.0 {
        return Err(out_of_range(
            "epsilon",
            format!("rank ⌊1/(2ε)^(1/(q−1))⌋ = {r} < 1; ε must be at most 1/2"),
        ));
    }
    if d > u32::MAX as f64 {
        return Err(Error::SizeLimit {
            what: "dimension d",
            value: d.min(u64::MAX as f64) as u64,
            limit: u32::MAX as u64,
        });
    }
    Ok((r as usize, d as usize))
}

/// `D_{r,d}` versus `D_{d,d}`; `tr(D_{r,d}^q) = r^{1−q} ≥ 2ε` and
/// `tr(D_{d,d}^q) = d^{1−q} ≤ ε`.
pub fn hard_pair_maximally_mixed(q: f64, epsilon: f64) -> Result<HardInstance> {
    let (r, d) = mixed_pair_dimensions(q, epsilon)?;
    let high = (r as f64).powf(1.0 - q);
    let low = (d as f64).powf(1.0 - q);
    if high < 2.0 * epsilon * (1.0 - SEPARATION_SLACK) || low > epsilon * (1.0 + SEPARATION_SLACK) {
        return Err(out_of_range(
            "epsilon",
            format!("separation failed: r^(1−q) = {high}, d^(1−q) = {low}, ε = {epsilon}"),
        ));
    }
    mixed_pair_with_dimensions(q, epsilon, r, d)
}

/// `D_{r,d}` versus `D_{d,d}` for explicit `r < d`; `epsilon` is recorded
/// only.
pub fn mixed_pair_with_dimensions(q: f64, epsilon: f64, r: usize, d: usize) -> Result<HardInstance> {
    if r == 0 || r >= d {
        return Err(out_of_range("(r, d)", format!("need 1 ≤ r < d, got ({r}, {d})")));
    }
    let first = Spectrum::padded_uniform(r, d)?;
    let second = Spectrum::uniform(d)?;
    let analytic = Analytic {
        trace_gap: (r as f64).powf(1.0 - q) - (d as f64).powf(1.0 - q),
        infidelity: 1.0 - (r as f64 / d as f64).sqrt(),
        l1: 2.0 * (1.0 - r as f64 / d as f64),
        r: Some(r),
        d: Some(d),
    };
    Ok(HardInstance {
        kind: InstanceKind::MixedPair,
        diagonals: [first.values().to_vec(), second.values().to_vec()],
        spectra: [first, second],
        q,
        epsilon,
        analytic,
    })
}

/// Optimal success probability for two equiprobable states,
/// `1/2 + ‖ρ_0 − ρ_1‖₁/4`.
pub fn helstrom_bound(l1: f64) -> Result<f64> {
    if !(0.0..=2.0).contains(&l1) {
        return Err(out_of_range("l1", format!("must lie in [0,2], got {l1}")));
    }
    Ok(0.5 + l1 / 4.0)
}

/// `‖SW_r^n − SW_d^n‖₁` exactly, for `n ≤ r ≤ d`. This equals the trace
/// distance between the `n`-copy twirled states of the mixed pair.
pub fn mixed_pair_l1(n: u32, r: u64, d: u64, cap: ExactCap) -> Result<BigRational> {
    if n == 0 || (n as u64) > r || r > d {
        return Err(out_of_range(
            "(n, r, d)",
            format!("need 1 ≤ n ≤ r ≤ d, got ({n}, {r}, {d})"),
        ));
    }
    let first = sw_uniform_exact(r, n, cap)?;
    let second = sw_uniform_exact(d, n, cap)?;
    l1_distance(&first, &second)
}

/// `√2·n/r + √2·n/d`.
pub fn mixed_pair_l1_bound(n: u32, r: u64, d: u64) -> f64 {
    std::f64::consts::SQRT_2 * n as f64 * (1.0 / r as f64 + 1.0 / d as f64)
}

/// Which state was prepared.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Case {
    First,
    Second,
}

/// Sample access to the hidden state of one discrimination round.
pub struct SampleSource<'a> {
    spectrum: &'a Spectrum,
}

impl SampleSource<'_> {
    pub fn dim(&self) -> usize {
        self.spectrum.dim()
    }

    /// Weak Schur sampling on `n` fresh copies.
    pub fn weak_schur_sample(&self, n: u32, stream: RngStream) -> Result<Partition> {
        Ok(SwSampler::new(self.spectrum, n)?.sample(&mut stream.rng()))
    }

    /// Runs the truncated `tr(ρ^q)` estimator on fresh copies.
    pub fn power_trace_estimate(&self, q: f64, epsilon: f64, c: f64, stream: RngStream) -> Result<f64> {
        Ok(power_trace_estimate(self.spectrum, q, epsilon, c, stream)?.estimate)
    }
}

/// Maps observations of the hidden state to a guess.
pub trait DecisionRule: Sync {
    fn guess(&self, source: &SampleSource<'_>, stream: RngStream) -> Result<Case>;
}

/// Always guesses the same case.
pub struct ConstantRule(pub Case);

impl DecisionRule for ConstantRule {
    fn guess(&self, _: &SampleSource<'_>, _: RngStream) -> Result<Case> {
        Ok(self.0)
    }
}

/// Likelihood-ratio test on one weak Schur sampling outcome `λ ⊢ n`, using
/// exact tables for both hypotheses. Ties go to [`Case::First`].
pub struct LikelihoodRatioRule {
    n: u32,
    first: HashMap<Partition, BigRational>,
    second: HashMap<Partition, BigRational>,
    l1: BigRational,
}

impl LikelihoodRatioRule {
    pub fn from_tables(first: &ExactDistribution, second: &ExactDistribution) -> Result<Self> {
        let l1 = l1_distance(first, second)?;
        let to_map = |t: &ExactDistribution| t.entries().iter().cloned().collect::<HashMap<_, _>>();
        Ok(LikelihoodRatioRule {
            n: first.n(),
            first: to_map(first),
            second: to_map(second),
            l1,
        })
    }

    /// Rule for the mixed pair `(r, d)` with `n` copies.
    pub fn for_mixed_pair(n: u32, r: u64, d: u64, cap: ExactCap) -> Result<Self> {
        LikelihoodRatioRule::from_tables(&sw_uniform_exact(r, n, cap)?, &sw_uniform_exact(d, n, cap)?)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// `‖P_1 − P_2‖₁` of the two outcome laws.
    pub fn l1(&self) -> &BigRational {
        &self.l1
    }

    /// Exact success probability, `1/2 + ‖P_1 − P_2‖₁/4`.
    pub fn exact_success(&self) -> f64 {
        0.5 + rational_to_f64(&self.l1) / 4.0
    }

    pub fn decide(&self, lambda: &Partition) -> Case {
        let zero = BigRational::from_integer(0.into());
        let p1 = self.first.get(lambda).unwrap_or(&zero);
        let p2 = self.second.get(lambda).unwrap_or(&zero);
        if p1 >= p2 {
            Case::First
        } else {
            Case::Second
        }
    }
}

impl DecisionRule for LikelihoodRatioRule {
    fn guess(&self, source: &SampleSource<'_>, stream: RngStream) -> Result<Case> {
        Ok(self.decide(&source.weak_schur_sample(self.n, stream)?))
    }
}

/// Thresholds a truncated `tr(ρ^q)` estimate halfway between the two truths.
pub struct PowerTraceThresholdRule {
    pub q: f64,
    pub epsilon: f64,
    pub c: f64,
    pub threshold: f64,
    pub first_is_larger: bool,
}

impl PowerTraceThresholdRule {
    pub fn for_instance(pair: &HardInstance, epsilon: f64, c: f64) -> Self {
        let t1 = true_power_trace(&pair.spectra[0], pair.q);
        let t2 = true_power_trace(&pair.spectra[1], pair.q);
        PowerTraceThresholdRule {
            q: pair.q,
            epsilon,
            c,
            threshold: 0.5 * (t1 + t2),
            first_is_larger: t1 >= t2,
        }
    }
}

impl DecisionRule for PowerTraceThresholdRule {
    fn guess(&self, source: &SampleSource<'_>, stream: RngStream) -> Result<Case> {
        let est = source.power_trace_estimate(self.q, self.epsilon, self.c, stream)?;
        Ok(if (est > self.threshold) == self.first_is_larger {
            Case::First
        } else {
            Case::Second
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiscriminationOutcome {
    pub trials: u64,
    pub correct: u64,
    pub rate: f64,
}

pub const MIN_TRIALS: u64 = 100;

/// Balanced rounds: each trial picks the case with a fair coin from
/// `stream.derive(t)` and lets the rule observe that state.
pub fn discrimination_experiment(
    pair: &HardInstance,
    rule: &dyn DecisionRule,
    trials: u64,
    stream: RngStream,
) -> Result<DiscriminationOutcome> {
    use rayon::prelude::*;
    if trials < MIN_TRIALS {
        return Err(out_of_range(
            "trials",
            format!("need at least {MIN_TRIALS} rounds, got {trials}"),
        ));
    }
    let outcomes: Vec<bool> = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<bool> {
            let round = stream.derive(t);
            let case = if round.rng().random::<bool>() {
                Case::First
            } else {
                Case::Second
            };
            let spectrum = match case {
                Case::First => &pair.spectra[0],
                Case::Second => &pair.spectra[1],
            };
            let guess = rule.guess(&SampleSource { spectrum }, round.derive(0))?;
            Ok(guess == case)
        })
        .collect::<Result<_>>()?;
    let correct = outcomes.iter().filter(|&&ok| ok).count() as u64;
    Ok(DiscriminationOutcome {
        trials,
        correct,
        rate: correct as f64 / trials as f64,
    })
}

/// Three binomial standard deviations at success probability `p`.
pub fn three_sigma(p: f64, trials: u64) -> f64 {
    3.0 * (p * (1.0 - p) / trials as f64).sqrt()
}

/// Copies the optimal measurement needs to reach success `target` on the
/// qubit pair, one row per `ε`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CopiesRow {
    pub epsilon: f64,
    pub infidelity: f64,
    pub copies: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QubitScaling {
    pub target: f64,
    pub rows: Vec<CopiesRow>,
    /// Least-squares slope of `ln copies` against `ln γ`.
    pub slope: f64,
}

/// Success of the optimal test between `N` copies of two commuting qubit
/// states: `1/2 + TV(Bin(N, a), Bin(N, b))/2`.
fn binomial_discrimination(copies: u64, a: f64, b: f64) -> f64 {
    let n = copies as f64;
    let mut ln_choose = 0.0;
    let mut tv = 0.0;
    for k in 0..=copies {
        if k > 0 {
            ln_choose += ((n - k as f64 + 1.0) / k as f64).ln();
        }
        let kf = k as f64;
        let pa = (ln_choose + kf * a.ln() + (n - kf) * (1.0 - a).ln()).exp();
        let pb = (ln_choose + kf * b.ln() + (n - kf) * (1.0 - b).ln()).exp();
        tv += (pa - pb).abs();
    }
    0.5 + tv / 4.0
}

/// Smallest copy count reaching `target` success on the qubit pair, for
/// each `ε`, and the log-log slope against the infidelity.
pub fn qubit_copies_scaling(epsilons: &[f64], target: f64) -> Result<QubitScaling> {
    if epsilons.len() < 2 {
        return Err(out_of_range("epsilons", "need at least two values for a slope"));
    }
    if !(0.5..1.0).contains(&target) {
        return Err(out_of_range("target", format!("must lie in [1/2, 1), got {target}")));
    }
    let mut rows = Vec::new();
    for &eps in epsilons {
        if !(eps > 0.0 && eps < 1.0 / 3.0) {
            return Err(out_of_range("epsilon", format!("need 0 < ε < 1/3, got {eps}")));
        }
        let (a, b) = (2.0 / 3.0 + eps, 2.0 / 3.0 - eps);
        let success = |c: u64| binomial_discrimination(c, a, b);
        let mut hi = 1u64;
        while success(hi) < target {
            hi *= 2;
            if hi > 1 << 26 {
                return Err(out_of_range("epsilon", format!("ε = {eps} needs too many copies")));
            }
        }
        let mut lo = hi / 2;
        // Optimal success never decreases with more copies.
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if success(mid) >= target {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        rows.push(CopiesRow {
            epsilon: eps,
            infidelity: qubit_infidelity_closed_form(eps),
            copies: hi,
        });
    }
    let xs: Vec<f64> = rows.iter().map(|r| r.infidelity.ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| (r.copies as f64).ln()).collect();
    Ok(QubitScaling {
        target,
        slope: least_squares_slope(&xs, &ys),
        rows,
    })
}

pub fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Smallest `n ≤ r` at which the exact likelihood-ratio rule on `λ ⊢ n`
/// beats `target`, next to the `√2·r/6` lower bound.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleCountRow {
    pub r: u64,
    pub d: u64,
    pub smallest_n: Option<u32>,
    pub success_at_n: Option<f64>,
    /// Highest success over the `n` searched.
    pub best_success: f64,
    pub lower_bound: f64,
}

pub fn mixed_sample_count(r: u64, d: u64, target: f64, cap: ExactCap) -> Result<SampleCountRow> {
    if r == 0 || r > d {
        return Err(out_of_range("(r, d)", format!("need 1 ≤ r ≤ d, got ({r}, {d})")));
    }
    let max_n = r.min(cap.get() as u64) as u32;
    let mut found = None;
    let mut best_success = 0.5f64;
    for n in 1..=max_n {
        let success = 0.5 + rational_to_f64(&mixed_pair_l1(n, r, d, cap)?) / 4.0;
        best_success = best_success.max(success);
        if success > target {
            found = Some((n, success));
            break;
        }
    }
    Ok(SampleCountRow {
        r,
        d,
        smallest_n: found.map(|f| f.0),
        success_at_n: found.map(|f| f.1),
        best_success,
        lower_bound: std::f64::consts::SQRT_2 * r as f64 / 6.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qubit_pair_basics() {
        let zero = hard_pair_qubit(2.0, 0.0).unwrap();
        assert_eq!(zero.analytic.trace_gap, 0.0);
        assert!(zero.analytic.infidelity.abs() < 1e-15);

        let p = hard_pair_qubit(2.0, 0.1).unwrap();
        let expect = (0.7666666666666667f64.powi(2) + 0.2333333333333333f64.powi(2))
            - (0.5666666666666667f64.powi(2) + 0.4333333333333333f64.powi(2));
        assert!((p.analytic.trace_gap - expect).abs() < 1e-12);
        assert!(p.analytic.trace_gap > 0.0);

        let small = hard_pair_qubit(2.0, 0.01).unwrap();
        let ratio = small.analytic.infidelity / 1e-4;
        assert!((ratio - 2.25).abs() < 0.05, "{ratio}");

        assert!(hard_pair_qubit(2.0, 1.0 / 3.0).is_err());
        assert!(hard_pair_qubit(1.0, 0.1).is_err());
    }

    #[test]
    fn fidelity_matches_closed_form() {
        for k in 0..33 {
            let eps = k as f64 * 0.01;
            let p = hard_pair_qubit(1.5, eps).unwrap();
            let f = fidelity_commuting(&p.diagonals[0], &p.diagonals[1]);
            assert!((1.0 - f - p.analytic.infidelity).abs() < 1e-12);
        }
    }

    #[test]
    fn mixed_pair_dimensions_examples() {
        assert_eq!(mixed_pair_dimensions(1.5, 0.01).unwrap(), (2500, 10001));
        assert_eq!(mixed_pair_dimensions(1.5, 0.125).unwrap(), (16, 65));
        assert!(mixed_pair_dimensions(1.5, 0.6).is_err());
        assert!(mixed_pair_dimensions(2.5, 0.1).is_err());
        let pair = hard_pair_maximally_mixed(1.5, 0.125).unwrap();
        assert!(pair.analytic.trace_gap >= 0.125 * (1.0 - 1e-12));
    }

    #[test]
    fn helstrom_values() {
        assert_eq!(helstrom_bound(0.0).unwrap(), 0.5);
        assert_eq!(helstrom_bound(2.0).unwrap(), 1.0);
        assert_eq!(helstrom_bound(0.5).unwrap(), 0.625);
        assert!(helstrom_bound(2.1).is_err());
        assert!(helstrom_bound(-0.1).is_err());
    }

    #[test]
    fn mixed_l1_examples() {
        let cap = ExactCap::default();
        assert_eq!(mixed_pair_l1(3, 5, 5, cap).unwrap(), BigRational::from_integer(0.into()));
        let v = rational_to_f64(&mixed_pair_l1(2, 2, 4, cap).unwrap());
        assert!(v >= 0.0 && v <= mixed_pair_l1_bound(2, 2, 4));
        let v = rational_to_f64(&mixed_pair_l1(4, 4, 8, cap).unwrap());
        assert!(v <= mixed_pair_l1_bound(4, 4, 8));
        assert!(mixed_pair_l1(5, 4, 8, cap).is_err());
    }

    #[test]
    fn constant_rule_is_a_coin_flip() {
        let pair = hard_pair_qubit(2.0, 0.2).unwrap();
        let out = discrimination_experiment(&pair, &ConstantRule(Case::First), 4000, RngStream::new(3, 0)).unwrap();
        assert!((out.rate - 0.5).abs() < three_sigma(0.5, 4000));
        assert!(discrimination_experiment(&pair, &ConstantRule(Case::First), 99, RngStream::new(3, 0)).is_err());
    }

    #[test]
    fn qubit_copies_scale_inversely_with_infidelity() {
        let s = qubit_copies_scaling(&[0.08, 0.04, 0.02], 2.0 / 3.0).unwrap();
        assert!(s.rows.windows(2).all(|w| w[0].copies < w[1].copies));
        assert!((s.slope + 1.0).abs() < 0.15, "slope {}", s.slope);
    }
}
