use proptest::prelude::*;
use rayon::prelude::*;

use schurtrace::power_trace::{
    error_budget_high_q, error_budget_low_q, plugin_estimate, power_trace_estimate,
    power_trace_estimate_detailed, rearrange_tail, tail_bound, tail_power_sum, true_power_trace,
    truncation, Algorithm,
};
use schurtrace::spectrum_estimation::DEFAULT_C;
use schurtrace::{RngStream, Spectrum};

const SLACK: f64 = 1e-12;

fn sorted_simplex() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(1e-6f64..1.0, 1..=50).prop_map(|mut x| {
        let s: f64 = x.iter().sum();
        x.iter_mut().for_each(|v| *v /= s);
        x.sort_by(|a, b| b.total_cmp(a));
        x
    })
}

#[test]
fn parameters_follow_the_formulas() {
    let t = truncation(3.0, 0.12, 4).unwrap();
    assert_eq!(t.algorithm, Algorithm::TruncatedHighQ);
    assert!((t.eps_prime - 0.02).abs() < 1e-15);
    assert_eq!(t.m_uncapped, 50);
    assert_eq!(t.m, 4);
    assert_eq!(truncation(3.0, 0.12, 1000).unwrap().m, 50);
    let two = truncation(2.0, 0.1, 10).unwrap();
    assert_eq!(two.algorithm, Algorithm::TruncatedHighQ);
    assert!((two.eps_prime - 0.02).abs() < 1e-15);
    let low = truncation(1.5, 0.1, 10_000).unwrap();
    assert_eq!(low.algorithm, Algorithm::TruncatedLowQ);
    assert!((low.eps_prime - 0.0004).abs() < 1e-15);
    assert_eq!(low.m, 2500);
    assert!((low.delta_prime - 1.0 / 7500.0).abs() < 1e-18);
    assert!(truncation(1.0, 0.1, 3).is_err());
    assert!(truncation(2.0, 1.0, 3).is_err());
}

#[test]
fn error_stays_within_budget_when_entries_are_accurate() {
    let cases = [(2.5, vec![0.5, 0.3, 0.2], 0.1), (3.0, vec![0.25; 4], 0.1), (2.0, vec![0.6, 0.4], 0.08)];
    for (ci, (q, values, eps)) in cases.into_iter().enumerate() {
        let alpha = Spectrum::new(values.clone()).unwrap();
        let truth = true_power_trace(&alpha, q);
        let outcomes: Vec<(bool, f64, f64)> = (0..200u64)
            .into_par_iter()
            .map(|t| {
                let (rep, spec) = power_trace_estimate_detailed(&alpha, q, eps, DEFAULT_C, RngStream::new(60 + ci as u64, t)).unwrap();
                let ep = rep.eps_prime.unwrap();
                let accurate = (0..rep.m).all(|j| (spec.values[j] - values[j]).abs() <= ep);
                let budget = error_budget_high_q(q, ep, rep.m, values.len());
                (accurate, (rep.estimate - truth).abs(), budget)
            })
            .collect();
        let conditioned: Vec<_> = outcomes.iter().filter(|o| o.0).collect();
        assert!(!conditioned.is_empty());
        for (_, err, budget) in conditioned {
            assert!(err <= &(budget + SLACK), "q = {q}: error {err} > budget {budget}");
        }
    }
}

#[test]
fn low_q_error_stays_within_budget_when_entries_are_accurate() {
    let values = vec![0.7, 0.2, 0.1];
    let alpha = Spectrum::new(values.clone()).unwrap();
    let (q, eps) = (1.5, 0.3);
    let truth = true_power_trace(&alpha, q);
    for t in 0..40u64 {
        let (rep, spec) = power_trace_estimate_detailed(&alpha, q, eps, DEFAULT_C, RngStream::new(70, t)).unwrap();
        let ep = rep.eps_prime.unwrap();
        if (0..rep.m).all(|j| (spec.values[j] - values[j]).abs() <= ep) {
            let budget = error_budget_low_q(q, ep, rep.m, &alpha);
            assert!((rep.estimate - truth).abs() <= budget + SLACK);
        }
    }
}

#[test]
fn runs_are_reproducible() {
    let alpha = Spectrum::new(vec![0.5, 0.3, 0.2]).unwrap();
    let a = power_trace_estimate(&alpha, 2.5, 0.1, DEFAULT_C, RngStream::new(9, 4)).unwrap();
    let b = power_trace_estimate(&alpha, 2.5, 0.1, DEFAULT_C, RngStream::new(9, 4)).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.total_samples, a.n_per_batch * a.k_batches);
}

/// Heavy-tailed spectrum, equal budgets: prints both errors, asserts nothing
/// about which is smaller.
#[test]
fn plugin_comparison_on_heavy_tail() {
    let alpha = Spectrum::zipf(200, 1.0).unwrap();
    let (q, eps, runs) = (1.5, 0.9, 8u64);
    let truth = true_power_trace(&alpha, q);
    let mut sq_trunc = 0.0;
    let mut sq_plug = 0.0;
    let mut budget = 0;
    for t in 0..runs {
        let rep = power_trace_estimate(&alpha, q, eps, DEFAULT_C, RngStream::new(80, t)).unwrap();
        budget = rep.total_samples;
        sq_trunc += (rep.estimate - truth).powi(2);
        let plug = plugin_estimate(&alpha, q, budget as u32, RngStream::new(81, t)).unwrap();
        assert_eq!(plug.algorithm, Algorithm::PlugIn);
        sq_plug += (plug.estimate - truth).powi(2);
    }
    println!(
        "zipf(200), q = {q}, {budget} copies: truncated RMSE {:.5}, plug-in RMSE {:.5}",
        (sq_trunc / runs as f64).sqrt(),
        (sq_plug / runs as f64).sqrt()
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn power_difference_is_lipschitz(x in 0.0f64..=1.0, y in 0.0f64..=1.0, a in 1.0f64..6.0) {
        prop_assert!((x.powf(a) - y.powf(a)).abs() <= a * (x - y).abs() + SLACK);
    }

    #[test]
    fn concave_power_is_subadditive(x in 0.0f64..=1.0, y in 0.0f64..=1.0, s in 1e-6f64..1.0) {
        let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
        prop_assert!(hi.powf(s) - lo.powf(s) <= (hi - lo).powf(s) + SLACK);
    }

    #[test]
    fn power_mean_bound(xs in prop::collection::vec(0.0f64..1.0, 1..30), s in 1e-6f64..1.0) {
        let k = xs.len() as f64;
        let lhs: f64 = xs.iter().map(|v| v.powf(s)).sum();
        prop_assert!(lhs <= k.powf(1.0 - s) * xs.iter().sum::<f64>().powf(s) + SLACK);
    }

    #[test]
    fn tail_sum_bounded(x in sorted_simplex(), m_pick in any::<prop::sample::Index>(), q in 1.000001f64..2.0) {
        let m = m_pick.index(x.len()) + 1;
        let bound = tail_bound(m, q);
        prop_assert!(tail_power_sum(&x, m, q) <= bound + SLACK);
        let worst = rearrange_tail(&x, m);
        prop_assert!((worst.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        prop_assert!(worst[m..].iter().all(|&v| v <= x[m - 1] + SLACK));
        prop_assert!(tail_power_sum(&worst, m, q) + SLACK >= tail_power_sum(&x, m, q));
        prop_assert!(tail_power_sum(&worst, m, q) <= bound + SLACK);
    }
}
