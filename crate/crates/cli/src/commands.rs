use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use schurtrace::exact_dist::{
    calibrate_c, chw_grid, l1_distance, planch_exact_with_cap, reference_spectra,
    sw_exact_with_cap, sw_uniform_exact, ExactCap,
};
use schurtrace::lower_bounds::{
    discrimination_experiment, fidelity_commuting, hard_pair_maximally_mixed, hard_pair_qubit,
    helstrom_bound, mixed_pair_l1, mixed_pair_l1_bound, mixed_pair_with_dimensions,
    qubit_copies_scaling, qubit_gap_slope, DiscriminationOutcome, HardInstance, LikelihoodRatioRule,
    PowerTraceThresholdRule, QubitScaling,
};
use schurtrace::numeric::{rational_string, rational_to_f64};
use schurtrace::power_trace::{power_trace_estimate, true_power_trace, EstimateReport};
use schurtrace::sampling::{sample_planch, Strategy, SwSampler};
use schurtrace::spectrum_estimation::{spectrum_estimate, SpectrumEstimate};
use schurtrace::{ExactDistribution, RngStream};

use crate::args::{
    Cli, Command, EstimateCommand, ExactCommand, Format, LowerboundCommand, SampleCommand, SweepArgs,
};
use crate::output::{csv_writer, pick, write_json};
use crate::{spectrum_arg, CliError, CliResult};

pub const SWEEP_HEADER: [&str; 9] = [
    "q", "eps", "trial", "seed", "estimate", "truth", "abs_err", "total_samples", "algorithm",
];

pub fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Exact(cmd) => exact(cli, cmd),
        Command::Sample(cmd) => sample(cli, cmd),
        Command::Estimate(cmd) => estimate(cli, cmd),
        Command::Sweep(args) => sweep(cli, args),
        Command::Lowerbound(cmd) => lowerbound(cli, cmd),
        Command::CalibrateC(args) => {
            let cal = calibrate_c(&reference_spectra(), args.max_n.min(cap(cli)?.get()))?;
            match pick(cli.format, Format::Json, &[Format::Json, Format::Csv], "calibrate-c")? {
                Format::Json => write_json(cli.out.as_deref(), &cal),
                Format::Csv => {
                    let mut w = csv_writer(cli.out.as_deref())?;
                    w.write_record(["spectrum", "n", "j", "moment", "ratio"])?;
                    for r in &cal.rows {
                        w.write_record([
                            r.spectrum.clone(),
                            r.n.to_string(),
                            r.j.to_string(),
                            rational_string(&r.moment),
                            r.ratio.to_string(),
                        ])?;
                    }
                    w.flush()?;
                    Ok(())
                }
            }
        }
    }
}

fn cap(cli: &Cli) -> CliResult<ExactCap> {
    Ok(match cli.exact_cap {
        Some(c) => ExactCap::new(c)?,
        None => ExactCap::default(),
    })
}

fn write_table(cli: &Cli, table: &ExactDistribution, command: &str) -> CliResult<()> {
    match pick(cli.format, Format::Csv, &[Format::Csv, Format::Json], command)? {
        Format::Json => write_json(cli.out.as_deref(), table),
        Format::Csv => {
            let mut w = csv_writer(cli.out.as_deref())?;
            w.write_record(["shape", "p", "p_float"])?;
            for (lam, p) in table.entries() {
                w.write_record([lam.to_bar_string(), rational_string(p), rational_to_f64(p).to_string()])?;
            }
            w.flush()?;
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct TvReport {
    n: u32,
    d: Option<u64>,
    alpha: Option<Vec<String>>,
    l1: String,
    l1_float: f64,
}

fn exact(cli: &Cli, cmd: &ExactCommand) -> CliResult<()> {
    let cap = cap(cli)?;
    match cmd {
        ExactCommand::Sw { n, spectrum, .. } => {
            let table = match (spectrum.uniform, &spectrum.alpha) {
                (Some(d), _) => sw_uniform_exact(d as u64, *n, cap)?,
                _ => sw_exact_with_cap(&spectrum_arg::exact(spectrum)?, *n, cap)?,
            };
            write_table(cli, &table, "exact sw")
        }
        ExactCommand::Planch { n } => write_table(cli, &planch_exact_with_cap(*n, cap)?, "exact planch"),
        ExactCommand::Tv { n, d, alpha } => {
            let sw = match (d, alpha) {
                (Some(d), _) => sw_uniform_exact(*d, *n, cap)?,
                (None, Some(raw)) => sw_exact_with_cap(&spectrum_arg::exact_list(raw)?, *n, cap)?,
                (None, None) => return Err(CliError::Usage("`exact tv` needs --d or --alpha".into())),
            };
            let l1 = l1_distance(&sw, &planch_exact_with_cap(*n, cap)?)?;
            match pick(cli.format, Format::Csv, &[Format::Csv, Format::Json], "exact tv")? {
                Format::Csv => {
                    let mut w = crate::output::open(cli.out.as_deref())?;
                    writeln!(w, "{}", rational_string(&l1))?;
                    w.flush()?;
                    Ok(())
                }
                Format::Json => write_json(
                    cli.out.as_deref(),
                    &TvReport {
                        n: *n,
                        d: *d,
                        alpha: alpha.clone(),
                        l1: rational_string(&l1),
                        l1_float: rational_to_f64(&l1),
                    },
                ),
            }
        }
        ExactCommand::ChwGrid { max_d } => {
            let grid = chw_grid(*max_d, cap)?;
            match pick(cli.format, Format::Csv, &[Format::Csv, Format::Json], "exact chw-grid")? {
                Format::Json => write_json(cli.out.as_deref(), &grid),
                Format::Csv => {
                    let mut w = csv_writer(cli.out.as_deref())?;
                    w.write_record(["n", "d", "lower", "value", "value_float", "upper", "pass"])?;
                    for c in &grid {
                        w.write_record([
                            c.n.to_string(),
                            c.d.to_string(),
                            rational_string(&c.lower),
                            rational_string(&c.value),
                            rational_to_f64(&c.value).to_string(),
                            c.upper.to_string(),
                            c.pass.to_string(),
                        ])?;
                    }
                    w.flush()?;
                    Ok(())
                }
            }
        }
    }
}

#[derive(Serialize)]
struct Draw {
    trial_id: u64,
    shape: schurtrace::Partition,
}

fn sample(cli: &Cli, cmd: &SampleCommand) -> CliResult<()> {
    let (draws, name) = match cmd {
        SampleCommand::Sw { n, trials, spectrum, zipf, rsk } => {
            let alpha = spectrum_arg::float(spectrum, zipf)?;
            let sampler = if *rsk {
                SwSampler::with_strategy(&alpha, *n, Strategy::Rsk)?
            } else {
                SwSampler::new(&alpha, *n)?
            };
            let draws: Vec<_> = (0..*trials)
                .into_par_iter()
                .map(|t| sampler.sample(&mut RngStream::new(cli.seed, t).rng()))
                .collect();
            (draws, "sample sw")
        }
        SampleCommand::Planch { n, trials } => {
            let draws = (0..*trials)
                .into_par_iter()
                .map(|t| sample_planch(*n, &mut RngStream::new(cli.seed, t).rng()))
                .collect::<Result<Vec<_>, _>>()?;
            (draws, "sample planch")
        }
    };
    match pick(cli.format, Format::Csv, &[Format::Csv, Format::Json], name)? {
        Format::Csv => {
            let mut w = csv_writer(cli.out.as_deref())?;
            w.write_record(["trial_id", "shape"])?;
            for (t, lam) in draws.iter().enumerate() {
                w.write_record([t.to_string(), lam.to_bar_string()])?;
            }
            w.flush()?;
            Ok(())
        }
        Format::Json => {
            let rows: Vec<Draw> = draws
                .into_iter()
                .enumerate()
                .map(|(t, shape)| Draw { trial_id: t as u64, shape })
                .collect();
            write_json(cli.out.as_deref(), &rows)
        }
    }
}

#[derive(Serialize)]
struct SpectrumReport {
    alpha_true: Vec<f64>,
    #[serde(flatten)]
    estimate: SpectrumEstimate,
    max_abs_err: f64,
}

#[derive(Serialize)]
struct PowerTraceReport {
    #[serde(flatten)]
    report: EstimateReport,
    truth: f64,
    abs_err: f64,
}

fn estimate(cli: &Cli, cmd: &EstimateCommand) -> CliResult<()> {
    pick(cli.format, Format::Json, &[Format::Json], "estimate")?;
    match cmd {
        EstimateCommand::Spectrum { eps, delta, c, stream, spectrum, zipf } => {
            let alpha = spectrum_arg::float(spectrum, zipf)?;
            let est = spectrum_estimate(&alpha, *eps, *delta, *c, RngStream::new(cli.seed, *stream))?;
            let max_abs_err = est
                .values
                .iter()
                .zip(alpha.values())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            write_json(
                cli.out.as_deref(),
                &SpectrumReport {
                    alpha_true: alpha.values().to_vec(),
                    estimate: est,
                    max_abs_err,
                },
            )
        }
        EstimateCommand::PowerTrace { q, eps, c, stream, spectrum, zipf } => {
            let alpha = spectrum_arg::float(spectrum, zipf)?;
            let report = power_trace_estimate(&alpha, *q, *eps, *c, RngStream::new(cli.seed, *stream))?;
            let truth = true_power_trace(&alpha, *q);
            let abs_err = (report.estimate - truth).abs();
            write_json(cli.out.as_deref(), &PowerTraceReport { report, truth, abs_err })
        }
    }
}

/// Rows are written as each chunk of trials completes, in trial order.
fn sweep(cli: &Cli, args: &SweepArgs) -> CliResult<()> {
    pick(cli.format, Format::Csv, &[Format::Csv], "sweep")?;
    if args.trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    if let Some(e) = args.eps.iter().find(|e| !(**e > 0.0 && **e < 1.0)) {
        return Err(CliError::Usage(format!("every --eps must lie in (0,1), got {e}")));
    }
    if let Some(q) = args.q.iter().find(|q| !(**q > 1.0 && q.is_finite())) {
        return Err(CliError::Usage(format!("every --q must be > 1, got {q}")));
    }
    let alpha = spectrum_arg::float(&args.spectrum, &args.zipf)?;
    let mut w = csv_writer(cli.out.as_deref())?;
    w.write_record(SWEEP_HEADER)?;
    w.flush()?;
    let chunk = rayon::current_num_threads().max(1) as u64;
    for &q in &args.q {
        let truth = true_power_trace(&alpha, q);
        for &eps in &args.eps {
            let mut start = 0;
            while start < args.trials {
                let end = (start + chunk).min(args.trials);
                let reports = (start..end)
                    .into_par_iter()
                    .map(|t| power_trace_estimate(&alpha, q, eps, args.c, RngStream::new(cli.seed, t)))
                    .collect::<Result<Vec<_>, _>>()?;
                for (t, r) in (start..end).zip(&reports) {
                    w.write_record([
                        q.to_string(),
                        eps.to_string(),
                        t.to_string(),
                        cli.seed.to_string(),
                        r.estimate.to_string(),
                        truth.to_string(),
                        (r.estimate - truth).abs().to_string(),
                        r.total_samples.to_string(),
                        r.algorithm.name().to_string(),
                    ])?;
                    w.flush()?;
                }
                start = end;
            }
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct QubitReport {
    instance: HardInstance,
    diagonals: [Vec<f64>; 2],
    fidelity: f64,
    single_copy_success: f64,
    gap_over_eps: Option<f64>,
    gap_slope_limit: f64,
    scaling: Option<QubitScaling>,
    threshold_experiment: Option<ThresholdExperiment>,
}

#[derive(Serialize)]
struct ThresholdExperiment {
    eps_est: f64,
    c: f64,
    threshold: f64,
    seed: u64,
    outcome: DiscriminationOutcome,
}

#[derive(Serialize)]
struct MixedRow {
    n: u32,
    l1: String,
    l1_float: f64,
    triangle_bound: f64,
    success_cap: f64,
}

#[derive(Serialize)]
struct MixedReport {
    instance: HardInstance,
    exact_n_max: u32,
    rows: Vec<MixedRow>,
    smallest_n_above_two_thirds: Option<u32>,
    sample_lower_bound: f64,
    lr_experiment: Option<LrExperiment>,
}

#[derive(Serialize)]
struct LrExperiment {
    n: u32,
    seed: u64,
    success_cap: f64,
    outcome: DiscriminationOutcome,
}

fn lowerbound(cli: &Cli, cmd: &LowerboundCommand) -> CliResult<()> {
    pick(cli.format, Format::Json, &[Format::Json], "lowerbound")?;
    let stream = RngStream::new(cli.seed, 0);
    match cmd {
        LowerboundCommand::Qubit { q, eps, trials, eps_est, c, scaling_eps } => {
            let instance = hard_pair_qubit(*q, *eps)?;
            let fidelity = fidelity_commuting(&instance.diagonals[0], &instance.diagonals[1]);
            let single_copy_success = helstrom_bound(instance.analytic.l1)?;
            let scaling = if scaling_eps.len() >= 2 {
                Some(qubit_copies_scaling(scaling_eps, 2.0 / 3.0)?)
            } else {
                None
            };
            let threshold_experiment = if *trials > 0 {
                let rule = PowerTraceThresholdRule::for_instance(&instance, *eps_est, *c);
                let outcome = discrimination_experiment(&instance, &rule, *trials, stream)?;
                Some(ThresholdExperiment {
                    eps_est: *eps_est,
                    c: *c,
                    threshold: rule.threshold,
                    seed: cli.seed,
                    outcome,
                })
            } else {
                None
            };
            let report = QubitReport {
                gap_over_eps: (*eps > 0.0).then(|| instance.analytic.trace_gap / eps),
                gap_slope_limit: qubit_gap_slope(*q),
                diagonals: instance.diagonals.clone(),
                instance,
                fidelity,
                single_copy_success,
                scaling,
                threshold_experiment,
            };
            write_json(cli.out.as_deref(), &report)
        }
        LowerboundCommand::Mixed { q, eps, r, d, n, trials } => {
            let instance = match (eps, r, d) {
                (Some(e), _, _) => hard_pair_maximally_mixed(*q, *e)?,
                (None, Some(r), Some(d)) => mixed_pair_with_dimensions(*q, f64::NAN, *r, *d)?,
                _ => return Err(CliError::Usage("give --eps or both --r and --d".into())),
            };
            let (r, d) = (instance.analytic.r.unwrap_or(0) as u64, instance.analytic.d.unwrap_or(0) as u64);
            let cap = cap(cli)?;
            let exact_n_max = r.min(cap.get() as u64) as u32;
            let rows = (1..=exact_n_max)
                .map(|k| -> CliResult<MixedRow> {
                    let l1 = mixed_pair_l1(k, r, d, cap)?;
                    let l1_float = rational_to_f64(&l1);
                    Ok(MixedRow {
                        n: k,
                        l1: rational_string(&l1),
                        l1_float,
                        triangle_bound: mixed_pair_l1_bound(k, r, d),
                        success_cap: helstrom_bound(l1_float)?,
                    })
                })
                .collect::<CliResult<Vec<_>>>()?;
            let smallest_n_above_two_thirds = rows.iter().find(|row| row.success_cap > 2.0 / 3.0).map(|row| row.n);
            let lr_experiment = if *trials > 0 {
                let n = n.unwrap_or(exact_n_max);
                let rule = LikelihoodRatioRule::for_mixed_pair(n, r, d, cap)?;
                let outcome = discrimination_experiment(&instance, &rule, *trials, stream)?;
                Some(LrExperiment {
                    n,
                    seed: cli.seed,
                    success_cap: rule.exact_success(),
                    outcome,
                })
            } else {
                None
            };
            write_json(
                cli.out.as_deref(),
                &MixedReport {
                    instance,
                    exact_n_max,
                    rows,
                    smallest_n_above_two_thirds,
                    sample_lower_bound: std::f64::consts::SQRT_2 * r as f64 / 6.0,
                    lr_experiment,
                },
            )
        }
    }
}
