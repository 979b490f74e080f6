use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 20_250_101;

#[derive(Parser, Debug)]
#[command(name = "schurtrace", version, about = "Weak Schur sampling experiments and exact oracles")]
pub struct Cli {
    /// Base seed; trial `t` uses stream `t` of this seed.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Largest n for exact tables.
    #[arg(long, global = true, env = "SCHURTRACE_EXACT_CAP")]
    pub exact_cap: Option<u32>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact probability tables and distances.
    #[command(subcommand)]
    Exact(ExactCommand),
    /// Draw Young diagrams.
    #[command(subcommand)]
    Sample(SampleCommand),
    /// Run an estimator once.
    #[command(subcommand)]
    Estimate(EstimateCommand),
    /// Repeated power-trace estimates over a grid of q and ε.
    Sweep(SweepArgs),
    /// Hard instances and discrimination experiments.
    #[command(subcommand)]
    Lowerbound(LowerboundCommand),
    /// Max of E[(λ_j − α_j n)²]/n over small exact tables.
    CalibrateC(CalibrateArgs),
}

/// Spectrum given as a list, a uniform rank, or a Zipf law.
#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct SpectrumArgs {
    /// Comma-separated eigenvalues; decimals and p/q fractions are read exactly.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub alpha: Option<Vec<String>>,
    /// Maximally mixed state of this rank.
    #[arg(long)]
    pub uniform: Option<usize>,
    /// Zipf law over this many levels (exponent from --zipf-s).
    #[arg(long)]
    pub zipf: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct ZipfExponent {
    /// Zipf exponent.
    #[arg(long, default_value_t = 1.0)]
    pub zipf_s: f64,
}

#[derive(Subcommand, Debug)]
pub enum ExactCommand {
    /// SW^n(α) table.
    Sw {
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        spectrum: SpectrumArgs,
        #[command(flatten)]
        zipf: ZipfExponent,
    },
    /// Planch(n) table.
    Planch {
        #[arg(long)]
        n: u32,
    },
    /// ‖SW^n − Planch(n)‖₁ (sum of absolute differences).
    Tv {
        #[arg(long)]
        n: u32,
        /// Compare the maximally mixed state of this dimension.
        #[arg(long, conflicts_with = "alpha")]
        d: Option<u64>,
        /// Compare this spectrum instead.
        #[arg(long, value_delimiter = ',')]
        alpha: Option<Vec<String>>,
    },
    /// Sandwich check for all 2 ≤ n ≤ d ≤ max-d.
    ChwGrid {
        #[arg(long, default_value_t = 8)]
        max_d: u32,
    },
}

#[derive(Subcommand, Debug)]
pub enum SampleCommand {
    /// λ ~ SW^n(α).
    Sw {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[command(flatten)]
        spectrum: SpectrumArgs,
        #[command(flatten)]
        zipf: ZipfExponent,
        /// Force Robinson-Schensted insertion instead of the automatic choice.
        #[arg(long)]
        rsk: bool,
    },
    /// λ ~ Planch(n).
    Planch {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum EstimateCommand {
    /// Median-of-batches spectrum estimate.
    Spectrum {
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 0.05)]
        delta: f64,
        #[arg(long, default_value_t = schurtrace::spectrum_estimation::DEFAULT_C)]
        c: f64,
        /// Stream id of the run.
        #[arg(long, default_value_t = 0)]
        stream: u64,
        #[command(flatten)]
        spectrum: SpectrumArgs,
        #[command(flatten)]
        zipf: ZipfExponent,
    },
    /// Truncated estimate of tr(ρ^q).
    PowerTrace {
        #[arg(long)]
        q: f64,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = schurtrace::spectrum_estimation::DEFAULT_C)]
        c: f64,
        #[arg(long, default_value_t = 0)]
        stream: u64,
        #[command(flatten)]
        spectrum: SpectrumArgs,
        #[command(flatten)]
        zipf: ZipfExponent,
    },
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Comma-separated q values.
    #[arg(long, value_delimiter = ',', required = true)]
    pub q: Vec<f64>,
    /// Comma-separated accuracies, each in (0,1).
    #[arg(long, value_delimiter = ',', required = true)]
    pub eps: Vec<f64>,
    #[arg(long, default_value_t = 100)]
    pub trials: u64,
    #[arg(long, default_value_t = schurtrace::spectrum_estimation::DEFAULT_C)]
    pub c: f64,
    #[command(flatten)]
    pub spectrum: SpectrumArgs,
    #[command(flatten)]
    pub zipf: ZipfExponent,
}

#[derive(Subcommand, Debug)]
pub enum LowerboundCommand {
    /// The (2/3 ± ε, 1/3 ∓ ε) pair.
    Qubit {
        #[arg(long)]
        q: f64,
        #[arg(long)]
        eps: f64,
        /// Rounds of the threshold experiment (0 skips it).
        #[arg(long, default_value_t = 0)]
        trials: u64,
        /// Accuracy of the estimator inside the threshold rule.
        #[arg(long, default_value_t = 0.1)]
        eps_est: f64,
        #[arg(long, default_value_t = schurtrace::spectrum_estimation::DEFAULT_C)]
        c: f64,
        /// ε values for the copies-needed scaling table.
        #[arg(long, value_delimiter = ',', default_value = "0.08,0.04,0.02,0.01")]
        scaling_eps: Vec<f64>,
    },
    /// Maximally mixed rank r versus dimension d.
    Mixed {
        #[arg(long)]
        q: f64,
        /// Derive (r, d) from ε.
        #[arg(long, required_unless_present_all = ["r", "d"])]
        eps: Option<f64>,
        #[arg(long, requires = "d", conflicts_with = "eps")]
        r: Option<usize>,
        #[arg(long, requires = "r", conflicts_with = "eps")]
        d: Option<usize>,
        /// Copies for the likelihood-ratio experiment.
        #[arg(long)]
        n: Option<u32>,
        /// Rounds of the likelihood-ratio experiment (0 skips it).
        #[arg(long, default_value_t = 0)]
        trials: u64,
    },
}

#[derive(Args, Debug)]
pub struct CalibrateArgs {
    #[arg(long, default_value_t = 12)]
    pub max_n: u32,
}
