//! Thin command-line front end over [`azosgd::experiment`].

use azosgd::experiment::{cmd_run, cmd_sweep, cmd_theory, cmd_verify, ExperimentConfig};
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "azosgd",
    about = "Zero-order stochastic optimization experiments on overparameterized least squares",
    after_help = "Config files are flat `key = value` lines (# comments). Keys: dim, samples, \
seed, consistent, method (azo_sgd|acsa|sgd_baseline), mode (paper_schedule|fixed_gamma), gamma, \
tau, batch, batches, horizon, noise_kind (zero|constant_sign|coordinate_oscillation|\
machine_epsilon), noise_level, epsilon, out, trace_every, threads, threshold, timing, \
f_star_hint, smoothness, radius, sigma_star_sq, verify_samples. Flags override file values. \
Defaults: dim=256 samples=128 seed=1 consistent=true method=azo_sgd mode=paper_schedule \
tau=1e-3 batch=16 batches=8,16,64 horizon=1000 noise_kind=zero threshold=1e-3 timing=false."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one optimizer and write its trace CSV.
    Run(CommonArgs),
    /// Run the batch-size sweep: one trace per batch plus a summary CSV.
    Sweep(CommonArgs),
    /// Print the resource budget JSON for a target accuracy.
    Theory(CommonArgs),
    /// Run the Monte-Carlo verification grid and write its CSV report.
    Verify(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Flat key=value config file; flags below override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output path (run, verify) or path prefix (sweep).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    samples: Option<usize>,
    /// true for an interpolating system (f* = 0), false for a shifted one.
    #[arg(long)]
    consistent: Option<bool>,
    /// azo_sgd | acsa | sgd_baseline.
    #[arg(long)]
    method: Option<String>,
    /// paper_schedule | fixed_gamma.
    #[arg(long)]
    mode: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    gamma: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    tau: Option<f64>,
    #[arg(long)]
    batch: Option<usize>,
    /// Comma-separated batch sizes for sweep, e.g. 8,16,64.
    #[arg(long)]
    batches: Option<String>,
    #[arg(long)]
    horizon: Option<usize>,
    /// zero | constant_sign | coordinate_oscillation | machine_epsilon.
    #[arg(long)]
    noise_kind: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    noise_level: Option<f64>,
    /// Target accuracy for theory budgets and noise warnings.
    #[arg(long, allow_negative_numbers = true)]
    epsilon: Option<f64>,
    #[arg(long)]
    trace_every: Option<usize>,
    /// Worker threads for sweeps and verification (0 = automatic).
    #[arg(long)]
    threads: Option<usize>,
    /// Relative gap defining iterations-to-threshold in sweeps.
    #[arg(long, allow_negative_numbers = true)]
    threshold: Option<f64>,
    /// Record wall-clock nanoseconds per trace row (breaks byte-identical
    /// reproducibility of output files).
    #[arg(long)]
    timing: bool,
    #[arg(long, allow_negative_numbers = true)]
    smoothness: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    radius: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    sigma_star_sq: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    f_star_hint: Option<f64>,
    #[arg(long)]
    verify_samples: Option<usize>,
}

impl CommonArgs {
    fn into_config(self) -> Result<ExperimentConfig, azosgd::experiment::ConfigError> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::from_file(path)?,
            None => ExperimentConfig::default(),
        };
        let mut set =
            |key: &str, value: Option<String>| -> Result<(), azosgd::experiment::ConfigError> {
                if let Some(v) = value {
                    cfg.apply(key, &v)?;
                }
                Ok(())
            };
        set("seed", self.seed.map(|v| v.to_string()))?;
        set("dim", self.dim.map(|v| v.to_string()))?;
        set("samples", self.samples.map(|v| v.to_string()))?;
        set("consistent", self.consistent.map(|v| v.to_string()))?;
        set("method", self.method)?;
        set("mode", self.mode)?;
        set("gamma", self.gamma.map(|v| v.to_string()))?;
        set("tau", self.tau.map(|v| v.to_string()))?;
        set("batch", self.batch.map(|v| v.to_string()))?;
        set("batches", self.batches)?;
        set("horizon", self.horizon.map(|v| v.to_string()))?;
        set("noise_kind", self.noise_kind)?;
        set("noise_level", self.noise_level.map(|v| v.to_string()))?;
        set("epsilon", self.epsilon.map(|v| v.to_string()))?;
        set("trace_every", self.trace_every.map(|v| v.to_string()))?;
        set("threads", self.threads.map(|v| v.to_string()))?;
        set("threshold", self.threshold.map(|v| v.to_string()))?;
        set("smoothness", self.smoothness.map(|v| v.to_string()))?;
        set("radius", self.radius.map(|v| v.to_string()))?;
        set("sigma_star_sq", self.sigma_star_sq.map(|v| v.to_string()))?;
        set("f_star_hint", self.f_star_hint.map(|v| v.to_string()))?;
        set("verify_samples", self.verify_samples.map(|v| v.to_string()))?;
        if self.timing {
            cfg.timing = true;
        }
        if let Some(out) = self.out {
            cfg.out = Some(out);
        }
        Ok(cfg)
    }
}

fn configure_threads(threads: usize) {
    if threads > 0 {
        // Ignore failure: the global pool can only be set once.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (args, which) = match cli.command {
        Command::Run(a) => (a, "run"),
        Command::Sweep(a) => (a, "sweep"),
        Command::Theory(a) => (a, "theory"),
        Command::Verify(a) => (a, "verify"),
    };
    let cfg = match args.into_config() {
        Ok(cfg) => cfg,
        Err(err) => {
            eprintln!("error: {err}");
            return ExitCode::from(2);
        }
    };
    configure_threads(cfg.threads);

    let outcome = match which {
        "run" => cmd_run(&cfg).map(|path| {
            println!("wrote {}", path.display());
        }),
        "sweep" => cmd_sweep(&cfg).map(|paths| {
            for path in paths {
                println!("wrote {}", path.display());
            }
        }),
        "theory" => cmd_theory(&cfg).map(|json| {
            println!("{json}");
        }),
        "verify" => match cmd_verify(&cfg) {
            Ok((path, all_pass)) => {
                println!("wrote {}", path.display());
                if all_pass {
                    println!("verification: all reports pass");
                    Ok(())
                } else {
                    eprintln!("verification: at least one report failed");
                    return ExitCode::from(1);
                }
            }
            Err(err) => Err(err),
        },
        _ => unreachable!(),
    };

    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
