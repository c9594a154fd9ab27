//! Experiment driver: flat key=value configs with flag overrides, seeded
//! runs and sweeps, resource budgets, the verification suite, and CSV
//! emission for plotting.
//!
//! Trace CSVs have the fixed header
//! `iteration,f_ag_gap,f_ag_value,grad_estimator_evals,raw_oracle_calls,wall_ns`
//! with LF newlines and full round-trip decimal formatting. The `wall_ns`
//! column is zero unless timing is requested, so identical configs
//! produce byte-identical files.

use crate::acsa::{
    default_trace_every, run_acsa, run_fixed_step_sgd, RunError, Schedule, StepMode, Trajectory,
    VarianceSource,
};
use crate::azo::{run_azo_sgd, run_batch_sweep, AzoConfig, SweepReport};
use crate::oracle::{BiasModel, NoiseModel};
use crate::point::Point;
use crate::problem::{make_overparam_lsq, Objective, ProblemInstance};
use crate::theory::TheoryBudget;
use crate::verify::{check_auxiliary_inequalities, run_verification_grid, GridCell};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use thiserror::Error;

pub const TRACE_HEADER: &str =
    "iteration,f_ag_gap,f_ag_value,grad_estimator_evals,raw_oracle_calls,wall_ns";
pub const SWEEP_HEADER: &str = "batch,iterations_to_threshold,raw_oracle_calls";
pub const VERIFY_HEADER: &str = "quantity,d,tau,delta,empirical,bound,stderr,pass";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("unknown config key `{0}`")]
    UnknownKey(String),
    #[error("invalid value for `{key}`: {reason}")]
    Invalid { key: String, reason: String },
    #[error("cannot read config file `{path}`: {source}")]
    Unreadable {
        path: PathBuf,
        source: std::io::Error,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("cannot write output `{path}`: {source}")]
    Output {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Run(#[from] RunError),
}

impl CliError {
    /// Process exit code: 2 for configuration problems, 3 for unwritable
    /// outputs, 1 for runtime failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Output { .. } => 3,
            CliError::Run(_) => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    AzoSgd,
    Acsa,
    SgdBaseline,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NoiseKind {
    Zero,
    ConstantSign,
    CoordinateOscillation,
    MachineEpsilon,
}

/// Validated experiment description. Defaults reproduce the
/// convergence-study instance (`d = 256`, `m = 128`).
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub dim: usize,
    pub samples: usize,
    pub seed: u64,
    pub consistent: bool,
    pub method: Method,
    pub mode: StepMode,
    pub gamma: Option<f64>,
    pub tau: f64,
    pub batch: usize,
    pub batches: Vec<usize>,
    pub horizon: usize,
    pub noise_kind: NoiseKind,
    pub noise_level: Option<f64>,
    pub epsilon: Option<f64>,
    pub out: Option<PathBuf>,
    pub trace_every: Option<usize>,
    pub threads: usize,
    pub threshold: f64,
    pub timing: bool,
    /// Gap offset for problems whose minimum is supplied externally;
    /// generated instances carry their own exact value.
    pub f_star_hint: f64,
    pub smoothness: Option<f64>,
    pub radius: Option<f64>,
    pub sigma_star_sq: Option<f64>,
    pub verify_samples: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            dim: 256,
            samples: 128,
            seed: 1,
            consistent: true,
            method: Method::AzoSgd,
            mode: StepMode::PaperSchedule,
            gamma: None,
            tau: 1e-3,
            batch: 16,
            batches: vec![8, 16, 64],
            horizon: 1000,
            noise_kind: NoiseKind::Zero,
            noise_level: None,
            epsilon: None,
            out: None,
            trace_every: None,
            threads: 0,
            threshold: 1e-3,
            timing: false,
            f_star_hint: 0.0,
            smoothness: None,
            radius: None,
            sigma_star_sq: None,
            verify_samples: 10_000,
        }
    }
}

fn invalid(key: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        key: key.to_string(),
        reason: reason.into(),
    }
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ConfigError>
where
    T::Err: std::fmt::Display,
{
    value
        .trim()
        .parse::<T>()
        .map_err(|e| invalid(key, e.to_string()))
}

fn parse_bool(key: &str, value: &str) -> Result<bool, ConfigError> {
    match value.trim() {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        other => Err(invalid(key, format!("expected a boolean, got `{other}`"))),
    }
}

fn parse_batches(key: &str, value: &str) -> Result<Vec<usize>, ConfigError> {
    let parsed: Result<Vec<usize>, _> = value
        .split(',')
        .map(|part| part.trim().parse::<usize>())
        .collect();
    let list = parsed.map_err(|e| invalid(key, e.to_string()))?;
    if list.is_empty() {
        return Err(invalid(key, "expected at least one batch size"));
    }
    Ok(list)
}

impl ExperimentConfig {
    /// Applies one `key = value` assignment; unknown keys are rejected.
    pub fn apply(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        match key {
            "dim" => self.dim = parse_value(key, value)?,
            "samples" => self.samples = parse_value(key, value)?,
            "seed" => self.seed = parse_value(key, value)?,
            "consistent" => self.consistent = parse_bool(key, value)?,
            "method" => {
                self.method = match value.trim() {
                    "azo_sgd" => Method::AzoSgd,
                    "acsa" => Method::Acsa,
                    "sgd_baseline" => Method::SgdBaseline,
                    other => {
                        return Err(invalid(
                            key,
                            format!("expected azo_sgd | acsa | sgd_baseline, got `{other}`"),
                        ))
                    }
                }
            }
            "mode" => {
                self.mode = match value.trim() {
                    "paper_schedule" => StepMode::PaperSchedule,
                    "fixed_gamma" => StepMode::FixedGamma,
                    other => {
                        return Err(invalid(
                            key,
                            format!("expected paper_schedule | fixed_gamma, got `{other}`"),
                        ))
                    }
                }
            }
            "gamma" => self.gamma = Some(parse_value(key, value)?),
            "tau" => self.tau = parse_value(key, value)?,
            "batch" => self.batch = parse_value(key, value)?,
            "batches" => self.batches = parse_batches(key, value)?,
            "horizon" => self.horizon = parse_value(key, value)?,
            "noise_kind" => {
                self.noise_kind = match value.trim() {
                    "zero" => NoiseKind::Zero,
                    "constant_sign" => NoiseKind::ConstantSign,
                    "coordinate_oscillation" => NoiseKind::CoordinateOscillation,
                    "machine_epsilon" => NoiseKind::MachineEpsilon,
                    other => {
                        return Err(invalid(
                            key,
                            format!(
                                "expected zero | constant_sign | coordinate_oscillation | machine_epsilon, got `{other}`"
                            ),
                        ))
                    }
                }
            }
            "noise_level" => self.noise_level = Some(parse_value(key, value)?),
            "epsilon" => self.epsilon = Some(parse_value(key, value)?),
            "out" => self.out = Some(PathBuf::from(value.trim())),
            "trace_every" => self.trace_every = Some(parse_value(key, value)?),
            "threads" => self.threads = parse_value(key, value)?,
            "threshold" => self.threshold = parse_value(key, value)?,
            "timing" => self.timing = parse_bool(key, value)?,
            "f_star_hint" => self.f_star_hint = parse_value(key, value)?,
            "smoothness" => self.smoothness = Some(parse_value(key, value)?),
            "radius" => self.radius = Some(parse_value(key, value)?),
            "sigma_star_sq" => self.sigma_star_sq = Some(parse_value(key, value)?),
            "verify_samples" => self.verify_samples = parse_value(key, value)?,
            other => return Err(ConfigError::UnknownKey(other.to_string())),
        }
        Ok(())
    }

    /// Parses a flat `key = value` file; `#` starts a comment.
    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Unreadable {
            path: path.to_path_buf(),
            source,
        })?;
        let mut cfg = Self::default();
        for (line_no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                invalid(
                    &format!("line {}", line_no + 1),
                    format!("expected `key = value`, got `{line}`"),
                )
            })?;
            cfg.apply(key.trim(), value)?;
        }
        Ok(cfg)
    }

    /// Cross-field validation; every error names the offending key.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.dim == 0 {
            return Err(invalid("dim", "must be >= 1"));
        }
        if self.samples == 0 {
            return Err(invalid("samples", "must be >= 1"));
        }
        if self.samples > self.dim {
            return Err(invalid(
                "samples",
                format!(
                    "not overparameterized: {} samples exceed dimension {}",
                    self.samples, self.dim
                ),
            ));
        }
        if self.batch == 0 {
            return Err(invalid("batch", "batch must be >= 1"));
        }
        if self.batches.contains(&0) {
            return Err(invalid("batches", "every batch must be >= 1"));
        }
        if self.tau.is_nan() || self.tau <= 0.0 {
            return Err(invalid("tau", "tau must be positive"));
        }
        if let Some(gamma) = self.gamma {
            if gamma.is_nan() || gamma <= 0.0 {
                return Err(invalid("gamma", "gamma must be positive"));
            }
        }
        if self.mode == StepMode::FixedGamma && self.gamma.is_none() {
            return Err(invalid("gamma", "fixed_gamma mode requires gamma"));
        }
        if self.method == Method::SgdBaseline && self.gamma.is_none() {
            return Err(invalid("gamma", "sgd_baseline requires gamma as its step"));
        }
        if let Some(level) = self.noise_level {
            if level < 0.0 {
                return Err(invalid("noise_level", "must be non-negative"));
            }
        }
        if let Some(eps) = self.epsilon {
            if eps.is_nan() || eps <= 0.0 {
                return Err(invalid("epsilon", "must be positive"));
            }
        }
        if let Some(te) = self.trace_every {
            if te == 0 {
                return Err(invalid("trace_every", "must be >= 1"));
            }
        }
        if self.threshold.is_nan() || self.threshold <= 0.0 {
            return Err(invalid("threshold", "must be positive"));
        }
        if self.verify_samples < 10_000 {
            return Err(invalid("verify_samples", "must be >= 10000"));
        }
        Ok(())
    }

    pub fn noise_model(&self) -> NoiseModel {
        match self.noise_kind {
            NoiseKind::Zero => NoiseModel::zero(),
            NoiseKind::ConstantSign => NoiseModel::constant_sign(self.noise_level.unwrap_or(0.0)),
            NoiseKind::CoordinateOscillation => {
                NoiseModel::oscillation_for_tau(self.noise_level.unwrap_or(0.0), self.tau)
            }
            NoiseKind::MachineEpsilon => match self.noise_level {
                // The level is fixed at machine epsilon unless overridden.
                Some(level) => NoiseModel::oscillation(level, 1e-8),
                None => NoiseModel::machine_epsilon(),
            },
        }
    }

    pub fn build_instance(&self) -> Result<ProblemInstance, ConfigError> {
        make_overparam_lsq(self.dim, self.samples, self.seed, self.consistent)
            .map_err(|e| invalid("samples", e.to_string()))
    }

    fn schedule_for(&self, problem: &ProblemInstance, batch: usize) -> Schedule {
        match self.mode {
            StepMode::PaperSchedule => Schedule::paper(
                self.smoothness.unwrap_or_else(|| problem.smoothness()),
                self.radius.unwrap_or_else(|| problem.radius()),
                batch,
                self.horizon,
                VarianceSource::SigmaStarSq(
                    self.sigma_star_sq
                        .unwrap_or_else(|| problem.sigma_star_sq()),
                ),
            ),
            StepMode::FixedGamma => Schedule::fixed(
                self.gamma.expect("validated"),
                self.smoothness.unwrap_or_else(|| problem.smoothness()),
                self.radius.unwrap_or_else(|| problem.radius()),
                batch,
                self.horizon,
            ),
        }
    }

    fn effective_trace_every(&self) -> usize {
        self.trace_every
            .unwrap_or_else(|| default_trace_every(self.horizon))
    }

    fn azo_config(&self, problem: &ProblemInstance, batch: usize) -> AzoConfig {
        AzoConfig {
            schedule: self.schedule_for(problem, batch),
            tau: self.tau,
            noise: self.noise_model(),
            seed: self.seed,
            x0: Point::zeros(self.dim),
            trace_every: self.effective_trace_every(),
            epsilon: self.epsilon,
        }
    }

    /// Runs the configured method once and returns its trajectory.
    pub fn run_once(&self) -> Result<Trajectory, CliError> {
        let problem = self.build_instance()?;
        let trajectory = match self.method {
            Method::AzoSgd => run_azo_sgd(&problem, &self.azo_config(&problem, self.batch))?,
            Method::Acsa => run_acsa(
                &problem,
                &BiasModel::zero(),
                &self.schedule_for(&problem, self.batch),
                &Point::zeros(self.dim),
                self.seed,
                self.effective_trace_every(),
            )?,
            Method::SgdBaseline => run_fixed_step_sgd(
                &problem,
                self.gamma.expect("validated"),
                self.batch,
                self.horizon,
                self.radius.unwrap_or_else(|| problem.radius()),
                &Point::zeros(self.dim),
                self.seed,
                self.effective_trace_every(),
            )?,
        };
        Ok(trajectory)
    }

    /// Runs the batch-size sweep over `batches`.
    pub fn run_sweep(&self) -> Result<SweepReport, CliError> {
        let problem = self.build_instance()?;
        let template = self.azo_config(&problem, self.batch);
        Ok(run_batch_sweep(
            &problem,
            &template,
            &self.batches,
            self.threshold,
        )?)
    }

    /// Assembles the resource budget for the configured target accuracy.
    pub fn theory_budget(&self) -> Result<TheoryBudget, CliError> {
        let epsilon = self
            .epsilon
            .ok_or_else(|| invalid("epsilon", "theory requires epsilon"))?;
        let (smoothness, radius, sigma) = match (self.smoothness, self.radius) {
            (Some(l), Some(r)) => (l, r, self.sigma_star_sq.unwrap_or(0.0)),
            _ => {
                let problem = self.build_instance()?;
                (
                    self.smoothness.unwrap_or_else(|| problem.smoothness()),
                    self.radius.unwrap_or_else(|| problem.radius()),
                    self.sigma_star_sq
                        .unwrap_or_else(|| problem.sigma_star_sq()),
                )
            }
        };
        Ok(TheoryBudget::for_target(
            epsilon, smoothness, radius, self.dim, sigma,
        ))
    }
}

fn format_float(value: f64) -> String {
    // Shortest representation that round-trips; '.' decimal separator.
    format!("{value}")
}

/// Renders a trajectory as CSV text; `wall_ns` is zeroed unless timing is
/// requested, keeping equal configurations byte-identical.
pub fn trace_csv(trajectory: &Trajectory, timing: bool) -> String {
    let mut text = String::from(TRACE_HEADER);
    text.push('\n');
    for row in &trajectory.rows {
        let wall = if timing { row.wall_ns } else { 0 };
        let _ = writeln!(
            text,
            "{},{},{},{},{},{}",
            row.iteration,
            format_float(row.gap),
            format_float(row.value),
            row.estimator_evals,
            row.raw_oracle_calls,
            wall
        );
    }
    text
}

/// Renders a sweep summary as CSV text; unreached thresholds leave the
/// iterations field empty.
pub fn sweep_summary_csv(report: &SweepReport) -> String {
    let mut text = String::from(SWEEP_HEADER);
    text.push('\n');
    for entry in &report.entries {
        let reached = entry
            .iterations_to_threshold
            .map(|i| i.to_string())
            .unwrap_or_default();
        let _ = writeln!(
            text,
            "{},{},{}",
            entry.batch, reached, entry.raw_oracle_calls
        );
    }
    text
}

/// Renders verification grid cells plus the auxiliary-inequality rows.
pub fn verification_csv(cells: &[GridCell], auxiliary: &crate::verify::AuxiliaryReport) -> String {
    let mut text = String::from(VERIFY_HEADER);
    text.push('\n');
    for cell in cells {
        let _ = writeln!(
            text,
            "{},{},{},{},{},{},{},{}",
            cell.quantity,
            cell.dim,
            format_float(cell.tau),
            format_float(cell.delta),
            format_float(cell.report.empirical),
            format_float(cell.report.bound),
            format_float(cell.report.stderr),
            cell.report.pass
        );
    }
    let _ = writeln!(
        text,
        "norm_sum_pair,32,0,0,{},0,0,{}",
        format_float(auxiliary.pair_worst_slack),
        auxiliary.pair_worst_slack <= 1e-12
    );
    let _ = writeln!(
        text,
        "norm_sum_triple,32,0,0,{},0,0,{}",
        format_float(auxiliary.triple_worst_slack),
        auxiliary.triple_worst_slack <= 1e-12
    );
    let _ = writeln!(
        text,
        "wirtinger_poincare,16,0.01,0,{},{},{},{}",
        format_float(auxiliary.poincare_lhs),
        format_float(auxiliary.poincare_rhs),
        format_float(auxiliary.poincare_stderr),
        auxiliary.poincare_lhs <= auxiliary.poincare_rhs + 4.0 * auxiliary.poincare_stderr
    );
    text
}

fn write_output(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Output {
        path: path.to_path_buf(),
        source,
    })
}

/// `run` subcommand: one trace CSV.
pub fn cmd_run(cfg: &ExperimentConfig) -> Result<PathBuf, CliError> {
    cfg.validate()?;
    let trajectory = cfg.run_once()?;
    if trajectory.noise_warning {
        eprintln!(
            "warning: configured noise level exceeds the admissible level for the target accuracy"
        );
    }
    let path = cfg
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("trace.csv"));
    write_output(&path, &trace_csv(&trajectory, cfg.timing))?;
    Ok(path)
}

/// `sweep` subcommand: one trace per batch size plus a summary CSV.
pub fn cmd_sweep(cfg: &ExperimentConfig) -> Result<Vec<PathBuf>, CliError> {
    cfg.validate()?;
    let report = cfg.run_sweep()?;
    let prefix = cfg.out.clone().unwrap_or_else(|| PathBuf::from("sweep"));
    let stem = prefix.to_string_lossy().into_owned();
    let mut written = Vec::new();
    for entry in &report.entries {
        let path = PathBuf::from(format!("{stem}_b{}.csv", entry.batch));
        write_output(&path, &trace_csv(&entry.trajectory, cfg.timing))?;
        written.push(path);
    }
    let summary = PathBuf::from(format!("{stem}_summary.csv"));
    write_output(&summary, &sweep_summary_csv(&report))?;
    written.push(summary);
    Ok(written)
}

/// `theory` subcommand: the budget as pretty JSON.
pub fn cmd_theory(cfg: &ExperimentConfig) -> Result<String, CliError> {
    cfg.validate()?;
    Ok(cfg.theory_budget()?.to_json())
}

/// `verify` subcommand: grid plus auxiliary checks; returns the CSV path
/// and whether every report passed.
pub fn cmd_verify(cfg: &ExperimentConfig) -> Result<(PathBuf, bool), CliError> {
    cfg.validate()?;
    let cells = run_verification_grid(cfg.seed, cfg.verify_samples);
    let auxiliary = check_auxiliary_inequalities(cfg.seed, cfg.verify_samples.max(1000));
    let all_pass = cells.iter().all(|c| c.report.pass) && auxiliary.pass;
    let path = cfg
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("verification.csv"));
    write_output(&path, &verification_csv(&cells, &auxiliary))?;
    Ok((path, all_pass))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_temp_config(contents: &str) -> tempfile::NamedTempFile {
        use std::io::Write;
        let mut file = tempfile::NamedTempFile::new().unwrap();
        file.write_all(contents.as_bytes()).unwrap();
        file
    }

    #[test]
    fn reproduction_config_is_accepted() {
        let file = write_temp_config(
            "# convergence study\n\
             dim = 256\n\
             samples = 128\n\
             tau = 1e-3\n\
             gamma = 1e-4\n\
             batch = 16\n\
             mode = fixed_gamma\n\
             noise_kind = machine_epsilon\n\
             horizon = 20000\n",
        );
        let cfg = ExperimentConfig::from_file(file.path()).unwrap();
        cfg.validate().unwrap();
        assert_eq!(cfg.dim, 256);
        assert_eq!(cfg.samples, 128);
        assert_eq!(cfg.mode, StepMode::FixedGamma);
        assert_eq!(cfg.noise_kind, NoiseKind::MachineEpsilon);
    }

    #[test]
    fn zero_batch_is_rejected_by_name() {
        let mut cfg = ExperimentConfig::default();
        cfg.apply("batch", "0").unwrap();
        let err = cfg.validate().unwrap_err();
        assert!(err.to_string().contains("batch must be >= 1"), "{err}");
    }

    #[test]
    fn negative_tau_is_rejected_by_name() {
        let mut cfg = ExperimentConfig::default();
        cfg.apply("tau", "-1").unwrap();
        let err = cfg.validate().unwrap_err();
        assert!(err.to_string().contains("tau"), "{err}");
    }

    #[test]
    fn unknown_keys_are_rejected_by_name() {
        let mut cfg = ExperimentConfig::default();
        let err = cfg.apply("stepsize", "0.1").unwrap_err();
        assert!(err.to_string().contains("stepsize"), "{err}");
    }

    #[test]
    fn fixed_gamma_requires_gamma() {
        let mut cfg = ExperimentConfig::default();
        cfg.apply("mode", "fixed_gamma").unwrap();
        let err = cfg.validate().unwrap_err();
        assert!(err.to_string().contains("gamma"));
    }

    #[test]
    fn trace_csv_has_header_only_for_zero_horizon() {
        let cfg = ExperimentConfig {
            dim: 8,
            samples: 4,
            horizon: 0,
            batch: 2,
            ..ExperimentConfig::default()
        };
        cfg.validate().unwrap();
        let trajectory = cfg.run_once().unwrap();
        let csv = trace_csv(&trajectory, false);
        assert_eq!(csv, format!("{TRACE_HEADER}\n"));
    }

    #[test]
    fn trace_csv_is_deterministic_without_timing() {
        let cfg = ExperimentConfig {
            dim: 16,
            samples: 8,
            horizon: 40,
            batch: 4,
            ..ExperimentConfig::default()
        };
        cfg.validate().unwrap();
        let a = trace_csv(&cfg.run_once().unwrap(), false);
        let b = trace_csv(&cfg.run_once().unwrap(), false);
        assert_eq!(a, b);
        assert!(a.lines().count() > 1);
    }

    #[test]
    fn trace_rows_strictly_increase_in_iteration() {
        let cfg = ExperimentConfig {
            dim: 16,
            samples: 8,
            horizon: 55,
            batch: 4,
            trace_every: Some(10),
            ..ExperimentConfig::default()
        };
        cfg.validate().unwrap();
        let trajectory = cfg.run_once().unwrap();
        let iterations: Vec<usize> = trajectory.rows.iter().map(|r| r.iteration).collect();
        let mut sorted = iterations.clone();
        sorted.dedup();
        assert_eq!(iterations, sorted);
        assert!(iterations.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn theory_budget_matches_worked_example() {
        let cfg = ExperimentConfig {
            dim: 100,
            samples: 50,
            epsilon: Some(0.01),
            smoothness: Some(1.0),
            radius: Some(1.0),
            sigma_star_sq: Some(0.0),
            ..ExperimentConfig::default()
        };
        cfg.validate().unwrap();
        let budget = cfg.theory_budget().unwrap();
        assert_eq!(budget.iterations, 10);
        assert_eq!(budget.batch, 10);
        assert_eq!(budget.total_calls, 100);
        assert!((budget.tau - 0.01).abs() <= 1e-15);
        assert!((budget.delta_max - 1e-6).abs() / 1e-6 <= 1e-12);
    }

    #[test]
    fn sgd_baseline_runs_from_config() {
        let cfg = ExperimentConfig {
            dim: 8,
            samples: 4,
            horizon: 50,
            batch: 4,
            method: Method::SgdBaseline,
            gamma: Some(1e-3),
            ..ExperimentConfig::default()
        };
        cfg.validate().unwrap();
        let trajectory = cfg.run_once().unwrap();
        assert!(trajectory.final_gap < trajectory.initial_gap);
    }
}
