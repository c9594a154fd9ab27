//! Accelerated zero-order stochastic gradient descent: the accelerated
//! skeleton driven by the batched two-point estimator instead of a
//! gradient oracle.
//!
//! Each iteration draws `B` direction/sample pairs from seeded
//! counter-addressed streams, forms the batched estimate at the query
//! point `x_md` with smoothing `tau`, and applies the descent,
//! projection, and aggregation updates. Every estimate costs two
//! zero-order queries, so a run reports both `N * B` estimator
//! evaluations and `2 * N * B` raw oracle calls.

use crate::acsa::{acsa_step, OptimizerState, RunError, Schedule, TraceBuilder, Trajectory};
use crate::estimator::{batched_estimate, EstimatorParams};
use crate::oracle::{NoiseModel, SampleStream};
use crate::point::Point;
use crate::problem::Objective;
use crate::rng::derive_seed;
use crate::sphere::DirectionStream;
use crate::theory;
use rayon::prelude::*;

const TAG_DIRECTIONS: u64 = 0x4449_5245;
const TAG_SAMPLES: u64 = 0x5A45_5441;

/// Full parameter set of one zero-order run.
#[derive(Clone, Debug)]
pub struct AzoConfig {
    pub schedule: Schedule,
    /// Smoothing parameter of the two-point estimator.
    pub tau: f64,
    pub noise: NoiseModel,
    pub seed: u64,
    pub x0: Point,
    pub trace_every: usize,
    /// Optional target accuracy; when set, the run flags configurations
    /// whose noise level exceeds the admissible level for this target.
    pub epsilon: Option<f64>,
}

impl AzoConfig {
    fn validate(&self) {
        assert!(self.tau > 0.0, "tau must be positive");
        assert!(self.trace_every >= 1, "trace_every must be >= 1");
        assert!(
            self.x0.norm() <= self.schedule.radius() * (1.0 + 1e-12),
            "start point lies outside the feasible ball"
        );
    }

    /// Same configuration with a different batch size; the schedule is
    /// rebuilt under its own policy.
    pub fn with_batch(&self, batch: usize) -> Self {
        let mut cfg = self.clone();
        cfg.schedule = self.schedule.with_batch(batch);
        cfg
    }
}

/// Runs the zero-order method for `schedule.horizon()` iterations and
/// returns the gap trace with both oracle-call counters.
pub fn run_azo_sgd<P: Objective + ?Sized>(
    problem: &P,
    cfg: &AzoConfig,
) -> Result<Trajectory, RunError> {
    cfg.validate();
    let schedule = &cfg.schedule;
    let batch = schedule.batch();
    let horizon = schedule.horizon();
    let params = EstimatorParams::new(cfg.tau, batch);
    let mut directions = DirectionStream::new(derive_seed(cfg.seed, TAG_DIRECTIONS), problem.dim());
    let mut samples = SampleStream::new(derive_seed(cfg.seed, TAG_SAMPLES), problem.sample_count());

    let mut state = OptimizerState::new(cfg.x0.clone());
    let initial_gap = problem.eval_full(&cfg.x0) - problem.f_star();
    let mut trace = TraceBuilder::new(problem, cfg.trace_every, horizon);
    let mut estimator_evals = 0u64;

    for _ in 0..horizon {
        acsa_step(&mut state, schedule, |x_md| {
            batched_estimate(
                problem,
                &cfg.noise,
                x_md,
                params,
                &mut directions,
                &mut samples,
            )
        })?;
        estimator_evals += batch as u64;
        state.oracle_calls = 2 * estimator_evals;
        trace.observe(&state, estimator_evals, 2 * estimator_evals);
    }

    let mut trajectory = trace.finish(state, estimator_evals, 2 * estimator_evals, initial_gap);
    trajectory.noise_warning = cfg.epsilon.is_some_and(|eps| {
        cfg.noise.level()
            > theory::max_noise(eps, schedule.smoothness(), schedule.radius(), problem.dim())
    });
    Ok(trajectory)
}

/// One entry of a batch-size sweep.
#[derive(Clone, Debug)]
pub struct SweepEntry {
    pub batch: usize,
    /// First iteration at which the gap fell to the relative threshold,
    /// if it did within the horizon.
    pub iterations_to_threshold: Option<usize>,
    pub estimator_evals: u64,
    pub raw_oracle_calls: u64,
    pub final_gap: f64,
    pub trajectory: Trajectory,
}

/// Result of sweeping the batch size with everything else held fixed.
#[derive(Clone, Debug)]
pub struct SweepReport {
    pub relative_threshold: f64,
    pub entries: Vec<SweepEntry>,
}

/// Runs one zero-order run per batch size, each from the identical seed,
/// and records iterations-to-threshold at `relative_threshold` times the
/// initial gap. Entries run in parallel; the report order follows the
/// input order, so the result is deterministic for a fixed seed.
pub fn run_batch_sweep<P: Objective>(
    problem: &P,
    template: &AzoConfig,
    batches: &[usize],
    relative_threshold: f64,
) -> Result<SweepReport, RunError> {
    assert!(!batches.is_empty(), "at least one batch size required");
    assert!(relative_threshold > 0.0, "threshold must be positive");
    let entries: Result<Vec<SweepEntry>, RunError> = batches
        .par_iter()
        .map(|&batch| {
            let cfg = template.with_batch(batch);
            let trajectory = run_azo_sgd(problem, &cfg)?;
            Ok(SweepEntry {
                batch,
                iterations_to_threshold: trajectory.iterations_to_relative_gap(relative_threshold),
                estimator_evals: trajectory.estimator_evals,
                raw_oracle_calls: trajectory.raw_oracle_calls,
                final_gap: trajectory.final_gap,
                trajectory,
            })
        })
        .collect();
    Ok(SweepReport {
        relative_threshold,
        entries: entries?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::acsa::{run_acsa, VarianceSource};
    use crate::oracle::BiasModel;
    use crate::problem::make_overparam_lsq;

    fn azo_config(schedule: Schedule, tau: f64, seed: u64, dim: usize) -> AzoConfig {
        AzoConfig {
            schedule,
            tau,
            noise: NoiseModel::zero(),
            seed,
            x0: Point::zeros(dim),
            trace_every: 1,
            epsilon: None,
        }
    }

    #[test]
    fn tiny_tau_full_batch_matches_first_order_limit() {
        // One-sample problem: the full pass and the sampled pass coincide,
        // so the only difference from the exact-gradient run is the
        // directional estimator itself, whose smoothing error is O(tau).
        let p = make_overparam_lsq(2, 1, 6, true).unwrap();
        let n = 600;
        let schedule = Schedule::paper(
            p.smoothness(),
            p.radius(),
            1,
            n,
            VarianceSource::SigmaStarSq(0.0),
        );
        let cfg = azo_config(schedule.clone(), 1e-8, 11, 2);
        let zero_order = run_azo_sgd(&p, &cfg).unwrap();
        let first_order =
            run_acsa(&p, &BiasModel::zero(), &schedule, &Point::zeros(2), 11, 1).unwrap();
        let tol = 1e-3 * zero_order.initial_gap;
        assert!(
            (zero_order.final_gap - first_order.final_gap).abs() <= tol,
            "gaps {} vs {} (initial {})",
            zero_order.final_gap,
            first_order.final_gap,
            zero_order.initial_gap
        );
    }

    #[test]
    fn smoothed_gap_decreases_under_fixed_step() {
        // Scaled-down version of the convergence study setup.
        let p = make_overparam_lsq(64, 32, 3, true).unwrap();
        let schedule = Schedule::fixed(1e-3, p.smoothness(), p.radius(), 16, 2000);
        let mut cfg = azo_config(schedule, 1e-3, 5, 64);
        cfg.noise = NoiseModel::machine_epsilon();
        let run = run_azo_sgd(&p, &cfg).unwrap();
        let smoothed = run.smoothed_gaps(10);
        let first = smoothed[0];
        let last = *smoothed.last().unwrap();
        assert!(
            last < first,
            "smoothed gap should decrease: {first} -> {last}"
        );
        let min = smoothed.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(min < 0.05 * first, "expected at least 20x decrease");
    }

    #[test]
    fn zero_horizon_returns_start_point_and_empty_trace() {
        let p = make_overparam_lsq(4, 2, 9, true).unwrap();
        let schedule = Schedule::paper(
            p.smoothness(),
            p.radius(),
            2,
            0,
            VarianceSource::SigmaStarSq(0.0),
        );
        let cfg = azo_config(schedule, 1e-3, 1, 4);
        let run = run_azo_sgd(&p, &cfg).unwrap();
        assert!(run.rows.is_empty());
        assert_eq!(run.final_point, Point::zeros(4));
        assert_eq!(run.raw_oracle_calls, 0);
    }

    #[test]
    fn oracle_accounting_is_exact() {
        let p = make_overparam_lsq(8, 4, 2, true).unwrap();
        let schedule = Schedule::paper(
            p.smoothness(),
            p.radius(),
            3,
            17,
            VarianceSource::SigmaStarSq(0.0),
        );
        let cfg = azo_config(schedule, 1e-3, 8, 8);
        let run = run_azo_sgd(&p, &cfg).unwrap();
        assert_eq!(run.estimator_evals, 3 * 17);
        assert_eq!(run.raw_oracle_calls, 2 * 3 * 17);
        assert_eq!(run.rows.last().unwrap().raw_oracle_calls, 2 * 3 * 17);
    }

    #[test]
    fn identical_configs_reproduce_bitwise() {
        let p = make_overparam_lsq(16, 8, 4, true).unwrap();
        let schedule = Schedule::paper(
            p.smoothness(),
            p.radius(),
            4,
            50,
            VarianceSource::SigmaStarSq(0.0),
        );
        let cfg = azo_config(schedule, 1e-3, 123, 16);
        let a = run_azo_sgd(&p, &cfg).unwrap();
        let b = run_azo_sgd(&p, &cfg).unwrap();
        assert_eq!(a.final_point, b.final_point);
        let gaps_a: Vec<u64> = a.rows.iter().map(|r| r.gap.to_bits()).collect();
        let gaps_b: Vec<u64> = b.rows.iter().map(|r| r.gap.to_bits()).collect();
        assert_eq!(gaps_a, gaps_b);
    }

    #[test]
    fn noise_warning_follows_the_admissible_level() {
        let p = make_overparam_lsq(8, 4, 11, true).unwrap();
        let schedule = Schedule::paper(
            p.smoothness(),
            p.radius(),
            2,
            10,
            VarianceSource::SigmaStarSq(0.0),
        );
        let mut cfg = azo_config(schedule, 1e-3, 2, 8);
        cfg.epsilon = Some(1e-3);
        cfg.noise = NoiseModel::oscillation_for_tau(1.0, 1e-3);
        let noisy = run_azo_sgd(&p, &cfg).unwrap();
        assert!(noisy.noise_warning);
        cfg.noise = NoiseModel::zero();
        let clean = run_azo_sgd(&p, &cfg).unwrap();
        assert!(!clean.noise_warning);
    }

    #[test]
    fn repeated_batch_entries_are_identical() {
        let p = make_overparam_lsq(8, 4, 10, true).unwrap();
        let schedule = Schedule::paper(
            p.smoothness(),
            p.radius(),
            4,
            40,
            VarianceSource::SigmaStarSq(0.0),
        );
        let cfg = azo_config(schedule, 1e-3, 31, 8);
        let report = run_batch_sweep(&p, &cfg, &[4, 4], 1e-3).unwrap();
        assert_eq!(report.entries[0].final_gap, report.entries[1].final_gap);
        assert_eq!(
            report.entries[0].iterations_to_threshold,
            report.entries[1].iterations_to_threshold
        );
    }

    #[test]
    fn singleton_sweep_equals_a_single_run() {
        let p = make_overparam_lsq(4, 2, 10, true).unwrap();
        let schedule = Schedule::paper(
            p.smoothness(),
            p.radius(),
            1,
            30,
            VarianceSource::SigmaStarSq(0.0),
        );
        let cfg = azo_config(schedule, 1e-3, 77, 4);
        let report = run_batch_sweep(&p, &cfg, &[1], 1e-3).unwrap();
        let single = run_azo_sgd(&p, &cfg).unwrap();
        assert_eq!(report.entries[0].final_gap, single.final_gap);
        assert_eq!(report.entries[0].raw_oracle_calls, single.raw_oracle_calls);
    }

    #[test]
    fn projection_invariant_holds_under_heavy_noise() {
        let p = make_overparam_lsq(8, 4, 13, true).unwrap();
        let schedule = Schedule::paper(
            p.smoothness(),
            p.radius(),
            2,
            100,
            VarianceSource::SigmaStarSq(0.0),
        );
        let mut cfg = azo_config(schedule, 1e-4, 3, 8);
        cfg.noise = NoiseModel::oscillation_for_tau(10.0, 1e-4);
        let run = run_azo_sgd(&p, &cfg).unwrap();
        assert!(run.max_iterate_norm <= p.radius() + 1e-12);
    }
}
