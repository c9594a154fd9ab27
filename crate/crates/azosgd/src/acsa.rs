//! Accelerated stochastic gradient descent with a biased batched
//! gradient oracle, projected onto a Euclidean ball.
//!
//! The method keeps three coupled sequences: the descent iterate `x_k`,
//! the aggregate output iterate `x_k^ag`, and the query point `x_k^md`.
//! One iteration with momentum weight `beta_k = 1 + k/6` and step
//! `gamma_k` does
//!
//! ```text
//! x_md   = beta_k^-1 x + (1 - beta_k^-1) x_ag
//! g      = gradient supplier queried at x_md
//! x_next = project_ball(x - gamma_k g, R)
//! x_ag   = beta_k^-1 x_next + (1 - beta_k^-1) x_ag
//! ```
//!
//! The gradient supplier is pluggable: a biased first-order mini-batch
//! here, or the batched two-point estimator in [`crate::azo`].

use crate::oracle::{batched_biased_grad, BiasModel, SampleStream};
use crate::point::Point;
use crate::problem::Objective;
use crate::rng::derive_seed;
use std::time::Instant;
use thiserror::Error;

const TAG_SAMPLES: u64 = 0x5849_5354;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("non-finite gradient at iteration {iteration} (norm {grad_norm})")]
    NonFiniteGradient { iteration: usize, grad_norm: f64 },
}

/// How the per-iteration step size is derived from the base step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepMode {
    /// `gamma_k = gamma (k+1)` with `gamma` capped by the schedule rule.
    PaperSchedule,
    /// `gamma_k = gamma`, a user-supplied constant.
    FixedGamma,
}

/// Which variance proxy feeds the third term of the base-step cap.
///
/// The cap's third term is `sqrt(B R^2 / (V N^3))` with `V = L f*` for
/// `FStar` and `V = sigma*^2` for `SigmaStarSq`; a zero proxy drops the
/// term. The two choices coincide up to a constant because
/// `sigma*^2 <= 2 L f*`.
#[derive(Clone, Copy, Debug)]
pub enum VarianceSource {
    FStar(f64),
    SigmaStarSq(f64),
}

impl VarianceSource {
    fn proxy(&self, smoothness: f64) -> f64 {
        match self {
            VarianceSource::FStar(f_star) => {
                assert!(*f_star >= 0.0, "f_star must be non-negative");
                smoothness * f_star
            }
            VarianceSource::SigmaStarSq(s) => {
                assert!(*s >= 0.0, "sigma_star_sq must be non-negative");
                *s
            }
        }
    }
}

/// Step and momentum schedule of one run.
#[derive(Clone, Debug)]
pub struct Schedule {
    gamma_base: f64,
    smoothness: f64,
    radius: f64,
    batch: usize,
    horizon: usize,
    variance_source: VarianceSource,
    mode: StepMode,
}

impl Schedule {
    /// Schedule with the base step capped as
    /// `gamma = min{ 1/(12 L), B/(24 L (N+1)), sqrt(B R^2 / (V N^3)) }`,
    /// which guarantees `2 L gamma_k <= beta_k` for every `k < N`.
    pub fn paper(
        smoothness: f64,
        radius: f64,
        batch: usize,
        horizon: usize,
        variance_source: VarianceSource,
    ) -> Self {
        assert!(smoothness > 0.0, "smoothness must be positive");
        assert!(radius > 0.0, "radius must be positive");
        assert!(batch >= 1, "batch must be >= 1");
        let b = batch as f64;
        let n = horizon as f64;
        let mut gamma = (1.0 / (12.0 * smoothness)).min(b / (24.0 * smoothness * (n + 1.0)));
        let proxy = variance_source.proxy(smoothness);
        if proxy > 0.0 && horizon > 0 {
            gamma = gamma.min((b * radius * radius / (proxy * n * n * n)).sqrt());
        }
        Self {
            gamma_base: gamma,
            smoothness,
            radius,
            batch,
            horizon,
            variance_source,
            mode: StepMode::PaperSchedule,
        }
    }

    /// Constant-step schedule; the caller owns stability.
    pub fn fixed(gamma: f64, smoothness: f64, radius: f64, batch: usize, horizon: usize) -> Self {
        assert!(gamma > 0.0, "gamma must be positive");
        assert!(smoothness > 0.0, "smoothness must be positive");
        assert!(radius > 0.0, "radius must be positive");
        assert!(batch >= 1, "batch must be >= 1");
        Self {
            gamma_base: gamma,
            smoothness,
            radius,
            batch,
            horizon,
            variance_source: VarianceSource::SigmaStarSq(0.0),
            mode: StepMode::FixedGamma,
        }
    }

    /// `(beta_k, gamma_k)` for iteration `k`.
    pub fn schedule_at(&self, k: usize) -> (f64, f64) {
        assert!(
            k < self.horizon,
            "iteration {k} out of range for horizon {}",
            self.horizon
        );
        let beta = 1.0 + k as f64 / 6.0;
        let gamma_k = match self.mode {
            StepMode::PaperSchedule => self.gamma_base * (k as f64 + 1.0),
            StepMode::FixedGamma => self.gamma_base,
        };
        (beta, gamma_k)
    }

    /// Same schedule policy for a different batch size; the capped base
    /// step is recomputed, a fixed step is kept.
    pub fn with_batch(&self, batch: usize) -> Self {
        match self.mode {
            StepMode::PaperSchedule => Self::paper(
                self.smoothness,
                self.radius,
                batch,
                self.horizon,
                self.variance_source,
            ),
            StepMode::FixedGamma => {
                let mut s = self.clone();
                s.batch = batch;
                s
            }
        }
    }

    pub fn gamma_base(&self) -> f64 {
        self.gamma_base
    }

    pub fn smoothness(&self) -> f64 {
        self.smoothness
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn batch(&self) -> usize {
        self.batch
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn mode(&self) -> StepMode {
        self.mode
    }
}

/// Euclidean projection onto the ball of the given radius: returns `x`
/// unchanged when `||x|| <= radius`, otherwise scales it onto the
/// boundary. Idempotent.
pub fn project_ball(x: &Point, radius: f64) -> Point {
    assert!(radius > 0.0, "radius must be positive");
    let norm = x.norm();
    if norm <= radius {
        x.clone()
    } else {
        x.scaled(radius / norm)
    }
}

/// The `(x_k, x_k^ag, x_k^md)` triple plus counters.
#[derive(Clone, Debug)]
pub struct OptimizerState {
    pub x: Point,
    pub x_ag: Point,
    pub x_md: Point,
    pub k: usize,
    pub oracle_calls: u64,
}

impl OptimizerState {
    pub fn new(x0: Point) -> Self {
        Self {
            x_ag: x0.clone(),
            x_md: x0.clone(),
            x: x0,
            k: 0,
            oracle_calls: 0,
        }
    }
}

/// One iteration of the accelerated update; queries the supplier exactly
/// once, at the freshly computed query point.
pub fn acsa_step<F>(
    state: &mut OptimizerState,
    schedule: &Schedule,
    mut grad_supplier: F,
) -> Result<(), RunError>
where
    F: FnMut(&Point) -> Point,
{
    let (beta, gamma_k) = schedule.schedule_at(state.k);
    let beta_inv = 1.0 / beta;
    state.x_md = Point::combine(beta_inv, &state.x, 1.0 - beta_inv, &state.x_ag);
    let g = grad_supplier(&state.x_md);
    if !g.is_finite() {
        return Err(RunError::NonFiniteGradient {
            iteration: state.k,
            grad_norm: g.norm(),
        });
    }
    let x_next = project_ball(&state.x.add_scaled(-gamma_k, &g), schedule.radius());
    state.x_ag = Point::combine(beta_inv, &x_next, 1.0 - beta_inv, &state.x_ag);
    state.x = x_next;
    state.k += 1;
    Ok(())
}

/// One sampled row of a run trace.
#[derive(Clone, Debug)]
pub struct TraceRow {
    pub iteration: usize,
    /// `f(x^ag) - f*`.
    pub gap: f64,
    /// `f(x^ag)`.
    pub value: f64,
    /// Gradient-estimate evaluations so far (one per batch element).
    pub estimator_evals: u64,
    /// Raw oracle queries so far; two function values per two-point
    /// estimate, one gradient per first-order batch element.
    pub raw_oracle_calls: u64,
    /// Elapsed wall time since the start of the run.
    pub wall_ns: u64,
}

/// Result of an optimizer run: the sampled gap trace plus the final
/// aggregate iterate and cost counters.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub rows: Vec<TraceRow>,
    pub final_point: Point,
    pub final_value: f64,
    pub final_gap: f64,
    pub initial_gap: f64,
    pub estimator_evals: u64,
    pub raw_oracle_calls: u64,
    /// Largest iterate or aggregate norm observed, for projection audits.
    pub max_iterate_norm: f64,
    /// Set when the configured noise level exceeds the admissible level
    /// for the configured target accuracy.
    pub noise_warning: bool,
}

impl Trajectory {
    /// First traced iteration whose gap is at or below
    /// `relative * initial_gap`.
    pub fn iterations_to_relative_gap(&self, relative: f64) -> Option<usize> {
        let threshold = relative * self.initial_gap;
        self.rows
            .iter()
            .find(|row| row.gap <= threshold)
            .map(|row| row.iteration)
    }

    /// Rolling means of the traced gaps over the given window length.
    pub fn smoothed_gaps(&self, window: usize) -> Vec<f64> {
        assert!(window >= 1, "window must be >= 1");
        if self.rows.len() < window {
            return Vec::new();
        }
        let gaps: Vec<f64> = self.rows.iter().map(|r| r.gap).collect();
        gaps.windows(window)
            .map(|w| w.iter().sum::<f64>() / window as f64)
            .collect()
    }
}

/// Default trace stride: every iteration up to 1000, then thinned so a
/// trace never exceeds about 1000 rows.
pub fn default_trace_every(horizon: usize) -> usize {
    if horizon <= 1000 {
        1
    } else {
        horizon.div_ceil(1000)
    }
}

pub(crate) struct TraceBuilder<'a, P: Objective + ?Sized> {
    problem: &'a P,
    trace_every: usize,
    horizon: usize,
    started: Instant,
    rows: Vec<TraceRow>,
    max_norm: f64,
}

impl<'a, P: Objective + ?Sized> TraceBuilder<'a, P> {
    pub(crate) fn new(problem: &'a P, trace_every: usize, horizon: usize) -> Self {
        assert!(trace_every >= 1, "trace_every must be >= 1");
        Self {
            problem,
            trace_every,
            horizon,
            started: Instant::now(),
            rows: Vec::new(),
            max_norm: 0.0,
        }
    }

    pub(crate) fn observe(&mut self, state: &OptimizerState, estimator_evals: u64, raw_calls: u64) {
        self.max_norm = self.max_norm.max(state.x.norm()).max(state.x_ag.norm());
        let iteration = state.k;
        if iteration.is_multiple_of(self.trace_every) || iteration == self.horizon {
            let value = self.problem.eval_full(&state.x_ag);
            self.rows.push(TraceRow {
                iteration,
                gap: value - self.problem.f_star(),
                value,
                estimator_evals,
                raw_oracle_calls: raw_calls,
                wall_ns: self.started.elapsed().as_nanos() as u64,
            });
        }
    }

    pub(crate) fn finish(
        self,
        state: OptimizerState,
        estimator_evals: u64,
        raw_calls: u64,
        initial_gap: f64,
    ) -> Trajectory {
        let final_value = self.problem.eval_full(&state.x_ag);
        Trajectory {
            rows: self.rows,
            final_gap: final_value - self.problem.f_star(),
            final_value,
            final_point: state.x_ag,
            initial_gap,
            estimator_evals,
            raw_oracle_calls: raw_calls,
            max_iterate_norm: self.max_norm,
            noise_warning: false,
        }
    }
}

/// Draws one mini-batch of sample indices. A batch equal to the sample
/// count is the deterministic full pass; smaller batches are uniform
/// draws from the stream.
pub(crate) fn draw_batch(
    stream: &mut SampleStream,
    batch: usize,
    sample_count: usize,
) -> Vec<usize> {
    if batch == sample_count {
        (0..sample_count).collect()
    } else {
        (0..batch).map(|_| stream.next_index()).collect()
    }
}

/// Runs the biased accelerated method with the first-order mini-batch
/// oracle for `schedule.horizon()` iterations.
///
/// Samples are drawn from a stream derived from `seed`; a batch equal to
/// the sample count uses every sample deterministically instead.
pub fn run_acsa<P: Objective + ?Sized>(
    problem: &P,
    bias: &BiasModel,
    schedule: &Schedule,
    x0: &Point,
    seed: u64,
    trace_every: usize,
) -> Result<Trajectory, RunError> {
    assert!(
        x0.norm() <= schedule.radius() * (1.0 + 1e-12),
        "start point lies outside the feasible ball"
    );
    let batch = schedule.batch();
    let m = problem.sample_count();
    let mut stream = SampleStream::new(derive_seed(seed, TAG_SAMPLES), m);
    let mut state = OptimizerState::new(x0.clone());
    let initial_gap = problem.eval_full(x0) - problem.f_star();
    let mut trace = TraceBuilder::new(problem, trace_every, schedule.horizon());
    let mut grad_evals = 0u64;

    for _ in 0..schedule.horizon() {
        let indices = draw_batch(&mut stream, batch, m);
        acsa_step(&mut state, schedule, |x_md| {
            batched_biased_grad(problem, bias, x_md, &indices)
        })?;
        grad_evals += batch as u64;
        state.oracle_calls = grad_evals;
        trace.observe(&state, grad_evals, grad_evals);
    }
    Ok(trace.finish(state, grad_evals, grad_evals, initial_gap))
}

/// Plain projected SGD with a constant step, as a reference point for the
/// accelerated method at the same oracle budget.
#[allow(clippy::too_many_arguments)]
pub fn run_fixed_step_sgd<P: Objective + ?Sized>(
    problem: &P,
    step: f64,
    batch: usize,
    horizon: usize,
    radius: f64,
    x0: &Point,
    seed: u64,
    trace_every: usize,
) -> Result<Trajectory, RunError> {
    assert!(step > 0.0, "step must be positive");
    assert!(batch >= 1, "batch must be >= 1");
    assert!(radius > 0.0, "radius must be positive");
    assert!(
        x0.norm() <= radius * (1.0 + 1e-12),
        "start point lies outside the feasible ball"
    );
    let m = problem.sample_count();
    let mut stream = SampleStream::new(derive_seed(seed, TAG_SAMPLES), m);
    let mut state = OptimizerState::new(x0.clone());
    let initial_gap = problem.eval_full(x0) - problem.f_star();
    let mut trace = TraceBuilder::new(problem, trace_every, horizon);
    let mut grad_evals = 0u64;

    for _ in 0..horizon {
        let indices = draw_batch(&mut stream, batch, m);
        let g = batched_biased_grad(problem, &BiasModel::Zero, &state.x, &indices);
        if !g.is_finite() {
            return Err(RunError::NonFiniteGradient {
                iteration: state.k,
                grad_norm: g.norm(),
            });
        }
        state.x = project_ball(&state.x.add_scaled(-step, &g), radius);
        state.x_ag = state.x.clone();
        state.x_md = state.x.clone();
        state.k += 1;
        grad_evals += batch as u64;
        state.oracle_calls = grad_evals;
        trace.observe(&state, grad_evals, grad_evals);
    }
    Ok(trace.finish(state, grad_evals, grad_evals, initial_gap))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{make_overparam_lsq, Objective, ProblemInstance};
    use crate::rng::{block_rng, standard_normal};

    fn quadratic_1d() -> ProblemInstance {
        // f(x) = x^2 / 2, so L = 1.
        ProblemInstance::from_rows(
            &[vec![std::f64::consts::FRAC_1_SQRT_2]],
            vec![0.0],
            10.0,
            Some(Point::zeros(1)),
        )
    }

    #[test]
    fn schedule_values_at_small_k() {
        let s = Schedule::paper(1.0, 1.0, 8, 100, VarianceSource::FStar(0.0));
        let (beta0, gamma0) = s.schedule_at(0);
        assert_eq!(beta0, 1.0);
        assert_eq!(gamma0, s.gamma_base());
        let (beta6, _) = s.schedule_at(6);
        assert_eq!(beta6, 2.0);
    }

    #[test]
    fn base_step_takes_the_binding_cap() {
        let s = Schedule::paper(1.0, 1.0, 8, 100, VarianceSource::FStar(0.0));
        assert_eq!(s.gamma_base(), 8.0 / 2424.0);
    }

    #[test]
    #[should_panic(expected = "out of range")]
    fn schedule_rejects_out_of_range_iteration() {
        let s = Schedule::paper(1.0, 1.0, 1, 10, VarianceSource::SigmaStarSq(0.0));
        s.schedule_at(10);
    }

    #[test]
    fn schedule_inequality_holds_for_paper_mode() {
        for (l, b, n) in [(1.0, 1, 50), (64.0, 8, 400), (0.5, 128, 1000)] {
            for source in [VarianceSource::FStar(0.3), VarianceSource::SigmaStarSq(2.0)] {
                let s = Schedule::paper(l, 2.0, b, n, source);
                for k in 0..n {
                    let (beta, gamma_k) = s.schedule_at(k);
                    assert!(
                        2.0 * l * gamma_k <= beta + 1e-12,
                        "violated at k={k} for L={l}, B={b}, N={n}"
                    );
                }
            }
        }
    }

    #[test]
    fn projection_leaves_interior_points_untouched() {
        let x = Point::from_vec(vec![0.3, -0.4]);
        let projected = project_ball(&x, 1.0);
        assert_eq!(projected, x);
    }

    #[test]
    fn projection_rescales_exterior_points() {
        let x = Point::from_vec(vec![4.0, 0.0, 0.0]);
        let projected = project_ball(&x, 2.0);
        assert_eq!(projected, Point::from_vec(vec![2.0, 0.0, 0.0]));
    }

    #[test]
    fn projection_property_on_seeded_points() {
        let radius = 1.5;
        for t in 0..10_000u64 {
            let mut rng = block_rng(2000 + t, 0);
            let x = Point::from_vec((0..5).map(|_| 2.0 * standard_normal(&mut rng)).collect());
            let p = project_ball(&x, radius);
            assert!(p.norm() <= radius + 1e-12);
            if x.norm() <= radius {
                assert_eq!(p, x);
            }
            // Idempotent up to one rescaling rounding error.
            let again = project_ball(&p, radius);
            assert!(
                again.sub(&p).norm() <= 1e-14 * radius,
                "idempotence at trial {t}"
            );
        }
    }

    #[test]
    fn first_step_collapses_the_averaging() {
        let p = quadratic_1d();
        let schedule = Schedule::paper(1.0, 10.0, 1, 10, VarianceSource::FStar(0.0));
        let mut state = OptimizerState::new(Point::from_vec(vec![1.0]));
        acsa_step(&mut state, &schedule, |x_md| {
            assert_eq!(x_md[0], 1.0, "beta_0 = 1 forces x_md = x_0");
            p.grad_full(x_md)
        })
        .unwrap();
        assert_eq!(state.x_ag, state.x, "beta_0 = 1 forces x_1^ag = x_1");
    }

    #[test]
    fn zero_gradient_is_a_fixed_point_of_the_descent_iterate() {
        let schedule = Schedule::paper(1.0, 10.0, 1, 10, VarianceSource::FStar(0.0));
        let x0 = Point::from_vec(vec![2.0, -1.0]);
        let mut state = OptimizerState::new(x0.clone());
        state.x_ag = Point::zeros(2);
        for _ in 0..5 {
            let before_ag = state.x_ag.clone();
            acsa_step(&mut state, &schedule, |x| Point::zeros(x.dim())).unwrap();
            assert_eq!(state.x, x0);
            let toward = x0.sub(&before_ag).norm();
            let after = x0.sub(&state.x_ag).norm();
            assert!(after <= toward, "aggregate should drift toward x");
        }
    }

    #[test]
    fn non_finite_gradient_aborts_with_diagnostics() {
        let schedule = Schedule::paper(1.0, 10.0, 1, 10, VarianceSource::FStar(0.0));
        let mut state = OptimizerState::new(Point::zeros(2));
        let err = acsa_step(&mut state, &schedule, |x| {
            let mut g = Point::zeros(x.dim());
            g[0] = f64::NAN;
            g
        })
        .unwrap_err();
        assert!(err.to_string().contains("iteration 0"));
    }

    #[test]
    fn step_matches_hand_rolled_loop() {
        // Straight-line transcription of the update rules, kept
        // independent of the implementation above.
        let p = quadratic_1d();
        let (l, r, n) = (1.0, 10.0, 10usize);
        let schedule = Schedule::paper(l, r, 1, n, VarianceSource::FStar(0.0));
        let mut state = OptimizerState::new(Point::from_vec(vec![1.0]));

        let gamma = (1.0f64 / (12.0 * l)).min(1.0 / (24.0 * l * (n as f64 + 1.0)));
        let mut x = 1.0f64;
        let mut x_ag = 1.0f64;
        for k in 0..n {
            let beta = 1.0 + k as f64 / 6.0;
            let gamma_k = gamma * (k as f64 + 1.0);
            let x_md = x / beta + (1.0 - 1.0 / beta) * x_ag;
            let g = p.grad_full(&Point::from_vec(vec![x_md]))[0];
            let mut x_next = x - gamma_k * g;
            let norm = x_next.abs();
            if norm > r {
                x_next *= r / norm;
            }
            x_ag = x_next / beta + (1.0 - 1.0 / beta) * x_ag;
            x = x_next;

            acsa_step(&mut state, &schedule, |q| p.grad_full(q)).unwrap();
            assert!(
                (state.x[0] - x).abs() <= 1e-12 * x.abs().max(1.0),
                "x diverged at k={k}: {} vs {x}",
                state.x[0]
            );
            assert!(
                (state.x_ag[0] - x_ag).abs() <= 1e-12 * x_ag.abs().max(1.0),
                "x_ag diverged at k={k}"
            );
        }
    }

    #[test]
    fn full_batch_run_decreases_with_horizon() {
        let p = make_overparam_lsq(8, 4, 55, true).unwrap();
        let x0 = Point::zeros(8);
        let run = |n: usize| {
            let schedule = Schedule::paper(
                p.smoothness(),
                p.radius(),
                4,
                n,
                VarianceSource::SigmaStarSq(p.sigma_star_sq()),
            );
            run_acsa(&p, &BiasModel::zero(), &schedule, &x0, 1, 1).unwrap()
        };
        let short = run(50);
        let long = run(200);
        assert!(long.final_gap < short.final_gap);
        assert!(long.final_gap < long.initial_gap);
        assert!(long.max_iterate_norm <= p.radius() + 1e-12);
    }

    #[test]
    fn large_bias_stays_bounded_by_projection() {
        let p = make_overparam_lsq(6, 3, 21, true).unwrap();
        let zeta = p.smoothness() * p.radius();
        let bias = BiasModel::fixed_vector(zeta, Point::basis(6, 1));
        let schedule = Schedule::paper(
            p.smoothness(),
            p.radius(),
            3,
            200,
            VarianceSource::SigmaStarSq(0.0),
        );
        let run = run_acsa(&p, &bias, &schedule, &Point::zeros(6), 3, 10).unwrap();
        assert!(run.final_gap.is_finite());
        assert!(run.max_iterate_norm <= p.radius() + 1e-12);
    }

    #[test]
    fn stochastic_run_matches_hand_rolled_transcription() {
        let p = make_overparam_lsq(4, 2, 77, true).unwrap();
        let n = 25;
        let schedule = Schedule::paper(
            p.smoothness(),
            p.radius(),
            1,
            n,
            VarianceSource::SigmaStarSq(p.sigma_star_sq()),
        );
        let x0 = Point::zeros(4);
        let seed = 5u64;
        let run = run_acsa(&p, &BiasModel::zero(), &schedule, &x0, seed, 1).unwrap();

        // Independent transcription sharing only the sample stream.
        let mut stream = SampleStream::new(derive_seed(seed, TAG_SAMPLES), 2);
        let mut x = x0.clone();
        let mut x_ag = x0.clone();
        let gamma = schedule.gamma_base();
        for k in 0..n {
            let beta = 1.0 + k as f64 / 6.0;
            let gamma_k = gamma * (k as f64 + 1.0);
            let x_md = Point::combine(1.0 / beta, &x, 1.0 - 1.0 / beta, &x_ag);
            let i = stream.next_index();
            let g = p.grad_sample(&x_md, i);
            let mut x_next = x.add_scaled(-gamma_k, &g);
            if x_next.norm() > p.radius() {
                x_next = x_next.scaled(p.radius() / x_next.norm());
            }
            x_ag = Point::combine(1.0 / beta, &x_next, 1.0 - 1.0 / beta, &x_ag);
            x = x_next;
        }
        let expected_gap = p.eval_full(&x_ag) - p.f_star();
        assert!(
            (run.final_gap - expected_gap).abs() <= 1e-12 * expected_gap.abs().max(1e-12),
            "{} vs {expected_gap}",
            run.final_gap
        );
    }

    #[test]
    fn aggregate_stays_in_the_ball() {
        let p = make_overparam_lsq(8, 4, 31, false).unwrap();
        let schedule = Schedule::paper(
            p.smoothness(),
            p.radius(),
            2,
            300,
            VarianceSource::SigmaStarSq(p.sigma_star_sq()),
        );
        let run = run_acsa(&p, &BiasModel::zero(), &schedule, &Point::zeros(8), 9, 1).unwrap();
        assert!(run.max_iterate_norm <= p.radius() + 1e-12);
        assert_eq!(run.rows.last().unwrap().iteration, 300);
        assert_eq!(run.estimator_evals, 600);
    }

    #[test]
    fn trace_rows_follow_the_stride_and_include_the_final_iteration() {
        let p = make_overparam_lsq(4, 2, 3, true).unwrap();
        let schedule = Schedule::paper(
            p.smoothness(),
            p.radius(),
            2,
            25,
            VarianceSource::SigmaStarSq(0.0),
        );
        let run = run_acsa(&p, &BiasModel::zero(), &schedule, &Point::zeros(4), 1, 10).unwrap();
        let iterations: Vec<usize> = run.rows.iter().map(|r| r.iteration).collect();
        assert_eq!(iterations, vec![10, 20, 25]);
    }

    #[test]
    fn sgd_baseline_descends_on_the_quadratic() {
        let p = make_overparam_lsq(8, 4, 12, true).unwrap();
        let run = run_fixed_step_sgd(
            &p,
            1.0 / p.smoothness(),
            4,
            200,
            p.radius(),
            &Point::zeros(8),
            4,
            1,
        )
        .unwrap();
        assert!(run.final_gap < 1e-2 * run.initial_gap);
        assert!(run.max_iterate_norm <= p.radius() + 1e-12);
    }

    #[test]
    fn default_trace_stride_bounds_row_count() {
        assert_eq!(default_trace_every(1000), 1);
        assert_eq!(default_trace_every(20_000), 20);
        assert_eq!(default_trace_every(1001), 2);
    }
}

#[cfg(test)]
mod schedule_props {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn paper_schedule_never_violates_the_momentum_cap(
            l in 0.01f64..100.0,
            r in 0.1f64..50.0,
            b in 1usize..256,
            n in 1usize..512,
            proxy in 0.0f64..10.0,
        ) {
            let s = Schedule::paper(l, r, b, n, VarianceSource::SigmaStarSq(proxy));
            for k in 0..n {
                let (beta, gamma_k) = s.schedule_at(k);
                prop_assert!(2.0 * l * gamma_k <= beta * (1.0 + 1e-12));
            }
        }

        #[test]
        fn projection_is_contractive_and_idempotent(
            coords in proptest::collection::vec(-100.0f64..100.0, 1..8),
            radius in 0.1f64..10.0,
        ) {
            let x = Point::from_vec(coords);
            let p = project_ball(&x, radius);
            prop_assert!(p.norm() <= radius + 1e-12);
            let again = project_ball(&p, radius);
            prop_assert!(again.sub(&p).norm() <= 1e-14 * radius);
        }
    }
}
