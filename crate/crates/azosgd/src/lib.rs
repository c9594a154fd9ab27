//! Zero-order stochastic convex optimization under bounded adversarial
//! oracle noise.
//!
//! The crate centers on two optimizers over a finite-sum objective
//! `f(x) = E_xi[f(x, xi)]` constrained to a Euclidean ball:
//!
//! - **Biased accelerated SGD** ([`acsa`]): the momentum method driven by
//!   a batched first-order oracle whose gradients may carry a bounded
//!   deterministic bias `b(x)` with `||b(x)|| <= zeta`.
//! - **Accelerated zero-order SGD** ([`azo`]): the same skeleton driven
//!   only by noisy function values `f(x, xi) + delta(x)`,
//!   `|delta(x)| <= Delta`, through the two-point estimator
//!   `(d / 2 tau) (f_delta(x + tau e, xi) - f_delta(x - tau e, xi)) e`
//!   with directions `e` uniform on the unit sphere ([`estimator`],
//!   [`sphere`]).
//!
//! [`theory`] computes the closed-form budgets (iterations, batch size,
//! total calls, smoothing parameter, admissible noise) for a target
//! accuracy, [`verify`] checks the estimator's bias and second-moment
//! bounds by Monte Carlo, and [`experiment`] drives seeded runs, batch
//! sweeps, and CSV emission. Runnable walkthroughs for each capability
//! live under `examples/`.
//!
//! ```
//! use azosgd::{
//!     acsa::{Schedule, VarianceSource},
//!     azo::{run_azo_sgd, AzoConfig},
//!     oracle::NoiseModel,
//!     point::Point,
//!     problem::{make_overparam_lsq, Objective},
//! };
//!
//! let problem = make_overparam_lsq(16, 8, 7, true).unwrap();
//! let schedule = Schedule::paper(
//!     problem.smoothness(),
//!     problem.radius(),
//!     8,
//!     200,
//!     VarianceSource::SigmaStarSq(problem.sigma_star_sq()),
//! );
//! let cfg = AzoConfig {
//!     schedule,
//!     tau: 1e-3,
//!     noise: NoiseModel::zero(),
//!     seed: 1,
//!     x0: Point::zeros(16),
//!     trace_every: 10,
//!     epsilon: None,
//! };
//! let run = run_azo_sgd(&problem, &cfg).unwrap();
//! assert!(run.final_gap < run.initial_gap);
//! ```

pub mod acsa;
pub mod azo;
pub mod estimator;
pub mod experiment;
pub mod oracle;
pub mod point;
pub mod problem;
mod rng;
pub mod sphere;
pub mod theory;
pub mod verify;

pub use acsa::{
    project_ball, run_acsa, run_fixed_step_sgd, OptimizerState, RunError, Schedule, StepMode,
    Trajectory, VarianceSource,
};
pub use azo::{run_azo_sgd, run_batch_sweep, AzoConfig, SweepReport};
pub use estimator::{batched_estimate, two_point_estimate, EstimatorParams};
pub use oracle::{
    batched_biased_grad, biased_grad, zero_order_eval, BiasModel, NoiseModel, SampleStream,
};
pub use point::Point;
pub use problem::{make_overparam_lsq, Objective, ProblemError, ProblemInstance};
pub use sphere::DirectionStream;
pub use theory::TheoryBudget;
pub use verify::{check_auxiliary_inequalities, mc_bias, mc_second_moment, McReport};
