//! One gradient-free run: the accelerated skeleton driven purely by
//! noisy function values, with the trace written as CSV.
//!
//! ```bash
//! cargo run --release --example zero_order_descent
//! ```

use azosgd::acsa::{Schedule, VarianceSource};
use azosgd::azo::{run_azo_sgd, AzoConfig};
use azosgd::experiment::trace_csv;
use azosgd::oracle::NoiseModel;
use azosgd::point::Point;
use azosgd::problem::{make_overparam_lsq, Objective};

fn main() {
    let problem = make_overparam_lsq(64, 32, 5, true).unwrap();
    let horizon = 3_000;
    let cfg = AzoConfig {
        schedule: Schedule::paper(
            problem.smoothness(),
            problem.radius(),
            16,
            horizon,
            VarianceSource::SigmaStarSq(problem.sigma_star_sq()),
        ),
        tau: 1e-3,
        noise: NoiseModel::oscillation_for_tau(1e-6, 1e-3),
        seed: 17,
        x0: Point::zeros(64),
        trace_every: 1,
        epsilon: None,
    };
    let run = run_azo_sgd(&problem, &cfg).unwrap();

    println!("initial gap: {:.4e}", run.initial_gap);
    for row in run.rows.iter().step_by(300) {
        println!(
            "iteration {:>5}: gap {:.4e} ({} function calls)",
            row.iteration, row.gap, row.raw_oracle_calls
        );
    }
    println!(
        "final gap: {:.4e} after {} estimator evaluations = {} raw calls",
        run.final_gap, run.estimator_evals, run.raw_oracle_calls
    );
    println!(
        "largest iterate norm: {:.4} (ball radius {:.4})",
        run.max_iterate_norm,
        problem.radius()
    );

    let path = std::env::temp_dir().join("zero_order_trace.csv");
    std::fs::write(&path, trace_csv(&run, false)).unwrap();
    println!("trace written to {}", path.display());
}
