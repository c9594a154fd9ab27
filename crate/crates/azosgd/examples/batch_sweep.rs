//! Effect of the batch size on iteration complexity: the convergence
//! study in miniature. Larger batches reach a fixed relative gap in
//! fewer iterations (at more function calls per iteration).
//!
//! ```bash
//! cargo run --release --example batch_sweep
//! ```

use azosgd::acsa::Schedule;
use azosgd::azo::{run_batch_sweep, AzoConfig};
use azosgd::experiment::sweep_summary_csv;
use azosgd::oracle::NoiseModel;
use azosgd::problem::{make_overparam_lsq, Objective};
use azosgd::sphere::DirectionStream;

fn main() {
    // Same shape as the full study (d = 256, m = 128, fixed step 1e-4,
    // smoothing 1e-3) at a horizon that keeps this example quick.
    let problem = make_overparam_lsq(256, 128, 1, true).unwrap();
    let x0 = DirectionStream::new(1001, 256)
        .direction_at(0)
        .scaled(problem.radius());
    let template = AzoConfig {
        schedule: Schedule::fixed(1e-4, problem.smoothness(), problem.radius(), 16, 4_000),
        tau: 1e-3,
        noise: NoiseModel::machine_epsilon(),
        seed: 1,
        x0,
        trace_every: 1,
        epsilon: None,
    };

    let threshold = 0.15;
    let report = run_batch_sweep(&problem, &template, &[8, 16, 64], threshold).unwrap();
    println!("relative gap threshold: {threshold}");
    println!(
        "{:>6} {:>24} {:>16} {:>12}",
        "batch", "iterations_to_threshold", "raw_calls", "final_gap"
    );
    for entry in &report.entries {
        println!(
            "{:>6} {:>24} {:>16} {:>12.4e}",
            entry.batch,
            entry
                .iterations_to_threshold
                .map(|i| i.to_string())
                .unwrap_or_else(|| "not reached".into()),
            entry.raw_oracle_calls,
            entry.final_gap
        );
    }

    let path = std::env::temp_dir().join("batch_sweep_summary.csv");
    std::fs::write(&path, sweep_summary_csv(&report)).unwrap();
    println!("summary written to {}", path.display());
}
