//! Running at, below, and far beyond the admissible adversarial noise
//! level for a target accuracy: up to the admissible level the final gap
//! is essentially unaffected; orders of magnitude beyond it the method
//! degrades (but stays bounded thanks to the ball projection).
//!
//! ```bash
//! cargo run --release --example noise_frontier
//! ```

use azosgd::acsa::{Schedule, VarianceSource};
use azosgd::azo::{run_azo_sgd, AzoConfig};
use azosgd::oracle::NoiseModel;
use azosgd::point::Point;
use azosgd::problem::{make_overparam_lsq, Objective};
use azosgd::theory;

fn main() {
    let problem = make_overparam_lsq(64, 32, 7, true).unwrap();
    let x0 = Point::zeros(64);
    let initial_gap = problem.eval_full(&x0) - problem.f_star();
    let epsilon = 1e-2 * initial_gap;
    let (l, r) = (problem.smoothness(), problem.radius());
    let n = theory::iterations(epsilon, l, r) as usize;
    let b = theory::batch_size(epsilon, l, r, 64, problem.sigma_star_sq()) as usize;
    let tau = theory::smoothing(epsilon, l, r);
    let delta_max = theory::max_noise(epsilon, l, r, 64);
    println!("target epsilon = {epsilon:.3e} (1% of the initial gap {initial_gap:.3e})");
    println!("budget: N = {n}, B = {b}, tau = {tau:.3e}, delta_max = {delta_max:.3e}");

    println!("\n{:>12} {:>14} {:>9}", "Delta", "final gap", "warning");
    for factor in [0.0, 0.1, 1.0, 1e2, 1e4] {
        let delta = factor * delta_max;
        let noise = if delta == 0.0 {
            NoiseModel::zero()
        } else {
            NoiseModel::oscillation_for_tau(delta, tau)
        };
        let cfg = AzoConfig {
            schedule: Schedule::paper(
                l,
                r,
                b,
                n,
                VarianceSource::SigmaStarSq(problem.sigma_star_sq()),
            ),
            tau,
            noise,
            seed: 7,
            x0: x0.clone(),
            trace_every: n.max(1),
            epsilon: Some(epsilon),
        };
        let run = run_azo_sgd(&problem, &cfg).unwrap();
        println!(
            "{delta:>12.3e} {:>14.4e} {:>9}",
            run.final_gap, run.noise_warning
        );
    }
}
