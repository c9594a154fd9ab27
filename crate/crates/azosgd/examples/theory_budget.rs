//! Resource budgets for target accuracies: iterations, batch size, total
//! gradient-free calls, smoothing parameter, and the maximum admissible
//! adversarial noise level.
//!
//! ```bash
//! cargo run --release --example theory_budget
//! ```

use azosgd::problem::{make_overparam_lsq, Objective};
use azosgd::theory::TheoryBudget;

fn main() {
    let problem = make_overparam_lsq(64, 32, 5, true).unwrap();
    let (l, r) = (problem.smoothness(), problem.radius());
    println!(
        "instance: d = 64, L = {l:.2}, R = {r:.2}, sigma*^2 = {}",
        problem.sigma_star_sq()
    );
    println!(
        "{:>10} {:>8} {:>8} {:>12} {:>12} {:>12} {:>12}",
        "epsilon", "N", "B", "T", "tau", "delta_max", "gamma"
    );
    for epsilon in [10.0, 1.0, 0.1, 0.01] {
        let budget = TheoryBudget::for_target(epsilon, l, r, 64, problem.sigma_star_sq());
        println!(
            "{epsilon:>10} {:>8} {:>8} {:>12} {:>12.3e} {:>12.3e} {:>12.3e}",
            budget.iterations,
            budget.batch,
            budget.total_calls,
            budget.tau,
            budget.delta_max,
            budget.gamma
        );
    }

    // With gradient noise at the minimizer (a shifted system), the batch
    // size grows to keep the iteration count optimal.
    let shifted = make_overparam_lsq(64, 32, 5, false).unwrap();
    let budget = TheoryBudget::for_target(
        0.1,
        shifted.smoothness(),
        shifted.radius(),
        64,
        shifted.sigma_star_sq(),
    );
    println!(
        "\nshifted instance (sigma*^2 = {:.3}):",
        shifted.sigma_star_sq()
    );
    println!("{}", budget.to_json());
}
