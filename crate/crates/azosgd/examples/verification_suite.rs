//! Monte-Carlo verification: empirical estimator bias against
//! `L tau + d Delta / tau`, empirical second moment at the minimizer
//! against `4 d sigma*^2 + 4 d L^2 tau^2 + d^2 Delta^2 / tau^2`, and the
//! auxiliary norm inequalities.
//!
//! ```bash
//! cargo run --release --example verification_suite
//! ```

use azosgd::oracle::NoiseModel;
use azosgd::problem::make_overparam_lsq;
use azosgd::verify::{check_auxiliary_inequalities, mc_bias, mc_second_moment, random_ball_point};

fn main() {
    let samples = 20_000;
    println!(
        "{:>14} {:>4} {:>8} {:>8} {:>12} {:>12} {:>12} {:>6}",
        "quantity", "d", "tau", "delta", "empirical", "bound", "stderr", "pass"
    );
    for &d in &[8usize, 32] {
        let problem = make_overparam_lsq(d, d / 2, 90 + d as u64, true).unwrap();
        for &tau in &[1e-2, 1e-3] {
            for &delta in &[0.0, 1e-5] {
                let noise = if delta == 0.0 {
                    NoiseModel::zero()
                } else {
                    NoiseModel::oscillation_for_tau(delta, tau)
                };
                let x = random_ball_point(d, problem.radius() / 2.0, 40 + d as u64);
                let bias = mc_bias(&problem, &noise, &x, tau, samples, 60 + d as u64);
                println!(
                    "{:>14} {d:>4} {tau:>8.0e} {delta:>8.0e} {:>12.4e} {:>12.4e} {:>12.4e} {:>6}",
                    "bias_norm", bias.empirical, bias.bound, bias.stderr, bias.pass
                );
                let moment = mc_second_moment(&problem, &noise, tau, samples, 80 + d as u64);
                println!(
                    "{:>14} {d:>4} {tau:>8.0e} {delta:>8.0e} {:>12.4e} {:>12.4e} {:>12.4e} {:>6}",
                    "second_moment", moment.empirical, moment.bound, moment.stderr, moment.pass
                );
            }
        }
    }

    let report = check_auxiliary_inequalities(5, 5_000);
    println!("\nauxiliary inequalities over 5000 trials:");
    println!(
        "  worst pair slack   {:.3e} (<= 0 expected)",
        report.pair_worst_slack
    );
    println!(
        "  worst triple slack {:.3e} (<= 0 expected)",
        report.triple_worst_slack
    );
    println!(
        "  sphere Poincare: lhs {:.4e} <= rhs {:.4e} (stderr {:.1e})",
        report.poincare_lhs, report.poincare_rhs, report.poincare_stderr
    );
    println!("  all pass: {}", report.pass);
}
