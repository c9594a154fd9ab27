//! The two-point gradient estimator: exactness on linear functions,
//! batched averaging, and the smoothing/noise trade-off in tau.
//!
//! ```bash
//! cargo run --release --example two_point_estimator
//! ```

use azosgd::estimator::{batched_estimate, EstimatorParams};
use azosgd::oracle::{NoiseModel, SampleStream};
use azosgd::problem::{make_overparam_lsq, Objective};
use azosgd::sphere::DirectionStream;

fn main() {
    let problem = make_overparam_lsq(16, 8, 3, true).unwrap();
    let x = problem.minimizer().unwrap().scaled(0.5);
    let exact = problem.grad_full(&x);
    println!("query point with ||grad f|| = {:.4}", exact.norm());

    // Larger batches average the directional estimates toward the true
    // gradient.
    for batch in [1usize, 16, 256, 4096] {
        let mut directions = DirectionStream::new(11, 16);
        let mut samples = SampleStream::new(12, 8);
        let g = batched_estimate(
            &problem,
            &NoiseModel::zero(),
            &x,
            EstimatorParams::new(1e-4, batch),
            &mut directions,
            &mut samples,
        );
        let err = g.sub(&exact).norm() / exact.norm();
        println!("batch {batch:>5}: relative estimate error {err:.3}");
    }

    // The noise amplification term d * Delta / tau: too small a tau blows
    // up bounded oracle noise, too large a tau loses the gradient.
    let delta = 1e-4;
    println!("\nbounded oracle noise Delta = {delta:e}:");
    for tau in [1e-1, 1e-2, 1e-3, 1e-4, 1e-5] {
        let noise = NoiseModel::oscillation_for_tau(delta, tau);
        let mut directions = DirectionStream::new(21, 16);
        let mut samples = SampleStream::new(22, 8);
        let g = batched_estimate(
            &problem,
            &noise,
            &x,
            EstimatorParams::new(tau, 1024),
            &mut directions,
            &mut samples,
        );
        let err = g.sub(&exact).norm() / exact.norm();
        println!(
            "tau {tau:>7.0e}: relative error {err:.3} (noise amplification d*Delta/tau = {:.2e})",
            16.0 * delta / tau
        );
    }

    // Sanity: a single estimate lies along its direction.
    let e = DirectionStream::new(31, 16).direction_at(0);
    let g = azosgd::estimator::two_point_estimate(&problem, &NoiseModel::zero(), &x, 0, &e, 1e-3);
    let alignment = g.dot(&e).abs() / g.norm().max(1e-300);
    println!("\nsingle estimate alignment with its direction: {alignment:.6}");
}
