//! Two-point gradient estimation along sphere-uniform directions.
//!
//! The estimate at `x` along a unit direction `e` for sample `xi` is
//!
//! ```text
//! g(x, xi, e) = (d / (2 tau)) * (f_delta(x + tau e, xi) - f_delta(x - tau e, xi)) * e
//! ```
//!
//! with the same `xi` at both evaluation points. The smoothing parameter
//! `tau` trades smoothing error (growing with `tau`) against adversarial
//! noise amplification (growing with `Delta / tau`). The batched form
//! averages estimates over independently drawn `(e_i, xi_i)` pairs.

use crate::oracle::{zero_order_eval, NoiseModel, SampleStream};
use crate::point::Point;
use crate::problem::Objective;
use crate::sphere::DirectionStream;

/// Parameters of the batched estimator.
#[derive(Clone, Copy, Debug)]
pub struct EstimatorParams {
    /// Smoothing parameter `tau > 0`.
    pub tau: f64,
    /// Batch size `B >= 1`.
    pub batch: usize,
}

impl EstimatorParams {
    pub fn new(tau: f64, batch: usize) -> Self {
        assert!(tau > 0.0, "tau must be positive");
        assert!(batch >= 1, "batch must be >= 1");
        Self { tau, batch }
    }
}

/// Single two-point estimate; `e` must be unit norm and the same sample
/// index is used at `x + tau e` and `x - tau e`.
pub fn two_point_estimate<P: Objective + ?Sized>(
    problem: &P,
    noise: &NoiseModel,
    x: &Point,
    sample_index: usize,
    e: &Point,
    tau: f64,
) -> Point {
    assert!(tau > 0.0, "tau must be positive");
    assert_eq!(e.dim(), x.dim(), "direction dimension mismatch");
    assert!(
        (e.norm() - 1.0).abs() <= 1e-12,
        "direction must be unit norm, got {}",
        e.norm()
    );
    let plus = x.add_scaled(tau, e);
    let minus = x.add_scaled(-tau, e);
    let f_plus = zero_order_eval(problem, noise, &plus, sample_index);
    let f_minus = zero_order_eval(problem, noise, &minus, sample_index);
    let coef = (x.dim() as f64 / (2.0 * tau)) * (f_plus - f_minus);
    e.scaled(coef)
}

/// Mean of `batch` two-point estimates with directions and sample indices
/// drawn pairwise from the given streams.
///
/// Consumes exactly `batch` draws from each stream. Elements are
/// accumulated in index order, so the result does not depend on how the
/// evaluations are scheduled.
pub fn batched_estimate<P: Objective + ?Sized>(
    problem: &P,
    noise: &NoiseModel,
    x: &Point,
    params: EstimatorParams,
    directions: &mut DirectionStream,
    samples: &mut SampleStream,
) -> Point {
    let mut acc = Point::zeros(x.dim());
    for _ in 0..params.batch {
        let e = directions.next_direction();
        let i = samples.next_index();
        acc.add_scaled_in_place(
            1.0,
            &two_point_estimate(problem, noise, x, i, &e, params.tau),
        );
    }
    acc.scaled(1.0 / params.batch as f64)
}
