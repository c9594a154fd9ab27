//! Inexact oracles: noisy zero-order evaluations and biased gradients.
//!
//! The zero-order oracle returns `f(x, xi) + delta(x)` where `delta` is a
//! deterministic adversarial perturbation bounded by a level `|delta(x)|
//! <= Delta`. The first-order oracle returns `grad f(x, xi) + b(x)` with
//! `||b(x)|| <= zeta`. Both perturbations depend on the query point only,
//! never on the sample or on any randomness, so repeated queries at the
//! same point return identical bits.

use crate::point::Point;
use crate::problem::Objective;
use crate::rng::block_rng;
use rand::Rng;

/// Deterministic bounded perturbation of function values.
#[derive(Clone, Debug)]
pub enum NoiseModel {
    /// `delta(x) = 0`: the exact oracle.
    Zero,
    /// `delta(x) = level`, the same additive constant everywhere.
    ConstantSign { level: f64 },
    /// `delta(x) = level * sign(sin(sum_j x_j / scale))`.
    ///
    /// With `scale` well below the evaluation offsets in use, the sign
    /// decorrelates between nearby query points; this is the stress model
    /// for symmetric-difference estimators.
    CoordinateOscillation { level: f64, scale: f64 },
    /// Oscillation at amplitude `f64::EPSILON`: models floating-point
    /// inaccuracy of the function evaluation as the noise level.
    MachineEpsilon,
}

impl NoiseModel {
    pub fn zero() -> Self {
        NoiseModel::Zero
    }

    pub fn constant_sign(level: f64) -> Self {
        assert!(level >= 0.0, "noise level must be non-negative");
        NoiseModel::ConstantSign { level }
    }

    pub fn oscillation(level: f64, scale: f64) -> Self {
        assert!(level >= 0.0, "noise level must be non-negative");
        assert!(scale > 0.0, "oscillation scale must be positive");
        NoiseModel::CoordinateOscillation { level, scale }
    }

    /// Oscillation whose scale is a tenth of the smoothing parameter, so
    /// the sign flips freely between the two points of a two-point query.
    pub fn oscillation_for_tau(level: f64, tau: f64) -> Self {
        assert!(tau > 0.0, "smoothing parameter must be positive");
        Self::oscillation(level, tau / 10.0)
    }

    pub fn machine_epsilon() -> Self {
        NoiseModel::MachineEpsilon
    }

    /// The bound `Delta` with `|delta(x)| <= Delta` for every `x`.
    pub fn level(&self) -> f64 {
        match self {
            NoiseModel::Zero => 0.0,
            NoiseModel::ConstantSign { level } => *level,
            NoiseModel::CoordinateOscillation { level, .. } => *level,
            NoiseModel::MachineEpsilon => f64::EPSILON,
        }
    }

    /// The perturbation at `x`; a pure function of `x`.
    pub fn delta(&self, x: &Point) -> f64 {
        match self {
            NoiseModel::Zero => 0.0,
            NoiseModel::ConstantSign { level } => *level,
            NoiseModel::CoordinateOscillation { level, scale } => {
                let sum: f64 = x.iter().sum();
                level * (sum / scale).sin().signum()
            }
            NoiseModel::MachineEpsilon => {
                let sum: f64 = x.iter().sum();
                f64::EPSILON * (sum / 1e-8).sin().signum()
            }
        }
    }
}

/// Deterministic bounded perturbation of gradients.
#[derive(Clone, Debug)]
pub enum BiasModel {
    /// `b(x) = 0`: the exact stochastic gradient.
    Zero,
    /// `b(x) = magnitude * u` for a fixed unit vector `u`.
    FixedVector { magnitude: f64, direction: Point },
    /// `b(x) = magnitude * x / ||x||`, with `b(0) = 0`.
    Radial { magnitude: f64 },
}

impl BiasModel {
    pub fn zero() -> Self {
        BiasModel::Zero
    }

    /// Fixed-direction bias; `direction` is normalized here.
    pub fn fixed_vector(magnitude: f64, direction: Point) -> Self {
        assert!(magnitude >= 0.0, "bias magnitude must be non-negative");
        let norm = direction.norm();
        assert!(norm > 0.0, "bias direction must be non-zero");
        BiasModel::FixedVector {
            magnitude,
            direction: direction.scaled(1.0 / norm),
        }
    }

    pub fn radial(magnitude: f64) -> Self {
        assert!(magnitude >= 0.0, "bias magnitude must be non-negative");
        BiasModel::Radial { magnitude }
    }

    /// The bound `zeta` with `||b(x)|| <= zeta` for every `x`.
    pub fn magnitude(&self) -> f64 {
        match self {
            BiasModel::Zero => 0.0,
            BiasModel::FixedVector { magnitude, .. } => *magnitude,
            BiasModel::Radial { magnitude } => *magnitude,
        }
    }

    /// The bias vector at `x`.
    pub fn bias_at(&self, x: &Point) -> Point {
        match self {
            BiasModel::Zero => Point::zeros(x.dim()),
            BiasModel::FixedVector {
                magnitude,
                direction,
            } => {
                assert_eq!(
                    direction.dim(),
                    x.dim(),
                    "bias direction dimension mismatch"
                );
                direction.scaled(*magnitude)
            }
            BiasModel::Radial { magnitude } => {
                let norm = x.norm();
                if norm == 0.0 {
                    Point::zeros(x.dim())
                } else {
                    x.scaled(magnitude / norm)
                }
            }
        }
    }
}

/// Reproducible stream of uniform sample indices in `0..sample_count`.
///
/// Counter-addressed like [`crate::sphere::DirectionStream`], so batches
/// can be evaluated in any order.
#[derive(Clone, Debug)]
pub struct SampleStream {
    seed: u64,
    sample_count: usize,
    counter: u64,
}

impl SampleStream {
    pub fn new(seed: u64, sample_count: usize) -> Self {
        assert!(sample_count >= 1, "sample count must be at least 1");
        Self {
            seed,
            sample_count,
            counter: 0,
        }
    }

    pub fn counter(&self) -> u64 {
        self.counter
    }

    pub fn index_at(&self, slot: u64) -> usize {
        block_rng(self.seed, slot).gen_range(0..self.sample_count)
    }

    pub fn next_index(&mut self) -> usize {
        let i = self.index_at(self.counter);
        self.counter += 1;
        i
    }
}

/// Zero-order oracle: `f(x, xi) + delta(x)`.
pub fn zero_order_eval<P: Objective + ?Sized>(
    problem: &P,
    noise: &NoiseModel,
    x: &Point,
    sample_index: usize,
) -> f64 {
    problem.eval_sample(x, sample_index) + noise.delta(x)
}

/// Biased first-order oracle: `grad f(x, xi) + b(x)`.
pub fn biased_grad<P: Objective + ?Sized>(
    problem: &P,
    bias: &BiasModel,
    x: &Point,
    sample_index: usize,
) -> Point {
    problem
        .grad_sample(x, sample_index)
        .add_scaled(1.0, &bias.bias_at(x))
}

/// Mini-batch mean of biased gradients over explicit sample indices.
///
/// Averaging leaves the bias term untouched: the mean equals the mean of
/// the exact per-sample gradients plus `b(x)`.
pub fn batched_biased_grad<P: Objective + ?Sized>(
    problem: &P,
    bias: &BiasModel,
    x: &Point,
    sample_indices: &[usize],
) -> Point {
    assert!(
        !sample_indices.is_empty(),
        "batch must contain at least one sample"
    );
    let mut acc = Point::zeros(x.dim());
    for &i in sample_indices {
        acc.add_scaled_in_place(1.0, &biased_grad(problem, bias, x, i));
    }
    acc.scaled(1.0 / sample_indices.len() as f64)
}
