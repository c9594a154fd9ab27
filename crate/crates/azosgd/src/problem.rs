//! Finite-sum stochastic objectives and the overparameterized
//! least-squares test problem.
//!
//! The optimizers in this crate minimize `f(x) = E_xi[f(x, xi)]` where
//! `xi` ranges over a finite set of samples drawn uniformly. The concrete
//! problem shipped here is a system of `m` linear equations in `d >= m`
//! unknowns, minimized as a mean of squared residuals:
//!
//! ```text
//! f(x) = (1/m) * sum_i (a_i . x - b_i)^2
//! ```
//!
//! Per-sample true gradients exist on the contract solely so that
//! baselines and the Monte-Carlo verification suite have an exact
//! reference; the zero-order optimizer never calls them.

use crate::point::Point;
use crate::rng::{block_rng, derive_seed, standard_normal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

const TAG_INSTANCE: u64 = 0x4F50_4C53;

/// Residual shift used to make an inconsistent system; see
/// [`make_overparam_lsq`].
const INCONSISTENT_SHIFT: f64 = 1.0;

#[derive(Debug, Error)]
pub enum ProblemError {
    #[error("not overparameterized: {samples} samples exceed dimension {dim}")]
    NotOverparameterized { samples: usize, dim: usize },
    #[error("an inconsistent instance needs at least 2 samples, got {samples}")]
    TooFewSamples { samples: usize },
    #[error("positive dimension and sample count required")]
    EmptyProblem,
    #[error("malformed instance document: {0}")]
    Malformed(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// A finite-sum stochastic objective with uniform sampling over
/// `0..sample_count()`.
///
/// `grad_sample` is a verification-only escape hatch: first-order
/// baselines and bound checks need the exact gradient, gradient-free
/// methods must not touch it.
pub trait Objective: Sync {
    fn dim(&self) -> usize;

    fn sample_count(&self) -> usize;

    /// `f(x, xi = index)`; non-negative for every sample.
    fn eval_sample(&self, x: &Point, index: usize) -> f64;

    /// Exact per-sample gradient (verification and baselines only).
    fn grad_sample(&self, x: &Point, index: usize) -> Point;

    /// Uniform per-sample smoothness constant `L`.
    fn smoothness(&self) -> f64;

    /// Minimum value of the full objective, when known.
    fn f_star(&self) -> f64 {
        0.0
    }

    /// Gradient variance at the minimizer, when known.
    fn sigma_star_sq(&self) -> f64 {
        0.0
    }

    /// Exact minimizer, when stored.
    fn minimizer(&self) -> Option<&Point> {
        None
    }

    /// Full objective: mean of the per-sample values.
    fn eval_full(&self, x: &Point) -> f64 {
        let m = self.sample_count();
        assert!(m > 0, "objective has no samples");
        (0..m).map(|i| self.eval_sample(x, i)).sum::<f64>() / m as f64
    }

    /// Exact full gradient: mean of the per-sample gradients
    /// (verification and baselines only).
    fn grad_full(&self, x: &Point) -> Point {
        let m = self.sample_count();
        assert!(m > 0, "objective has no samples");
        let mut acc = Point::zeros(self.dim());
        for i in 0..m {
            acc.add_scaled_in_place(1.0, &self.grad_sample(x, i));
        }
        acc.scaled(1.0 / m as f64)
    }
}

/// Least-squares instance `f(x, i) = (a_i . x - b_i)^2` over `m <= d`
/// equations, with the metadata the step schedules need: per-sample
/// smoothness `L`, ball radius `R`, minimum value `f*`, and gradient
/// variance at the minimizer `sigma*^2`.
///
/// Immutable after construction; all evaluations are pure, so instances
/// are safe to share across threads.
#[derive(Clone, Debug)]
pub struct ProblemInstance {
    dim: usize,
    sample_count: usize,
    /// Row-major `m x d`.
    matrix: Vec<f64>,
    rhs: Vec<f64>,
    smoothness: f64,
    radius: f64,
    f_star: f64,
    sigma_star_sq: f64,
    seed: u64,
    consistent: bool,
    minimizer: Option<Point>,
}

/// On-disk JSON schema for a problem instance. The stored minimizer is
/// derivable from `(seed, consistent)` and is not part of the document.
#[derive(Serialize, Deserialize)]
struct InstanceRecord {
    dim: usize,
    samples: usize,
    seed: u64,
    consistent: bool,
    matrix: Vec<f64>,
    rhs: Vec<f64>,
    smoothness: f64,
    radius: f64,
    f_star: f64,
    sigma_star_sq: f64,
}

impl ProblemInstance {
    /// Builds an instance from explicit rows.
    ///
    /// `L` is computed as `max_i 2 * ||a_i||^2`, the worst per-sample
    /// gradient Lipschitz constant. If a minimizer is supplied, `f*` and
    /// `sigma*^2` are computed from it by enumeration over the samples.
    pub fn from_rows(
        rows: &[Vec<f64>],
        rhs: Vec<f64>,
        radius: f64,
        minimizer: Option<Point>,
    ) -> Self {
        assert!(!rows.is_empty(), "at least one row required");
        assert_eq!(rows.len(), rhs.len(), "one rhs entry per row required");
        assert!(radius > 0.0, "radius must be positive");
        let dim = rows[0].len();
        assert!(dim > 0, "rows must be non-empty");
        let mut matrix = Vec::with_capacity(rows.len() * dim);
        for row in rows {
            assert_eq!(row.len(), dim, "ragged matrix rows");
            matrix.extend_from_slice(row);
        }
        let mut instance = Self {
            dim,
            sample_count: rows.len(),
            matrix,
            rhs,
            smoothness: 0.0,
            radius,
            f_star: 0.0,
            sigma_star_sq: 0.0,
            seed: 0,
            consistent: true,
            minimizer: None,
        };
        instance.smoothness = instance.max_row_smoothness();
        if let Some(x_star) = minimizer {
            assert_eq!(x_star.dim(), dim, "minimizer dimension mismatch");
            instance.f_star = instance.eval_full(&x_star);
            instance.sigma_star_sq = instance.gradient_variance_at(&x_star);
            instance.consistent = instance.f_star == 0.0;
            instance.minimizer = Some(x_star);
        }
        instance
    }

    fn max_row_smoothness(&self) -> f64 {
        (0..self.sample_count)
            .map(|i| 2.0 * self.row(i).iter().map(|a| a * a).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// `(1/m) sum_i ||grad f(x, i) - grad f(x)||^2` by enumeration.
    fn gradient_variance_at(&self, x: &Point) -> f64 {
        let mean = self.grad_full(x);
        (0..self.sample_count)
            .map(|i| self.grad_sample(x, i).sub(&mean).norm_sq())
            .sum::<f64>()
            / self.sample_count as f64
    }

    pub fn row(&self, index: usize) -> &[f64] {
        assert!(
            index < self.sample_count,
            "sample index {index} out of range for {} samples",
            self.sample_count
        );
        &self.matrix[index * self.dim..(index + 1) * self.dim]
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn consistent(&self) -> bool {
        self.consistent
    }

    /// Serializes to the flat JSON document schema.
    pub fn to_json(&self) -> String {
        let record = InstanceRecord {
            dim: self.dim,
            samples: self.sample_count,
            seed: self.seed,
            consistent: self.consistent,
            matrix: self.matrix.clone(),
            rhs: self.rhs.clone(),
            smoothness: self.smoothness,
            radius: self.radius,
            f_star: self.f_star,
            sigma_star_sq: self.sigma_star_sq,
        };
        serde_json::to_string(&record).expect("instance serialization cannot fail")
    }

    /// Loads an instance from its JSON document.
    ///
    /// The stored minimizer is not part of the schema, so operations that
    /// need `x*` require a freshly generated instance.
    pub fn from_json(text: &str) -> Result<Self, ProblemError> {
        let record: InstanceRecord = serde_json::from_str(text)?;
        if record.dim == 0 || record.samples == 0 {
            return Err(ProblemError::EmptyProblem);
        }
        if record.matrix.len() != record.dim * record.samples {
            return Err(ProblemError::Malformed(format!(
                "matrix has {} entries, expected {}",
                record.matrix.len(),
                record.dim * record.samples
            )));
        }
        if record.rhs.len() != record.samples {
            return Err(ProblemError::Malformed(format!(
                "rhs has {} entries, expected {}",
                record.rhs.len(),
                record.samples
            )));
        }
        Ok(Self {
            dim: record.dim,
            sample_count: record.samples,
            matrix: record.matrix,
            rhs: record.rhs,
            smoothness: record.smoothness,
            radius: record.radius,
            f_star: record.f_star,
            sigma_star_sq: record.sigma_star_sq,
            seed: record.seed,
            consistent: record.consistent,
            minimizer: None,
        })
    }
}

impl Objective for ProblemInstance {
    fn dim(&self) -> usize {
        self.dim
    }

    fn sample_count(&self) -> usize {
        self.sample_count
    }

    fn eval_sample(&self, x: &Point, index: usize) -> f64 {
        assert_eq!(
            x.dim(),
            self.dim,
            "dimension mismatch: point has {}, problem has {}",
            x.dim(),
            self.dim
        );
        // Accumulate the dot product first so that at a stored solution the
        // residual cancels bit-exactly against the rhs built the same way.
        let row = self.row(index);
        let mut acc = 0.0;
        for (a, xi) in row.iter().zip(x.iter()) {
            acc += a * xi;
        }
        let residual = acc - self.rhs[index];
        residual * residual
    }

    fn grad_sample(&self, x: &Point, index: usize) -> Point {
        assert_eq!(
            x.dim(),
            self.dim,
            "dimension mismatch: point has {}, problem has {}",
            x.dim(),
            self.dim
        );
        let row = self.row(index);
        let mut acc = 0.0;
        for (a, xi) in row.iter().zip(x.iter()) {
            acc += a * xi;
        }
        let coef = 2.0 * (acc - self.rhs[index]);
        Point::from_vec(row.iter().map(|a| coef * a).collect())
    }

    fn smoothness(&self) -> f64 {
        self.smoothness
    }

    fn f_star(&self) -> f64 {
        self.f_star
    }

    fn sigma_star_sq(&self) -> f64 {
        self.sigma_star_sq
    }

    fn minimizer(&self) -> Option<&Point> {
        self.minimizer.as_ref()
    }
}

/// Generates a seeded overparameterized least-squares instance with
/// `samples <= dim`.
///
/// Matrix entries are i.i.d. standard normal. A solution `x_true` is
/// drawn first and the radius is set to `2 * ||x_true||` so the minimizer
/// is strictly interior to the projection ball.
///
/// With `consistent = true` the right-hand side is `b = A x_true`, so the
/// system interpolates: `f* = 0` and `sigma*^2 = 0`.
///
/// With `consistent = false` the last row duplicates the first and the
/// two copies receive opposite residual shifts `+s` and `-s`. A plain
/// full-rank `A` would make any right-hand side attainable, so the rank
/// deficiency is what forces `f* > 0`. The shifts cancel in the full
/// gradient, hence `x_true` remains the exact minimizer, with
/// `f* = 2 s^2 / m` and `sigma*^2 = 8 s^2 ||a_0||^2 / m <= 2 L f*`.
pub fn make_overparam_lsq(
    dim: usize,
    samples: usize,
    seed: u64,
    consistent: bool,
) -> Result<ProblemInstance, ProblemError> {
    if dim == 0 || samples == 0 {
        return Err(ProblemError::EmptyProblem);
    }
    if samples > dim {
        return Err(ProblemError::NotOverparameterized { samples, dim });
    }
    if !consistent && samples < 2 {
        return Err(ProblemError::TooFewSamples { samples });
    }

    let stream_seed = derive_seed(seed, TAG_INSTANCE);
    let mut x_true = Point::zeros(dim);
    {
        let mut rng = block_rng(stream_seed, 0);
        for j in 0..dim {
            x_true[j] = standard_normal(&mut rng);
        }
    }

    let mut matrix = vec![0.0; samples * dim];
    for i in 0..samples {
        let mut rng = block_rng(stream_seed, 1 + i as u64);
        for j in 0..dim {
            matrix[i * dim + j] = standard_normal(&mut rng);
        }
    }
    if !consistent {
        // Duplicate the first row so the system is genuinely overdetermined
        // along that direction.
        let (head, tail) = matrix.split_at_mut((samples - 1) * dim);
        tail.copy_from_slice(&head[..dim]);
    }

    let mut rhs = vec![0.0; samples];
    for i in 0..samples {
        let row = &matrix[i * dim..(i + 1) * dim];
        rhs[i] = row.iter().zip(x_true.iter()).map(|(a, x)| a * x).sum();
    }
    if !consistent {
        rhs[0] += INCONSISTENT_SHIFT;
        rhs[samples - 1] -= INCONSISTENT_SHIFT;
    }

    let radius = 2.0 * x_true.norm();
    let mut instance = ProblemInstance {
        dim,
        sample_count: samples,
        matrix,
        rhs,
        smoothness: 0.0,
        radius,
        f_star: 0.0,
        sigma_star_sq: 0.0,
        seed,
        consistent,
        minimizer: None,
    };
    instance.smoothness = instance.max_row_smoothness();
    instance.f_star = instance.eval_full(&x_true);
    instance.sigma_star_sq = instance.gradient_variance_at(&x_true);
    instance.minimizer = Some(x_true);
    Ok(instance)
}
