//! Closed-form resource calculators for the accelerated zero-order
//! method: iteration count, batch size, total oracle calls, smoothing
//! parameter, and the maximum admissible adversarial noise level for a
//! target accuracy.
//!
//! All calculators use unit constants inside the asymptotic prescriptions
//! and round integer outputs up, so the results are sufficient budgets
//! rather than sharp guarantees. `total_calls` counts estimator
//! evaluations `N * B`; each evaluation costs two raw function queries,
//! and the run traces expose both counters.

use serde::Serialize;

fn require_positive(value: f64, name: &str) -> f64 {
    assert!(
        value > 0.0 && value.is_finite(),
        "{name} must be positive and finite, got {value}"
    );
    value
}

/// Iterations to reach accuracy `epsilon`: `ceil(sqrt(L R^2 / epsilon))`.
pub fn iterations(epsilon: f64, smoothness: f64, radius: f64) -> u64 {
    require_positive(epsilon, "epsilon");
    require_positive(smoothness, "smoothness");
    require_positive(radius, "radius");
    let n = (smoothness * radius * radius / epsilon).sqrt().ceil();
    (n as u64).max(1)
}

/// Batch size keeping the iteration count optimal:
/// `ceil(max{ sqrt(L R^2 / epsilon), d sigma*^2 R / (L^(1/2) epsilon^(3/2)) })`.
///
/// With `sigma*^2 = 0` (interpolation) only the first term remains.
pub fn batch_size(
    epsilon: f64,
    smoothness: f64,
    radius: f64,
    dim: usize,
    sigma_star_sq: f64,
) -> u64 {
    require_positive(epsilon, "epsilon");
    require_positive(smoothness, "smoothness");
    require_positive(radius, "radius");
    assert!(dim >= 1, "dim must be at least 1");
    assert!(sigma_star_sq >= 0.0, "sigma_star_sq must be non-negative");
    let first = (smoothness * radius * radius / epsilon).sqrt();
    let second = dim as f64 * sigma_star_sq * radius / (smoothness.sqrt() * epsilon.powf(1.5));
    (first.max(second).ceil() as u64).max(1)
}

/// Total estimator evaluations: `iterations * batch_size`, which matches
/// `max{ L R^2 / epsilon, d sigma*^2 R^2 / epsilon^2 }` up to rounding.
pub fn total_calls(
    epsilon: f64,
    smoothness: f64,
    radius: f64,
    dim: usize,
    sigma_star_sq: f64,
) -> u64 {
    iterations(epsilon, smoothness, radius)
        * batch_size(epsilon, smoothness, radius, dim, sigma_star_sq)
}

/// Smoothing parameter: `epsilon / (L R)`.
pub fn smoothing(epsilon: f64, smoothness: f64, radius: f64) -> f64 {
    require_positive(epsilon, "epsilon");
    require_positive(smoothness, "smoothness");
    require_positive(radius, "radius");
    epsilon / (smoothness * radius)
}

/// Maximum admissible adversarial noise level: `epsilon^2 / (d L R)`.
///
/// An alternative normalization divides by `R^2`; this implementation
/// uses the `R` form, which is the one consistent with the smoothing
/// parameter `tau = epsilon / (L R)` through `Delta <= epsilon tau / (d R)`.
pub fn max_noise(epsilon: f64, smoothness: f64, radius: f64, dim: usize) -> f64 {
    require_positive(epsilon, "epsilon");
    require_positive(smoothness, "smoothness");
    require_positive(radius, "radius");
    assert!(dim >= 1, "dim must be at least 1");
    epsilon * epsilon / (dim as f64 * smoothness * radius)
}

/// Five-term convergence bound of the biased accelerated method with unit
/// constant:
///
/// ```text
/// L R^2 / N^2 + L R^2 / (B N) + sigma* R / sqrt(B N) + zeta R + zeta^2 N / (2 L)
/// ```
///
/// Intended for overlay reporting; the hidden constant makes it unsuitable
/// for absolute pass/fail checks.
pub fn convergence_bound(
    iterations: u64,
    batch: u64,
    smoothness: f64,
    radius: f64,
    sigma_star: f64,
    zeta: f64,
) -> f64 {
    assert!(
        iterations >= 1 && batch >= 1,
        "iterations and batch must be >= 1"
    );
    require_positive(smoothness, "smoothness");
    require_positive(radius, "radius");
    assert!(
        sigma_star >= 0.0 && zeta >= 0.0,
        "noise magnitudes must be non-negative"
    );
    let n = iterations as f64;
    let b = batch as f64;
    let lr2 = smoothness * radius * radius;
    lr2 / (n * n)
        + lr2 / (b * n)
        + sigma_star * radius / (b * n).sqrt()
        + zeta * radius
        + zeta * zeta * n / (2.0 * smoothness)
}

/// Schedule base step `gamma = min{ 1/(12 L), B/(24 L (N+1)), sqrt(B R^2 / (V N^3)) }`,
/// where `V` is the variance proxy: `sigma*^2` when positive, otherwise
/// `L f*` when positive, otherwise the third term is dropped.
pub fn schedule_gamma(
    smoothness: f64,
    radius: f64,
    batch: u64,
    iterations: u64,
    sigma_star_sq: f64,
    f_star: f64,
) -> f64 {
    require_positive(smoothness, "smoothness");
    require_positive(radius, "radius");
    let b = batch as f64;
    let n = iterations as f64;
    let mut gamma = (1.0 / (12.0 * smoothness)).min(b / (24.0 * smoothness * (n + 1.0)));
    let variance = if sigma_star_sq > 0.0 {
        sigma_star_sq
    } else {
        smoothness * f_star
    };
    if variance > 0.0 && n > 0.0 {
        gamma = gamma.min((b * radius * radius / (variance * n * n * n)).sqrt());
    }
    gamma
}

/// The derived budget for one accuracy target.
#[derive(Clone, Debug, Serialize)]
pub struct TheoryBudget {
    pub epsilon: f64,
    #[serde(rename = "N")]
    pub iterations: u64,
    #[serde(rename = "B")]
    pub batch: u64,
    #[serde(rename = "T")]
    pub total_calls: u64,
    pub tau: f64,
    pub delta_max: f64,
    pub gamma: f64,
}

impl TheoryBudget {
    /// Assembles every prescription for a target accuracy on a problem
    /// with the given smoothness, radius, dimension, and gradient
    /// variance at the minimizer.
    pub fn for_target(
        epsilon: f64,
        smoothness: f64,
        radius: f64,
        dim: usize,
        sigma_star_sq: f64,
    ) -> Self {
        let n = iterations(epsilon, smoothness, radius);
        let b = batch_size(epsilon, smoothness, radius, dim, sigma_star_sq);
        Self {
            epsilon,
            iterations: n,
            batch: b,
            total_calls: n * b,
            tau: smoothing(epsilon, smoothness, radius),
            delta_max: max_noise(epsilon, smoothness, radius, dim),
            gamma: schedule_gamma(smoothness, radius, b, n, sigma_star_sq, 0.0),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("budget serialization cannot fail")
    }
}
