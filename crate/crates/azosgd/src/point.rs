//! Dense real vectors: iterates, query points, directions, and gradients.

use serde::{Deserialize, Serialize};
use std::ops::{Index, IndexMut};

/// A point in `R^d`.
///
/// All operations panic on dimension mismatch; mixing dimensions is a
/// programming error, not a recoverable condition.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    pub fn zeros(dim: usize) -> Self {
        Self {
            coords: vec![0.0; dim],
        }
    }

    pub fn from_vec(coords: Vec<f64>) -> Self {
        Self { coords }
    }

    /// Standard basis vector `e_i` in `R^d`.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(
            index < dim,
            "basis index {index} out of range for dim {dim}"
        );
        let mut p = Self::zeros(dim);
        p.coords[index] = 1.0;
        p
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.coords
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.coords.iter()
    }

    pub fn dot(&self, other: &Point) -> f64 {
        assert_eq!(
            self.dim(),
            other.dim(),
            "dimension mismatch in dot product: {} vs {}",
            self.dim(),
            other.dim()
        );
        self.coords
            .iter()
            .zip(other.coords.iter())
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn scaled(&self, factor: f64) -> Point {
        Point {
            coords: self.coords.iter().map(|c| factor * c).collect(),
        }
    }

    /// `self + factor * other`.
    pub fn add_scaled(&self, factor: f64, other: &Point) -> Point {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch in add_scaled");
        Point {
            coords: self
                .coords
                .iter()
                .zip(other.coords.iter())
                .map(|(a, b)| a + factor * b)
                .collect(),
        }
    }

    /// `self += factor * other`, without allocating.
    pub fn add_scaled_in_place(&mut self, factor: f64, other: &Point) {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch in add_scaled");
        for (a, b) in self.coords.iter_mut().zip(other.coords.iter()) {
            *a += factor * b;
        }
    }

    /// `a * x + b * y`.
    pub fn combine(a: f64, x: &Point, b: f64, y: &Point) -> Point {
        assert_eq!(x.dim(), y.dim(), "dimension mismatch in combine");
        Point {
            coords: x
                .coords
                .iter()
                .zip(y.coords.iter())
                .map(|(xi, yi)| a * xi + b * yi)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Point) -> Point {
        self.add_scaled(-1.0, other)
    }

    pub fn is_finite(&self) -> bool {
        self.coords.iter().all(|c| c.is_finite())
    }
}

impl Index<usize> for Point {
    type Output = f64;

    fn index(&self, index: usize) -> &f64 {
        &self.coords[index]
    }
}

impl IndexMut<usize> for Point {
    fn index_mut(&mut self, index: usize) -> &mut f64 {
        &mut self.coords[index]
    }
}

impl From<Vec<f64>> for Point {
    fn from(coords: Vec<f64>) -> Self {
        Self { coords }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dot_and_norm() {
        let x = Point::from_vec(vec![3.0, 4.0]);
        assert_eq!(x.dot(&x), 25.0);
        assert_eq!(x.norm(), 5.0);
    }

    #[test]
    fn combine_is_affine() {
        let x = Point::from_vec(vec![1.0, 0.0]);
        let y = Point::from_vec(vec![0.0, 1.0]);
        let z = Point::combine(0.25, &x, 0.75, &y);
        assert_eq!(z.as_slice(), &[0.25, 0.75]);
    }

    #[test]
    #[should_panic(expected = "dimension mismatch")]
    fn dot_rejects_mismatched_dims() {
        let x = Point::zeros(2);
        let y = Point::zeros(3);
        let _ = x.dot(&y);
    }

    #[test]
    fn finiteness_detects_nan() {
        let mut x = Point::zeros(3);
        assert!(x.is_finite());
        x[1] = f64::NAN;
        assert!(!x.is_finite());
    }
}
