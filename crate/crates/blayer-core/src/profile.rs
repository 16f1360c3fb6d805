//! Complex-valued grid functions.
//!
//! A [`ComplexProfile`] is a complex sample vector attached to a shared
//! [`Grid1D`]. Profiles are immutable value types; elementwise combinators
//! check that both operands live on logically identical grids.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::Grid1D;

/// A complex-valued function sampled on a uniform grid.
///
/// Invariant: `values.len() == grid.len()` and every sample is finite.
#[derive(Debug, Clone)]
pub struct ComplexProfile {
    grid: Arc<Grid1D>,
    values: Vec<Complex64>,
}

impl ComplexProfile {
    /// Wrap a sample vector, validating length and finiteness.
    pub fn new(grid: Arc<Grid1D>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidProfile(format!(
                "sample count {} does not match grid size {}",
                values.len(),
                grid.len()
            )));
        }
        for (j, v) in values.iter().enumerate() {
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::InvalidProfile(format!(
                    "non-finite sample {v} at node {j}"
                )));
            }
        }
        Ok(ComplexProfile { grid, values })
    }

    /// Wrap without validation. For internal hot paths whose values were
    /// produced by already-validated arithmetic.
    pub(crate) fn new_unchecked(grid: Arc<Grid1D>, values: Vec<Complex64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        ComplexProfile { grid, values }
    }

    /// Sample a closure on the grid.
    pub fn from_fn(grid: Arc<Grid1D>, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let values: Vec<Complex64> = grid.nodes().iter().map(|&y| f(y)).collect();
        Self::new(grid, values)
    }

    /// Sample a real-valued closure on the grid.
    pub fn from_real_fn(grid: Arc<Grid1D>, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::from_fn(grid, |y| Complex64::new(f(y), 0.0))
    }

    /// The zero profile.
    pub fn zeros(grid: Arc<Grid1D>) -> Self {
        let n = grid.len();
        ComplexProfile { grid, values: vec![Complex64::ZERO; n] }
    }

    /// Underlying grid.
    pub fn grid(&self) -> &Arc<Grid1D> {
        &self.grid
    }

    /// Sample vector.
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Consume into the sample vector.
    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// Number of samples.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// True when the profile has no samples.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Sample at node `j`.
    pub fn value(&self, j: usize) -> Complex64 {
        self.values[j]
    }

    /// Largest modulus over all nodes.
    pub fn sup(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Elementwise map.
    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        ComplexProfile {
            grid: Arc::clone(&self.grid),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Elementwise combination with another profile on the same grid.
    pub fn zip_with(
        &self,
        other: &ComplexProfile,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<Self> {
        if !self.grid.same_as(&other.grid) {
            return Err(Error::GridMismatch(
                "zip_with requires logically identical grids".into(),
            ));
        }
        Ok(ComplexProfile {
            grid: Arc::clone(&self.grid),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&x, &y)| f(x, y))
                .collect(),
        })
    }

    /// Scalar multiple.
    pub fn scale(&self, c: Complex64) -> Self {
        self.map(|v| c * v)
    }

    /// Complex conjugate.
    pub fn conj(&self) -> Self {
        self.map(|v| v.conj())
    }

    /// Pointwise sum.
    pub fn add(&self, other: &ComplexProfile) -> Result<Self> {
        self.zip_with(other, |x, y| x + y)
    }

    /// Pointwise difference.
    pub fn sub(&self, other: &ComplexProfile) -> Result<Self> {
        self.zip_with(other, |x, y| x - y)
    }
}
