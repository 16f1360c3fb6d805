//! Cubic interpolation of tabulated profiles.
//!
//! The stretched layer variable `z = c·k^{1/3}(y − a)` sweeps far outside
//! the window on which the transition profile `W` is tabulated; there `W` is
//! flat to machine precision, so a [`CubicTable`] carries explicit left/right
//! extension values and interpolates with a 4-point Lagrange stencil inside.

use num_complex::Complex64;

use crate::profile::ComplexProfile;

/// Uniform table with cubic interpolation and constant extension.
#[derive(Debug, Clone)]
pub struct CubicTable {
    z0: f64,
    h: f64,
    values: Vec<Complex64>,
    left: Complex64,
    right: Complex64,
}

impl CubicTable {
    /// Build from raw samples on a uniform grid starting at `z0` with
    /// spacing `h`.
    pub fn new(z0: f64, h: f64, values: Vec<Complex64>, left: Complex64, right: Complex64) -> Self {
        assert!(values.len() >= 4, "cubic interpolation needs at least 4 nodes");
        CubicTable { z0, h, values, left, right }
    }

    /// Build from a profile, extending by `left` below the grid and `right`
    /// above it.
    pub fn from_profile(p: &ComplexProfile, left: Complex64, right: Complex64) -> Self {
        Self::new(p.grid().lo(), p.grid().h(), p.values().to_vec(), left, right)
    }

    /// Evaluate at `x` (cubic inside the table, constant outside).
    pub fn eval(&self, x: f64) -> Complex64 {
        let n = self.values.len();
        let pos = (x - self.z0) / self.h;
        if pos <= 0.0 {
            return self.left;
        }
        if pos >= (n - 1) as f64 {
            return self.right;
        }
        let j = (pos.floor() as usize).clamp(1, n - 3);
        let s = pos - j as f64;
        let wm1 = -s * (s - 1.0) * (s - 2.0) / 6.0;
        let w0 = (s * s - 1.0) * (s - 2.0) / 2.0;
        let w1 = -s * (s + 1.0) * (s - 2.0) / 2.0;
        let w2 = s * (s * s - 1.0) / 6.0;
        wm1 * self.values[j - 1] + w0 * self.values[j] + w1 * self.values[j + 1]
            + w2 * self.values[j + 2]
    }
}
