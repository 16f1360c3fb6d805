//! Weighted sup-norms and the elementary grid calculus.
//!
//! The verification layer measures everything in exponentially weighted
//! sup-norms
//!
//! ```text
//! ‖f‖_{W^{0,∞}_α} = sup_y e^{αy} |f(y)|,
//! ‖f‖_{W^{1,∞}_α} = max(‖f‖_{W^{0,∞}_α}, ‖f'‖_{W^{0,∞}_α}),
//! ```
//!
//! with the derivative taken by centered second-order differences (one-sided
//! second-order stencils at the endpoints). The same module provides the
//! plain calculus used everywhere else: [`differentiate`] (orders 1 and 2),
//! [`cumulative_integral`] (trapezoid, anchored at the first node) and
//! [`heaviside_profile`] (indicator of `y ≥ a`, with `H(a) = 1`).

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::Grid1D;
use crate::profile::ComplexProfile;

/// Parameters of a weighted sup-norm: exponential rate `α ≥ 0` and
/// derivative order `s ∈ {0, 1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedNormParams {
    alpha: f64,
    order: u8,
}

impl WeightedNormParams {
    /// Validated constructor.
    pub fn new(alpha: f64, order: u8) -> Result<Self> {
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(Error::Config(format!("weight rate must satisfy α ≥ 0, got {alpha}")));
        }
        if order > 1 {
            return Err(Error::Config(format!(
                "weighted norms support derivative orders 0 and 1, got {order}"
            )));
        }
        Ok(WeightedNormParams { alpha, order })
    }

    /// `W^{0,∞}_α` parameters.
    pub fn sup(alpha: f64) -> Result<Self> {
        Self::new(alpha, 0)
    }

    /// `W^{1,∞}_α` parameters.
    pub fn sup_grad(alpha: f64) -> Result<Self> {
        Self::new(alpha, 1)
    }

    /// Exponential rate.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Derivative order (0 or 1).
    pub fn order(&self) -> u8 {
        self.order
    }
}

/// Weighted sup-norm of a profile.
pub fn wnorm(profile: &ComplexProfile, params: &WeightedNormParams) -> Result<f64> {
    let base = wnorm_raw(profile.grid(), profile.values(), params.alpha);
    if params.order == 0 {
        return Ok(base);
    }
    let d = differentiate(profile, 1)?;
    Ok(base.max(wnorm_raw(d.grid(), d.values(), params.alpha)))
}

/// Weighted sup-norm over raw samples (order 0). Hot path for the time
/// integrators, which sample norms every few steps.
pub(crate) fn wnorm_raw(grid: &Grid1D, values: &[Complex64], alpha: f64) -> f64 {
    let mut m = 0.0f64;
    for (y, v) in grid.nodes().iter().zip(values) {
        let w = (alpha * y).exp() * v.norm();
        if w > m {
            m = w;
        }
    }
    m
}

/// Weighted sup-norm over raw samples restricted to nodes with `y ≤ hi_cut`.
/// Used by growth-rate fits on non-decaying backgrounds, where the outer
/// fraction of a truncated domain is polluted by the artificial boundary.
pub(crate) fn wnorm_raw_cutoff(
    grid: &Grid1D,
    values: &[Complex64],
    alpha: f64,
    hi_cut: f64,
) -> f64 {
    let mut m = 0.0f64;
    for (y, v) in grid.nodes().iter().zip(values) {
        if *y > hi_cut {
            break;
        }
        let w = (alpha * y).exp() * v.norm();
        if w > m {
            m = w;
        }
    }
    m
}

/// Centered second-order derivative of order 1 or 2, with second-order
/// one-sided stencils at the endpoints. Requires at least 5 nodes.
pub fn differentiate(profile: &ComplexProfile, order: u8) -> Result<ComplexProfile> {
    let n = profile.len();
    if n < 5 {
        return Err(Error::GridTooSmall { need: 5, have: n });
    }
    let h = profile.grid().h();
    let f = profile.values();
    let mut d = vec![Complex64::ZERO; n];
    match order {
        1 => {
            let two_h = 2.0 * h;
            d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / two_h;
            for j in 1..n - 1 {
                d[j] = (f[j + 1] - f[j - 1]) / two_h;
            }
            d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / two_h;
        }
        2 => {
            let h2 = h * h;
            d[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h2;
            for j in 1..n - 1 {
                d[j] = (f[j + 1] - 2.0 * f[j] + f[j - 1]) / h2;
            }
            d[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) / h2;
        }
        _ => {
            return Err(Error::Config(format!(
                "differentiate supports orders 1 and 2, got {order}"
            )))
        }
    }
    Ok(ComplexProfile::new_unchecked(Arc::clone(profile.grid()), d))
}

/// Trapezoid cumulative integral, zero at the first node.
pub fn cumulative_integral(profile: &ComplexProfile) -> ComplexProfile {
    let values = cumulative_integral_raw(profile.grid().h(), profile.values());
    ComplexProfile::new_unchecked(Arc::clone(profile.grid()), values)
}

/// Raw-buffer version of [`cumulative_integral`].
pub(crate) fn cumulative_integral_raw(h: f64, f: &[Complex64]) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(f.len());
    let mut acc = Complex64::ZERO;
    out.push(acc);
    for j in 1..f.len() {
        acc += 0.5 * h * (f[j - 1] + f[j]);
        out.push(acc);
    }
    out
}

/// In-place raw cumulative integral into a preallocated buffer (hot path).
pub(crate) fn cumulative_integral_into(h: f64, f: &[Complex64], out: &mut [Complex64]) {
    let mut acc = Complex64::ZERO;
    out[0] = acc;
    for j in 1..f.len() {
        acc += 0.5 * h * (f[j - 1] + f[j]);
        out[j] = acc;
    }
}

/// Trapezoid integral over the whole grid.
pub fn total_integral(profile: &ComplexProfile) -> Complex64 {
    let f = profile.values();
    let h = profile.grid().h();
    let n = f.len();
    if n < 2 {
        return Complex64::ZERO;
    }
    let mut acc = 0.5 * (f[0] + f[n - 1]);
    for v in &f[1..n - 1] {
        acc += *v;
    }
    h * acc
}

/// Indicator profile of `y ≥ a` with the convention `H(a) = 1`.
pub fn heaviside_profile(grid: Arc<Grid1D>, a: f64) -> Result<ComplexProfile> {
    if a < grid.lo() || a > grid.hi() {
        return Err(Error::OutOfDomain(format!(
            "heaviside threshold {a} outside [{}, {}]",
            grid.lo(),
            grid.hi()
        )));
    }
    let snap = 1e-12 * grid.h();
    let values: Vec<Complex64> = grid
        .nodes()
        .iter()
        .map(|&y| {
            if y >= a - snap {
                Complex64::ONE
            } else {
                Complex64::ZERO
            }
        })
        .collect();
    Ok(ComplexProfile::new_unchecked(grid, values))
}
