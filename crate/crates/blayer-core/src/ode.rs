//! Adaptive Runge–Kutta integration for small complex systems.
//!
//! The spectral stage solves second-order linear ODEs in the complex plane
//! by shooting; the integrand is stiff-free but spans fifteen orders of
//! magnitude, which a Dormand–Prince 5(4) pair with proportional step
//! control handles comfortably at `rtol ≈ 1e-11`.
//!
//! States are pairs `(f, f')` of complex numbers; right-hand sides are
//! closures over a real path parameter (shooting rays are parametrized by
//! arc length, so complex directions live inside the closure).

use num_complex::Complex64;

use crate::error::{Error, Result};

/// State type: `(value, derivative)`.
pub type State2 = [Complex64; 2];

// Dormand–Prince 5(4) coefficients.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A2: [f64; 1] = [1.0 / 5.0];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0];
const A6: [f64; 5] =
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0];
const B5: [f64; 7] =
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

const SAFETY: f64 = 0.9;
const MIN_SHRINK: f64 = 0.2;
const MAX_GROW: f64 = 5.0;
/// Floor protecting the error scaling against exact zeros.
const ATOL_FLOOR: f64 = 1e-290;

fn axpy(y: &State2, h: f64, coeffs: &[f64], ks: &[State2]) -> State2 {
    let mut out = *y;
    for (c, k) in coeffs.iter().zip(ks) {
        out[0] += h * c * k[0];
        out[1] += h * c * k[1];
    }
    out
}

/// Integrate `y' = f(t, y)` from `t0` to `t1` (either direction).
pub fn integrate<F>(f: &F, t0: f64, t1: f64, y0: State2, rtol: f64) -> Result<State2>
where
    F: Fn(f64, &State2) -> State2,
{
    let mut y = y0;
    let mut t = t0;
    let span = t1 - t0;
    if span == 0.0 {
        return Ok(y);
    }
    let dir = span.signum();
    let mut h = span / 64.0;
    let h_min = span.abs() * 1e-14;
    let mut k1 = f(t, &y);
    let mut steps = 0usize;
    const MAX_STEPS: usize = 2_000_000;

    while (t1 - t) * dir > 0.0 {
        if (t + h - t1) * dir > 0.0 {
            h = t1 - t;
        }
        let k2 = f(t + C[1] * h, &axpy(&y, h, &A2, &[k1]));
        let k3 = f(t + C[2] * h, &axpy(&y, h, &A3, &[k1, k2]));
        let k4 = f(t + C[3] * h, &axpy(&y, h, &A4, &[k1, k2, k3]));
        let k5 = f(t + C[4] * h, &axpy(&y, h, &A5, &[k1, k2, k3, k4]));
        let k6 = f(t + C[5] * h, &axpy(&y, h, &A6, &[k1, k2, k3, k4, k5]));
        let ks6 = [k1, k2, k3, k4, k5, k6];
        let y5 = axpy(&y, h, &B5[..6], &ks6);
        let k7 = f(t + h, &y5);
        let ks = [k1, k2, k3, k4, k5, k6, k7];
        let y4 = axpy(&y, h, &B4, &ks);

        // Componentwise scaled RMS error.
        let mut err2 = 0.0f64;
        for i in 0..2 {
            let e = (y5[i] - y4[i]).norm();
            let scale = ATOL_FLOOR + rtol * y5[i].norm().max(y[i].norm());
            let r = e / scale;
            err2 += r * r;
        }
        let err = (err2 / 2.0).sqrt();

        if err <= 1.0 {
            t += h;
            y = y5;
            k1 = k7; // first-same-as-last
        }
        let factor = if err > 0.0 {
            (SAFETY * err.powf(-0.2)).clamp(MIN_SHRINK, MAX_GROW)
        } else {
            MAX_GROW
        };
        h *= factor;
        if h.abs() < h_min {
            return Err(Error::NonConvergence(format!(
                "step size underflow at t = {t} (integrating to {t1})"
            )));
        }
        steps += 1;
        if steps > MAX_STEPS {
            return Err(Error::NonConvergence("step budget exhausted".into()));
        }
    }
    Ok(y)
}

/// Integrate through a monotone sequence of checkpoints, invoking `on_node`
/// with the state at each (including the first, with the initial state).
pub fn integrate_nodes<F>(
    f: &F,
    points: &[f64],
    y0: State2,
    rtol: f64,
    mut on_node: impl FnMut(usize, &State2),
) -> Result<()>
where
    F: Fn(f64, &State2) -> State2,
{
    if points.is_empty() {
        return Ok(());
    }
    let mut y = y0;
    on_node(0, &y);
    for i in 1..points.len() {
        y = integrate(f, points[i - 1], points[i], y, rtol)?;
        on_node(i, &y);
    }
    Ok(())
}
