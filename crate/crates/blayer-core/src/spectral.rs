//! Spectral constants and the connecting profiles `X` and `W`.
//!
//! ## The spectral condition
//!
//! The Fourier-layer construction hinges on a complex frequency `γ` in the
//! lower half-plane for which the second-order ODE
//!
//! ```text
//! (z² − γ)·X'' + 6z·X' + 6X = γ·(z² − γ)²·X
//! ```
//!
//! admits a solution decaying in both directions along the real line. For
//! the hyperbolic model `γ = α^{1/3}·e^{−2iπ/3}`, where `α` is the positive
//! eigenvalue of the auxiliary problem (see [`crate::eigen`]); the layer
//! frequency is `τ = (|U''(a)|/2)^{1/3}·γ` and the growth rate
//! `σ₀ = −Im τ > 0`.
//!
//! ## Numerics
//!
//! `X` is computed by two-sided shooting: integrate inward from `z = ±Z`
//! with WKB initial slopes `X'/X = ∓√(γ·(z²−γ))` (square-root branch with
//! positive real part, so both branches decay outward), rescale the branches
//! to agree at `z = 0`, and report the normalized Wronskian mismatch at the
//! matching point as the *matching defect*. The defect is the sine of the
//! angle between the two branch states `(X, X')`; it vanishes iff the two
//! one-sided decaying solutions are linearly dependent, i.e. iff `γ`
//! satisfies the spectral condition. (The eigensolution is even in `z`, so
//! a defect normalized by `|X(0)·X'(0)|` would divide by zero; the
//! angle-based normalization keeps the diagnostic meaningful and still
//! discriminates a 5% γ perturbation by thirteen orders of magnitude.)
//!
//! The transition profile is `W = (∫_{−Z}^z X)/I` with `I = ∫_{−Z}^{Z} X`,
//! so `W(−Z) = 0` and `W(Z) = 1` hold exactly by construction, and
//! `W' = X/I` is evaluated from samples of `X` rather than by differencing.
//!
//! The diffusive model leads to the same connection problem with the
//! right-hand multiplier `γ` replaced by `−i`, so the shooting core is
//! parameterized by that multiplier ([`solve_x_with_multiplier`],
//! [`build_w_with_multiplier`]); there the spectral parameter is no longer
//! supplied by an auxiliary eigenvalue but located by a root search on the
//! complex matching Wronskian ([`matching_wronskian`]).

use std::sync::Arc;

use num_complex::Complex64;

use crate::eigen::Eigenpair;
use crate::error::{Error, Result};
use crate::grid::Grid1D;
use crate::norms::cumulative_integral_raw;
use crate::ode::{integrate_nodes, State2};
use crate::profile::ComplexProfile;
use crate::shear::ShearFlow;

/// Default matching-defect tolerance.
pub const DEFECT_TOL: f64 = 1e-6;
/// `|I|` must exceed this multiple of `∫|X|`.
const ZERO_AVERAGE_TOL: f64 = 1e-6;
/// Truncation guard: `exp(−√|γ|·Z²/4)` must be below this.
const TAIL_TOL: f64 = 1e-12;
/// Shooting tolerance for the adaptive integrator.
const SHOOT_RTOL: f64 = 1e-11;

/// Which model a set of spectral constants belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    /// Wave-like model (relaxation + transport).
    Hyperbolic,
    /// Diffusive model.
    Prandtl,
}

impl Model {
    /// Stable lowercase name used in artifacts.
    pub fn name(&self) -> &'static str {
        match self {
            Model::Hyperbolic => "hyperbolic",
            Model::Prandtl => "prandtl",
        }
    }
}

/// The connecting solution `X` on `[−Z, Z]`.
#[derive(Debug, Clone)]
pub struct XProfile {
    /// Samples of `X`, normalized to `sup|X| = 1` with `X(0)` real positive.
    pub x: ComplexProfile,
    /// The spectral parameter used for the shooting.
    pub gamma: Complex64,
    /// Normalized Wronskian mismatch of the two shooting branches at `z = 0`.
    pub matching_defect: f64,
    /// `I = ∫ X` over the full window (trapezoid).
    pub total_integral: Complex64,
}

/// The transition profile `W` with its derivative and equation residual.
#[derive(Debug, Clone)]
pub struct WProfile {
    /// `W = cumulative ∫X / I`; `W(−Z) = 0`, `W(Z) = 1`.
    pub w: ComplexProfile,
    /// `W' = X/I`, from samples of `X` (never by differencing `W`).
    pub wprime: ComplexProfile,
    /// The spectral parameter.
    pub gamma: Complex64,
    /// Sup-norm residual of the integrated equation
    /// `m·(γ−z²)²·W' + d³/dz³[(γ−z²)·W] = 0` (five-point stencil), where
    /// `m` is the model's right-hand multiplier (`γ` or `−i`).
    pub ode_residual: f64,
}

/// Spectral constants of one model for one shear flow.
#[derive(Debug, Clone)]
pub struct SpectralConstants {
    /// Eigenvalue of the auxiliary problem.
    pub alpha: f64,
    /// Spectral parameter (lower half-plane).
    pub gamma: Complex64,
    /// Layer frequency `τ`.
    pub tau: Complex64,
    /// Growth rate `σ₀ = −Im τ`.
    pub sigma0: f64,
    /// Model tag.
    pub model: Model,
}

impl SpectralConstants {
    /// Stretching constant `c` relating `z = c·k^{1/3}(y−a)` (hyperbolic,
    /// `c = (|U''(a)|/2)^{1/3}`) or `z = c·k^{1/4}(y−a)` (diffusive,
    /// `c = (|U''(a)|/2)^{1/4}`).
    pub fn stretch(&self, shear: &ShearFlow) -> f64 {
        let base = shear.u2a().abs() / 2.0;
        match self.model {
            Model::Hyperbolic => base.cbrt(),
            Model::Prandtl => base.sqrt().sqrt(),
        }
    }
}

/// Square root of `mult·(z²−γ)` with positive real part: the WKB decay
/// slope of the connecting equation far from the turning points.
fn wkb_root(z: f64, gamma: Complex64, mult: Complex64) -> Complex64 {
    let r = (mult * (Complex64::new(z * z, 0.0) - gamma)).sqrt();
    if r.re >= 0.0 {
        r
    } else {
        -r
    }
}

/// Right-hand side of the first-order system for `X` on the real line,
/// with a general right-hand multiplier in place of `γ`.
fn x_rhs(gamma: Complex64, mult: Complex64) -> impl Fn(f64, &State2) -> State2 {
    move |z: f64, y: &State2| {
        let q = Complex64::new(z * z, 0.0) - gamma;
        let xpp = (mult * q * q * y[0] - 6.0 * z * y[1] - 6.0 * y[0]) / q;
        [y[1], xpp]
    }
}

/// Both shooting branches of the connecting equation, integrated inward
/// from `±Z` to the matching point `z = 0`.
struct Shot {
    grid: Grid1D,
    mid: usize,
    left_vals: Vec<Complex64>,
    right_vals: Vec<Complex64>,
    left_at_zero: State2,
    right_at_zero: State2,
}

/// Complex normalized Wronskian of two branch states (zero iff the branches
/// are linearly dependent); its modulus is the matching defect, the sine of
/// the angle between the states.
fn normalized_wronskian(left: &State2, right: &State2) -> Complex64 {
    let [xl, xlp] = *left;
    let [xr, xrp] = *right;
    let w = xl * xrp - xr * xlp;
    let nl = (xl.norm_sqr() + xlp.norm_sqr()).sqrt();
    let nr = (xr.norm_sqr() + xrp.norm_sqr()).sqrt();
    w / (nl * nr).max(f64::MIN_POSITIVE)
}

fn shoot_branches(mult: Complex64, gamma: Complex64, z_half: f64, n: usize) -> Result<Shot> {
    if gamma.im >= 0.0 {
        return Err(Error::SpectralFailure(format!(
            "spectral parameter must lie in the lower half-plane, got {gamma}"
        )));
    }
    if n < 16 {
        return Err(Error::GridTooSmall { need: 17, have: n + 1 });
    }
    let decay = {
        let s = mult.sqrt();
        s.re.abs()
    };
    let tail = (-decay * z_half * z_half / 2.0).exp();
    if tail > TAIL_TOL {
        return Err(Error::Resolution(format!(
            "window half-width {z_half} leaves tail mass {tail:.3e} > {TAIL_TOL:.1e}"
        )));
    }
    let n = if n % 2 == 0 { n } else { n + 1 };
    let grid = Grid1D::uniform(-z_half, z_half, n)?;
    let rhs = x_rhs(gamma, mult);
    let mid = n / 2;

    // Right branch: integrate from +Z down to 0 over the node sequence.
    let right_points: Vec<f64> = (mid..=n).rev().map(|j| grid.node(j)).collect();
    let y0_right = [Complex64::ONE, -wkb_root(z_half, gamma, mult)];
    let mut right_vals = vec![Complex64::ZERO; n - mid + 1];
    let mut right_at_zero = [Complex64::ZERO; 2];
    integrate_nodes(&rhs, &right_points, y0_right, SHOOT_RTOL, |i, y| {
        right_vals[i] = y[0];
        if i == right_points.len() - 1 {
            right_at_zero = *y;
        }
    })?;

    // Left branch: integrate from −Z up to 0.
    let left_points: Vec<f64> = (0..=mid).map(|j| grid.node(j)).collect();
    let y0_left = [Complex64::ONE, wkb_root(-z_half, gamma, mult)];
    let mut left_vals = vec![Complex64::ZERO; mid + 1];
    let mut left_at_zero = [Complex64::ZERO; 2];
    integrate_nodes(&rhs, &left_points, y0_left, SHOOT_RTOL, |i, y| {
        left_vals[i] = y[0];
        if i == left_points.len() - 1 {
            left_at_zero = *y;
        }
    })?;

    Ok(Shot { grid, mid, left_vals, right_vals, left_at_zero, right_at_zero })
}

/// Complex normalized matching Wronskian of the connecting equation with
/// right-hand multiplier `mult` at spectral parameter `gamma`. This is the
/// analytic function whose zeros (in the lower half-plane) are the spectral
/// parameters; root searches iterate on it directly.
pub fn matching_wronskian(
    mult: Complex64,
    gamma: Complex64,
    z_half: f64,
    n: usize,
) -> Result<Complex64> {
    let shot = shoot_branches(mult, gamma, z_half, n)?;
    Ok(normalized_wronskian(&shot.left_at_zero, &shot.right_at_zero))
}

/// Solve for `X` on `[−Z, Z]` with `n` intervals (forced even) at spectral
/// parameter `gamma`, enforcing the matching defect below `defect_tol`.
///
/// Fails with [`Error::SpectralFailure`] when the defect exceeds the
/// tolerance (γ does not satisfy the spectral condition on this window),
/// with [`Error::ZeroAverage`] when `|∫X|` is negligible compared to
/// `∫|X|`, and with [`Error::Resolution`] when the window is too short for
/// the tails to die out.
pub fn solve_x(gamma: Complex64, z_half: f64, n: usize, defect_tol: f64) -> Result<XProfile> {
    solve_x_with_multiplier(gamma, gamma, z_half, n, defect_tol)
}

/// [`solve_x`] with a general right-hand multiplier in place of `γ`
/// (`mult = γ` for the hyperbolic model, `mult = −i` for the diffusive one).
pub fn solve_x_with_multiplier(
    mult: Complex64,
    gamma: Complex64,
    z_half: f64,
    n: usize,
    defect_tol: f64,
) -> Result<XProfile> {
    let shot = shoot_branches(mult, gamma, z_half, n)?;
    let Shot { grid, mid, left_vals, right_vals, left_at_zero, right_at_zero } = shot;
    let n = grid.len() - 1;

    // Matching defect: sine of the angle between the two branch states.
    let [xl, _] = left_at_zero;
    let [xr, _] = right_at_zero;
    let defect = normalized_wronskian(&left_at_zero, &right_at_zero).norm();
    if defect > defect_tol {
        return Err(Error::SpectralFailure(format!(
            "matching defect {defect:.3e} exceeds {defect_tol:.1e} at gamma = {gamma}"
        )));
    }

    // Rescale the left branch to agree with the right at z = 0, assemble.
    if xl.norm() == 0.0 {
        return Err(Error::SpectralFailure("left branch vanished at the matching point".into()));
    }
    let scale = xr / xl;
    let mut values = Vec::with_capacity(n + 1);
    for v in &left_vals[..mid] {
        values.push(scale * v);
    }
    // right_vals runs from +Z inward; reverse it onto nodes mid..=n.
    for v in right_vals.iter().rev() {
        values.push(*v);
    }

    // Normalize: sup|X| = 1, then rotate so X(0) is real positive.
    let sup = values.iter().map(|v| v.norm()).fold(0.0f64, f64::max);
    if sup == 0.0 {
        return Err(Error::SpectralFailure("X vanished identically".into()));
    }
    for v in values.iter_mut() {
        *v /= sup;
    }
    let x0 = values[mid];
    if x0.norm() > 0.0 {
        let phase = x0.conj() / x0.norm();
        for v in values.iter_mut() {
            *v *= phase;
        }
    }

    // Total integral (trapezoid, same accumulation as the cumulative form
    // used by build_w so the two agree bit-for-bit).
    let cum = cumulative_integral_raw(grid.h(), &values);
    let total = *cum.last().expect("nonempty");
    let abs_mass: f64 = {
        let mut acc = 0.5 * (values[0].norm() + values[n].norm());
        for v in &values[1..n] {
            acc += v.norm();
        }
        acc * grid.h()
    };
    if total.norm() < ZERO_AVERAGE_TOL * abs_mass {
        return Err(Error::ZeroAverage { magnitude: total.norm(), floor: ZERO_AVERAGE_TOL * abs_mass });
    }

    let x = ComplexProfile::new(Arc::new(grid), values)?;
    Ok(XProfile { x, gamma, matching_defect: defect, total_integral: total })
}

/// Build the transition profile `W` from a connecting solution.
pub fn build_w(xp: &XProfile) -> Result<WProfile> {
    build_w_with_multiplier(xp, xp.gamma)
}

/// [`build_w`] with a general right-hand multiplier in place of `γ`; the
/// residual checks the integrated equation with that multiplier.
pub fn build_w_with_multiplier(xp: &XProfile, mult: Complex64) -> Result<WProfile> {
    let grid = Arc::clone(xp.x.grid());
    let h = grid.h();
    let n = grid.len() - 1;
    let xv = xp.x.values();
    let cum = cumulative_integral_raw(h, xv);
    let i_total = *cum.last().expect("nonempty");
    if i_total.norm() == 0.0 {
        return Err(Error::ZeroAverage { magnitude: 0.0, floor: f64::MIN_POSITIVE });
    }
    let wv: Vec<Complex64> = cum.iter().map(|&c| c / i_total).collect();
    let wpv: Vec<Complex64> = xv.iter().map(|&x| x / i_total).collect();

    // Integrated-equation residual via a centered five-point stencil for
    // the third derivative of g = (γ−z²)W.
    let gamma = xp.gamma;
    let zs = grid.nodes();
    let g: Vec<Complex64> =
        zs.iter().zip(&wv).map(|(&z, &w)| (gamma - z * z) * w).collect();
    let mut res = 0.0f64;
    let h3 = h * h * h;
    for j in 2..=n - 2 {
        let d3 = (g[j + 2] - g[j - 2] - 2.0 * (g[j + 1] - g[j - 1])) / (2.0 * h3);
        let q = gamma - zs[j] * zs[j];
        let r = mult * q * q * wpv[j] + d3;
        res = res.max(r.norm());
    }

    Ok(WProfile {
        w: ComplexProfile::new(Arc::clone(&grid), wv)?,
        wprime: ComplexProfile::new(grid, wpv)?,
        gamma,
        ode_residual: res,
    })
}

/// Hyperbolic spectral constants from the auxiliary eigenvalue and the
/// shear's critical-point curvature.
///
/// Uses the eigensolver's doubling-extrapolated eigenvalue: the matching
/// defect of the connecting profile amplifies the relative error of `γ`
/// about fivefold, so the single-grid eigenvalue floor (~7e-6 at the
/// production resolution) would land above the 1e-6 defect tolerance,
/// while the extrapolated value sits around 2e-10. The stored `alpha` is
/// the one `γ` is built from, keeping `γ = α^{1/3}·e^{−2iπ/3}` exact
/// within the struct.
pub fn spectral_constants_hyperbolic(
    eig: &Eigenpair,
    shear: &ShearFlow,
) -> Result<SpectralConstants> {
    shear.hyperbolic_admissible()?;
    let alpha = eig.refined_alpha();
    if alpha <= 0.0 {
        return Err(Error::SpectralFailure(format!(
            "auxiliary eigenvalue must be positive, got {alpha}"
        )));
    }
    let gamma = Complex64::from_polar(alpha.cbrt(), -2.0 * std::f64::consts::FRAC_PI_3);
    let c = (shear.u2a().abs() / 2.0).cbrt();
    let tau = c * gamma;
    let sigma0 = -tau.im;
    if gamma.im >= 0.0 || tau.im >= 0.0 || sigma0 <= 0.0 {
        return Err(Error::SpectralFailure(
            "spectral constants violate the half-plane signs".into(),
        ));
    }
    Ok(SpectralConstants { alpha, gamma, tau, sigma0, model: Model::Hyperbolic })
}

/// Independent cross-check of `X` against the auxiliary eigenfunction.
///
/// The connecting solution is the eigenfunction continued into the complex
/// plane: `X(z)/X(0) = f(δz)/f(0)` with `δ = α^{−1/6}·e^{−iπ/6}`. This
/// routine integrates the eigen-ODE for `f` along the rays `arg ζ = −π/6`
/// (for `z > 0`) and `arg ζ = +5π/6` (for `z < 0`) starting from the real
/// eigenfunction data `f(0), f'(0)`, and returns the predicted ratios
/// `X(z_j)/X(0)` for the requested sample points (`|z| ≤ 2`).
pub fn continuation_oracle(
    eig: &Eigenpair,
    gamma: Complex64,
    zs: &[f64],
) -> Result<Vec<Complex64>> {
    let alpha = eig.refined_alpha();
    if ((gamma.norm().powi(3) - alpha) / alpha).abs() > 1e-6 {
        return Err(Error::Config(format!(
            "gamma = {gamma} inconsistent with the auxiliary eigenvalue {alpha}"
        )));
    }
    for &z in zs {
        if z.abs() > 2.0 {
            return Err(Error::OutOfDomain(format!(
                "continuation oracle is restricted to |z| ≤ 2, got {z}"
            )));
        }
    }
    let f0 = eig.f_at_zero();
    let fp0 = eig.fprime_at_zero();
    if f0.norm() == 0.0 {
        return Err(Error::SpectralFailure("eigenfunction vanishes at the origin".into()));
    }
    let delta = alpha.powf(-1.0 / 6.0);

    let mut out = vec![Complex64::ZERO; zs.len()];
    for (sign, dir) in [
        (1.0f64, Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_6)),
        (-1.0f64, Complex64::from_polar(1.0, 5.0 * std::f64::consts::FRAC_PI_6)),
    ] {
        // Collect indices on this side, sorted by |z| for progressive work.
        let mut idx: Vec<usize> = zs
            .iter()
            .enumerate()
            .filter(|(_, &z)| if sign > 0.0 { z >= 0.0 } else { z < 0.0 })
            .map(|(i, _)| i)
            .collect();
        if idx.is_empty() {
            continue;
        }
        idx.sort_by(|&a, &b| zs[a].abs().total_cmp(&zs[b].abs()));
        let mut points = vec![0.0f64];
        points.extend(idx.iter().map(|&i| delta * zs[i].abs()));
        // g(r) = f(r·dir); g' = dir·f'; g'' = dir²·f''. The continued
        // equation is q·f'' + 6ζ·f' + 6f = α·q²·f with q = ζ² + 1 (the
        // substitution z = λζ, λ² = −γ turns γ(z²−γ)² into α·q² since
        // γ³ = α).
        let rhs = move |r: f64, y: &State2| -> State2 {
            let zeta = r * dir;
            let q = zeta * zeta + 1.0;
            let f = y[0];
            let fp = y[1] / dir;
            let fpp = alpha * q * f - (6.0 * zeta * fp + 6.0 * f) / q;
            [y[1], dir * dir * fpp]
        };
        let y0: State2 = [f0, dir * fp0];
        integrate_nodes(&rhs, &points, y0, 1e-12, |i, y| {
            if i > 0 {
                out[idx[i - 1]] = y[0] / f0;
            }
        })?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::solve_eigenproblem;
    use once_cell::sync::Lazy;

    static EIG: Lazy<Eigenpair> =
        Lazy::new(|| solve_eigenproblem(12.0, 4000, (1e-9, 6.0)).unwrap());
    static SC: Lazy<SpectralConstants> = Lazy::new(|| {
        spectral_constants_hyperbolic(&EIG, &ShearFlow::default_gaussian()).unwrap()
    });
    static XP: Lazy<XProfile> = Lazy::new(|| solve_x(SC.gamma, 12.0, 4800, DEFECT_TOL).unwrap());

    #[test]
    fn constants_have_the_right_geometry() {
        let sc = &*SC;
        assert!(sc.gamma.im < 0.0);
        assert!(sc.tau.im < 0.0);
        assert!(sc.sigma0 > 0.0);
        let arg_err = (sc.gamma.arg() + 2.0 * std::f64::consts::FRAC_PI_3).abs();
        assert!(arg_err <= 1e-12, "arg gamma off by {arg_err:.3e}");
        // Gaussian default: |U''(a)|/2 = 1, so tau = gamma and
        // sigma0 = sin(60°)·alpha^{1/3} ≈ √3/2.
        assert!((sc.tau - sc.gamma).norm() < 1e-14);
        assert!((sc.sigma0 - 0.75f64.sqrt()).abs() < 1e-5);
    }

    #[test]
    fn matching_defect_discriminates_gamma() {
        assert!(XP.matching_defect <= 1e-6, "defect {:.3e}", XP.matching_defect);
        // A 5% off-condition parameter must be rejected loudly.
        let bad = solve_x(SC.gamma * 1.05, 12.0, 4800, DEFECT_TOL);
        match bad {
            Err(Error::SpectralFailure(msg)) => {
                // Extract nothing; the probe below quantifies the defect.
                let _ = msg;
            }
            other => panic!("expected SpectralFailure, got {other:?}"),
        }
        let probe = solve_x(SC.gamma * 1.05, 12.0, 4800, f64::INFINITY).unwrap();
        assert!(probe.matching_defect >= 1e-2, "defect {:.3e}", probe.matching_defect);
    }

    #[test]
    fn complex_wronskian_vanishes_only_at_the_spectral_parameter() {
        let good = matching_wronskian(SC.gamma, SC.gamma, 12.0, 2400).unwrap();
        let off = SC.gamma * 1.05;
        let bad = matching_wronskian(off, off, 12.0, 2400).unwrap();
        assert!(good.norm() <= 1e-6, "|w(γ)| = {:.3e}", good.norm());
        assert!(bad.norm() >= 1e-2, "|w(1.05γ)| = {:.3e}", bad.norm());
    }

    #[test]
    fn x_matches_frozen_closed_form_samples() {
        // Frozen fixture: X(z) = e^{2iπ/3}(z²−γ)^{−2}·exp(−e^{−iπ/3} z²/2)
        // (normalized: X(0) = 1 = sup|X|) evaluated at z ∈ {0.5, 1, 2}.
        let exact = |z: f64| -> Complex64 {
            let gamma = Complex64::from_polar(1.0, -2.0 * std::f64::consts::FRAC_PI_3);
            let phase = Complex64::from_polar(1.0, 2.0 * std::f64::consts::FRAC_PI_3);
            let q = Complex64::new(z * z, 0.0) - gamma;
            let decay = Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_3);
            phase / (q * q) * (-decay * z * z / 2.0).exp()
        };
        // The numerical alpha is ≈1 − 6.7e-6; fixture comparison at 1e-4.
        let grid = XP.x.grid();
        for z in [0.5f64, 1.0, 2.0, -1.5] {
            let j = ((z - grid.lo()) / grid.h()).round() as usize;
            let got = XP.x.value(j);
            let want = exact(grid.node(j));
            assert!(
                (got - want).norm() < 1e-4,
                "X({z}): got {got}, want {want}"
            );
        }
        assert!((XP.x.value(XP.x.len() / 2) - Complex64::ONE).norm() < 1e-9);
    }

    #[test]
    fn total_integral_matches_frozen_value() {
        // Frozen fixture: I = e^{iπ/6}·√(π/2).
        let want = Complex64::from_polar(
            (std::f64::consts::PI / 2.0).sqrt(),
            std::f64::consts::FRAC_PI_6,
        );
        let got = XP.total_integral;
        assert!(
            (got - want).norm() < 1e-4,
            "I = {got} vs frozen {want}"
        );
    }

    #[test]
    fn w_boundary_values_are_exact() {
        let w = build_w(&XP).unwrap();
        let n = w.w.len() - 1;
        assert!(w.w.value(0).norm() <= 1e-8);
        assert!((w.w.value(n) - Complex64::ONE).norm() <= 1e-8);
        // Midpoint fixture: W(0) = 1/2 (parity of X).
        let mid = n / 2;
        assert!(
            (w.w.value(mid) - Complex64::new(0.5, 0.0)).norm() < 1e-5,
            "W(0) = {}",
            w.w.value(mid)
        );
        // ∫W' = W(Z) − W(−Z) = 1.
        assert!((crate::norms::total_integral(&w.wprime) - Complex64::ONE).norm() < 1e-10);
    }

    #[test]
    fn w_equation_residual_converges_at_second_order() {
        let r1 = build_w(&solve_x(SC.gamma, 12.0, 1200, DEFECT_TOL).unwrap())
            .unwrap()
            .ode_residual;
        let r2 = build_w(&solve_x(SC.gamma, 12.0, 2400, DEFECT_TOL).unwrap())
            .unwrap()
            .ode_residual;
        let order = (r1 / r2).log2();
        assert!(
            (order - 2.0).abs() <= 0.3,
            "W residual order {order:.3} (residuals {r1:.3e}, {r2:.3e})"
        );
    }

    #[test]
    fn continuation_oracle_agrees_with_shooting() {
        let zs = [-1.5f64, -0.5, 0.5, 1.0, 2.0];
        let pred = continuation_oracle(&EIG, SC.gamma, &zs).unwrap();
        let grid = XP.x.grid();
        let mid = XP.x.len() / 2;
        let x0 = XP.x.value(mid);
        for (z, p) in zs.iter().zip(&pred) {
            let j = ((z - grid.lo()) / grid.h()).round() as usize;
            let ratio = XP.x.value(j) / x0;
            assert!(
                (ratio - p).norm() <= 1e-4,
                "z = {z}: shooting {ratio}, oracle {p}"
            );
        }
    }

    #[test]
    fn oracle_validates_inputs() {
        assert!(continuation_oracle(&EIG, SC.gamma, &[2.5]).is_err());
        assert!(continuation_oracle(&EIG, SC.gamma * 1.2, &[1.0]).is_err());
    }

    #[test]
    fn short_window_is_a_resolution_error() {
        let err = solve_x(SC.gamma, 4.0, 1000, DEFECT_TOL).unwrap_err();
        assert!(matches!(err, Error::Resolution(_)));
    }

    #[test]
    fn upper_half_plane_gamma_rejected() {
        let err = solve_x(Complex64::new(0.5, 0.5), 12.0, 1000, DEFECT_TOL).unwrap_err();
        assert!(matches!(err, Error::SpectralFailure(_)));
    }
}
