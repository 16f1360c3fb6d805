//! The diffusive (Prandtl) counterpart of the layer construction.
//!
//! The linearized diffusive model at tangential frequency `k` reads
//!
//! ```text
//! ∂_t u + ik·U·u + k·v·U' − ∂_yy u = f,   v = −i·∫₀^y u,
//! ```
//!
//! first order in time, with growth rate `σ₀_P·√k` in place of the
//! hyperbolic `σ₀·k^{1/3}`. The spectral parameter `γ_P` is the lower
//! half-plane zero of the matching Wronskian of the connecting equation
//! with right-hand multiplier `−i` (see [`crate::spectral`]); it is located
//! by a secant iteration seeded from the hyperbolic `γ` rotated by
//! `e^{−iπ/12}` (the phase that converts the cube-root branch geometry into
//! the square-root one). The layer frequency is `τ_P = (|U''(a)|/2)^{1/2}·γ_P`
//! and the profile family uses the stretched variable `z = c·k^{1/4}(y−a)`
//! with `c = (|U''(a)|/2)^{1/4}`:
//!
//! ```text
//! 𝕌_k = i·U'·H + i·U''(a)(y−a)(W − H) + i·c·(k^{−1/4}τ_P + k^{1/4}Q)·W'(z)
//! ℛ_k = i·k^{−1}·H·U''' + F1·(W − H) + F2·W'(z)
//! F1  = (U − U(a) − Q)·U''(a)(y−a) − (U' − Q')·(τ_P·k^{−1/2} + Q)
//! F2  = c·k^{1/4}·(U − U(a) − Q)·(τ_P·k^{−1/2} + Q)
//! ```
//!
//! with `Q = U''(a)(y−a)²/2` and `H` the Heaviside of `y ≥ a`. The pair
//! `(𝕌_k, −i∫𝕌_k)` solves the forced problem with `f = −k·e^{iτ_P√k·t}·ℛ_k`
//! exactly.
//!
//! ## Positive curvature and conjugation
//!
//! The construction requires `U''(a) < 0`. For a flow with `U''(a) > 0`
//! (the quadratic benchmark) the profiles are built for the negated shear
//! and conjugated: if `(𝕌̃, ℛ̃)` track frequency `τ_P` for `−U`, then
//! `(conj 𝕌̃, conj ℛ̃)` track `τ_eff = −conj(τ_P)` for `U`. The imaginary
//! part survives both flips, so the growth rate `σ₀_P√k` is unchanged.
//!
//! ## Quadratic benchmark
//!
//! For `U = (y−a)²/2` the shear coincides with its own parabolic
//! approximation, `U − U(a) − Q` and `U' − Q'` vanish identically and
//! `U''' ≡ 0`, so `ℛ_k ≡ 0` *exactly* (to the last bit): `e^{iτ_eff√k·t}𝕌_k`
//! is an exact homogeneous solution and the integrator can be checked
//! against a closed form with no forcing error budget at all
//! ([`quadratic_oracle`]). The flow does not decay, so the benchmark runs
//! on a truncated domain with unweighted norms and excludes the top 10% of
//! the domain from comparisons; the Dirichlet clamp at the top generates
//! only an evanescent boundary layer of width `∼(k·U)^{−1/2}` because its
//! phase is detuned from the interior characteristic.
//!
//! ## Time stepping
//!
//! [`evolve_prandtl`] uses a first-order IMEX step: diffusion and the local
//! transport `ik·U·u` are treated implicitly (one complex tridiagonal solve
//! per step, strictly diagonally dominant), the nonlocal term
//! `ik·U'·∫₀^y u` and the forcing explicitly. The explicit part obeys
//! `dt ≤ 0.25/(k·C_U)`; the step is `min(0.25/(k·C_U), 0.5·h)`. Treating
//! the local transport explicitly would be unconditionally unstable here:
//! at `k·U ∼ 10³`–`10⁴` the modulus factor `|1 − i·dt·kU|` per step
//! compounds to nonsense long before any accuracy limit is reached.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::evolve::{EvolveConfig, Forcing, TrackingReport};
use crate::fits::{linear_fit, loglog_slope};
use crate::grid::Grid1D;
use crate::inflate::{InflationRecord, InflationReport};
use crate::interp::CubicTable;
use crate::norms::{cumulative_integral_into, wnorm_raw, wnorm_raw_cutoff};
use crate::profile::ComplexProfile;
use crate::shear::ShearFlow;
use crate::spectral::{
    build_w_with_multiplier, matching_wronskian, solve_x_with_multiplier, Model,
    SpectralConstants, WProfile, DEFECT_TOL,
};
use crate::tridiag::TridiagFactorC;

/// Minimum number of grid nodes per layer width.
const NODES_PER_LAYER: f64 = 8.0;
/// Right-hand multiplier of the diffusive connecting equation.
const MULT: Complex64 = Complex64::new(0.0, -1.0);
/// Resolution (node count) used during the secant iterations; the shooting
/// accuracy is set by the adaptive integrator, not by the output nodes, so
/// the root search can run on a coarse node list.
const SECANT_NODES: usize = 256;
/// Maximum secant iterations for the spectral root.
const SECANT_MAX_ITER: usize = 30;

/// Spectral data of the diffusive model for one shear flow.
#[derive(Debug, Clone)]
pub struct PrandtlSpectral {
    /// `γ_P`, `τ_P`, `σ₀_P` (with `model = Prandtl`; the `alpha` field holds
    /// `|γ_P|²`, which reproduces the auxiliary eigenvalue).
    pub constants: SpectralConstants,
    /// Transition profile for the multiplier `−i`.
    pub w: WProfile,
    /// Matching defect of the connecting solution at `γ_P`.
    pub matching_defect: f64,
    /// Secant iterations spent locating `γ_P`.
    pub secant_iterations: usize,
}

impl PrandtlSpectral {
    /// Layer frequency for a given shear: `τ = (|U''(a)|/2)^{1/2}·γ_P`.
    /// `γ_P` does not depend on the shear, so one spectral object serves
    /// every admissible flow.
    pub fn tau_for(&self, shear: &ShearFlow) -> Complex64 {
        (shear.u2a().abs() / 2.0).sqrt() * self.constants.gamma
    }

    /// Evolution frequency for a given shear: `τ_P` itself when
    /// `U''(a) < 0`, the conjugation-corrected `−conj(τ_P)` otherwise.
    pub fn tau_effective(&self, shear: &ShearFlow) -> Complex64 {
        let tau = self.tau_for(shear);
        if shear.u2a() < 0.0 {
            tau
        } else {
            -tau.conj()
        }
    }

    /// Growth rate `σ₀_P = −Im τ_P` for a given shear (invariant under the
    /// conjugation correction).
    pub fn sigma0_for(&self, shear: &ShearFlow) -> f64 {
        -self.tau_for(shear).im
    }
}

/// Locate the diffusive spectral parameter and build its transition
/// profile.
///
/// The complex matching Wronskian `w(γ)` of the connecting equation with
/// multiplier `−i` is driven to zero by a secant iteration seeded at
/// `hyperbolic_gamma·e^{−iπ/12}` (second seed 3% further out). The search
/// fails with [`Error::SpectralFailure`] if an iterate leaves interval the
/// lower half-plane and with [`Error::NonConvergence`] if the Wronskian
/// does not vanish within the iteration budget. The converged root is then
/// resolved on `n` nodes over `[−z_half, z_half]`.
pub fn spectral_constants_prandtl(
    shear: &ShearFlow,
    hyperbolic_gamma: Complex64,
    z_half: f64,
    n: usize,
) -> Result<PrandtlSpectral> {
    if shear.u2a().abs() < 1e-14 {
        return Err(Error::Config("degenerate critical point: U''(a) = 0".into()));
    }
    if hyperbolic_gamma.im >= 0.0 {
        return Err(Error::SpectralFailure(format!(
            "seed must lie in the lower half-plane, got {hyperbolic_gamma}"
        )));
    }

    let seed = hyperbolic_gamma * Complex64::from_polar(1.0, -std::f64::consts::PI / 12.0);
    let mut z0 = seed;
    let mut z1 = seed * 1.03;
    let mut g0 = matching_wronskian(MULT, z0, z_half, SECANT_NODES)?;
    let mut g1 = matching_wronskian(MULT, z1, z_half, SECANT_NODES)?;
    let mut iterations = 0;
    for _ in 0..SECANT_MAX_ITER {
        iterations += 1;
        let denom = g1 - g0;
        if denom.norm() == 0.0 {
            break;
        }
        let dz = g1 * (z1 - z0) / denom;
        let z2 = z1 - dz;
        if z2.im >= 0.0 {
            return Err(Error::SpectralFailure(format!(
                "root search left the lower half-plane at iteration {iterations} (γ = {z2})"
            )));
        }
        z0 = z1;
        g0 = g1;
        z1 = z2;
        g1 = matching_wronskian(MULT, z1, z_half, SECANT_NODES)?;
        if g1.norm() <= 1e-12 || dz.norm() <= 1e-13 * (1.0 + z1.norm()) {
            break;
        }
    }
    if g1.norm() > 1e-8 {
        return Err(Error::NonConvergence(format!(
            "secant stalled after {iterations} iterations: |w| = {:.3e} at γ = {z1}",
            g1.norm()
        )));
    }

    let xp = solve_x_with_multiplier(MULT, z1, z_half, n, DEFECT_TOL)?;
    let w = build_w_with_multiplier(&xp, MULT)?;
    let tau = (shear.u2a().abs() / 2.0).sqrt() * z1;
    let sigma0 = -tau.im;
    if sigma0 <= 0.0 {
        return Err(Error::SpectralFailure(
            "diffusive spectral constants violate the half-plane signs".into(),
        ));
    }
    Ok(PrandtlSpectral {
        constants: SpectralConstants {
            alpha: z1.norm_sqr(),
            gamma: z1,
            tau,
            sigma0,
            model: Model::Prandtl,
        },
        w,
        matching_defect: xp.matching_defect,
        secant_iterations: iterations,
    })
}

/// The diffusive profile family at one frequency.
#[derive(Debug, Clone)]
pub struct PrandtlProfileSetK {
    /// Tangential frequency.
    pub k: u64,
    /// Horizontal velocity profile `𝕌_k` (wall value projected to zero).
    pub u: ComplexProfile,
    /// Forcing remainder `ℛ_k`.
    pub r: ComplexProfile,
    /// Remainder envelope coefficient `F1`.
    pub f1: ComplexProfile,
    /// Remainder envelope coefficient `F2`.
    pub f2: ComplexProfile,
    /// `‖𝕌_k‖_{W^{0,∞}_α}`.
    pub norm_u: f64,
    /// Discrete `W^{1,∞}_α` norm of `𝕌_k` measured with one-sided
    /// difference quotients (the profile is continuous but its derivative
    /// is only piecewise smooth at the critical point, so the norm is
    /// recorded rather than bounded a priori).
    pub norm_u_grad: f64,
    /// `k·‖ℛ_k‖_{W^{0,∞}_α}`.
    pub k_norm_r: f64,
    /// Evolution frequency (conjugation-corrected when `U''(a) > 0`).
    pub tau_eff: Complex64,
    /// Weight rate used for all norms above.
    pub alpha: f64,
}

/// Layer width `k^{−1/4}·(2/|U''(a)|)^{1/4}` at frequency `k`.
pub fn layer_width_prandtl(k: u64, shear: &ShearFlow) -> f64 {
    (2.0 / shear.u2a().abs()).sqrt().sqrt() * (k as f64).powf(-0.25)
}

/// Per-frequency grid: spacing `min(base_h, layer/10)` with the critical
/// point on a node.
pub fn layer_grid_prandtl(k: u64, shear: &ShearFlow, l: f64, base_h: f64) -> Result<Grid1D> {
    let target = base_h.min(layer_width_prandtl(k, shear) / 10.0);
    Grid1D::covering_marked(0.0, l, target, shear.a())
}

/// Weighted sup of one-sided difference quotients (the discrete
/// `W^{1,∞}_α` derivative part).
fn onesided_grad_norm(grid: &Grid1D, vals: &[Complex64], alpha: f64) -> f64 {
    let h = grid.h();
    let mut sup = 0.0f64;
    for j in 0..vals.len().saturating_sub(1) {
        let dq = (vals[j + 1] - vals[j]).norm() / h;
        sup = sup.max(dq * (alpha * grid.node(j)).exp());
    }
    sup
}

/// Assemble the diffusive profile family at frequency `k` on the given
/// grid (which must carry the critical point as a marked node).
///
/// `τ_P` is derived from `γ_P` and the shear's curvature here, so the same
/// [`PrandtlSpectral`] serves every admissible shear. Flows with
/// `U''(a) > 0` go through the conjugation path transparently.
pub fn build_profile_set_prandtl(
    k: u64,
    psc: &PrandtlSpectral,
    shear: &ShearFlow,
    grid: Arc<Grid1D>,
    alpha: f64,
) -> Result<PrandtlProfileSetK> {
    if psc.constants.model != Model::Prandtl {
        return Err(Error::Config("profile family requires diffusive constants".into()));
    }
    if k == 0 {
        return Err(Error::Config("frequency must be positive".into()));
    }
    if alpha > 0.0 && !shear.is_decaying() {
        return Err(Error::Config(
            "weighted norms require a decaying shear; use alpha = 0 on a truncated domain".into(),
        ));
    }
    let ia = grid.critical_index().ok_or_else(|| {
        Error::Config("profile grid must carry the critical point as a marked node".into())
    })?;
    let a = shear.a();
    if (grid.node(ia) - a).abs() > 1e-9 {
        return Err(Error::OutOfDomain(format!(
            "marked node {} does not match the shear's critical point {a}",
            grid.node(ia)
        )));
    }
    let layer = layer_width_prandtl(k, shear);
    if grid.h() > layer / NODES_PER_LAYER {
        return Err(Error::Resolution(format!(
            "grid spacing {:.3e} too coarse for the k = {k} layer (width {layer:.3e}; \
             need at least {NODES_PER_LAYER} nodes per layer)",
            grid.h()
        )));
    }

    // Conjugation path for positive curvature: build for −U, conjugate.
    let conj = shear.u2a() > 0.0;
    let negated;
    let work: &ShearFlow = if conj {
        negated = shear.negated();
        &negated
    } else {
        shear
    };

    let kf = k as f64;
    let k14 = kf.powf(0.25);
    let km14 = 1.0 / k14;
    let km12 = 1.0 / kf.sqrt();
    let u2a = work.u2a();
    let cp = (u2a.abs() / 2.0).sqrt().sqrt();
    let tau = (u2a.abs() / 2.0).sqrt() * psc.constants.gamma;
    let ua = work.u(a);
    let i = Complex64::I;

    let wtab = CubicTable::from_profile(&psc.w.w, Complex64::ZERO, Complex64::ONE);
    let wptab = CubicTable::from_profile(&psc.w.wprime, Complex64::ZERO, Complex64::ZERO);

    let n = grid.len();
    let mut uv = Vec::with_capacity(n);
    let mut rv = Vec::with_capacity(n);
    let mut f1v = Vec::with_capacity(n);
    let mut f2v = Vec::with_capacity(n);

    for (j, &y) in grid.nodes().iter().enumerate() {
        let s = y - a;
        let h_step = if j >= ia { 1.0 } else { 0.0 };
        let z = cp * k14 * s;
        let wz = wtab.eval(z);
        let wpz = wptab.eval(z);
        let u = work.u(y);
        let u1 = work.u1(y);
        let u3 = work.u3(y);
        let q = 0.5 * u2a * s * s;
        let qp = u2a * s;
        let w_min_h = wz - h_step;
        let env = tau * km12 + q;
        let du = u - ua - q;

        let uu = i * (u1 * h_step)
            + i * (u2a * s) * w_min_h
            + i * cp * (km14 * tau + k14 * q) * wpz;
        let f1 = Complex64::from(du * qp) - (u1 - qp) * env;
        let f2 = cp * k14 * du * env;
        let rr = i * (h_step * u3 / kf) + f1 * w_min_h + f2 * wpz;

        uv.push(uu);
        rv.push(rr);
        f1v.push(f1);
        f2v.push(f2);
    }
    if conj {
        for v in uv.iter_mut() {
            *v = v.conj();
        }
        for v in rv.iter_mut() {
            *v = v.conj();
        }
        for v in f1v.iter_mut() {
            *v = v.conj();
        }
        for v in f2v.iter_mut() {
            *v = v.conj();
        }
    }
    // Wall projection.
    uv[0] = Complex64::ZERO;
    let tau_eff = if conj { -tau.conj() } else { tau };

    let norm_u = wnorm_raw(&grid, &uv, alpha);
    let norm_u_grad = norm_u.max(onesided_grad_norm(&grid, &uv, alpha));
    let k_norm_r = kf * wnorm_raw(&grid, &rv, alpha);

    Ok(PrandtlProfileSetK {
        k,
        u: ComplexProfile::new(Arc::clone(&grid), uv)?,
        r: ComplexProfile::new(Arc::clone(&grid), rv)?,
        f1: ComplexProfile::new(Arc::clone(&grid), f1v)?,
        f2: ComplexProfile::new(Arc::clone(&grid), f2v)?,
        norm_u,
        norm_u_grad,
        k_norm_r,
        tau_eff,
        alpha,
    })
}

/// One row of the diffusive frequency sweep.
#[derive(Debug, Clone)]
pub struct PrandtlSweepRow {
    pub k: u64,
    /// `‖𝕌_k‖_{W^{0,∞}_α}`.
    pub norm_u: f64,
    /// `k·‖ℛ_k‖_{W^{0,∞}_α}`.
    pub k_norm_r: f64,
    /// `‖𝕌_k − i·U'·H‖_{W^{0,∞}_α}` — distance to the `k → ∞` limit.
    pub norm_u_minus_limit: f64,
    /// Discrete `W^{1,∞}_α` norm (one-sided quotients).
    pub norm_u_grad: f64,
}

/// Frequency sweep of the diffusive profile norms.
#[derive(Debug, Clone)]
pub struct PrandtlSweepTable {
    pub rows: Vec<PrandtlSweepRow>,
    /// Weight rate used.
    pub alpha: f64,
}

impl PrandtlSweepTable {
    /// `max/min` of `‖𝕌_k‖` across the sweep.
    pub fn max_min_ratio(&self) -> f64 {
        let max = self.rows.iter().map(|r| r.norm_u).fold(f64::MIN, f64::max);
        let min = self.rows.iter().map(|r| r.norm_u).fold(f64::MAX, f64::min);
        max / min
    }

    /// `max/min` of `k·‖ℛ_k‖` restricted to the top octave of the sweep.
    pub fn top_octave_r_ratio(&self) -> f64 {
        let kmax = self.rows.iter().map(|r| r.k).max().unwrap_or(0);
        let sel: Vec<f64> =
            self.rows.iter().filter(|r| 2 * r.k >= kmax).map(|r| r.k_norm_r).collect();
        let max = sel.iter().cloned().fold(f64::MIN, f64::max);
        let min = sel.iter().cloned().fold(f64::MAX, f64::min);
        max / min
    }

    /// Log-log rate of `‖𝕌_k − i·U'·H‖` against `k` (expected ≈ −1/4).
    pub fn limit_rate(&self) -> f64 {
        let ks: Vec<f64> = self.rows.iter().map(|r| r.k as f64).collect();
        let ds: Vec<f64> = self.rows.iter().map(|r| r.norm_u_minus_limit).collect();
        loglog_slope(&ks, &ds)
    }

    /// Observed `k`-dependence of the `W^{1,∞}_α` norm (recorded, not
    /// asserted: the derivative norm of the family need not stay bounded).
    pub fn grad_rate(&self) -> f64 {
        let ks: Vec<f64> = self.rows.iter().map(|r| r.k as f64).collect();
        let gs: Vec<f64> = self.rows.iter().map(|r| r.norm_u_grad).collect();
        loglog_slope(&ks, &gs)
    }
}

/// Run the diffusive profile builder across a frequency list (parallel,
/// outputs sorted by `k`).
pub fn bounds_sweep_prandtl(
    ks: &[u64],
    psc: &PrandtlSpectral,
    shear: &ShearFlow,
    l: f64,
    base_h: f64,
    alpha: f64,
) -> Result<PrandtlSweepTable> {
    if ks.is_empty() {
        return Err(Error::Config("frequency list is empty".into()));
    }
    let mut rows: Vec<PrandtlSweepRow> = ks
        .par_iter()
        .map(|&k| -> Result<PrandtlSweepRow> {
            let grid = Arc::new(layer_grid_prandtl(k, shear, l, base_h)?);
            let set = build_profile_set_prandtl(k, psc, shear, Arc::clone(&grid), alpha)?;
            // Distance to the k → ∞ limit i·U'·H (in terms of the original
            // shear on both conjugation paths).
            let ia = grid.critical_index().expect("layer grid marks the critical node");
            let mut dist = 0.0f64;
            for (j, &y) in grid.nodes().iter().enumerate() {
                let h_step = if j >= ia { 1.0 } else { 0.0 };
                let lim = Complex64::I * shear.u1(y) * h_step;
                let d = (set.u.value(j) - lim).norm() * (alpha * y).exp();
                dist = dist.max(d);
            }
            Ok(PrandtlSweepRow {
                k,
                norm_u: set.norm_u,
                k_norm_r: set.k_norm_r,
                norm_u_minus_limit: dist,
                norm_u_grad: set.norm_u_grad,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by_key(|r| r.k);
    Ok(PrandtlSweepTable { rows, alpha })
}

/// Output of a diffusive evolution run. `snapshots[i]` (when stored) is the
/// solution at `times[i]`.
#[derive(Debug, Clone)]
pub struct PrandtlTrajectory {
    /// Sample times, starting at 0.
    pub times: Vec<f64>,
    /// Weighted sup-norm of `u` at each sample time.
    pub norms: Vec<f64>,
    /// Solution snapshots at the sample times (empty unless requested).
    pub snapshots: Vec<ComplexProfile>,
    /// Time step actually used.
    pub dt: f64,
    /// Tangential frequency of the run.
    pub k: u64,
    /// Solution at the end of the horizon.
    pub final_u: ComplexProfile,
}

impl PrandtlTrajectory {
    /// Largest sampled value of `e^{−rate·t}·‖u(t)‖` together with the time
    /// at which it is attained.
    pub fn discounted_sup(&self, rate: f64) -> (f64, f64) {
        let mut best = f64::MIN;
        let mut at = 0.0;
        for (&t, &nrm) in self.times.iter().zip(&self.norms) {
            let v = (-rate * t).exp() * nrm;
            if v > best {
                best = v;
                at = t;
            }
        }
        (best, at)
    }
}

/// Largest stable step of the explicit (nonlocal) part at frequency `k`:
/// `min(0.25/(k·C_U), 0.5·h)` with `C_U = max|U| + L·max|U'|`.
pub fn stable_dt_prandtl(k: u64, shear: &ShearFlow, grid: &Grid1D) -> f64 {
    let mut umax = 0.0f64;
    let mut upmax = 0.0f64;
    for &y in grid.nodes() {
        umax = umax.max(shear.u(y).abs());
        upmax = upmax.max(shear.u1(y).abs());
    }
    let c_u = umax + upmax * (grid.hi() - grid.lo());
    let transport = if c_u > 0.0 { 0.25 / (k as f64 * c_u) } else { f64::INFINITY };
    transport.min(0.5 * grid.h())
}

/// Integrate the diffusive frequency-`k` problem over `[0, horizon]`.
///
/// IMEX stepping: `(I + dt·(ik·U − ∂_yy))·u^{n+1} = u^n + dt·(ik·U'·∫u^n + f)`,
/// homogeneous Dirichlet rows at both ends, tridiagonal factorization done
/// once per run.
pub fn evolve_prandtl(
    k: u64,
    shear: &ShearFlow,
    initial: &ComplexProfile,
    forcing: &Forcing,
    horizon: f64,
    cfg: &EvolveConfig,
) -> Result<PrandtlTrajectory> {
    if k == 0 {
        return Err(Error::Config("frequency must be positive".into()));
    }
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::Config(format!("horizon must be positive, got {horizon}")));
    }
    if cfg.nsamp == 0 {
        return Err(Error::Config("need at least one sampling interval".into()));
    }
    let grid = Arc::clone(initial.grid());
    let n = grid.len();
    if n < 5 {
        return Err(Error::GridTooSmall { need: 5, have: n });
    }
    let wall = initial.value(0).norm();
    if wall > 1e-8 * (1.0 + initial.sup()) {
        return Err(Error::InvalidProfile(format!(
            "initial data violates the wall condition: |u(0)| = {wall:.3e}"
        )));
    }
    let (fprofile, fomega, fscale) = match forcing {
        Forcing::None => (None, Complex64::ZERO, Complex64::ZERO),
        Forcing::Modulated { omega, profile, scale } => {
            if !profile.grid().same_as(&grid) {
                return Err(Error::GridMismatch(
                    "forcing profile is not on the evolution grid".into(),
                ));
            }
            (Some(profile.values().to_vec()), *omega, *scale)
        }
    };

    let dt_stable = stable_dt_prandtl(k, shear, &grid);
    let dt_target = cfg.dt_override.unwrap_or(dt_stable);
    if dt_target > dt_stable * (1.0 + 1e-12) || !(dt_target > 0.0) {
        return Err(Error::CflViolation { requested: dt_target, stable: dt_stable });
    }
    let sample_dt = horizon / cfg.nsamp as f64;
    let nsub = (sample_dt / dt_target).ceil().max(1.0) as usize;
    let dt = sample_dt / nsub as f64;

    let kf = k as f64;
    let h = grid.h();
    let h2inv = 1.0 / (h * h);
    let kup: Vec<f64> = grid.nodes().iter().map(|&y| kf * shear.u1(y)).collect();

    // Implicit matrix I + dt·(ik·U − ∂_yy) with identity Dirichlet rows.
    let mut diag = vec![Complex64::ONE; n];
    let mut lower = vec![Complex64::ZERO; n];
    let mut upper = vec![Complex64::ZERO; n];
    for j in 1..n - 1 {
        diag[j] = Complex64::new(1.0 + 2.0 * dt * h2inv, dt * kf * shear.u(grid.node(j)));
        lower[j] = Complex64::from(-dt * h2inv);
        upper[j] = Complex64::from(-dt * h2inv);
    }
    let factor = TridiagFactorC::factor(&diag, &lower, &upper)?;

    let mut u = initial.values().to_vec();
    let mut rhs = vec![Complex64::ZERO; n];
    let mut cum = vec![Complex64::ZERO; n];

    let norm_of = |vals: &[Complex64]| -> f64 {
        match cfg.cutoff {
            Some(c) => wnorm_raw_cutoff(&grid, vals, cfg.alpha, c),
            None => wnorm_raw(&grid, vals, cfg.alpha),
        }
    };
    let phase_at = |t: f64| -> Option<Complex64> {
        fprofile.as_ref().map(|_| fscale * (Complex64::I * fomega * t).exp())
    };

    let mut times = vec![0.0];
    let mut norms = vec![norm_of(&u)];
    let mut snapshots = Vec::new();
    if cfg.store_snapshots {
        snapshots.push(ComplexProfile::new_unchecked(Arc::clone(&grid), u.clone()));
    }

    for s in 1..=cfg.nsamp {
        let t_base = (s - 1) as f64 * sample_dt;
        for m in 0..nsub {
            let t1 = t_base + (m + 1) as f64 * dt;
            cumulative_integral_into(h, &u, &mut cum);
            let phase = phase_at(t1);
            rhs[0] = Complex64::ZERO;
            rhs[n - 1] = Complex64::ZERO;
            for j in 1..n - 1 {
                let mut acc = Complex64::I * kup[j] * cum[j];
                if let (Some(prof), Some(ph)) = (fprofile.as_deref(), phase) {
                    acc += ph * prof[j];
                }
                rhs[j] = u[j] + dt * acc;
            }
            factor.solve(&mut rhs);
            std::mem::swap(&mut u, &mut rhs);
        }
        let t_now = s as f64 * sample_dt;
        let nrm = norm_of(&u);
        if !nrm.is_finite() || nrm > 1e300 {
            return Err(Error::BlowUp { time: t_now, norm: nrm });
        }
        times.push(t_now);
        norms.push(nrm);
        if cfg.store_snapshots {
            snapshots.push(ComplexProfile::new_unchecked(Arc::clone(&grid), u.clone()));
        }
    }

    let final_u = ComplexProfile::new_unchecked(Arc::clone(&grid), u);
    Ok(PrandtlTrajectory { times, norms, snapshots, dt, k, final_u })
}

/// Discrete residual of the diffusive time-harmonic identity
///
/// ```text
/// iτ_eff√k·𝕌 + ik·U·𝕌 + k·𝕍·U' − 𝕌'' + k·ℛ ≈ 0,   𝕍 = −i·∫₀^y 𝕌,
/// ```
///
/// as a weighted sup-norm relative to the forcing amplitude `k·‖ℛ‖` (or to
/// `|τ_eff√k|·‖𝕌‖` when the remainder vanishes identically, as on the
/// quadratic benchmark). Exclusions as in the hyperbolic residual: wall
/// node and neighbor, critical node, two topmost nodes.
pub fn residual_prandtl(
    set: &PrandtlProfileSetK,
    shear: &ShearFlow,
) -> Result<f64> {
    let grid = set.u.grid();
    let n = grid.len();
    let ia = grid
        .critical_index()
        .ok_or_else(|| Error::Config("profile grid lost its critical marker".into()))?;
    let kf = set.k as f64;
    let lambda = set.tau_eff * kf.sqrt();
    let d2u = crate::norms::differentiate(&set.u, 2)?;
    let cum = crate::norms::cumulative_integral_raw(grid.h(), set.u.values());
    let mut sup = 0.0f64;
    for j in 2..n - 2 {
        if j == ia {
            continue;
        }
        let y = grid.node(j);
        let v = -Complex64::I * cum[j];
        let r = Complex64::I * lambda * set.u.value(j)
            + Complex64::I * (kf * shear.u(y)) * set.u.value(j)
            + kf * shear.u1(y) * v
            - d2u.value(j)
            + kf * set.r.value(j);
        sup = sup.max(r.norm() * (set.alpha * y).exp());
    }
    let scale = if set.k_norm_r > 1e-12 * lambda.norm() * set.norm_u {
        set.k_norm_r
    } else {
        lambda.norm() * set.norm_u
    };
    Ok(sup / scale)
}

/// Evolve the exact data/forcing pair of a diffusive profile family and
/// compare against the closed form `e^{iτ_eff√k·t}·𝕌_k`. Comparisons and
/// the growth fit respect the configured cutoff (used on truncated
/// non-decaying backgrounds).
pub fn forced_tracking_check_prandtl(
    k: u64,
    shear: &ShearFlow,
    set: &PrandtlProfileSetK,
    horizon: f64,
    nsamp: usize,
    cutoff: Option<f64>,
) -> Result<TrackingReport> {
    if k != set.k {
        return Err(Error::Config(format!(
            "frequency mismatch: asked k = {k}, profile family has k = {}",
            set.k
        )));
    }
    let kf = k as f64;
    let lambda = set.tau_eff * kf.sqrt();
    let forcing = Forcing::Modulated {
        omega: lambda,
        profile: set.r.clone(),
        scale: Complex64::from(-kf),
    };
    let cfg = EvolveConfig {
        nsamp,
        alpha: set.alpha,
        cutoff,
        store_snapshots: true,
        ..Default::default()
    };
    let traj = evolve_prandtl(k, shear, &set.u, &forcing, horizon, &cfg)?;

    let grid = set.u.grid();
    let hi_cut = cutoff.unwrap_or(f64::INFINITY);
    let base_sup = wnorm_raw_cutoff(grid, set.u.values(), set.alpha, hi_cut);
    let mut max_rel = 0.0f64;
    for (snap, &t) in traj.snapshots.iter().zip(&traj.times) {
        let phase = (Complex64::I * lambda * t).exp();
        let mut dsup = 0.0f64;
        for (j, &y) in grid.nodes().iter().enumerate() {
            if y > hi_cut {
                break;
            }
            let d = (snap.value(j) - phase * set.u.value(j)).norm() * (set.alpha * y).exp();
            dsup = dsup.max(d);
        }
        max_rel = max_rel.max(dsup / (phase.norm() * base_sup));
    }

    let lnn: Vec<f64> = traj.norms.iter().map(|v| v.ln()).collect();
    let (slope, _, _) = linear_fit(&traj.times, &lnn);
    let slope_expected = -lambda.im;
    let slope_rel_err = (slope - slope_expected).abs() / slope_expected;
    Ok(TrackingReport { max_rel_err: max_rel, slope, slope_expected, slope_rel_err, horizon })
}

/// Diffusive inflation window `T_k = ln k / (2(σ₀_P−σ)√k)`.
pub fn window_time_prandtl(k: u64, sigma0: f64, sigma: f64) -> f64 {
    let kf = k as f64;
    kf.ln() / (2.0 * (sigma0 - sigma) * kf.sqrt())
}

/// Windowed inflation experiment for the diffusive model: for each `k` the
/// data `𝕌_k/‖𝕌_k‖_{W^{1,∞}_α}` evolves homogeneously over `[0, T_k]` and
/// the discounted amplification `S_k = sup e^{−σ√k·t}‖u(t)‖/‖u(0)‖` is
/// recorded, together with the reference `C_σ·√k` built from the
/// frequency's own empirical constants.
#[allow(clippy::too_many_arguments)]
pub fn inflation_experiment_prandtl(
    ks: &[u64],
    psc: &PrandtlSpectral,
    shear: &ShearFlow,
    sigma_frac: f64,
    l: f64,
    base_h: f64,
    alpha: f64,
    nsamp: usize,
) -> Result<InflationReport> {
    if ks.is_empty() {
        return Err(Error::Config("frequency list is empty".into()));
    }
    if !(sigma_frac > 0.0 && sigma_frac < 1.0) {
        return Err(Error::Config(format!(
            "discount fraction must lie in (0,1), got {sigma_frac}"
        )));
    }
    if nsamp < 200 {
        return Err(Error::Config(format!(
            "windowed supremum needs ≥ 200 samples per window, got {nsamp}"
        )));
    }
    let sigma0 = psc.sigma0_for(shear);
    let sigma = sigma_frac * sigma0;
    let mut records: Vec<InflationRecord> = ks
        .par_iter()
        .map(|&k| -> Result<InflationRecord> {
            let grid = Arc::new(layer_grid_prandtl(k, shear, l, base_h)?);
            let set = build_profile_set_prandtl(k, psc, shear, Arc::clone(&grid), alpha)?;
            let nu = set.norm_u_grad;
            if nu <= 0.0 {
                return Err(Error::InvalidProfile("inflation data has zero norm".into()));
            }
            let data = set.u.scale(Complex64::from(1.0 / nu));
            let window = window_time_prandtl(k, sigma0, sigma);
            let cfg = EvolveConfig { nsamp, alpha, ..Default::default() };
            let traj = evolve_prandtl(k, shear, &data, &Forcing::None, window, &cfg)?;
            let sqk = (k as f64).sqrt();
            let (sup, t_argmax) = traj.discounted_sup(sigma * sqk);
            let s_k = sup / traj.norms[0];
            let gap = sigma0 - sigma;
            let c_sigma = 0.5 * set.norm_u * gap / (gap + set.k_norm_r);
            Ok(InflationRecord {
                k,
                sigma,
                window,
                s_k,
                t_argmax,
                c_ref: c_sigma * sqk,
                nu,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    records.sort_by_key(|r| r.k);
    let kf: Vec<f64> = records.iter().map(|r| r.k as f64).collect();
    let sk: Vec<f64> = records.iter().map(|r| r.s_k).collect();
    let exponent = loglog_slope(&kf, &sk);
    Ok(InflationReport { records, sigma, sigma0, alpha, exponent })
}

/// Frequency above which the diffusive growth `σ₀_P·√k` overtakes the
/// hyperbolic `σ₀·k^{1/3}`: `k* = (σ₀/σ₀_P)⁶`.
pub fn crossover_frequency(sigma0_hyperbolic: f64, sigma0_prandtl: f64) -> f64 {
    (sigma0_hyperbolic / sigma0_prandtl).powi(6)
}

/// Result of the exactly solvable quadratic benchmark.
#[derive(Debug, Clone)]
pub struct QuadraticReport {
    /// Frequency of the run.
    pub k: u64,
    /// `‖ℛ_k‖` on the truncated domain — zero to the last bit.
    pub r_sup: f64,
    /// Tracking comparison of the homogeneous run against the closed form.
    pub tracking: TrackingReport,
    /// Top-of-domain cutoff excluded from comparisons.
    pub cutoff: f64,
}

/// Run the quadratic benchmark: `U = (y−a)²/2` on `[0, a+8]`, unweighted
/// norms, comparisons truncated at 90% of the domain, horizon of two
/// e-foldings of the exact rate `σ₀_P√k`.
pub fn quadratic_oracle(psc: &PrandtlSpectral, k: u64, a: f64) -> Result<QuadraticReport> {
    let shear = ShearFlow::quadratic(a)?;
    let l = a + 8.0;
    let grid = Arc::new(layer_grid_prandtl(k, &shear, l, 0.02)?);
    let set = build_profile_set_prandtl(k, psc, &shear, grid, 0.0)?;
    let r_sup = set.k_norm_r / k as f64;
    let cutoff = 0.9 * l;
    let sigma0 = -set.tau_eff.im;
    let horizon = 2.0 / (sigma0 * (k as f64).sqrt());
    let tracking = forced_tracking_check_prandtl(k, &shear, &set, horizon, 240, Some(cutoff))?;
    Ok(QuadraticReport { k, r_sup, tracking, cutoff })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::tests::FIX;
    use once_cell::sync::Lazy;

    pub(crate) struct PrandtlFixture {
        pub psc: PrandtlSpectral,
        pub shear: ShearFlow,
    }

    pub(crate) static PFIX: Lazy<PrandtlFixture> = Lazy::new(|| {
        let f = &*FIX;
        let shear = ShearFlow::default_gaussian();
        let psc = spectral_constants_prandtl(&shear, f.sc.gamma, 12.0, 4800).unwrap();
        PrandtlFixture { psc, shear }
    });

    fn set_at(k: u64) -> PrandtlProfileSetK {
        let p = &*PFIX;
        let grid = Arc::new(layer_grid_prandtl(k, &p.shear, 12.0, 0.02).unwrap());
        build_profile_set_prandtl(k, &p.psc, &p.shear, grid, 1.0).unwrap()
    }

    #[test]
    fn secant_lands_on_the_rotated_square_root_of_alpha() {
        // Frozen fixture: γ_P = √α·e^{−3iπ/4}, where α is the auxiliary
        // eigenvalue behind the hyperbolic γ (= |γ_hyp|³).
        let p = &*PFIX;
        let f = &*FIX;
        let alpha = f.sc.gamma.norm().powi(3);
        let want = Complex64::from_polar(alpha.sqrt(), -3.0 * std::f64::consts::FRAC_PI_4);
        let got = p.psc.constants.gamma;
        assert!(
            (got - want).norm() <= 1e-6 * want.norm(),
            "γ_P = {got} vs frozen {want}"
        );
        assert!(got.im < 0.0);
        assert!(p.psc.matching_defect <= 1e-6);
        assert!(p.psc.secant_iterations <= 30);
        // |γ_P|² reproduces the eigenvalue.
        assert!((p.psc.constants.alpha - alpha).abs() <= 1e-5);
    }

    #[test]
    fn layer_frequencies_match_the_closed_forms() {
        let p = &*PFIX;
        let alpha = p.psc.constants.alpha;
        // Gaussian default (|U''(a)| = 2): σ₀_P = √(2α)/2.
        let s_gauss = p.psc.sigma0_for(&p.shear);
        assert!((s_gauss - (2.0 * alpha).sqrt() / 2.0).abs() < 1e-12);
        assert!((p.psc.constants.sigma0 - s_gauss).abs() < 1e-12);
        // Quadratic (|U''(a)| = 1): σ₀_P = √α/2, and the conjugation
        // correction flips the real part of τ only.
        let quad = ShearFlow::quadratic(2.0).unwrap();
        let s_quad = p.psc.sigma0_for(&quad);
        assert!((s_quad - alpha.sqrt() / 2.0).abs() < 1e-12);
        let te = p.psc.tau_effective(&quad);
        let tq = p.psc.tau_for(&quad);
        assert!((te.im - tq.im).abs() < 1e-15);
        assert!((te.re + tq.re).abs() < 1e-15);
    }

    #[test]
    fn transition_profile_matches_frozen_integral() {
        // Frozen fixture: I_P = e^{iπ/8}·√(π/2) for the multiplier −i.
        let p = &*PFIX;
        let xp = solve_x_with_multiplier(MULT, p.psc.constants.gamma, 12.0, 2400, DEFECT_TOL)
            .unwrap();
        let want = Complex64::from_polar(
            (std::f64::consts::PI / 2.0).sqrt(),
            std::f64::consts::FRAC_PI_8,
        );
        assert!(
            (xp.total_integral - want).norm() < 1e-4,
            "I_P = {} vs frozen {want}",
            xp.total_integral
        );
        // Transition profile boundary values and midpoint parity.
        let n = p.psc.w.w.len() - 1;
        assert!(p.psc.w.w.value(0).norm() <= 1e-8);
        assert!((p.psc.w.w.value(n) - Complex64::ONE).norm() <= 1e-8);
        assert!((p.psc.w.w.value(n / 2) - Complex64::new(0.5, 0.0)).norm() < 1e-5);
    }

    #[test]
    fn wronskian_rejects_perturbed_parameters() {
        let p = &*PFIX;
        let off = p.psc.constants.gamma * 1.05;
        let w = matching_wronskian(MULT, off, 12.0, SECANT_NODES).unwrap();
        assert!(w.norm() >= 1e-2, "|w(1.05γ_P)| = {:.3e}", w.norm());
    }

    #[test]
    fn norms_match_frozen_sweep_values() {
        let s = set_at(256);
        assert!(
            (s.norm_u - 14.445).abs() < 3e-3,
            "norm_u = {:.6} drifted from the frozen fixture",
            s.norm_u
        );
        assert!(
            (s.k_norm_r - 93.85).abs() < 0.3,
            "k_norm_r = {:.4} drifted from the frozen fixture",
            s.k_norm_r
        );
        assert_eq!(s.u.value(0), Complex64::ZERO);
    }

    #[test]
    fn sweep_plateaus_and_approaches_the_limit_at_the_quarter_rate() {
        let p = &*PFIX;
        let table =
            bounds_sweep_prandtl(&[64, 128, 256], &p.psc, &p.shear, 12.0, 0.02, 1.0).unwrap();
        assert_eq!(table.rows.len(), 3);
        assert!(table.max_min_ratio() < 1.01);
        let rate = table.limit_rate();
        assert!((rate + 0.25).abs() < 0.05, "limit rate {rate:.4}");
        assert!(table.grad_rate().is_finite());
        assert!(table.top_octave_r_ratio() < 2.0);
    }

    #[test]
    fn envelope_slopes_in_expected_bands() {
        let s = set_at(256);
        let a = PFIX.shear.a();
        let s_f1 = crate::profiles::envelope_slope(&s.f1, a, (0.02, 0.2), false).unwrap();
        assert!(
            (2.6..=3.4).contains(&s_f1),
            "|F1| envelope slope {s_f1:.3} outside [2.6, 3.4]"
        );
        let s_f2 = crate::profiles::envelope_slope(&s.f2, a, (0.02, 0.2), false).unwrap();
        assert!(
            (3.6..=4.5).contains(&s_f2),
            "|F2| envelope slope {s_f2:.3} outside [3.6, 4.5]"
        );
    }

    #[test]
    fn harmonic_residual_is_small_and_second_order() {
        let p = &*PFIX;
        // Refine the transition-profile table together with the y-grid;
        // a fixed table floors the quotient at its own quadrature error.
        let res_at = |nodes_per_unit: f64| -> f64 {
            let psc = spectral_constants_prandtl(
                &p.shear,
                FIX.sc.gamma,
                12.0,
                (48.0 * nodes_per_unit) as usize,
            )
            .unwrap();
            let grid = Arc::new(
                Grid1D::covering_marked(0.0, 12.0, 1.0 / nodes_per_unit, p.shear.a()).unwrap(),
            );
            let set = build_profile_set_prandtl(64, &psc, &p.shear, grid, 1.0).unwrap();
            residual_prandtl(&set, &p.shear).unwrap()
        };
        let r1 = res_at(250.0);
        let r2 = res_at(500.0);
        assert!(r1 < 1e-4, "residual {r1:.3e} at h = 1/250");
        let order = (r1 / r2).log2();
        assert!((order - 2.0).abs() < 0.4, "order {order:.3} ({r1:.3e} → {r2:.3e})");
    }

    #[test]
    fn forced_run_tracks_the_closed_form() {
        let p = &*PFIX;
        let set = set_at(64);
        let sigma0 = p.psc.sigma0_for(&p.shear);
        let window = (64.0f64).ln() / (2.0 * 0.5 * sigma0 * 8.0);
        let report =
            forced_tracking_check_prandtl(64, &p.shear, &set, window, 120, None).unwrap();
        assert!(report.max_rel_err < 1e-2, "tracking error {:.3e}", report.max_rel_err);
        assert!(
            report.slope_rel_err < 1e-2,
            "slope {:.6} vs expected {:.6}",
            report.slope,
            report.slope_expected
        );
    }

    #[test]
    fn quadratic_benchmark_is_exact() {
        let p = &*PFIX;
        let report = quadratic_oracle(&p.psc, 256, 2.0).unwrap();
        assert!(report.r_sup <= 1e-12, "remainder {:.3e} should vanish", report.r_sup);
        assert!(
            report.tracking.max_rel_err <= 1e-2,
            "tracking error {:.3e}",
            report.tracking.max_rel_err
        );
        assert!(
            report.tracking.slope_rel_err <= 2e-2,
            "slope {:.6} vs {:.6}",
            report.tracking.slope,
            report.tracking.slope_expected
        );
    }

    #[test]
    fn evolution_is_linear_and_validates_input() {
        let p = &*PFIX;
        let set = set_at(64);
        let cfg = EvolveConfig { nsamp: 4, ..Default::default() };
        let t1 = evolve_prandtl(64, &p.shear, &set.u, &Forcing::None, 0.05, &cfg).unwrap();
        let c = Complex64::new(0.5, 1.5);
        let t2 = evolve_prandtl(64, &p.shear, &set.u.scale(c), &Forcing::None, 0.05, &cfg)
            .unwrap();
        let mut err = 0.0f64;
        for (a, b) in t1.final_u.values().iter().zip(t2.final_u.values()) {
            err = err.max((c * a - b).norm());
        }
        assert!(err <= 1e-12 * t2.final_u.sup(), "linearity defect {err:.3e}");

        let over = EvolveConfig { nsamp: 4, dt_override: Some(1.0), ..Default::default() };
        assert!(matches!(
            evolve_prandtl(64, &p.shear, &set.u, &Forcing::None, 0.05, &over),
            Err(Error::CflViolation { .. })
        ));
        let bad_wall =
            ComplexProfile::from_real_fn(Arc::clone(set.u.grid()), |_| 1.0).unwrap();
        assert!(evolve_prandtl(64, &p.shear, &bad_wall, &Forcing::None, 0.05, &cfg).is_err());
    }

    #[test]
    fn windowed_inflation_grows_and_matches_frozen_head() {
        let p = &*PFIX;
        let report = inflation_experiment_prandtl(
            &[64, 128, 256],
            &p.psc,
            &p.shear,
            0.5,
            12.0,
            0.02,
            1.0,
            240,
        )
        .unwrap();
        assert_eq!(report.records.len(), 3);
        let s64 = report.records[0].s_k;
        assert!((s64 - 1.0037).abs() < 0.005, "S_64 = {s64:.4} drifted");
        assert!(report.records.windows(2).all(|q| q[0].s_k < q[1].s_k));
    }

    #[test]
    fn window_endpoint_identity() {
        for &k in &[64u64, 1024] {
            let kf = k as f64;
            let t = window_time_prandtl(k, 0.7, 0.35);
            let lhs = (-(0.7 - 0.35) * kf.sqrt() * t).exp();
            assert!((lhs - kf.powf(-0.5)).abs() < 1e-12);
        }
    }

    #[test]
    fn crossover_separates_the_growth_rates() {
        let p = &*PFIX;
        let f = &*FIX;
        let s_h = f.sc.sigma0;
        let s_p = p.psc.sigma0_for(&p.shear);
        let kstar = crossover_frequency(s_h, s_p);
        // Gaussian defaults: (√3/√2)⁶ = 27/8, up to the eigenvalue drift.
        assert!((kstar - 27.0 / 8.0).abs() < 1e-4, "k* = {kstar:.6}");
        let probe = |k: f64| (s_p * k.sqrt(), s_h * k.cbrt());
        let (below_p, below_h) = probe(kstar * 0.5);
        let (above_p, above_h) = probe(kstar * 2.0);
        assert!(below_p < below_h);
        assert!(above_p > above_h);
    }
}
