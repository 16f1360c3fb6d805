//! The auxiliary self-adjoint eigenproblem behind the spectral constants.
//!
//! The operator
//!
//! ```text
//! (A f)(x) = f''(x)/(x²+1) + 6x f'(x)/(x²+1)² + 6 f(x)/(x²+1)²
//! ```
//!
//! has a unique positive eigenvalue `α` with an even, rapidly decaying
//! eigenfunction; every spectral constant downstream is a function of `α`.
//! `A` is self-adjoint in `L²(w dx)` with `w = (x²+1)⁴` and admits the
//! Sturm–Liouville form `A f = [(p f')' + c f]/w` with `p = (x²+1)³` and
//! `c = 6(x²+1)²`.
//!
//! ## Discretization
//!
//! Centered second-order flux differences on a uniform grid over
//! `[−X̄, X̄]` with homogeneous Dirichlet endpoints. Edge coefficients use
//! the geometric mean `p_{j±1/2} = √(p_j·p_{j±1})`, which keeps the scheme
//! second-order while making the eigenvalue's grid dependence small enough
//! for the stability checks downstream (the arithmetic-mean and
//! non-conservative variants measurably fail the `1e-5` doubling bound at
//! production resolution).
//!
//! ## Solver
//!
//! The symmetrized matrix `S = D A_h D⁻¹` (`D = diag(√w)`) is tridiagonal;
//! eigenvalues inside the search window are located by Sturm-count
//! bisection and eigenvectors recovered by inverse iteration with a pivoted
//! solver. Candidates must be real, positive, and satisfy a decay-envelope
//! test `|f(x)| ≤ exp(−√α·x²/4)` on the outer half of the domain.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::Grid1D;
use crate::profile::ComplexProfile;
use crate::tridiag::solve_real_pivoted;

/// Residual tolerance for the converged eigenpair.
const RESIDUAL_TOL: f64 = 1e-6;
/// Bisection stops when the bracket is this small (relative).
const BISECT_TOL: f64 = 1e-14;

/// Coefficients of the Sturm–Liouville form.
fn p_coef(x: f64) -> f64 {
    let q = x * x + 1.0;
    q * q * q
}
fn w_coef(x: f64) -> f64 {
    let q = x * x + 1.0;
    q * q * q * q
}
fn c_coef(x: f64) -> f64 {
    let q = x * x + 1.0;
    6.0 * q * q
}

/// A converged eigenpair of the auxiliary problem.
#[derive(Debug, Clone)]
pub struct Eigenpair {
    /// The eigenvalue at the requested resolution.
    pub alpha: f64,
    /// The same eigenvalue recomputed with doubled resolution (`2n`
    /// intervals); always produced, since the doubling distance is the
    /// solver's convergence certificate.
    pub alpha_doubled: f64,
    /// Eigenfunction on `[−X̄, X̄]`, real-valued, normalized to
    /// `sup|f| = 1` with positive sign at the maximum.
    pub f: ComplexProfile,
    /// Interior sup-norm residual `‖A_h f − α f‖_∞ / ‖f‖_∞`.
    pub residual: f64,
    /// Every eigenvalue found in the search window (including `alpha`).
    pub candidates: Vec<f64>,
}

impl Eigenpair {
    /// Half-width of the domain.
    pub fn x_half(&self) -> f64 {
        self.f.grid().hi()
    }

    /// Doubling self-consistency distance `|α_N − α_2N| / α_2N`.
    pub fn doubling_distance(&self) -> f64 {
        (self.alpha - self.alpha_doubled).abs() / self.alpha_doubled
    }

    /// Best eigenvalue estimate the doubling pair supports: the
    /// second-order scheme leaves an `O(h²)` error with a smooth leading
    /// term, so `α_2N + (α_2N − α_N)/3` cancels it and is fourth-order
    /// accurate. This is the value downstream spectral constants are built
    /// from — the matching defect of the connecting profile is roughly
    /// five times the relative error of `γ`, so it needs `α` well beyond
    /// the single-grid floor.
    pub fn refined_alpha(&self) -> f64 {
        self.alpha_doubled + (self.alpha_doubled - self.alpha) / 3.0
    }

    /// Eigenfunction value at `x = 0` (grid node).
    pub fn f_at_zero(&self) -> Complex64 {
        let j = self.f.len() / 2;
        self.f.value(j)
    }

    /// Centered-difference derivative at `x = 0` (≈ 0 by parity).
    pub fn fprime_at_zero(&self) -> Complex64 {
        let j = self.f.len() / 2;
        (self.f.value(j + 1) - self.f.value(j - 1)) / (2.0 * self.f.grid().h())
    }
}

/// Symmetrized interior tridiagonal matrix: diagonal and super-diagonal.
struct SymTri {
    diag: Vec<f64>,
    off: Vec<f64>, // off[i] couples interior nodes i and i+1
}

fn assemble(x_half: f64, n: usize) -> (Grid1D, SymTri) {
    let grid = Grid1D::uniform(-x_half, x_half, n).expect("validated by caller");
    let h = grid.h();
    let h2 = h * h;
    let nodes = grid.nodes();
    let p: Vec<f64> = nodes.iter().map(|&x| p_coef(x)).collect();
    let w: Vec<f64> = nodes.iter().map(|&x| w_coef(x)).collect();
    // Flux coefficients between nodes j and j+1.
    let phalf: Vec<f64> = (0..n).map(|j| (p[j] * p[j + 1]).sqrt()).collect();
    let m = n - 1;
    let mut diag = Vec::with_capacity(m);
    let mut off = Vec::with_capacity(m.saturating_sub(1));
    for i in 1..n {
        let d = (-(phalf[i - 1] + phalf[i]) / h2 + c_coef(nodes[i])) / w[i];
        diag.push(d);
        if i + 1 < n {
            off.push(phalf[i] / (h2 * (w[i] * w[i + 1]).sqrt()));
        }
    }
    (grid, SymTri { diag, off })
}

/// Number of eigenvalues of the symmetric tridiagonal matrix below `x`.
fn sturm_count(t: &SymTri, x: f64) -> usize {
    let mut count = 0usize;
    let mut q = t.diag[0] - x;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..t.diag.len() {
        if q == 0.0 {
            q = -f64::MIN_POSITIVE * 1e16;
        }
        q = t.diag[i] - x - t.off[i - 1] * t.off[i - 1] / q;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Isolate the `idx`-th eigenvalue (0-based, counted from `lo`) by bisection.
fn bisect_eigenvalue(t: &SymTri, lo: f64, hi: f64, count_lo: usize, idx: usize) -> f64 {
    let target = count_lo + idx + 1; // want count(x) >= target
    let mut a = lo;
    let mut b = hi;
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if sturm_count(t, mid) >= target {
            b = mid;
        } else {
            a = mid;
        }
        if (b - a) <= BISECT_TOL * b.abs().max(1.0) {
            break;
        }
    }
    0.5 * (a + b)
}

/// Inverse iteration for the eigenvector of `S` at eigenvalue `lam`.
fn inverse_iteration(t: &SymTri, lam: f64, x_nodes: &[f64]) -> Vec<f64> {
    let m = t.diag.len();
    let diag: Vec<f64> = t.diag.iter().map(|d| d - lam).collect();
    let mut dl = vec![0.0f64; m];
    let mut du = vec![0.0f64; m];
    for i in 1..m {
        dl[i] = t.off[i - 1];
    }
    for i in 0..m - 1 {
        du[i] = t.off[i];
    }
    // Deterministic start close to the expected mode shape (in the
    // symmetrized variable v = √w·f the gaussian bump is a good seed).
    let mut v: Vec<f64> = x_nodes[1..=m]
        .iter()
        .map(|&x| (-x * x / 4.0).exp() * w_coef(x).sqrt())
        .collect();
    normalize(&mut v);
    for _ in 0..4 {
        solve_real_pivoted(&dl, &diag, &du, &mut v).expect("band lengths match");
        normalize(&mut v);
    }
    v
}

fn normalize(v: &mut [f64]) {
    let s = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if s > 0.0 {
        for x in v.iter_mut() {
            *x /= s;
        }
    }
}

/// Apply the flux discretization of `A` to full-grid samples (Dirichlet
/// values included) and return the interior sup residual against `lam·f`.
fn residual_sup(grid: &Grid1D, f: &[f64], lam: f64) -> f64 {
    let n = grid.len() - 1;
    let h2 = grid.h() * grid.h();
    let nodes = grid.nodes();
    let mut worst = 0.0f64;
    for j in 1..n {
        let pl = (p_coef(nodes[j - 1]) * p_coef(nodes[j])).sqrt();
        let pr = (p_coef(nodes[j]) * p_coef(nodes[j + 1])).sqrt();
        let af = ((pr * (f[j + 1] - f[j]) - pl * (f[j] - f[j - 1])) / h2
            + c_coef(nodes[j]) * f[j])
            / w_coef(nodes[j]);
        worst = worst.max((af - lam * f[j]).abs());
    }
    worst
}

/// Decay-envelope test on the outer half of the domain:
/// `|f(x)| ≤ exp(−√α·x²/4)` for `|x| ≥ X̄/2` (with `sup|f| = 1`).
fn envelope_ok(grid: &Grid1D, f: &[f64], alpha: f64) -> bool {
    if alpha <= 0.0 {
        return false;
    }
    let rate = alpha.sqrt() / 4.0;
    let x_half = grid.hi();
    let mut c_out = 0.0f64;
    for (x, v) in grid.nodes().iter().zip(f) {
        if x.abs() >= 0.5 * x_half {
            c_out = c_out.max(v.abs() * (rate * x * x).exp());
        }
    }
    c_out <= 1.0
}

/// Solve the auxiliary eigenproblem on `[−X̄, X̄]` with `n` intervals,
/// searching the window `(window.0, window.1)`.
///
/// Requirements: `X̄ ≥ 8`, `n ≥ 500` (odd `n` is bumped to keep a node at
/// `x = 0`). Returns the smallest admissible eigenvalue together with its
/// sup-normalized eigenfunction; all window eigenvalues are reported in
/// [`Eigenpair::candidates`].
pub fn solve_eigenproblem(x_half: f64, n: usize, window: (f64, f64)) -> Result<Eigenpair> {
    if !(x_half.is_finite() && x_half >= 8.0) {
        return Err(Error::Config(format!("domain half-width must be ≥ 8, got {x_half}")));
    }
    if n < 500 {
        return Err(Error::GridTooSmall { need: 501, have: n + 1 });
    }
    let (lo, hi) = window;
    if !(lo.is_finite() && hi.is_finite() && hi > lo && lo >= 0.0) {
        return Err(Error::Config(format!("invalid search window ({lo}, {hi})")));
    }
    let n = if n % 2 == 0 { n } else { n + 1 };

    let (grid, tri) = assemble(x_half, n);
    let count_lo = sturm_count(&tri, lo);
    let count_hi = sturm_count(&tri, hi);
    let found = count_hi - count_lo;
    if found == 0 {
        return Err(Error::SpectralFailure(format!(
            "no eigenvalue in the window ({lo}, {hi})"
        )));
    }

    let mut candidates = Vec::with_capacity(found);
    for idx in 0..found {
        candidates.push(bisect_eigenvalue(&tri, lo, hi, count_lo, idx));
    }

    // Examine candidates in increasing order; keep the first admissible one.
    let mut chosen: Option<(f64, Vec<f64>, f64)> = None;
    for &lam in &candidates {
        if lam <= 0.0 {
            continue;
        }
        let v = inverse_iteration(&tri, lam, grid.nodes());
        // Recover f = v/√w on the full grid with Dirichlet endpoints.
        let mut f = vec![0.0f64; grid.len()];
        for (i, vi) in v.iter().enumerate() {
            f[i + 1] = vi / w_coef(grid.node(i + 1)).sqrt();
        }
        // Normalize sup|f| = 1 with positive maximum.
        let (jmax, _) = f
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .expect("nonempty");
        let scale = f[jmax];
        for x in f.iter_mut() {
            *x /= scale;
        }
        if !envelope_ok(&grid, &f, lam) {
            continue;
        }
        let res = residual_sup(&grid, &f, lam);
        chosen = Some((lam, f, res));
        break;
    }

    let (alpha, f, residual) = chosen.ok_or_else(|| {
        Error::SpectralFailure(format!(
            "no candidate in ({lo}, {hi}) passed the decay-envelope test \
             (candidates: {candidates:?})"
        ))
    })?;
    if residual > RESIDUAL_TOL {
        return Err(Error::NonConvergence(format!(
            "eigenpair residual {residual:.3e} exceeds {RESIDUAL_TOL:.1e}"
        )));
    }

    // Recompute the same eigenvalue at doubled resolution: the doubling
    // distance certifies convergence and the pair yields the extrapolated
    // value used by the spectral stage.
    let (_, tri2) = assemble(x_half, 2 * n);
    let bracket = 1e-3 * alpha.max(1.0);
    let (blo, bhi) = (alpha - bracket, alpha + bracket);
    let c_lo = sturm_count(&tri2, blo);
    let c_hi = sturm_count(&tri2, bhi);
    if c_hi == c_lo {
        return Err(Error::NonConvergence(format!(
            "doubled-resolution eigenvalue drifted more than {bracket:.1e} from {alpha}"
        )));
    }
    let mut alpha_doubled = bisect_eigenvalue(&tri2, blo, bhi, c_lo, 0);
    for idx in 1..(c_hi - c_lo) {
        let cand = bisect_eigenvalue(&tri2, blo, bhi, c_lo, idx);
        if (cand - alpha).abs() < (alpha_doubled - alpha).abs() {
            alpha_doubled = cand;
        }
    }

    let values: Vec<Complex64> = f.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let profile = ComplexProfile::new(Arc::new(grid), values)?;
    Ok(Eigenpair { alpha, alpha_doubled, f: profile, residual, candidates })
}
