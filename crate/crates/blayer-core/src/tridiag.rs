//! Tridiagonal linear solvers.
//!
//! Two variants cover the crate's needs:
//!
//! * [`TridiagFactorC`] — a pivotless Thomas factorization over ℂ for the
//!   strictly diagonally dominant implicit-diffusion systems solved once per
//!   time step (factor once, back-substitute many times);
//! * [`solve_real_pivoted`] — LU with partial pivoting over ℝ for the nearly
//!   singular shifted systems arising in inverse iteration, where pivoting
//!   is required for stability.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Precomputed Thomas factorization of a complex tridiagonal matrix.
#[derive(Debug, Clone)]
pub struct TridiagFactorC {
    /// Normalized super-diagonal after forward elimination.
    cp: Vec<Complex64>,
    /// Inverse pivots.
    dinv: Vec<Complex64>,
    /// Original sub-diagonal (lower[0] unused).
    lower: Vec<Complex64>,
}

impl TridiagFactorC {
    /// Factor the matrix with the given diagonals. `lower[0]` and
    /// `upper[n−1]` are ignored. Fails on a vanishing pivot (the intended
    /// matrices are strictly diagonally dominant, so this indicates misuse).
    pub fn factor(diag: &[Complex64], lower: &[Complex64], upper: &[Complex64]) -> Result<Self> {
        let n = diag.len();
        if lower.len() != n || upper.len() != n {
            return Err(Error::Config("tridiagonal bands must have equal length".into()));
        }
        let mut cp = vec![Complex64::ZERO; n];
        let mut dinv = vec![Complex64::ZERO; n];
        let mut piv = diag[0];
        if piv.norm() == 0.0 {
            return Err(Error::NonConvergence("zero pivot in tridiagonal factorization".into()));
        }
        dinv[0] = piv.inv();
        cp[0] = upper[0] * dinv[0];
        for i in 1..n {
            piv = diag[i] - lower[i] * cp[i - 1];
            if piv.norm() == 0.0 {
                return Err(Error::NonConvergence(
                    "zero pivot in tridiagonal factorization".into(),
                ));
            }
            dinv[i] = piv.inv();
            if i + 1 < n {
                cp[i] = upper[i] * dinv[i];
            }
        }
        Ok(TridiagFactorC { cp, dinv, lower: lower.to_vec() })
    }

    /// Solve in place.
    pub fn solve(&self, rhs: &mut [Complex64]) {
        let n = rhs.len();
        debug_assert_eq!(n, self.dinv.len());
        rhs[0] *= self.dinv[0];
        for i in 1..n {
            rhs[i] = (rhs[i] - self.lower[i] * rhs[i - 1]) * self.dinv[i];
        }
        for i in (0..n - 1).rev() {
            let t = self.cp[i] * rhs[i + 1];
            rhs[i] -= t;
        }
    }
}

/// Solve a real tridiagonal system with partial pivoting (LAPACK `gtsv`
/// style, with one super-super-diagonal of fill-in). `dl[0]` and `du[n−1]`
/// are ignored. The matrix may be nearly singular; inverse iteration relies
/// on the amplified solution rather than on small residuals.
pub fn solve_real_pivoted(dl: &[f64], d: &[f64], du: &[f64], rhs: &mut [f64]) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    if dl.len() != n || du.len() != n || rhs.len() != n {
        return Err(Error::Config("tridiagonal bands must have equal length".into()));
    }
    // Internal band layout: sub[i] = A[i+1][i], sup[i] = A[i][i+1] for
    // i = 0..n−2; sup2 holds the pivoting fill-in A[i][i+2].
    let mut diag = d.to_vec();
    let sub: Vec<f64> = (0..n.saturating_sub(1)).map(|i| dl[i + 1]).collect();
    let mut sup: Vec<f64> = (0..n.saturating_sub(1)).map(|i| du[i]).collect();
    let mut sup2 = vec![0.0f64; n.saturating_sub(1)];
    // Zero pivots are nudged: inverse iteration deliberately solves nearly
    // singular systems and wants the amplified solution.
    let nudge = |x: f64| if x == 0.0 { f64::MIN_POSITIVE * 1e16 } else { x };

    for i in 0..n - 1 {
        if sub[i] == 0.0 {
            diag[i] = nudge(diag[i]);
        } else if diag[i].abs() >= sub[i].abs() {
            let fact = sub[i] / diag[i];
            diag[i + 1] -= fact * sup[i];
            rhs[i + 1] -= fact * rhs[i];
        } else {
            let fact = diag[i] / sub[i];
            diag[i] = sub[i];
            let temp = diag[i + 1];
            diag[i + 1] = sup[i] - fact * temp;
            if i < n - 2 {
                sup2[i] = sup[i + 1];
                sup[i + 1] = -fact * sup2[i];
            }
            sup[i] = temp;
            let t = rhs[i];
            rhs[i] = rhs[i + 1];
            rhs[i + 1] = t - fact * rhs[i + 1];
        }
    }
    diag[n - 1] = nudge(diag[n - 1]);
    rhs[n - 1] /= diag[n - 1];
    if n >= 2 {
        rhs[n - 2] = (rhs[n - 2] - sup[n - 2] * rhs[n - 1]) / diag[n - 2];
    }
    for i in (0..n.saturating_sub(2)).rev() {
        rhs[i] = (rhs[i] - sup[i] * rhs[i + 1] - sup2[i] * rhs[i + 2]) / diag[i];
    }
    Ok(())
}
