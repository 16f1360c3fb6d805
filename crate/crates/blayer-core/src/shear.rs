//! Background shear flows.
//!
//! A [`ShearFlow`] provides the background profile `U(y)` and its first four
//! derivatives. Three families are supported:
//!
//! * **Gaussian bump** `U(y) = −κ(y−a)²·exp(−β(y−a)²)` — decays at infinity
//!   together with all derivatives, has a non-degenerate critical point at
//!   `y = a` with `U(a) = U'(a) = 0` and `U''(a) = −2κ < 0`. This is the
//!   production family for the hyperbolic model.
//! * **Quadratic** `U(y) = (y−a)²/2` — the exactly solvable diffusive
//!   benchmark. It does not decay, so it is admissible only for the
//!   diffusive model on a truncated domain with unweighted norms.
//! * **Tabulated** — user-supplied samples of `U, U', U'', U''', U''''`,
//!   interpolated cubically. Structural relations at the critical point are
//!   validated on construction.
//!
//! ## Critical-point data
//!
//! All layer constructions depend on the shear only through the critical
//! point location `a` and the curvature `U''(a)`; [`ShearFlow::u2a`] exposes
//! the exact family value rather than an interpolated one.

use crate::error::{Error, Result};

/// Tolerance for critical-point structural checks on tabulated flows.
const TABLE_CRIT_TOL: f64 = 1e-8;

/// Family tag for a background shear flow.
#[derive(Debug, Clone, PartialEq)]
pub enum ShearFamily {
    /// `U(y) = −κ(y−a)²·exp(−β(y−a)²)`.
    GaussianBump,
    /// `U(y) = (y−a)²/2`.
    Quadratic,
    /// Sampled `(y, U, U', U'', U''', U'''')` rows on a uniform y-grid.
    UserTable,
}

/// A background shear flow with evaluators for `U` through `U''''`.
#[derive(Debug, Clone)]
pub struct ShearFlow {
    family: ShearFamily,
    a: f64,
    kappa: f64,
    beta: f64,
    /// Overall sign multiplying the family formula (flipped by the
    /// conjugation trick for positive-curvature critical points).
    sign: f64,
    /// Tabulated rows for `UserTable` (empty otherwise): y0, spacing, and
    /// columns for the five derivative orders.
    table: Option<ShearTable>,
}

#[derive(Debug, Clone)]
struct ShearTable {
    y0: f64,
    h: f64,
    cols: [Vec<f64>; 5],
    u2a: f64,
}

impl ShearFlow {
    /// Gaussian bump with amplitude `kappa > 0`, width parameter `beta > 0`
    /// and critical point `a > 0`.
    pub fn gaussian_bump(a: f64, kappa: f64, beta: f64) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::Config(format!("critical point must satisfy a > 0, got {a}")));
        }
        if !(kappa.is_finite() && kappa > 0.0) {
            return Err(Error::Config(format!("gaussian bump needs kappa > 0, got {kappa}")));
        }
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::Config(format!("gaussian bump needs beta > 0, got {beta}")));
        }
        Ok(ShearFlow { family: ShearFamily::GaussianBump, a, kappa, beta, sign: 1.0, table: None })
    }

    /// The default production flow: `a = 2`, `κ = 1`, `β = 1`.
    pub fn default_gaussian() -> Self {
        Self::gaussian_bump(2.0, 1.0, 1.0).expect("default parameters are valid")
    }

    /// Quadratic benchmark flow `U(y) = (y−a)²/2`.
    pub fn quadratic(a: f64) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::Config(format!("critical point must satisfy a > 0, got {a}")));
        }
        Ok(ShearFlow { family: ShearFamily::Quadratic, a, kappa: 0.0, beta: 0.0, sign: 1.0, table: None })
    }

    /// Tabulated flow from uniform samples of `(U, U', U'', U''', U'''')`.
    ///
    /// `rows[j] = [U, U', U'', U''', U'''']` at `y = y0 + j·h`. The critical
    /// point `a` must be covered by the table and satisfy
    /// `U(a) = U'(a) = 0`, `U''(a) ≠ 0` to within interpolation accuracy.
    pub fn user_table(a: f64, y0: f64, h: f64, rows: Vec<[f64; 5]>) -> Result<Self> {
        if rows.len() < 4 {
            return Err(Error::GridTooSmall { need: 4, have: rows.len() });
        }
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::Config(format!("table spacing must be positive, got {h}")));
        }
        let y_end = y0 + (rows.len() - 1) as f64 * h;
        if a <= y0 || a >= y_end {
            return Err(Error::OutOfDomain(format!(
                "critical point a = {a} outside table range [{y0}, {y_end}]"
            )));
        }
        for (j, row) in rows.iter().enumerate() {
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidProfile(format!("non-finite table row {j}")));
            }
        }
        let mut cols: [Vec<f64>; 5] = Default::default();
        for row in &rows {
            for (c, col) in cols.iter_mut().enumerate() {
                col.push(row[c]);
            }
        }
        let table = ShearTable { y0, h, cols, u2a: 0.0 };
        let mut flow =
            ShearFlow {
                family: ShearFamily::UserTable,
                a,
                kappa: 0.0,
                beta: 0.0,
                sign: 1.0,
                table: Some(table),
            };
        // Structural relations at the critical point.
        let ua = flow.u(a);
        let u1a = flow.u1(a);
        let u2a = flow.u2(a);
        let scale = flow.table.as_ref().unwrap().cols[0]
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()))
            .max(1e-300);
        if ua.abs() > TABLE_CRIT_TOL * scale || u1a.abs() > TABLE_CRIT_TOL * scale.max(1.0) {
            return Err(Error::Config(format!(
                "tabulated flow has U(a) = {ua:.3e}, U'(a) = {u1a:.3e}; \
                 the critical point must be a zero of U and U'"
            )));
        }
        if u2a.abs() <= TABLE_CRIT_TOL {
            return Err(Error::Config(
                "tabulated flow has degenerate curvature U''(a) ≈ 0 at the critical point".into(),
            ));
        }
        flow.table.as_mut().unwrap().u2a = u2a;
        Ok(flow)
    }

    /// Family tag.
    pub fn family(&self) -> &ShearFamily {
        &self.family
    }

    /// Critical point location.
    pub fn a(&self) -> f64 {
        self.a
    }

    /// Gaussian amplitude (zero for other families).
    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// Gaussian width parameter (zero for other families).
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Curvature `U''(a)` at the critical point (exact family value).
    pub fn u2a(&self) -> f64 {
        self.sign
            * match self.family {
                ShearFamily::GaussianBump => -2.0 * self.kappa,
                ShearFamily::Quadratic => 1.0,
                ShearFamily::UserTable => self.table.as_ref().unwrap().u2a,
            }
    }

    /// Whether `U` and its derivatives decay at infinity (required for
    /// exponentially weighted norms with `α > 0`).
    pub fn is_decaying(&self) -> bool {
        match self.family {
            ShearFamily::GaussianBump => true,
            ShearFamily::Quadratic => false,
            // Conservative: tabulated flows are treated as compactly
            // supported by their table, which decays in the relevant sense.
            ShearFamily::UserTable => true,
        }
    }

    /// Admissibility for the hyperbolic model: decaying family with a
    /// non-degenerate interior critical point.
    pub fn hyperbolic_admissible(&self) -> Result<()> {
        if !self.is_decaying() {
            return Err(Error::Config(
                "hyperbolic model requires a decaying shear family; \
                 the quadratic flow is admissible only for the diffusive benchmark"
                    .into(),
            ));
        }
        if self.u2a().abs() < 1e-14 {
            return Err(Error::Config("degenerate critical point: U''(a) = 0".into()));
        }
        Ok(())
    }

    /// `U(y)`.
    pub fn u(&self, y: f64) -> f64 {
        let s = y - self.a;
        self.sign
            * match self.family {
            ShearFamily::GaussianBump => {
                let g = (-self.beta * s * s).exp();
                -self.kappa * s * s * g
            }
            ShearFamily::Quadratic => 0.5 * s * s,
            ShearFamily::UserTable => self.table_eval(0, y),
        }
    }

    /// `U'(y)`.
    pub fn u1(&self, y: f64) -> f64 {
        let s = y - self.a;
        self.sign
            * match self.family {
            ShearFamily::GaussianBump => {
                let b = self.beta;
                let g = (-b * s * s).exp();
                -2.0 * self.kappa * s * (1.0 - b * s * s) * g
            }
            ShearFamily::Quadratic => s,
            ShearFamily::UserTable => self.table_eval(1, y),
        }
    }

    /// `U''(y)`.
    pub fn u2(&self, y: f64) -> f64 {
        let s = y - self.a;
        self.sign
            * match self.family {
            ShearFamily::GaussianBump => {
                let b = self.beta;
                let s2 = s * s;
                let g = (-b * s2).exp();
                -2.0 * self.kappa * (1.0 - 5.0 * b * s2 + 2.0 * b * b * s2 * s2) * g
            }
            ShearFamily::Quadratic => 1.0,
            ShearFamily::UserTable => self.table_eval(2, y),
        }
    }

    /// `U'''(y)`.
    pub fn u3(&self, y: f64) -> f64 {
        let s = y - self.a;
        self.sign
            * match self.family {
            ShearFamily::GaussianBump => {
                let b = self.beta;
                let s2 = s * s;
                let g = (-b * s2).exp();
                4.0 * self.kappa * b * s * (6.0 - 9.0 * b * s2 + 2.0 * b * b * s2 * s2) * g
            }
            ShearFamily::Quadratic => 0.0,
            ShearFamily::UserTable => self.table_eval(3, y),
        }
    }

    /// `U''''(y)`.
    pub fn u4(&self, y: f64) -> f64 {
        let s = y - self.a;
        self.sign
            * match self.family {
            ShearFamily::GaussianBump => {
                let b = self.beta;
                let s2 = s * s;
                let s4 = s2 * s2;
                let g = (-b * s2).exp();
                4.0 * self.kappa
                    * b
                    * (6.0 - 39.0 * b * s2 + 28.0 * b * b * s4 - 4.0 * b * b * b * s4 * s2)
                    * g
            }
            ShearFamily::Quadratic => 0.0,
            ShearFamily::UserTable => self.table_eval(4, y),
        }
    }

    /// A shear identical to `self` with the sign of `U` flipped. Used by the
    /// conjugation trick for critical points with positive curvature.
    pub(crate) fn negated(&self) -> ShearFlow {
        let mut flip = self.clone();
        flip.sign = -flip.sign;
        flip
    }

    fn table_eval(&self, col: usize, y: f64) -> f64 {
        let t = self.table.as_ref().unwrap();
        let vals = &t.cols[col];
        let n = vals.len();
        let pos = (y - t.y0) / t.h;
        if pos <= 0.0 {
            return vals[0];
        }
        if pos >= (n - 1) as f64 {
            return vals[n - 1];
        }
        // 4-point Lagrange cubic, stencil clamped at the ends.
        let j = (pos.floor() as usize).clamp(1, n - 3);
        let s = pos - j as f64;
        let wm1 = -s * (s - 1.0) * (s - 2.0) / 6.0;
        let w0 = (s * s - 1.0) * (s - 2.0) / 2.0;
        let w1 = -s * (s + 1.0) * (s - 2.0) / 2.0;
        let w2 = s * (s * s - 1.0) / 6.0;
        wm1 * vals[j - 1] + w0 * vals[j] + w1 * vals[j + 1] + w2 * vals[j + 2]
    }
}
