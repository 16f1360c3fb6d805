//! Shared end-to-end fixture: the full spectral pipeline at production
//! resolution, built once per test binary.

#![allow(dead_code)]

use std::sync::Arc;

use blayer_core::{
    build_w, layer_grid, solve_eigenproblem, solve_x, spectral_constants_hyperbolic, Eigenpair,
    Grid1D, ShearFlow, SpectralConstants, WProfile, XProfile, DEFECT_TOL,
};
use once_cell::sync::Lazy;

/// Eigenvalue search window wide enough for every candidate of interest.
pub const EIGEN_WINDOW: (f64, f64) = (1e-9, 6.0);

/// Production resolution of the auxiliary eigenproblem.
pub const EIGEN_N: usize = 4000;

/// Production half-width of the eigenproblem and transition domains.
pub const HALF_WIDTH: f64 = 12.0;

/// Production interval count of the transition-profile shooting grid.
pub const SHOOT_N: usize = 4800;

/// Everything downstream modules need from the spectral stage, computed for
/// the default gaussian-bump shear flow.
pub struct Pipeline {
    pub eig: Eigenpair,
    pub shear: ShearFlow,
    pub sc: SpectralConstants,
    pub xp: XProfile,
    pub w: WProfile,
}

pub static PIPELINE: Lazy<Pipeline> = Lazy::new(|| {
    let eig = solve_eigenproblem(HALF_WIDTH, EIGEN_N, EIGEN_WINDOW).expect("eigenproblem");
    let shear = ShearFlow::default_gaussian();
    let sc = spectral_constants_hyperbolic(&eig, &shear).expect("spectral constants");
    let xp = solve_x(sc.gamma, HALF_WIDTH, SHOOT_N, DEFECT_TOL).expect("transition profile");
    let w = build_w(&xp).expect("connection profile");
    Pipeline { eig, shear, sc, xp, w }
});

/// Layer-resolving velocity grid wrapped for sharing.
pub fn layer_grid_arc(k: u64, shear: &ShearFlow, l: f64, base_h: f64) -> Arc<Grid1D> {
    Arc::new(layer_grid(k, shear, l, base_h).expect("layer grid"))
}
