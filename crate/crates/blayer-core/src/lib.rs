//! Numerical verification toolkit for high-frequency instabilities of
//! boundary-layer models.
//!
//! Two linearized models around a shear flow `U(y)` with a non-degenerate
//! critical point `U'(a) = 0`, `U''(a) ≠ 0` are covered:
//!
//! * a **hyperbolic** (wave-like) model, `(∂_t + 1)(∂_t + ik·U)u + k·v·U'
//!   − ∂_yy u = f`, whose layer analysis produces growth `σ₀·k^{1/3}`;
//! * the **diffusive** (Prandtl) model, `∂_t u + ik·U·u + k·v·U' − ∂_yy u
//!   = f`, with growth `σ₀_P·√k`;
//!
//! where `v = −i∫₀^y u` closes the system at tangential frequency `k`.
//! Both rates exceed every polynomial threshold in `k`, so the linearized
//! semigroups admit no bound of the form `C·k^m` — the library's purpose
//! is to *measure* that mechanism rather than assume it.
//!
//! The pipeline mirrors the analysis:
//!
//! 1. [`eigen`] — the auxiliary self-adjoint eigenproblem on the real
//!    line whose ground eigenvalue `α` feeds the spectral stage;
//! 2. [`spectral`] — shooting for the connecting profile `X`, the complex
//!    matching parameter `γ` (per model), the layer frequency `τ` and the
//!    transition profile `W`;
//! 3. [`profiles`] / [`prandtl`] — the frequency-indexed approximate
//!    eigenprofiles `𝕌_k`, the forcing remainders `ℛ_k`, their norm
//!    sweeps, and exactly solvable benchmarks;
//! 4. [`evolve`] — direct time integration (RK4 for the hyperbolic
//!    first-order system, IMEX for the diffusive one), residual and
//!    Duhamel identities tying the integrator to the closed forms;
//! 5. [`inflate`] — windowed norm-inflation experiments `S_k` and the
//!    instability demonstrator that defeats a prescribed `C·k^m` bound.
//!
//! Supporting layers: [`grid`]/[`profile`] (uniform grids with a marked
//! critical node, complex-valued samples), [`norms`] (weighted sup-norms,
//! differentiation, cumulative integrals), [`ode`]/[`tridiag`]/[`interp`]/
//! [`fits`] (numerics), [`shear`] (background flows), [`vprofile`]
//! (corrector jump conditions), [`serialize`] (byte-deterministic JSON
//! primitives), and [`artifact`] (document/CSV schemas for every result
//! type).
//!
//! Every derived constant in the crate is pinned by at least one
//! independent check: closed forms where they exist, convergence orders
//! where they don't, and frozen regression values everywhere.

pub mod artifact;
pub mod eigen;
pub mod error;
pub mod evolve;
pub mod fits;
pub mod grid;
pub mod inflate;
pub mod interp;
pub mod norms;
pub mod ode;
pub mod prandtl;
pub mod profile;
pub mod profiles;
pub mod serialize;
pub mod shear;
pub mod spectral;
pub mod tridiag;
pub mod vprofile;

pub use error::{Error, Result};
pub use evolve::{
    apply_b, duhamel_check, evolve, forced_tracking_check, residual_prop21, stable_dt,
    tracking_state, EvolveConfig, Forcing, StateVector, TrackingReport, Trajectory,
};
pub use grid::Grid1D;
pub use inflate::{
    c_sigma_from, inflation_experiment, mode_weighted_norm, normalized_data, theorem11_demo,
    window_time, DemoReport, InflationRecord, InflationReport,
};
pub use norms::{
    cumulative_integral, differentiate, heaviside_profile, total_integral, wnorm,
    WeightedNormParams,
};
pub use prandtl::{
    bounds_sweep_prandtl, build_profile_set_prandtl, crossover_frequency, evolve_prandtl,
    forced_tracking_check_prandtl, inflation_experiment_prandtl, layer_grid_prandtl,
    layer_width_prandtl, quadratic_oracle, residual_prandtl, spectral_constants_prandtl,
    stable_dt_prandtl, window_time_prandtl, PrandtlProfileSetK, PrandtlSpectral,
    PrandtlSweepRow, PrandtlSweepTable, PrandtlTrajectory, QuadraticReport,
};
pub use profile::ComplexProfile;
pub use profiles::{
    bounds_sweep, build_profile_set, envelope_slope, layer_grid, layer_width, ProfileSetK,
    SweepRow, SweepTable,
};
pub use shear::{ShearFamily, ShearFlow};
pub use spectral::{
    build_w, continuation_oracle, matching_wronskian, solve_x, solve_x_with_multiplier,
    spectral_constants_hyperbolic, Model, SpectralConstants, WProfile, XProfile, DEFECT_TOL,
};
pub use vprofile::{build_v, VProfile};

pub use eigen::{solve_eigenproblem, Eigenpair};
