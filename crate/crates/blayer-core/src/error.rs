//! Error taxonomy shared across the library.
//!
//! Errors are grouped by how a caller should react:
//!
//! * construction/validation problems (`InvalidProfile`, `GridTooSmall`,
//!   `GridMismatch`, `OutOfDomain`, `Config`) — the inputs were malformed;
//! * spectral-stage failures (`SpectralFailure`, `NonConvergence`,
//!   `ZeroAverage`, `InconsistentSpectralInputs`) — the computed spectral
//!   objects do not satisfy their defining relations to tolerance;
//! * resolution/stability refusals (`Resolution`, `CflViolation`) — the
//!   requested discretization cannot support the requested computation;
//! * runtime blow-up (`BlowUp`) — a time integration left the representable
//!   range.

use thiserror::Error;

/// Library-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// All failure modes produced by this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A profile carried non-finite samples or mismatched lengths.
    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    /// A grid had too few nodes for the requested operation.
    #[error("grid too small: need at least {need} nodes, have {have}")]
    GridTooSmall { need: usize, have: usize },

    /// Two profiles expected on the same grid live on different grids.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// A coordinate fell outside the grid (e.g. the critical point).
    #[error("out of domain: {0}")]
    OutOfDomain(String),

    /// Invalid configuration or parameters.
    #[error("configuration error: {0}")]
    Config(String),

    /// A spectral quantity failed its defining check (no admissible
    /// eigenvalue, matching defect above tolerance, wrong half-plane, ...).
    #[error("spectral condition violated: {0}")]
    SpectralFailure(String),

    /// An iterative procedure did not converge to tolerance.
    #[error("non-convergence: {0}")]
    NonConvergence(String),

    /// The oscillatory integral `I = ∫X` is too close to zero to divide by.
    #[error("zero-average profile: |I| = {magnitude:.3e} below {floor:.3e}")]
    ZeroAverage { magnitude: f64, floor: f64 },

    /// Downstream consistency checks (e.g. jump conditions) failed, meaning
    /// the spectral inputs and the analytic relations disagree.
    #[error("inconsistent spectral inputs: {0}")]
    InconsistentSpectralInputs(String),

    /// The grid does not resolve the boundary layer at the requested
    /// frequency.
    #[error("resolution error: {0}")]
    Resolution(String),

    /// An explicitly requested time step violates the stability bound.
    #[error("CFL violation: requested dt = {requested:.3e} exceeds stable dt = {stable:.3e}")]
    CflViolation { requested: f64, stable: f64 },

    /// A time integration overflowed the representable range.
    #[error("blow-up detected at t = {time:.6e} (norm {norm:.3e})")]
    BlowUp { time: f64, norm: f64 },

    /// Filesystem problems while writing artifacts.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// Artifact (de)serialization problems.
    #[error("serialization error: {0}")]
    Serde(String),
}

impl Error {
    /// True for spectral-stage failures (used by callers that map failure
    /// classes to process exit codes).
    pub fn is_spectral(&self) -> bool {
        matches!(
            self,
            Error::SpectralFailure(_)
                | Error::NonConvergence(_)
                | Error::ZeroAverage { .. }
                | Error::InconsistentSpectralInputs(_)
        )
    }

    /// True for resolution/configuration refusals.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::Resolution(_)
                | Error::CflViolation { .. }
                | Error::Config(_)
                | Error::GridTooSmall { .. }
                | Error::GridMismatch(_)
                | Error::OutOfDomain(_)
                | Error::InvalidProfile(_)
        )
    }
}
