use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("fock cutoff must be at least 1 (got {0})")]
    InvalidCutoff(usize),

    #[error("atomic level {0} is not available in this layout")]
    InvalidLevel(usize),

    #[error("mode {0} is not part of this layout")]
    ModeNotInLayout(&'static str),

    #[error("layout mismatch: {0} vs {1}")]
    LayoutMismatch(String, String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParams { name: &'static str, reason: String },

    #[error("superoperator dimension {dim} exceeds the configured cap {cap}")]
    DimensionOverflow { dim: usize, cap: usize },

    #[error("degenerate steady state: {0}")]
    DegenerateSteadyState(String),

    #[error("steady-state residual {residual:.3e} exceeds tolerance {tol:.3e}")]
    ResidualTooLarge { residual: f64, tol: f64 },

    #[error("integration unstable: trace drift {drift:.3e} at t = {time}; reduce dt (bound ~{suggested_dt:.3e})")]
    UnstableIntegration {
        drift: f64,
        time: f64,
        suggested_dt: f64,
    },

    #[error("dark output: photon flux {flux:.3e} is below the resolvable floor")]
    DarkOutput { flux: f64 },

    #[error("no transmission-dip degeneracy in this regime: {0}")]
    NoDipDegeneracy(String),

    #[error("phase classification needs the resonant case (omega_minus = 0, got {0})")]
    NonResonant(f64),

    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("spectrum fit did not converge (rms residual {rms:.3e})")]
    FitNotConverged { rms: f64 },
}
