use thiserror::Error;

/// Errors surfaced by the numerical kernels.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("grid too coarse: n_points = {0}, need at least 8")]
    GridTooCoarse(usize),

    #[error("wavenumber k must be nonzero")]
    ZeroWavenumber,

    #[error("time must be nonnegative, got {0}")]
    NegativeTime(f64),

    #[error("invalid shear profile: {0}")]
    InvalidShear(String),

    #[error("linear system ill-conditioned (rcond estimate {rcond:.3e}); spectral parameter too close to discrete spectrum")]
    IllConditioned { rcond: f64 },

    #[error("Evans function degenerate: |D| = {det_mag:.3e} below threshold")]
    EvansDegenerate { det_mag: f64 },

    #[error("complex Airy evaluation failed to converge at z = {z}")]
    AiryEvalFailure { z: num_complex::Complex64 },

    #[error("time step rejected: {0}")]
    StepRejected(String),

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("blow-up detected at t = {t:.6}: mode |k| = {k} grew by factor {factor:.3e}")]
    BlowupDetected { t: f64, k: i32, factor: f64 },

    #[error("parameter regime violation: {0}")]
    RegimeViolation(String),
}
