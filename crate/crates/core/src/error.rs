use thiserror::Error;

/// Errors produced by the model, Gaussian-state, and Fock-space layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error("unstable Hamiltonian: d = {d} is not above d_crit = {d_crit} (margin {margin:.3e})")]
    Unstable { d: f64, d_crit: f64, margin: f64 },

    #[error("matrix is not symmetric (max asymmetry {0:.3e})")]
    NotSymmetric(f64),

    #[error("covariance is unphysical (smallest symplectic eigenvalue {0})")]
    Unphysical(f64),

    #[error("pure-state degenerate Stein system; use the pure-state branch")]
    PureStateDegenerate,

    #[error("loss parameter {0} outside [0, 1]")]
    LossOutOfRange(f64),

    #[error("Fock cutoff {cutoff} too small (tail mass {tail_mass:.3e} > {tolerance:.1e}); suggested cutoff {suggested}")]
    CutoffTooSmall {
        cutoff: usize,
        tail_mass: f64,
        tolerance: f64,
        suggested: usize,
    },

    #[error("not converged: {0}")]
    NotConverged(String),

    #[error("differentiation step {step:.3e} exceeds the stability margin {margin:.3e}")]
    StepExceedsMargin { step: f64, margin: f64 },

    #[error("operands mismatch: {0}")]
    Mismatch(String),

    #[error("fit needs at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
