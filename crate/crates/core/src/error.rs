//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A vector or matrix did not have the length required by the contract.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// Invalid argument values (non-positive tolerances, bad grids, ...).
    #[error("invalid input: {0}")]
    Invalid(String),

    /// The solver produced a non-finite state.
    #[error("solver diverged: non-finite state at t = {t}")]
    Divergence { t: f64 },

    /// The adaptive solver exceeded its step budget.
    #[error("step budget exceeded: more than {max_steps} attempts by t = {t}")]
    StepBudgetExceeded { max_steps: usize, t: f64 },

    /// The adaptive step size collapsed; the problem looks stiff or singular.
    #[error("step size underflow at t = {t} (h = {h})")]
    StepUnderflow { t: f64, h: f64 },

    /// Interpolant queried outside the solved span.
    #[error("query time {t} outside solved span [{lo}, {hi}]")]
    OutOfRange { t: f64, lo: f64, hi: f64 },

    /// Every grid point of a likelihood scan failed to solve.
    #[error("likelihood scan failed at every grid point")]
    ScanFailed,

    /// Chains have zero within-chain variance; R-hat is undefined.
    #[error("degenerate chains: zero within-chain variance")]
    DegenerateChains,

    /// No initial point with a finite posterior was found.
    #[error("no finite-posterior initial point found after {tries} tries")]
    InitFailed { tries: usize },
}
