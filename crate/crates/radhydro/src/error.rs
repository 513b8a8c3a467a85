//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A state quantity that must be positive is not (or is non-finite).
    #[error("non-positive {quantity} = {value:e} in cell {cell}")]
    Positivity {
        quantity: &'static str,
        cell: usize,
        value: f64,
    },

    /// An argument lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Tridiagonal elimination hit a vanishing pivot.
    #[error("singular tridiagonal system: pivot underflow at row {row}")]
    SingularPivot { row: usize },

    /// The nonlinear radiation-temperature stage solve did not converge.
    #[error("stage solve did not converge: residual {residual:e} after {iters} iterations")]
    NonConvergence { residual: f64, iters: u32 },

    /// Positivity floors engaged more often than the configured limit,
    /// which signals a time step too large for the current state.
    #[error("state floors engaged {hits} times (limit {limit}); time step too large")]
    NegativeState { hits: u32, limit: u32 },

    /// A stage of a multi-stage step failed.
    #[error("stage {stage} failed: {source}")]
    InStage {
        stage: usize,
        #[source]
        source: Box<Error>,
    },

    /// Scheme name not present in the tableau registry.
    #[error("unknown scheme \"{name}\"; available: {available}")]
    UnknownScheme { name: String, available: String },

    /// A Butcher tableau pair violates one of its structural or order conditions.
    #[error("tableau \"{scheme}\" violates condition: {condition}")]
    InvalidTableau { scheme: String, condition: String },

    /// A run produced a non-finite or unphysical state.
    #[error("unstable at step {step}, t = {time:e}: {what}")]
    Unstable {
        step: usize,
        time: f64,
        what: String,
    },

    /// Configuration parse or validation failure.
    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Whether this error reflects a numerical failure (as opposed to bad
    /// usage or configuration). Used by the CLI to pick exit codes.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::Positivity { .. }
            | Error::Domain(_)
            | Error::SingularPivot { .. }
            | Error::NonConvergence { .. }
            | Error::NegativeState { .. }
            | Error::Unstable { .. } => true,
            Error::InStage { source, .. } => source.is_numerical(),
            _ => false,
        }
    }
}
