use thiserror::Error;

/// Errors raised by surrogate builders, statistics, solvers and experiments.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or insufficient input data.
    #[error("invalid input: {0}")]
    Input(String),

    /// Inconsistent configuration (method/law mismatch, node count below a stencil minimum, ...).
    #[error("configuration error: {0}")]
    Config(String),

    /// Evaluation requested outside the surrogate's domain.
    #[error("{value} lies outside the evaluation range [{lo}, {hi}]")]
    Range { value: f64, lo: f64, hi: f64 },

    /// Unphysical solver state.
    #[error("state error in cell {cell} at t = {time}: {detail}")]
    State {
        cell: usize,
        time: f64,
        detail: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn input_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}

pub(crate) fn config_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Config(msg.into()))
}
