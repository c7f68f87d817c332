//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Model parameters outside the domain where the construction is defined
    /// (lattice too short, coupling making some a+i vanish, bad band width...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A dense linear-algebra routine failed to converge or a matrix that
    /// must be invertible was singular.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// The exact band solver produced a solution space whose dimension does
    /// not match the expected count of independent pseudometrics.
    #[error("unexpected solution-space dimension: got {got}, expected {expected} (n = {n}, k = {k})")]
    SolutionSpaceDimension {
        got: usize,
        expected: usize,
        n: usize,
        k: usize,
    },

    /// A claimed identity failed re-verification: a closed-form table broke
    /// the defining intertwining relation in exact arithmetic, a reference
    /// value could not be reproduced, or an operation demanded a property
    /// (such as metric positivity) that the inputs do not have.
    #[error("verification failure: {0}")]
    ConjectureViolation(String),

    /// Input/output or serialization failure in the CLI-facing helpers.
    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    /// Malformed JSON given to one of the readers.
    #[error("parse: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
