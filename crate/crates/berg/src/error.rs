use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// `(m, r)` lies outside the admissible region `r >= 0`, `0 < m <= r + 1`.
    #[error("parameters (m = {m}, r = {r}) outside the admissible region: {reason}")]
    InvalidParams { m: f64, r: f64, reason: &'static str },

    /// Distribution parameters violate their own domain.
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    /// A named model constraint failed (stationarity, decomposition, ...).
    #[error("constraint violated: {0}")]
    Constraint(String),

    /// Evaluation point outside `[0, 1]`.
    #[error("evaluation point s = {0} outside [0, 1]")]
    OutsideUnitInterval(f64),

    /// Probability-vector invariant broken.
    #[error("not a probability vector: {0}")]
    NotAPmf(String),

    /// Adaptive quadrature could not reach the requested accuracy.
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    /// An integral diagnosed as divergent.
    #[error("divergent integral: {0}")]
    Divergent(String),

    /// Truncated series arithmetic became unreliable (overflow or a
    /// non-convergent formal inverse).
    #[error("series truncation unreliable: {0}")]
    Series(String),

    /// Malformed textual input (descriptors, CSV, JSON).
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
