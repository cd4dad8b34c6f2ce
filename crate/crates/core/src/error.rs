use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A vector or weight set is not normalized (or cannot be normalized).
    #[error("normalization error: {0}")]
    Normalization(String),

    /// Shapes or subsystem structure do not line up.
    #[error("structure error: {0}")]
    Structure(String),

    /// A measurement setting of the wrong kind was supplied.
    #[error("setting kind error: expected {expected}, got {got}")]
    Kind {
        expected: &'static str,
        got: &'static str,
    },

    /// A numeric argument is outside its admissible range.
    #[error("domain error: {0}")]
    Domain(String),

    /// A density operator failed a validity check.
    #[error("invalid density operator: {0}")]
    InvalidDensity(String),
}
