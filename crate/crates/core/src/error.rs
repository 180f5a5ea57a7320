use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Input outside an operation's domain (zero polynomial, ℓ ∤ q−1, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A model violates its own invariants (not squarefree, non-integral genus, ...).
    #[error("invalid model: {0}")]
    InvalidModel(String),

    /// The infinite place of a cubic model could not be classified.
    #[error("unclassified infinite place for cubic model {0}")]
    UnclassifiedInfinity(String),

    /// An exact identity that must hold did not.
    #[error("identity violation: {0}")]
    Identity(String),

    #[error("enumeration budget exceeded: {required} members needed, budget is {budget}")]
    Budget { required: u128, budget: u128 },

    /// A test-function support radius outside the allowed range.
    #[error("support guard: {0}")]
    Support(String),

    #[error("cache i/o: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed cache file {path}: {reason}")]
    Cache { path: String, reason: String },
}
