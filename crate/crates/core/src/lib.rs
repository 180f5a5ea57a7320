//! Exact Frobenius statistics for families of curves over a prime field 𝔽_q:
//! power sums, trace moments, splitting densities, one-level densities and
//! explicit bounds for Dirichlet L-functions of 𝔽_q[X].

pub mod algebra;
pub mod error;
pub mod numeric;
pub mod places_chars;
pub mod curves;
pub mod families;
pub mod stats;
pub mod bounds;
pub mod cli;

pub use error::{Error, Result};

/// Library version echoed into report headers.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
