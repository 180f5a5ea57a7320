//! Exact arithmetic over 𝔽_q and 𝔽_{q^n}, polynomials, factorization,
//! irreducible tables and cyclotomic integers.

pub mod cycint;
pub mod ext;
pub mod factor;
pub mod field;
pub mod irreducible;
pub mod poly;

pub use cycint::CycInt;
pub use ext::{Ext, ExtField, ExtFieldElem};
pub use factor::{factor, Factorization};
pub use field::FieldElem;
pub use irreducible::{irreducibles, irreducibles_cached, prime_count, verify_pnt};
pub use poly::Poly;
