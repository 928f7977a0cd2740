//! Exact computer algebra for hypersurfaces with vanishing Hessian.
//!
//! The crate covers sparse polynomial arithmetic over the rationals and large
//! prime fields, exact linear algebra, Hessian and cone analysis, the
//! Gordan-Noether construction, the ψ map attached to a polar relation, and
//! sample-level classification checks in low dimension.

pub mod classify;
pub mod cone;
pub mod error;
pub mod field;
pub mod gn;
pub mod hessian;
pub mod linalg;
pub mod par;
pub mod poly;
pub mod psi;
pub mod rng;

pub use error::{Error, Result};
pub use field::{Field, Fp, PrimeField, Rational};
pub use par::Exec;
pub use poly::{Monomial, PolyMatrix, Polynomial, QPoly};
pub use rng::Seed;
