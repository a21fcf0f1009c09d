//! Exact coefficient rings: Laurent polynomials in the z-variables, the
//! group algebra of the character lattice over them, polynomial rings for
//! the graded algebras, and cyclotomic values for evaluating at torus points.

mod cyclotomic;
mod laurent;
mod poly;
mod torus;

pub use cyclotomic::{cyclotomic_polynomial, CyclotomicValue};
pub use laurent::LaurentZ;
pub use poly::Poly;
pub use torus::{act, evaluate_at_point, TorusAlgebraElement};
