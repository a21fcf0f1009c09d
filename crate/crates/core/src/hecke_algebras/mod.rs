//! Twisted affine Hecke algebras in the Bernstein presentation and twisted
//! graded Hecke algebras, with exact multiplication in normal form.

mod affine;
mod crossed;
mod graded;
pub mod relations;

pub use affine::{bernstein_divide, AffineDescriptor, HeckeElement, RootParams};
pub use crossed::{crossed_product_multiply, quotient_z1, specialize, CrossedProduct, SpecializedElement};
pub use graded::{affine_to_graded, im_involution, GradedDescriptor, GradedElement};
