//! Exact computer algebra for twisted affine and graded Hecke algebras attached
//! to Bernstein components of enhanced Langlands parameters.
//!
//! The crate is organised bottom-up:
//!
//! * [`root_data`]: lattices, roots and classical root data (including `BC`).
//! * [`weyl_groups`]: Weyl group elements, extended groups `W° ⋊ R`, cocycles,
//!   coset representatives, point stabilizers and cone membership.
//! * [`coeff_rings`]: Laurent polynomials in `z`, the torus algebra `O(T) ⊗ Z[z±]`,
//!   polynomial rings for the graded algebra and cyclotomic evaluation.
//! * [`hecke_algebras`]: Bernstein normal form multiplication, graded algebras,
//!   the Iwahori–Matsumoto involution, specialization and centrality checks.
//! * [`parameter_engine`]: the parameter calculus `c, c*, λ, λ*, k`.
//! * [`langlands_pipeline`]: inertial data in, Hecke algebra reports out.
//! * [`spectra`]: twisted extended quotients, central characters, temperedness.
//! * [`cli`]: command implementations behind the `twisted-hecke` binary.

pub mod cli;
pub mod coeff_rings;
pub mod error;
pub mod hecke_algebras;
pub mod langlands_pipeline;
pub mod linalg;
pub mod parameter_engine;
pub mod root_data;
pub mod spectra;
pub mod weyl_groups;

pub use error::{Error, Result};
