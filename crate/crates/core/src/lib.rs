//! Orthogonal tensor Hermite polynomials in three dimensions and their
//! behaviour under scaling, translation and rotation of the velocity axes.
//!
//! * [`symtensor`]: symmetric tensors, the permutation operator and scalar products.
//! * [`hermite`]: physicist `H_n` and probabilist `He_n` tensor polynomials.
//! * [`quadrature`]: Gauss-Hermite rules, orthogonality tables and series expansions.
//! * [`transforms`]: scaling admissibility and translation between frames.
//! * [`mixed6`]: two-species centre-of-mass/relative rotation and the mixed
//!   six-dimensional polynomials.

pub mod error;
pub mod hermite;
pub mod mixed6;
pub mod poly;
pub mod quadrature;
pub mod symtensor;
pub mod transforms;

pub use error::{Error, Result};
pub use symtensor::{MultiIndex, SymTensor};
