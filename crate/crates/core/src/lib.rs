//! Exact computations with finite W-algebras of type A.
//!
//! The crate enumerates good gradings of `gl_N` through pyramids, builds the
//! attached nilpotent data, computes in `U(gl_N)` with PBW normal forms, and
//! checks BRST and Schur-duality statements with exact rational arithmetic.

pub mod brst;
pub mod error;
pub mod gl;
pub mod hecke;
pub mod linalg;
pub mod modp;
pub mod partition;
pub mod pbw;
pub mod polytope;
pub mod pyramid;
pub mod selftest;

pub use error::{Error, Result};
pub use gl::{GlElement, Grading};
pub use linalg::{Rational, SparseMatrix};
pub use partition::Partition;
pub use pyramid::Pyramid;
