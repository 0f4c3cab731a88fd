//! Exact decision procedures for (semi)stability of pairs of vectors in
//! rational torus representations.
//!
//! Weight polytopes, containment and separation are decided over the
//! rationals with a small simplex solver; every negative answer carries a
//! one-parameter subgroup that can be re-checked with integer arithmetic.

pub mod binary_forms;
pub mod energy;
pub mod error;
pub mod futaki;
pub mod io;
pub mod lattice;
pub mod limits;
pub mod linalg;
pub mod lp;
pub mod pairs;
pub mod polytope;
pub mod varieties;

pub use error::{Error, Result};
