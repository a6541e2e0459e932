//! Exact verification toolkit for Cox rings of blow-ups of projective
//! spaces: Picard lattices of `X_{a,b,c}`, Weyl orbits and weight systems,
//! effective-cone tests, section-space dimensions at points of a rational
//! normal curve, and the determinantal invariants of the two-dimensional
//! Nagata action.

pub mod arith;
pub mod blowup;
pub mod error;
pub mod lattice;
pub mod linalg;
pub mod nagata;
pub mod poly;
pub mod roots;
pub mod sections;
pub mod verify;

pub use error::{Error, Result};
pub use lattice::{CurveClass, DivisorClass, LatticeContext};
