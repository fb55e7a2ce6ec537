//! Exact symbolic-numeric toolkit for contact Lie systems.
//!
//! Scalars are exact rational functions over the rationals, optionally
//! extended by exponential atoms. Geometry (forms, fields, contact
//! structures, Lie algebras of vector fields) is built on top of them, and a
//! fixed-step integrator checks the same invariants numerically.

pub mod error;
pub mod exprcore;
pub mod cartan;
pub mod contactgeo;
pub mod liealgebra;
pub mod liesystems;
pub mod superposition;
pub mod dynamics;
pub mod definition;
pub mod verify;

pub use error::{Error, ErrorClass, Result};
pub use exprcore::{parse_expr, Chart, ExpAtom, Poly, Q, RationalExpr};

