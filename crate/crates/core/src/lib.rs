//! Unitals, 2-designs, and the vertex-isoperimetric number of their
//! (non-)incidence graphs.

pub mod arc;
pub mod bounds;
pub mod cli;
pub mod design;
pub mod error;
pub mod field;
pub mod iso;
pub mod manifest;
pub mod plane;
pub mod rational;

pub use error::{Error, Result};

/// Exact rational with arbitrary-precision components.
pub type Rational = num_rational::BigRational;
