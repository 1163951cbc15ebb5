//! Intersection multiplicities from Newton diagrams.
//!
//! The library covers exact lattice geometry (Newton diagrams, mixed volumes),
//! sparse polynomials over Q, Q(i) and F_p, torus-root detection with Gröbner
//! bases, the Newton-diagram multiplicity formulas, and the bookkeeping of
//! ordered intersection multiplicities over a declarative scene.

pub mod field;
pub mod groebner;
pub mod hull;
pub mod intmat;
pub mod lattice;
pub mod local;
pub mod mixed_volume;
pub mod monomial;
pub mod mult;
pub mod nondegeneracy;
pub mod parse;
pub mod poly;
pub mod system;
pub mod scene;
// pub mod series;
pub mod spheres;

pub use field::{Coeff, Field};
pub use lattice::{LatticeDiagram, WeightCovector};
pub use mult::{MultResult, MultValue};
pub use poly::SparsePoly;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Malformed or inconsistent input.
    #[error("input error: {0}")]
    Input(String),
    /// A mathematical precondition of an operation does not hold.
    #[error("{0}")]
    Domain(String),
    /// A hypothesis check failed; carries the report and the unchecked value.
    #[error("hypothesis check failed: {}", .0.summary())]
    Hypothesis(Box<mult::HypothesisFailure>),
    /// An internal invariant was violated.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
