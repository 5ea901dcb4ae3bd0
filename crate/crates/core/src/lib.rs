//! Invariants of splice-quotient surface singularities computed from a
//! weighted resolution graph: the discriminant group, Molien-type Hilbert
//! series at nodes, the genus recursion for `h^1` of eigensheaves, splice
//! diagram equations and a brute-force oracle for the eigenspace dimensions.
//!
//! All arithmetic is exact. Data-parallel kernels take an [`Exec`] argument;
//! the `parallel` feature (on by default) enables the rayon-backed mode.

pub mod arith;
pub mod discriminant;
pub mod error;
pub mod fixtures;
pub mod genus;
pub mod graph;
pub mod hilbert;
pub mod oracle;
pub mod par;
pub mod singularity;
pub mod splice;

pub use error::{AssertionFailure, Error, Result};
pub use graph::{ResolutionGraph, ValidationReport};
pub use par::Exec;
