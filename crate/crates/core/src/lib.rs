//! Vertex enumeration for bisubmodular polyhedra by reverse search over
//! signed-poset Hasse diagrams, with exact rational arithmetic throughout.

pub mod bisubfn;
pub mod cli;
pub mod error;
pub mod instance;
pub mod oracle;
pub mod poset;
pub mod search;
pub mod signed_set;
pub mod tight;

pub use bisubfn::{BisubFunction, TableFunction};
pub use error::{Error, Result};
pub use signed_set::{GroundSet, Rational, RationalVector, Sign, SignedSubset};
