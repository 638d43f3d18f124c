//! Exact computations in the lattice of subspaces of a finite vector space:
//! canonical enumeration, forbidden-subposet detection, normalized-matching
//! machinery and extremal search with certificates.

pub mod bitset;
pub mod error;
pub mod extremal;
pub mod family;
pub mod gfmat;
pub mod io;
pub mod lattice;
pub mod normalize;
pub mod patterns;
pub mod poset;
pub mod rational;
pub mod sample;

pub use bitset::Bitset;
pub use error::{Error, Result};
pub use family::Family;
pub use gfmat::{Field, Matrix};
pub use lattice::{build_lattice, LinearLattice, Subspace};
pub use patterns::PatternSpec;
pub use poset::{BooleanLattice, GradedPoset, PosetId};
