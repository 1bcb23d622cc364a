//! Resource quantifiers for three-qubit states.
//!
//! The crate computes tripartite and bipartite negativity, the geometric mean
//! of bipartite concurrences (GBC), first-order coherence, the three-setting
//! linear-steering violation and the Bell-CHSH violation of arbitrary
//! three-qubit states, and evaluates the complementary inequalities that tie
//! these quantities together.
//!
//! Everything here is a pure function of its inputs and runs without `std`
//! (an allocator is required). File formats, the Monte-Carlo sweep engine and
//! the command-line front end live in the `tripartite` companion crate.
//!
//! Basis ordering is binary ascending over `|abc⟩`, qubit A being the most
//! significant bit. Pauli indices follow `(σx, σy, σz)`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;
pub mod labels;
pub mod linalg;
pub mod measures;
pub mod relations;
pub mod states;

pub use error::Error;
pub use labels::{Bipartition, Pair, Qubit};
pub use linalg::{ComplexMatrix, HermitianEigen};
pub use measures::{BlochPair, BlochTriple, ResourceRecord};
pub use relations::{Relation, RelationEntry, RelationReport};
pub use states::{Density3, PureState3, StateKind, StateProvenance};

pub use num_complex::Complex64;

/// Result alias used throughout the crate.
pub type Result<T, E = Error> = core::result::Result<T, E>;
