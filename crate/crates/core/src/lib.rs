//! Forbidden-subposet problems on interval chains.
//!
//! The crate covers finite posets ([`poset`]), interval chains inside the
//! Boolean lattice ([`chain`]), the auxiliary graph on incomparable triples
//! of a graded poset ([`auxgraph`]), exact weak-subposet and `La(Q, P)`
//! search ([`embed`], [`la`]), the constructive injection into double-chain
//! families ([`injection`]), closed-form bounds ([`bounds`]) and a gallery of
//! named posets ([`gallery`]).

pub mod auxgraph;
pub mod bounds;
pub mod chain;
pub mod dot;
pub mod embed;
pub mod error;
pub mod format;
pub mod gallery;
pub mod injection;
pub mod la;
pub mod par;
pub mod poset;

pub use error::{Error, Result};
pub use poset::{oplus, otimes, Elem, GradedPoset, LevelDecomposition, Poset, PosetBuilder};
