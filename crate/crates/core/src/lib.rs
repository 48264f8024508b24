//! Commutation structures in strict monoidal categories.
//!
//! Diagrams are words of generator applications over flat object words.
//! Equality modulo the interchange law is decided by [`exchange`]; equations
//! are proved by bounded bidirectional search in [`rewrite`]; [`duality`]
//! builds the named composites and theorem drivers. Two executable models,
//! finite sets ([`finset`]) and real matrices ([`matrix`]), cross-check the
//! symbolic results. [`dsl`] reads and prints the `.cmt` text format.

pub mod dsl;
pub mod duality;
pub mod error;
pub mod exchange;
pub mod exec;
pub mod finset;
pub mod matrix;
pub mod moncat;
pub mod random;
pub mod rewrite;

pub use error::{Error, Result};
pub use exec::Exec;
pub use moncat::{Diagram, GenId, MorGen, ObjId, ObjectWord, Signature, Slice};
pub use rewrite::{Direction, Match, ProofTrace, ProveError, RewriteRule, SearchBudget, TraceStep};
