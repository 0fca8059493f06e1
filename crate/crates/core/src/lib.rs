//! Finite models of multi-agent knowledge and awareness.
//!
//! The crate implements two families of structures and the bridges between
//! them:
//!
//! * **FH models** ([`fh`]): Kripke-style S5 models extended with a
//!   syntactic awareness set per agent and state, generated by atomic
//!   propositions. The [`category`] module assembles, for a top model over
//!   the full vocabulary, one FH model per sub-vocabulary together with
//!   commuting surjective bounded morphisms.
//! * **HMS models** ([`hms`]): a complete lattice of disjoint state spaces
//!   indexed by atom subsets with commuting surjective projections, an event
//!   algebra over up-closed sets, possibility correspondences (explicit Π
//!   and implicit Λ), awareness functions α, and the knowledge / awareness
//!   operators K, A, U, L, A* on events.
//!
//! [`transforms`] converts each kind of structure into the other and records
//! state correspondences; [`semantics`] model-checks the modal language with
//! implicit-knowledge, awareness, and explicit-knowledge modalities over HMS
//! models; [`logic`] houses the LPA axiom system, a Hilbert proof checker,
//! and a bounded countermodel search; [`harness`] provides seeded model
//! generators, mutation fixtures, and the property regression suite.

pub mod category;
pub mod fh;
pub mod harness;
pub mod hms;
pub mod logic;
pub mod report;
pub mod semantics;
pub mod syntax;
pub mod transforms;

pub use report::{Clause, ValidationReport, Violation};
pub use syntax::{AgentId, AtomId, AtomSet, Formula, ParseError, Vocab};

/// Hard ceiling on vocabulary size. A lattice model stores one space per
/// subset of the vocabulary, so this bounds the lattice at 2^16 spaces.
pub const MAX_ATOMS: usize = 16;
