//! A four-valued intensional first-order logic engine.
//!
//! The crate provides the Belnap truth algebra ([`bilattice`]), the formula
//! language with positional quantifiers and abstraction terms ([`syntax`]),
//! Herbrand valuations with the structural evaluator and m-extensions
//! ([`semantics`]), a monotone knowledge database under the closed knowledge
//! assumption ([`knowledge`]), entailment and autoepistemic forward chaining
//! ([`deduction`]), and the command-line front end ([`cli`]).

pub mod bilattice;
pub mod cli;
pub mod deduction;
pub mod kbfile;
pub mod knowledge;
pub mod semantics;
pub mod syntax;

pub use bilattice::TruthValue;
pub use knowledge::WorldState;
