//! Combinatorial proofs for classical propositional logic.
//!
//! A combinatorial proof of a formula `A` is an MLL proof net on a formula
//! `A'` together with a map from the leaves of `A'` to the leaves of `A`
//! that preserves literal labels and sends cliques to cliques. This crate
//! checks such proofs ([`proof::verify`]), produces them from cut-free
//! sequent proofs ([`sequent::prove_combinatorial`]), and cross-checks both
//! against truth tables.

pub mod formula;
pub mod io;
pub mod net;
pub mod proof;
pub mod resolution;
pub mod sequent;

pub use formula::{Connective, Formula, LeafId, Literal, Nnf, NodeId, Side};
pub use net::{dr_check_exhaustive, dr_check_fast, Linking};
pub use proof::{verify, CombinatorialProof, LeafMap, Verdict};
pub use sequent::{prove, prove_combinatorial, translate};
