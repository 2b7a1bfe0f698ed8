//! Serialization, figures, generators and the differential harness.

pub mod document;
pub mod dot;
pub mod fuzz;
pub mod random;

pub use document::{load_proof, save_proof, save_proof_with_mix, DocumentError, LoadedProof, ProofDocument};
pub use dot::{emit_figure, validate_dot, DotError, DotSummary};
pub use fuzz::{run_differential, run_differential_with, Checkers, FuzzConfig, FuzzReport};
pub use random::random_formula;
