//! Workbench for studying how QPU coupling topology shapes the cost of
//! QAOA Max-Cut: problem generation, circuit construction, heavy-hex
//! lattices and their densification, transpilation with stochastic SWAP
//! routing, statevector execution, the hybrid runtime model, and sweep
//! analysis.
//!
//! Qubits are little-endian throughout: qubit 0 is bit 0 of a basis index.

pub mod analysis;
pub mod circuit;
pub mod engine;
mod error;
pub mod par;
pub mod perfmodel;
pub mod problem;
pub mod qaoa;
pub mod seed;
pub mod topology;
pub mod transpiler;

pub use error::{Error, Result};
pub use par::Exec;
