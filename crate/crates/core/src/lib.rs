//! Quantum process capability measures.
//!
//! Given the process matrix of a two-qubit channel, this crate asks how far
//! the channel is from the set of channels that cannot perform a given task
//! (creating entanglement, creating coherence, ...), using semidefinite
//! programs over simulated tomography records.

pub mod capabilities;
pub mod cli;
pub mod error;
pub mod processes;
pub mod qmath;
pub mod resources;
pub mod sdp;
pub mod tol;
pub mod tomography;
pub mod validation;

pub use error::{QpcError, Result};
