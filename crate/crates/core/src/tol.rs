//! Fixed tolerance ladder shared by every module.

/// Algebraic identities (Kronecker products, traces of exact constructions).
pub const ALGEBRAIC: f64 = 1e-12;
/// Hermiticity and trace normalisation.
pub const HERMITIAN: f64 = 1e-10;
/// Positive-semidefinite slack on constructed matrices.
pub const PSD: f64 = 1e-9;
/// Solver residuals, PSD slack and relative duality gap of a certified optimum.
pub const SOLVER: f64 = 1e-7;
/// Hermiticity and trace of ingested (measured) process matrices.
pub const INGEST: f64 = 1e-6;
/// Comparison against reference values of the demonstration.
pub const REFERENCE: f64 = 5e-3;
