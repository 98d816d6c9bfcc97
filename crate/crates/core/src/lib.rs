//! Computability toolkit: loop-detecting Turing machines, Gödel's
//! β-function, dovetailed search with a totalized μ-operator, horizon
//! machines, and a particle-signature model of a deterministic universe.

pub mod beta;
pub mod collapse;
pub mod dovetail;
pub mod machine;
pub mod universe;

/// Directory holding the shipped machine corpus and universe configs.
pub const CORPUS_DIR: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/corpus");
