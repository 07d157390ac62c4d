//! Generates the shipped data files: presentations of the automorphism and
//! outer automorphism groups of low-rank free groups (with their index-2
//! determinant-one subgroups) and two matrix-group permutation actions.
//!
//! Everything is constructed and verified at generation time; the binary
//! writes the files into the workspace data directory.

pub mod derived;
pub mod emit;
pub mod fourgen;
pub mod freeaut;
pub mod matrices;
pub mod transvections;
