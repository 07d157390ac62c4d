//! Computation with finitely presented groups: words and presentations,
//! Todd-Coxeter coset enumeration, low-index subgroup search,
//! Reidemeister-Schreier rewriting, integer Smith normal form, permutation
//! groups with stabilizer chains, and a catalog of small simple groups.

pub mod abelianization;
pub mod catalog;
pub mod gf;
pub mod low_index;
pub mod permgroup;
pub mod rewriting;
pub mod tietze;
pub mod todd_coxeter;
pub mod words;

pub use abelianization::{
    abelian_invariants, relator_exponent_matrix, smith_normal_form, AbelianInvariants, IntMatrix,
    SnfResult,
};
pub use permgroup::{PermGroup, Permutation};
pub use tietze::{tietze_simplify, TietzeLimits};
pub use words::{
    cyclic_reduce, free_reduce, parse_presentation, Letter, ParseError, Presentation, Word,
};
