//! Determinant-one subgroup presentations derived from the four-generator
//! presentations by coset enumeration and rewriting.

use fpx_core::abelianization::abelian_invariants;
use fpx_core::low_index::{low_index_subgroups, LowIndexOpts};
use fpx_core::rewriting::reidemeister_schreier;
use fpx_core::tietze::{tietze_simplify, TietzeLimits};
use fpx_core::words::Presentation;

/// Presentation of the unique index-2 subgroup, simplified and renamed.
///
/// The input groups abelianize to Z2, so the index-2 subgroup exists and is
/// unique; both facts are asserted rather than assumed.
pub fn derive_special(p: &Presentation, name: &str) -> Presentation {
    let opts = LowIndexOpts {
        max_index: 2,
        ..Default::default()
    };
    let res = low_index_subgroups(p, &opts).expect("index-2 subgroup search");
    let proper: Vec<_> = res.subgroups.iter().filter(|c| c.index == 2).collect();
    assert_eq!(proper.len(), 1, "index-2 subgroup is not unique");

    let data = reidemeister_schreier(p, &proper[0].table);
    let mut sp = data.presentation;
    sp.name = Some(name.to_string());
    let mut sp = tietze_simplify(&sp, &TietzeLimits::default());
    for r in &mut sp.relators {
        *r = fpx_core::words::normalize_relator(r);
    }
    sp.gens = (0..sp.gens.len()).map(|i| format!("s{}", i)).collect();

    let ab = abelian_invariants(&sp);
    assert_eq!(ab.free_rank, 0, "derived subgroup must be perfect");
    assert!(ab.torsion.is_empty(), "derived subgroup must be perfect");
    sp
}
