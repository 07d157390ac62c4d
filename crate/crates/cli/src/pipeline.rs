//! End-to-end reproduction pipeline: derive the determinant-one subgroups of
//! the automorphism and outer automorphism presentations, enumerate their
//! low-index subgroups, analyze the cores, screen the simple-group catalog,
//! and compare everything against the reference values file.

use crate::commands::{cmd_embed, identify_class, load_presentation, run_low_index};
use crate::config::RunConfig;
use crate::expected::{index_keys, load_expected, ExpectedValues, Rank3Expected, Rank4Expected};
use crate::reports::*;
use crate::CliError;
use fpx_core::abelianization::{
    abelian_invariants, abelian_invariants_of_matrix, rank_mod_prime, RANK_CHECK_PRIMES,
};
use fpx_core::catalog::run_screening;
use fpx_core::low_index::SubgroupClass;
use fpx_core::permgroup::{PermGroup, Permutation};
use fpx_core::rewriting::{core_table, reidemeister_schreier, rs_exponent_matrix};
use fpx_core::tietze::{tietze_simplify, TietzeLimits};
use fpx_core::words::{normalize_relator, Presentation};
use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

fn stage<E: std::fmt::Display>(name: &'static str) -> impl Fn(E) -> CliError {
    move |e| CliError::stage(name, e.to_string())
}

/// Presentation of the unique index-2 subgroup: coset enumeration, rewriting,
/// simplification, generator renaming. Fails if the subgroup is not unique
/// or the result is not perfect.
pub fn derive_det1(
    ambient: &Presentation,
    derived_name: &str,
    cfg: &RunConfig,
) -> Result<Presentation, CliError> {
    let (res, _) = run_low_index(ambient, 2, cfg).map_err(stage("derive-det1"))?;
    let idx2: Vec<&SubgroupClass> = res.subgroups.iter().filter(|c| c.index == 2).collect();
    if idx2.len() != 1 {
        return Err(CliError::stage(
            "derive-det1",
            format!("expected a unique index-2 subgroup class, found {}", idx2.len()),
        ));
    }
    let data = reidemeister_schreier(ambient, &idx2[0].table);
    let mut sp = data.presentation;
    sp.name = Some(derived_name.to_string());
    let mut sp = tietze_simplify(&sp, &TietzeLimits::default());
    for r in &mut sp.relators {
        *r = normalize_relator(r);
    }
    sp.gens = (0..sp.gens.len()).map(|i| format!("s{}", i)).collect();
    let ab = abelian_invariants(&sp);
    if ab.free_rank != 0 || !ab.torsion.is_empty() {
        return Err(CliError::stage(
            "derive-det1",
            "derived subgroup is not perfect".to_string(),
        ));
    }
    Ok(sp)
}

/// In a non-simple quotient, look for a proper elementary abelian normal
/// subgroup generated by an involution class, and the image of the
/// conjugation action on its involutions.
struct NonsimpleAnalysis {
    normal_order: u64,
    conj_order: u64,
    conj_simple: bool,
}

fn nonsimple_analysis(g: &PermGroup) -> Result<Option<NonsimpleAnalysis>, CliError> {
    let order = g.order();
    let reps = g.conjugacy_class_reps(order).map_err(stage("core-analysis"))?;
    for rep in reps {
        if rep.order() != 2 {
            continue;
        }
        let n = g.normal_closure(std::slice::from_ref(&rep));
        let n_order = n.order();
        if n_order >= order || n_order < 4 {
            continue;
        }
        let elems = n.elements(n_order).map_err(stage("core-analysis"))?;
        let elementary = elems
            .iter()
            .all(|e| e.is_identity() || e.order() == 2)
            && n.is_abelian();
        if !elementary {
            continue;
        }
        let involutions: Vec<Permutation> =
            elems.into_iter().filter(|e| !e.is_identity()).collect();
        let lookup = |p: &Permutation| -> Option<u32> {
            involutions.iter().position(|q| q == p).map(|i| i as u32)
        };
        let mut action = Vec::new();
        for gen in g.gens() {
            let mut img = Vec::with_capacity(involutions.len());
            for v in &involutions {
                let c = v.conjugate_by(gen);
                match lookup(&c) {
                    Some(i) => img.push(i),
                    None => return Ok(None),
                }
            }
            action.push(Permutation::from_images(img).map_err(stage("core-analysis"))?);
        }
        let conj = PermGroup::new(involutions.len(), action).map_err(stage("core-analysis"))?;
        let conj_order = conj.order();
        let conj_simple = conj
            .is_nonabelian_simple(conj_order)
            .map_err(stage("core-analysis"))?;
        return Ok(Some(NonsimpleAnalysis {
            normal_order: n_order,
            conj_order,
            conj_simple,
        }));
    }
    Ok(None)
}

struct FlavorOutcome {
    record: GroupRecord,
    /// (class position in record.classes) with a computed core abelianization.
    nonsimple_conj_simple: BTreeMap<usize, bool>,
}

#[allow(clippy::too_many_arguments)]
fn run_flavor(
    label: &str,
    rank: u32,
    presentations_dir: &Path,
    base: &str,
    max_index: usize,
    core_bound: u64,
    abelianize_core_order: Option<u64>,
    cfg: &RunConfig,
) -> Result<FlavorOutcome, CliError> {
    let file = format!("{}_f{}.pres", base, rank);
    let path = presentations_dir.join(&file);
    let ambient = load_presentation(&path).map_err(stage("parse"))?;
    let t0 = Instant::now();
    let derived_name = format!("s{}_f{}", base, rank);
    let derived = derive_det1(&ambient, &derived_name, cfg)?;
    let (res, _) = run_low_index(&derived, max_index, cfg).map_err(stage("low-index"))?;

    let mut classes = Vec::new();
    let mut nonsimple_conj_simple = BTreeMap::new();
    let mut class_pos: BTreeMap<usize, usize> = BTreeMap::new();
    for sub in res.subgroups.iter().filter(|c| c.index > 1) {
        let pos = class_pos.entry(sub.index).or_insert(0);
        *pos += 1;
        let core = core_table(&sub.table, core_bound).map_err(stage("core"))?;
        let g = sub.table.to_perm_group();
        let (simple, _spectrum, identification) =
            identify_class(&g, core.quotient_order, core_bound).map_err(stage("identify"))?;
        let mut rec = ClassRecord {
            index: sub.index,
            class: *pos,
            core_index: core.quotient_order,
            simple,
            identification,
            normal_subgroup_order: None,
            conjugation_quotient_order: None,
            core_abelianization: None,
            note: None,
        };
        if !simple {
            if let Some(a) = nonsimple_analysis(&g)? {
                rec.normal_subgroup_order = Some(a.normal_order);
                rec.conjugation_quotient_order = Some(a.conj_order);
                nonsimple_conj_simple.insert(classes.len(), a.conj_simple);
            }
            if abelianize_core_order == Some(core.quotient_order) {
                let (m, _sgens) = rs_exponent_matrix(&derived, &core.table);
                let check_primes: Vec<u64> = RANK_CHECK_PRIMES[..2].to_vec();
                let check_ranks: Vec<usize> = check_primes
                    .iter()
                    .map(|&p| rank_mod_prime(&m, p))
                    .collect();
                let inv = abelian_invariants_of_matrix(&m);
                rec.core_abelianization = Some(CoreAbelReport {
                    invariants: AbelSummary::from_invariants(&inv),
                    matrix_rows: m.rows,
                    matrix_cols: m.cols,
                    check_primes,
                    check_ranks,
                });
            } else if core.quotient_order > 100_000 {
                rec.note = Some(format!(
                    "core abelianization not computed (subgroup index {} is beyond the rewriting budget)",
                    core.quotient_order
                ));
            }
        }
        classes.push(rec);
    }
    let record = GroupRecord {
        group: label.to_string(),
        rank,
        derived_from: file,
        max_index,
        indices_found: res.proper_indices(),
        class_counts: res.count_by_index(),
        nodes: res.stats.nodes,
        classes,
        wall_time: t0.elapsed(),
    };
    Ok(FlavorOutcome {
        record,
        nonsimple_conj_simple,
    })
}

fn push_cmp(out: &mut Vec<ComparisonResult>, claim: String, pass: bool, detail: String) {
    out.push(ComparisonResult { claim, pass, detail });
}

fn core_orders_at(record: &GroupRecord, index: usize) -> Vec<u64> {
    let mut v: Vec<u64> = record
        .classes
        .iter()
        .filter(|c| c.index == index)
        .map(|c| c.core_index)
        .collect();
    v.sort_unstable();
    v.dedup();
    v
}

fn compare_rank3(
    exp: &Rank3Expected,
    outcomes: &[FlavorOutcome],
    screening_survivors: &[String],
    out: &mut Vec<ComparisonResult>,
) -> Result<(), CliError> {
    for o in outcomes {
        let g = &o.record;
        let name = format!("{} F{}", g.group, g.rank);
        push_cmp(
            out,
            format!("{}: proper subgroup indices up to {} are {:?}", name, g.max_index, exp.proper_indices),
            g.indices_found == exp.proper_indices,
            format!("computed {:?}", g.indices_found),
        );
        for (idx, orders) in index_keys(&exp.core_orders_by_index)? {
            let got = core_orders_at(g, idx);
            push_cmp(
                out,
                format!("{}: core quotient orders at index {} are {:?}", name, idx, orders),
                got == orders,
                format!("computed {:?}", got),
            );
        }
        let simple_ok: Vec<String> = g
            .classes
            .iter()
            .filter(|c| exp.simple_core_orders.contains(&c.core_index))
            .map(|c| format!("index {} order {} simple={}", c.index, c.core_index, c.simple))
            .collect();
        push_cmp(
            out,
            format!("{}: core quotients of orders {:?} are simple", name, exp.simple_core_orders),
            g.classes
                .iter()
                .filter(|c| exp.simple_core_orders.contains(&c.core_index))
                .all(|c| c.simple),
            simple_ok.join("; "),
        );
        let ns = &exp.nonsimple_core;
        let ns_classes: Vec<(usize, &ClassRecord)> = g
            .classes
            .iter()
            .enumerate()
            .filter(|(_, c)| c.core_index == ns.order)
            .collect();
        let ns_pass = !ns_classes.is_empty()
            && ns_classes.iter().all(|(i, c)| {
                !c.simple
                    && c.normal_subgroup_order == Some(ns.normal_subgroup_order)
                    && c.conjugation_quotient_order == Some(ns.conjugation_quotient_order)
                    && o.nonsimple_conj_simple.get(i) == Some(&true)
            });
        let ns_detail: Vec<String> = ns_classes
            .iter()
            .map(|(i, c)| {
                format!(
                    "index {}: simple={}, normal subgroup {:?}, conjugation image {:?} (simple={:?})",
                    c.index,
                    c.simple,
                    c.normal_subgroup_order,
                    c.conjugation_quotient_order,
                    o.nonsimple_conj_simple.get(i)
                )
            })
            .collect();
        push_cmp(
            out,
            format!(
                "{}: order-{} core quotient is non-simple with an elementary abelian normal subgroup of order {} and simple conjugation image of order {}",
                name, ns.order, ns.normal_subgroup_order, ns.conjugation_quotient_order
            ),
            ns_pass,
            ns_detail.join("; "),
        );
    }
    let souts: Vec<&FlavorOutcome> = outcomes.iter().filter(|o| o.record.group == "SOut").collect();
    for o in souts {
        let ab_classes: Vec<&ClassRecord> = o
            .record
            .classes
            .iter()
            .filter(|c| c.core_abelianization.is_some())
            .collect();
        let pass = !ab_classes.is_empty()
            && ab_classes.iter().all(|c| {
                let ab = c.core_abelianization.as_ref().unwrap();
                ab.invariants.free_rank == exp.outer_core_abelianization_free_rank
                    && ab.invariants.torsion.is_empty()
                    && ab
                        .check_ranks
                        .iter()
                        .all(|&r| ab.matrix_cols - r == ab.invariants.free_rank)
            });
        let detail: Vec<String> = ab_classes
            .iter()
            .map(|c| {
                let ab = c.core_abelianization.as_ref().unwrap();
                format!(
                    "index {} core {}: {} (mod-p ranks {:?})",
                    c.index, c.core_index, ab.invariants.group, ab.check_ranks
                )
            })
            .collect();
        push_cmp(
            out,
            format!(
                "SOut F3: abelianization of the order-{} core is free abelian of rank {}",
                exp.nonsimple_core.order, exp.outer_core_abelianization_free_rank
            ),
            pass,
            detail.join("; "),
        );
    }
    push_cmp(
        out,
        format!("rank 3 screening survivors are {:?}", exp.screening_survivors),
        screening_survivors == exp.screening_survivors,
        format!("computed {:?}", screening_survivors),
    );
    Ok(())
}

fn compare_rank4(
    exp: &Rank4Expected,
    outcomes: &[FlavorOutcome],
    screening_survivors: &[String],
    embed_checks: &[EmbedCheck],
    out: &mut Vec<ComparisonResult>,
) -> Result<(), CliError> {
    for o in outcomes {
        let g = &o.record;
        let name = format!("{} F{}", g.group, g.rank);
        let expected_indices = if g.group == "SAut" {
            &exp.aut_proper_indices
        } else {
            &exp.out_proper_indices
        };
        push_cmp(
            out,
            format!("{}: proper subgroup indices up to {} are {:?}", name, g.max_index, expected_indices),
            &g.indices_found == expected_indices,
            format!("computed {:?}", g.indices_found),
        );
        if g.group != "SAut" {
            continue;
        }
        for (idx, orders) in index_keys(&exp.aut_core_orders_by_index)? {
            let got = core_orders_at(g, idx);
            push_cmp(
                out,
                format!("{}: core quotient orders at index {} are {:?}", name, idx, orders),
                got == orders,
                format!("computed {:?}", got),
            );
        }
        let simple_classes: Vec<&ClassRecord> =
            g.classes.iter().filter(|c| c.simple).collect();
        push_cmp(
            out,
            format!(
                "{}: simple core quotients are identified as {}",
                name, exp.simple_core_identification
            ),
            !simple_classes.is_empty()
                && simple_classes.iter().all(|c| {
                    c.identification
                        .iter()
                        .any(|i| i.name == exp.simple_core_identification)
                }),
            simple_classes
                .iter()
                .map(|c| format!("index {}: {}", c.index, fmt_idents(&c.identification)))
                .collect::<Vec<_>>()
                .join("; "),
        );
        let ns_classes: Vec<&ClassRecord> = g
            .classes
            .iter()
            .filter(|c| c.core_index == exp.nonsimple_core_order)
            .collect();
        push_cmp(
            out,
            format!(
                "{}: an order-{} core quotient occurs and is not simple",
                name, exp.nonsimple_core_order
            ),
            !ns_classes.is_empty() && ns_classes.iter().all(|c| !c.simple),
            ns_classes
                .iter()
                .map(|c| {
                    format!(
                        "index {}: simple={}, {}",
                        c.index,
                        c.simple,
                        fmt_idents(&c.identification)
                    )
                })
                .collect::<Vec<_>>()
                .join("; "),
        );
    }
    push_cmp(
        out,
        format!("rank 4 screening survivors are {:?}", exp.screening_survivors),
        screening_survivors == exp.screening_survivors,
        format!("computed {:?}", screening_survivors),
    );
    for (src, tgt) in &exp.embeddings_absent {
        let found = embed_checks
            .iter()
            .find(|c| &c.source == src && &c.target == tgt);
        let (pass, detail) = match found {
            Some(c) => (c.outcome == "absent", format!("outcome: {}", c.outcome)),
            None => (false, "check not run".to_string()),
        };
        push_cmp(
            out,
            format!("no embedding of {} into {}", src, tgt),
            pass,
            detail,
        );
    }
    Ok(())
}

pub struct ReproInputs<'a> {
    pub rank: u32,
    pub presentations_dir: &'a Path,
    pub atlas_dir: &'a Path,
    pub expected_path: &'a Path,
    pub cfg: &'a RunConfig,
}

pub fn cmd_reproduce(inp: &ReproInputs) -> Result<ReproReport, CliError> {
    if !(3..=4).contains(&inp.rank) {
        return Err(CliError::Config(format!("rank must be 3 or 4, got {}", inp.rank)));
    }
    let expected: ExpectedValues = load_expected(inp.expected_path)?;
    let t0 = Instant::now();
    let (max_index, core_bound) = if inp.rank == 3 { (13, 10_000) } else { (16, 400_000) };
    let abelianize = if inp.rank == 3 {
        expected.rank3.as_ref().map(|e| e.nonsimple_core.order)
    } else {
        None
    };
    let mut outcomes = Vec::new();
    for (label, base) in [("SAut", "aut"), ("SOut", "out")] {
        let abel = if label == "SOut" { abelianize } else { None };
        outcomes.push(run_flavor(
            label,
            inp.rank,
            inp.presentations_dir,
            base,
            max_index,
            core_bound,
            abel,
            inp.cfg,
        )?);
    }
    let screening = run_screening(inp.rank).map_err(stage("screening"))?;
    let embedding_checks = if inp.rank == 4 {
        cmd_embed(4, inp.atlas_dir, inp.cfg)
            .map_err(stage("embedding"))?
            .checks
    } else {
        Vec::new()
    };
    let mut comparisons = Vec::new();
    match inp.rank {
        3 => {
            let exp = expected.rank3.as_ref().ok_or_else(|| {
                CliError::Config("expected values file lacks a rank3 section".into())
            })?;
            compare_rank3(exp, &outcomes, &screening.survivors, &mut comparisons)?;
        }
        _ => {
            let exp = expected.rank4.as_ref().ok_or_else(|| {
                CliError::Config("expected values file lacks a rank4 section".into())
            })?;
            compare_rank4(
                exp,
                &outcomes,
                &screening.survivors,
                &embedding_checks,
                &mut comparisons,
            )?;
        }
    }
    Ok(ReproReport {
        rank: inp.rank,
        groups: outcomes.into_iter().map(|o| o.record).collect(),
        screening,
        embedding_checks,
        comparisons,
        wall_time: t0.elapsed(),
    })
}
