//! Acceptance gate: one test per numbered criterion, each printing a single
//! `[acceptance] criterion N: PASS/FAIL - detail` line (visible with
//! `--nocapture`). Results are computed through the same command layer the
//! binary uses, with the shared cache directory under `target/` so repeated
//! runs and the extended rank-4 tests reuse completed searches.
//!
//! Criteria 6 and 7 cover the rank-4 low-index searches. A fresh run takes
//! hours, so they are `#[ignore]`d by default; run them with
//! `cargo test -p fpx-cli --test acceptance -- --ignored`.

use fpx_cli::commands::{
    cmd_abel, cmd_embed, cmd_quotients, load_presentation, run_low_index,
};
use fpx_cli::config::RunConfig;
use fpx_cli::pipeline::{cmd_reproduce, ReproInputs};
use fpx_cli::reports::{ClassRecord, GroupRecord, ReproReport};
use fpx_core::abelianization::{rank_mod_prime, smith_normal_form, IntMatrix};
use fpx_core::catalog::{affine_order, run_screening, simple_groups_below};
use fpx_core::low_index::{low_index_subgroups, LowIndexOpts};
use fpx_core::permgroup::{
    alternating_group, cyclic_group, epimorphism_search, monomorphism_exists, psl3,
    symmetric_group, verify_epimorphism, verify_monomorphism, SearchBudget, SearchOutcome,
};
use fpx_core::rewriting::{core_table, reidemeister_schreier};
use fpx_core::todd_coxeter::{enumerate, EnumOpts, Strategy};
use fpx_core::words::Presentation;
use std::collections::BTreeSet;
use std::path::PathBuf;
use std::sync::OnceLock;

fn repo(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..").join(rel)
}

fn cfg() -> RunConfig {
    RunConfig {
        cache_dir: Some(repo("target/fpx-cache")),
        ..Default::default()
    }
}

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn report(n: u32, res: Result<String, String>) {
    match res {
        Ok(detail) => println!("[acceptance] criterion {}: PASS - {}", n, detail),
        Err(detail) => {
            println!("[acceptance] criterion {}: FAIL - {}", n, detail);
            panic!("criterion {} failed: {}", n, detail);
        }
    }
}

/// The rank-3 reproduction report, computed once per process and shared by
/// criteria 3, 4 and 5.
fn rank3() -> Result<&'static ReproReport, String> {
    static RANK3: OnceLock<Result<ReproReport, String>> = OnceLock::new();
    RANK3
        .get_or_init(|| {
            cmd_reproduce(&ReproInputs {
                rank: 3,
                presentations_dir: &repo("data/presentations"),
                atlas_dir: &repo("data/atlas"),
                expected_path: &repo("expected/reference_values.json"),
                cfg: &cfg(),
            })
            .map_err(|e| format!("rank-3 reproduction failed: {}", e))
        })
        .as_ref()
        .map_err(Clone::clone)
}

fn group_record<'a>(rep: &'a ReproReport, name: &str) -> Result<&'a GroupRecord, String> {
    rep.groups
        .iter()
        .find(|g| g.group == name)
        .ok_or_else(|| format!("report lacks a {} record", name))
}

fn classes_at(g: &GroupRecord, index: usize) -> Vec<&ClassRecord> {
    g.classes.iter().filter(|c| c.index == index).collect()
}

#[test]
fn criterion_01_abelianization_sanity() {
    let run = || -> Result<String, String> {
        let mut seen = Vec::new();
        for (file, torsion, label) in [
            ("aut_f3.pres", vec!["2"], "Aut F3"),
            ("out_f3.pres", vec!["2"], "Out F3"),
            ("saut_f3.pres", vec![], "SAut F3"),
            ("sout_f3.pres", vec![], "SOut F3"),
        ] {
            let rep = cmd_abel(&repo("data/presentations").join(file))
                .map_err(|e| format!("{}: {}", file, e))?;
            let inv = &rep.invariants;
            check(
                inv.torsion == torsion && inv.free_rank == 0,
                format!(
                    "{}: abelianization {} (expected torsion {:?}, free rank 0)",
                    label, inv.group, torsion
                ),
            )?;
            seen.push(format!("{} -> {}", label, inv.group));
        }
        Ok(seen.join(", "))
    };
    report(1, run());
}

#[test]
fn criterion_02_unique_index_two_subgroup() {
    let run = || -> Result<String, String> {
        let cfg = cfg();
        let mut seen = Vec::new();
        for (file, label) in [("aut_f3.pres", "Aut F3"), ("out_f3.pres", "Out F3")] {
            let p = load_presentation(&repo("data/presentations").join(file))
                .map_err(|e| e.to_string())?;
            let (res, _) = run_low_index(&p, 2, &cfg).map_err(|e| e.to_string())?;
            let n2 = res.subgroups.iter().filter(|c| c.index == 2).count();
            check(
                n2 == 1,
                format!("{}: found {} index-2 classes, expected exactly 1", label, n2),
            )?;
            seen.push(format!("{}: one index-2 subgroup", label));
        }
        Ok(seen.join(", "))
    };
    report(2, run());
}

#[test]
fn criterion_03_rank3_proper_indices() {
    let run = || -> Result<String, String> {
        let rep = rank3()?;
        let mut seen = Vec::new();
        for name in ["SAut", "SOut"] {
            let g = group_record(rep, name)?;
            check(
                g.indices_found == vec![7, 8, 13],
                format!("{} F3: proper indices {:?}, expected [7, 8, 13]", name, g.indices_found),
            )?;
            seen.push(format!(
                "{} F3 proper indices to 13 are {{7, 8, 13}} ({} nodes)",
                name, g.nodes
            ));
        }
        Ok(seen.join("; "))
    };
    report(3, run());
}

#[test]
fn criterion_04_rank3_core_quotients() {
    let run = || -> Result<String, String> {
        let rep = rank3()?;
        for name in ["SAut", "SOut"] {
            let g = group_record(rep, name)?;
            for c in classes_at(g, 7) {
                check(
                    c.core_index == 168 && c.simple,
                    format!("{} F3 index 7: core order {} simple={}", name, c.core_index, c.simple),
                )?;
            }
            let orders8: BTreeSet<u64> = classes_at(g, 8).iter().map(|c| c.core_index).collect();
            check(
                orders8 == BTreeSet::from([168, 1344]),
                format!("{} F3 index 8: core orders {:?}, expected {{168, 1344}}", name, orders8),
            )?;
            for c in classes_at(g, 8) {
                if c.core_index == 1344 {
                    check(
                        !c.simple
                            && c.normal_subgroup_order == Some(8)
                            && c.conjugation_quotient_order == Some(168),
                        format!(
                            "{} F3 order-1344 core: simple={}, normal subgroup {:?}, conjugation image {:?}",
                            name, c.simple, c.normal_subgroup_order, c.conjugation_quotient_order
                        ),
                    )?;
                } else {
                    check(
                        c.simple,
                        format!("{} F3 index 8: order-{} core not simple", name, c.core_index),
                    )?;
                }
            }
            for c in classes_at(g, 13) {
                check(
                    c.core_index == 5616 && c.simple,
                    format!("{} F3 index 13: core order {} simple={}", name, c.core_index, c.simple),
                )?;
            }
        }
        // the simplicity of the conjugation image is asserted by the pipeline
        // comparison covering the non-simple core analysis
        let ns = rep
            .comparisons
            .iter()
            .filter(|c| c.claim.contains("non-simple with an elementary abelian"))
            .collect::<Vec<_>>();
        check(!ns.is_empty(), "no non-simple core comparison recorded")?;
        for c in &ns {
            check(c.pass, format!("comparison failed: {} ({})", c.claim, c.detail))?;
        }
        Ok("index 7 -> 168 simple; index 8 -> {168, 1344} with the 1344 core non-simple \
            (elementary abelian normal subgroup of order 8, simple order-168 conjugation image); \
            index 13 -> 5616 simple, in both SAut F3 and SOut F3"
            .to_string())
    };
    report(4, run());
}

#[test]
fn criterion_05_nonsimple_core_abelianization() {
    let run = || -> Result<String, String> {
        let rep = rank3()?;
        let g = group_record(rep, "SOut")?;
        let with_ab: Vec<&ClassRecord> = g
            .classes
            .iter()
            .filter(|c| c.core_abelianization.is_some())
            .collect();
        check(!with_ab.is_empty(), "no core abelianization was computed")?;
        let mut seen = Vec::new();
        for c in with_ab {
            let ab = c.core_abelianization.as_ref().unwrap();
            check(
                c.core_index == 1344,
                format!("abelianized core has order {}, expected 1344", c.core_index),
            )?;
            check(
                ab.invariants.free_rank == 14 && ab.invariants.torsion.is_empty(),
                format!("core abelianization {}, expected Z^14", ab.invariants.group),
            )?;
            check(
                ab.check_primes.len() >= 2
                    && ab.check_ranks.iter().all(|&r| ab.matrix_cols - r == 14),
                format!(
                    "modular precheck disagrees: cols {} ranks {:?}",
                    ab.matrix_cols, ab.check_ranks
                ),
            )?;
            seen.push(format!(
                "order-1344 core of SOut F3 abelianizes to {} ({} x {} matrix, mod-p ranks {:?} at two primes)",
                ab.invariants.group, ab.matrix_rows, ab.matrix_cols, ab.check_ranks
            ));
        }
        Ok(seen.join("; "))
    };
    report(5, run());
}

/// Rank-4 low-index results, shared by criteria 6 and 7. Cached on disk, so
/// only the first run in a fresh checkout pays the multi-hour search.
fn rank4(file: &str) -> Result<&'static fpx_core::low_index::LowIndexResult, String> {
    static SAUT: OnceLock<Result<fpx_core::low_index::LowIndexResult, String>> = OnceLock::new();
    static SOUT: OnceLock<Result<fpx_core::low_index::LowIndexResult, String>> = OnceLock::new();
    let cell = if file.starts_with("saut") { &SAUT } else { &SOUT };
    cell.get_or_init(|| {
        let p = load_presentation(&repo("data/presentations").join(file))
            .map_err(|e| e.to_string())?;
        let mut cfg = cfg();
        cfg.checkpoint_path = Some(repo("target/fpx-cache").join("acceptance.ckpt"));
        let (res, _) = run_low_index(&p, 16, &cfg).map_err(|e| e.to_string())?;
        Ok(res)
    })
    .as_ref()
    .map_err(Clone::clone)
}

#[test]
#[ignore = "extended: multi-hour rank-4 low-index search on a fresh checkout"]
fn criterion_06_rank4_proper_indices() {
    let run = || -> Result<String, String> {
        let mut seen = Vec::new();
        for (file, label, want) in [
            ("saut_f4.pres", "SAut F4", vec![8, 15, 16]),
            ("sout_f4.pres", "SOut F4", vec![8, 15]),
        ] {
            let res = rank4(file)?;
            let got = res.proper_indices();
            check(
                got == want,
                format!("{}: proper indices {:?}, expected {:?}", label, got, want),
            )?;
            seen.push(format!(
                "{} proper indices to 16 are {:?} ({} nodes)",
                label, want, res.stats.nodes
            ));
        }
        Ok(seen.join("; "))
    };
    report(6, run());
}

#[test]
#[ignore = "extended: depends on the rank-4 low-index searches of criterion 6"]
fn criterion_07_rank4_core_quotients() {
    let run = || -> Result<String, String> {
        let mut seen = Vec::new();
        for (file, label) in [("saut_f4.pres", "SAut F4"), ("sout_f4.pres", "SOut F4")] {
            let res = rank4(file)?;
            for sub in res.subgroups.iter().filter(|c| c.index > 1) {
                let core = core_table(&sub.table, 400_000).map_err(|e| e.to_string())?;
                let g = sub.table.to_perm_group();
                match sub.index {
                    8 | 15 => {
                        check(
                            core.quotient_order == 20160,
                            format!(
                                "{} index {}: core order {}, expected 20160",
                                label, sub.index, core.quotient_order
                            ),
                        )?;
                        let simple =
                            g.is_nonabelian_simple(core.quotient_order).map_err(|e| e.to_string())?;
                        let spectrum =
                            g.element_order_spectrum(core.quotient_order).map_err(|e| e.to_string())?;
                        check(
                            simple && spectrum.contains(&15),
                            format!(
                                "{} index {}: simple={}, spectrum contains 15: {}",
                                label,
                                sub.index,
                                simple,
                                spectrum.contains(&15)
                            ),
                        )?;
                    }
                    16 => {
                        let affine = affine_order(4, 2).map_err(|e| e.to_string())?;
                        check(
                            core.quotient_order == affine && core.quotient_order == 322560,
                            format!(
                                "{} index 16: core order {}, expected affine order {}",
                                label, core.quotient_order, affine
                            ),
                        )?;
                    }
                    other => {
                        return Err(format!("{}: unexpected proper index {}", label, other));
                    }
                }
            }
            seen.push(format!("{} cores verified", label));
        }
        Ok(format!(
            "order 20160 at indices 8 and 15, simple with an order-15 element \
             (degree-8 alternating, not the projective plane group of the same order); \
             order 322560 = affine_order(4, 2) at index 16; {}",
            seen.join("; ")
        ))
    };
    report(7, run());
}

#[test]
fn criterion_08_catalog_and_screening() {
    let run = || -> Result<String, String> {
        let want: Vec<(&str, u64)> = vec![
            ("A5", 60),
            ("L2(7)", 168),
            ("A6", 360),
            ("L2(8)", 504),
            ("L2(11)", 660),
            ("L2(13)", 1092),
            ("L2(17)", 2448),
            ("A7", 2520),
            ("L2(19)", 3420),
            ("L2(16)", 4080),
            ("L3(3)", 5616),
            ("U3(3)", 6048),
            ("L2(23)", 6072),
            ("L2(25)", 7800),
            ("M11", 7920),
            ("L2(27)", 9828),
            ("L2(29)", 12180),
            ("L2(31)", 14880),
        ];
        let got: Vec<(String, u64)> = simple_groups_below(20160)
            .map_err(|e| e.to_string())?
            .into_iter()
            .map(|r| (r.name, r.order))
            .collect();
        let want_owned: Vec<(String, u64)> =
            want.iter().map(|(n, o)| (n.to_string(), *o)).collect();
        check(
            got == want_owned,
            format!("catalog below 20160 is {:?}", got),
        )?;
        let s3 = run_screening(3).map_err(|e| e.to_string())?;
        check(
            s3.survivors.is_empty(),
            format!("rank-3 screening survivors {:?}, expected none", s3.survivors),
        )?;
        let s4 = run_screening(4).map_err(|e| e.to_string())?;
        check(
            s4.verdicts.iter().all(|v| !v.stage1_divides),
            "rank-4 stage 1 unexpectedly passed some group",
        )?;
        check(
            s4.survivors == ["U3(3)", "L2(31)"],
            format!("rank-4 survivors {:?}, expected [U3(3), L2(31)]", s4.survivors),
        )?;
        Ok(format!(
            "catalog lists all {} nonabelian simple groups of order < 20160; \
             rank-3 screening leaves no survivors; rank-4 stage 1 passes none and \
             stage 2 leaves exactly {{U3(3), L2(31)}}",
            want.len()
        ))
    };
    report(8, run());
}

#[test]
fn criterion_09_embedding_exclusions() {
    let run = || -> Result<String, String> {
        let rep = cmd_embed(4, &repo("data/atlas"), &cfg()).map_err(|e| e.to_string())?;
        check(rep.checks.len() == 3, format!("{} checks, expected 3", rep.checks.len()))?;
        let mut seen = Vec::new();
        for c in &rep.checks {
            check(
                c.outcome == "absent",
                format!("{} -> {}: outcome {}", c.source, c.target, c.outcome),
            )?;
            seen.push(format!(
                "no {} in {} ({} nodes)",
                c.source, c.target, c.nodes
            ));
        }
        Ok(seen.join("; "))
    };
    report(9, run());
}

#[test]
fn criterion_10_quotient_search() {
    let run = || -> Result<String, String> {
        let cfg = cfg();
        let rep = cmd_quotients(
            &repo("data/presentations/sout_f3.pres"),
            168,
            &repo("data/atlas"),
            &cfg,
        )
        .map_err(|e| e.to_string())?;
        let mut a5_none = false;
        let mut l27_found = false;
        for t in &rep.targets {
            match (t.target.as_str(), t.outcome.as_str()) {
                ("A5", "none") => a5_none = true,
                ("L2(7)", "quotient") => {
                    check(t.verified == Some(true), "L2(7) witness failed verification")?;
                    l27_found = true;
                }
                (name, outcome) => {
                    return Err(format!("unexpected entry {} -> {}", name, outcome));
                }
            }
        }
        check(a5_none, "A5 was not excluded exhaustively")?;
        check(l27_found, "no L2(7) quotient found")?;
        let p = load_presentation(&repo("data/presentations/sout_f3.pres"))
            .map_err(|e| e.to_string())?;
        let l33 = psl3(3);
        match epimorphism_search(&p, &l33, &SearchBudget::default()).map_err(|e| e.to_string())? {
            SearchOutcome::Found(w) => {
                check(
                    verify_epimorphism(&p, &w.images, &l33),
                    "L3(3) witness failed verification",
                )?;
                check(
                    w.image_order == 5616,
                    format!("L3(3) witness image order {}", w.image_order),
                )?;
            }
            SearchOutcome::NoneExhaustive { .. } => {
                return Err("no epimorphism onto L3(3) found".to_string());
            }
        }
        Ok(
            "SOut F3 has no nonabelian simple quotient below order 168 (A5 excluded \
             exhaustively) and admits verified quotients onto L2(7) (order 168) and \
             L3(3) (order 5616)"
                .to_string(),
        )
    };
    report(10, run());
}

#[test]
fn criterion_11_property_suites() {
    let run = || -> Result<String, String> {
        // one deterministic miniature per suite; the randomized versions run
        // in the core crate's property tests
        let s4 = Presentation::new(
            Some("s4"),
            &["a", "b"],
            vec![vec![1, 1], vec![2, 2, 2], vec![1, 2, 1, 2, 1, 2, 1, 2]],
        );
        let opts = |s| EnumOpts {
            strategy: s,
            max_cosets: 100_000,
            coincidence_shuffle: None,
        };
        let h = enumerate(&s4, &[], &opts(Strategy::Hlt)).map_err(|e| e.to_string())?;
        let f = enumerate(&s4, &[], &opts(Strategy::Felsch)).map_err(|e| e.to_string())?;
        let shuffled = enumerate(
            &s4,
            &[],
            &EnumOpts {
                strategy: Strategy::Hlt,
                max_cosets: 100_000,
                coincidence_shuffle: Some(7),
            },
        )
        .map_err(|e| e.to_string())?;
        check(
            h.table.n() == 24 && f.table.n() == 24 && shuffled.table.n() == 24,
            "strategy independence: enumerations of the order-24 presentation disagree",
        )?;

        let li = low_index_subgroups(
            &s4,
            &LowIndexOpts {
                max_index: 24,
                ..Default::default()
            },
        )
        .map_err(|e| e.to_string())?;
        let counts = li.count_by_index();
        let lattice: Vec<(usize, usize)> =
            vec![(1, 1), (2, 1), (3, 1), (4, 1), (6, 3), (8, 1), (12, 2), (24, 1)];
        check(
            counts.len() == lattice.len()
                && lattice.iter().all(|(i, n)| counts.get(i) == Some(n)),
            format!("low-index oracle: subgroup class counts {:?}", counts),
        )?;

        let f2 = Presentation::new(Some("f2"), &["a", "b"], vec![]);
        let li2 = low_index_subgroups(
            &f2,
            &LowIndexOpts {
                max_index: 3,
                ..Default::default()
            },
        )
        .map_err(|e| e.to_string())?;
        let c2 = li2.count_by_index();
        check(
            c2.get(&2) == Some(&3) && c2.get(&3) == Some(&7),
            format!("free group class counts {:?}", c2),
        )?;
        for sub in &li2.subgroups {
            let rs = reidemeister_schreier(&f2, &sub.table);
            check(
                rs.schreier_gens.len() == sub.index + 1 && rs.presentation.relators.is_empty(),
                format!(
                    "Nielsen-Schreier: index {} gave {} generators",
                    sub.index,
                    rs.schreier_gens.len()
                ),
            )?;
        }

        let m = IntMatrix::from_dense(&[vec![4, 6], vec![6, 4]]);
        let snf = smith_normal_form(&m);
        let divisors: Vec<String> = snf.divisors.iter().map(|d| d.to_string()).collect();
        check(
            divisors == ["2", "10"] && rank_mod_prime(&m, 2_147_483_647) == 2,
            format!("SNF divisors {:?}", divisors),
        )?;

        check(
            alternating_group(5).order() == 60 && symmetric_group(8).order() == 40320,
            "stabilizer chain orders are wrong",
        )?;

        let budget = SearchBudget::default();
        let s3 = symmetric_group(3);
        match epimorphism_search(&s4, &s3, &budget).map_err(|e| e.to_string())? {
            SearchOutcome::Found(w) => {
                check(
                    verify_epimorphism(&s4, &w.images, &s3),
                    "epimorphism witness failed re-verification",
                )?;
            }
            SearchOutcome::NoneExhaustive { .. } => {
                return Err("no epimorphism from the order-24 presentation onto S3".into());
            }
        }
        match epimorphism_search(&s4, &cyclic_group(5), &budget).map_err(|e| e.to_string())? {
            SearchOutcome::Found(_) => return Err("found an impossible epimorphism onto Z5".into()),
            SearchOutcome::NoneExhaustive { .. } => {}
        }
        let c4 = Presentation::new(Some("c4"), &["a"], vec![vec![1, 1, 1, 1]]);
        match monomorphism_exists(&c4, 4, &[4], &symmetric_group(4), &budget)
            .map_err(|e| e.to_string())?
        {
            SearchOutcome::Found(w) => {
                check(
                    verify_monomorphism(&c4, 4, &w.images, &symmetric_group(4)),
                    "monomorphism witness failed re-verification",
                )?;
            }
            SearchOutcome::NoneExhaustive { .. } => {
                return Err("no embedding of Z4 into S4 found".into());
            }
        }

        Ok(
            "miniatures of all six suites pass (strategy independence, low-index \
             census oracle, Nielsen-Schreier, SNF chain, stabilizer chain orders, \
             witness re-verification); the randomized suites run in the core crate"
                .to_string(),
        )
    };
    report(11, run());
}
