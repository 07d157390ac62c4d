//! End-to-end tests of the command layer and the binary on small inputs.

use fpx_cli::commands::*;
use fpx_cli::config::RunConfig;
use fpx_cli::pipeline::derive_det1;
use fpx_cli::reports::Envelope;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

fn write_s3(dir: &Path) -> PathBuf {
    let p = dir.join("s3.pres");
    fs::write(&p, "group s3\ngens a,b\nrel a^2\nrel b^2\nrel (a*b)^3\n").unwrap();
    p
}

fn repo_path(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..").join(rel)
}

#[test]
fn parse_and_abel_on_dihedral_presentation() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_s3(dir.path());
    let rep = cmd_parse(&p).unwrap();
    assert_eq!(rep.name.as_deref(), Some("s3"));
    assert_eq!(rep.gens, vec!["a", "b"]);
    assert_eq!(rep.relator_count, 3);
    assert!(rep.canonical.contains("rel a*b*a*b*a*b"));

    let ab = cmd_abel(&p).unwrap();
    assert_eq!(ab.invariants.free_rank, 0);
    assert_eq!(ab.invariants.torsion, vec!["2"]);
    assert_eq!(ab.invariants.group, "Z/2");
}

#[test]
fn tc_computes_order_and_subgroup_index() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_s3(dir.path());
    let cfg = RunConfig::default();
    let whole = cmd_tc(&p, &[], &cfg).unwrap();
    assert_eq!(whole.index, 6);
    let sub = cmd_tc(&p, &["a".to_string()], &cfg).unwrap();
    assert_eq!(sub.index, 3);
}

#[test]
fn lowindex_matches_order_six_lattice() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_s3(dir.path());
    let cfg = RunConfig {
        max_index: 3,
        ..Default::default()
    };
    let rep = cmd_lowindex(&p, &cfg).unwrap();
    assert_eq!(rep.class_count, 3);
    assert_eq!(rep.proper_indices, vec![2, 3]);
    let counts: Vec<(usize, usize)> = rep.counts.iter().map(|(&i, &c)| (i, c)).collect();
    assert_eq!(counts, vec![(1, 1), (2, 1), (3, 1)]);
}

#[test]
fn lowindex_cache_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_s3(dir.path());
    let cfg = RunConfig {
        max_index: 3,
        cache_dir: Some(dir.path().join("cache")),
        ..Default::default()
    };
    let fresh = cmd_lowindex(&p, &cfg).unwrap();
    assert!(!fresh.from_cache);
    let cached = cmd_lowindex(&p, &cfg).unwrap();
    assert!(cached.from_cache);
    assert_eq!(cached.class_count, fresh.class_count);
    assert_eq!(cached.counts, fresh.counts);
    assert_eq!(cached.nodes, fresh.nodes);
    assert_eq!(cached.complete_tables, fresh.complete_tables);

    let fresh_json = Envelope::new("lowindex", &fresh).to_json().unwrap();
    let cached_json = Envelope::new("lowindex", &cached).to_json().unwrap();
    assert_eq!(fresh_json, cached_json);
}

#[test]
fn subgroup_pres_simplifies_index_three_class() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_s3(dir.path());
    let cfg = RunConfig::default();
    let rep = cmd_subgroup_pres(&p, 3, 1, true, &cfg).unwrap();
    assert_eq!(rep.gens, vec!["s0"]);
    assert_eq!(rep.relator_count, 1);
    assert!(rep.presentation.contains("rel s0^2"));
}

#[test]
fn core_of_nonnormal_subgroup_is_whole_group_action() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_s3(dir.path());
    let cfg = RunConfig::default();
    let rep = cmd_core(&p, 3, 1, 1000, &cfg).unwrap();
    assert_eq!(rep.core_index, 6);
    assert!(!rep.simple);
    assert_eq!(rep.spectrum, vec![1, 2, 3]);
}

#[test]
fn quotients_of_z2_are_empty() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("z2.pres");
    fs::write(&p, "gens a\nrel a^2\n").unwrap();
    let cfg = RunConfig::default();
    let rep = cmd_quotients(&p, 60, &repo_path("data/atlas"), &cfg).unwrap();
    assert!(rep.targets.iter().all(|t| t.outcome != "quotient"));
    let a5 = rep.targets.iter().find(|t| t.target == "A5").unwrap();
    assert_eq!(a5.outcome, "none");
}

#[test]
fn screening_reports_match_known_survivors() {
    let r3 = cmd_screen(3).unwrap();
    assert!(r3.survivors.is_empty());
    let r4 = cmd_screen(4).unwrap();
    assert_eq!(r4.survivors, vec!["U3(3)", "L2(31)"]);
    assert_eq!(r4.sweyl_order, 192);
    assert_eq!(r4.sweyl_mod_center_order, Some(96));
}

#[test]
fn catalog_json_is_deterministic() {
    let a = Envelope::new("catalog", &cmd_catalog(20160).unwrap())
        .to_json()
        .unwrap();
    let b = Envelope::new("catalog", &cmd_catalog(20160).unwrap())
        .to_json()
        .unwrap();
    assert_eq!(a, b);
    assert!(a.contains("\"schema\": \"fpx-reports-v1\""));
}

/// The pipeline derivation of the determinant-one subgroups reproduces the
/// shipped presentation files exactly, so cached searches are shared.
#[test]
fn derived_presentations_match_shipped_files() {
    let cfg = RunConfig::default();
    for (ambient, derived) in [
        ("aut_f3", "saut_f3"),
        ("out_f3", "sout_f3"),
        ("aut_f4", "saut_f4"),
        ("out_f4", "sout_f4"),
    ] {
        let amb =
            load_presentation(&repo_path(&format!("data/presentations/{}.pres", ambient)))
                .unwrap();
        let got = derive_det1(&amb, derived, &cfg).unwrap();
        let want =
            load_presentation(&repo_path(&format!("data/presentations/{}.pres", derived)))
                .unwrap();
        assert_eq!(got, want, "derivation of {} drifted from the shipped file", derived);
    }
}

#[test]
fn binary_exit_codes_and_json_shape() {
    let fpx = env!("CARGO_BIN_EXE_fpx");
    let ok = Command::new(fpx)
        .args(["catalog", "--bound", "61", "--output", "json"])
        .output()
        .unwrap();
    assert!(ok.status.success());
    let v: serde_json::Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(v["schema"], "fpx-reports-v1");
    assert_eq!(v["command"], "catalog");
    assert_eq!(v["report"]["count"], 1);
    assert_eq!(v["report"]["records"][0]["name"], "A5");

    let missing = Command::new(fpx)
        .args(["parse", "/definitely/not/here.pres"])
        .output()
        .unwrap();
    assert_eq!(missing.status.code(), Some(1));

    let bad_flag = Command::new(fpx)
        .args(["catalog", "--output", "yaml"])
        .output()
        .unwrap();
    assert_eq!(bad_flag.status.code(), Some(1));
}
