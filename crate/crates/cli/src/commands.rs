//! One function per subcommand. Each returns a serializable report; the
//! binary wraps it in an [`crate::reports::Envelope`] and renders it.

use crate::cache::{content_key, Cache, LowIndexArtifact};
use crate::config::RunConfig;
use crate::reports::*;
use crate::CliError;
use fpx_core::abelianization::abelian_invariants;
use fpx_core::catalog::{
    self, run_screening, simple_groups_below, Family, ScreeningReport, SimpleGroupRecord,
};
use fpx_core::low_index::{
    low_index_subgroups, LiStats, LowIndexOpts, LowIndexResult, SubgroupClass,
};
use fpx_core::permgroup::{
    alternating_group, build_weyl, epimorphism_search, monomorphism_exists, parse_perm_file,
    psl2, psl3, render_cycles, verify_epimorphism, verify_monomorphism, PermGroup, SearchBudget,
    SearchOutcome, WeylVariant,
};
use fpx_core::rewriting::{core_table, presentation_from_cayley, reidemeister_schreier};
use fpx_core::tietze::{tietze_simplify, TietzeLimits};
use fpx_core::todd_coxeter::{enumerate, EnumOpts, Strategy};
use fpx_core::words::{normalize_relator, parse_presentation, print_word, Presentation, Word};
use std::fs;
use std::path::Path;

pub fn load_presentation(path: &Path) -> Result<Presentation, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {}", path.display(), e)))?;
    Ok(parse_presentation(&text)?)
}

fn enum_opts(cfg: &RunConfig) -> EnumOpts {
    EnumOpts {
        strategy: cfg.strategy,
        max_cosets: cfg.max_cosets,
        coincidence_shuffle: None,
    }
}

fn strategy_name(s: Strategy) -> &'static str {
    match s {
        Strategy::Hlt => "hlt",
        Strategy::Felsch => "felsch",
    }
}

pub fn cmd_parse(path: &Path) -> Result<ParseReport, CliError> {
    let p = load_presentation(path)?;
    Ok(ParseReport {
        name: p.name.clone(),
        gens: p.gens.clone(),
        relator_count: p.relators.len(),
        total_relator_length: p.total_relator_length(),
        canonical: p.print(),
    })
}

pub fn cmd_abel(path: &Path) -> Result<AbelReport, CliError> {
    let p = load_presentation(path)?;
    let inv = abelian_invariants(&p);
    Ok(AbelReport {
        gens: p.gens.clone(),
        relator_count: p.relators.len(),
        invariants: AbelSummary::from_invariants(&inv),
    })
}

pub fn cmd_tc(path: &Path, subgroup: &[String], cfg: &RunConfig) -> Result<TcReport, CliError> {
    let p = load_presentation(path)?;
    let words: Vec<Word> = subgroup
        .iter()
        .map(|s| p.parse_word(s))
        .collect::<Result<_, _>>()?;
    let e = enumerate(&p, &words, &enum_opts(cfg))?;
    Ok(TcReport {
        subgroup_words: subgroup.to_vec(),
        index: e.table.n() as u64,
        strategy: strategy_name(cfg.strategy).to_string(),
        cosets_defined: e.stats.cosets_defined,
        coincidences: e.stats.coincidences,
        max_active: e.stats.max_active,
    })
}

/// Low-index search with content-addressed caching. Only complete runs are
/// cached; budget-limited runs fail before reaching the store.
pub fn run_low_index(
    pres: &Presentation,
    max_index: usize,
    cfg: &RunConfig,
) -> Result<(LowIndexResult, bool), CliError> {
    let key = content_key(&[
        &pres.print(),
        "low_index",
        "v1",
        &max_index.to_string(),
    ]);
    let cache = match cfg.effective_cache_dir() {
        Some(dir) => Some(Cache::open(dir)?),
        None => None,
    };
    if let Some(cache) = &cache {
        if let Some(text) = cache.lookup(&key) {
            if let Ok(art) = serde_json::from_str::<LowIndexArtifact>(&text) {
                if art.version == 1 && art.max_index == max_index {
                    let subgroups = art.unpack()?;
                    let stats = LiStats {
                        nodes: art.nodes,
                        complete_tables: art.complete_tables,
                    };
                    return Ok((LowIndexResult { subgroups, stats }, true));
                }
            }
        }
    }
    // Per-search checkpoint file, so one --checkpoint flag serves a pipeline
    // of different searches without mismatching.
    let checkpoint = cfg.checkpoint_path.as_ref().map(|p| {
        let mut name = p.file_name().map(|s| s.to_os_string()).unwrap_or_default();
        name.push(format!(".{}", &key[..16]));
        p.with_file_name(name)
    });
    let opts = LowIndexOpts {
        max_index,
        threads: cfg.threads,
        max_nodes: cfg.node_budget,
        time_budget: cfg.time_budget,
        checkpoint: checkpoint.clone(),
        ..Default::default()
    };
    let res = low_index_subgroups(pres, &opts)?;
    if let Some(p) = &checkpoint {
        let _ = fs::remove_file(p);
    }
    if let Some(cache) = &cache {
        let art = LowIndexArtifact::pack(max_index, &res)?;
        cache.store(&key, &serde_json::to_string(&art)?)?;
    }
    Ok((res, false))
}

pub fn cmd_lowindex(path: &Path, cfg: &RunConfig) -> Result<LowIndexReport, CliError> {
    let p = load_presentation(path)?;
    let (res, from_cache) = run_low_index(&p, cfg.max_index, cfg)?;
    Ok(LowIndexReport {
        max_index: cfg.max_index,
        class_count: res.subgroups.len(),
        counts: res.count_by_index(),
        proper_indices: res.proper_indices(),
        nodes: res.stats.nodes,
        complete_tables: res.stats.complete_tables,
        from_cache,
    })
}

/// Classes of one index, in the deterministic search order. `class` is
/// 1-based.
fn pick_class(
    res: &LowIndexResult,
    index: usize,
    class: usize,
) -> Result<&SubgroupClass, CliError> {
    let of_index: Vec<&SubgroupClass> =
        res.subgroups.iter().filter(|c| c.index == index).collect();
    if of_index.is_empty() {
        return Err(CliError::Config(format!("no subgroup class of index {}", index)));
    }
    if class == 0 || class > of_index.len() {
        return Err(CliError::Config(format!(
            "class {} out of range; index {} has {} class(es)",
            class,
            index,
            of_index.len()
        )));
    }
    Ok(of_index[class - 1])
}

pub fn cmd_subgroup_pres(
    path: &Path,
    index: usize,
    class: usize,
    simplify: bool,
    cfg: &RunConfig,
) -> Result<SubgroupPresReport, CliError> {
    let p = load_presentation(path)?;
    let mut cfg2 = cfg.clone();
    cfg2.max_index = cfg.max_index.max(index);
    let (res, _) = run_low_index(&p, cfg2.max_index, &cfg2)?;
    let c = pick_class(&res, index, class)?;
    let data = reidemeister_schreier(&p, &c.table);
    let pres = if simplify {
        let mut sp = tietze_simplify(&data.presentation, &TietzeLimits::default());
        for r in &mut sp.relators {
            *r = normalize_relator(r);
        }
        sp.gens = (0..sp.gens.len()).map(|i| format!("s{}", i)).collect();
        sp
    } else {
        data.presentation.clone()
    };
    Ok(SubgroupPresReport {
        index,
        class,
        schreier_gen_count: data.schreier_gens.len(),
        gens: pres.gens.clone(),
        relator_count: pres.relators.len(),
        presentation: pres.print(),
        simplified: simplify,
    })
}

pub fn identify_class(
    table_group: &PermGroup,
    core_index: u64,
    bound: u64,
) -> Result<(bool, Vec<u64>, Vec<catalog::Identification>), CliError> {
    let simple = table_group.is_nonabelian_simple(bound)?;
    let spectrum = table_group.element_order_spectrum(bound)?;
    let ids = catalog::identify_by_order(core_index, simple, Some(&spectrum))?;
    Ok((simple, spectrum.into_iter().collect(), ids))
}

pub fn cmd_core(
    path: &Path,
    index: usize,
    class: usize,
    bound: u64,
    cfg: &RunConfig,
) -> Result<CoreReport, CliError> {
    let p = load_presentation(path)?;
    let mut cfg2 = cfg.clone();
    cfg2.max_index = cfg.max_index.max(index);
    let (res, _) = run_low_index(&p, cfg2.max_index, &cfg2)?;
    let c = pick_class(&res, index, class)?;
    let core = core_table(&c.table, bound)?;
    let g = c.table.to_perm_group();
    let (simple, spectrum, identification) = identify_class(&g, core.quotient_order, bound)?;
    Ok(CoreReport {
        index,
        class,
        core_index: core.quotient_order,
        simple,
        spectrum,
        identification,
    })
}

pub fn cmd_catalog(bound: u64) -> Result<CatalogReport, CliError> {
    let records = simple_groups_below(bound)?;
    Ok(CatalogReport {
        bound,
        count: records.len(),
        records,
    })
}

pub fn cmd_screen(rank: u32) -> Result<ScreeningReport, CliError> {
    Ok(run_screening(rank)?)
}

pub struct AtlasGroups {
    pub u3_3: PermGroup,
    pub l3_4: PermGroup,
}

pub fn load_atlas(dir: &Path) -> Result<AtlasGroups, CliError> {
    let read = |name: &str| -> Result<PermGroup, CliError> {
        let path = dir.join(name);
        let text = fs::read_to_string(&path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {}", path.display(), e)))?;
        let (degree, gens) = parse_perm_file(&text)?;
        Ok(PermGroup::new(degree, gens)?)
    };
    Ok(AtlasGroups {
        u3_3: read("u3_3.perms")?,
        l3_4: read("l3_4.perms")?,
    })
}

/// Present a finite permutation group on its own generators so the
/// backtracking searches can consume it. Generator names are g0, g1, ...
fn present_perm_group(g: &PermGroup, bound: u64) -> Result<(Presentation, Vec<u64>), CliError> {
    let names: Vec<String> = (0..g.gens().len()).map(|i| format!("g{}", i)).collect();
    let name_refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let pres = presentation_from_cayley(g, &name_refs, bound)?;
    let gen_orders: Vec<u64> = g.gens().iter().map(|p| p.order()).collect();
    Ok((pres, gen_orders))
}

fn embed_outcome(
    pres: &Presentation,
    source_order: u64,
    gen_orders: &[u64],
    target: &PermGroup,
    budget: &SearchBudget,
) -> Result<(String, u64), CliError> {
    match monomorphism_exists(pres, source_order, gen_orders, target, budget) {
        Ok(SearchOutcome::Found(w)) => {
            if !verify_monomorphism(pres, source_order, &w.images, target) {
                return Err(CliError::Config(
                    "search returned an embedding that fails verification".into(),
                ));
            }
            Ok(("embeds".to_string(), w.nodes))
        }
        Ok(SearchOutcome::NoneExhaustive { nodes }) => Ok(("absent".to_string(), nodes)),
        Err(fpx_core::permgroup::SearchError::Budget { nodes }) => {
            Ok(("not decided".to_string(), nodes))
        }
        Err(e) => Err(e.into()),
    }
}

/// The three rank-4 exclusion checks: the signed symmetry group modulo its
/// center into the two screening survivors, and the full signed symmetry
/// group into the degree-4 ambiguity partner of order 20160.
pub fn cmd_embed(rank: u32, atlas_dir: &Path, cfg: &RunConfig) -> Result<EmbedReport, CliError> {
    if rank != 4 {
        return Err(CliError::Config(format!(
            "embedding checks are defined for rank 4 (rank 3 has no screening survivors), got {}",
            rank
        )));
    }
    let atlas = load_atlas(atlas_dir)?;
    let budget = SearchBudget {
        max_nodes: cfg.node_budget.min(SearchBudget::default().max_nodes),
        ..Default::default()
    };
    let sw4 = build_weyl(4, WeylVariant::Det1)?;
    let sw4_mod = build_weyl(4, WeylVariant::Det1ModCenter)?;
    let (sw4_pres, sw4_orders) = present_perm_group(&sw4, 1 << 20)?;
    let (swm_pres, swm_orders) = present_perm_group(&sw4_mod, 1 << 20)?;
    let l3_4 = psl3(4);
    let mut checks = Vec::new();
    for (src_name, src_pres, src_order, src_gen_orders, tgt_name, tgt) in [
        ("SW4/center", &swm_pres, sw4_mod.order(), &swm_orders, "U3(3)", &atlas.u3_3),
        ("SW4/center", &swm_pres, sw4_mod.order(), &swm_orders, "L2(31)", &psl2(31)),
        ("SW4", &sw4_pres, sw4.order(), &sw4_orders, "L3(4)", &l3_4),
    ] {
        let (outcome, nodes) = embed_outcome(src_pres, src_order, src_gen_orders, tgt, &budget)?;
        checks.push(EmbedCheck {
            source: src_name.to_string(),
            source_order: src_order,
            target: tgt_name.to_string(),
            target_order: tgt.order(),
            outcome,
            nodes,
        });
    }
    Ok(EmbedReport { rank, checks })
}

/// Build a catalog target as an explicit permutation group when a
/// construction is available.
fn realize_target(rec: &SimpleGroupRecord, atlas_dir: &Path) -> Option<PermGroup> {
    match rec.family {
        Family::Alternating { degree } => Some(alternating_group(degree as usize)),
        Family::Psl { n: 2, q } => Some(psl2(q)),
        Family::Psl { n: 3, q } => Some(psl3(q)),
        Family::Psu3 { q: 3 } => load_atlas(atlas_dir).ok().map(|a| a.u3_3),
        _ => None,
    }
}

pub fn cmd_quotients(
    path: &Path,
    bound: u64,
    atlas_dir: &Path,
    cfg: &RunConfig,
) -> Result<QuotientsReport, CliError> {
    let p = load_presentation(path)?;
    let budget = SearchBudget {
        max_nodes: cfg.node_budget.min(SearchBudget::default().max_nodes),
        ..Default::default()
    };
    let mut targets = Vec::new();
    for rec in simple_groups_below(bound + 1)? {
        let Some(g) = realize_target(&rec, atlas_dir) else {
            targets.push(QuotientTargetReport {
                target: rec.name.clone(),
                order: rec.order,
                outcome: "not decided".to_string(),
                witness: None,
                verified: None,
                nodes: 0,
                note: Some("no permutation construction available for this target".to_string()),
            });
            continue;
        };
        match epimorphism_search(&p, &g, &budget) {
            Ok(SearchOutcome::Found(w)) => {
                let ok = verify_epimorphism(&p, &w.images, &g);
                targets.push(QuotientTargetReport {
                    target: rec.name.clone(),
                    order: rec.order,
                    outcome: "quotient".to_string(),
                    witness: Some(w.images.iter().map(render_cycles).collect()),
                    verified: Some(ok),
                    nodes: w.nodes,
                    note: None,
                });
            }
            Ok(SearchOutcome::NoneExhaustive { nodes }) => {
                targets.push(QuotientTargetReport {
                    target: rec.name.clone(),
                    order: rec.order,
                    outcome: "none".to_string(),
                    witness: None,
                    verified: None,
                    nodes,
                    note: None,
                });
            }
            Err(fpx_core::permgroup::SearchError::Budget { nodes }) => {
                targets.push(QuotientTargetReport {
                    target: rec.name.clone(),
                    order: rec.order,
                    outcome: "not decided".to_string(),
                    witness: None,
                    verified: None,
                    nodes,
                    note: Some("search budget exhausted".to_string()),
                });
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(QuotientsReport { bound, targets })
}

/// Cycle-notation word images rendered for witnesses.
pub fn render_witness(images: &[fpx_core::permgroup::Permutation]) -> Vec<String> {
    images.iter().map(render_cycles).collect()
}

pub fn print_words(words: &[Word], gens: &[String]) -> Vec<String> {
    words.iter().map(|w| print_word(w, gens)).collect()
}
