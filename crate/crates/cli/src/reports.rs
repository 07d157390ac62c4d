//! Report types emitted by the CLI. Every command wraps its report in an
//! [`Envelope`] carrying the schema version; JSON output is deterministic
//! (wall times are kept out of the serialized form).

use fpx_core::abelianization::AbelianInvariants;
use fpx_core::catalog::{Identification, ScreeningReport, SimpleGroupRecord};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use std::time::Duration;

pub const SCHEMA: &str = "fpx-reports-v1";

#[derive(Serialize)]
pub struct Envelope<T: Serialize> {
    pub schema: &'static str,
    pub command: String,
    pub report: T,
}

impl<T: Serialize> Envelope<T> {
    pub fn new(command: &str, report: T) -> Self {
        Envelope {
            schema: SCHEMA,
            command: command.to_string(),
            report,
        }
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }
}

#[derive(Serialize)]
pub struct ParseReport {
    pub name: Option<String>,
    pub gens: Vec<String>,
    pub relator_count: usize,
    pub total_relator_length: usize,
    pub canonical: String,
}

impl fmt::Display for ParseReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(name) = &self.name {
            writeln!(f, "name: {}", name)?;
        }
        writeln!(
            f,
            "generators: {} ({})",
            self.gens.len(),
            self.gens.join(", ")
        )?;
        writeln!(
            f,
            "relators: {} (total length {})",
            self.relator_count, self.total_relator_length
        )?;
        write!(f, "{}", self.canonical)
    }
}

/// Invariant-factor description of an abelianized group.
#[derive(Serialize)]
pub struct AbelSummary {
    /// Torsion invariant factors as decimal strings, each dividing the next.
    pub torsion: Vec<String>,
    pub free_rank: usize,
    pub group: String,
}

impl AbelSummary {
    pub fn from_invariants(inv: &AbelianInvariants) -> AbelSummary {
        let torsion: Vec<String> = inv.torsion.iter().map(|d| d.to_string()).collect();
        let mut parts: Vec<String> = Vec::new();
        if inv.free_rank == 1 {
            parts.push("Z".to_string());
        } else if inv.free_rank > 1 {
            parts.push(format!("Z^{}", inv.free_rank));
        }
        for d in &torsion {
            parts.push(format!("Z/{}", d));
        }
        let group = if parts.is_empty() {
            "trivial".to_string()
        } else {
            parts.join(" x ")
        };
        AbelSummary {
            torsion,
            free_rank: inv.free_rank,
            group,
        }
    }
}

#[derive(Serialize)]
pub struct AbelReport {
    pub gens: Vec<String>,
    pub relator_count: usize,
    pub invariants: AbelSummary,
}

impl fmt::Display for AbelReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "presentation: {} generators, {} relators",
            self.gens.len(),
            self.relator_count
        )?;
        writeln!(f, "abelianization: {}", self.invariants.group)?;
        write!(
            f,
            "free rank {}, torsion [{}]",
            self.invariants.free_rank,
            self.invariants.torsion.join(", ")
        )
    }
}

#[derive(Serialize)]
pub struct TcReport {
    pub subgroup_words: Vec<String>,
    /// Number of cosets: the subgroup index, or the group order when the
    /// subgroup is trivial.
    pub index: u64,
    pub strategy: String,
    pub cosets_defined: u64,
    pub coincidences: u64,
    pub max_active: usize,
}

impl fmt::Display for TcReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.subgroup_words.is_empty() {
            writeln!(f, "group order: {}", self.index)?;
        } else {
            writeln!(
                f,
                "subgroup <{}> has index {}",
                self.subgroup_words.join(", "),
                self.index
            )?;
        }
        write!(
            f,
            "strategy {}, {} cosets defined, {} coincidences, {} max active",
            self.strategy, self.cosets_defined, self.coincidences, self.max_active
        )
    }
}

#[derive(Serialize)]
pub struct LowIndexReport {
    pub max_index: usize,
    pub class_count: usize,
    /// index -> number of conjugacy classes of subgroups of that index.
    pub counts: BTreeMap<usize, usize>,
    pub proper_indices: Vec<usize>,
    pub nodes: u64,
    pub complete_tables: u64,
    /// Provenance only; kept out of the JSON so reruns stay byte-identical.
    #[serde(skip)]
    pub from_cache: bool,
}

impl fmt::Display for LowIndexReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "subgroup classes up to index {}: {}",
            self.max_index, self.class_count
        )?;
        for (index, count) in &self.counts {
            writeln!(f, "  index {:>3}: {} class(es)", index, count)?;
        }
        let proper = if self.proper_indices.is_empty() {
            "none".to_string()
        } else {
            self.proper_indices
                .iter()
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        };
        writeln!(f, "proper indices: {}", proper)?;
        write!(
            f,
            "{} search nodes, {} complete tables{}",
            self.nodes,
            self.complete_tables,
            if self.from_cache { " (cached)" } else { "" }
        )
    }
}

#[derive(Serialize)]
pub struct SubgroupPresReport {
    pub index: usize,
    /// 1-based position among the classes of this index.
    pub class: usize,
    pub schreier_gen_count: usize,
    pub gens: Vec<String>,
    pub relator_count: usize,
    pub presentation: String,
    pub simplified: bool,
}

impl fmt::Display for SubgroupPresReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "index {} class {}: {} Schreier generators, presented on {} generators with {} relators{}",
            self.index,
            self.class,
            self.schreier_gen_count,
            self.gens.len(),
            self.relator_count,
            if self.simplified { " (simplified)" } else { "" }
        )?;
        write!(f, "{}", self.presentation)
    }
}

#[derive(Serialize)]
pub struct CoreReport {
    pub index: usize,
    pub class: usize,
    /// Order of the quotient by the core, i.e. the index of the core.
    pub core_index: u64,
    pub simple: bool,
    pub spectrum: Vec<u64>,
    pub identification: Vec<Identification>,
}

impl fmt::Display for CoreReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "index {} class {}: core has index {} ({})",
            self.index,
            self.class,
            self.core_index,
            if self.simple {
                "simple quotient"
            } else {
                "non-simple quotient"
            }
        )?;
        writeln!(
            f,
            "element orders in quotient: {}",
            self.spectrum
                .iter()
                .map(|o| o.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        )?;
        write!(f, "identification: {}", fmt_idents(&self.identification))
    }
}

pub fn fmt_idents(ids: &[Identification]) -> String {
    if ids.is_empty() {
        return "no catalog match".to_string();
    }
    ids.iter()
        .map(|i| format!("{} ({:?})", i.name, i.confidence))
        .collect::<Vec<_>>()
        .join(", ")
}

#[derive(Serialize)]
pub struct CatalogReport {
    pub bound: u64,
    pub count: usize,
    pub records: Vec<SimpleGroupRecord>,
}

impl fmt::Display for CatalogReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} nonabelian simple groups of order < {}",
            self.count, self.bound
        )?;
        for r in &self.records {
            let aliases = if r.aliases.is_empty() {
                String::new()
            } else {
                format!("  (= {})", r.aliases.join(" = "))
            };
            writeln!(f, "  {:<10} {:>10}{}", r.name, r.order, aliases)?;
        }
        Ok(())
    }
}

#[derive(Serialize)]
pub struct EmbedCheck {
    pub source: String,
    pub source_order: u64,
    pub target: String,
    pub target_order: u64,
    /// "absent" | "embeds" | "not decided".
    pub outcome: String,
    pub nodes: u64,
}

#[derive(Serialize)]
pub struct EmbedReport {
    pub rank: u32,
    pub checks: Vec<EmbedCheck>,
}

impl fmt::Display for EmbedReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "embedding checks for rank {}", self.rank)?;
        for c in &self.checks {
            writeln!(
                f,
                "  {} (order {}) into {} (order {}): {} [{} nodes]",
                c.source, c.source_order, c.target, c.target_order, c.outcome, c.nodes
            )?;
        }
        Ok(())
    }
}

#[derive(Serialize)]
pub struct QuotientTargetReport {
    pub target: String,
    pub order: u64,
    /// "quotient" | "none" | "not decided".
    pub outcome: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verified: Option<bool>,
    pub nodes: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Serialize)]
pub struct QuotientsReport {
    pub bound: u64,
    pub targets: Vec<QuotientTargetReport>,
}

impl fmt::Display for QuotientsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "nonabelian simple quotients up to order {}",
            self.bound
        )?;
        for t in &self.targets {
            write!(f, "  {:<10} {:>8}: {}", t.target, t.order, t.outcome)?;
            if t.verified == Some(true) {
                write!(f, " (witness verified)")?;
            }
            if let Some(n) = &t.note {
                write!(f, " [{}]", n)?;
            }
            writeln!(f, " [{} nodes]", t.nodes)?;
        }
        Ok(())
    }
}

#[derive(Serialize)]
pub struct ClassRecord {
    pub index: usize,
    pub class: usize,
    pub core_index: u64,
    pub simple: bool,
    pub identification: Vec<Identification>,
    /// Order of the normal elementary abelian subgroup exhibited in a
    /// non-simple core quotient, when one was found.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normal_subgroup_order: Option<u64>,
    /// Order of the image of the conjugation action on that subgroup.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conjugation_quotient_order: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub core_abelianization: Option<CoreAbelReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Serialize)]
pub struct CoreAbelReport {
    pub invariants: AbelSummary,
    pub matrix_rows: usize,
    pub matrix_cols: usize,
    /// Primes used for the independent modular rank check.
    pub check_primes: Vec<u64>,
    pub check_ranks: Vec<usize>,
}

#[derive(Serialize)]
pub struct GroupRecord {
    /// "SAut" or "SOut".
    pub group: String,
    pub rank: u32,
    pub derived_from: String,
    pub max_index: usize,
    pub indices_found: Vec<usize>,
    pub class_counts: BTreeMap<usize, usize>,
    pub nodes: u64,
    pub classes: Vec<ClassRecord>,
    #[serde(skip)]
    pub wall_time: Duration,
}

#[derive(Serialize)]
pub struct ComparisonResult {
    pub claim: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Serialize)]
pub struct ReproReport {
    pub rank: u32,
    pub groups: Vec<GroupRecord>,
    pub screening: ScreeningReport,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub embedding_checks: Vec<EmbedCheck>,
    pub comparisons: Vec<ComparisonResult>,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl ReproReport {
    pub fn all_pass(&self) -> bool {
        self.comparisons.iter().all(|c| c.pass)
    }
}

impl fmt::Display for ReproReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "reproduction report, rank {}", self.rank)?;
        for g in &self.groups {
            writeln!(
                f,
                "\n{} F{} (from {}), low index to {} in {:.1}s, {} nodes",
                g.group,
                g.rank,
                g.derived_from,
                g.max_index,
                g.wall_time.as_secs_f64(),
                g.nodes
            )?;
            let idx = g
                .indices_found
                .iter()
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
                .join(", ");
            writeln!(f, "  proper subgroup indices: {}", idx)?;
            for c in &g.classes {
                write!(
                    f,
                    "  index {:>2} class {}: core index {} ({}), {}",
                    c.index,
                    c.class,
                    c.core_index,
                    if c.simple { "simple" } else { "non-simple" },
                    fmt_idents(&c.identification)
                )?;
                if let (Some(n), Some(q)) =
                    (c.normal_subgroup_order, c.conjugation_quotient_order)
                {
                    write!(
                        f,
                        "; elementary abelian normal subgroup of order {}, conjugation image of order {}",
                        n, q
                    )?;
                }
                if let Some(ab) = &c.core_abelianization {
                    write!(
                        f,
                        "; core abelianization {} (mod-p ranks {:?} at primes {:?})",
                        ab.invariants.group, ab.check_ranks, ab.check_primes
                    )?;
                }
                if let Some(note) = &c.note {
                    write!(f, "; {}", note)?;
                }
                writeln!(f)?;
            }
        }
        writeln!(f)?;
        write!(f, "{}", self.screening)?;
        if !self.embedding_checks.is_empty() {
            writeln!(f, "\nembedding checks:")?;
            for c in &self.embedding_checks {
                writeln!(
                    f,
                    "  {} into {}: {} [{} nodes]",
                    c.source, c.target, c.outcome, c.nodes
                )?;
            }
        }
        writeln!(f, "\ncomparisons against reference values:")?;
        for c in &self.comparisons {
            writeln!(
                f,
                "  [{}] {} ({})",
                if c.pass { "pass" } else { "FAIL" },
                c.claim,
                c.detail
            )?;
        }
        write!(
            f,
            "result: {} of {} comparisons pass, total {:.1}s",
            self.comparisons.iter().filter(|c| c.pass).count(),
            self.comparisons.len(),
            self.wall_time.as_secs_f64()
        )
    }
}
