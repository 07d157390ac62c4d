//! Backtracking searches for homomorphisms from a finitely presented group
//! into a finite permutation group.
//!
//! Both searches fix the image of one generator to a conjugacy class
//! representative: conjugating a homomorphism moves any chosen generator
//! image inside its class and preserves injectivity and surjectivity, so
//! completing the restricted search still refutes existence.

use super::{PermError, PermGroup, Permutation};
use crate::words::{Presentation, Word};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("search budget exhausted after {nodes} nodes")]
    Budget { nodes: u64 },
    #[error(transparent)]
    Perm(#[from] PermError),
}

#[derive(Clone, Copy, Debug)]
pub struct SearchBudget {
    pub max_nodes: u64,
    pub element_bound: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_nodes: 5_000_000,
            element_bound: 1_000_000,
        }
    }
}

#[derive(Clone, Debug)]
pub struct HomWitness {
    pub images: Vec<Permutation>,
    pub image_order: u64,
    pub nodes: u64,
}

#[derive(Clone, Debug)]
pub enum SearchOutcome {
    Found(HomWitness),
    /// The whole restricted space was traversed; no witness exists.
    NoneExhaustive { nodes: u64 },
}

pub fn eval_word(word: &Word, images: &[Permutation], degree: usize) -> Permutation {
    let mut acc = Permutation::identity(degree);
    for &l in word {
        if l > 0 {
            acc = acc.compose(&images[(l - 1) as usize]);
        } else {
            acc = acc.compose(&images[(-l - 1) as usize].inverse());
        }
    }
    acc
}

/// All relators map to the identity.
pub fn is_homomorphism(pres: &Presentation, images: &[Permutation], degree: usize) -> bool {
    images.len() == pres.rank()
        && pres
            .relators
            .iter()
            .all(|r| eval_word(r, images, degree).is_identity())
}

pub fn verify_epimorphism(pres: &Presentation, images: &[Permutation], target: &PermGroup) -> bool {
    is_homomorphism(pres, images, target.degree())
        && PermGroup::new(target.degree(), images.to_vec())
            .map(|h| h.order() == target.order())
            .unwrap_or(false)
}

pub fn verify_monomorphism(
    pres: &Presentation,
    source_order: u64,
    images: &[Permutation],
    target: &PermGroup,
) -> bool {
    is_homomorphism(pres, images, target.degree())
        && images.iter().all(|p| target.contains(p))
        && PermGroup::new(target.degree(), images.to_vec())
            .map(|h| h.order() == source_order)
            .unwrap_or(false)
}

/// Does the group presented by `pres` (finite, of order `source_order`, with
/// the given per-generator element orders) embed into `target`?
pub fn monomorphism_exists(
    pres: &Presentation,
    source_order: u64,
    gen_orders: &[u64],
    target: &PermGroup,
    budget: &SearchBudget,
) -> Result<SearchOutcome, SearchError> {
    assert_eq!(gen_orders.len(), pres.rank());
    if source_order == 0 || !target.order().is_multiple_of(source_order) {
        return Ok(SearchOutcome::NoneExhaustive { nodes: 0 });
    }
    let mode = Mode::Mono {
        source_order,
        gen_orders: gen_orders.to_vec(),
    };
    run_search(pres, target, mode, budget)
}

/// Does the group presented by `pres` surject onto `target`?
pub fn epimorphism_search(
    pres: &Presentation,
    target: &PermGroup,
    budget: &SearchBudget,
) -> Result<SearchOutcome, SearchError> {
    run_search(pres, target, Mode::Epi, budget)
}

enum Mode {
    Mono {
        source_order: u64,
        gen_orders: Vec<u64>,
    },
    Epi,
}

struct Searcher<'a> {
    pres: &'a Presentation,
    target: &'a PermGroup,
    mode: &'a Mode,
    order: Vec<usize>,               // generator processing order
    checks_at: Vec<Vec<usize>>,      // relators completed at each position
    by_order: HashMap<u64, Vec<Permutation>>,
    epi_pool: Vec<Permutation>,      // all elements, deterministic order
    first_candidates: Vec<Permutation>,
    images: Vec<Option<Permutation>>,
    nodes: u64,
    max_nodes: u64,
}

fn run_search(
    pres: &Presentation,
    target: &PermGroup,
    mode: Mode,
    budget: &SearchBudget,
) -> Result<SearchOutcome, SearchError> {
    let k = pres.rank();
    if k == 0 {
        // only the trivial homomorphism exists
        let trivial_ok = match &mode {
            Mode::Mono { source_order, .. } => *source_order == 1,
            Mode::Epi => target.order() == 1,
        };
        return Ok(if trivial_ok {
            SearchOutcome::Found(HomWitness {
                images: Vec::new(),
                image_order: 1,
                nodes: 0,
            })
        } else {
            SearchOutcome::NoneExhaustive { nodes: 0 }
        });
    }

    let elements = target.elements(budget.element_bound)?;
    let mut by_order: HashMap<u64, Vec<Permutation>> = HashMap::new();
    for e in &elements {
        by_order.entry(e.order()).or_default().push(e.clone());
    }
    let reps = target.conjugacy_class_reps(budget.element_bound)?;

    let order = processing_order(pres);
    let mut pos_of = vec![0usize; k];
    for (j, &g) in order.iter().enumerate() {
        pos_of[g] = j;
    }
    let mut checks_at: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (ri, r) in pres.relators.iter().enumerate() {
        if let Some(last) = r.iter().map(|&l| pos_of[(l.unsigned_abs() - 1) as usize]).max() {
            checks_at[last].push(ri);
        }
    }

    let first_gen = order[0];
    let first_candidates: Vec<Permutation> = match &mode {
        Mode::Mono { gen_orders, .. } => reps
            .iter()
            .filter(|r| r.order() == gen_orders[first_gen])
            .cloned()
            .collect(),
        Mode::Epi => reps.clone(),
    };

    let mut epi_pool: Vec<Permutation> = Vec::new();
    if matches!(mode, Mode::Epi) {
        let mut orders: Vec<u64> = by_order.keys().copied().collect();
        orders.sort_unstable();
        for o in orders {
            epi_pool.extend(by_order[&o].iter().cloned());
        }
    }

    let mut s = Searcher {
        pres,
        target,
        mode: &mode,
        order,
        checks_at,
        by_order,
        epi_pool,
        first_candidates,
        images: vec![None; k],
        nodes: 0,
        max_nodes: budget.max_nodes,
    };
    match s.dfs(0)? {
        Some(w) => Ok(SearchOutcome::Found(w)),
        None => Ok(SearchOutcome::NoneExhaustive { nodes: s.nodes }),
    }
}

// Pick the generator occurring in the most relators first, then greedily
// the one completing the most relators, so pruning kicks in early.
fn processing_order(pres: &Presentation) -> Vec<usize> {
    let k = pres.rank();
    let support: Vec<Vec<usize>> = pres
        .relators
        .iter()
        .map(|r| {
            let mut s: Vec<usize> = r.iter().map(|&l| (l.unsigned_abs() - 1) as usize).collect();
            s.sort_unstable();
            s.dedup();
            s
        })
        .collect();
    let mut chosen: Vec<usize> = Vec::new();
    let mut used = vec![false; k];
    while chosen.len() < k {
        let mut best: Option<(usize, usize, usize)> = None; // (completed, occurrences, gen)
        for g in 0..k {
            if used[g] {
                continue;
            }
            let completed = support
                .iter()
                .filter(|s| s.contains(&g) && s.iter().all(|&x| x == g || used[x]))
                .count();
            let occurrences = support.iter().filter(|s| s.contains(&g)).count();
            let cand = (completed, occurrences, g);
            best = Some(match best {
                None => cand,
                Some(b) => {
                    if (cand.0, cand.1) > (b.0, b.1) || ((cand.0, cand.1) == (b.0, b.1) && cand.2 < b.2) {
                        cand
                    } else {
                        b
                    }
                }
            });
        }
        let (_, _, g) = best.unwrap();
        used[g] = true;
        chosen.push(g);
    }
    chosen
}

impl<'a> Searcher<'a> {
    fn pool(&self, j: usize) -> &[Permutation] {
        if j == 0 {
            return &self.first_candidates;
        }
        match self.mode {
            Mode::Mono { gen_orders, .. } => self
                .by_order
                .get(&gen_orders[self.order[j]])
                .map(|v| v.as_slice())
                .unwrap_or(&[]),
            Mode::Epi => &self.epi_pool,
        }
    }

    fn dfs(&mut self, j: usize) -> Result<Option<HomWitness>, SearchError> {
        if j == self.pres.rank() {
            return Ok(self.leaf());
        }
        let gen = self.order[j];
        let n_cands = self.pool(j).len();
        for idx in 0..n_cands {
            self.nodes += 1;
            if self.nodes > self.max_nodes {
                return Err(SearchError::Budget { nodes: self.nodes });
            }
            self.images[gen] = Some(self.pool(j)[idx].clone());
            if self.partial_ok(j) {
                if let Some(w) = self.dfs(j + 1)? {
                    return Ok(Some(w));
                }
            }
            self.images[gen] = None;
        }
        Ok(None)
    }

    fn partial_ok(&self, j: usize) -> bool {
        let degree = self.target.degree();
        if self.checks_at[j].is_empty() {
            return true;
        }
        let id = Permutation::identity(degree);
        let imgs: Vec<Permutation> = self
            .images
            .iter()
            .map(|o| o.clone().unwrap_or_else(|| id.clone()))
            .collect();
        for &ri in &self.checks_at[j] {
            if !eval_word(&self.pres.relators[ri], &imgs, degree).is_identity() {
                return false;
            }
        }
        true
    }

    fn leaf(&mut self) -> Option<HomWitness> {
        let images: Vec<Permutation> = self.images.iter().map(|o| o.clone().unwrap()).collect();
        let ok = match self.mode {
            Mode::Mono { source_order, .. } => {
                verify_monomorphism(self.pres, *source_order, &images, self.target)
            }
            Mode::Epi => verify_epimorphism(self.pres, &images, self.target),
        };
        if ok {
            let image_order = PermGroup::new(self.target.degree(), images.clone())
                .unwrap()
                .order();
            Some(HomWitness {
                images,
                image_order,
                nodes: self.nodes,
            })
        } else {
            None
        }
    }
}
