//! Subgroup presentations and quotient tables from coset tables.
//!
//! Reidemeister-Schreier rewriting works over a breadth-first Schreier
//! transversal, so the same tree is used for the generator words and the
//! rewritten relators. The exponent-matrix mode streams rewritten relators
//! straight into a sparse integer matrix without materializing the words.

use crate::abelianization::IntMatrix;
use crate::permgroup::{PermError, PermGroup, Permutation};
use crate::todd_coxeter::{CosetTable, TcError};
use crate::words::{inv_word, Letter, Presentation, Word};
use num_bigint::BigInt;
use std::collections::HashMap;

#[derive(Clone, Debug)]
pub struct SchreierData {
    /// Subgroup generators as words in the ambient generators.
    pub schreier_gens: Vec<Word>,
    /// Subgroup presentation on generators named s0, s1, ...
    pub presentation: Presentation,
}

struct Tree {
    // coset -> word in ambient generators leading 1 -> coset
    rep: Vec<Word>,
    // (coset, gen) -> schreier generator index, for non-tree edges
    sgen: Vec<u32>,
    n_sgens: usize,
    ngens: usize,
}

const NO_GEN: u32 = u32::MAX;

fn schreier_tree(table: &CosetTable) -> Tree {
    let n = table.n();
    let r = table.ngens();
    let mut rep: Vec<Word> = vec![Vec::new(); n + 1];
    let mut seen = vec![false; n + 1];
    let mut tree_edge = vec![false; (n + 1) * r.max(1)];
    seen[1] = true;
    let mut queue = vec![1u32];
    let mut qi = 0;
    while qi < queue.len() {
        let c = queue[qi];
        qi += 1;
        for col in 0..2 * r {
            let t = table.lookup_col(c, col);
            if !seen[t as usize] {
                seen[t as usize] = true;
                let l: Letter = if col % 2 == 0 {
                    (col / 2 + 1) as Letter
                } else {
                    -((col / 2 + 1) as Letter)
                };
                let mut w = rep[c as usize].clone();
                w.push(l);
                rep[t as usize] = w;
                // record the edge in its positive direction
                if l > 0 {
                    tree_edge[c as usize * r + (l as usize - 1)] = true;
                } else {
                    tree_edge[t as usize * r + ((-l) as usize - 1)] = true;
                }
                queue.push(t);
            }
        }
    }
    let mut sgen = vec![NO_GEN; (n + 1) * r.max(1)];
    let mut k = 0u32;
    for c in 1..=n {
        for g in 0..r {
            if !tree_edge[c * r + g] {
                sgen[c * r + g] = k;
                k += 1;
            }
        }
    }
    Tree {
        rep,
        sgen,
        n_sgens: k as usize,
        ngens: r,
    }
}

impl Tree {
    fn schreier_words(&self, table: &CosetTable) -> Vec<Word> {
        let mut out = Vec::with_capacity(self.n_sgens);
        for c in 1..=table.n() {
            for g in 0..self.ngens {
                if self.sgen[c * self.ngens + g] != NO_GEN {
                    let t = table.lookup(c as u32, (g + 1) as Letter);
                    let mut w = self.rep[c].clone();
                    w.push((g + 1) as Letter);
                    w.extend(inv_word(&self.rep[t as usize]));
                    out.push(crate::words::free_reduce(&w));
                }
            }
        }
        out
    }

    // Rewrite the relator traced from `start`, emitting signed schreier
    // generator indices (1-based letters).
    fn rewrite<F: FnMut(Letter)>(&self, table: &CosetTable, start: u32, r: &Word, mut emit: F) {
        let mut c = start;
        for &l in r {
            if l > 0 {
                let g = (l - 1) as usize;
                let s = self.sgen[c as usize * self.ngens + g];
                if s != NO_GEN {
                    emit((s + 1) as Letter);
                }
                c = table.lookup(c, l);
            } else {
                let next = table.lookup(c, l);
                let g = ((-l) - 1) as usize;
                let s = self.sgen[next as usize * self.ngens + g];
                if s != NO_GEN {
                    emit(-((s + 1) as Letter));
                }
                c = next;
            }
        }
        debug_assert_eq!(c, start);
    }
}

/// Present the subgroup whose cosets the table enumerates.
pub fn reidemeister_schreier(pres: &Presentation, table: &CosetTable) -> SchreierData {
    assert_eq!(pres.rank(), table.ngens());
    let tree = schreier_tree(table);
    let schreier_gens = tree.schreier_words(table);
    let names: Vec<String> = (0..tree.n_sgens).map(|k| format!("s{}", k)).collect();
    let name_refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let mut relators: Vec<Word> = Vec::new();
    for c in 1..=table.n() as u32 {
        for r in &pres.relators {
            let mut w: Word = Vec::new();
            tree.rewrite(table, c, r, |l| w.push(l));
            let w = crate::words::free_reduce(&w);
            if !w.is_empty() {
                relators.push(w);
            }
        }
    }
    let presentation = Presentation::new(None, &name_refs, relators);
    SchreierData {
        schreier_gens,
        presentation,
    }
}

/// Exponent matrix of the rewritten relators over the schreier generators,
/// streamed row by row. Rows appear for every (coset, relator) pair with a
/// nonzero rewrite. Also returns the schreier generator words.
pub fn rs_exponent_matrix(pres: &Presentation, table: &CosetTable) -> (IntMatrix, Vec<Word>) {
    assert_eq!(pres.rank(), table.ngens());
    let tree = schreier_tree(table);
    let mut m = IntMatrix::new(tree.n_sgens);
    let mut row: HashMap<usize, i64> = HashMap::new();
    for c in 1..=table.n() as u32 {
        for r in &pres.relators {
            row.clear();
            tree.rewrite(table, c, r, |l| {
                let idx = (l.unsigned_abs() - 1) as usize;
                *row.entry(idx).or_insert(0) += if l > 0 { 1 } else { -1 };
            });
            let mut entries: Vec<(usize, BigInt)> = row
                .iter()
                .filter(|(_, &v)| v != 0)
                .map(|(&k, &v)| (k, BigInt::from(v)))
                .collect();
            if entries.is_empty() {
                continue;
            }
            entries.sort_by_key(|e| e.0);
            m.push_row(entries);
        }
    }
    (m, tree.schreier_words(table))
}

#[derive(Clone, Debug)]
pub struct CoreData {
    /// Coset table of the kernel of the coset action.
    pub table: CosetTable,
    pub quotient_order: u64,
}

/// Table of the normal core: cosets of the kernel of the action on the
/// input table, i.e. the Cayley table of the image permutation group.
pub fn core_table(table: &CosetTable, bound: u64) -> Result<CoreData, PermError> {
    let perms = table.to_perms();
    let r = table.ngens();
    let degree = table.n();
    let group = PermGroup::new(degree, perms.clone())?;
    let order = group.order();
    if order > bound {
        return Err(PermError::OrderBound { order, bound });
    }
    let n = order as usize;
    let width = 2 * r;
    let inv: Vec<Permutation> = perms.iter().map(Permutation::inverse).collect();
    let mut index: HashMap<Permutation, u32> = HashMap::new();
    let id = Permutation::identity(degree);
    index.insert(id.clone(), 1);
    let mut elems: Vec<Permutation> = vec![id.clone(), id];
    let mut tab = vec![0u32; (n + 1) * width.max(1)];
    let mut qi = 1;
    while qi < elems.len() {
        let e = elems[qi].clone();
        let ei = qi as u32;
        qi += 1;
        for g in 0..r {
            for (dir, img) in [(0usize, &perms[g]), (1usize, &inv[g])] {
                let f = e.compose(img);
                let fi = match index.get(&f) {
                    Some(&i) => i,
                    None => {
                        let i = elems.len() as u32;
                        index.insert(f.clone(), i);
                        elems.push(f);
                        i
                    }
                };
                tab[ei as usize * width + 2 * g + dir] = fi;
            }
        }
    }
    debug_assert_eq!(elems.len(), n + 1);
    let mut t = CosetTable::from_parts(r, n, tab).expect("closure table is complete");
    t.standardize();
    Ok(CoreData {
        table: t,
        quotient_order: order,
    })
}

#[derive(Debug, thiserror::Error)]
pub enum CayleyError {
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error("cayley presentation failed verification: {0}")]
    Verify(#[from] TcError),
}

/// Present a finite permutation group from a spanning tree of its Cayley
/// graph: one relator per non-tree edge. The result is verified by a coset
/// enumeration before being returned.
pub fn presentation_from_cayley(
    g: &PermGroup,
    names: &[&str],
    bound: u64,
) -> Result<Presentation, CayleyError> {
    assert_eq!(names.len(), g.gens().len());
    let order = g.order();
    if order > bound {
        return Err(CayleyError::Perm(PermError::OrderBound { order, bound }));
    }
    // Cayley table over the generators, cosets of the trivial subgroup
    let degree = g.degree();
    let r = g.gens().len();
    let n = order as usize;
    let width = 2 * r;
    let inv: Vec<Permutation> = g.gens().iter().map(Permutation::inverse).collect();
    let id = Permutation::identity(degree);
    let mut index: HashMap<Permutation, u32> = HashMap::new();
    index.insert(id.clone(), 1);
    let mut elems: Vec<Permutation> = vec![id.clone(), id];
    let mut tab = vec![0u32; (n + 1) * width.max(1)];
    let mut qi = 1;
    while qi < elems.len() {
        let e = elems[qi].clone();
        let ei = qi as u32;
        qi += 1;
        for gi in 0..r {
            for (dir, img) in [(0usize, &g.gens()[gi]), (1usize, &inv[gi])] {
                let f = e.compose(img);
                let fi = match index.get(&f) {
                    Some(&i) => i,
                    None => {
                        let i = elems.len() as u32;
                        index.insert(f.clone(), i);
                        elems.push(f);
                        i
                    }
                };
                tab[ei as usize * width + 2 * gi + dir] = fi;
            }
        }
    }
    let mut cayley = CosetTable::from_parts(r, n, tab).expect("cayley table is complete");
    cayley.standardize();

    let tree = schreier_tree(&cayley);
    let mut relators: Vec<Word> = Vec::new();
    for c in 1..=n {
        for gen in 0..r {
            if tree.sgen[c * r + gen] != NO_GEN {
                let t = cayley.lookup(c as u32, (gen + 1) as Letter);
                let mut w = tree.rep[c].clone();
                w.push((gen + 1) as Letter);
                w.extend(inv_word(&tree.rep[t as usize]));
                let w = crate::words::free_reduce(&w);
                if !w.is_empty() {
                    relators.push(w);
                }
            }
        }
    }
    let pres = Presentation::new(None, names, relators);
    // the presented group must have exactly |G| elements
    let e = crate::todd_coxeter::enumerate(
        &pres,
        &[],
        &crate::todd_coxeter::EnumOpts {
            max_cosets: 4 * n + 64,
            ..Default::default()
        },
    )?;
    if e.table.n() as u64 != order {
        return Err(CayleyError::Verify(TcError::Internal(format!(
            "presented group has order {}, expected {}",
            e.table.n(),
            order
        ))));
    }
    Ok(pres)
}
