//! Permutation groups with stabilizer chains.
//!
//! Orders and membership come from a deterministic Schreier-Sims chain.
//! Element-level operations (conjugacy classes, order spectra, simplicity)
//! enumerate the group and are guarded by an explicit order bound.

mod constructions;
mod search;
mod weyl;

pub use constructions::{
    alternating_group, cyclic_group, parse_cycles, parse_perm_file, psl2, psl3, render_cycles,
    symmetric_group,
};
pub use search::{
    epimorphism_search, eval_word, is_homomorphism, monomorphism_exists, verify_epimorphism,
    verify_monomorphism, HomWitness, SearchBudget, SearchError, SearchOutcome,
};
pub use weyl::{build_weyl, WeylVariant};

use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PermError {
    #[error("images are not a permutation of 0..{0}")]
    NotBijective(usize),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("group order {order} exceeds element enumeration bound {bound}")]
    OrderBound { order: u64, bound: u64 },
    #[error("bad cycle notation: {0}")]
    BadCycles(String),
    #[error("central quotient variant needs even rank")]
    OddRank,
}

/// A permutation of 0..degree, stored by images.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Permutation {
    img: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            img: (0..degree as u32).collect(),
        }
    }

    pub fn from_images(img: Vec<u32>) -> Result<Self, PermError> {
        let n = img.len();
        let mut seen = vec![false; n];
        for &x in &img {
            if (x as usize) >= n || seen[x as usize] {
                return Err(PermError::NotBijective(n));
            }
            seen[x as usize] = true;
        }
        Ok(Permutation { img })
    }

    pub fn degree(&self) -> usize {
        self.img.len()
    }

    #[inline]
    pub fn apply(&self, point: u32) -> u32 {
        self.img[point as usize]
    }

    pub fn images(&self) -> &[u32] {
        &self.img
    }

    pub fn is_identity(&self) -> bool {
        self.img.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// `self` then `other`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            img: self.img.iter().map(|&x| other.img[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut img = vec![0u32; self.img.len()];
        for (i, &x) in self.img.iter().enumerate() {
            img[x as usize] = i as u32;
        }
        Permutation { img }
    }

    /// g^-1 * self * g.
    pub fn conjugate_by(&self, g: &Permutation) -> Permutation {
        g.inverse().compose(self).compose(g)
    }

    pub fn order(&self) -> u64 {
        let mut order = 1u64;
        for c in self.cycle_lengths() {
            order = num_integer::lcm(order, c as u64);
        }
        order
    }

    pub fn cycle_lengths(&self) -> Vec<usize> {
        let n = self.img.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut p = s;
            while !seen[p] {
                seen[p] = true;
                len += 1;
                p = self.img[p] as usize;
            }
            out.push(len);
        }
        out
    }

    /// Cycles of length > 1, each rotated to start at its least point.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let n = self.img.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] || self.img[s] as usize == s {
                seen[s] = true;
                continue;
            }
            let mut cyc = Vec::new();
            let mut p = s;
            while !seen[p] {
                seen[p] = true;
                cyc.push(p as u32);
                p = self.img[p] as usize;
            }
            out.push(cyc);
        }
        out
    }

    pub fn is_even(&self) -> bool {
        self.cycle_lengths().iter().map(|c| c - 1).sum::<usize>() % 2 == 0
    }
}

fn write_cycles(p: &Permutation, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let cycles = p.cycles();
    if cycles.is_empty() {
        return write!(f, "()");
    }
    for cyc in cycles {
        write!(f, "(")?;
        for (i, pt) in cyc.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", pt)?;
        }
        write!(f, ")")?;
    }
    Ok(())
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_cycles(self, f)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_cycles(self, f)
    }
}

/// A permutation group given by generators, with its stabilizer chain.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    gens: Vec<Permutation>,
    chain: Vec<ChainLayer>,
}

#[derive(Clone, Debug)]
struct ChainLayer {
    base: u32,
    gens: Vec<Permutation>,
    // orbit point -> transversal element mapping base to that point
    transversal: HashMap<u32, Permutation>,
    orbit: Vec<u32>,
}

impl PermGroup {
    pub fn new(degree: usize, gens: Vec<Permutation>) -> Result<Self, PermError> {
        for g in &gens {
            if g.degree() != degree {
                return Err(PermError::DegreeMismatch(g.degree(), degree));
            }
        }
        let gens: Vec<Permutation> = gens.into_iter().filter(|g| !g.is_identity()).collect();
        let chain = build_chain(degree, &gens);
        Ok(PermGroup {
            degree,
            gens,
            chain,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn gens(&self) -> &[Permutation] {
        &self.gens
    }

    pub fn order(&self) -> u64 {
        self.chain
            .iter()
            .map(|l| l.orbit.len() as u64)
            .try_fold(1u64, u64::checked_mul)
            .expect("group order overflows u64")
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        g.degree() == self.degree && sift(&self.chain, g).is_none()
    }

    pub fn is_trivial(&self) -> bool {
        self.chain.is_empty()
    }

    pub fn is_abelian(&self) -> bool {
        for (i, a) in self.gens.iter().enumerate() {
            for b in &self.gens[i + 1..] {
                if a.compose(b) != b.compose(a) {
                    return false;
                }
            }
        }
        true
    }

    /// All elements, in a deterministic BFS order starting at the identity.
    pub fn elements(&self, bound: u64) -> Result<Vec<Permutation>, PermError> {
        let order = self.order();
        if order > bound {
            return Err(PermError::OrderBound { order, bound });
        }
        let mut seen: HashMap<Permutation, ()> = HashMap::new();
        let id = Permutation::identity(self.degree);
        let mut queue = VecDeque::from([id.clone()]);
        seen.insert(id, ());
        let mut out = Vec::with_capacity(order as usize);
        while let Some(e) = queue.pop_front() {
            out.push(e.clone());
            for g in &self.gens {
                let f = e.compose(g);
                if !seen.contains_key(&f) {
                    seen.insert(f.clone(), ());
                    queue.push_back(f);
                }
            }
        }
        debug_assert_eq!(out.len() as u64, order);
        Ok(out)
    }

    /// Distinct element orders.
    pub fn element_order_spectrum(&self, bound: u64) -> Result<BTreeSet<u64>, PermError> {
        Ok(self.elements(bound)?.iter().map(Permutation::order).collect())
    }

    /// One representative per conjugacy class, identity first, then by
    /// (element order, position in the element enumeration).
    pub fn conjugacy_class_reps(&self, bound: u64) -> Result<Vec<Permutation>, PermError> {
        let elems = self.elements(bound)?;
        let index: HashMap<&Permutation, usize> =
            elems.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let mut cls: Vec<u32> = (0..elems.len() as u32).collect();
        fn find(cls: &mut [u32], i: u32) -> u32 {
            let mut r = i;
            while cls[r as usize] != r {
                r = cls[r as usize];
            }
            let mut c = i;
            while cls[c as usize] != r {
                let n = cls[c as usize];
                cls[c as usize] = r;
                c = n;
            }
            r
        }
        for (i, e) in elems.iter().enumerate() {
            for g in &self.gens {
                let f = e.conjugate_by(g);
                let j = index[&f];
                let (a, b) = (find(&mut cls, i as u32), find(&mut cls, j as u32));
                if a != b {
                    let (lo, hi) = (a.min(b), a.max(b));
                    cls[hi as usize] = lo;
                }
            }
        }
        let mut reps: Vec<usize> = Vec::new();
        for i in 0..elems.len() {
            if find(&mut cls, i as u32) as usize == i {
                reps.push(i);
            }
        }
        let mut reps: Vec<Permutation> = reps.into_iter().map(|i| elems[i].clone()).collect();
        reps.sort_by_key(|e| (e.order(), e.images().to_vec()));
        Ok(reps)
    }

    /// Smallest normal subgroup containing `seeds`.
    pub fn normal_closure(&self, seeds: &[Permutation]) -> PermGroup {
        let mut closure_gens: Vec<Permutation> =
            seeds.iter().filter(|s| !s.is_identity()).cloned().collect();
        let mut sub = PermGroup::new(self.degree, closure_gens.clone()).unwrap();
        let mut i = 0;
        while i < closure_gens.len() {
            let c = closure_gens[i].clone();
            for g in &self.gens {
                let t = c.conjugate_by(g);
                if !sub.contains(&t) {
                    closure_gens.push(t);
                    sub = PermGroup::new(self.degree, closure_gens.clone()).unwrap();
                }
            }
            i += 1;
        }
        sub
    }

    /// Nonabelian and the normal closure of every nontrivial class
    /// representative is the whole group.
    pub fn is_nonabelian_simple(&self, bound: u64) -> Result<bool, PermError> {
        if self.is_abelian() {
            return Ok(false);
        }
        let order = self.order();
        for rep in self.conjugacy_class_reps(bound)? {
            if rep.is_identity() {
                continue;
            }
            if self.normal_closure(std::slice::from_ref(&rep)).order() != order {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Orbit of a point under the group.
    pub fn orbit(&self, point: u32) -> Vec<u32> {
        let mut seen = vec![false; self.degree];
        let mut queue = VecDeque::from([point]);
        seen[point as usize] = true;
        let mut out = Vec::new();
        while let Some(p) = queue.pop_front() {
            out.push(p);
            for g in &self.gens {
                let q = g.apply(p);
                if !seen[q as usize] {
                    seen[q as usize] = true;
                    queue.push_back(q);
                }
            }
        }
        out
    }

    pub fn is_transitive(&self) -> bool {
        self.degree == 0 || self.orbit(0).len() == self.degree
    }
}

// Deterministic incremental Schreier-Sims.
fn build_chain(degree: usize, gens: &[Permutation]) -> Vec<ChainLayer> {
    let mut chain: Vec<ChainLayer> = Vec::new();
    for g in gens {
        extend_chain(&mut chain, degree, 0, g.clone());
    }
    chain
}

fn extend_chain(chain: &mut Vec<ChainLayer>, degree: usize, level: usize, g: Permutation) {
    if g.is_identity() {
        return;
    }
    if level == chain.len() {
        let base = (0..degree as u32)
            .find(|&p| g.apply(p) != p)
            .expect("non-identity fixes everything");
        chain.push(ChainLayer {
            base,
            gens: Vec::new(),
            transversal: HashMap::new(),
            orbit: Vec::new(),
        });
    }
    if chain[level].gens.contains(&g) {
        return;
    }
    chain[level].gens.push(g);
    rebuild_orbit(&mut chain[level]);

    // Close the layer: every Schreier generator must sift through the rest.
    let layer_gens = chain[level].gens.clone();
    let orbit = chain[level].orbit.clone();
    for &p in &orbit {
        let t_p = chain[level].transversal[&p].clone();
        for s in &layer_gens {
            let q = s.apply(p);
            let t_q = chain[level].transversal[&q].clone();
            let schreier = t_p.compose(s).compose(&t_q.inverse());
            if let Some(residue) = sift(&chain[level + 1..], &schreier) {
                extend_chain(chain, degree, level + 1, residue);
            }
        }
    }
}

fn rebuild_orbit(layer: &mut ChainLayer) {
    let id = Permutation::identity(layer.gens[0].degree());
    layer.transversal.clear();
    layer.transversal.insert(layer.base, id);
    layer.orbit = vec![layer.base];
    let mut qi = 0;
    while qi < layer.orbit.len() {
        let p = layer.orbit[qi];
        qi += 1;
        let t_p = layer.transversal[&p].clone();
        for g in &layer.gens {
            let q = g.apply(p);
            if let std::collections::hash_map::Entry::Vacant(e) = layer.transversal.entry(q) {
                e.insert(t_p.compose(g));
                layer.orbit.push(q);
            }
        }
    }
}

// Sift through the chain suffix; None means membership.
fn sift(chain: &[ChainLayer], g: &Permutation) -> Option<Permutation> {
    let mut h = g.clone();
    for layer in chain {
        let p = h.apply(layer.base);
        match layer.transversal.get(&p) {
            None => return Some(h),
            Some(t) => h = h.compose(&t.inverse()),
        }
    }
    if h.is_identity() {
        None
    } else {
        Some(h)
    }
}
