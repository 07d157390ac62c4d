//! Tietze simplification of presentations.
//!
//! Two moves only, both isomorphism-preserving:
//! - eliminate a generator that occurs exactly once in some relator, by
//!   substituting the word the relator equates it to;
//! - shorten a relator by replacing a subword that covers more than half of
//!   another (cyclic) relator with the inverse of the uncovered part.
//!
//! The returned presentation is the best state seen: never more generators,
//! never greater total relator length than the input. Deterministic.

use crate::words::{cyclic_normal_form, cyclic_reduce, inv_word, Letter, Presentation, Word};
use std::collections::HashMap;

#[derive(Clone, Debug)]
pub struct TietzeLimits {
    /// Elimination rounds to attempt.
    pub max_passes: usize,
    /// Stop eliminating generators at this count.
    pub min_gens: usize,
    /// Abort when working length exceeds this multiple of the input length.
    pub max_blowup: f64,
}

impl Default for TietzeLimits {
    fn default() -> Self {
        TietzeLimits {
            max_passes: 200,
            min_gens: 0,
            max_blowup: 8.0,
        }
    }
}

pub fn tietze_simplify(p: &Presentation, limits: &TietzeLimits) -> Presentation {
    let mut work = State {
        gens: p.gens.clone(),
        relators: p.relators.clone(),
    };
    let input_total = p.total_relator_length();
    let budget = ((input_total.max(64) as f64) * limits.max_blowup) as usize;

    work.normalize();
    work.crunch();
    let mut best = work.clone();

    for _ in 0..limits.max_passes {
        if work.gens.len() <= limits.min_gens || !work.eliminate_one(budget) {
            break;
        }
        work.normalize();
        work.crunch();
        if work.better_than(&best) {
            best = work.clone();
        }
        if work.total() > budget {
            break;
        }
    }

    // Honor the contract against the raw input.
    if best.total() > input_total || best.gens.len() > p.gens.len() {
        return p.clone();
    }
    Presentation {
        name: p.name.clone(),
        gens: best.gens,
        relators: best.relators,
    }
}

#[derive(Clone)]
struct State {
    gens: Vec<String>,
    relators: Vec<Word>,
}

impl State {
    fn total(&self) -> usize {
        self.relators.iter().map(Vec::len).sum()
    }

    fn better_than(&self, other: &State) -> bool {
        (self.gens.len(), self.total()) < (other.gens.len(), other.total())
    }

    /// Cyclically reduce, drop trivial relators, dedup cyclic classes.
    fn normalize(&mut self) {
        let mut seen: HashMap<Word, ()> = HashMap::new();
        let mut out: Vec<Word> = Vec::with_capacity(self.relators.len());
        for r in &self.relators {
            let c = cyclic_reduce(r);
            if c.is_empty() {
                continue;
            }
            let key = cyclic_normal_form(&c);
            if seen.insert(key, ()).is_none() {
                out.push(c);
            }
        }
        out.sort_by_key(|w| (w.len(), w.clone()));
        self.relators = out;
    }

    /// Repeatedly rewrite relators by overlapping shorter ones.
    fn crunch(&mut self) {
        loop {
            let mut changed = false;
            // Shorter relators rewrite longer ones; normalize() keeps them sorted.
            for i in 0..self.relators.len() {
                let pat = self.relators[i].clone();
                if pat.is_empty() {
                    continue;
                }
                let index = SubwordIndex::new(&pat);
                for j in 0..self.relators.len() {
                    if i == j || self.relators[j].len() < pat.len() {
                        continue;
                    }
                    if let Some(new_w) = index.rewrite(&self.relators[j]) {
                        self.relators[j] = new_w;
                        changed = true;
                    }
                }
            }
            self.normalize();
            if !changed {
                return;
            }
        }
    }

    /// Eliminate one generator occurring exactly once in some relator.
    /// Picks the candidate with least projected growth. Returns false if none
    /// is admissible under `budget`.
    fn eliminate_one(&mut self, budget: usize) -> bool {
        let ngens = self.gens.len();
        let mut occ = vec![0usize; ngens];
        for r in &self.relators {
            for &l in r {
                occ[(l.unsigned_abs() as usize) - 1] += 1;
            }
        }
        // (growth, relator length, gen) -> (relator idx, position)
        let mut bestc: Option<(i64, usize, usize, usize, usize)> = None;
        for (ri, r) in self.relators.iter().enumerate() {
            let mut counts: HashMap<usize, (usize, usize)> = HashMap::new();
            for (pos, &l) in r.iter().enumerate() {
                let g = (l.unsigned_abs() as usize) - 1;
                let e = counts.entry(g).or_insert((0, pos));
                e.0 += 1;
            }
            for (&g, &(cnt, pos)) in &counts {
                if cnt != 1 {
                    continue;
                }
                let growth = (occ[g] as i64 - 1) * (r.len() as i64 - 1) - r.len() as i64;
                let cand = (growth, r.len(), g, ri, pos);
                if bestc.is_none_or(|b| (cand.0, cand.1, cand.2) < (b.0, b.1, b.2)) {
                    bestc = Some(cand);
                }
            }
        }
        let Some((growth, _, g, ri, pos)) = bestc else {
            return false;
        };
        if (self.total() as i64 + growth).max(0) as usize > budget {
            return false;
        }

        let r = self.relators.remove(ri);
        let mut rot = r[pos..].to_vec();
        rot.extend_from_slice(&r[..pos]);
        // rot = l . rest with l the unique occurrence of g
        let l = rot[0];
        let rest = rot[1..].to_vec();
        let w_g: Word = if l > 0 { inv_word(&rest) } else { rest };
        debug_assert!(w_g.iter().all(|&x| (x.unsigned_abs() as usize) - 1 != g));

        let gl = (g + 1) as Letter;
        for rel in &mut self.relators {
            let mut out: Word = Vec::with_capacity(rel.len());
            for &x in rel.iter() {
                if x == gl {
                    out.extend_from_slice(&w_g);
                } else if x == -gl {
                    out.extend_from_slice(&inv_word(&w_g));
                } else {
                    out.push(x);
                }
            }
            *rel = out;
        }
        self.gens.remove(g);
        let shift = |l: Letter| -> Letter {
            let a = l.unsigned_abs() as usize;
            debug_assert_ne!(a - 1, g);
            if a - 1 > g {
                if l > 0 {
                    l - 1
                } else {
                    l + 1
                }
            } else {
                l
            }
        };
        for rel in &mut self.relators {
            for x in rel.iter_mut() {
                *x = shift(*x);
            }
        }
        true
    }
}

/// Rotations of a cyclic relator (and its inverse), indexed by 2-gram for
/// seed-and-extend matching against other relators.
struct SubwordIndex {
    variants: [Word; 2],
    len: usize,
    min_match: usize,
    // (l0, l1) -> list of (variant, rotation offset)
    seeds: HashMap<(Letter, Letter), Vec<(usize, usize)>>,
}

impl SubwordIndex {
    fn new(pat: &Word) -> Self {
        let n = pat.len();
        let variants = [pat.clone(), inv_word(pat)];
        let min_match = n / 2 + 1;
        let mut seeds: HashMap<(Letter, Letter), Vec<(usize, usize)>> = HashMap::new();
        for (v, var) in variants.iter().enumerate() {
            for rot in 0..n {
                let l0 = var[rot];
                let l1 = if n == 1 { 0 } else { var[(rot + 1) % n] };
                seeds.entry((l0, l1)).or_default().push((v, rot));
            }
        }
        SubwordIndex {
            variants,
            len: n,
            min_match,
            seeds,
        }
    }

    /// One shortening rewrite of `s` if a long enough overlap exists.
    fn rewrite(&self, s: &Word) -> Option<Word> {
        let m = s.len();
        if m == 0 {
            return None;
        }
        let at = |i: usize| s[i % m];
        for start in 0..m {
            let l0 = at(start);
            let l1 = if self.len == 1 { 0 } else { at(start + 1) };
            let Some(cands) = self.seeds.get(&(l0, l1)) else {
                continue;
            };
            for &(v, rot) in cands {
                let var = &self.variants[v];
                let mut h = 1;
                let cap = self.len.min(m);
                while h < cap && var[(rot + h) % self.len] == at(start + h) {
                    h += 1;
                }
                if h < self.min_match {
                    continue;
                }
                // matched u of length h at cyclic s[start..]; pattern rotation
                // is u.t with t of length len - h, and u = t^-1 in the group
                let mut t: Word = (h..self.len).map(|k| var[(rot + k) % self.len]).collect();
                t = inv_word(&t);
                let mut rest: Word = (0..m - h).map(|k| at(start + h + k)).collect();
                let mut out = t;
                out.append(&mut rest);
                let out = cyclic_reduce(&out);
                if out.len() < m {
                    return Some(out);
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::parse_presentation;

    fn simp(text: &str) -> Presentation {
        tietze_simplify(&parse_presentation(text).unwrap(), &TietzeLimits::default())
    }

    #[test]
    fn merges_equal_generators() {
        let p = simp("gens a,b\nrel a*b^-1\nrel a^3\n");
        assert_eq!(p.rank(), 1);
        assert_eq!(p.relators, vec![vec![1, 1, 1]]);
    }

    #[test]
    fn eliminates_defined_generator() {
        // b = a^2, b^3 = 1  =>  a^6 = 1
        let p = simp("gens a,b\nrel b*a^-2\nrel b^3\n");
        assert_eq!(p.rank(), 1);
        assert_eq!(p.relators, vec![vec![1; 6]]);
    }

    #[test]
    fn power_relators_collapse_to_gcd() {
        // gcd(5,3) = 1, so the group is trivial and the generator goes too.
        let p = simp("gens a\nrel a^5\nrel a^3\n");
        assert_eq!(p.rank(), 0);
        assert!(p.relators.is_empty());
    }

    #[test]
    fn keeps_unused_free_generator() {
        let p = simp("gens a,b\nrel a^2\n");
        assert_eq!(p.rank(), 2);
    }

    #[test]
    fn drops_duplicate_and_trivial_relators() {
        let p = simp("gens a,b\nrel a*b\nrel b^-1*a^-1\nrel a*a^-1\n");
        // a*b and its inverse are one cyclic class; then b is eliminated.
        assert_eq!(p.rank(), 1);
        assert!(p.relators.is_empty());
    }

    #[test]
    fn total_length_never_increases() {
        let texts = [
            "gens a,b\nrel a^2\nrel b^2\nrel (a*b)^3\n",
            "gens a,b,c\nrel a*b*c\nrel c^2\nrel (a*b)^4\n",
            "gens x,y\nrel x*y*x^-1*y^-1\n",
        ];
        for t in texts {
            let p = parse_presentation(t).unwrap();
            let q = tietze_simplify(&p, &TietzeLimits::default());
            assert!(q.total_relator_length() <= p.total_relator_length());
            assert!(q.rank() <= p.rank());
        }
    }

    #[test]
    fn respects_min_gens() {
        let p = parse_presentation("gens a,b\nrel b*a^-2\nrel b^3\n").unwrap();
        let q = tietze_simplify(
            &p,
            &TietzeLimits {
                min_gens: 2,
                ..Default::default()
            },
        );
        assert_eq!(q.rank(), 2);
    }
}
