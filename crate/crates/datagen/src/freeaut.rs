//! Automorphisms of a free group, represented by their images of the basis.
//!
//! An automorphism is stored as one reduced word per basis letter. Composition
//! follows word order: `a.then(b)` acts as `a` first, so evaluating a word
//! over a generator table multiplies letters left to right.

use fpx_core::words::{inv_word, Letter, Word};
use std::collections::HashMap;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FreeAut {
    pub images: Vec<Word>,
}

fn push_reduced(out: &mut Word, l: Letter) {
    if out.last() == Some(&-l) {
        out.pop();
    } else {
        out.push(l);
    }
}

impl FreeAut {
    pub fn identity(rank: usize) -> Self {
        FreeAut {
            images: (1..=rank as Letter).map(|l| vec![l]).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    /// Substitute basis images into `w` and reduce.
    pub fn apply(&self, w: &[Letter]) -> Word {
        let mut out = Word::new();
        for &l in w {
            if l > 0 {
                for &m in &self.images[(l - 1) as usize] {
                    push_reduced(&mut out, m);
                }
            } else {
                for &m in self.images[(-l - 1) as usize].iter().rev() {
                    push_reduced(&mut out, -m);
                }
            }
        }
        out
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &FreeAut) -> FreeAut {
        FreeAut {
            images: self.images.iter().map(|im| other.apply(im)).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, im)| im.len() == 1 && im[0] == i as Letter + 1)
    }

    /// True when every basis letter maps to a single signed basis letter.
    pub fn is_monomial(&self) -> bool {
        self.images.iter().all(|im| im.len() == 1)
    }

    /// Inverse of a monomial automorphism.
    pub fn monomial_inverse(&self) -> FreeAut {
        assert!(self.is_monomial());
        let n = self.rank();
        let mut images = vec![Word::new(); n];
        for (i, im) in self.images.iter().enumerate() {
            let l = im[0];
            let src = i as Letter + 1;
            images[(l.unsigned_abs() - 1) as usize] = vec![if l > 0 { src } else { -src }];
        }
        FreeAut { images }
    }

    /// Conjugation x -> w^-1 x w.
    pub fn inner(rank: usize, w: &[Letter]) -> FreeAut {
        let wi = inv_word(w);
        FreeAut {
            images: (1..=rank as Letter)
                .map(|l| {
                    let mut im = wi.clone();
                    for &m in std::iter::once(&l).chain(w.iter()) {
                        push_reduced(&mut im, m);
                    }
                    im
                })
                .collect(),
        }
    }

    /// If `self` is conjugation by some word, return that word.
    ///
    /// A reduced image w^-1 x1 w is an odd word around a central `x1`, so its
    /// tail gives the conjugator up to a leading x1-power. That power is in
    /// turn read off the second image after dividing the tail out, and the
    /// assembled candidate is checked against every basis letter.
    pub fn as_inner(&self) -> Option<Word> {
        let n = self.rank();
        if n <= 1 {
            return if self.is_identity() {
                Some(Word::new())
            } else {
                None
            };
        }
        let y = &self.images[0];
        if y.len().is_multiple_of(2) || y[y.len() / 2] != 1 {
            return None;
        }
        let tail: Word = y[y.len() / 2 + 1..].to_vec();
        let delta = self.then(&FreeAut::inner(n, &inv_word(&tail)));
        let z = &delta.images[1];
        if z.len().is_multiple_of(2) {
            return None;
        }
        let mut w: Word = z[z.len() / 2 + 1..].to_vec();
        w.extend_from_slice(&tail);
        let w = fpx_core::words::free_reduce(&w);
        if *self == FreeAut::inner(n, &w) {
            Some(w)
        } else {
            None
        }
    }
}

/// Named generator table with closed-form inverses, for evaluating words.
pub struct GenTable {
    pub names: Vec<String>,
    pub auts: Vec<FreeAut>,
    pub invs: Vec<FreeAut>,
    by_aut: HashMap<FreeAut, Letter>,
}

impl GenTable {
    pub fn new(names: Vec<String>, auts: Vec<FreeAut>, invs: Vec<FreeAut>) -> Self {
        assert_eq!(names.len(), auts.len());
        assert_eq!(names.len(), invs.len());
        for (a, b) in auts.iter().zip(&invs) {
            assert!(a.then(b).is_identity(), "inverse table mismatch");
        }
        let mut by_aut = HashMap::new();
        for (i, a) in auts.iter().enumerate() {
            by_aut.insert(a.clone(), i as Letter + 1);
            by_aut.entry(invs[i].clone()).or_insert(-(i as Letter + 1));
        }
        GenTable {
            names,
            auts,
            invs,
            by_aut,
        }
    }

    pub fn len(&self) -> usize {
        self.auts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.auts.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.auts[0].rank()
    }

    /// Evaluate a word over this table, letters applied left to right.
    pub fn eval(&self, w: &[Letter]) -> FreeAut {
        let mut acc = FreeAut::identity(self.rank());
        for &l in w {
            let g = if l > 0 {
                &self.auts[(l - 1) as usize]
            } else {
                &self.invs[(-l - 1) as usize]
            };
            acc = acc.then(g);
        }
        acc
    }

    /// Letter whose generator (or inverse) equals `a`, if any.
    pub fn letter_of(&self, a: &FreeAut) -> Option<Letter> {
        self.by_aut.get(a).copied()
    }
}
