//! Elementary automorphisms of a rank-n free group and their verified
//! relations.
//!
//! The generating set has one named generator per (slot, target) pair and
//! direction: `r{i}{j}` maps x_i -> x_i x_j and `l{i}{j}` maps
//! x_i -> x_j^-1 x_i (1-based names). Inverses are closed-form, so the
//! other multiplication signs are the formal inverse letters. Every relator
//! produced here is checked against the automorphism table at construction
//! time; nothing is emitted on trust.

use crate::freeaut::{FreeAut, GenTable};
use fpx_core::words::{cyclic_normal_form, inv_word, normalize_relator, Letter, Word};
use std::collections::HashSet;

/// One transvection generator: slot i gains target j on the chosen side.
fn egen_pair(n: usize, i: usize, right: bool, j: usize) -> (FreeAut, FreeAut) {
    let mut a = FreeAut::identity(n);
    let mut b = FreeAut::identity(n);
    let (xi, xj) = (i as Letter + 1, j as Letter + 1);
    if right {
        a.images[i] = vec![xi, xj];
        b.images[i] = vec![xi, -xj];
    } else {
        a.images[i] = vec![-xj, xi];
        b.images[i] = vec![xj, xi];
    }
    (a, b)
}

/// All 2n(n-1) elementary generators, r-family first.
pub fn egen_table(n: usize) -> GenTable {
    let mut names = Vec::new();
    let mut auts = Vec::new();
    let mut invs = Vec::new();
    for right in [true, false] {
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let prefix = if right { 'r' } else { 'l' };
                names.push(format!("{}{}{}", prefix, i + 1, j + 1));
                let (a, b) = egen_pair(n, i, right, j);
                auts.push(a);
                invs.push(b);
            }
        }
    }
    GenTable::new(names, auts, invs)
}

/// Extend a table by the first-letter inversion o: x1 -> x1^-1.
pub fn with_inversion(t: &GenTable) -> GenTable {
    let n = t.rank();
    let mut o = FreeAut::identity(n);
    o.images[0] = vec![-1];
    let mut names = t.names.clone();
    let mut auts = t.auts.clone();
    let mut invs = t.invs.clone();
    names.push("o".to_string());
    auts.push(o.clone());
    invs.push(o);
    GenTable::new(names, auts, invs)
}

pub(crate) fn dedup_push(rels: &mut Vec<Word>, seen: &mut HashSet<Word>, w: Word) {
    let w = normalize_relator(&w);
    if w.is_empty() {
        return;
    }
    if seen.insert(cyclic_normal_form(&w)) {
        rels.push(w);
    }
}

/// Commutators of generator pairs that commute as automorphisms.
pub fn commuting_relators(t: &GenTable, rels: &mut Vec<Word>, seen: &mut HashSet<Word>) {
    for a in 0..t.len() {
        for b in a + 1..t.len() {
            if t.auts[a].then(&t.auts[b]) == t.auts[b].then(&t.auts[a]) {
                let (la, lb) = (a as Letter + 1, b as Letter + 1);
                dedup_push(rels, seen, vec![la, lb, -la, -lb]);
            }
        }
    }
}

/// Commutators of generator pairs that equal a single generator or inverse.
pub fn steinberg_relators(t: &GenTable, rels: &mut Vec<Word>, seen: &mut HashSet<Word>) {
    for a in 0..t.len() {
        for b in 0..t.len() {
            if a == b {
                continue;
            }
            for ea in [1, -1] {
                for eb in [1, -1] {
                    let (la, lb) = (ea * (a as Letter + 1), eb * (b as Letter + 1));
                    let w = vec![la, lb, -la, -lb];
                    let c = t.eval(&w);
                    if c.is_identity() {
                        continue;
                    }
                    if let Some(l) = t.letter_of(&c) {
                        let mut r = w;
                        r.push(-l);
                        dedup_push(rels, seen, r);
                    }
                }
            }
        }
    }
}

/// Signed swap on slots i < j: a length-3 word in the generators touching
/// only those slots whose automorphism is monomial of order four there.
pub fn swap_word(t: &GenTable, i: usize, j: usize) -> Word {
    let mut letters: Vec<Letter> = Vec::new();
    for (g, name) in t.names.iter().enumerate() {
        let bytes = name.as_bytes();
        if bytes.len() != 3 || (bytes[0] != b'r' && bytes[0] != b'l') {
            continue;
        }
        let gi = (bytes[1] - b'1') as usize;
        let gj = (bytes[2] - b'1') as usize;
        if (gi == i && gj == j) || (gi == j && gj == i) {
            letters.push(g as Letter + 1);
            letters.push(-(g as Letter + 1));
        }
    }
    let (xi, xj) = (i as Letter + 1, j as Letter + 1);
    for &a in &letters {
        for &b in &letters {
            for &c in &letters {
                let w = vec![a, b, c];
                let f = t.eval(&w);
                if !f.is_monomial() {
                    continue;
                }
                let fi = f.images[i][0];
                let fj = f.images[j][0];
                if fi.unsigned_abs() == xj.unsigned_abs()
                    && fj.unsigned_abs() == xi.unsigned_abs()
                    && fi * fj < 0
                {
                    return w;
                }
            }
        }
    }
    panic!("no signed swap word for slots {} {}", i, j);
}

/// Fourth power of a signed swap plus its conjugation action on every
/// generator.
pub fn swap_relators(
    t: &GenTable,
    w: &[Letter],
    rels: &mut Vec<Word>,
    seen: &mut HashSet<Word>,
) {
    let mut w4 = Word::new();
    for _ in 0..4 {
        w4.extend_from_slice(w);
    }
    assert!(t.eval(&w4).is_identity());
    dedup_push(rels, seen, w4);
    let wi = inv_word(w);
    for a in 0..t.len() {
        let mut cw = w.to_vec();
        cw.push(a as Letter + 1);
        cw.extend_from_slice(&wi);
        let c = t.eval(&cw);
        // Conjugates of transvections are transvections; the conjugate of the
        // inversion generator can land outside the table and is handled by
        // `swap_inversion_relators`.
        let Some(l) = t.letter_of(&c) else { continue };
        cw.push(-l);
        dedup_push(rels, seen, cw);
    }
}

/// How each pairwise swap word moves the single-slot inversion: the relator
/// w o w^-1 (inv_k word)^-1, where inv_k is the inversion the conjugate
/// equals. `inv_words[k]` must evaluate to the inversion of slot k.
pub fn swap_inversion_relators(
    t: &GenTable,
    swap_words: &[Word],
    inv_words: &[Word],
    rels: &mut Vec<Word>,
    seen: &mut HashSet<Word>,
) {
    let n = t.auts[0].rank();
    for w in swap_words {
        let o = t.len() as Letter;
        let mut cw = w.clone();
        cw.push(o);
        cw.extend_from_slice(&inv_word(w));
        let c = t.eval(&cw);
        let k = (0..n)
            .find(|&k| {
                let mut inv_k = FreeAut::identity(n);
                inv_k.images[k] = vec![-(k as Letter + 1)];
                c == inv_k
            })
            .expect("swap conjugate of the inversion is a single-slot inversion");
        cw.extend_from_slice(&inv_word(&inv_words[k]));
        assert!(t.eval(&cw).is_identity());
        dedup_push(rels, seen, cw);
    }
}

/// o^2 plus the conjugation action of o on every other generator. `t` must
/// end with the inversion generator.
pub fn inversion_relators(t: &GenTable, rels: &mut Vec<Word>, seen: &mut HashSet<Word>) {
    let o = t.len() as Letter;
    assert_eq!(t.names[o as usize - 1], "o");
    dedup_push(rels, seen, vec![o, o]);
    for a in 0..t.len() - 1 {
        let cw = vec![o, a as Letter + 1, -o];
        let c = t.eval(&cw);
        let l = t
            .letter_of(&c)
            .expect("inversion conjugate of a transvection");
        let mut r = cw;
        r.push(-l);
        dedup_push(rels, seen, r);
    }
}

/// Word acting as conjugation by basis letter k, checked against the inner
/// automorphism it names.
pub fn inner_word(t: &GenTable, k: usize) -> Word {
    let n = t.rank();
    let mut w = Word::new();
    for i in 0..n {
        if i == k {
            continue;
        }
        let l = t
            .names
            .iter()
            .position(|s| s == &format!("l{}{}", i + 1, k + 1))
            .unwrap();
        let r = t
            .names
            .iter()
            .position(|s| s == &format!("r{}{}", i + 1, k + 1))
            .unwrap();
        w.push(l as Letter + 1);
        w.push(r as Letter + 1);
    }
    assert_eq!(t.eval(&w), FreeAut::inner(n, &[k as Letter + 1]));
    w
}
