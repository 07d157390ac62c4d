//! Rewrites the elementary-automorphism relations onto four generators:
//! P (swap of the first two basis letters), Q (basis cycle), O (inversion of
//! the first basis letter) and U (the transvection x1 -> x1 x2).
//!
//! Every elementary generator is a monomial conjugate of U, with the
//! monomial found by breadth-first search over signed permutations. The
//! rewritten relators, the three definition relators and a harvested set of
//! short true relators are all verified by evaluating them back to
//! automorphisms before anything is returned.

use crate::freeaut::{FreeAut, GenTable};
use crate::transvections as tv;
use crate::transvections::dedup_push;
use fpx_core::abelianization::abelian_invariants;
use fpx_core::tietze::{tietze_simplify, TietzeLimits};
use fpx_core::words::{free_reduce, inv_word, normalize_relator, Letter, Presentation, Word};
use num_bigint::BigInt;
use std::collections::{HashMap, HashSet};

pub const P: Letter = 1;
pub const Q: Letter = 2;
pub const O: Letter = 3;
pub const U: Letter = 4;

const HARVEST_RADIUS: usize = 5;
const HARVEST_MAX_LEN: usize = 12;

/// The four target generators as automorphisms of rank n.
pub fn pqou_table(n: usize) -> GenTable {
    assert!(n >= 3);
    let mut p = FreeAut::identity(n);
    p.images.swap(0, 1);
    let mut q = FreeAut::identity(n);
    for i in 0..n {
        q.images[i] = vec![((i + 1) % n) as Letter + 1];
    }
    let mut o = FreeAut::identity(n);
    o.images[0] = vec![-1];
    let mut u = FreeAut::identity(n);
    u.images[0] = vec![1, 2];
    let mut ui = FreeAut::identity(n);
    ui.images[0] = vec![1, -2];
    let qi = q.monomial_inverse();
    GenTable::new(
        vec!["P".into(), "Q".into(), "O".into(), "U".into()],
        vec![p.clone(), q, o.clone(), u],
        vec![p, qi, o, ui],
    )
}

/// Shortest {P,Q,O}-word for every signed permutation, in search order.
fn monomial_words(t4: &GenTable) -> Vec<(FreeAut, Word)> {
    let mut out: Vec<(FreeAut, Word)> = vec![(FreeAut::identity(t4.rank()), Word::new())];
    let mut seen: HashSet<FreeAut> = out.iter().map(|(f, _)| f.clone()).collect();
    let mut qi = 0;
    while qi < out.len() {
        let (f, w) = out[qi].clone();
        qi += 1;
        for l in [P, Q, O] {
            let nf = f.then(&t4.auts[(l - 1) as usize]);
            if seen.insert(nf.clone()) {
                let mut nw = w.clone();
                nw.push(l);
                out.push((nf, nw));
            }
        }
    }
    out
}

/// m u^e m^-1 word equal to the given automorphism, if any monomial works.
fn monomial_conjugate_of_u(
    g: &FreeAut,
    t4: &GenTable,
    monos: &[(FreeAut, Word)],
) -> Option<Word> {
    let u = &t4.auts[(U - 1) as usize];
    let ui = &t4.invs[(U - 1) as usize];
    for (m, mw) in monos {
        let minv = m.monomial_inverse();
        for (ua, eps) in [(u, U), (ui, -U)] {
            if m.then(ua).then(&minv) == *g {
                let mut w = mw.clone();
                w.push(eps);
                w.extend(inv_word(mw));
                return Some(free_reduce(&w));
            }
        }
    }
    None
}

/// Words over the extended elementary alphabet realizing P and Q, plus one
/// word per slot evaluating to that slot's inversion.
///
/// A signed swap cubed composed with one slot inversion is the plain swap;
/// the plain adjacent swaps chain into the cycle. Each step is verified.
fn structural_words(ee: &GenTable) -> (Word, Word, Vec<Word>) {
    let n = ee.rank();
    let o_letter = ee.len() as Letter;
    assert_eq!(ee.names[ee.len() - 1], "o");

    let swaps: Vec<Word> = (0..n - 1).map(|j| tv::swap_word(ee, j, j + 1)).collect();

    let mut inv_words: Vec<Word> = vec![vec![o_letter]];
    for j in 0..n - 1 {
        let mut w = swaps[j].clone();
        w.extend_from_slice(&swaps[j]);
        w.extend_from_slice(&inv_words[j]);
        inv_words.push(w);
    }
    for (j, wj) in inv_words.iter().enumerate() {
        let mut want = FreeAut::identity(n);
        want.images[j] = vec![-(j as Letter + 1)];
        assert_eq!(ee.eval(wj), want);
    }

    let mut plain: Vec<Word> = Vec::new();
    for (j, swap) in swaps.iter().enumerate().take(n - 1) {
        let mut want = FreeAut::identity(n);
        want.images.swap(j, j + 1);
        let found = [j, j + 1].iter().find_map(|&k| {
            let mut w = swap.clone();
            w.extend_from_slice(&inv_words[k]);
            (ee.eval(&w) == want).then_some(w)
        });
        plain.push(found.expect("plain swap from signed swap and inversion"));
    }

    let p_word = plain[0].clone();
    let mut q_word = Word::new();
    for w in plain.iter().rev() {
        q_word.extend_from_slice(w);
    }
    let mut cycle = FreeAut::identity(n);
    for i in 0..n {
        cycle.images[i] = vec![((i + 1) % n) as Letter + 1];
    }
    assert_eq!(ee.eval(&q_word), cycle);
    (p_word, q_word, inv_words)
}

fn substitute(r: &[Letter], sigma: &[Word]) -> Word {
    let mut out = Word::new();
    for &l in r {
        let w = &sigma[(l.unsigned_abs() - 1) as usize];
        if l > 0 {
            for &m in w {
                push(&mut out, m);
            }
        } else {
            for &m in w.iter().rev() {
                push(&mut out, -m);
            }
        }
    }
    out
}

fn push(out: &mut Word, l: Letter) {
    if out.last() == Some(&-l) {
        out.pop();
    } else {
        out.push(l);
    }
}

/// Short true relators from cross edges of a breadth-first ball.
fn harvest_relators(
    t4: &GenTable,
    accept_inner: bool,
    rels: &mut Vec<Word>,
    seen: &mut HashSet<Word>,
) {
    let mut index: HashMap<FreeAut, Word> = HashMap::new();
    let id = FreeAut::identity(t4.rank());
    index.insert(id.clone(), Word::new());
    let mut ball: Vec<(FreeAut, Word)> = vec![(id, Word::new())];
    let mut qi = 0;
    while qi < ball.len() {
        let (f, w) = ball[qi].clone();
        qi += 1;
        if w.len() == HARVEST_RADIUS {
            continue;
        }
        for l in [P, -P, Q, -Q, O, -O, U, -U] {
            if w.last() == Some(&-l) {
                continue;
            }
            let g = if l > 0 {
                &t4.auts[(l - 1) as usize]
            } else {
                &t4.invs[(-l - 1) as usize]
            };
            let nf = f.then(g);
            let mut nw = w.clone();
            nw.push(l);
            match index.get(&nf) {
                None => {
                    if accept_inner {
                        if let Some(c) = nf.as_inner() {
                            if !c.is_empty() {
                                dedup_push(rels, seen, nw.clone());
                            }
                        }
                    }
                    index.insert(nf.clone(), nw.clone());
                    ball.push((nf, nw));
                }
                Some(w2) => {
                    let mut r = nw;
                    r.extend(inv_word(w2));
                    let r = free_reduce(&r);
                    if !r.is_empty() && r.len() <= HARVEST_MAX_LEN {
                        dedup_push(rels, seen, r);
                    }
                }
            }
        }
    }
}

fn verify_relators(t4: &GenTable, rels: &[Word], allow_inner: bool) {
    for r in rels {
        let a = t4.eval(r);
        assert!(
            a.is_identity() || (allow_inner && a.as_inner().is_some()),
            "relator does not hold"
        );
    }
}

fn build(n: usize, kill_inner: bool, name: &str) -> Presentation {
    let e = tv::egen_table(n);
    let ee = tv::with_inversion(&e);

    let mut rels: Vec<Word> = Vec::new();
    let mut seen: HashSet<Word> = HashSet::new();
    tv::commuting_relators(&ee, &mut rels, &mut seen);
    tv::steinberg_relators(&ee, &mut rels, &mut seen);
    let mut pair_swaps: Vec<Word> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let w = tv::swap_word(&ee, i, j);
            tv::swap_relators(&ee, &w, &mut rels, &mut seen);
            pair_swaps.push(w);
        }
    }
    tv::inversion_relators(&ee, &mut rels, &mut seen);
    let (p_big, q_big, inv_words) = structural_words(&ee);
    tv::swap_inversion_relators(&ee, &pair_swaps, &inv_words, &mut rels, &mut seen);
    if kill_inner {
        for k in 0..n {
            dedup_push(&mut rels, &mut seen, tv::inner_word(&ee, k));
        }
    }

    let t4 = pqou_table(n);
    let monos = monomial_words(&t4);
    assert_eq!(monos.len(), (1usize << n) * (1..=n).product::<usize>());

    assert_eq!(ee.names[0], "r12");
    let mut sigma: Vec<Word> = ee.auts[..e.len()]
        .iter()
        .map(|g| {
            monomial_conjugate_of_u(g, &t4, &monos)
                .expect("elementary generator is a monomial conjugate of U")
        })
        .collect();
    sigma.push(vec![O]);

    let mut out_rels: Vec<Word> = Vec::new();
    let mut out_seen: HashSet<Word> = HashSet::new();
    for r in &rels {
        dedup_push(&mut out_rels, &mut out_seen, substitute(r, &sigma));
    }
    let mut pd = vec![P];
    pd.extend(inv_word(&substitute(&p_big, &sigma)));
    dedup_push(&mut out_rels, &mut out_seen, pd);
    let mut qd = vec![Q];
    qd.extend(inv_word(&substitute(&q_big, &sigma)));
    dedup_push(&mut out_rels, &mut out_seen, qd);
    let mut ud = vec![U];
    ud.extend(inv_word(&sigma[0]));
    dedup_push(&mut out_rels, &mut out_seen, ud);

    harvest_relators(&t4, kill_inner, &mut out_rels, &mut out_seen);

    verify_relators(&t4, &out_rels, kill_inner);

    let p0 = Presentation::new(Some(name), &["P", "Q", "O", "U"], out_rels);
    let limits = TietzeLimits {
        min_gens: 4,
        ..Default::default()
    };
    let mut p1 = tietze_simplify(&p0, &limits);
    assert_eq!(p1.gens, vec!["P", "Q", "O", "U"]);
    for r in &mut p1.relators {
        *r = normalize_relator(r);
    }
    verify_relators(&t4, &p1.relators, kill_inner);

    let ab = abelian_invariants(&p1);
    assert_eq!(ab.free_rank, 0);
    assert_eq!(ab.torsion, vec![BigInt::from(2)]);
    p1
}

/// Four-generator presentation of the automorphism group of a rank-n free
/// group.
pub fn build_aut(n: usize) -> Presentation {
    build(n, false, &format!("aut_f{}", n))
}

/// Four-generator presentation of the outer automorphism group.
pub fn build_out(n: usize) -> Presentation {
    build(n, true, &format!("out_f{}", n))
}
