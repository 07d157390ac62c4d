//! Cross-checking property suites: enumeration strategies agree with each
//! other, the low-index search matches a brute-force subgroup census,
//! rewriting satisfies the Nielsen-Schreier formula, Smith normal form obeys
//! the divisor chain and minor-gcd identities, stabilizer chains count what
//! exhaustive closure counts, and search witnesses re-verify.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use proptest::prelude::*;

use fpx_core::abelianization::{abelian_invariants_of_matrix, rank_mod_prime};
use fpx_core::low_index::{low_index_subgroups, LowIndexOpts};
use fpx_core::permgroup::{
    alternating_group, cyclic_group, epimorphism_search, monomorphism_exists, symmetric_group,
    verify_epimorphism, verify_monomorphism, SearchBudget, SearchOutcome,
};
use fpx_core::rewriting::reidemeister_schreier;
use fpx_core::todd_coxeter::{enumerate, group_order, EnumOpts, Strategy as TcStrategy};
use fpx_core::{
    abelian_invariants, free_reduce, smith_normal_form, IntMatrix, PermGroup, Permutation,
    Presentation,
};

fn pres(gens: &[&str], rels: &[&[i32]]) -> Presentation {
    Presentation::new(None, gens, rels.iter().map(|r| r.to_vec()).collect())
}

/// Presentations of known finite groups, with their orders.
fn base_pool() -> Vec<(Presentation, u64)> {
    vec![
        (pres(&["a", "b"], &[&[1, 1, 1], &[2, 2], &[1, 2, 1, 2]]), 6),
        (pres(&["a", "b"], &[&[1, 1, 1, 1, 1], &[2, 2], &[1, 2, 1, 2]]), 10),
        (pres(&["a", "b"], &[&[1, 1], &[2, 2, 2], &[1, 2, 1, 2, 1, 2]]), 12),
        (
            pres(&["a", "b"], &[&[1, 1], &[2, 2, 2], &[1, 2, 1, 2, 1, 2, 1, 2]]),
            24,
        ),
        (
            pres(&["a", "b"], &[&[1, 1, 1, 1], &[1, 1, -2, -2], &[-2, 1, 2, 1]]),
            8,
        ),
        (pres(&["a"], &[&[1; 12]]), 12),
        (
            pres(
                &["a", "b", "c"],
                &[
                    &[1, 1],
                    &[2, 2],
                    &[3, 3],
                    &[1, 2, -1, -2],
                    &[1, 3, -1, -3],
                    &[2, 3, -2, -3],
                ],
            ),
            8,
        ),
        (pres(&["a", "b"], &[&[1; 6], &[2, 2], &[1, 2, -1, -2]]), 12),
        (
            pres(
                &["a", "b"],
                &[
                    &[1, 1, 1, -2, -2, -2],
                    &[1, 1, 1, -2, -1, -2, -1],
                    &[1; 6],
                    &[2; 6],
                ],
            ),
            24,
        ),
    ]
}

/// Enumeration capped low enough that a pathological intermediate blowup
/// rejects the case instead of eating the machine.
fn try_enumerate(
    p: &Presentation,
    sub: &[fpx_core::Word],
    strategy: TcStrategy,
    shuffle: Option<u64>,
) -> Option<fpx_core::todd_coxeter::Enumeration> {
    let opts = EnumOpts {
        strategy,
        max_cosets: 100_000,
        coincidence_shuffle: shuffle,
    };
    enumerate(p, sub, &opts).ok()
}

/// A base presentation plus up to two random extra relators. Extra relators
/// only shrink the group, so the result is finite of order dividing the base
/// order.
fn small_quotient() -> impl Strategy<Value = (Presentation, u64)> {
    (0..base_pool().len()).prop_flat_map(|i| {
        let (base, order) = base_pool().swap_remove(i);
        let r = base.rank() as i32;
        let letter = (1..=r, any::<bool>()).prop_map(|(g, s)| if s { g } else { -g });
        let word = proptest::collection::vec(letter, 1..=6);
        proptest::collection::vec(word, 0..=2).prop_map(move |extras| {
            let mut q = base.clone();
            for e in extras {
                let e = free_reduce(&e);
                if !e.is_empty() {
                    q.relators.push(e);
                }
            }
            (q, order)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn enumeration_is_strategy_independent(
        (p, base_order) in small_quotient(),
        seed in any::<u64>(),
    ) {
        let hlt = try_enumerate(&p, &[], TcStrategy::Hlt, None);
        let felsch = try_enumerate(&p, &[], TcStrategy::Felsch, None);
        let shuffled = try_enumerate(&p, &[], TcStrategy::Hlt, Some(seed));
        prop_assume!(hlt.is_some() && felsch.is_some() && shuffled.is_some());
        let (hlt, felsch, shuffled) = (hlt.unwrap(), felsch.unwrap(), shuffled.unwrap());
        prop_assert_eq!(hlt.table.n(), felsch.table.n());
        prop_assert_eq!(hlt.table.n(), shuffled.table.n());
        prop_assert_eq!(base_order % hlt.table.n() as u64, 0);
        prop_assert!(hlt.table.validate(&p, &[]).is_ok());
        prop_assert!(felsch.table.validate(&p, &[]).is_ok());

        let sub = vec![vec![1]];
        let sub_hlt = try_enumerate(&p, &sub, TcStrategy::Hlt, None);
        let sub_felsch = try_enumerate(&p, &sub, TcStrategy::Felsch, None);
        prop_assume!(sub_hlt.is_some() && sub_felsch.is_some());
        let (sub_hlt, sub_felsch) = (sub_hlt.unwrap(), sub_felsch.unwrap());
        prop_assert_eq!(sub_hlt.table.n(), sub_felsch.table.n());
        prop_assert!(sub_hlt.table.validate(&p, &sub).is_ok());
    }
}

type Elem = Vec<u32>;

fn mul(a: &Elem, b: &Elem) -> Elem {
    a.iter().map(|&x| b[x as usize]).collect()
}

fn inv(a: &Elem) -> Elem {
    let mut out = vec![0u32; a.len()];
    for (i, &x) in a.iter().enumerate() {
        out[x as usize] = i as u32;
    }
    out
}

fn close(gens: &[Elem], degree: usize) -> BTreeSet<Elem> {
    let id: Elem = (0..degree as u32).collect();
    let mut set = BTreeSet::new();
    set.insert(id.clone());
    let mut frontier = vec![id];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = mul(&x, g);
            if set.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    set
}

fn all_subgroups(elements: &[Elem], degree: usize) -> Vec<BTreeSet<Elem>> {
    let trivial = close(&[], degree);
    let mut seen: BTreeSet<BTreeSet<Elem>> = BTreeSet::new();
    seen.insert(trivial.clone());
    let mut frontier = vec![trivial];
    while let Some(h) = frontier.pop() {
        for e in elements {
            if !h.contains(e) {
                let mut gens: Vec<Elem> = h.iter().cloned().collect();
                gens.push(e.clone());
                let bigger = close(&gens, degree);
                if seen.insert(bigger.clone()) {
                    frontier.push(bigger);
                }
            }
        }
    }
    seen.into_iter().collect()
}

/// Conjugacy classes of subgroups, counted by index, straight from the
/// multiplication table.
fn census_by_index(elements: &[Elem], degree: usize) -> BTreeMap<usize, usize> {
    let order = elements.len();
    let mut reps: BTreeSet<BTreeSet<Elem>> = BTreeSet::new();
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for h in all_subgroups(elements, degree) {
        let canon = elements
            .iter()
            .map(|g| {
                let gi = inv(g);
                h.iter().map(|x| mul(&mul(&gi, x), g)).collect::<BTreeSet<Elem>>()
            })
            .min()
            .unwrap();
        if reps.insert(canon) {
            *counts.entry(order / h.len()).or_insert(0) += 1;
        }
    }
    counts
}

/// Returns false when an enumeration or search budget was exceeded; panics on
/// any genuine mismatch.
fn check_census_matches_low_index(p: &Presentation) -> bool {
    let full = match try_enumerate(p, &[], TcStrategy::Felsch, None) {
        Some(e) => e,
        None => return false,
    };
    let g = full.table.to_perm_group();
    let order = g.order();
    assert!(order <= 24);
    let elements: Vec<Elem> = g
        .elements(order)
        .unwrap()
        .iter()
        .map(|x| x.images().to_vec())
        .collect();
    let oracle = census_by_index(&elements, g.degree());
    let opts = LowIndexOpts {
        max_index: order as usize,
        max_nodes: 2_000_000,
        ..Default::default()
    };
    let res = match low_index_subgroups(p, &opts) {
        Ok(r) => r,
        Err(_) => return false,
    };
    assert_eq!(res.count_by_index(), oracle);
    for c in &res.subgroups {
        assert!(c.table.validate(p, &[]).is_ok());
    }
    true
}

#[test]
fn low_index_matches_census_on_known_groups() {
    for (p, order) in base_pool() {
        let opts = EnumOpts { max_cosets: 100_000, ..Default::default() };
        assert_eq!(group_order(&p, &opts).unwrap(), order);
        assert!(check_census_matches_low_index(&p), "budget exceeded");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn low_index_matches_census_on_random_quotients((p, _) in small_quotient()) {
        prop_assume!(check_census_matches_low_index(&p));
    }
}

#[test]
fn nielsen_schreier_rank_formula() {
    for (r, max_index) in [(2usize, 4usize), (3, 3)] {
        let names: Vec<String> = (0..r).map(|i| format!("g{}", i)).collect();
        let name_refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let free = Presentation::new(None, &name_refs, Vec::new());
        let opts = LowIndexOpts {
            max_index,
            max_nodes: 5_000_000,
            ..Default::default()
        };
        let res = low_index_subgroups(&free, &opts).unwrap();
        let counts = res.count_by_index();
        assert_eq!(counts.get(&1), Some(&1));
        assert_eq!(counts.get(&2), Some(&((1 << r) - 1)));
        if r == 2 {
            assert_eq!(counts.get(&3), Some(&7));
        }
        for c in &res.subgroups {
            let expected = c.index * (r - 1) + 1;
            let rs = reidemeister_schreier(&free, &c.table);
            assert_eq!(rs.schreier_gens.len(), expected);
            assert_eq!(rs.presentation.gens.len(), expected);
            assert!(rs.presentation.relators.is_empty());
            assert!(rs.schreier_gens.iter().all(|w| !free_reduce(w).is_empty()));
            let ab = abelian_invariants(&rs.presentation);
            assert_eq!(ab.free_rank, expected);
            assert!(ab.torsion.is_empty());
        }
    }
}

fn det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = BigInt::zero();
    for j in 0..n {
        let minor: Vec<Vec<BigInt>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(k, _)| k != j)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let term = &m[0][j] * det(&minor);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k > n {
        return Vec::new();
    }
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn snf_divisor_chain_and_minor_gcds(
        dense in (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(-9i64..=9, c), r)
        }),
        pick in (0usize..5, 0usize..5),
    ) {
        let rows = dense.len();
        let cols = dense[0].len();
        let m = IntMatrix::from_dense(&dense);
        let snf = smith_normal_form(&m);
        prop_assert_eq!(snf.rank, snf.divisors.len());
        for d in &snf.divisors {
            prop_assert!(d > &BigInt::zero());
        }
        for w in snf.divisors.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }

        // gcd of the i-by-i minors equals d1 * ... * di
        let big: Vec<Vec<BigInt>> = dense
            .iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect();
        let mut prod = BigInt::one();
        for i in 1..=rows.min(cols) {
            let mut g = BigInt::zero();
            for ri in combinations(rows, i) {
                for ci in combinations(cols, i) {
                    let sub: Vec<Vec<BigInt>> = ri
                        .iter()
                        .map(|&a| ci.iter().map(|&b| big[a][b].clone()).collect())
                        .collect();
                    g = g.gcd(&det(&sub));
                }
            }
            if i <= snf.rank {
                prod *= &snf.divisors[i - 1];
                prop_assert_eq!(&g, &prod);
            } else {
                prop_assert!(g.is_zero());
            }
        }

        // invariance under transpose and unimodular row operations
        let mut tr = vec![vec![0i64; rows]; cols];
        for r in 0..rows {
            for c in 0..cols {
                tr[c][r] = dense[r][c];
            }
        }
        let snf_tr = smith_normal_form(&IntMatrix::from_dense(&tr));
        prop_assert_eq!(&snf_tr.divisors, &snf.divisors);
        if rows >= 2 {
            let (i, j) = (pick.0 % rows, pick.1 % rows);
            let mut swapped = dense.clone();
            swapped.swap(i, j);
            let snf_sw = smith_normal_form(&IntMatrix::from_dense(&swapped));
            prop_assert_eq!(&snf_sw.divisors, &snf.divisors);
            if i != j {
                let mut added = dense.clone();
                for c in 0..cols {
                    added[i][c] += 2 * dense[j][c];
                }
                let snf_ro = smith_normal_form(&IntMatrix::from_dense(&added));
                prop_assert_eq!(&snf_ro.divisors, &snf.divisors);
            }
        }

        // abelian invariants and modular rank agree with the divisors
        let inv = abelian_invariants_of_matrix(&m);
        prop_assert_eq!(inv.free_rank, cols - snf.rank);
        let torsion: Vec<BigInt> =
            snf.divisors.iter().filter(|d| !d.is_one()).cloned().collect();
        prop_assert_eq!(&inv.torsion, &torsion);
        // entries are small enough that no minor can vanish mod this prime
        prop_assert_eq!(rank_mod_prime(&m, 2_147_483_647), snf.rank);
    }
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn stabilizer_chain_order_matches_closure(
        (degree, raw) in (1usize..=8).prop_flat_map(|d| {
            let shuffle = Just((0..d as u32).collect::<Vec<u32>>()).prop_shuffle();
            proptest::collection::vec(shuffle, 1..=3).prop_map(move |gs| (d, gs))
        })
    ) {
        let gens: Vec<Permutation> = raw
            .iter()
            .map(|im| Permutation::from_images(im.clone()).unwrap())
            .collect();
        let g = PermGroup::new(degree, gens).unwrap();
        let closure = close(&raw, degree);
        prop_assert_eq!(g.order(), closure.len() as u64);

        let elems: BTreeSet<Elem> = g
            .elements(closure.len() as u64)
            .unwrap()
            .iter()
            .map(|x| x.images().to_vec())
            .collect();
        prop_assert_eq!(&elems, &closure);

        let step = if closure.len() > 5000 { 17 } else { 1 };
        for x in closure.iter().step_by(step) {
            prop_assert!(g.contains(&Permutation::from_images(x.clone()).unwrap()));
        }
        if (closure.len() as u64) < factorial(degree) {
            // a proper subgroup misses some adjacent transposition
            let missing = (0..degree - 1)
                .find_map(|i| {
                    let mut im: Elem = (0..degree as u32).collect();
                    im.swap(i, i + 1);
                    if closure.contains(&im) { None } else { Some(im) }
                })
                .unwrap();
            prop_assert!(!g.contains(&Permutation::from_images(missing).unwrap()));
        }
    }
}

#[test]
fn search_positive_witnesses_reverify() {
    let budget = SearchBudget { max_nodes: 500_000, ..Default::default() };
    let s4 = pres(&["a", "b"], &[&[1, 1], &[2, 2, 2], &[1, 2, 1, 2, 1, 2, 1, 2]]);
    let q8 = pres(&["a", "b"], &[&[1, 1, 1, 1], &[1, 1, -2, -2], &[-2, 1, 2, 1]]);
    let d4 = pres(&["a", "b"], &[&[1, 1, 1, 1], &[2, 2], &[1, 2, 1, 2]]);
    let z4 = pres(&["a"], &[&[1, 1, 1, 1]]);
    let z5 = pres(&["a"], &[&[1, 1, 1, 1, 1]]);
    let z12 = pres(&["a"], &[&[1; 12]]);

    let s4_perm = symmetric_group(4);
    match epimorphism_search(&s4, &s4_perm, &budget).unwrap() {
        SearchOutcome::Found(w) => {
            assert!(verify_epimorphism(&s4, &w.images, &s4_perm));
            assert_eq!(w.image_order, 24);
        }
        SearchOutcome::NoneExhaustive { .. } => panic!("presented group maps onto itself"),
    }
    let s3_perm = symmetric_group(3);
    match epimorphism_search(&s4, &s3_perm, &budget).unwrap() {
        SearchOutcome::Found(w) => assert!(verify_epimorphism(&s4, &w.images, &s3_perm)),
        SearchOutcome::NoneExhaustive { .. } => panic!("sign-times-triple map exists"),
    }
    assert!(matches!(
        epimorphism_search(&s4, &alternating_group(4), &budget).unwrap(),
        SearchOutcome::NoneExhaustive { .. }
    ));
    assert!(matches!(
        epimorphism_search(&z12, &cyclic_group(5), &budget).unwrap(),
        SearchOutcome::NoneExhaustive { .. }
    ));

    match monomorphism_exists(&z4, 4, &[4], &s4_perm, &budget).unwrap() {
        SearchOutcome::Found(w) => assert!(verify_monomorphism(&z4, 4, &w.images, &s4_perm)),
        SearchOutcome::NoneExhaustive { .. } => panic!("a 4-cycle embeds"),
    }
    match monomorphism_exists(&d4, 8, &[4, 2], &s4_perm, &budget).unwrap() {
        SearchOutcome::Found(w) => assert!(verify_monomorphism(&d4, 8, &w.images, &s4_perm)),
        SearchOutcome::NoneExhaustive { .. } => panic!("dihedral of order 8 embeds"),
    }
    assert!(matches!(
        monomorphism_exists(&z5, 5, &[5], &s4_perm, &budget).unwrap(),
        SearchOutcome::NoneExhaustive { .. }
    ));
    assert!(matches!(
        monomorphism_exists(&q8, 8, &[4, 4], &s4_perm, &budget).unwrap(),
        SearchOutcome::NoneExhaustive { .. }
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn random_quotient_search_results_are_sound((p, _) in small_quotient()) {
        let budget = SearchBudget { max_nodes: 500_000, ..Default::default() };
        let full = try_enumerate(&p, &[], TcStrategy::Felsch, None);
        prop_assume!(full.is_some());
        let full = full.unwrap();
        let order = full.table.n() as u64;
        for target in [symmetric_group(3), alternating_group(4), cyclic_group(5)] {
            let outcome = epimorphism_search(&p, &target, &budget).unwrap();
            match &outcome {
                SearchOutcome::Found(w) => {
                    prop_assert!(verify_epimorphism(&p, &w.images, &target));
                    prop_assert_eq!(w.image_order, target.order());
                    prop_assert_eq!(order % target.order(), 0);
                }
                SearchOutcome::NoneExhaustive { .. } => {}
            }
            if !order.is_multiple_of(target.order()) {
                let none = matches!(outcome, SearchOutcome::NoneExhaustive { .. });
                prop_assert!(none);
            }
        }

        // the tautological quotient onto its own coset image is always found
        let reg = full.table.to_perm_group();
        match epimorphism_search(&p, &reg, &budget).unwrap() {
            SearchOutcome::Found(w) => prop_assert!(verify_epimorphism(&p, &w.images, &reg)),
            SearchOutcome::NoneExhaustive { .. } => {
                prop_assert!(false, "group must map onto its own regular image")
            }
        }
    }
}
