//! Signed permutation groups of rank n and their determinant-one and
//! central-quotient variants.
//!
//! The full group acts on 2n points: 0..n are the coordinates with positive
//! sign, n..2n the same coordinates negated. The determinant of a signed
//! permutation is the sign of the underlying permutation times (-1)^flips.

use super::{PermError, PermGroup, Permutation};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeylVariant {
    /// All signed permutations, order 2^n n!.
    Full,
    /// Determinant one, order 2^(n-1) n!.
    Det1,
    /// Determinant one modulo the central -1, order 2^(n-2) n!.
    /// Requires even n (otherwise -1 has determinant -1). Acts faithfully
    /// on antipodal pairs of sign frames, degree 2^(n-1).
    Det1ModCenter,
}

pub fn build_weyl(n: usize, variant: WeylVariant) -> Result<PermGroup, PermError> {
    assert!((1..=16).contains(&n), "rank out of range");
    let fact: u64 = (1..=n as u64).product();
    match variant {
        WeylVariant::Full => {
            let g = PermGroup::new(2 * n, full_gens(n))?;
            assert_eq!(g.order(), (1u64 << n) * fact);
            Ok(g)
        }
        WeylVariant::Det1 => {
            let gens = det1_gens(n);
            debug_assert!(gens.iter().all(|g| signed_det(g, n) == 1));
            let g = PermGroup::new(2 * n, gens)?;
            assert_eq!(g.order(), (1u64 << (n - 1)) * fact.max(1));
            Ok(g)
        }
        WeylVariant::Det1ModCenter => {
            if !n.is_multiple_of(2) {
                return Err(PermError::OddRank);
            }
            let gens: Vec<Permutation> =
                det1_gens(n).iter().map(|g| frame_pair_action(g, n)).collect();
            let q = PermGroup::new(1 << (n - 1), gens)?;
            assert_eq!(q.order(), (1u64 << (n - 2)) * fact);
            // the central -1 dies
            let minus_one = {
                let img: Vec<u32> = (0..2 * n as u32)
                    .map(|p| (p + n as u32) % (2 * n as u32))
                    .collect();
                Permutation::from_images(img).unwrap()
            };
            assert!(frame_pair_action(&minus_one, n).is_identity());
            Ok(q)
        }
    }
}

// swap of the first two coordinates
fn perm_p(n: usize) -> Permutation {
    let mut img: Vec<u32> = (0..2 * n as u32).collect();
    if n >= 2 {
        img.swap(0, 1);
        img.swap(n, n + 1);
    }
    Permutation::from_images(img).unwrap()
}

// cycle of all n coordinates
fn perm_q(n: usize) -> Permutation {
    let img: Vec<u32> = (0..2 * n as u32)
        .map(|p| {
            let axis = p as usize % n;
            let neg = p as usize >= n;
            (((axis + 1) % n) + if neg { n } else { 0 }) as u32
        })
        .collect();
    Permutation::from_images(img).unwrap()
}

// sign flip of the first coordinate
fn perm_o(n: usize) -> Permutation {
    let mut img: Vec<u32> = (0..2 * n as u32).collect();
    img.swap(0, n);
    Permutation::from_images(img).unwrap()
}

fn full_gens(n: usize) -> Vec<Permutation> {
    let mut gens = vec![perm_o(n)];
    if n >= 2 {
        gens.push(perm_p(n));
        gens.push(perm_q(n));
    }
    gens
}

// Generators of the determinant-one subgroup: the image in S_n is still all
// of S_n, and conjugates of the double flip give every even sign vector.
fn det1_gens(n: usize) -> Vec<Permutation> {
    if n == 1 {
        return Vec::new();
    }
    let (p, q, o) = (perm_p(n), perm_q(n), perm_o(n));
    let mut gens = vec![p.compose(&o)];
    if n.is_multiple_of(2) {
        gens.push(q.compose(&o));
    } else {
        gens.push(q);
    }
    let double_flip = {
        let mut img: Vec<u32> = (0..2 * n as u32).collect();
        img.swap(0, n);
        img.swap(1, n + 1);
        Permutation::from_images(img).unwrap()
    };
    gens.push(double_flip);
    gens
}

pub(crate) fn signed_det(g: &Permutation, n: usize) -> i32 {
    let underlying: Vec<u32> = (0..n as u32).map(|i| g.apply(i) % n as u32).collect();
    let sigma = Permutation::from_images(underlying).expect("not a signed permutation");
    let flips = (0..n as u32).filter(|&i| g.apply(i) >= n as u32).count();
    let sgn = if sigma.is_even() { 1 } else { -1 };
    if flips % 2 == 0 {
        sgn
    } else {
        -sgn
    }
}

// Induced action on antipodal pairs of sign frames. A frame picks one point
// per coordinate axis; frames are bitmasks over 0..n, bit i set meaning the
// negative point of axis i. Classes pair each frame with its complement.
fn frame_pair_action(g: &Permutation, n: usize) -> Permutation {
    let full: u32 = (1 << n) - 1;
    let canon = |u: u32| u.min(u ^ full);
    let classes: Vec<u32> = (0..1u32 << n).filter(|&u| canon(u) == u).collect();
    let index = |u: u32| classes.binary_search(&canon(u)).unwrap() as u32;
    let img: Vec<u32> = classes
        .iter()
        .map(|&u| {
            let mut out = 0u32;
            for i in 0..n {
                let point = if u >> i & 1 == 1 { i + n } else { i } as u32;
                let t = g.apply(point);
                if t >= n as u32 {
                    out |= 1 << (t as usize - n);
                }
            }
            index(out)
        })
        .collect();
    Permutation::from_images(img).expect("frame action not bijective")
}
