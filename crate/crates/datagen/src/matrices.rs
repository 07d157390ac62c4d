//! Small matrices over finite fields: the linear-image checks for the
//! four-generator presentations and the two constructed permutation actions
//! shipped under data/atlas.
//!
//! Vectors are rows and matrices act on the right, so a word of generators
//! evaluates to the matrix product in letter order, matching word evaluation
//! everywhere else in this crate.

use fpx_core::gf::Gf;
use fpx_core::permgroup::{PermGroup, Permutation};
use fpx_core::words::{Presentation, Word};
use std::collections::HashMap;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat {
    pub n: usize,
    pub a: Vec<u32>,
}

impl Mat {
    pub fn identity(n: usize) -> Mat {
        let mut a = vec![0; n * n];
        for i in 0..n {
            a[i * n + i] = 1;
        }
        Mat { n, a }
    }

    pub fn from_rows(f: &Gf, rows: &[Vec<i64>]) -> Mat {
        let n = rows.len();
        let mut a = Vec::with_capacity(n * n);
        for r in rows {
            assert_eq!(r.len(), n);
            for &e in r {
                a.push(f.from_int(e));
            }
        }
        Mat { n, a }
    }

    pub fn at(&self, i: usize, j: usize) -> u32 {
        self.a[i * self.n + j]
    }
}

pub fn mat_mul(f: &Gf, x: &Mat, y: &Mat) -> Mat {
    let n = x.n;
    assert_eq!(n, y.n);
    let mut a = vec![0u32; n * n];
    for i in 0..n {
        for k in 0..n {
            let xik = x.at(i, k);
            if xik == 0 {
                continue;
            }
            for j in 0..n {
                a[i * n + j] = f.add(a[i * n + j], f.mul(xik, y.at(k, j)));
            }
        }
    }
    Mat { n, a }
}

pub fn mat_det(f: &Gf, m: &Mat) -> u32 {
    let n = m.n;
    let mut a = m.a.clone();
    let mut det = 1u32;
    for col in 0..n {
        let piv = (col..n).find(|&r| a[r * n + col] != 0);
        let Some(piv) = piv else {
            return 0;
        };
        if piv != col {
            for j in 0..n {
                a.swap(col * n + j, piv * n + j);
            }
            det = f.neg(det);
        }
        let d = a[col * n + col];
        det = f.mul(det, d);
        let dinv = f.invert(d);
        for r in col + 1..n {
            let factor = f.mul(a[r * n + col], dinv);
            if factor == 0 {
                continue;
            }
            for j in col..n {
                let t = f.mul(factor, a[col * n + j]);
                a[r * n + j] = f.sub(a[r * n + j], t);
            }
        }
    }
    det
}

pub fn mat_inv(f: &Gf, m: &Mat) -> Mat {
    let n = m.n;
    let mut a = m.a.clone();
    let mut inv = Mat::identity(n).a;
    for col in 0..n {
        let piv = (col..n)
            .find(|&r| a[r * n + col] != 0)
            .expect("singular matrix");
        if piv != col {
            for j in 0..n {
                a.swap(col * n + j, piv * n + j);
                inv.swap(col * n + j, piv * n + j);
            }
        }
        let dinv = f.invert(a[col * n + col]);
        for j in 0..n {
            a[col * n + j] = f.mul(a[col * n + j], dinv);
            inv[col * n + j] = f.mul(inv[col * n + j], dinv);
        }
        for r in 0..n {
            if r == col || a[r * n + col] == 0 {
                continue;
            }
            let factor = a[r * n + col];
            for j in 0..n {
                let t = f.mul(factor, a[col * n + j]);
                a[r * n + j] = f.sub(a[r * n + j], t);
                let t = f.mul(factor, inv[col * n + j]);
                inv[r * n + j] = f.sub(inv[r * n + j], t);
            }
        }
    }
    Mat { n, a: inv }
}

/// Conjugate transpose for a quadratic extension: entrywise Frobenius, then
/// transpose.
pub fn conj_transpose(f: &Gf, m: &Mat) -> Mat {
    assert_eq!(f.k(), 2);
    let n = m.n;
    let mut a = vec![0u32; n * n];
    for i in 0..n {
        for j in 0..n {
            a[j * n + i] = f.frobenius(m.at(i, j));
        }
    }
    Mat { n, a }
}

fn row_times_mat(f: &Gf, v: &[u32], m: &Mat) -> Vec<u32> {
    let n = m.n;
    let mut out = vec![0u32; n];
    for (i, &vi) in v.iter().enumerate() {
        if vi == 0 {
            continue;
        }
        for (j, o) in out.iter_mut().enumerate() {
            *o = f.add(*o, f.mul(vi, m.at(i, j)));
        }
    }
    out
}

fn all_nonzero_vectors(f: &Gf, n: usize) -> Vec<Vec<u32>> {
    let q = f.q() as u64;
    let total = q.pow(n as u32);
    let mut out = Vec::with_capacity(total as usize - 1);
    for code in 1..total {
        let mut v = Vec::with_capacity(n);
        let mut c = code;
        for _ in 0..n {
            v.push((c % q) as u32);
            c /= q;
        }
        out.push(v);
    }
    out
}

fn normalize_projective(f: &Gf, v: &[u32]) -> Vec<u32> {
    let lead = v.iter().copied().find(|&c| c != 0).expect("zero vector");
    let s = f.invert(lead);
    v.iter().map(|&c| f.mul(c, s)).collect()
}

/// Projective points of the row space, first-seen enumeration order.
pub fn projective_points(f: &Gf, n: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut seen = HashMap::new();
    for v in all_nonzero_vectors(f, n) {
        let p = normalize_projective(f, &v);
        if seen.insert(p.clone(), ()).is_none() {
            out.push(p);
        }
    }
    out
}

/// Permutation of the listed points induced by v -> v*M (with projective
/// renormalization when the points are normalized representatives).
pub fn action_perm(f: &Gf, m: &Mat, pts: &[Vec<u32>], projective: bool) -> Permutation {
    let index: HashMap<&[u32], usize> = pts
        .iter()
        .enumerate()
        .map(|(i, p)| (p.as_slice(), i))
        .collect();
    let img = pts
        .iter()
        .map(|p| {
            let mut w = row_times_mat(f, p, m);
            if projective {
                w = normalize_projective(f, &w);
            }
            index[w.as_slice()] as u32
        })
        .collect();
    Permutation::from_images(img).expect("matrix action is a bijection on the points")
}

/// Images of P, Q, O, U in the general linear group over a prime field, as
/// (generators, inverses): permutation matrices, a sign flip and a
/// transvection.
pub fn pqou_matrices(f: &Gf, n: usize) -> (Vec<Mat>, Vec<Mat>) {
    assert_eq!(f.k(), 1);
    let mut p = Mat::identity(n).a;
    p.swap(0, 1);
    p.swap(n, n + 1);
    let p = Mat { n, a: p };
    let mut q = Mat { n, a: vec![0; n * n] };
    for i in 0..n {
        q.a[i * n + (i + 1) % n] = 1;
    }
    let mut o = Mat::identity(n);
    o.a[0] = f.neg(1);
    let mut u = Mat::identity(n);
    u.a[1] = 1;
    let mut ui = Mat::identity(n);
    ui.a[1] = f.neg(1);
    let qi = mat_inv(f, &q);
    let gens = vec![p.clone(), q, o.clone(), u];
    let invs = vec![p, qi, o, ui];
    (gens, invs)
}

pub fn eval_mat_word(f: &Gf, w: &Word, gens: &[Mat], invs: &[Mat]) -> Mat {
    let n = gens[0].n;
    let mut acc = Mat::identity(n);
    for &l in w {
        let m = if l > 0 {
            &gens[(l - 1) as usize]
        } else {
            &invs[(-l - 1) as usize]
        };
        acc = mat_mul(f, &acc, m);
    }
    acc
}

/// Check that every relator of a four-generator presentation maps to the
/// identity matrix over Z_prime, and return the order of the linear group
/// its generators produce (faithfully, on nonzero vectors).
pub fn linear_image_order(p: &Presentation, rank: usize, prime: u32) -> u64 {
    assert_eq!(p.gens, vec!["P", "Q", "O", "U"]);
    let words: Vec<Word> = (1..=4).map(|l| vec![l]).collect();
    expressed_image_order(p, &words, rank, prime)
}

/// Like `linear_image_order`, but each generator of `p` is the given word
/// in P,Q,O,U rather than a P,Q,O,U letter itself.
pub fn expressed_image_order(p: &Presentation, words: &[Word], rank: usize, prime: u32) -> u64 {
    assert_eq!(p.gens.len(), words.len());
    let f = Gf::new(prime).unwrap();
    let (g4, i4) = pqou_matrices(&f, rank);
    let gens: Vec<Mat> = words.iter().map(|w| eval_mat_word(&f, w, &g4, &i4)).collect();
    let invs: Vec<Mat> = gens.iter().map(|m| mat_inv(&f, m)).collect();
    for r in &p.relators {
        assert_eq!(
            eval_mat_word(&f, r, &gens, &invs),
            Mat::identity(rank),
            "relator image is not the identity matrix"
        );
    }
    let pts = all_nonzero_vectors(&f, rank);
    let perms: Vec<Permutation> = gens
        .iter()
        .map(|m| action_perm(&f, m, &pts, false))
        .collect();
    PermGroup::new(pts.len(), perms).unwrap().order()
}

/// |GL_n(q)| for the gate assertions.
pub fn gl_order(n: usize, q: u64) -> u64 {
    let qn = q.pow(n as u32);
    (0..n as u32).map(|i| qn - q.pow(i)).product()
}

/// Degree-21 permutation action of the 3x3 special linear group over the
/// four-element field on projective points. Generators: a transvection, a
/// basis 3-cycle and a determinant-one diagonal.
pub fn l3_4_group() -> (usize, Vec<Permutation>) {
    let f = Gf::new(4).unwrap();
    let x = f.x();
    let x2 = f.mul(x, x);
    let a = Mat::from_rows(&f, &[vec![1, 1, 0], vec![0, 1, 0], vec![0, 0, 1]]);
    let c = Mat::from_rows(&f, &[vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]]);
    let d = Mat {
        n: 3,
        a: vec![x, 0, 0, 0, x2, 0, 0, 0, 1],
    };
    let gens_m = vec![a, c, d];
    for m in &gens_m {
        assert_eq!(mat_det(&f, m), 1);
    }
    let pts = projective_points(&f, 3);
    assert_eq!(pts.len(), 21);
    let perms = gens_m
        .iter()
        .map(|m| action_perm(&f, m, &pts, true))
        .collect();
    (21, perms)
}

fn hermitian_form_matrix(f: &Gf) -> Mat {
    Mat::from_rows(f, &[vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]])
}

fn is_unitary(f: &Gf, m: &Mat, j: &Mat) -> bool {
    mat_mul(f, &mat_mul(f, m, j), &conj_transpose(f, m)) == *j
}

/// Degree-28 permutation action of the 3x3 special unitary group over the
/// nine-element field on the isotropic projective points of the antidiagonal
/// Hermitian form. Generators: three unipotent root elements, a torus
/// element from a multiplicative generator, and a form-preserving
/// antidiagonal involution.
pub fn u3_3_group() -> (usize, Vec<Permutation>) {
    let f = Gf::new(9).unwrap();
    let j = hermitian_form_matrix(&f);

    // full upper unitriangular root subgroup, in code order
    let mut root = Vec::new();
    for b in 0..9 {
        for t in 0..9 {
            for c in 0..9 {
                let m = Mat {
                    n: 3,
                    a: vec![1, b, c, 0, 1, t, 0, 0, 1],
                };
                if is_unitary(&f, &m, &j) {
                    root.push(m);
                }
            }
        }
    }
    assert_eq!(root.len(), 27);

    let in_prime_span = |b: u32, b0: u32| b == 0 || b == b0 || b == f.add(b0, b0);
    let g1 = root
        .iter()
        .find(|m| m.at(0, 1) != 0)
        .expect("root element with nonzero shear")
        .clone();
    let b0 = g1.at(0, 1);
    let g2 = root
        .iter()
        .find(|m| !in_prime_span(m.at(0, 1), b0))
        .expect("independent shear")
        .clone();
    let g3 = root
        .iter()
        .find(|m| m.at(0, 1) == 0 && m.at(0, 2) != 0)
        .expect("central root element")
        .clone();

    let prim = (2..9)
        .find(|&a| {
            let mut v = a;
            let mut ord = 1;
            while v != 1 {
                v = f.mul(v, a);
                ord += 1;
            }
            ord == 8
        })
        .expect("primitive element");
    let d = Mat {
        n: 3,
        a: vec![
            prim,
            0,
            0,
            0,
            f.pow(prim, 2),
            0,
            0,
            0,
            f.pow(prim, 5),
        ],
    };
    let w = Mat::from_rows(&f, &[vec![0, 0, 1], vec![0, -1, 0], vec![1, 0, 0]]);

    let gens_m = vec![g1, g2, g3, d, w];
    for m in &gens_m {
        assert!(is_unitary(&f, m, &j));
        assert_eq!(mat_det(&f, m), 1);
    }

    let pts: Vec<Vec<u32>> = projective_points(&f, 3)
        .into_iter()
        .filter(|p| {
            let jp = row_times_mat(&f, p, &j);
            let mut val = 0;
            for (a, b) in jp.iter().zip(p) {
                val = f.add(val, f.mul(*a, f.frobenius(*b)));
            }
            val == 0
        })
        .collect();
    assert_eq!(pts.len(), 28);

    let perms = gens_m
        .iter()
        .map(|m| action_perm(&f, m, &pts, true))
        .collect();
    (28, perms)
}
