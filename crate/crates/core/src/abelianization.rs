//! Integer matrices, Smith normal form and abelian invariants.
//!
//! Matrices are stored as sorted sparse triplets and support streaming row
//! intake, so relator rewriting can feed exponent vectors without holding
//! words in memory. Elimination runs in two phases: a sparse sweep over
//! unit pivots chosen by Markowitz cost (which settles almost everything for
//! relator matrices), then a dense textbook reduction of whatever remains.
//! All arithmetic is exact; entries are arbitrary-precision.

use crate::words::{Presentation, Word};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, HashSet};
use std::io::{BufRead, Write};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MatrixError {
    #[error("entry ({0}, {1}) out of bounds for {2}x{3} matrix")]
    OutOfBounds(usize, usize, usize, usize),
    #[error("bad matrix text: {0}")]
    BadText(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

/// Sparse integer matrix in triplet form, sorted by (row, col), no zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    entries: Vec<(u32, u32, BigInt)>,
}

impl IntMatrix {
    pub fn new(cols: usize) -> Self {
        IntMatrix {
            rows: 0,
            cols,
            entries: Vec::new(),
        }
    }

    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, BigInt)>,
    ) -> Result<Self, MatrixError> {
        let mut map: BTreeMap<(u32, u32), BigInt> = BTreeMap::new();
        for (r, c, v) in triplets {
            if r >= rows || c >= cols {
                return Err(MatrixError::OutOfBounds(r, c, rows, cols));
            }
            let e = map.entry((r as u32, c as u32)).or_insert_with(BigInt::zero);
            *e += v;
        }
        Ok(IntMatrix {
            rows,
            cols,
            entries: map
                .into_iter()
                .filter(|(_, v)| !v.is_zero())
                .map(|((r, c), v)| (r, c, v))
                .collect(),
        })
    }

    pub fn from_dense(data: &[Vec<i64>]) -> Self {
        let rows = data.len();
        let cols = data.first().map_or(0, Vec::len);
        let entries = data
            .iter()
            .enumerate()
            .flat_map(|(r, row)| {
                row.iter()
                    .enumerate()
                    .filter(|(_, &v)| v != 0)
                    .map(move |(c, &v)| (r as u32, c as u32, BigInt::from(v)))
            })
            .collect();
        IntMatrix {
            rows,
            cols,
            entries,
        }
    }

    /// Append one row given as (col, value) pairs; values for a repeated
    /// column are summed.
    pub fn push_row(&mut self, row: impl IntoIterator<Item = (usize, BigInt)>) {
        let r = self.rows as u32;
        let mut map: BTreeMap<u32, BigInt> = BTreeMap::new();
        for (c, v) in row {
            assert!(c < self.cols, "column {} out of bounds", c);
            *map.entry(c as u32).or_insert_with(BigInt::zero) += v;
        }
        self.entries.extend(
            map.into_iter()
                .filter(|(_, v)| !v.is_zero())
                .map(|(c, v)| (r, c, v)),
        );
        self.rows += 1;
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(u32, u32, BigInt)] {
        &self.entries
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut out = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (r, c, v) in &self.entries {
            out[*r as usize][*c as usize] = v.clone();
        }
        out
    }

    /// Text form: `rows cols nnz` header, then one `r c v` line per entry,
    /// 0-based, sorted by (row, col).
    pub fn write_text(&self, w: &mut impl Write) -> Result<(), MatrixError> {
        writeln!(w, "{} {} {}", self.rows, self.cols, self.entries.len())?;
        for (r, c, v) in &self.entries {
            writeln!(w, "{} {} {}", r, c, v)?;
        }
        Ok(())
    }

    pub fn read_text(r: &mut impl BufRead) -> Result<Self, MatrixError> {
        let mut header = String::new();
        r.read_line(&mut header)?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(MatrixError::BadText("expected 'rows cols nnz' header".into()));
        }
        let bad = |s: &str| MatrixError::BadText(format!("bad number {:?}", s));
        let rows: usize = parts[0].parse().map_err(|_| bad(parts[0]))?;
        let cols: usize = parts[1].parse().map_err(|_| bad(parts[1]))?;
        let nnz: usize = parts[2].parse().map_err(|_| bad(parts[2]))?;
        let mut triplets = Vec::with_capacity(nnz);
        for _ in 0..nnz {
            let mut line = String::new();
            if r.read_line(&mut line)? == 0 {
                return Err(MatrixError::BadText("truncated entry list".into()));
            }
            let p: Vec<&str> = line.split_whitespace().collect();
            if p.len() != 3 {
                return Err(MatrixError::BadText(format!("bad entry line {:?}", line.trim())));
            }
            let rr: usize = p[0].parse().map_err(|_| bad(p[0]))?;
            let cc: usize = p[1].parse().map_err(|_| bad(p[1]))?;
            let v: BigInt = p[2].parse().map_err(|_| bad(p[2]))?;
            triplets.push((rr, cc, v));
        }
        IntMatrix::from_triplets(rows, cols, triplets)
    }
}

/// Exponent-sum matrix of a presentation: one row per relator, one column
/// per generator. A presentation with no relators gives a 0 x n matrix.
pub fn relator_exponent_matrix(p: &Presentation) -> IntMatrix {
    let mut m = IntMatrix::new(p.rank());
    for r in &p.relators {
        m.push_row(exponent_row(r));
    }
    m
}

fn exponent_row(w: &Word) -> Vec<(usize, BigInt)> {
    let mut sums: BTreeMap<usize, i64> = BTreeMap::new();
    for &l in w {
        *sums.entry((l.unsigned_abs() as usize) - 1).or_insert(0) += l.signum() as i64;
    }
    sums.into_iter()
        .map(|(c, v)| (c, BigInt::from(v)))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    /// Nonzero diagonal entries d1 | d2 | ..., all positive.
    pub divisors: Vec<BigInt>,
    pub rank: usize,
}

pub fn smith_normal_form(m: &IntMatrix) -> SnfResult {
    let mut elim = SparseElim::new(m);
    let ones = elim.unit_sweep();
    let rest = elim.remainder_dense();
    let mut divisors: Vec<BigInt> = vec![BigInt::one(); ones];
    divisors.extend(dense_snf(rest));
    enforce_chain(&mut divisors);
    let rank = divisors.len();
    SnfResult { divisors, rank }
}

/// Invariant factors of the abelianized group: torsion orders > 1 plus the
/// free rank (generators minus matrix rank).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianInvariants {
    pub torsion: Vec<BigInt>,
    pub free_rank: usize,
}

pub fn abelian_invariants(p: &Presentation) -> AbelianInvariants {
    let m = relator_exponent_matrix(p);
    abelian_invariants_of_matrix(&m)
}

pub fn abelian_invariants_of_matrix(m: &IntMatrix) -> AbelianInvariants {
    let snf = smith_normal_form(m);
    AbelianInvariants {
        torsion: snf
            .divisors
            .iter()
            .filter(|d| !d.is_one())
            .cloned()
            .collect(),
        free_rank: m.cols - snf.rank,
    }
}

/// Rank of the matrix over the field Z/p. Always a lower bound for the
/// rational rank, with equality for all but finitely many primes.
pub fn rank_mod_prime(m: &IntMatrix, p: u64) -> usize {
    assert!(p > 1 && p < (1u64 << 31), "prime out of range");
    // Incremental echelon form; rows held sparse and sorted by column.
    let mut rows: BTreeMap<u32, Vec<(u32, u64)>> = BTreeMap::new();
    let mut by_row: BTreeMap<u32, Vec<(u32, u64)>> = BTreeMap::new();
    for (r, c, v) in &m.entries {
        let vm = v.mod_floor(&BigInt::from(p));
        let vm: u64 = vm.try_into().unwrap();
        if vm != 0 {
            by_row.entry(*r).or_default().push((*c, vm));
        }
    }
    let mut rank = 0;
    for (_, mut row) in by_row {
        while let Some(&(lead, coef)) = row.first() {
            match rows.get(&lead) {
                None => {
                    let inv = mod_inv(coef, p);
                    for e in row.iter_mut() {
                        e.1 = mulmod(e.1, inv, p);
                    }
                    rows.insert(lead, row);
                    rank += 1;
                    break;
                }
                Some(basis) => {
                    row = row_sub(&row, basis, coef, p);
                }
            }
        }
    }
    rank
}

/// Fixed word-size primes for rank prechecks.
pub const RANK_CHECK_PRIMES: [u64; 3] = [2147483647, 2147483629, 2147483587];

/// Best modular lower bound for the rational rank over the fixed primes.
pub fn rank_precheck(m: &IntMatrix) -> usize {
    RANK_CHECK_PRIMES
        .iter()
        .map(|&p| rank_mod_prime(m, p))
        .max()
        .unwrap_or(0)
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn mod_inv(a: u64, p: u64) -> u64 {
    // p prime, a != 0 mod p
    let mut exp = p - 2;
    let mut base = a % p;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, p);
        }
        base = mulmod(base, base, p);
        exp >>= 1;
    }
    acc
}

// row - coef * basis (mod p); both sorted by column, basis has leading 1.
fn row_sub(row: &[(u32, u64)], basis: &[(u32, u64)], coef: u64, p: u64) -> Vec<(u32, u64)> {
    let mut out = Vec::with_capacity(row.len() + basis.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < basis.len() {
        if j == basis.len() || (i < row.len() && row[i].0 < basis[j].0) {
            out.push(row[i]);
            i += 1;
        } else if i == row.len() || basis[j].0 < row[i].0 {
            let v = (p - mulmod(coef, basis[j].1, p)) % p;
            if v != 0 {
                out.push((basis[j].0, v));
            }
            j += 1;
        } else {
            let v = (row[i].1 + p - mulmod(coef, basis[j].1, p)) % p;
            if v != 0 {
                out.push((row[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

// Sparse unit-pivot elimination. A pivot of value +-1 lets the column be
// cleared by row operations alone; the pivot row's remaining entries then
// die to column operations that touch no other row, so deleting the row and
// column is exact.
struct SparseElim {
    rows: Vec<Option<BTreeMap<u32, BigInt>>>,
    col_rows: Vec<HashSet<u32>>,
    unit_queue: Vec<(u32, u32)>,
}

impl SparseElim {
    fn new(m: &IntMatrix) -> Self {
        let mut rows: Vec<Option<BTreeMap<u32, BigInt>>> = vec![Some(BTreeMap::new()); m.rows];
        let mut col_rows: Vec<HashSet<u32>> = vec![HashSet::new(); m.cols];
        let mut unit_queue = Vec::new();
        for (r, c, v) in &m.entries {
            rows[*r as usize].as_mut().unwrap().insert(*c, v.clone());
            col_rows[*c as usize].insert(*r);
            if v.magnitude().is_one() {
                unit_queue.push((*r, *c));
            }
        }
        SparseElim {
            rows,
            col_rows,
            unit_queue,
        }
    }

    fn unit_sweep(&mut self) -> usize {
        let mut eliminated = 0;
        while let Some((r, c)) = self.pop_best_unit() {
            self.eliminate(r, c);
            eliminated += 1;
        }
        eliminated
    }

    // Lowest Markowitz cost among still-valid queued unit entries.
    fn pop_best_unit(&mut self) -> Option<(u32, u32)> {
        let mut best: Option<(usize, usize, u32, u32)> = None;
        self.unit_queue.retain(|&(r, c)| {
            match &self.rows[r as usize] {
                Some(row) => row.get(&c).is_some_and(|v| v.magnitude().is_one()),
                None => false,
            }
        });
        for &(r, c) in &self.unit_queue {
            let rl = self.rows[r as usize].as_ref().unwrap().len();
            let cl = self.col_rows[c as usize].len();
            let cand = ((rl - 1) * (cl - 1), rl, r, c);
            if best.is_none_or(|b| (cand.0, cand.1) < (b.0, b.1)) {
                best = Some(cand);
            }
        }
        best.map(|(_, _, r, c)| (r, c))
    }

    fn eliminate(&mut self, r: u32, c: u32) {
        let pivot_row = self.rows[r as usize].take().unwrap();
        for &cc in pivot_row.keys() {
            self.col_rows[cc as usize].remove(&r);
        }
        let pv = pivot_row.get(&c).unwrap().clone();
        debug_assert!(pv.magnitude().is_one());
        let victims: Vec<u32> = self.col_rows[c as usize].iter().copied().collect();
        for r2 in victims {
            let factor = {
                let row2 = self.rows[r2 as usize].as_ref().unwrap();
                row2.get(&c).unwrap() * &pv // pv = +-1, so row2 - factor*pivot zeroes col c
            };
            for (&cc, w) in &pivot_row {
                let row2 = self.rows[r2 as usize].as_mut().unwrap();
                let entry = row2.entry(cc).or_insert_with(BigInt::zero);
                *entry -= &factor * w;
                if entry.is_zero() {
                    row2.remove(&cc);
                    self.col_rows[cc as usize].remove(&r2);
                } else {
                    if entry.magnitude().is_one() {
                        self.unit_queue.push((r2, cc));
                    }
                    self.col_rows[cc as usize].insert(r2);
                }
            }
        }
        self.col_rows[c as usize].clear();
    }

    fn remainder_dense(&self) -> Vec<Vec<BigInt>> {
        let live_cols: Vec<u32> = self
            .col_rows
            .iter()
            .enumerate()
            .filter(|(_, s)| !s.is_empty())
            .map(|(c, _)| c as u32)
            .collect();
        let col_index: BTreeMap<u32, usize> = live_cols
            .iter()
            .enumerate()
            .map(|(i, &c)| (c, i))
            .collect();
        let mut out = Vec::new();
        for row in self.rows.iter().flatten() {
            if row.is_empty() {
                continue;
            }
            let mut dense = vec![BigInt::zero(); live_cols.len()];
            for (&c, v) in row {
                dense[col_index[&c]] = v.clone();
            }
            out.push(dense);
        }
        out
    }
}

// Textbook Smith reduction of a small dense remainder.
fn dense_snf(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut divisors = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // Pick the smallest-magnitude nonzero entry in the trailing block.
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero()
                    && pivot.is_none_or(|(pi, pj)| a[i][j].magnitude() < a[pi][pj].magnitude())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else {
            break;
        };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if !a[i][t].is_zero() {
                    let q = rounded_div(&a[i][t], &a[t][t]);
                    let (top, rest) = a.split_at_mut(t + 1);
                    let pivot = &top[t];
                    for (x, p) in rest[i - t - 1][t..].iter_mut().zip(&pivot[t..]) {
                        *x -= &q * p;
                    }
                    if !a[i][t].is_zero() {
                        a.swap(t, i);
                        dirty = true;
                    }
                }
            }
            for j in t + 1..cols {
                if !a[t][j].is_zero() {
                    let q = rounded_div(&a[t][j], &a[t][t]);
                    for row in a.iter_mut().skip(t) {
                        let sub = &q * &row[t];
                        row[j] -= sub;
                    }
                    if !a[t][j].is_zero() {
                        for row in a.iter_mut() {
                            row.swap(t, j);
                        }
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue;
            }
            // Row and column are clear; force divisibility of the interior.
            let mut fixed = true;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !(&a[i][j] % &a[t][t]).is_zero() {
                        let (top, rest) = a.split_at_mut(t + 1);
                        let extra = &rest[i - t - 1];
                        for (p, x) in top[t][t..].iter_mut().zip(&extra[t..]) {
                            *p += x;
                        }
                        fixed = false;
                        break 'scan;
                    }
                }
            }
            if fixed {
                break;
            }
        }
        divisors.push(a[t][t].abs());
        t += 1;
    }
    divisors
}

fn rounded_div(n: &BigInt, d: &BigInt) -> BigInt {
    // Quotient with remainder of minimal magnitude.
    let (q, r) = n.div_rem(d);
    let two_r: BigInt = &r * 2;
    if two_r.magnitude() > d.magnitude() {
        if (r.is_negative()) == (d.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

fn enforce_chain(d: &mut [BigInt]) {
    d.sort();
    loop {
        let mut changed = false;
        for i in 0..d.len().saturating_sub(1) {
            if !(&d[i + 1] % &d[i]).is_zero() {
                let g = d[i].gcd(&d[i + 1]);
                let l = (&d[i] / &g) * &d[i + 1];
                d[i] = g;
                d[i + 1] = l;
                changed = true;
            }
        }
        if !changed {
            return;
        }
    }
}
