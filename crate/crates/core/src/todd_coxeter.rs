//! Todd-Coxeter coset enumeration.
//!
//! Cosets are numbered from 1; entry 0 means undefined. Columns pair a
//! generator with its inverse: letter l maps to column 2(l-1) and its
//! inverse to 2(l-1)+1. Enumeration either completes with a standardized,
//! validated table or reports overflow; it never returns a wrong table.

use crate::permgroup::{PermGroup, Permutation};
use crate::words::{Letter, Presentation, Word};
use std::io::{Read as IoRead, Write as IoWrite};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TcError {
    #[error("coset limit {max_cosets} exceeded ({defined} cosets defined, {active} active)")]
    Overflow {
        max_cosets: usize,
        active: usize,
        defined: u64,
    },
    #[error("word uses generator {0} outside the presentation")]
    BadWord(Letter),
    #[error("internal table inconsistency: {0}")]
    Internal(String),
    #[error("bad table file: {0}")]
    BadFile(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Hlt,
    Felsch,
}

#[derive(Clone, Copy, Debug)]
pub struct EnumOpts {
    pub strategy: Strategy,
    pub max_cosets: usize,
    /// Test hook: process coincidence queues in a pseudo-random order.
    pub coincidence_shuffle: Option<u64>,
}

impl Default for EnumOpts {
    fn default() -> Self {
        EnumOpts {
            strategy: Strategy::Hlt,
            max_cosets: 10_000_000,
            coincidence_shuffle: None,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EnumStats {
    pub cosets_defined: u64,
    pub coincidences: u64,
    pub max_active: usize,
}

#[derive(Clone, Debug)]
pub struct Enumeration {
    pub table: CosetTable,
    pub stats: EnumStats,
}

/// A complete coset table: every entry defined, mirror-consistent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetTable {
    ngens: usize,
    n: usize,
    // (n + 1) * 2 * ngens entries, row 0 unused
    tab: Vec<u32>,
}

#[inline]
fn col_of(l: Letter) -> usize {
    if l > 0 {
        2 * (l as usize - 1)
    } else {
        2 * ((-l) as usize - 1) + 1
    }
}

impl CosetTable {
    /// Build from a raw table of (n + 1) * 2 * ngens entries (row 0 unused).
    /// Every entry must be defined and mirror-consistent.
    pub fn from_parts(ngens: usize, n: usize, tab: Vec<u32>) -> Result<CosetTable, TcError> {
        let width = 2 * ngens;
        if ngens == 0 {
            return Ok(CosetTable {
                ngens,
                n,
                tab: Vec::new(),
            });
        }
        if tab.len() != (n + 1) * width {
            return Err(TcError::BadFile("table size mismatch".into()));
        }
        let t = CosetTable { ngens, n, tab };
        for c in 1..=n as u32 {
            for col in 0..width {
                let v = t.lookup_col(c, col);
                if v == 0 || v as usize > n || t.lookup_col(v, col ^ 1) != c {
                    return Err(TcError::Internal(format!(
                        "entry ({}, {}) incomplete or mirror-broken",
                        c, col
                    )));
                }
            }
        }
        Ok(t)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ngens(&self) -> usize {
        self.ngens
    }

    #[inline]
    pub fn lookup(&self, coset: u32, l: Letter) -> u32 {
        self.tab[coset as usize * 2 * self.ngens + col_of(l)]
    }

    #[inline]
    pub fn lookup_col(&self, coset: u32, col: usize) -> u32 {
        self.tab[coset as usize * 2 * self.ngens + col]
    }

    pub fn trace(&self, start: u32, w: &Word) -> u32 {
        let mut c = start;
        for &l in w {
            c = self.lookup(c, l);
        }
        c
    }

    /// Renumber cosets in breadth-first order from coset 1, scanning
    /// columns in order. The result is independent of enumeration history.
    pub fn standardize(&mut self) {
        let width = 2 * self.ngens;
        let mut old_of_new = vec![0u32; self.n + 1];
        let mut new_of_old = vec![0u32; self.n + 1];
        old_of_new[1] = 1;
        new_of_old[1] = 1;
        let mut next = 1u32;
        let mut head = 1usize;
        while head <= self.n {
            let old = old_of_new[head];
            for c in 0..width {
                let t = self.tab[old as usize * width + c];
                // skip holes so a defective table fails validate, not here
                if t != 0 && new_of_old[t as usize] == 0 {
                    next += 1;
                    new_of_old[t as usize] = next;
                    old_of_new[next as usize] = t;
                }
            }
            head += 1;
        }
        let mut tab = vec![0u32; (self.n + 1) * width];
        for new in 1..=self.n {
            let old = old_of_new[new];
            for c in 0..width {
                tab[new * width + c] = new_of_old[self.tab[old as usize * width + c] as usize];
            }
        }
        self.tab = tab;
    }

    /// One permutation per generator, acting on 0-based coset numbers.
    pub fn to_perms(&self) -> Vec<Permutation> {
        (0..self.ngens)
            .map(|g| {
                let img: Vec<u32> = (1..=self.n as u32)
                    .map(|c| self.lookup(c, (g + 1) as Letter) - 1)
                    .collect();
                Permutation::from_images(img).expect("complete table column is a permutation")
            })
            .collect()
    }

    pub fn to_perm_group(&self) -> PermGroup {
        PermGroup::new(self.n, self.to_perms()).expect("table perms share a degree")
    }

    pub fn validate(&self, pres: &Presentation, subgroup: &[Word]) -> Result<(), TcError> {
        let width = 2 * self.ngens;
        if self.ngens != pres.rank() {
            return Err(TcError::Internal("generator count mismatch".into()));
        }
        for c in 1..=self.n as u32 {
            for col in 0..width {
                let t = self.lookup_col(c, col);
                if t == 0 || t as usize > self.n {
                    return Err(TcError::Internal(format!("entry ({}, {}) out of range", c, col)));
                }
                if self.lookup_col(t, col ^ 1) != c {
                    return Err(TcError::Internal(format!(
                        "mirror of ({}, {}) broken",
                        c, col
                    )));
                }
            }
            for r in &pres.relators {
                if self.trace(c, r) != c {
                    return Err(TcError::Internal(format!(
                        "relator does not close at coset {}",
                        c
                    )));
                }
            }
        }
        for w in subgroup {
            if self.trace(1, w) != 1 {
                return Err(TcError::Internal("subgroup word moves coset 1".into()));
            }
        }
        Ok(())
    }

    pub fn write_binary<W: IoWrite>(&self, mut w: W) -> Result<(), TcError> {
        w.write_all(b"FPXT1\n")?;
        w.write_all(&(self.ngens as u32).to_le_bytes())?;
        w.write_all(&(self.n as u32).to_le_bytes())?;
        let width = 2 * self.ngens;
        let mut buf = Vec::with_capacity(self.n * width * 4);
        for c in 1..=self.n {
            for col in 0..width {
                buf.extend_from_slice(&self.tab[c * width + col].to_le_bytes());
            }
        }
        w.write_all(&buf)?;
        Ok(())
    }

    pub fn read_binary<R: IoRead>(mut r: R) -> Result<CosetTable, TcError> {
        let mut magic = [0u8; 6];
        r.read_exact(&mut magic)?;
        if &magic != b"FPXT1\n" {
            return Err(TcError::BadFile("bad magic".into()));
        }
        let mut word = [0u8; 4];
        r.read_exact(&mut word)?;
        let ngens = u32::from_le_bytes(word) as usize;
        r.read_exact(&mut word)?;
        let n = u32::from_le_bytes(word) as usize;
        if ngens > 10_000 || n > 100_000_000 {
            return Err(TcError::BadFile("implausible dimensions".into()));
        }
        let width = 2 * ngens;
        let mut tab = vec![0u32; (n + 1) * width];
        let mut buf = vec![0u8; n * width * 4];
        r.read_exact(&mut buf)?;
        for i in 0..n * width {
            tab[width + i] = u32::from_le_bytes(buf[i * 4..i * 4 + 4].try_into().unwrap());
        }
        let t = CosetTable { ngens, n, tab };
        for c in 1..=n as u32 {
            for col in 0..width {
                let v = t.lookup_col(c, col);
                if v == 0 || v as usize > n || t.lookup_col(v, col ^ 1) != c {
                    return Err(TcError::BadFile("table not mirror-consistent".into()));
                }
            }
        }
        Ok(t)
    }
}

pub fn enumerate(
    pres: &Presentation,
    subgroup: &[Word],
    opts: &EnumOpts,
) -> Result<Enumeration, TcError> {
    for w in subgroup.iter().chain(pres.relators.iter()) {
        for &l in w {
            if l == 0 || l.unsigned_abs() as usize > pres.rank() {
                return Err(TcError::BadWord(l));
            }
        }
    }
    let mut e = Enumerator::new(pres, subgroup, opts);
    e.run()?;
    let table = e.extract();
    table.validate(pres, subgroup).map(|_| Enumeration {
        table,
        stats: e.stats,
    })
}

/// Order of the presented group, when finite within the coset budget.
pub fn group_order(pres: &Presentation, opts: &EnumOpts) -> Result<u64, TcError> {
    Ok(enumerate(pres, &[], opts)?.table.n() as u64)
}

struct Enumerator {
    width: usize,
    relators: Vec<Vec<u32>>, // as column sequences, cyclically reduced
    subgroup: Vec<Vec<u32>>,
    // edp[col] lists (relator index, position) with that column
    edp: Vec<Vec<(u32, u32)>>,
    felsch: bool,
    max_cosets: usize,
    tab: Vec<u32>,
    p: Vec<u32>, // union-find, p[c] <= c, p[c] == c iff live
    dead: usize,
    alloc: usize,
    deductions: Vec<(u32, u32)>, // (coset, col) newly set, for Felsch
    stats: EnumStats,
    shuffle: Option<u64>,
}

enum Step {
    Ok,
    Stuck, // budget hit while defining
}

impl Enumerator {
    fn new(pres: &Presentation, subgroup: &[Word], opts: &EnumOpts) -> Enumerator {
        let width = 2 * pres.rank();
        let to_cols = |w: &Word| -> Vec<u32> {
            crate::words::cyclic_reduce(w)
                .iter()
                .map(|&l| col_of(l) as u32)
                .collect()
        };
        let relators: Vec<Vec<u32>> = pres
            .relators
            .iter()
            .map(to_cols)
            .filter(|r| !r.is_empty())
            .collect();
        let subgroup: Vec<Vec<u32>> = subgroup
            .iter()
            .map(|w| {
                crate::words::free_reduce(w)
                    .iter()
                    .map(|&l| col_of(l) as u32)
                    .collect()
            })
            .filter(|w: &Vec<u32>| !w.is_empty())
            .collect();
        let mut edp = vec![Vec::new(); width.max(1)];
        for (ri, r) in relators.iter().enumerate() {
            for (pos, &c) in r.iter().enumerate() {
                edp[c as usize].push((ri as u32, pos as u32));
            }
        }
        let mut e = Enumerator {
            width,
            relators,
            subgroup,
            edp,
            felsch: opts.strategy == Strategy::Felsch,
            max_cosets: opts.max_cosets.max(1),
            tab: vec![0; width],
            p: vec![0],
            dead: 0,
            alloc: 0,
            deductions: Vec::new(),
            stats: EnumStats::default(),
            shuffle: opts.coincidence_shuffle,
        };
        e.new_coset();
        e
    }

    fn active(&self) -> usize {
        self.alloc - self.dead
    }

    fn new_coset(&mut self) -> u32 {
        self.alloc += 1;
        self.p.push(self.alloc as u32);
        self.tab.extend(std::iter::repeat_n(0, self.width));
        self.stats.cosets_defined += 1;
        self.stats.max_active = self.stats.max_active.max(self.active());
        self.alloc as u32
    }

    fn rep(&mut self, c: u32) -> u32 {
        let mut r = c;
        while self.p[r as usize] != r {
            r = self.p[r as usize];
        }
        let mut x = c;
        while self.p[x as usize] != r {
            let nx = self.p[x as usize];
            self.p[x as usize] = r;
            x = nx;
        }
        r
    }

    #[inline]
    fn get(&mut self, c: u32, col: u32) -> u32 {
        let t = self.tab[c as usize * self.width + col as usize];
        if t == 0 {
            0
        } else {
            self.rep(t)
        }
    }

    #[inline]
    fn set(&mut self, c: u32, col: u32, t: u32) {
        self.tab[c as usize * self.width + col as usize] = t;
    }

    fn define(&mut self, c: u32, col: u32) -> Option<u32> {
        if self.active() >= self.max_cosets {
            return None;
        }
        let v = self.new_coset();
        self.set(c, col, v);
        self.set(v, col ^ 1, c);
        if self.felsch {
            self.deductions.push((c, col));
        }
        Some(v)
    }

    // Scan word (a cyclic rotation starting at `start`) at coset a.
    // With fill, defines cosets to complete the scan.
    fn scan(&mut self, a: u32, w_rel: usize, from_subgroup: bool, start: usize, fill: bool) -> Step {
        let w = if from_subgroup {
            std::mem::take(&mut self.subgroup[w_rel])
        } else {
            std::mem::take(&mut self.relators[w_rel])
        };
        let step = self.scan_word(a, &w, start, fill);
        if from_subgroup {
            self.subgroup[w_rel] = w;
        } else {
            self.relators[w_rel] = w;
        }
        step
    }

    fn scan_word(&mut self, a: u32, w: &[u32], start: usize, fill: bool) -> Step {
        let m = w.len();
        let at = |k: usize| w[(start + k) % m];
        let mut f = a;
        let mut i: usize = 0;
        let mut b = a;
        let mut j: isize = m as isize - 1;
        loop {
            while i as isize <= j {
                let t = self.get(f, at(i));
                if t == 0 {
                    break;
                }
                f = t;
                i += 1;
            }
            if i as isize > j {
                if f != b {
                    self.coincide(f, b);
                }
                return Step::Ok;
            }
            while j >= i as isize {
                let t = self.get(b, at(j as usize) ^ 1);
                if t == 0 {
                    break;
                }
                b = t;
                j -= 1;
            }
            if j < i as isize {
                if f != b {
                    self.coincide(f, b);
                }
                return Step::Ok;
            }
            if j == i as isize {
                // one gap: close it
                let col = at(i);
                self.set(f, col, b);
                self.set(b, col ^ 1, f);
                if self.felsch {
                    self.deductions.push((f, col));
                }
                return Step::Ok;
            }
            if !fill {
                return Step::Ok;
            }
            match self.define(f, at(i)) {
                Some(v) => {
                    f = v;
                    i += 1;
                }
                None => return Step::Stuck,
            }
        }
    }

    fn coincide(&mut self, a: u32, b: u32) {
        self.stats.coincidences += 1;
        let mut queue: Vec<u32> = Vec::new();
        self.merge(a, b, &mut queue);
        let mut state = self.shuffle.unwrap_or(0);
        let mut qi = 0;
        while qi < queue.len() {
            let pick = if self.shuffle.is_some() {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                qi + (state as usize) % (queue.len() - qi)
            } else {
                qi
            };
            queue.swap(qi, pick);
            let gamma = queue[qi];
            qi += 1;
            for col in 0..self.width as u32 {
                let delta = self.tab[gamma as usize * self.width + col as usize];
                if delta == 0 {
                    continue;
                }
                // remove the mirror reference to the dead coset
                if self.tab[delta as usize * self.width + (col ^ 1) as usize] == gamma {
                    self.tab[delta as usize * self.width + (col ^ 1) as usize] = 0;
                }
                self.set(gamma, col, 0);
                let mu = self.rep(gamma);
                let nu = self.rep(delta);
                let existing = self.get(mu, col);
                if existing != 0 && existing != nu {
                    self.merge(existing, nu, &mut queue);
                }
                let back = self.get(nu, col ^ 1);
                if back != 0 && back != mu {
                    self.merge(back, mu, &mut queue);
                }
                // re-record the surviving edge in both directions; clearing
                // the mirror above may have emptied a slot in a live row
                let mu = self.rep(mu);
                let nu = self.rep(nu);
                if self.tab[mu as usize * self.width + col as usize] == 0 {
                    self.set(mu, col, nu);
                    if self.felsch {
                        self.deductions.push((mu, col));
                    }
                }
                if self.tab[nu as usize * self.width + (col ^ 1) as usize] == 0 {
                    self.set(nu, col ^ 1, mu);
                    if self.felsch {
                        self.deductions.push((nu, col ^ 1));
                    }
                }
            }
        }
    }

    fn merge(&mut self, a: u32, b: u32, queue: &mut Vec<u32>) {
        let ra = self.rep(a);
        let rb = self.rep(b);
        if ra == rb {
            return;
        }
        let (keep, die) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.p[die as usize] = keep;
        self.dead += 1;
        queue.push(die);
    }

    fn run(&mut self) -> Result<(), TcError> {
        // close the subgroup generator words at coset 1
        for si in 0..self.subgroup.len() {
            match self.scan(1, si, true, 0, true) {
                Step::Ok => {}
                Step::Stuck => return self.overflow(),
            }
        }
        if self.felsch {
            self.run_felsch()
        } else {
            self.run_hlt()
        }
    }

    fn run_hlt(&mut self) -> Result<(), TcError> {
        let mut cursor: u32 = 1;
        let mut did_lookahead_at: u64 = u64::MAX;
        loop {
            self.hlt_pass(cursor, &mut did_lookahead_at)?;
            // a coincidence can reopen a slot in a row the cursor already
            // passed; re-verify completeness before declaring the run done
            match self.first_hole() {
                None => return Ok(()),
                Some(c) => cursor = c,
            }
        }
    }

    fn first_hole(&mut self) -> Option<u32> {
        let mut c: u32 = 1;
        while (c as usize) <= self.alloc {
            if self.rep(c) == c {
                for col in 0..self.width as u32 {
                    if self.get(c, col) == 0 {
                        return Some(c);
                    }
                }
            }
            c += 1;
        }
        None
    }

    fn hlt_pass(&mut self, mut cursor: u32, did_lookahead_at: &mut u64) -> Result<(), TcError> {
        while (cursor as usize) <= self.alloc {
            if self.rep(cursor) != cursor {
                cursor += 1;
                continue;
            }
            let mut died = false;
            for ri in 0..self.relators.len() {
                match self.scan(cursor, ri, false, 0, true) {
                    Step::Ok => {}
                    Step::Stuck => {
                        // lookahead: scan everything without filling, then
                        // compact; give up if the budget is still exhausted
                        if *did_lookahead_at == self.stats.cosets_defined {
                            return self.overflow();
                        }
                        self.lookahead();
                        *did_lookahead_at = self.stats.cosets_defined;
                        cursor = self.compact(cursor);
                        if self.active() >= self.max_cosets {
                            return self.overflow();
                        }
                        if self.rep(cursor) != cursor {
                            died = true;
                        }
                        break;
                    }
                }
                if self.rep(cursor) != cursor {
                    died = true;
                    break;
                }
            }
            if died {
                cursor += 1;
                continue;
            }
            if self.rep(cursor) != cursor {
                cursor += 1;
                continue;
            }
            for col in 0..self.width as u32 {
                if self.get(cursor, col) == 0 {
                    match self.define(cursor, col) {
                        Some(_) => {}
                        None => {
                            if *did_lookahead_at == self.stats.cosets_defined {
                                return self.overflow();
                            }
                            self.lookahead();
                            *did_lookahead_at = self.stats.cosets_defined;
                            cursor = self.compact(cursor);
                            if self.active() >= self.max_cosets {
                                return self.overflow();
                            }
                            break;
                        }
                    }
                }
            }
            if self.rep(cursor) == cursor && (0..self.width as u32).all(|c| self.get(cursor, c) != 0)
            {
                cursor += 1;
            }
            if self.dead * 5 > self.alloc && self.dead > 4096 {
                cursor = self.compact(cursor);
            }
        }
        Ok(())
    }

    fn run_felsch(&mut self) -> Result<(), TcError> {
        let mut scan_from: usize = 1;
        loop {
            // drain deductions
            while let Some((c, col)) = self.deductions.pop() {
                if self.rep(c) != c {
                    continue;
                }
                let t = self.get(c, col);
                if t == 0 {
                    continue;
                }
                for k in 0..self.edp[col as usize].len() {
                    let (ri, pos) = self.edp[col as usize][k];
                    let anchor = self.rep(c);
                    self.scan(anchor, ri as usize, false, pos as usize, false);
                    if self.rep(c) != c {
                        break;
                    }
                }
                // the mirrored entry triggers its own relator positions
                let cc = self.rep(c);
                let t = self.get(cc, col);
                if t != 0 {
                    for k in 0..self.edp[(col ^ 1) as usize].len() {
                        let (ri, pos) = self.edp[(col ^ 1) as usize][k];
                        let anchor = self.rep(t);
                        self.scan(anchor, ri as usize, false, pos as usize, false);
                        if self.rep(t) != self.rep(cc) && self.rep(cc) != cc {
                            break;
                        }
                    }
                }
            }
            // find the first undefined slot
            let mut found = None;
            let mut c = scan_from as u32;
            'outer: while (c as usize) <= self.alloc {
                if self.rep(c) == c {
                    for col in 0..self.width as u32 {
                        if self.get(c, col) == 0 {
                            found = Some((c, col));
                            break 'outer;
                        }
                    }
                }
                c += 1;
            }
            match found {
                None => return Ok(()),
                Some((c, col)) => {
                    if self.define(c, col).is_none() {
                        let cur = self.compact(c);
                        if self.active() >= self.max_cosets {
                            return self.overflow();
                        }
                        scan_from = cur.max(1) as usize;
                        continue;
                    }
                    // freshly defined entries may fill earlier holes only via
                    // coincidences, which merge downward, so rescan from the
                    // smallest live coset that might have gained a hole
                    scan_from = 1;
                }
            }
        }
    }

    fn lookahead(&mut self) {
        let mut c: u32 = 1;
        while (c as usize) <= self.alloc {
            if self.rep(c) == c {
                for ri in 0..self.relators.len() {
                    self.scan(c, ri, false, 0, false);
                    if self.rep(c) != c {
                        break;
                    }
                }
            }
            c += 1;
        }
    }

    // Renumber live cosets, preserving order. Returns the new id of
    // `cursor` (or of the nearest preceding live coset).
    fn compact(&mut self, cursor: u32) -> u32 {
        let mut map = vec![0u32; self.alloc + 1];
        let mut next = 0u32;
        for c in 1..=self.alloc as u32 {
            if self.rep(c) == c {
                next += 1;
                map[c as usize] = next;
            }
        }
        let width = self.width;
        let mut tab = vec![0u32; (next as usize + 1) * width];
        for c in 1..=self.alloc as u32 {
            if map[c as usize] == 0 {
                continue;
            }
            let nc = map[c as usize];
            for col in 0..width {
                let t = self.tab[c as usize * width + col];
                if t != 0 {
                    let rt = self.rep(t);
                    tab[nc as usize * width + col] = map[rt as usize];
                }
            }
        }
        // remap pending deductions
        let mut deds = Vec::with_capacity(self.deductions.len());
        for &(c, col) in &self.deductions {
            let r = {
                let mut r = c;
                while self.p[r as usize] != r {
                    r = self.p[r as usize];
                }
                r
            };
            if map[r as usize] != 0 {
                deds.push((map[r as usize], col));
            }
        }
        self.deductions = deds;
        let new_cursor = {
            let mut c = cursor.min(self.alloc as u32);
            loop {
                if c == 0 {
                    break 1;
                }
                let r = self.rep(c);
                if r == c && map[c as usize] != 0 {
                    break map[c as usize];
                }
                c -= 1;
            }
        };
        self.tab = tab;
        self.alloc = next as usize;
        self.dead = 0;
        self.p = (0..=next).collect();
        new_cursor
    }

    fn overflow(&mut self) -> Result<(), TcError> {
        Err(TcError::Overflow {
            max_cosets: self.max_cosets,
            active: self.active(),
            defined: self.stats.cosets_defined,
        })
    }

    fn extract(&mut self) -> CosetTable {
        self.compact(1);
        let ngens = self.width / 2;
        let mut t = CosetTable {
            ngens,
            n: self.alloc,
            tab: self.tab.clone(),
        };
        t.standardize();
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::parse_presentation;

    fn pres(text: &str) -> Presentation {
        parse_presentation(text).unwrap()
    }

    fn opts(strategy: Strategy) -> EnumOpts {
        EnumOpts {
            strategy,
            max_cosets: 100_000,
            coincidence_shuffle: None,
        }
    }

    const S3: &str = "gens a,b\nrel a^2\nrel b^3\nrel (a*b)^2\n";
    const Q8: &str = "gens i,j\nrel i^4\nrel i^2*j^-2\nrel j^-1*i*j*i\n";

    #[test]
    fn s3_full_enumeration() {
        for strat in [Strategy::Hlt, Strategy::Felsch] {
            let e = enumerate(&pres(S3), &[], &opts(strat)).unwrap();
            assert_eq!(e.table.n(), 6, "{:?}", strat);
        }
    }

    #[test]
    fn s3_subgroup_indices() {
        let p = pres(S3);
        let a = enumerate(&p, &[vec![1]], &opts(Strategy::Hlt)).unwrap();
        assert_eq!(a.table.n(), 3);
        let b = enumerate(&p, &[vec![2]], &opts(Strategy::Felsch)).unwrap();
        assert_eq!(b.table.n(), 2);
    }

    #[test]
    fn quaternion_order_eight() {
        for strat in [Strategy::Hlt, Strategy::Felsch] {
            assert_eq!(group_order(&pres(Q8), &opts(strat)).unwrap(), 8);
        }
    }

    #[test]
    fn trivial_and_cyclic_groups() {
        assert_eq!(group_order(&pres("gens a\nrel a\n"), &opts(Strategy::Hlt)).unwrap(), 1);
        assert_eq!(
            group_order(&pres("gens a\nrel a^12\n"), &opts(Strategy::Felsch)).unwrap(),
            12
        );
        let infinite_cyclic = pres("gens a\n");
        let r = enumerate(&infinite_cyclic, &[vec![1, 1, 1, 1, 1]], &opts(Strategy::Hlt)).unwrap();
        assert_eq!(r.table.n(), 5);
    }

    #[test]
    fn hurwitz_group_of_order_168() {
        // <a,b | a^2, b^3, (ab)^7, [a,b]^4> is the (2,3,7) quotient of
        // order 168
        let p = pres("gens a,b\nrel a^2\nrel b^3\nrel (a*b)^7\nrel (a^-1*b^-1*a*b)^4\n");
        for strat in [Strategy::Hlt, Strategy::Felsch] {
            assert_eq!(group_order(&p, &opts(strat)).unwrap(), 168, "{:?}", strat);
        }
    }

    #[test]
    fn strategies_agree_after_standardization() {
        let p = pres(Q8);
        let a = enumerate(&p, &[vec![1]], &opts(Strategy::Hlt)).unwrap();
        let b = enumerate(&p, &[vec![1]], &opts(Strategy::Felsch)).unwrap();
        assert_eq!(a.table, b.table);
    }

    #[test]
    fn coincidence_shuffle_is_invisible() {
        let p = pres("gens a,b\nrel a^2\nrel b^3\nrel (a*b)^5\n"); // A5 x-ish icosahedral
        let base = enumerate(&p, &[], &opts(Strategy::Hlt)).unwrap();
        assert_eq!(base.table.n(), 60);
        for seed in [1u64, 7, 99, 1234567] {
            let mut o = opts(Strategy::Hlt);
            o.coincidence_shuffle = Some(seed);
            let e = enumerate(&p, &[], &o).unwrap();
            assert_eq!(e.table, base.table, "seed {}", seed);
        }
    }

    #[test]
    fn overflow_is_reported_not_wrong() {
        // F(2,5) cyclically presented group is cyclic of order 11, but a
        // tiny budget must overflow instead of lying
        let p = pres("gens a,b\nrel a*b*a^-1*b^-2\nrel b*a*b^-1*a^-2\n");
        let mut small = opts(Strategy::Hlt);
        small.max_cosets = 3;
        match enumerate(&p, &[], &small) {
            Err(TcError::Overflow { .. }) => {}
            other => panic!("expected overflow, got {:?}", other.map(|e| e.table.n())),
        }
        let ok = enumerate(&p, &[], &opts(Strategy::Hlt)).unwrap();
        assert_eq!(ok.table.n(), 1);
    }

    #[test]
    fn table_permutation_representation() {
        let e = enumerate(&pres(S3), &[], &opts(Strategy::Hlt)).unwrap();
        let g = e.table.to_perm_group();
        assert_eq!(g.order(), 6);
        let perms = e.table.to_perms();
        assert_eq!(perms[0].order(), 2);
        assert_eq!(perms[1].order(), 3);
    }

    #[test]
    fn binary_round_trip() {
        let e = enumerate(&pres(Q8), &[], &opts(Strategy::Felsch)).unwrap();
        let mut buf = Vec::new();
        e.table.write_binary(&mut buf).unwrap();
        let back = CosetTable::read_binary(&buf[..]).unwrap();
        assert_eq!(back, e.table);
        assert!(CosetTable::read_binary(&b"FPXT1\nxxxx"[..]).is_err());
        let mut corrupt = buf.clone();
        let last = corrupt.len() - 1;
        corrupt[last] ^= 0x55;
        assert!(CosetTable::read_binary(&corrupt[..]).is_err());
    }

    #[test]
    fn bad_word_rejected() {
        let p = pres(S3);
        assert!(matches!(
            enumerate(&p, &[vec![7]], &opts(Strategy::Hlt)),
            Err(TcError::BadWord(7))
        ));
    }

    #[test]
    fn rank_zero_presentation() {
        let p = Presentation::new(None, &[], vec![]);
        let e = enumerate(&p, &[], &opts(Strategy::Hlt)).unwrap();
        assert_eq!(e.table.n(), 1);
    }

    #[test]
    fn standardized_table_is_bfs_ordered() {
        let e = enumerate(&pres(S3), &[], &opts(Strategy::Hlt)).unwrap();
        // row 1 columns introduce cosets in increasing order
        let mut seen_max = 1u32;
        for c in 1..=e.table.n() as u32 {
            for col in 0..2 * e.table.ngens() {
                let t = e.table.lookup_col(c, col);
                assert!(t <= seen_max + 1);
                seen_max = seen_max.max(t);
            }
        }
    }
}
