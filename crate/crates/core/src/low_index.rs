//! Low-index subgroup search.
//!
//! Depth-first search over partial coset tables with forced deductions.
//! Each complete table is a transitive action on 1..=index with every
//! relator closed; tables are kept only when no renumbering from another
//! base point is lexicographically smaller, so results are one table per
//! conjugacy class of subgroups. New cosets are numbered at their first
//! appearance in row-major order, which makes every emitted table
//! breadth-first standard by construction.

use crate::todd_coxeter::CosetTable;
use crate::words::Presentation;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LiError {
    #[error("node budget {0} exhausted")]
    NodeBudget(u64),
    #[error("time budget {0:?} exhausted")]
    TimeBudget(Duration),
    #[error("checkpoint does not match this search: {0}")]
    CheckpointMismatch(String),
    #[error("bad checkpoint file: {0}")]
    BadCheckpoint(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Debug)]
pub struct LowIndexOpts {
    pub max_index: usize,
    /// 0 or 1 runs sequentially.
    pub threads: usize,
    /// Branch depth at which subtrees are handed to workers.
    pub handoff_depth: usize,
    /// Relators longer than this only get verified on complete tables,
    /// not used for forcing. None forces with everything.
    pub forcing_max_len: Option<usize>,
    pub max_nodes: u64,
    pub time_budget: Option<Duration>,
    pub checkpoint: Option<PathBuf>,
}

impl Default for LowIndexOpts {
    fn default() -> Self {
        LowIndexOpts {
            max_index: 2,
            threads: 1,
            handoff_depth: 6,
            forcing_max_len: None,
            max_nodes: u64::MAX,
            time_budget: None,
            checkpoint: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupClass {
    pub index: usize,
    pub table: CosetTable,
}

#[derive(Clone, Debug, Default)]
pub struct LiStats {
    pub nodes: u64,
    pub complete_tables: u64,
}

#[derive(Clone, Debug)]
pub struct LowIndexResult {
    /// One standardized table per conjugacy class, sorted by index then
    /// table contents.
    pub subgroups: Vec<SubgroupClass>,
    pub stats: LiStats,
}

impl LowIndexResult {
    pub fn count_by_index(&self) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for s in &self.subgroups {
            *m.entry(s.index).or_insert(0) += 1;
        }
        m
    }

    /// Indices of proper subgroups (index > 1) that occur.
    pub fn proper_indices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .subgroups
            .iter()
            .map(|s| s.index)
            .filter(|&i| i > 1)
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

#[inline]
fn col_of_letter(l: i32) -> u32 {
    if l > 0 {
        2 * (l as u32 - 1)
    } else {
        2 * ((-l) as u32 - 1) + 1
    }
}

struct Search {
    width: usize,
    max_index: usize,
    forcing: Vec<Vec<u32>>,      // col sequences used for deductions
    checking: Vec<Vec<u32>>,     // col sequences only verified at leaves
    edp: Vec<Vec<(u32, u32)>>,   // per col: (forcing relator, position)
    deadline: Option<Instant>,
    budget: Option<Duration>,
    max_nodes: u64,
    node_counter: AtomicU64,
}

#[derive(Clone, Serialize, Deserialize)]
struct Node {
    n: u32,
    tab: Vec<u32>, // (max_index + 1) * width
}

// Bound on the phase-1 frontier; past it the walk is abandoned and retried
// with a shallower handoff depth.
const FRONTIER_CAP: usize = 50_000;

struct Worker<'a> {
    s: &'a Search,
    node: Node,
    trail: Vec<u32>, // flat slot indices that were set
    nodes: u64,
    complete: u64,
    found: Vec<Node>,
    frontier: Option<(usize, Vec<Node>)>, // (depth, collected)
    frontier_overflow: bool,
}

enum Propagate {
    Ok,
    Contradiction,
}

impl Search {
    fn new(pres: &Presentation, opts: &LowIndexOpts) -> Search {
        let width = 2 * pres.rank();
        let mut forcing = Vec::new();
        let mut checking = Vec::new();
        for r in &pres.relators {
            let cr = crate::words::cyclic_reduce(r);
            if cr.is_empty() {
                continue;
            }
            let cols: Vec<u32> = cr.iter().map(|&l| col_of_letter(l)).collect();
            match opts.forcing_max_len {
                Some(cap) if cols.len() > cap => checking.push(cols),
                _ => forcing.push(cols),
            }
        }
        let mut edp = vec![Vec::new(); width.max(1)];
        for (ri, r) in forcing.iter().enumerate() {
            for (pos, &c) in r.iter().enumerate() {
                edp[c as usize].push((ri as u32, pos as u32));
            }
        }
        Search {
            width,
            max_index: opts.max_index,
            forcing,
            checking,
            edp,
            deadline: opts.time_budget.map(|d| Instant::now() + d),
            budget: opts.time_budget,
            max_nodes: opts.max_nodes,
            node_counter: AtomicU64::new(0),
        }
    }

    fn root(&self) -> Node {
        Node {
            n: 1,
            tab: vec![0; (self.max_index + 1) * self.width.max(1)],
        }
    }
}

impl<'a> Worker<'a> {
    fn new(s: &'a Search, node: Node) -> Worker<'a> {
        Worker {
            s,
            node,
            trail: Vec::new(),
            nodes: 0,
            complete: 0,
            found: Vec::new(),
            frontier: None,
            frontier_overflow: false,
        }
    }

    #[inline]
    fn get(&self, c: u32, col: u32) -> u32 {
        self.node.tab[c as usize * self.s.width + col as usize]
    }

    fn set(&mut self, c: u32, col: u32, v: u32) {
        let slot = c as usize * self.s.width + col as usize;
        debug_assert_eq!(self.node.tab[slot], 0);
        self.node.tab[slot] = v;
        self.trail.push(slot as u32);
    }

    fn undo_to(&mut self, mark: usize, n_mark: u32) {
        while self.trail.len() > mark {
            let slot = self.trail.pop().unwrap() as usize;
            self.node.tab[slot] = 0;
        }
        self.node.n = n_mark;
    }

    // Establish the edge c --col--> t (and its mirror), then run relator
    // scans to closure.
    fn deduce(&mut self, c: u32, col: u32, t: u32, queue: &mut Vec<(u32, u32)>) -> Propagate {
        let existing = self.get(c, col);
        if existing != 0 {
            return if existing == t {
                Propagate::Ok
            } else {
                Propagate::Contradiction
            };
        }
        let back = self.get(t, col ^ 1);
        if back != 0 && back != c {
            return Propagate::Contradiction;
        }
        self.set(c, col, t);
        if back == 0 {
            self.set(t, col ^ 1, c);
        }
        queue.push((c, col));
        queue.push((t, col ^ 1));
        Propagate::Ok
    }

    fn propagate(&mut self, queue: &mut Vec<(u32, u32)>) -> Propagate {
        while let Some((c, col)) = queue.pop() {
            for k in 0..self.s.edp[col as usize].len() {
                let (ri, pos) = self.s.edp[col as usize][k];
                match self.scan(c, ri as usize, pos as usize, queue) {
                    Propagate::Ok => {}
                    Propagate::Contradiction => return Propagate::Contradiction,
                }
            }
        }
        Propagate::Ok
    }

    // Scan forcing relator `ri` as a cycle starting at position `pos`,
    // anchored at coset a.
    fn scan(&mut self, a: u32, ri: usize, pos: usize, queue: &mut Vec<(u32, u32)>) -> Propagate {
        let m = self.s.forcing[ri].len();
        let at = |k: usize| self.s.forcing[ri][(pos + k) % m];
        let mut f = a;
        let mut i = 0usize;
        while i < m {
            let t = self.get(f, at(i));
            if t == 0 {
                break;
            }
            f = t;
            i += 1;
        }
        if i == m {
            return if f == a {
                Propagate::Ok
            } else {
                Propagate::Contradiction
            };
        }
        let mut b = a;
        let mut j = m;
        while j > i + 1 {
            let t = self.get(b, at(j - 1) ^ 1);
            if t == 0 {
                break;
            }
            b = t;
            j -= 1;
        }
        if j == i + 1 {
            // single gap: the edge f --at(i)--> b is forced
            return self.deduce(f, at(i), b, queue);
        }
        Propagate::Ok
    }

    fn first_hole(&self) -> Option<(u32, u32)> {
        for c in 1..=self.node.n {
            for col in 0..self.s.width as u32 {
                if self.get(c, col) == 0 {
                    return Some((c, col));
                }
            }
        }
        None
    }

    fn dfs(&mut self, depth: usize) -> Result<(), LiError> {
        // hand the subtree off before counting it, so node totals do not
        // depend on the handoff depth
        if let Some((hd, _)) = self.frontier {
            if depth == hd {
                if self.frontier.as_ref().unwrap().1.len() >= FRONTIER_CAP {
                    self.frontier_overflow = true;
                    return Ok(());
                }
                let snap = Node {
                    n: self.node.n,
                    tab: self.node.tab.clone(),
                };
                self.frontier.as_mut().unwrap().1.push(snap);
                return Ok(());
            }
        }
        self.nodes += 1;
        if self.nodes.is_multiple_of(8192) {
            if let Some(d) = self.s.deadline {
                if Instant::now() > d {
                    return Err(LiError::TimeBudget(self.s.budget.unwrap_or_default()));
                }
            }
        }
        if self.s.node_counter.fetch_add(1, Ordering::Relaxed) >= self.s.max_nodes {
            return Err(LiError::NodeBudget(self.s.max_nodes));
        }
        if !self.canonical_so_far() {
            return Ok(());
        }
        let (c, col) = match self.first_hole() {
            None => {
                self.complete += 1;
                if self.leaf_ok() {
                    self.found.push(Node {
                        n: self.node.n,
                        tab: self.node.tab.clone(),
                    });
                }
                return Ok(());
            }
            Some(h) => h,
        };
        // candidates: existing cosets with a free mirror slot, then a
        // fresh coset
        for t in 1..=self.node.n {
            if self.frontier_overflow {
                return Ok(());
            }
            if self.get(t, col ^ 1) != 0 {
                continue;
            }
            let mark = self.trail.len();
            let n_mark = self.node.n;
            let mut queue = Vec::new();
            if matches!(self.deduce(c, col, t, &mut queue), Propagate::Ok)
                && matches!(self.propagate(&mut queue), Propagate::Ok)
            {
                self.dfs(depth + 1)?;
            }
            self.undo_to(mark, n_mark);
        }
        if !self.frontier_overflow && (self.node.n as usize) < self.s.max_index {
            let t = self.node.n + 1;
            let mark = self.trail.len();
            let n_mark = self.node.n;
            self.node.n = t;
            let mut queue = Vec::new();
            if matches!(self.deduce(c, col, t, &mut queue), Propagate::Ok)
                && matches!(self.propagate(&mut queue), Propagate::Ok)
            {
                self.dfs(depth + 1)?;
            }
            self.undo_to(mark, n_mark);
        }
        Ok(())
    }

    // Relators excluded from forcing must still close everywhere.
    fn leaf_ok(&self) -> bool {
        for r in &self.s.checking {
            for c in 1..=self.node.n {
                let mut f = c;
                for &col in r {
                    f = self.get(f, col);
                }
                if f != c {
                    return false;
                }
            }
        }
        true
    }

    // First in class: no base change yields a lexicographically smaller
    // table. On a partial table the verdict is conservative (only a
    // difference inside the fully defined comparison prefix rejects), and
    // such a verdict persists under every completion, so rejected subtrees
    // contain no canonical leaf. On a complete table the test is exact.
    fn canonical_so_far(&self) -> bool {
        for delta in 2..=self.node.n {
            if self.relabel_definitely_less(delta) {
                return false;
            }
        }
        true
    }

    // Walk the table standardized from `root` over defined entries only;
    // true means it compares lexicographically below the current table no
    // matter how the holes are later filled.
    fn relabel_definitely_less(&self, root: u32) -> bool {
        let n = self.node.n as usize;
        let width = self.s.width;
        let mut new_of_old = vec![0u32; n + 1];
        let mut old_of_new = vec![0u32; n + 1];
        new_of_old[root as usize] = 1;
        old_of_new[1] = root;
        let mut next = 1u32;
        let mut head = 1usize;
        while head <= next as usize {
            let old = old_of_new[head];
            for col in 0..width {
                let t = self.get(old, col as u32);
                if t == 0 {
                    return false;
                }
                if new_of_old[t as usize] == 0 {
                    next += 1;
                    new_of_old[t as usize] = next;
                    old_of_new[next as usize] = t;
                }
                // compare entry (head, col) of the relabeled table
                let relabeled = new_of_old[t as usize];
                let original = self.get(head as u32, col as u32);
                if original == 0 {
                    return false;
                }
                if relabeled != original {
                    return relabeled < original;
                }
            }
            head += 1;
        }
        false
    }
}

fn node_to_table(s: &Search, node: &Node) -> CosetTable {
    let n = node.n as usize;
    let width = s.width;
    let mut tab = vec![0u32; (n + 1) * width];
    for c in 1..=n {
        for col in 0..width {
            tab[c * width + col] = node.tab[c * width + col];
        }
    }
    let mut t = CosetTable::from_parts(width / 2, n, tab).expect("complete table");
    // numbering is already breadth-first, but standardize anyway so the
    // output contract does not depend on that argument
    t.standardize();
    t
}

#[derive(Serialize, Deserialize)]
struct Checkpoint {
    version: u32,
    presentation: String,
    max_index: usize,
    forcing_max_len: Option<usize>,
    handoff_depth: usize,
    frontier: Vec<Node>,
    done: Vec<bool>,
    found: Vec<Node>,
    nodes: u64,
    complete_tables: u64,
}

pub fn low_index_subgroups(
    pres: &Presentation,
    opts: &LowIndexOpts,
) -> Result<LowIndexResult, LiError> {
    assert!(opts.max_index >= 1);
    let s = Search::new(pres, opts);
    if pres.rank() == 0 {
        // only the whole group
        let table = CosetTable::from_parts(0, 1, Vec::new()).unwrap();
        return Ok(LowIndexResult {
            subgroups: vec![SubgroupClass { index: 1, table }],
            stats: LiStats::default(),
        });
    }

    // Phase 1: frontier at the handoff depth (or resume from checkpoint).
    let frontier: Vec<Node>;
    let mut done: Vec<bool>;
    let mut found_nodes: Vec<Node> = Vec::new();
    let mut nodes: u64;
    let mut complete_tables: u64;
    let resume = opts
        .checkpoint
        .as_ref()
        .filter(|p| p.exists())
        .map(|p| load_checkpoint(p, pres, opts))
        .transpose()?;
    match resume {
        Some(cp) => {
            frontier = cp.frontier;
            done = cp.done;
            found_nodes = cp.found;
            nodes = cp.nodes;
            complete_tables = cp.complete_tables;
            s.node_counter.store(nodes, Ordering::Relaxed);
        }
        None => {
            // retry with a shallower handoff when the frontier overflows;
            // node totals are depth-independent, so statistics are unchanged
            let mut depth = opts.handoff_depth;
            loop {
                let mut w = Worker::new(&s, s.root());
                w.frontier = Some((depth, Vec::new()));
                w.dfs(0)?;
                if w.frontier_overflow && depth > 0 {
                    depth -= 1;
                    s.node_counter.store(0, Ordering::Relaxed);
                    continue;
                }
                frontier = w.frontier.take().unwrap().1;
                // shallow trees finish inside phase 1
                found_nodes.append(&mut w.found);
                nodes = w.nodes;
                complete_tables = w.complete;
                done = vec![false; frontier.len()];
                break;
            }
        }
    }

    // Phase 2: run each subtree.
    let threads = opts.threads.max(1);
    let pool = if threads > 1 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .expect("thread pool"),
        )
    } else {
        None
    };
    let chunk = if opts.checkpoint.is_some() {
        (threads * 4).max(8)
    } else {
        usize::MAX
    };
    let mut i = 0;
    while i < frontier.len() {
        let hi = frontier.len().min(i.saturating_add(chunk));
        let todo: Vec<usize> = (i..hi).filter(|&k| !done[k]).collect();
        let results: Vec<Result<SubtreeOutcome, LiError>> = match &pool {
            Some(pool) => pool.install(|| {
                use rayon::prelude::*;
                todo.par_iter()
                    .map(|&k| run_subtree(&s, frontier[k].clone()))
                    .collect()
            }),
            None => todo
                .iter()
                .map(|&k| run_subtree(&s, frontier[k].clone()))
                .collect(),
        };
        for (k, r) in todo.iter().zip(results) {
            let (f, nn, cc) = r?;
            found_nodes.extend(f);
            nodes += nn;
            complete_tables += cc;
            done[*k] = true;
        }
        if let Some(path) = &opts.checkpoint {
            save_checkpoint(
                path,
                pres,
                opts,
                &frontier,
                &done,
                &found_nodes,
                nodes,
                complete_tables,
            )?;
        }
        i = hi;
    }

    let mut subgroups: Vec<SubgroupClass> = found_nodes
        .iter()
        .map(|f| {
            let table = node_to_table(&s, f);
            SubgroupClass {
                index: table.n(),
                table,
            }
        })
        .collect();
    subgroups.sort_by(|a, b| {
        a.index.cmp(&b.index).then_with(|| {
            let ka: Vec<u32> = (1..=a.index as u32)
                .flat_map(|c| (0..s.width).map(move |col| a.table.lookup_col(c, col)))
                .collect();
            let kb: Vec<u32> = (1..=b.index as u32)
                .flat_map(|c| (0..s.width).map(move |col| b.table.lookup_col(c, col)))
                .collect();
            ka.cmp(&kb)
        })
    });
    if let Some(path) = &opts.checkpoint {
        let _ = std::fs::remove_file(path);
    }
    Ok(LowIndexResult {
        subgroups,
        stats: LiStats {
            nodes,
            complete_tables,
        },
    })
}

// found nodes, nodes visited, complete tables
type SubtreeOutcome = (Vec<Node>, u64, u64);

fn run_subtree(s: &Search, node: Node) -> Result<SubtreeOutcome, LiError> {
    let mut w = Worker::new(s, node);
    w.dfs(0)?;
    Ok((w.found, w.nodes, w.complete))
}

fn load_checkpoint(
    path: &PathBuf,
    pres: &Presentation,
    opts: &LowIndexOpts,
) -> Result<Checkpoint, LiError> {
    let text = std::fs::read_to_string(path)?;
    let cp: Checkpoint =
        serde_json::from_str(&text).map_err(|e| LiError::BadCheckpoint(e.to_string()))?;
    if cp.version != 1 {
        return Err(LiError::BadCheckpoint(format!("version {}", cp.version)));
    }
    if cp.presentation != pres.print()
        || cp.max_index != opts.max_index
        || cp.forcing_max_len != opts.forcing_max_len
        || cp.handoff_depth != opts.handoff_depth
    {
        return Err(LiError::CheckpointMismatch(
            "presentation or options differ".into(),
        ));
    }
    Ok(cp)
}

#[allow(clippy::too_many_arguments)]
fn save_checkpoint(
    path: &PathBuf,
    pres: &Presentation,
    opts: &LowIndexOpts,
    frontier: &[Node],
    done: &[bool],
    found: &[Node],
    nodes: u64,
    complete_tables: u64,
) -> Result<(), LiError> {
    let cp = Checkpoint {
        version: 1,
        presentation: pres.print(),
        max_index: opts.max_index,
        forcing_max_len: opts.forcing_max_len,
        handoff_depth: opts.handoff_depth,
        frontier: frontier.to_vec(),
        done: done.to_vec(),
        found: found.to_vec(),
        nodes,
        complete_tables,
    };
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, serde_json::to_string(&cp).expect("serialize"))?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}
