//! Arcs in designs with λ = 1: verification, randomized greedy search, and
//! exact branch-and-bound.
//!
//! The exact search branches include-first on the lowest-id candidate, so it
//! visits arcs in lexicographic order of their sorted point lists. Subtrees
//! below a fixed frontier run in parallel with fixed per-subtree node
//! budgets, which keeps verdicts and witnesses independent of thread count.

use std::sync::atomic::{AtomicUsize, Ordering};

use fixedbitset::FixedBitSet;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::design::Design;
use crate::error::{Error, Result};

const FRONTIER_TARGET: usize = 64;
const FRONTIER_MAX_DEPTH: usize = 12;
pub const DEFAULT_GREEDY_RESTARTS: usize = 512;

/// The unique block through each point pair, plus block point sets.
#[derive(Debug, Clone)]
pub struct CollinearityIndex {
    v: usize,
    line_of: Vec<u32>,
    blocks: Vec<FixedBitSet>,
}

impl CollinearityIndex {
    pub fn new(design: &Design) -> Result<Self> {
        let lambda = design.params().lambda;
        if lambda != 1 {
            return Err(Error::LambdaNotOne(lambda));
        }
        let v = design.v();
        let mut line_of = vec![u32::MAX; v * v];
        for (j, block) in design.blocks().iter().enumerate() {
            for &a in block {
                for &b in block {
                    if a != b {
                        line_of[a as usize * v + b as usize] = j as u32;
                    }
                }
            }
        }
        Ok(CollinearityIndex { v, line_of, blocks: design.block_sets().to_vec() })
    }

    pub fn points(&self) -> usize {
        self.v
    }

    /// Block through two distinct points.
    #[inline]
    pub fn line(&self, a: usize, b: usize) -> usize {
        debug_assert!(a != b);
        self.line_of[a * self.v + b] as usize
    }

    pub fn block(&self, j: usize) -> &FixedBitSet {
        &self.blocks[j]
    }
}

fn to_bitset(v: usize, points: &[u32]) -> Result<FixedBitSet> {
    let mut s = FixedBitSet::with_capacity(v);
    for &p in points {
        if p as usize >= v {
            return Err(Error::InvalidParameter(format!("point {p} out of range")));
        }
        s.insert(p as usize);
    }
    Ok(s)
}

/// True iff no block meets `points` in more than two points (vacuous for
/// fewer than three points).
pub fn is_arc(design: &Design, points: &[u32]) -> Result<bool> {
    let lambda = design.params().lambda;
    if lambda != 1 {
        return Err(Error::LambdaNotOne(lambda));
    }
    let set = to_bitset(design.v(), points)?;
    if set.count_ones(..) != points.len() {
        return Ok(false);
    }
    Ok(design.block_sets().iter().all(|b| b.intersection_count(&set) <= 2))
}

/// True iff `points` is an arc that no further point extends.
pub fn is_complete_arc(design: &Design, points: &[u32]) -> Result<bool> {
    if !is_arc(design, points)? {
        return Err(Error::NotAnArc);
    }
    let index = CollinearityIndex::new(design)?;
    let mut covered = to_bitset(design.v(), points)?;
    for (i, &a) in points.iter().enumerate() {
        for &b in &points[i + 1..] {
            covered.union_with(index.block(index.line(a as usize, b as usize)));
        }
    }
    Ok(covered.is_full())
}

/// Arc plus the points that can still be added without a collinear triple.
#[derive(Clone, Debug)]
pub struct ArcSearchState {
    pub arc: Vec<u32>,
    pub candidates: FixedBitSet,
}

impl ArcSearchState {
    pub fn new(v: usize) -> Self {
        let mut candidates = FixedBitSet::with_capacity(v);
        candidates.insert_range(..);
        ArcSearchState { arc: Vec::new(), candidates }
    }

    /// Adds candidate `p` and strikes every point on a line through `p` and
    /// an arc point.
    pub fn include(&mut self, index: &CollinearityIndex, p: usize) {
        debug_assert!(self.candidates.contains(p));
        self.candidates.set(p, false);
        for &a in &self.arc {
            self.candidates.difference_with(index.block(index.line(p, a as usize)));
        }
        self.arc.push(p as u32);
    }

    pub fn exclude(&mut self, p: usize) {
        self.candidates.set(p, false);
    }

    /// Upper bound on the size of any arc extending this state.
    ///
    /// Through an arc point `a`, each line holds at most one more arc point,
    /// so the extension is at most the number of lines through `a` that
    /// still carry a candidate.
    pub fn upper_bound(&self, index: &CollinearityIndex, scratch: &mut FixedBitSet) -> usize {
        let cand = self.candidates.count_ones(..);
        let Some(&a) = self.arc.first() else {
            return cand;
        };
        scratch.clear();
        for c in self.candidates.ones() {
            scratch.insert(index.line(a as usize, c));
        }
        self.arc.len() + cand.min(scratch.count_ones(..))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    Greedy,
    Exact,
}

/// Randomized greedy extension with restarts; the best arc seen, sorted.
fn greedy_arcs(index: &CollinearityIndex, seed: u64, restarts: usize, target: Option<usize>) -> Vec<u32> {
    let v = index.points();
    let mut best: Vec<u32> = Vec::new();
    let mut order: Vec<usize> = (0..v).collect();
    for r in 0..restarts.max(1) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(r as u64);
        order.shuffle(&mut rng);
        let mut st = ArcSearchState::new(v);
        for &p in &order {
            if st.candidates.contains(p) {
                st.include(index, p);
            }
        }
        let mut arc = st.arc;
        arc.sort_unstable();
        if arc.len() > best.len() {
            best = arc;
            if target.is_some_and(|t| best.len() >= t) {
                break;
            }
        }
    }
    best
}

/// Largest arc over `restarts` seeded greedy extensions, sorted.
pub fn greedy_arc(design: &Design, seed: u64, restarts: usize) -> Result<Vec<u32>> {
    let index = CollinearityIndex::new(design)?;
    Ok(greedy_arcs(&index, seed, restarts, None))
}

/// Splits the include/exclude tree into subtrees, in depth-first order.
fn frontier(index: &CollinearityIndex, root: ArcSearchState) -> Vec<ArcSearchState> {
    let mut level = vec![root];
    for _ in 0..FRONTIER_MAX_DEPTH {
        if level.len() >= FRONTIER_TARGET {
            break;
        }
        let mut next = Vec::with_capacity(level.len() * 2);
        for st in level {
            match st.candidates.minimum() {
                Some(p) => {
                    let mut inc = st.clone();
                    inc.include(index, p);
                    let mut exc = st;
                    exc.exclude(p);
                    next.push(inc);
                    next.push(exc);
                }
                None => next.push(st),
            }
        }
        level = next;
    }
    level
}

enum Subtree {
    Found(Vec<u32>),
    Exhausted,
    Infeasible,
    Skipped,
}

struct TargetSearch<'a> {
    index: &'a CollinearityIndex,
    target: usize,
    nodes: u64,
    budget: u64,
    scratch: FixedBitSet,
}

impl TargetSearch<'_> {
    fn run(&mut self, st: &mut ArcSearchState) -> Option<Option<Vec<u32>>> {
        if st.arc.len() >= self.target {
            return Some(Some(st.arc.clone()));
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return None;
        }
        if st.upper_bound(self.index, &mut self.scratch) < self.target {
            return Some(None);
        }
        let Some(p) = st.candidates.minimum() else {
            return Some(None);
        };
        let saved = st.candidates.clone();
        st.include(self.index, p);
        let inc = self.run(st);
        st.arc.pop();
        st.candidates = saved;
        match inc {
            Some(Some(found)) => return Some(Some(found)),
            None => return None,
            Some(None) => {}
        }
        st.exclude(p);
        let exc = self.run(st);
        st.candidates.insert(p);
        exc
    }
}

/// An arc of size at least `target`.
///
/// Greedy mode runs `budget` seeded restarts. Exact mode runs branch-and-bound
/// with a total node budget of `budget` and reports [`Error::Infeasible`] once
/// the whole tree is explored without success.
pub fn find_arc(design: &Design, target: usize, mode: SearchMode, seed: u64, budget: u64) -> Result<Vec<u32>> {
    if target < 3 {
        return Err(Error::InvalidParameter(format!("arc target {target} must be at least 3")));
    }
    let index = CollinearityIndex::new(design)?;
    let arc = match mode {
        SearchMode::Greedy => {
            let best = greedy_arcs(&index, seed, budget.min(usize::MAX as u64) as usize, Some(target));
            if best.len() >= target {
                best
            } else {
                return Err(Error::BudgetExhausted);
            }
        }
        SearchMode::Exact => exact_target(&index, target, budget)?,
    };
    debug_assert!(is_arc(design, &arc)?);
    Ok(arc)
}

fn exact_target(index: &CollinearityIndex, target: usize, budget: u64) -> Result<Vec<u32>> {
    let v = index.points();
    if target > v {
        return Err(Error::Infeasible(target));
    }
    let subtrees = frontier(index, ArcSearchState::new(v));
    let per = (budget / subtrees.len() as u64).max(1);
    let first_found = AtomicUsize::new(usize::MAX);
    let results: Vec<Subtree> = subtrees
        .into_par_iter()
        .enumerate()
        .map(|(i, mut st)| {
            if first_found.load(Ordering::Relaxed) < i {
                return Subtree::Skipped;
            }
            let mut search = TargetSearch { index, target, nodes: 0, budget: per, scratch: FixedBitSet::with_capacity(index.blocks.len()) };
            match search.run(&mut st) {
                Some(Some(mut arc)) => {
                    first_found.fetch_min(i, Ordering::Relaxed);
                    arc.truncate(target);
                    arc.sort_unstable();
                    Subtree::Found(arc)
                }
                Some(None) => Subtree::Infeasible,
                None => Subtree::Exhausted,
            }
        })
        .collect();
    let mut exhausted = false;
    for r in results {
        match r {
            Subtree::Found(arc) => return Ok(arc),
            Subtree::Exhausted => exhausted = true,
            Subtree::Infeasible | Subtree::Skipped => {}
        }
    }
    if exhausted {
        Err(Error::BudgetExhausted)
    } else {
        Err(Error::Infeasible(target))
    }
}

/// Largest arc found, with a proof flag when the exact search completed.
#[derive(Clone, Debug, Serialize)]
pub struct MaxArc {
    pub size: usize,
    pub witness: Vec<u32>,
    pub proven_optimal: bool,
}

struct MaxSearch<'a> {
    index: &'a CollinearityIndex,
    best_size: usize,
    witness: Option<Vec<u32>>,
    nodes: u64,
    budget: u64,
    scratch: FixedBitSet,
}

impl MaxSearch<'_> {
    /// Returns false when the node budget ran out.
    fn run(&mut self, st: &mut ArcSearchState) -> bool {
        let size = st.arc.len();
        if size > self.best_size || (size == self.best_size && self.witness.is_none()) {
            self.best_size = size;
            let mut w = st.arc.clone();
            w.sort_unstable();
            self.witness = Some(w);
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return false;
        }
        let bound = st.upper_bound(self.index, &mut self.scratch);
        if bound < self.best_size || (bound == self.best_size && self.witness.is_some()) {
            return true;
        }
        let Some(p) = st.candidates.minimum() else {
            return true;
        };
        let saved = st.candidates.clone();
        st.include(self.index, p);
        let ok = self.run(st);
        st.arc.pop();
        st.candidates = saved;
        if !ok {
            return false;
        }
        st.exclude(p);
        let ok = self.run(st);
        st.candidates.insert(p);
        ok
    }
}

/// Maximum arc size `m(D)` by branch-and-bound seeded with a greedy lower
/// bound. The witness is the lexicographically least maximum arc when the
/// search completes.
pub fn max_arc(design: &Design, budget: u64) -> Result<MaxArc> {
    let index = CollinearityIndex::new(design)?;
    let v = index.points();
    let greedy = greedy_arcs(&index, 0, DEFAULT_GREEDY_RESTARTS, None);
    let floor = greedy.len();
    let subtrees = frontier(&index, ArcSearchState::new(v));
    let per = (budget / subtrees.len() as u64).max(1);
    let results: Vec<(bool, usize, Option<Vec<u32>>)> = subtrees
        .into_par_iter()
        .map(|mut st| {
            let mut search = MaxSearch {
                index: &index,
                best_size: floor,
                witness: None,
                nodes: 0,
                budget: per,
                scratch: FixedBitSet::with_capacity(index.blocks.len()),
            };
            let complete = search.run(&mut st);
            (complete, search.best_size, search.witness)
        })
        .collect();
    let complete = results.iter().all(|r| r.0);
    let mut best: Option<(usize, Vec<u32>)> = None;
    for (_, size, witness) in results {
        if let Some(w) = witness {
            if best.as_ref().is_none_or(|(s, _)| size > *s) {
                best = Some((size, w));
            }
        }
    }
    let (size, witness) = match best {
        Some((s, w)) if s >= floor => (s, w),
        _ => (floor, greedy),
    };
    Ok(MaxArc { size, witness, proven_optimal: complete })
}
