//! Exact isoperimetric number by enumerating every vertex subset.
//!
//! Subsets are walked in Gray-code order so each step toggles one vertex and
//! the per-vertex count of neighbors inside `S` is updated in `O(deg)`. The
//! top few vertices are fixed per chunk and chunks run in parallel; the merge
//! uses a total order, so the result does not depend on the thread count.

use rayon::prelude::*;

use super::{IsoGraph, IsoResult, Method};
use crate::error::{Error, Result};
use crate::rational::ratio;

pub const WORK_GUARD_ENV: &str = "ISO_WORK_GUARD";
const DEFAULT_WORK_GUARD: u128 = 1 << 31;
const MAX_VERTICES: usize = 64;

/// The guard from `ISO_WORK_GUARD`, or 2³¹ subset visits.
pub fn default_work_guard() -> u128 {
    std::env::var(WORK_GUARD_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_WORK_GUARD)
}

#[derive(Clone, Debug)]
pub struct BruteOptions {
    /// Refuse when [`work_estimate`] exceeds this many subset visits.
    pub guard: u128,
}

impl Default for BruteOptions {
    fn default() -> Self {
        BruteOptions { guard: default_work_guard() }
    }
}

/// Subset visits the Gray-code walk performs: `2^(v+b)`.
pub fn work_estimate(graph: &IsoGraph) -> u128 {
    let n = graph.vertex_count();
    if n >= 127 {
        u128::MAX
    } else {
        1u128 << n
    }
}

#[derive(Clone, Copy)]
struct Best {
    boundary: usize,
    size: usize,
    mask: u64,
}

fn lex_less(a: u64, b: u64) -> bool {
    // For equal sizes: the set holding the lowest differing vertex sorts first.
    let d = a ^ b;
    d != 0 && a & (d & d.wrapping_neg()) != 0
}

impl Best {
    fn beats(&self, other: &Best) -> bool {
        let lhs = self.boundary as u128 * other.size as u128;
        let rhs = other.boundary as u128 * self.size as u128;
        lhs < rhs || (lhs == rhs && (self.size < other.size || (self.size == other.size && lex_less(self.mask, other.mask))))
    }

    fn pick(a: Option<Best>, b: Option<Best>) -> Option<Best> {
        match (a, b) {
            (Some(x), Some(y)) => Some(if y.beats(&x) { y } else { x }),
            (x, None) => x,
            (None, y) => y,
        }
    }
}

fn walk_chunk(adj: &[u64], neighbors: &[Vec<u32>], low_bits: usize, prefix: u64) -> Option<Best> {
    let n = adj.len();
    let half = n / 2;
    if prefix.count_ones() as usize > half {
        return None;
    }
    let mut count = vec![0u16; n];
    let mut nmask = 0u64;
    let mut s = prefix;
    let mut rest = prefix;
    while rest != 0 {
        let u = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        for &w in &neighbors[u] {
            count[w as usize] += 1;
        }
        nmask |= adj[u];
    }
    let mut best: Option<Best> = None;
    let consider = |s: u64, nmask: u64, best: &mut Option<Best>| {
        let size = s.count_ones() as usize;
        if size == 0 || size > half {
            return;
        }
        let cand = Best { boundary: (nmask & !s).count_ones() as usize, size, mask: s };
        if best.is_none_or(|b| cand.beats(&b)) {
            *best = Some(cand);
        }
    };
    consider(s, nmask, &mut best);
    let steps: u64 = 1u64 << low_bits;
    for i in 1..steps {
        let u = i.trailing_zeros() as usize;
        let bit = 1u64 << u;
        if s & bit != 0 {
            for &w in &neighbors[u] {
                let c = &mut count[w as usize];
                *c -= 1;
                if *c == 0 {
                    nmask &= !(1u64 << w);
                }
            }
        } else {
            for &w in &neighbors[u] {
                let c = &mut count[w as usize];
                *c += 1;
                if *c == 1 {
                    nmask |= 1u64 << w;
                }
            }
        }
        s ^= bit;
        consider(s, nmask, &mut best);
    }
    best
}

/// Exact `i(G)` with the least witness under (ratio, size, sorted ids).
pub fn brute_force_iso(graph: &IsoGraph, opts: &BruteOptions) -> Result<IsoResult> {
    let n = graph.vertex_count();
    let estimate = work_estimate(graph);
    if estimate > opts.guard || n > MAX_VERTICES {
        return Err(Error::WorkGuard { estimate, guard: opts.guard });
    }
    if n < 2 {
        return Err(Error::InvalidParameter("graph needs at least two vertices".into()));
    }
    let neighbors: Vec<Vec<u32>> = (0..n).map(|u| graph.adjacency(u).to_vec()).collect();
    let adj: Vec<u64> = neighbors
        .iter()
        .map(|ns| ns.iter().fold(0u64, |m, &w| m | (1u64 << w)))
        .collect();
    let prefix_bits = (n / 3).min(10);
    let low_bits = n - prefix_bits;
    let best = (0..1u64 << prefix_bits)
        .into_par_iter()
        .map(|c| walk_chunk(&adj, &neighbors, low_bits, c << low_bits))
        .reduce(|| None, Best::pick)
        .ok_or_else(|| Error::Internal("no admissible subset".into()))?;
    let witness = graph.subset_from_global((0..n).filter(|&u| best.mask >> u & 1 == 1));
    Ok(IsoResult { ratio: ratio(best.boundary, best.size), witness, method: Method::Brute })
}
