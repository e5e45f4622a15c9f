//! Bipartite (non-)incidence graphs of designs and their vertex-isoperimetric
//! number.
//!
//! Vertex numbering is global where a single index space is needed: points
//! are `0..v`, blocks are `v..v+b`.

mod brute;
mod heuristic;
mod theorem3;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::design::{Design, DesignParams};
use crate::error::{Error, Result};
use crate::rational::{ratio, ExactValue};
use crate::Rational;

pub use brute::{brute_force_iso, default_work_guard, work_estimate, BruteOptions, WORK_GUARD_ENV};
pub use heuristic::{heuristic_iso, HeuristicOptions};
pub use theorem3::{
    check_theorem3, lb_main1, lb_main2, lb_main3, lb_main4, Main1Check, Theorem3Report,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flavor {
    Incidence,
    NonIncidence,
}

impl std::str::FromStr for Flavor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "incidence" => Ok(Flavor::Incidence),
            "nonincidence" | "non-incidence" | "non_incidence" => Ok(Flavor::NonIncidence),
            other => Err(Error::InvalidParameter(format!("unknown flavor {other:?}"))),
        }
    }
}

/// Bipartite graph on points ∪ blocks with bitset adjacency on both sides.
#[derive(Clone, Debug)]
pub struct IsoGraph {
    v: usize,
    b: usize,
    flavor: Flavor,
    /// Parameters of the design whose incidence graph this is.
    params: DesignParams,
    point_adj: Vec<FixedBitSet>,
    block_adj: Vec<FixedBitSet>,
    /// Global-index neighbor lists, for the search kernels.
    adjacency: Vec<Vec<u32>>,
}

pub fn build_graph(design: &Design, flavor: Flavor) -> Result<IsoGraph> {
    let (v, b) = (design.v(), design.b());
    let sets = design.block_sets();
    let mut block_adj: Vec<FixedBitSet> = sets.to_vec();
    let params = match flavor {
        Flavor::Incidence => design.params(),
        Flavor::NonIncidence => {
            for s in &mut block_adj {
                s.toggle_range(..);
            }
            design.params().complement()?
        }
    };
    let mut point_adj = vec![FixedBitSet::with_capacity(b); v];
    for (j, s) in block_adj.iter().enumerate() {
        for p in s.ones() {
            point_adj[p].insert(j);
        }
    }
    let mut adjacency: Vec<Vec<u32>> = point_adj
        .iter()
        .map(|s| s.ones().map(|j| (v + j) as u32).collect())
        .collect();
    adjacency.extend(block_adj.iter().map(|s| s.ones().map(|p| p as u32).collect()));
    Ok(IsoGraph { v, b, flavor, params, point_adj, block_adj, adjacency })
}

impl IsoGraph {
    pub fn points(&self) -> usize {
        self.v
    }

    pub fn blocks(&self) -> usize {
        self.b
    }

    pub fn vertex_count(&self) -> usize {
        self.v + self.b
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    /// Parameters of the design this graph is the incidence graph of
    /// (the complement's, for the non-incidence flavor).
    pub fn params(&self) -> DesignParams {
        self.params
    }

    pub fn edge_count(&self) -> usize {
        self.point_adj.iter().map(|s| s.count_ones(..)).sum()
    }

    /// Blocks adjacent to point `p`.
    pub fn point_neighbors(&self, p: usize) -> &FixedBitSet {
        &self.point_adj[p]
    }

    /// Points adjacent to block `j`.
    pub fn block_neighbors(&self, j: usize) -> &FixedBitSet {
        &self.block_adj[j]
    }

    /// Neighbors of global vertex `u`, as global indices.
    pub fn adjacency(&self, u: usize) -> &[u32] {
        &self.adjacency[u]
    }

    pub fn empty_subset(&self) -> VertexSubset {
        VertexSubset {
            points: FixedBitSet::with_capacity(self.v),
            blocks: FixedBitSet::with_capacity(self.b),
        }
    }

    pub fn subset(&self, points: &[u32], blocks: &[u32]) -> Result<VertexSubset> {
        let mut s = self.empty_subset();
        for &p in points {
            if p as usize >= self.v {
                return Err(Error::InvalidParameter(format!("point {p} out of range")));
            }
            s.points.insert(p as usize);
        }
        for &j in blocks {
            if j as usize >= self.b {
                return Err(Error::InvalidParameter(format!("block {j} out of range")));
            }
            s.blocks.insert(j as usize);
        }
        Ok(s)
    }

    /// Subset from global vertex indices.
    pub fn subset_from_global(&self, vertices: impl IntoIterator<Item = usize>) -> VertexSubset {
        let mut s = self.empty_subset();
        for u in vertices {
            if u < self.v {
                s.points.insert(u);
            } else {
                s.blocks.insert(u - self.v);
            }
        }
        s
    }

    /// Blocks adjacent to some point of `points`.
    pub fn blocks_adjacent_to(&self, points: &FixedBitSet) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.b);
        for p in points.ones() {
            out.union_with(&self.point_adj[p]);
        }
        out
    }

    /// Points adjacent to some block of `blocks`.
    pub fn points_adjacent_to(&self, blocks: &FixedBitSet) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.v);
        for j in blocks.ones() {
            out.union_with(&self.block_adj[j]);
        }
        out
    }

    pub fn export(&self) -> GraphExport {
        GraphExport {
            flavor: self.flavor,
            points: self.v,
            blocks: self.b,
            edges: self.edge_count(),
            point_adjacency: self
                .point_adj
                .iter()
                .map(|s| s.ones().map(|j| j as u32).collect())
                .collect(),
        }
    }

    /// Edge list with header `p bip v b e` and lines `e p_id b_id`, 1-indexed.
    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p bip {} {} {}\n", self.v, self.b, self.edge_count());
        for (p, s) in self.point_adj.iter().enumerate() {
            for j in s.ones() {
                out.push_str(&format!("e {} {}\n", p + 1, j + 1));
            }
        }
        out
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct GraphExport {
    pub flavor: Flavor,
    pub points: usize,
    pub blocks: usize,
    pub edges: usize,
    /// For each point, the adjacent block ids.
    pub point_adjacency: Vec<Vec<u32>>,
}

/// `S = X ∪ Y` with `X` a set of points and `Y` a set of blocks.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VertexSubset {
    pub points: FixedBitSet,
    pub blocks: FixedBitSet,
}

/// `x = |X|`, `y = |Y|`, `x' = |N(Y) \ X|`, `y' = |N(X) \ Y|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Profile {
    pub x: usize,
    pub y: usize,
    pub x_prime: usize,
    pub y_prime: usize,
}

impl Profile {
    pub fn size(&self) -> usize {
        self.x + self.y
    }

    pub fn boundary(&self) -> usize {
        self.x_prime + self.y_prime
    }
}

impl VertexSubset {
    pub fn len(&self) -> usize {
        self.points.count_ones(..) + self.blocks.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_clear() && self.blocks.is_clear()
    }

    pub fn point_ids(&self) -> Vec<u32> {
        self.points.ones().map(|p| p as u32).collect()
    }

    pub fn block_ids(&self) -> Vec<u32> {
        self.blocks.ones().map(|j| j as u32).collect()
    }

    /// Global vertex indices, ascending.
    pub fn global_ids(&self) -> Vec<usize> {
        let v = self.points.len();
        self.points.ones().chain(self.blocks.ones().map(|j| j + v)).collect()
    }

    pub fn is_subset(&self, other: &VertexSubset) -> bool {
        self.points.is_subset(&other.points) && self.blocks.is_subset(&other.blocks)
    }

    pub fn union(&self, other: &VertexSubset) -> VertexSubset {
        let mut out = self.clone();
        out.points.union_with(&other.points);
        out.blocks.union_with(&other.blocks);
        out
    }

    pub fn is_disjoint(&self, other: &VertexSubset) -> bool {
        self.points.is_disjoint(&other.points) && self.blocks.is_disjoint(&other.blocks)
    }

    pub fn profile(&self, graph: &IsoGraph) -> Profile {
        let ny = graph.points_adjacent_to(&self.blocks);
        let nx = graph.blocks_adjacent_to(&self.points);
        Profile {
            x: self.points.count_ones(..),
            y: self.blocks.count_ones(..),
            x_prime: ny.difference_count(&self.points),
            y_prime: nx.difference_count(&self.blocks),
        }
    }

    pub fn witness(&self) -> Witness {
        Witness { points: self.point_ids(), blocks: self.block_ids() }
    }
}

/// `N(S)`: vertices outside `S` adjacent to some vertex of `S`.
pub fn neighborhood(graph: &IsoGraph, s: &VertexSubset) -> VertexSubset {
    let mut points = graph.points_adjacent_to(&s.blocks);
    points.difference_with(&s.points);
    let mut blocks = graph.blocks_adjacent_to(&s.points);
    blocks.difference_with(&s.blocks);
    VertexSubset { points, blocks }
}

fn check_size(graph: &IsoGraph, size: usize) -> Result<()> {
    if size == 0 {
        return Err(Error::EmptySubset);
    }
    if 2 * size > graph.vertex_count() {
        return Err(Error::OversizedSubset { size, total: graph.vertex_count() });
    }
    Ok(())
}

/// `|N(S)| / |S|` for `1 ≤ |S|` and `2|S| ≤ v + b`.
pub fn iso_ratio(graph: &IsoGraph, s: &VertexSubset) -> Result<Rational> {
    let size = s.len();
    check_size(graph, size)?;
    Ok(ratio(neighborhood(graph, s).len(), size))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Brute,
    Heuristic,
    Certificate,
}

/// Point and block ids of a subset, as stored in JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub points: Vec<u32>,
    pub blocks: Vec<u32>,
}

#[derive(Clone, Debug)]
pub struct IsoResult {
    pub ratio: Rational,
    pub witness: VertexSubset,
    pub method: Method,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct IsoResultFile {
    pub flavor: Flavor,
    pub method: Method,
    pub ratio: ExactValue,
    pub subset_size: usize,
    pub boundary_size: usize,
    pub witness: Witness,
}

impl IsoResult {
    /// Recomputes the ratio from the witness.
    pub fn recheck(&self, graph: &IsoGraph) -> Result<()> {
        let r = iso_ratio(graph, &self.witness)?;
        if r != self.ratio {
            return Err(Error::Verification(format!("witness ratio {r} differs from recorded {}", self.ratio)));
        }
        Ok(())
    }

    pub fn to_file(&self, graph: &IsoGraph) -> Result<IsoResultFile> {
        Ok(IsoResultFile {
            flavor: graph.flavor(),
            method: self.method,
            ratio: ExactValue::new(&self.ratio)?,
            subset_size: self.witness.len(),
            boundary_size: neighborhood(graph, &self.witness).len(),
            witness: self.witness.witness(),
        })
    }
}

/// Total order used to pick among minimizers: ratio, then size, then the
/// lexicographically least sorted vertex list.
pub(crate) fn better_candidate(
    (n1, s1, ids1): (usize, usize, &[usize]),
    (n2, s2, ids2): (usize, usize, &[usize]),
) -> bool {
    let lhs = n1 as u128 * s2 as u128;
    let rhs = n2 as u128 * s1 as u128;
    lhs < rhs || (lhs == rhs && (s1 < s2 || (s1 == s2 && ids1 < ids2)))
}
