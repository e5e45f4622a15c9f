//! Extremal subsets `S = X ∪ Y` for unital incidence graphs: `X` part of an
//! arc, `Y ⊇ N(X)` a block set padding `S` to half the vertex count, so
//! `N(S) = N(Y) \ X`.

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use super::{floor_c, g_of, half_size, theorem1_bounds};
use crate::arc::is_arc;
use crate::design::{Design, Provenance};
use crate::error::{Error, Result};
use crate::iso::{build_graph, neighborhood, Flavor, VertexSubset, Witness};
use crate::rational::{int, ratio, Fraction};

/// Identifies the design a certificate was built on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignRef {
    pub provenance: Provenance,
    pub digest: String,
    pub v: usize,
    pub b: usize,
    pub order: u64,
}

/// Everything `verify` recomputes from the design and the witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateChecks {
    /// `x = |X|`.
    pub arc_points: usize,
    pub x_is_arc: bool,
    /// `|N(X)|`, which must equal `g(x) − x`.
    pub blocks_on_arc: usize,
    pub g_minus_x: usize,
    pub n_x_within_y: bool,
    /// Blocks of `Y` not in `N(X)`.
    pub padding: usize,
    pub subset_size: usize,
    pub half_size: usize,
    pub boundary_size: usize,
    /// `n³ + 1 − x`, the construction's bound on `|N(S)|`.
    pub boundary_cap: usize,
    pub floor_c: u64,
    pub lower_bound: Fraction,
    /// `x = ⌊c(n)⌋`, so the measured ratio equals the lower bound.
    pub pinch: bool,
}

/// A subset of the incidence graph whose ratio is recomputable from the
/// stored design alone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub design: DesignRef,
    pub witness: Witness,
    pub claimed: Fraction,
    pub checks: CertificateChecks,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

fn order_of(design: &Design) -> Result<u64> {
    design
        .unital_order()
        .map(|n| n as u64)
        .ok_or_else(|| Error::InvalidParameter(format!("{:?} are not unital parameters", design.params())))
}

fn measure(design: &Design, n: u64, x_pts: &[u32], y_blocks: &[u32]) -> Result<(CertificateChecks, Fraction)> {
    let graph = build_graph(design, Flavor::Incidence)?;
    let s = graph.subset(x_pts, y_blocks)?;
    let x = x_pts.len();
    let n_x = graph.blocks_adjacent_to(&s.points);
    let n_s = neighborhood(&graph, &s);
    let g_minus_x = g_of(n, x as u64)? - int(x);
    let g_minus_x: usize = g_minus_x.to_integer().try_into().map_err(|_| Error::Internal("g(x) - x".into()))?;
    let fc = floor_c(n)?;
    let lower = theorem1_bounds(n, 3)?.lower;
    let size = s.len();
    let boundary = n_s.len();
    let claimed = ratio(boundary, size.max(1));
    let checks = CertificateChecks {
        arc_points: x,
        x_is_arc: is_arc(design, x_pts)?,
        blocks_on_arc: n_x.count_ones(..),
        g_minus_x,
        n_x_within_y: n_x.is_subset(&s.blocks),
        padding: s.blocks.difference_count(&n_x),
        subset_size: size,
        half_size: half_size(n) as usize,
        boundary_size: boundary,
        boundary_cap: (n.pow(3) + 1) as usize - x,
        floor_c: fc,
        lower_bound: Fraction::from_rational(&lower)?,
        pinch: x as u64 == fc && claimed == lower,
    };
    Ok((checks, Fraction::from_rational(&claimed)?))
}

fn require(ok: bool, what: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Verification(what()))
    }
}

/// Invariants every valid certificate satisfies, independent of how `Y`
/// was padded.
fn check_invariants(c: &CertificateChecks, claimed: &Fraction) -> Result<()> {
    require(c.x_is_arc, || "X is not an arc".into())?;
    require(c.blocks_on_arc == c.g_minus_x, || {
        format!("|N(X)| = {} but g(x) - x = {}", c.blocks_on_arc, c.g_minus_x)
    })?;
    require(c.n_x_within_y, || "N(X) is not contained in Y".into())?;
    require(c.subset_size == c.half_size, || format!("|S| = {} != {}", c.subset_size, c.half_size))?;
    require(c.boundary_size <= c.boundary_cap, || {
        format!("|N(S)| = {} exceeds n^3 + 1 - x = {}", c.boundary_size, c.boundary_cap)
    })?;
    let claimed = claimed.to_rational()?;
    let lower = c.lower_bound.to_rational()?;
    require(claimed >= lower, || format!("ratio {claimed} is below the lower bound {lower}"))?;
    if c.arc_points as u64 == c.floor_c {
        require(c.pinch && claimed == lower, || format!("x = floor c but ratio {claimed} != {lower}"))?;
    }
    Ok(())
}

/// Builds the extremal subset from the first `min(|A|, ⌊c(n)⌋)` points of the
/// sorted arc `A`, padding `Y` with the lowest-id blocks outside `N(X)`.
pub fn construct_extremal_set(design: &Design, arc: &[u32]) -> Result<Certificate> {
    let n = order_of(design)?;
    if arc.is_empty() {
        return Err(Error::EmptySubset);
    }
    if !is_arc(design, arc)? {
        return Err(Error::NotAnArc);
    }
    let mut sorted = arc.to_vec();
    sorted.sort_unstable();
    let fc = floor_c(n)?;
    let x_pts: Vec<u32> = sorted.into_iter().take(fc as usize).collect();
    let x = x_pts.len();

    let graph = build_graph(design, Flavor::Incidence)?;
    let mut pts = FixedBitSet::with_capacity(design.v());
    x_pts.iter().for_each(|&p| pts.insert(p as usize));
    let mut y = graph.blocks_adjacent_to(&pts);
    let target = half_size(n) as usize - x;
    if y.count_ones(..) > target {
        return Err(Error::Internal(format!("|N(X)| = {} exceeds |Y| = {target}", y.count_ones(..))));
    }
    let free: Vec<usize> = (0..design.b()).filter(|&j| !y.contains(j)).collect();
    let need = target - y.count_ones(..);
    if free.len() < need {
        return Err(Error::Internal("not enough blocks to pad Y".into()));
    }
    free[..need].iter().for_each(|&j| y.insert(j));
    let s = VertexSubset { points: pts, blocks: y };
    let y_blocks = s.block_ids();
    let (checks, claimed) = measure(design, n, &x_pts, &y_blocks)?;
    check_invariants(&checks, &claimed)?;
    Ok(Certificate {
        design: DesignRef {
            provenance: design.provenance().clone(),
            digest: design.digest(),
            v: design.v(),
            b: design.b(),
            order: n,
        },
        witness: s.witness(),
        claimed,
        checks,
    })
}

/// Recomputes every stored check from `design` and the witness.
pub fn verify_certificate(cert: &Certificate, design: &Design) -> Result<()> {
    let digest = design.digest();
    require(digest == cert.design.digest, || {
        format!("design digest {digest} does not match certificate {}", cert.design.digest)
    })?;
    let n = order_of(design)?;
    require(n == cert.design.order, || format!("design has order {n}, certificate says {}", cert.design.order))?;
    let mut pts = cert.witness.points.clone();
    pts.sort_unstable();
    pts.dedup();
    require(pts == cert.witness.points, || "witness points are not sorted and distinct".into())?;
    let mut blocks = cert.witness.blocks.clone();
    blocks.sort_unstable();
    blocks.dedup();
    require(blocks == cert.witness.blocks, || "witness blocks are not sorted and distinct".into())?;
    let (checks, claimed) = measure(design, n, &pts, &blocks)?;
    require(claimed == cert.claimed, || {
        format!("recomputed ratio {}/{} differs from claimed {}/{}", claimed.num, claimed.den, cert.claimed.num, cert.claimed.den)
    })?;
    require(checks == cert.checks, || format!("recomputed checks {checks:?} differ from stored {:?}", cert.checks))?;
    check_invariants(&checks, &claimed)
}
