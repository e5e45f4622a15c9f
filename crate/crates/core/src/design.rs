//! 2-designs: the data model, full validation, complementation, and the
//! unital constructors (Hermitian curve, parabolic Buekenhout-Metz, and the
//! order-2 affine plane).

use std::collections::HashSet;
use std::sync::OnceLock;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::field::{prime_power, FieldCtx, FieldElement};
use crate::plane::{ProjPoint, ProjectivePlane};

/// `(v, b, r, k, λ)` of a 2-design.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DesignParams {
    pub v: usize,
    pub b: usize,
    pub r: usize,
    pub k: usize,
    pub lambda: usize,
}

impl DesignParams {
    /// Parameters of a unital of order `n`: `(n³+1, n⁴−n³+n², n², n+1, 1)`.
    pub fn unital(n: usize) -> Self {
        DesignParams {
            v: n.pow(3) + 1,
            b: n.pow(4) - n.pow(3) + n * n,
            r: n * n,
            k: n + 1,
            lambda: 1,
        }
    }

    /// Checks `v > k ≥ 2`, `λ ≥ 1`, `vr = bk` and `r(k−1) = λ(v−1)`.
    ///
    /// `k > λ` is not required: complements of unitals of order `n ≥ 3` have
    /// `λ > k`.
    pub fn check_identities(&self) -> Result<()> {
        let DesignParams { v, b, r, k, lambda } = *self;
        if !(v > k && k >= 2 && lambda >= 1) {
            return Err(Error::InvalidDesign(format!("need v > k >= 2 and lambda >= 1, got {self:?}")));
        }
        if v * r != b * k {
            return Err(Error::InvalidDesign(format!("vr = {} but bk = {}", v * r, b * k)));
        }
        if r * (k - 1) != lambda * (v - 1) {
            return Err(Error::InvalidDesign(format!(
                "r(k-1) = {} but lambda(v-1) = {}",
                r * (k - 1),
                lambda * (v - 1)
            )));
        }
        Ok(())
    }

    /// `(v, b, b−r, v−k, b−2r+λ)`, when those are admissible.
    pub fn complement(&self) -> Result<Self> {
        let DesignParams { v, b, r, k, lambda } = *self;
        if v < k + 2 || b + lambda < 2 * r + 1 {
            return Err(Error::InvalidDesign(format!("complement of {self:?} is not a 2-design")));
        }
        Ok(DesignParams { v, b, r: b - r, k: v - k, lambda: b + lambda - 2 * r })
    }

    /// The order `n` if these are unital parameters.
    pub fn unital_order(&self) -> Option<usize> {
        let n = self.k.checked_sub(1)?;
        (n >= 2 && *self == DesignParams::unital(n)).then_some(n)
    }
}

/// Where a design came from. Stored in the JSON file and certificates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Hermitian { q: u64 },
    BuekenhoutMetz { q: u64, alpha: u32, beta: u32 },
    Order2,
    ProjectivePlane { order: u64 },
    Complement { of: Box<Provenance> },
    Imported,
}

/// A validated 2-design on points `0..v`.
#[derive(Debug)]
pub struct Design {
    v: usize,
    blocks: Vec<Vec<u32>>,
    params: DesignParams,
    provenance: Provenance,
    block_sets: OnceLock<Vec<FixedBitSet>>,
    point_blocks: OnceLock<Vec<Vec<u32>>>,
}

impl Clone for Design {
    fn clone(&self) -> Self {
        Design {
            v: self.v,
            blocks: self.blocks.clone(),
            params: self.params,
            provenance: self.provenance.clone(),
            block_sets: OnceLock::new(),
            point_blocks: OnceLock::new(),
        }
    }
}

impl PartialEq for Design {
    fn eq(&self, other: &Self) -> bool {
        self.v == other.v && self.blocks == other.blocks
    }
}

impl Eq for Design {}

/// On-disk form: `{ "v": .., "blocks": [[..], ..], "provenance": {..} }`.
#[derive(Debug, Serialize, Deserialize)]
pub struct DesignFile {
    pub v: usize,
    pub blocks: Vec<Vec<u32>>,
    pub provenance: Provenance,
}

/// Validates a block list on `v` points and returns its parameters.
///
/// Counts every point pair over all blocks, so each pair is checked to lie in
/// exactly λ blocks, and each point in exactly r.
pub fn validate_design(v: usize, blocks: &[Vec<u32>]) -> Result<DesignParams> {
    let first = blocks
        .first()
        .ok_or_else(|| Error::InvalidDesign("no blocks".into()))?;
    let k = first.len();
    let mut seen = HashSet::with_capacity(blocks.len());
    for block in blocks {
        if block.len() != k {
            return Err(Error::NonUniformBlockSize { first: k, other: block.len() });
        }
        let mut sorted = block.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != k {
            return Err(Error::InvalidDesign(format!("block {block:?} repeats a point")));
        }
        if let Some(&bad) = sorted.iter().find(|&&p| p as usize >= v) {
            return Err(Error::InvalidDesign(format!("point {bad} out of range 0..{v}")));
        }
        if !seen.insert(sorted) {
            return Err(Error::InvalidDesign(format!("block {block:?} appears twice")));
        }
    }
    if v < 2 || k < 2 {
        return Err(Error::InvalidDesign(format!("degenerate design with v = {v}, k = {k}")));
    }

    let mut pair = vec![0u32; v * v];
    let mut degree = vec![0usize; v];
    for block in blocks {
        for (i, &a) in block.iter().enumerate() {
            degree[a as usize] += 1;
            for &b in &block[i + 1..] {
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                pair[lo as usize * v + hi as usize] += 1;
            }
        }
    }
    let lambda = pair[1] as usize;
    for a in 0..v {
        for b in a + 1..v {
            let c = pair[a * v + b] as usize;
            if c != lambda {
                return Err(Error::PairCoverage(a, b, c, lambda));
            }
        }
    }
    let r = degree[0];
    if let Some((point, &d)) = degree.iter().enumerate().find(|(_, &d)| d != r) {
        return Err(Error::NonUniformDegree { point, degree: d, expected: r });
    }
    let params = DesignParams { v, b: blocks.len(), r, k, lambda };
    params.check_identities()?;
    Ok(params)
}

impl Design {
    /// Canonicalizes (sorted blocks, lexicographic block order) and validates.
    pub fn new(v: usize, blocks: Vec<Vec<u32>>, provenance: Provenance) -> Result<Self> {
        let mut blocks: Vec<Vec<u32>> = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        blocks.sort();
        let params = validate_design(v, &blocks)?;
        Ok(Design {
            v,
            blocks,
            params,
            provenance,
            block_sets: OnceLock::new(),
            point_blocks: OnceLock::new(),
        })
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn b(&self) -> usize {
        self.blocks.len()
    }

    pub fn params(&self) -> DesignParams {
        self.params
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Blocks as sorted point-id lists, in lexicographic order.
    pub fn blocks(&self) -> &[Vec<u32>] {
        &self.blocks
    }

    /// Re-runs full validation.
    pub fn validate(&self) -> Result<DesignParams> {
        validate_design(self.v, &self.blocks)
    }

    /// Blocks as point bitsets, built on first use.
    pub fn block_sets(&self) -> &[FixedBitSet] {
        self.block_sets.get_or_init(|| {
            self.blocks
                .iter()
                .map(|b| {
                    let mut s = FixedBitSet::with_capacity(self.v);
                    b.iter().for_each(|&p| s.insert(p as usize));
                    s
                })
                .collect()
        })
    }

    /// For each point, the ids of the blocks through it.
    pub fn point_blocks(&self) -> &[Vec<u32>] {
        self.point_blocks.get_or_init(|| {
            let mut out = vec![Vec::with_capacity(self.params.r); self.v];
            for (i, b) in self.blocks.iter().enumerate() {
                for &p in b {
                    out[p as usize].push(i as u32);
                }
            }
            out
        })
    }

    /// The unital order, if the parameters are those of a unital.
    pub fn unital_order(&self) -> Option<usize> {
        self.params.unital_order()
    }

    pub fn complement(&self) -> Result<Design> {
        let expected = self.params.complement()?;
        let blocks = self
            .block_sets()
            .iter()
            .map(|s| (0..self.v as u32).filter(|&p| !s.contains(p as usize)).collect())
            .collect();
        let d = Design::new(
            self.v,
            blocks,
            Provenance::Complement { of: Box::new(self.provenance.clone()) },
        )?;
        if d.params != expected {
            return Err(Error::Internal(format!(
                "complement has parameters {:?}, expected {expected:?}",
                d.params
            )));
        }
        Ok(d)
    }

    pub fn to_file(&self) -> DesignFile {
        DesignFile { v: self.v, blocks: self.blocks.clone(), provenance: self.provenance.clone() }
    }

    /// Deterministic JSON encoding; also the input of [`Design::digest`].
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("design serializes")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("design serializes")
    }

    /// Parses and fully re-validates. Provenance is kept as recorded.
    pub fn from_json(s: &str) -> Result<Design> {
        let file: DesignFile = serde_json::from_str(s)?;
        Design::new(file.v, file.blocks, file.provenance)
    }

    /// SHA-256 of the canonical JSON encoding, hex.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.to_json().as_bytes()))
    }

    /// PG(2, order) as a 2-(order²+order+1, order+1, 1) design; order 2 is the Fano plane.
    pub fn projective_plane(order: u64) -> Result<Design> {
        let plane = ProjectivePlane::new(std::sync::Arc::new(FieldCtx::with_order(order)?));
        let blocks = (0..plane.lines().len()).map(|l| plane.line_point_ids(l).to_vec()).collect();
        Design::new(plane.points().len(), blocks, Provenance::ProjectivePlane { order })
    }

    pub fn fano() -> Design {
        Design::projective_plane(2).expect("PG(2,2) is a design")
    }
}

/// A unital embedded in PG(2, q²): the design plus its ambient point ids.
#[derive(Debug)]
pub struct EmbeddedUnital {
    pub design: Design,
    pub plane: ProjectivePlane,
    /// Ambient id of design point `i`; ascending.
    pub ambient: Vec<u32>,
    /// Ambient lines meeting the point set exactly once.
    pub tangents: usize,
    /// Ambient lines missing the point set.
    pub passants: usize,
}

impl EmbeddedUnital {
    /// The ambient line id through two design points.
    pub fn ambient_line(&self, a: usize, b: usize) -> Result<usize> {
        let pts = self.plane.points();
        let pa = &pts[self.ambient[a] as usize];
        let pb = &pts[self.ambient[b] as usize];
        Ok(self.plane.line_id(&self.plane.line_through(pa, pb)?))
    }
}

/// Keeps the intersections of size ≥ 2 of every ambient line with the point
/// set as blocks, relabels points to `0..v`, and validates.
fn embedded_design(plane: ProjectivePlane, mut ambient: Vec<u32>, q: u64, provenance: Provenance) -> Result<EmbeddedUnital> {
    ambient.sort_unstable();
    let expected = (q * q * q + 1) as usize;
    if ambient.len() != expected {
        return Err(Error::Internal(format!("point set has {} points, expected {expected}", ambient.len())));
    }
    let mut local = vec![u32::MAX; plane.points().len()];
    for (i, &a) in ambient.iter().enumerate() {
        local[a as usize] = i as u32;
    }
    let mut blocks = Vec::new();
    let (mut tangents, mut passants) = (0, 0);
    for l in 0..plane.lines().len() {
        let meet: Vec<u32> = plane
            .line_point_ids(l)
            .iter()
            .map(|&p| local[p as usize])
            .filter(|&i| i != u32::MAX)
            .collect();
        match meet.len() {
            0 => passants += 1,
            1 => tangents += 1,
            n if n as u64 == q + 1 => blocks.push(meet),
            n => {
                return Err(Error::Internal(format!(
                    "line {l} meets the point set in {n} points, expected 1 or {}",
                    q + 1
                )))
            }
        }
    }
    let design = Design::new(expected, blocks, provenance)?;
    let n = q as usize;
    if design.params() != DesignParams::unital(n) {
        return Err(Error::Internal(format!("parameters {:?} are not those of a unital of order {n}", design.params())));
    }
    Ok(EmbeddedUnital { design, plane, ambient, tangents, passants })
}

fn require_unital_q(q: u64) -> Result<()> {
    if prime_power(q).is_none() {
        return Err(Error::NotPrimePower(q));
    }
    if q <= 2 {
        return Err(Error::InvalidParameter(format!("q must exceed 2, got {q}")));
    }
    Ok(())
}

/// The classical unital H(q) on the curve `x0^(q+1) + x1^(q+1) + x2^(q+1) = 0`.
pub fn hermitian_embedding(q: u64) -> Result<EmbeddedUnital> {
    require_unital_q(q)?;
    let plane = ProjectivePlane::over_quadratic(q)?;
    let f = plane.field();
    let ambient: Vec<u32> = plane
        .points()
        .iter()
        .enumerate()
        .filter(|(_, p)| {
            let s = p
                .coords()
                .iter()
                .fold(FieldElement::ZERO, |acc, &c| f.add(acc, f.norm_to_subfield(c).expect("quadratic")));
            s.is_zero()
        })
        .map(|(i, _)| i as u32)
        .collect();
    embedded_design(plane, ambient, q, Provenance::Hermitian { q })
}

pub fn construct_hermitian(q: u64) -> Result<Design> {
    hermitian_embedding(q).map(|e| e.design)
}

/// Checks the parabolic Buekenhout-Metz conditions for `(α, β)` in GF(q²).
///
/// Odd q: `(β^q − β)² + 4α^(q+1)` must be a nonzero non-square of GF(q).
/// Even q: `β ∉ GF(q)` and `α^(q+1) / (β^q + β)²` must have absolute trace 0.
pub fn bm_admissibility(field: &FieldCtx, alpha: FieldElement, beta: FieldElement) -> Result<()> {
    let q = field.subfield_order().ok_or(Error::NotQuadraticExtension)? as u64;
    let bq = field.frobenius_q(beta)?;
    let na = field.norm_to_subfield(alpha)?;
    if q % 2 == 1 {
        let diff = field.sub(bq, beta);
        let four = field.from_int(4);
        let disc = field.add(field.mul(diff, diff), field.mul(four, na));
        if disc.is_zero() {
            return Err(Error::Inadmissible("(beta^q - beta)^2 + 4 alpha^(q+1) is zero".into()));
        }
        if field.is_square_in_subfield(disc)? {
            return Err(Error::Inadmissible("(beta^q - beta)^2 + 4 alpha^(q+1) is a square in GF(q)".into()));
        }
    } else {
        let sum = field.add(bq, beta);
        if sum.is_zero() {
            return Err(Error::Inadmissible("beta lies in GF(q)".into()));
        }
        let ratio = field.div(na, field.mul(sum, sum))?;
        if field.abs_trace_to_f2(ratio)? != 0 {
            return Err(Error::Inadmissible("alpha^(q+1)/(beta^q + beta)^2 has trace 1 over GF(2)".into()));
        }
    }
    Ok(())
}

/// Every admissible `(α, β)` in GF(q²)², in index order.
pub fn admissible_bm_pairs(q: u64) -> Result<Vec<(FieldElement, FieldElement)>> {
    require_unital_q(q)?;
    let field = FieldCtx::quadratic(q)?;
    let mut out = Vec::new();
    for alpha in field.elements() {
        for beta in field.elements() {
            if bm_admissibility(&field, alpha, beta).is_ok() {
                out.push((alpha, beta));
            }
        }
    }
    Ok(out)
}

/// The parabolic BM-unital U(α, β, q) with point set
/// `{(x, αx² + βx^(q+1) + r, 1)} ∪ {(0, 1, 0)}`.
pub fn bm_embedding(q: u64, alpha: FieldElement, beta: FieldElement) -> Result<EmbeddedUnital> {
    require_unital_q(q)?;
    let plane = ProjectivePlane::over_quadratic(q)?;
    let f = plane.field();
    f.element(alpha.0 as u64)?;
    f.element(beta.0 as u64)?;
    bm_admissibility(f, alpha, beta)?;
    let sub = f.subfield_elements()?;
    let mut ambient = Vec::with_capacity((q * q * q + 1) as usize);
    let mut seen = HashSet::new();
    for x in f.elements() {
        let base = f.add(f.mul(alpha, f.mul(x, x)), f.mul(beta, f.norm_to_subfield(x)?));
        for &r in &sub {
            let p = ProjPoint::new(f, [x, f.add(base, r), FieldElement::ONE])?;
            let id = plane.point_id(&p) as u32;
            if !seen.insert(id) {
                return Err(Error::Internal(format!("duplicate point {id} in the BM point set")));
            }
            ambient.push(id);
        }
    }
    let infinity = ProjPoint::new(f, [FieldElement::ZERO, FieldElement::ONE, FieldElement::ZERO])?;
    let id = plane.point_id(&infinity) as u32;
    if !seen.insert(id) {
        return Err(Error::Internal("point at infinity repeated".into()));
    }
    ambient.push(id);
    embedded_design(plane, ambient, q, Provenance::BuekenhoutMetz { q, alpha: alpha.0, beta: beta.0 })
}

pub fn construct_bm(q: u64, alpha: FieldElement, beta: FieldElement) -> Result<Design> {
    bm_embedding(q, alpha, beta).map(|e| e.design)
}

/// The affine plane AG(2, 3), the unique 2-(9, 3, 1) design.
/// Point `(a, b)` has id `3a + b`.
pub fn construct_order2_unital() -> Design {
    let id = |a: u32, b: u32| 3 * (a % 3) + (b % 3);
    let mut blocks = Vec::with_capacity(12);
    for slope in 0..3 {
        for c in 0..3 {
            blocks.push((0..3).map(|a| id(a, slope * a + c)).collect());
        }
    }
    for c in 0..3 {
        blocks.push((0..3).map(|b| id(c, b)).collect());
    }
    Design::new(9, blocks, Provenance::Order2).expect("AG(2,3) is a 2-(9,3,1) design")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fano_params() {
        let d = Design::fano();
        assert_eq!(d.params(), DesignParams { v: 7, b: 7, r: 3, k: 3, lambda: 1 });
    }

    #[test]
    fn order2_params_and_complement() {
        let d = construct_order2_unital();
        assert_eq!(d.params(), DesignParams { v: 9, b: 12, r: 4, k: 3, lambda: 1 });
        assert_eq!(d.unital_order(), Some(2));
        let c = d.complement().unwrap();
        assert_eq!(c.params(), DesignParams { v: 9, b: 12, r: 8, k: 6, lambda: 5 });
        assert_eq!(c.complement().unwrap(), d);
    }

    #[test]
    fn unital_complement_params() {
        for n in 2..6 {
            let c = DesignParams::unital(n).complement().unwrap();
            let n4 = n.pow(4);
            let n3 = n.pow(3);
            assert_eq!(c, DesignParams { v: n3 + 1, b: n4 - n3 + n * n, r: n4 - n3, k: n3 - n, lambda: n4 - n3 - n * n + 1 });
        }
    }

    #[test]
    fn hermitian_complement_has_lambda_above_k() {
        let h = construct_hermitian(3).unwrap();
        let c = h.complement().unwrap();
        assert_eq!(c.params(), DesignParams { v: 28, b: 63, r: 54, k: 24, lambda: 46 });
        assert_eq!(c.complement().unwrap(), h);
    }

    #[test]
    fn validation_reports_errors() {
        let mut blocks = construct_order2_unital().blocks().to_vec();
        blocks.pop();
        assert!(matches!(validate_design(9, &blocks), Err(Error::PairCoverage(..))));
        let mut uneven = blocks.clone();
        uneven[0].push(8);
        assert!(matches!(validate_design(9, &uneven), Err(Error::NonUniformBlockSize { .. })));
        assert!(validate_design(9, &[]).is_err());
    }

    #[test]
    fn hermitian_three() {
        let e = hermitian_embedding(3).unwrap();
        assert_eq!(e.design.params(), DesignParams { v: 28, b: 63, r: 9, k: 4, lambda: 1 });
        assert_eq!(e.tangents, 28);
        assert_eq!(e.passants, 0);
        assert_eq!(e.design.params().b + e.tangents, 91);
    }

    #[test]
    fn hermitian_rejects_small_q() {
        assert!(construct_hermitian(2).is_err());
        assert!(matches!(construct_hermitian(6), Err(Error::NotPrimePower(6))));
    }

    #[test]
    fn blocks_are_ambient_line_intersections() {
        let e = hermitian_embedding(3).unwrap();
        let d = &e.design;
        let pb = d.point_blocks();
        for a in 0..d.v() {
            for b in a + 1..d.v() {
                let common: Vec<u32> = pb[a].iter().filter(|x| pb[b].contains(x)).copied().collect();
                assert_eq!(common.len(), 1);
                let line = e.ambient_line(a, b).unwrap();
                let on: Vec<u32> = e
                    .plane
                    .line_point_ids(line)
                    .iter()
                    .filter_map(|p| e.ambient.binary_search(p).ok().map(|i| i as u32))
                    .collect();
                assert_eq!(on, d.blocks()[common[0] as usize]);
            }
        }
    }

    #[test]
    fn bm_odd_inadmissible_reports_reason() {
        let f = FieldCtx::quadratic(3).unwrap();
        // alpha = 0, beta = 0: discriminant vanishes.
        let err = bm_admissibility(&f, FieldElement(0), FieldElement(0)).unwrap_err();
        assert!(err.to_string().contains("zero"));
    }

    #[test]
    fn bm_even_requires_beta_outside_subfield() {
        let f = FieldCtx::quadratic(4).unwrap();
        let err = bm_admissibility(&f, FieldElement(1), FieldElement(1)).unwrap_err();
        assert!(err.to_string().contains("GF(q)"));
    }

    #[test]
    fn json_round_trip_revalidates() {
        let d = construct_order2_unital();
        let back = Design::from_json(&d.to_json()).unwrap();
        assert_eq!(back, d);
        assert_eq!(back.digest(), d.digest());
        let bad = r#"{"v":9,"blocks":[[0,1,2],[0,3,6]],"provenance":{"kind":"imported"}}"#;
        assert!(Design::from_json(bad).is_err());
    }
}
