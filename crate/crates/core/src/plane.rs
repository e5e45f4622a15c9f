//! The Desarguesian plane PG(2, Q) over a finite field of order Q.
//!
//! Points and lines are homogeneous triples normalized so the first nonzero
//! coordinate is 1. Every normalized triple has `x0 ∈ {0, 1}`, so the dense id
//! of a point is simply its rank in lexicographic order of coordinate indices:
//! `(0,0,1)` is 0, `(0,1,a)` is `1 + a`, `(1,a,b)` is `1 + Q + aQ + b`.
//! Lines use the same scheme on their dual coordinates.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElement, FieldSpec};

pub type Triple = [FieldElement; 3];

/// Normalized homogeneous coordinates of a point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint(Triple);

/// Normalized dual coordinates `(a0, a1, a2)` of the line `a0x0 + a1x1 + a2x2 = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjLine(Triple);

fn normalize(field: &FieldCtx, t: Triple) -> Result<Triple> {
    let lead = t
        .iter()
        .copied()
        .find(|c| !c.is_zero())
        .ok_or_else(|| Error::InvalidCoordinates("all coordinates are zero".into()))?;
    let inv = field.inv(lead)?;
    Ok(t.map(|c| field.mul(c, inv)))
}

fn cross(field: &FieldCtx, a: Triple, b: Triple) -> Triple {
    let m = |x, y| field.mul(x, y);
    [
        field.sub(m(a[1], b[2]), m(a[2], b[1])),
        field.sub(m(a[2], b[0]), m(a[0], b[2])),
        field.sub(m(a[0], b[1]), m(a[1], b[0])),
    ]
}

fn dot(field: &FieldCtx, a: Triple, b: Triple) -> FieldElement {
    let s = field.add(field.mul(a[0], b[0]), field.mul(a[1], b[1]));
    field.add(s, field.mul(a[2], b[2]))
}

fn rank_of(order: usize, t: &Triple) -> usize {
    match (t[0].0, t[1].0) {
        (0, 0) => 0,
        (0, _) => 1 + t[2].index(),
        _ => 1 + order + t[1].index() * order + t[2].index(),
    }
}

impl ProjPoint {
    pub fn new(field: &FieldCtx, coords: Triple) -> Result<Self> {
        normalize(field, coords).map(ProjPoint)
    }

    pub fn coords(&self) -> Triple {
        self.0
    }
}

impl ProjLine {
    pub fn new(field: &FieldCtx, coords: Triple) -> Result<Self> {
        normalize(field, coords).map(ProjLine)
    }

    pub fn coords(&self) -> Triple {
        self.0
    }

    pub fn contains(&self, field: &FieldCtx, p: &ProjPoint) -> bool {
        dot(field, self.0, p.0).is_zero()
    }
}

/// Enumerated plane: immutable point and line tables plus the incidence lists.
#[derive(Debug)]
pub struct ProjectivePlane {
    field: Arc<FieldCtx>,
    points: Vec<ProjPoint>,
    lines: Vec<ProjLine>,
    line_points: Vec<Vec<u32>>,
}

impl ProjectivePlane {
    pub fn new(field: Arc<FieldCtx>) -> Self {
        let points = enumerate_points(&field);
        let lines: Vec<ProjLine> = points.iter().map(|p| ProjLine(p.0)).collect();
        let mut plane = ProjectivePlane { field, points, lines, line_points: Vec::new() };
        let line_points = plane.lines.iter().map(|l| plane.points_on_line(l)).collect();
        plane.line_points = line_points;
        plane
    }

    /// PG(2, q²), the ambient plane of unitals of order q.
    pub fn over_quadratic(q: u64) -> Result<Self> {
        Ok(Self::new(Arc::new(FieldCtx::quadratic(q)?)))
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn field_arc(&self) -> Arc<FieldCtx> {
        Arc::clone(&self.field)
    }

    pub fn order(&self) -> usize {
        self.field.order() as usize
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn lines(&self) -> &[ProjLine] {
        &self.lines
    }

    pub fn point_id(&self, p: &ProjPoint) -> usize {
        rank_of(self.order(), &p.0)
    }

    pub fn line_id(&self, l: &ProjLine) -> usize {
        rank_of(self.order(), &l.0)
    }

    /// Sorted point ids on line `line_id`.
    pub fn line_point_ids(&self, line_id: usize) -> &[u32] {
        &self.line_points[line_id]
    }

    pub fn line_through(&self, p1: &ProjPoint, p2: &ProjPoint) -> Result<ProjLine> {
        if p1 == p2 {
            return Err(Error::EqualPoints);
        }
        ProjLine::new(&self.field, cross(&self.field, p1.0, p2.0))
    }

    /// Intersection point of two distinct lines.
    pub fn meet(&self, l1: &ProjLine, l2: &ProjLine) -> Result<ProjPoint> {
        if l1 == l2 {
            return Err(Error::InvalidCoordinates("lines coincide".into()));
        }
        ProjPoint::new(&self.field, cross(&self.field, l1.0, l2.0))
    }

    /// The Q + 1 points on `line`, sorted by id.
    pub fn points_on_line(&self, line: &ProjLine) -> Vec<u32> {
        let f = &*self.field;
        let basis = [
            [FieldElement::ONE, FieldElement::ZERO, FieldElement::ZERO],
            [FieldElement::ZERO, FieldElement::ONE, FieldElement::ZERO],
            [FieldElement::ZERO, FieldElement::ZERO, FieldElement::ONE],
        ];
        let mut found: Vec<Triple> = Vec::with_capacity(2);
        for e in basis {
            let c = cross(f, line.0, e);
            if c.iter().all(|x| x.is_zero()) {
                continue;
            }
            let c = normalize(f, c).expect("nonzero");
            if !found.contains(&c) {
                found.push(c);
            }
            if found.len() == 2 {
                break;
            }
        }
        let (a, b) = (found[0], found[1]);
        let mut ids = Vec::with_capacity(self.order() + 1);
        ids.push(rank_of(self.order(), &a) as u32);
        for t in f.elements() {
            let c = [0, 1, 2].map(|i| f.add(b[i], f.mul(t, a[i])));
            let c = normalize(f, c).expect("independent points");
            ids.push(rank_of(self.order(), &c) as u32);
        }
        ids.sort_unstable();
        ids
    }

    pub fn export(&self) -> PlaneExport {
        let idx = |t: Triple| t.map(|c| c.0);
        PlaneExport {
            field: self.field.spec(),
            points: self.points.iter().enumerate().map(|(id, p)| PointRow { id, coords: idx(p.0) }).collect(),
            lines: self
                .lines
                .iter()
                .enumerate()
                .map(|(id, l)| LineRow { id, coords: idx(l.0), points: self.line_points[id].clone() })
                .collect(),
        }
    }
}

/// All `Q² + Q + 1` normalized points, sorted by id.
pub fn enumerate_points(field: &FieldCtx) -> Vec<ProjPoint> {
    let zero = FieldElement::ZERO;
    let one = FieldElement::ONE;
    let mut out = vec![ProjPoint([zero, zero, one])];
    out.extend(field.elements().map(|a| ProjPoint([zero, one, a])));
    for a in field.elements() {
        out.extend(field.elements().map(|b| ProjPoint([one, a, b])));
    }
    out
}

#[derive(Debug, Serialize)]
pub struct PlaneExport {
    pub field: FieldSpec,
    pub points: Vec<PointRow>,
    pub lines: Vec<LineRow>,
}

#[derive(Debug, Serialize)]
pub struct PointRow {
    pub id: usize,
    pub coords: [u32; 3],
}

#[derive(Debug, Serialize)]
pub struct LineRow {
    pub id: usize,
    pub coords: [u32; 3],
    pub points: Vec<u32>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_counts() {
        assert_eq!(ProjectivePlane::over_quadratic(2).unwrap().points().len(), 21);
        assert_eq!(ProjectivePlane::over_quadratic(3).unwrap().points().len(), 91);
    }

    #[test]
    fn ids_match_enumeration_order() {
        let plane = ProjectivePlane::over_quadratic(3).unwrap();
        for (i, p) in plane.points().iter().enumerate() {
            assert_eq!(plane.point_id(p), i);
        }
        let mut sorted = plane.points().to_vec();
        sorted.sort_by_key(|p| p.coords().map(|c| c.0));
        assert_eq!(sorted, plane.points());
    }

    #[test]
    fn line_through_axes() {
        let plane = ProjectivePlane::over_quadratic(2).unwrap();
        let f = plane.field();
        let e0 = ProjPoint::new(f, [FieldElement::ONE, FieldElement::ZERO, FieldElement::ZERO]).unwrap();
        let e1 = ProjPoint::new(f, [FieldElement::ZERO, FieldElement::ONE, FieldElement::ZERO]).unwrap();
        let l = plane.line_through(&e0, &e1).unwrap();
        assert_eq!(l.coords(), [FieldElement::ZERO, FieldElement::ZERO, FieldElement::ONE]);
        assert_eq!(plane.line_through(&e1, &e0).unwrap(), l);
        assert!(matches!(plane.line_through(&e0, &e0), Err(Error::EqualPoints)));
    }

    #[test]
    fn every_line_has_q_plus_one_points() {
        let plane = ProjectivePlane::over_quadratic(3).unwrap();
        for (id, l) in plane.lines().iter().enumerate() {
            let on = plane.line_point_ids(id);
            assert_eq!(on.len(), 10);
            let scanned: Vec<u32> = plane
                .points()
                .iter()
                .enumerate()
                .filter(|(_, p)| l.contains(plane.field(), p))
                .map(|(i, _)| i as u32)
                .collect();
            assert_eq!(on, scanned.as_slice());
        }
    }

    #[test]
    fn two_points_one_line_and_two_lines_one_point() {
        for q in [2u64, 3, 4] {
            let plane = ProjectivePlane::over_quadratic(q).unwrap();
            let n = plane.points().len();
            let mut joins = vec![vec![0u32; n]; n];
            for l in 0..plane.lines().len() {
                let on = plane.line_point_ids(l);
                for &a in on {
                    for &b in on {
                        joins[a as usize][b as usize] += 1;
                    }
                }
            }
            for a in 0..n {
                for b in 0..n {
                    let expected = if a == b { q * q + 1 } else { 1 };
                    assert_eq!(joins[a][b] as u64, expected);
                }
            }
            let lines = plane.lines();
            for i in 0..lines.len() {
                for j in i + 1..lines.len() {
                    let p = plane.meet(&lines[i], &lines[j]).unwrap();
                    let id = plane.point_id(&p) as u32;
                    assert!(plane.line_point_ids(i).binary_search(&id).is_ok());
                    assert!(plane.line_point_ids(j).binary_search(&id).is_ok());
                }
            }
        }
    }
}
