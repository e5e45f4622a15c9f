//! Lower bounds on neighborhood sizes in the incidence graph of any 2-design,
//! and a checker that compares them with measured values.

use serde::Serialize;

use super::{Flavor, IsoGraph};
use crate::design::DesignParams;
use crate::error::{Error, Result};
use crate::rational::{int, ratio};
use crate::Rational;

/// `x(2rm − λ(x−1)) / (m(m+1))`, a lower bound on `|N(X)|` for `|X| = x`.
/// May be negative for large `x`.
pub fn lb_main1(params: &DesignParams, x: usize, m: usize) -> Result<Rational> {
    if m < 1 {
        return Err(Error::Domain(format!("m = {m} must be at least 1")));
    }
    let (x, r, l, m) = (x as i128, params.r as i128, params.lambda as i128, m as i128);
    Ok(ratio(x * (2 * r * m - l * (x - 1)), m * (m + 1)))
}

/// `r²x / (r + λ(x−1))`.
pub fn lb_main2(params: &DesignParams, x: usize) -> Rational {
    if x == 0 {
        return int(0);
    }
    let (x, r, l) = (x as i128, params.r as i128, params.lambda as i128);
    ratio(r * r * x, r + l * (x - 1))
}

/// `rky / (r² − λ(b−y))` on `|N(Y)|`; 0 where the denominator is not positive.
pub fn lb_main3(params: &DesignParams, y: usize) -> Rational {
    let (y, r, k, l, b) = (y as i128, params.r as i128, params.k as i128, params.lambda as i128, params.b as i128);
    let den = r * r - l * (b - y);
    if den <= 0 || y == 0 {
        return int(0);
    }
    ratio(r * k * y, den)
}

/// `(4λ/k²) · x · (v − x − x')`, a lower bound on `|N(X) \ Y|`.
pub fn lb_main4(params: &DesignParams, x: usize, x_prime: usize) -> Result<Rational> {
    if x + x_prime > params.v {
        return Err(Error::Domain(format!("x + x' = {} exceeds v = {}", x + x_prime, params.v)));
    }
    let (v, k, l) = (params.v as i128, params.k as i128, params.lambda as i128);
    let (x, xp) = (x as i128, x_prime as i128);
    Ok(ratio(4 * l * x * (v - x - xp), k * k))
}

#[derive(Clone, Debug, Serialize)]
pub struct Main1Check {
    pub m: usize,
    pub bound: String,
    pub holds: bool,
    /// Every block meeting `X` meets it in `m` or `m+1` points.
    pub equality_condition: bool,
    /// Only meaningful when the condition holds.
    pub equality_holds: bool,
}

/// Measured neighborhood sizes against all four bounds and the
/// corresponding forms in terms of `(x, y, x', y')`.
#[derive(Clone, Debug, Serialize)]
pub struct Theorem3Report {
    pub x: usize,
    pub y: usize,
    pub x_prime: usize,
    pub y_prime: usize,
    pub n_x: usize,
    pub n_y: usize,
    pub n_x_minus_y: usize,
    pub main1: Vec<Main1Check>,
    pub main2_holds: bool,
    pub main3_holds: bool,
    pub main4_holds: bool,
    pub profile_forms_hold: bool,
}

impl Theorem3Report {
    /// Human-readable list of failed checks; empty when everything holds.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for c in &self.main1 {
            if !c.holds {
                out.push(format!("main1 (m={}) fails: |N(X)| = {} < {}", c.m, self.n_x, c.bound));
            }
            if c.equality_condition && !c.equality_holds {
                out.push(format!("main1 (m={}) equality fails: |N(X)| = {} != {}", c.m, self.n_x, c.bound));
            }
        }
        if !self.main2_holds {
            out.push(format!("main2 fails with x = {}", self.x));
        }
        if !self.main3_holds {
            out.push(format!("main3 fails with y = {}", self.y));
        }
        if !self.main4_holds {
            out.push(format!("main4 fails with x = {}, x' = {}", self.x, self.x_prime));
        }
        if !self.profile_forms_hold {
            out.push("a profile form (y + y', x + x', y') fails".into());
        }
        out
    }
}

/// Checks the four neighborhood bounds on the sets `X` (points) and `Y`
/// (blocks) of an incidence graph, for every `m` in `m_range`.
pub fn check_theorem3(
    graph: &IsoGraph,
    points: &fixedbitset::FixedBitSet,
    blocks: &fixedbitset::FixedBitSet,
    m_range: impl IntoIterator<Item = usize>,
) -> Result<Theorem3Report> {
    if graph.flavor() != Flavor::Incidence {
        return Err(Error::FlavorMismatch { expected: "incidence" });
    }
    let params = graph.params();
    let nx_set = graph.blocks_adjacent_to(points);
    let ny_set = graph.points_adjacent_to(blocks);
    let x = points.count_ones(..);
    let y = blocks.count_ones(..);
    let n_x = nx_set.count_ones(..);
    let n_y = ny_set.count_ones(..);
    let n_x_minus_y = nx_set.difference_count(blocks);
    let x_prime = ny_set.difference_count(points);
    let y_prime = n_x_minus_y;

    let meets: Vec<usize> = nx_set
        .ones()
        .map(|j| graph.block_neighbors(j).intersection_count(points))
        .collect();

    let mut main1 = Vec::new();
    let mut profile_ok = true;
    for m in m_range {
        let bound = lb_main1(&params, x, m)?;
        let holds = int(n_x) >= bound;
        let equality_condition = meets.iter().all(|&c| c == m || c == m + 1);
        let equality_holds = int(n_x) == bound;
        profile_ok &= int(y + y_prime) >= bound;
        main1.push(Main1Check { m, bound: bound.to_string(), holds, equality_condition, equality_holds });
    }
    let b2 = lb_main2(&params, x);
    let b3 = lb_main3(&params, y);
    let b4 = lb_main4(&params, x, x_prime)?;
    profile_ok &= int(y + y_prime) >= b2 && int(x + x_prime) >= b3 && int(y_prime) >= b4;
    Ok(Theorem3Report {
        x,
        y,
        x_prime,
        y_prime,
        n_x,
        n_y,
        n_x_minus_y,
        main1,
        main2_holds: int(n_x) >= b2,
        main3_holds: int(n_y) >= b3,
        main4_holds: int(n_x_minus_y) >= b4,
        profile_forms_hold: profile_ok,
    })
}
