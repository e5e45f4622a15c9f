//! Numeric audit of the inequalities behind the incidence-graph lower bound
//! for `n ≥ 3`, in exact arithmetic over integer `x`, `y`.
//!
//! Five checks:
//! 1. `f(x,y)/(x+y) ≥ L` on the grid `x ≤ (n+1)²/4`, `y ≤ (n⁴−n³+n²)/2`.
//! 2. The `x`-coefficient of `f(x, (n⁴−n³+n²)/2)` is positive, and the
//!    constant term is at least `n³+1−⌊c⌋`.
//! 3. `h(n²) ≤ c(n)`, and `h(n²)` matches its closed form.
//! 4. `h` is nonincreasing and at most `c(n)` on integers in `[n², n³+1]`.
//! 5. For integers `c(n) < x ≤ n²`: the secant slope from `⌊c⌋` dominates the
//!    one to `n²`, `c(n) ≥ n(n+1)/2`, and
//!    `x − (1 − (n+1)²/(4x))(g(x) − n²(n²+1)/2) ≤ c(n)`.
//!
//! Here `L = 2(n³+1−⌊c⌋)/(n²(n²+1))`.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{floor_c, g_of, le_c, theorem1_bounds};
use crate::error::{Error, Result};
use crate::rational::{int, ratio};
use crate::Rational;

#[derive(Clone, Debug)]
pub struct AuditOptions {
    /// Largest `n` audited on the full grids.
    pub exhaustive_limit: u64,
    /// Points per check in sampled mode.
    pub samples: usize,
    pub seed: u64,
}

impl Default for AuditOptions {
    fn default() -> Self {
        AuditOptions { exhaustive_limit: 12, samples: 200_000, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AuditMode {
    Exhaustive,
    Sampled { samples: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditCheck {
    pub name: &'static str,
    pub passed: bool,
    pub points_checked: u64,
    /// First failing point, if any.
    pub failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub n: u64,
    pub mode: AuditMode,
    pub scope: &'static str,
    pub checks: Vec<AuditCheck>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&AuditCheck> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}

fn big(n: u64) -> BigInt {
    BigInt::from(n)
}

/// `f(x,y) = (4x/(n+1)²)(n³+1) + (1 − 4x/(n+1)²)·n²(n+1)y/(n²(n−1)+y) − x`.
pub fn f_xy(n: u64, x: u64, y: u64) -> Rational {
    let (n, x, y) = (big(n), big(x), big(y));
    let q = (&n + 1) * (&n + 1);
    let n2 = &n * &n;
    let w = ratio(4 * &x, q);
    let frac = ratio(&n2 * (&n + 1) * &y, &n2 * (&n - 1) + &y);
    &w * int(&n2 * &n + 1) + (int(1) - &w) * frac - int(x)
}

/// `h(z) = z − (1 − (n+1)²/(4z))(n⁴z/(n²−1+z) + z − (n⁴+n²)/2)` for `z ≥ 1`.
pub fn h_of(n: u64, z: u64) -> Rational {
    let (n, z) = (big(n), big(z));
    let n2 = &n * &n;
    let n4 = &n2 * &n2;
    let w = int(1) - ratio((&n + 1) * (&n + 1), 4 * &z);
    let inner = ratio(&n4 * &z, &n2 - 1 + &z) + int(z.clone()) - ratio(&n4 + &n2, 2);
    int(z) - w * inner
}

/// Case-1 predicate `f(x,y)/(x+y) ≥ L` by cross-multiplication in `i128`,
/// falling back to big rationals on overflow.
fn case1_holds(n: u64, fc: u64, x: u64, y: u64, lower: &Rational) -> bool {
    let fast = || -> Option<bool> {
        let (n, fc, x, y) = (n as i128, fc as i128, x as i128, y as i128);
        let q = (n + 1).checked_mul(n + 1)?;
        let n2 = n.checked_mul(n)?;
        let a = n2.checked_mul(n + 1)?;
        let by = n2.checked_mul(n - 1)?.checked_add(y)?;
        let n3p1 = n2.checked_mul(n)?.checked_add(1)?;
        // q·(b+y)·f = 4x(n³+1)(b+y) + (q − 4x)·a·y − x·q·(b+y)
        let t1 = (4 * x).checked_mul(n3p1)?.checked_mul(by)?;
        let t2 = (q - 4 * x).checked_mul(a)?.checked_mul(y)?;
        let t3 = x.checked_mul(q)?.checked_mul(by)?;
        let qbf = t1.checked_add(t2)?.checked_sub(t3)?;
        // f/(x+y) ≥ 2(n³+1−fc)/(n²(n²+1))
        let lhs = qbf.checked_mul(n2.checked_mul(n2 + 1)?)?;
        let rhs = (2 * (n3p1 - fc)).checked_mul(q)?.checked_mul(by)?.checked_mul(x + y)?;
        Some(lhs >= rhs)
    };
    fast().unwrap_or_else(|| f_xy(n, x, y) / int(x + y) >= *lower)
}

fn check(name: &'static str, points: u64, failure: Option<String>) -> AuditCheck {
    AuditCheck { name, passed: failure.is_none(), points_checked: points, failure }
}

fn case1_grid(n: u64, fc: u64, lower: &Rational, sampled: Option<(usize, u64)>) -> AuditCheck {
    let x_max = (n + 1) * (n + 1) / 4;
    let y_max = (n.pow(4) - n.pow(3) + n * n) / 2;
    let name = "case1_grid";
    match sampled {
        None => {
            let fail = (0..=x_max).into_par_iter().find_map_first(|x| {
                (0..=y_max)
                    .filter(|&y| x + y >= 1)
                    .find(|&y| !case1_holds(n, fc, x, y, lower))
                    .map(|y| format!("x = {x}, y = {y}"))
            });
            check(name, (x_max + 1) * (y_max + 1) - 1, fail)
        }
        Some((samples, seed)) => {
            // Stratified by x; each stripe has its own stream.
            let per = (samples as u64).div_ceil(x_max + 1).max(1);
            let fail = (0..=x_max).into_par_iter().find_map_first(|x| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(x);
                let corners = [0, 1, y_max];
                corners
                    .into_iter()
                    .chain((0..per).map(|_| rng.gen_range(0..=y_max)))
                    .filter(|&y| x + y >= 1)
                    .find(|&y| !case1_holds(n, fc, x, y, lower))
                    .map(|y| format!("x = {x}, y = {y}"))
            });
            check(name, (x_max + 1) * (per + 3), fail)
        }
    }
}

fn case2_coefficient(n: u64, fc: u64) -> AuditCheck {
    let (nb, f) = (big(n), big(fc));
    let n2 = &nb * &nb;
    let n3p1 = &n2 * &nb + 1;
    let d = &n2 + &nb - 1;
    let coeff = ratio(4 * &n3p1 * (&nb - 1), (&nb + 1) * (&nb + 1) * &d) - int(1);
    let constant = ratio(&n2 * &n3p1, d);
    let failure = if coeff <= int(0) {
        Some(format!("coefficient {coeff} is not positive"))
    } else if constant < int(&n3p1 - f) {
        Some(format!("constant {constant} below n^3 + 1 - floor c"))
    } else {
        None
    };
    check("case2_coefficient", 2, failure)
}

fn h_at_n2(n: u64) -> AuditCheck {
    let nb = big(n);
    let n2 = &nb * &nb;
    let h = h_of(n, n * n);
    let closed = int(n2.clone()) - ratio((3 * &n2 - 1) * (3 * &nb + 1) * (&nb - 1), 8 * (2 * &n2 - 1));
    let failure = if h != closed {
        Some(format!("h(n^2) = {h} but the closed form gives {closed}"))
    } else if !le_c(n, &h) {
        Some(format!("h(n^2) = {h} exceeds c(n)"))
    } else {
        None
    };
    check("h_at_n2", 1, failure)
}

fn h_monotone(n: u64, sampled: Option<(usize, u64)>) -> AuditCheck {
    let lo = n * n;
    let hi = n.pow(3) + 1;
    let test = |z: u64| -> Option<String> {
        let hz = h_of(n, z);
        if !le_c(n, &hz) {
            return Some(format!("h({z}) = {hz} exceeds c(n)"));
        }
        if z < hi {
            let next = h_of(n, z + 1);
            if next > hz {
                return Some(format!("h({}) = {next} > h({z}) = {hz}", z + 1));
            }
        }
        None
    };
    match sampled {
        Some((samples, seed)) if (hi - lo) as usize > samples => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let zs: Vec<u64> = [lo, hi].into_iter().chain((0..samples).map(|_| rng.gen_range(lo..=hi))).collect();
            let fail = zs.par_iter().find_map_first(|&z| test(z));
            check("h_nonincreasing", zs.len() as u64, fail)
        }
        _ => {
            let fail = (lo..=hi).into_par_iter().find_map_first(test);
            check("h_nonincreasing", hi - lo + 1, fail)
        }
    }
}

fn case4_chain(n: u64, fc: u64, sampled: Option<(usize, u64)>) -> Result<AuditCheck> {
    let nb = big(n);
    let n2 = n * n;
    let q: BigInt = (&nb + 1) * (&nb + 1);
    let half = ratio(&nb * &nb * (&nb * &nb + 1), 2);
    let g_f = g_of(n, fc)?;
    let g_n2 = g_of(n, n2)?;
    // Concavity slope from ⌊c⌋ to n²; c ≥ n(n+1)/2.
    let end_slope = (&g_n2 - &g_f) / int(n2 - fc);
    if !le_c(n, &ratio(&nb * (&nb + 1), 2)) {
        return Ok(check("case4_chain", 1, Some("c(n) < n(n+1)/2".into())));
    }
    let test = |x: u64| -> Option<String> {
        let gx = g_of(n, x).ok()?;
        if x < n2 {
            let slope = (&gx - &g_f) / int(x - fc);
            if slope < end_slope {
                return Some(format!("slope at x = {x} is {slope} < {end_slope}"));
            }
        }
        let w = int(1) - ratio(q.clone(), 4 * x);
        if w <= int(0) {
            return Some(format!("1 - (n+1)^2/(4x) <= 0 at x = {x}"));
        }
        let bound = int(x) - w * (gx - &half);
        if !le_c(n, &bound) {
            return Some(format!("x = {x}: {bound} exceeds c(n)"));
        }
        None
    };
    let lo = fc + 1;
    let xs: Vec<u64> = match sampled {
        Some((samples, seed)) if (n2 - fc) as usize > samples => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            [lo, n2].into_iter().chain((0..samples).map(|_| rng.gen_range(lo..=n2))).collect()
        }
        _ => (lo..=n2).collect(),
    };
    let fail = xs.par_iter().find_map_first(|&x| test(x));
    Ok(check("case4_chain", xs.len() as u64 + 1, fail))
}

/// Runs all five checks for a unital order `n ≥ 3`.
pub fn audit_lowerbound_machinery(n: u64, opts: &AuditOptions) -> Result<AuditReport> {
    if n < 3 {
        return Err(Error::Domain(format!("audit needs n >= 3, got {n}")));
    }
    let fc = floor_c(n)?;
    let lower = theorem1_bounds(n, 3)?.lower;
    let sampled = (n > opts.exhaustive_limit).then_some((opts.samples, opts.seed));
    let mode = match sampled {
        None => AuditMode::Exhaustive,
        Some((samples, seed)) => AuditMode::Sampled { samples, seed },
    };
    let checks = vec![
        case1_grid(n, fc, &lower, sampled),
        case2_coefficient(n, fc),
        h_at_n2(n),
        h_monotone(n, sampled),
        case4_chain(n, fc, sampled)?,
    ];
    Ok(AuditReport { n, mode, scope: "integer x and y only", checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn h_spot_value() {
        // 9 − (5/9)(729/17 − 36) = 88/17.
        assert_eq!(h_of(3, 9), ratio(88, 17));
        assert!(le_c(3, &h_of(3, 9)));
    }

    #[test]
    fn f_matches_the_order2_forms() {
        // x = 0: 12/(4+y); x = 1: (29y+36)/(3y²+15y+12) after dividing by x+y.
        for y in 1..=10u64 {
            assert_eq!(f_xy(2, 0, y) / int(y), ratio(12, 4 + y));
        }
        for y in 0..=9u64 {
            assert_eq!(f_xy(2, 1, y) / int(1 + y), ratio(29 * y + 36, 3 * y * y + 15 * y + 12));
        }
    }

    #[test]
    fn integer_predicate_agrees_with_rationals() {
        for n in 3..6u64 {
            let fc = floor_c(n).unwrap();
            let lower = theorem1_bounds(n, 3).unwrap().lower;
            let x_max = (n + 1) * (n + 1) / 4;
            for x in 0..=x_max {
                for y in (0..200).step_by(7) {
                    if x + y == 0 {
                        continue;
                    }
                    let exact = f_xy(n, x, y) / int(x + y) >= lower;
                    assert_eq!(case1_holds(n, fc, x, y, &lower), exact, "n={n} x={x} y={y}");
                }
            }
        }
    }

    #[test]
    fn audit_passes_for_small_n() {
        for n in 3..=5 {
            let rep = audit_lowerbound_machinery(n, &AuditOptions::default()).unwrap();
            assert!(rep.passed(), "{:?}", rep.failures());
            assert_eq!(rep.checks.len(), 5);
            assert_eq!(rep.mode, AuditMode::Exhaustive);
        }
    }

    #[test]
    fn sampled_mode_above_the_limit() {
        let opts = AuditOptions { exhaustive_limit: 12, samples: 2_000, seed: 5 };
        let rep = audit_lowerbound_machinery(20, &opts).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures());
        assert!(matches!(rep.mode, AuditMode::Sampled { .. }));
        assert!(audit_lowerbound_machinery(2, &opts).is_err());
    }
}
