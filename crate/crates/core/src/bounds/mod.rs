//! Closed-form bounds for unitals of order `n`: `g`, `⌊c(n)⌋`, the
//! incidence-graph interval, the non-incidence value, and the arc cap.
//!
//! `c(n) = n² − (√(8n²+9) − 3)/2` is irrational in general, so comparisons
//! against it are done exactly by squaring (see [`le_c`]).

mod audit;
mod certificate;

pub use audit::{audit_lowerbound_machinery, f_xy, h_of, AuditCheck, AuditMode, AuditOptions, AuditReport};
pub use certificate::{
    construct_extremal_set, verify_certificate, Certificate, CertificateChecks, DesignRef,
};

use num_bigint::BigInt;
use num_traits::Signed;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{int, ratio, serialize_exact};
use crate::Rational;

fn check_order(n: u64) -> Result<()> {
    if n < 2 {
        return Err(Error::Domain(format!("unital order n = {n} (need n >= 2)")));
    }
    Ok(())
}

/// `n²(n²+1)/2`, half the vertex count of the incidence graph rounded down.
pub fn half_size(n: u64) -> u128 {
    let n2 = n as u128 * n as u128;
    n2 * (n2 + 1) / 2
}

fn g_int(n: u64, z: u128) -> u128 {
    // 2 divides z(z-1), so this stays integral.
    let n2 = n as u128 * n as u128;
    (n2 + 1) * z - z * z.saturating_sub(1) / 2
}

/// `g(z) = (n²+1)z − z(z−1)/2` for `0 ≤ z ≤ n²+1`.
pub fn g_of(n: u64, z: u64) -> Result<Rational> {
    let top = n as u128 * n as u128 + 1;
    if z as u128 > top {
        return Err(Error::Domain(format!("z = {z} outside [0, {top}]")));
    }
    Ok(int(BigInt::from(g_int(n, z as u128))))
}

/// `⌊c(n)⌋`, cross-checked between [`floor_c_g`] and [`floor_c_sqrt`].
pub fn floor_c(n: u64) -> Result<u64> {
    let a = floor_c_g(n)?;
    let b = floor_c_sqrt(n)?;
    if a != b {
        return Err(Error::Internal(format!("floor c({n}): bisection {a}, square root {b}")));
    }
    Ok(a)
}

/// Largest integer `z` with `g(z) ≤ n²(n²+1)/2`, by bisection on `g`.
pub fn floor_c_g(n: u64) -> Result<u64> {
    check_order(n)?;
    let target = half_size(n);
    let (mut lo, mut hi) = (0u128, n as u128 * n as u128);
    while lo < hi {
        let mid = (lo + hi).div_ceil(2);
        if g_int(n, mid) <= target {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    Ok(lo as u64)
}

/// `⌊n² − (√(8n²+9) − 3)/2⌋` from the integer square root.
pub fn floor_c_sqrt(n: u64) -> Result<u64> {
    check_order(n)?;
    let n2 = n as u128 * n as u128;
    let d = 8 * n2 + 9;
    let r = d.isqrt();
    // ⌈(√d − 3)/2⌉; r ≥ 5 since n ≥ 2.
    let up = if r * r == d { (r - 3).div_ceil(2) } else { (r - 1) / 2 };
    Ok((n2 - up) as u64)
}

/// Exact test `w ≤ c(n)`.
///
/// With `t = 2(n² − w) + 3`, `w ≤ c(n)` iff `t ≥ 0` and `8n² + 9 ≤ t²`.
pub fn le_c(n: u64, w: &Rational) -> bool {
    let n2 = int(BigInt::from(n) * BigInt::from(n));
    let t = int(2) * (&n2 - w) + int(3);
    !t.is_negative() && &t * &t >= int(8) * n2 + int(9)
}

/// Exact test `w < c(n)`.
pub fn lt_c(n: u64, w: &Rational) -> bool {
    let n2 = int(BigInt::from(n) * BigInt::from(n));
    let t = int(2) * (&n2 - w) + int(3);
    t.is_positive() && &t * &t > int(8) * n2 + int(9)
}

/// Lower and upper bounds on `i(G_U)` for a unital of order `n` carrying an
/// arc of size `m_used`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub n: u64,
    pub floor_c: u64,
    #[serde(serialize_with = "serialize_exact")]
    pub lower: Rational,
    #[serde(serialize_with = "serialize_exact")]
    pub upper: Rational,
    pub m_used: u64,
    pub pinch: bool,
}

/// `2(n³+1−min(m,⌊c⌋)) / (n²(n²+1))`.
fn interval_end(n: u64, m: u64) -> Rational {
    let n = BigInt::from(n);
    let n2 = &n * &n;
    ratio(2 * (&n2 * &n + 1 - BigInt::from(m)), &n2 * (&n2 + 1))
}

/// Incidence-graph interval from `⌊c(n)⌋` and a certified arc size.
pub fn theorem1_bounds(n: u64, m_arc: u64) -> Result<BoundReport> {
    check_order(n)?;
    if m_arc < 3 {
        return Err(Error::Domain(format!("arc size {m_arc} (need at least 3)")));
    }
    if m_arc > n * n + 1 {
        return Err(Error::Domain(format!("arc size {m_arc} exceeds n^2 + 1 = {}", n * n + 1)));
    }
    let fc = floor_c(n)?;
    let lower = interval_end(n, fc);
    let upper = interval_end(n, m_arc.min(fc));
    Ok(BoundReport { n, floor_c: fc, pinch: m_arc >= fc, lower, upper, m_used: m_arc })
}

/// `i` of the non-incidence graph: `4/5` at `n = 2`, else `2(n³+1)/(n²(n²+1))`.
pub fn theorem2_value(n: u64) -> Result<Rational> {
    check_order(n)?;
    if n == 2 {
        return Ok(ratio(4, 5));
    }
    Ok(interval_end(n, 0))
}

/// `n³ + 1 − (n²(n²+1)/2) · i`, the cap on `m(U)` implied by a value `i`.
pub fn corollary4_m_bound(n: u64, iso_value: &Rational) -> Result<Rational> {
    check_order(n)?;
    let n = BigInt::from(n);
    let n2 = &n * &n;
    if !iso_value.is_positive() || iso_value > &int(n2.clone()) {
        return Err(Error::Domain(format!("isoperimetric value {iso_value}")));
    }
    Ok(int(&n2 * &n + 1) - ratio(&n2 * (&n2 + 1), 2) * iso_value)
}
