//! Bounds and extremal certificates for H(3) and H(4).

use unital_iso::arc::{find_arc, SearchMode};
use unital_iso::bounds::{
    construct_extremal_set, corollary4_m_bound, floor_c, theorem1_bounds, theorem2_value, verify_certificate,
};
use unital_iso::design::construct_hermitian;

fn main() -> unital_iso::Result<()> {
    for n in 2..=6 {
        println!(
            "n = {n}: floor c = {}, interval {:?}, non-incidence value {}",
            floor_c(n)?,
            theorem1_bounds(n, 3).map(|r| (r.lower.to_string(), r.upper.to_string()))?,
            theorem2_value(n)?
        );
    }
    for q in [3, 4] {
        let d = construct_hermitian(q)?;
        let fc = floor_c(q)?;
        let arc = find_arc(&d, fc as usize, SearchMode::Exact, 0, 1 << 32)?;
        let cert = construct_extremal_set(&d, &arc)?;
        verify_certificate(&cert, &d)?;
        let value = cert.claimed.to_rational()?;
        println!(
            "H({q}): |S| = {}, |N(S)| = {}, i = {value}, pinched: {}, arc cap from value: {}",
            cert.checks.subset_size,
            cert.checks.boundary_size,
            cert.checks.pinch,
            corollary4_m_bound(q, &value)?
        );
    }
    Ok(())
}
