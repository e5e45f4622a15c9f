//! Exact isoperimetric numbers of the order-2 unital's graphs, compared with
//! the closed forms.

use std::time::Instant;

use unital_iso::bounds::{theorem1_bounds, theorem2_value};
use unital_iso::design::construct_order2_unital;
use unital_iso::iso::{brute_force_iso, build_graph, BruteOptions, Flavor};

fn main() -> unital_iso::Result<()> {
    let d = construct_order2_unital();
    let expected = [
        (Flavor::Incidence, theorem1_bounds(2, 4)?.lower),
        (Flavor::NonIncidence, theorem2_value(2)?),
    ];
    for (flavor, value) in expected {
        let g = build_graph(&d, flavor)?;
        let t = Instant::now();
        let res = brute_force_iso(&g, &BruteOptions::default())?;
        println!(
            "{flavor:?}: i = {} (formula {value}), witness {:?}, {:.2?}",
            res.ratio,
            res.witness.witness(),
            t.elapsed()
        );
        assert_eq!(res.ratio, value);
    }
    Ok(())
}
