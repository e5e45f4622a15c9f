//! Local search on H(3) and H(4), checked against the lower bound.

use unital_iso::bounds::{floor_c, theorem1_bounds};
use unital_iso::design::construct_hermitian;
use unital_iso::iso::{build_graph, heuristic_iso, Flavor, HeuristicOptions};

fn main() -> unital_iso::Result<()> {
    for q in [3u64, 4] {
        let g = build_graph(&construct_hermitian(q)?, Flavor::Incidence)?;
        let lower = theorem1_bounds(q, floor_c(q)?)?.lower;
        for seed in 0..3 {
            let res = heuristic_iso(&g, &HeuristicOptions::with_budget(32, seed))?;
            println!("H({q}) seed {seed}: {} (lower bound {lower}), |S| = {}", res.ratio, res.witness.len());
            assert!(res.ratio >= lower);
        }
    }
    Ok(())
}
