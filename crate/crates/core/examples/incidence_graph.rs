//! Incidence and non-incidence graphs, neighborhoods and ratios.

use unital_iso::design::construct_order2_unital;
use unital_iso::iso::{build_graph, iso_ratio, neighborhood, Flavor};

fn main() -> unital_iso::Result<()> {
    let d = construct_order2_unital();
    for flavor in [Flavor::Incidence, Flavor::NonIncidence] {
        let g = build_graph(&d, flavor)?;
        let s = g.subset(&[0, 1], &[0, 1, 2])?;
        let n = neighborhood(&g, &s);
        println!(
            "{flavor:?}: {} vertices, {} edges; S = {:?} has |N(S)| = {}, ratio {}, profile {:?}",
            g.vertex_count(),
            g.edge_count(),
            s.global_ids(),
            n.len(),
            iso_ratio(&g, &s)?,
            s.profile(&g)
        );
    }
    let g = build_graph(&d, Flavor::Incidence)?;
    print!("{}", g.to_dimacs().lines().take(4).collect::<Vec<_>>().join("\n"));
    println!("\n...");
    Ok(())
}
