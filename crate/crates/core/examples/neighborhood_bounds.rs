//! The four neighborhood lower bounds, evaluated on random subsets of H(3).

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use unital_iso::design::construct_hermitian;
use unital_iso::iso::{build_graph, check_theorem3, lb_main1, lb_main2, lb_main3, lb_main4, Flavor};

fn main() -> unital_iso::Result<()> {
    let d = construct_hermitian(3)?;
    let p = d.params();
    println!("main1(x=4, m=1) = {}", lb_main1(&p, 4, 1)?);
    println!("main2(x=4) = {}", lb_main2(&p, 4));
    println!("main3(y=40) = {}", lb_main3(&p, 40));
    println!("main4(x=4, x'=10) = {}", lb_main4(&p, 4, 10)?);

    let g = build_graph(&d, Flavor::Incidence)?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut violations = 0;
    for _ in 0..1000 {
        let mut xs = FixedBitSet::with_capacity(p.v);
        let mut ys = FixedBitSet::with_capacity(p.b);
        (0..p.v).for_each(|i| xs.set(i, rng.gen_bool(0.2)));
        (0..p.b).for_each(|j| ys.set(j, rng.gen_bool(0.3)));
        violations += check_theorem3(&g, &xs, &ys, 1..=3)?.violations().len();
    }
    println!("violations over 1000 random (X, Y): {violations}");
    Ok(())
}
