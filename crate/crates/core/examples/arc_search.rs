//! Arc search: greedy and exact, plus m(U) by branch-and-bound.

use std::time::Instant;

use unital_iso::arc::{find_arc, is_complete_arc, max_arc, SearchMode};
use unital_iso::design::{admissible_bm_pairs, construct_bm, construct_hermitian, construct_order2_unital};
use unital_iso::field::FieldCtx;

fn main() -> unital_iso::Result<()> {
    let u2 = construct_order2_unital();
    println!("order 2, target 5: {:?}", find_arc(&u2, 5, SearchMode::Exact, 0, 1 << 20).unwrap_err());
    println!("order 2: {:?}", max_arc(&u2, 1 << 20)?);

    let h3 = construct_hermitian(3)?;
    let t = Instant::now();
    let m = max_arc(&h3, 1 << 30)?;
    println!("H(3): {m:?}, complete: {}, {:.2?}", is_complete_arc(&h3, &m.witness)?, t.elapsed());

    let h4 = construct_hermitian(4)?;
    let arc = find_arc(&h4, 11, SearchMode::Exact, 0, 1 << 32)?;
    println!("H(4) 11-arc: {arc:?}");

    let f = FieldCtx::quadratic(3)?;
    let (alpha, beta) = admissible_bm_pairs(3)?
        .into_iter()
        .find(|(_, b)| f.in_subfield(*b).unwrap())
        .expect("an admissible pair with beta in GF(3)");
    let bm = construct_bm(3, alpha, beta)?;
    let arc = find_arc(&bm, 10, SearchMode::Exact, 0, 1 << 32)?;
    println!("BM(alpha={}, beta={}) 10-arc: {arc:?}, complete: {}", alpha.index(), beta.index(), is_complete_arc(&bm, &arc)?);
    Ok(())
}
