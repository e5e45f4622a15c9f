//! Hermitian, Buekenhout-Metz and order-2 unitals, validated as 2-designs.

use unital_iso::design::{admissible_bm_pairs, bm_embedding, construct_hermitian, construct_order2_unital, hermitian_embedding};
use unital_iso::field::FieldCtx;

fn main() -> unital_iso::Result<()> {
    let u2 = construct_order2_unital();
    println!("order 2: {:?}", u2.params());

    for q in [3, 4] {
        let h = hermitian_embedding(q)?;
        println!(
            "H({q}): {:?}, {} tangent and {} passant lines, digest {}",
            h.design.params(),
            h.tangents,
            h.passants,
            &h.design.digest()[..16]
        );
    }

    let f = FieldCtx::quadratic(3)?;
    let pairs = admissible_bm_pairs(3)?;
    let in_sub = pairs.iter().filter(|(_, b)| f.in_subfield(*b).unwrap()).count();
    println!("BM q=3: {} admissible pairs, {in_sub} with beta in GF(3)", pairs.len());
    let (alpha, beta) = pairs[0];
    let bm = bm_embedding(3, alpha, beta)?;
    println!("U(alpha={}, beta={}, 3): {:?}", alpha.index(), beta.index(), bm.design.params());

    let comp = construct_hermitian(3)?.complement()?;
    println!("complement of H(3): {:?}", comp.params());
    Ok(())
}
