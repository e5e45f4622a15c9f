//! Arithmetic in GF(9) = GF(3)[t]/(t² + 1) and the maps used by the unital
//! constructions.

use unital_iso::field::FieldCtx;

fn main() -> unital_iso::Result<()> {
    let f = FieldCtx::quadratic(3)?;
    println!("GF({}) over GF({}), modulus coefficients {:?}", f.order(), f.characteristic(), f.modulus());

    let t = f.from_coefficients(&[0, 1])?;
    println!("t * t = {:?}", f.coefficients(f.mul(t, t)));
    println!("t^3 = {:?} (frobenius)", f.coefficients(f.frobenius_q(t)?));
    println!("norm(t) = {:?}", f.coefficients(f.norm_to_subfield(t)?));

    for a in f.elements().filter(|a| !a.is_zero()) {
        assert_eq!(f.mul(a, f.inv(a)?), unital_iso::field::FieldElement::ONE);
    }
    let sub = f.subfield_elements()?;
    let squares: Vec<_> = sub.iter().map(|&a| (a.index(), f.is_square_in_subfield(a).unwrap())).collect();
    println!("GF(3) inside GF(9), (index, is square): {squares:?}");

    let g = FieldCtx::quadratic(8)?;
    let traces: Vec<(usize, u8)> =
        g.subfield_elements()?.into_iter().map(|a| (a.index(), g.abs_trace_to_f2(a).unwrap())).collect();
    println!("GF(8) inside GF(64), (index, trace to GF(2)): {traces:?}");
    Ok(())
}
