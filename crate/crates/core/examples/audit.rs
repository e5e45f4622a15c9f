//! Exact audit of the lower-bound inequalities for small orders.

use std::time::Instant;

use unital_iso::bounds::{audit_lowerbound_machinery, h_of, AuditOptions};

fn main() -> unital_iso::Result<()> {
    println!("h(9) for n = 3: {}", h_of(3, 9));
    for n in 3..=8 {
        let t = Instant::now();
        let rep = audit_lowerbound_machinery(n, &AuditOptions::default())?;
        let counts: Vec<_> = rep.checks.iter().map(|c| (c.name, c.points_checked)).collect();
        println!("n = {n}: passed = {}, {counts:?}, {:.2?}", rep.passed(), t.elapsed());
    }
    Ok(())
}
