//! Finite-scale checks of family conditions.
use approxvar::selection::{check_condition, families, CheckParams, Condition};

fn main() -> approxvar::Result<()> {
    let params = CheckParams::default();
    let cases = [
        ("sin", families::sin_family(8)?, Condition::Vep),
        ("reciprocal", families::reciprocal_dirichlet(4, 16)?, Condition::Vep),
        ("two-cluster", families::two_cluster(8, 32)?, Condition::Vep),
        ("two-cluster", families::two_cluster(8, 32)?, Condition::Pairwise),
    ];
    for (name, fam, cond) in cases {
        let r = check_condition(&fam, cond, &params)?;
        println!("{name:<12} {cond:?}: {} (max tail sup {:.3})", r.verdict.name(), r.max_tail_sup());
    }
    Ok(())
}
