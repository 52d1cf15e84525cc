//! Diagonal extraction of a pointwise convergent subsequence.
use approxvar::selection::{families, sp_extract, EpsilonLadder};

fn main() -> approxvar::Result<()> {
    let ladder = EpsilonLadder::new(0.25, 0.5, 4)?;
    let r = sp_extract(&families::shrinking_pattern(4, 32)?, &ladder, 1e-6)?;
    println!("verdict {}  kept {:?}", r.verdict.name(), r.indices);
    println!("max residual {:.2e}", r.max_residual());
    for p in &r.sp_profiles {
        println!("eps {:<8} tail sup {:.4}  profile nondecreasing {}", p.eps, p.tail_sup, p.nondecreasing);
    }
    let s = sp_extract(&families::sin_family(8)?, &ladder, 0.5)?;
    println!("sin_jt: {} ({})", s.verdict.name(), s.notes.join("; "));
    Ok(())
}
