//! Monochromatic subsets of 2-colored pairs, and the bisection extraction built on them.
use approxvar::selection::{families, irregular_extract, ramsey_monochromatic_subset, EpsilonLadder};

fn main() -> approxvar::Result<()> {
    let idx: Vec<usize> = (0..40).collect();
    let out = ramsey_monochromatic_subset(&idx, |a, b| ((a * 7 + b * 3) % 5 < 2) as u8, 2)?;
    println!("color {} subset {:?} (greedy alone: {})", out.color, out.subset, out.greedy_size);

    let ladder = EpsilonLadder::new(0.05, 0.5, 1)?;
    let r = irregular_extract(&families::two_cluster(8, 64)?, &ladder, 3, 1e-6)?;
    println!("kept {} members, intervals consistent: {:?}", r.indices.len(), r.interval_check);
    for lv in r.irregular_levels.iter().take(6) {
        println!("t#{} depth {} [{:.3}, {:.3}] size {}", lv.t_index, lv.depth, lv.lo, lv.hi, lv.size);
    }
    Ok(())
}
