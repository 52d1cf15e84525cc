//! eps-variation of the identity on a 5-point grid, with its minimizer.
use approxvar::{approx_variation, profile, witness, SampledFunction};

fn main() -> approxvar::Result<()> {
    let t = [0.0, 0.25, 0.5, 0.75, 1.0];
    let f = SampledFunction::real(&t, &t)?;
    let p = profile(&f, &[0.05, 0.1, 0.25, 0.4, 0.5, 0.6])?;
    println!("eps    V_eps  method");
    for row in &p.rows {
        println!("{:<6} {:<6.3} {}", row.eps, row.result.value, row.result.method.name());
    }
    println!("nonincreasing: {}  breakpoints at rows {:?}", p.nonincreasing, p.breakpoints);

    let g = witness(&f, 0.1)?;
    println!("witness at eps=0.1: {:?}", g.real_values().unwrap());
    let r = approx_variation(&f, 0.1)?;
    println!("V(witness) = {:.3} = V_0.1(f) = {:.3}", approxvar::variations::jordan_variation(&g), r.value);
    Ok(())
}
