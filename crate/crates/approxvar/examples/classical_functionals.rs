//! Jordan variation, modulus of variation, N_eps counts, Waterman and phi-variation.
use approxvar::variations::{classical_report, Gauge, WatermanSequence};
use approxvar::SampledFunction;

fn main() -> approxvar::Result<()> {
    let f = SampledFunction::real_seq(&[0.0, 1.0, 0.2, 0.9, 0.4, 0.5])?;
    let lam = WatermanSequence::harmonic(6);
    let r = classical_report(&f, 4, &[0.05, 0.3, 0.7], Some(&lam), Some(Gauge::Power { p: 2.0 }))?;
    println!("jordan      {:.4}", r.jordan);
    println!("oscillation {:.4}", r.oscillation);
    for (n, v) in r.nu.iter().enumerate() {
        println!("nu_{}        {v:.4}", n + 1);
    }
    for (e, c) in &r.n_eps {
        println!("N_{e:<9} {c}");
    }
    println!("waterman    {:.4}", r.lambda_var.unwrap_or(0.0));
    println!("phi (u^2)   {:.4}", r.phi_var.unwrap_or(0.0));
    println!("schrader    {:.4}", r.schrader.unwrap_or(0.0));
    Ok(())
}
