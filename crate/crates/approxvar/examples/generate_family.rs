//! Generated families on canonical grids, and their JSON form.
use approxvar::sampled::{critical_points, BetaRule, FunctionFamily, GeneratorName, GeneratorSpec};

fn main() -> approxvar::Result<()> {
    let spec = GeneratorSpec::new(GeneratorName::FactorialOscillator).with_real_xy(0.0, 1.0);
    println!("critical points for j=3: {}", critical_points(&spec, 3)?.len());
    let fam = FunctionFamily::generated(spec, 1, 3)?;
    for (j, f) in fam.indices().iter().zip(fam.members()?) {
        println!("j={j}: {} grid points, V = {:.1}", f.len(), approxvar::variations::jordan_variation(&f));
    }
    let scaled = GeneratorSpec::new(GeneratorName::ScaledDirichlet).with_k(3).with_beta(BetaRule::Reciprocal);
    let fam = FunctionFamily::generated(scaled, 1, 2)?;
    println!("{}", serde_json::to_string(&fam.to_json()).unwrap());
    Ok(())
}
