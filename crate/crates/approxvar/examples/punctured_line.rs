//! Alternation pattern in the line with a hole: removing the open interval keeps a
//! constant approximant available, removing the closed one does not.
use approxvar::sampled::{FunctionFamily, GeneratorName, GeneratorSpec};
use approxvar::{approx_variation, MetricSpace};

fn main() -> approxvar::Result<()> {
    let (k, r) = (16, 0.1);
    let eps = 0.5 + r;
    for closed in [false, true] {
        let space = MetricSpace::punctured(0.5 - r, 0.5 + r, closed);
        let spec = GeneratorSpec::in_space(GeneratorName::DirichletPattern, space).with_real_xy(0.0, 1.0).with_k(k);
        let f = FunctionFamily::generated(spec, 1, 1)?.members()?.remove(0);
        let res = approx_variation(&f, eps)?;
        println!(
            "{} removed: V_eps = {:.4} attained = {} (2r(k-1) = {:.4}, slack of near-witness {:.2e})",
            if closed { "closed" } else { "open  " },
            res.value,
            res.attained,
            2.0 * r * (k as f64 - 1.0),
            res.slack
        );
    }
    Ok(())
}
