//! Two-point metric space: V_eps jumps at eps = d, which the strict variant sees.
use approxvar::spaces::FiniteMetric;
use approxvar::{approx_variation, strict_variant, GridDomain, MetricSpace, Point, SampledFunction};

fn main() -> approxvar::Result<()> {
    let d = 2.0;
    let k = 5;
    let vals: Vec<Point> = (0..=k).map(|i| Point::Label(i % 2)).collect();
    let f = SampledFunction::new(GridDomain::uniform(k), MetricSpace::Finite(FiniteMetric::two_point(d)), vals)?;
    for eps in [0.5, 1.0, 1.999, 2.0, 3.0] {
        println!("eps = {eps:<5}  V_eps = {:<4}  strict = {}", approx_variation(&f, eps)?.value, strict_variant(&f, eps)?);
    }
    Ok(())
}
