//! Planar values: exact on collinear data, certified bounds otherwise.
use approxvar::{approx_variation, GridDomain, MetricSpace, Point, SampledFunction};

fn main() -> approxvar::Result<()> {
    let plane = MetricSpace::Euclidean { dim: 2 };
    let line: Vec<Point> = [0.0, 1.0, 0.0, 1.0].iter().map(|&s| Point::Vector(vec![s, 2.0 * s])).collect();
    let square: Vec<Point> = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0], [0.0, 0.0]].iter().map(|p| Point::Vector(p.to_vec())).collect();
    for (name, vals) in [("collinear", line), ("square", square)] {
        let f = SampledFunction::new(GridDomain::uniform(vals.len() - 1), plane.clone(), vals)?;
        let r = approx_variation(&f, 0.2)?;
        println!("{name:<10} {:<12} [{:.4}, {:.4}]", r.method.name(), r.lower_bound, r.upper_bound);
    }
    Ok(())
}
