//! Standard families used by the selection experiments.

use crate::error::{Error, Result};
use crate::sampled::{BetaRule, FunctionFamily, GeneratorName, GeneratorSpec, GridDomain, SampledFunction};
use crate::spaces::{MetricSpace, Point};

/// `sin(j t)` on `[0, 2 pi]`, `j = 1..=n`, on the union of the extremum/zero lattices.
pub fn sin_family(n: usize) -> Result<FunctionFamily> {
    FunctionFamily::generated(GeneratorSpec::new(GeneratorName::SinJt), 1, n)
}

/// `(1/j)` times a `k`-alternation pattern between 1 and 0.
pub fn reciprocal_dirichlet(k: usize, n: usize) -> Result<FunctionFamily> {
    let spec = GeneratorSpec::new(GeneratorName::ScaledDirichlet).with_real_xy(1.0, 0.0).with_k(k).with_beta(BetaRule::Reciprocal);
    FunctionFamily::generated(spec, 1, n)
}

/// `beta_j` times a `k`-alternation pattern between 1 and 0, with `beta_j = 1` for
/// odd `j` and `1 + 1/j` for even `j`.
pub fn two_cluster(k: usize, n: usize) -> Result<FunctionFamily> {
    let spec = GeneratorSpec::new(GeneratorName::ScaledDirichlet).with_real_xy(1.0, 0.0).with_k(k).with_beta(BetaRule::TwoCluster);
    FunctionFamily::generated(spec, 1, n)
}

/// Patterns between `2^-j` and `-2^-j`: both levels shrink to 0.
pub fn shrinking_pattern(k: usize, n: usize) -> Result<FunctionFamily> {
    let spec = GeneratorSpec::new(GeneratorName::ScaledDirichlet)
        .with_real_xy(1.0, -1.0)
        .with_k(k)
        .with_beta(BetaRule::Geometric { ratio: 0.5 });
    FunctionFamily::generated(spec, 1, n)
}

/// Spike of height 1 at `tau / j` over the constant 0.
pub fn moving_spike(n: usize) -> Result<FunctionFamily> {
    let spec = GeneratorSpec::new(GeneratorName::Spike).with_real_xy(1.0, 0.0).with_tau(0.5).with_tau_decay(true);
    FunctionFamily::generated(spec, 1, n)
}

/// `x` where `j! t` is an integer, `y` elsewhere (real line), `j = 1..=n`.
pub fn factorial_family(n: usize) -> Result<FunctionFamily> {
    FunctionFamily::generated(GeneratorSpec::new(GeneratorName::FactorialOscillator).with_real_xy(0.0, 1.0), 1, n)
}

fn explicit(grid: &[f64], n: usize, f: impl Fn(usize, usize, f64) -> f64) -> Result<FunctionFamily> {
    let members = (1..=n)
        .map(|j| SampledFunction::real(grid, &grid.iter().enumerate().map(|(i, &t)| f(j, i, t)).collect::<Vec<_>>()))
        .collect::<Result<Vec<_>>>()?;
    FunctionFamily::explicit(members)
}

fn uniform(m: usize) -> Vec<f64> {
    (0..m).map(|i| i as f64 / (m - 1) as f64).collect()
}

/// The same function `n` times.
pub fn constant_family(values: &[f64], n: usize) -> Result<FunctionFamily> {
    let grid = uniform(values.len().max(2));
    let vals = if values.len() >= 2 { values.to_vec() } else { vec![values.first().copied().unwrap_or(0.0); 2] };
    explicit(&grid, n, |_, i, _| vals[i])
}

/// `t / (1 + 1/j)` on five points.
pub fn scaled_identity(n: usize) -> Result<FunctionFamily> {
    explicit(&uniform(5), n, |j, _, t| t / (1.0 + 1.0 / j as f64))
}

/// Alternates between `t` and `t^2` (odd / even `j`).
pub fn alternating_monotone(n: usize) -> Result<FunctionFamily> {
    explicit(&uniform(5), n, |j, _, t| if j % 2 == 1 { t } else { t * t })
}

/// `t + 1/j` on `[0, 0.9]`, `j` at `t = 1`.
pub fn end_blowup(n: usize) -> Result<FunctionFamily> {
    explicit(&uniform(11), n, |j, _, t| if t > 0.95 { j as f64 } else { t + 1.0 / j as f64 })
}

/// Planar family converging uniformly to a segment, `O(1e-7 / j)` apart.
pub fn planar_constant(n: usize) -> Result<FunctionFamily> {
    let grid = GridDomain::uniform(4);
    let members = (1..=n)
        .map(|j| {
            let vals = (0..4).map(|i| Point::Vector(vec![i as f64 * 0.1, 1.0 / (j as f64 * 1e7)])).collect();
            SampledFunction::new(grid.clone(), MetricSpace::Euclidean { dim: 2 }, vals)
        })
        .collect::<Result<Vec<_>>>()?;
    FunctionFamily::explicit(members)
}

pub const NAMES: &[&str] = &[
    "sin",
    "reciprocal-dirichlet",
    "two-cluster",
    "shrinking-pattern",
    "moving-spike",
    "factorial",
    "constant",
    "scaled-identity",
    "alternating-monotone",
    "end-blowup",
];

/// Family by name; `k` is the alternation count where it applies.
pub fn by_name(name: &str, n: usize, k: usize) -> Result<FunctionFamily> {
    match name.replace('_', "-").as_str() {
        "sin" => sin_family(n),
        "reciprocal-dirichlet" => reciprocal_dirichlet(k, n),
        "two-cluster" => two_cluster(k, n),
        "shrinking-pattern" => shrinking_pattern(k, n),
        "moving-spike" => moving_spike(n),
        "factorial" => factorial_family(n),
        "constant" => constant_family(&[0.0, 0.5, 0.25, 1.0], n),
        "scaled-identity" => scaled_identity(n),
        "alternating-monotone" => alternating_monotone(n),
        "end-blowup" => end_blowup(n),
        other => Err(Error::Parse(format!("unknown family {other:?}; known: {}", NAMES.join(", ")))),
    }
}
