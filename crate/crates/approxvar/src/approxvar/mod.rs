//! The eps-variation `V_eps(f) = inf { V(g) : sup_i d(f(t_i), g(t_i)) <= eps }`.
//!
//! Real values use a taut-string sweep, finite metric spaces a layered DP over
//! balls, the punctured line a candidate-set DP. Euclidean data of dimension >= 2
//! is exact when collinear and bounded otherwise.

mod euclid;
mod finite;
mod punctured;
mod taut;

pub use punctured::{candidate_dp, CandidateResult};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::sampled::SampledFunction;
use crate::spaces::{MetricSpace, Point, DEFAULT_TOL};
use crate::variations::jordan_variation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    TautString,
    FiniteDp,
    CandidateDp,
    BoundsOnly,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::TautString => "taut_string",
            Method::FiniteDp => "finite_dp",
            Method::CandidateDp => "candidate_dp",
            Method::BoundsOnly => "bounds_only",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EpsilonVariationResult {
    /// Exact value, or the upper bound for `BoundsOnly`.
    pub value: f64,
    pub attained: bool,
    /// Minimizer when attained; near-minimizer (see `slack`) for unattained
    /// candidate-DP results; absent for `BoundsOnly`.
    pub witness: Option<SampledFunction>,
    pub method: Method,
    pub lower_bound: f64,
    pub upper_bound: f64,
    /// `V(witness) - value` for near-minimizers, else 0.
    pub slack: f64,
}

impl EpsilonVariationResult {
    pub fn is_exact(&self) -> bool {
        self.method != Method::BoundsOnly
    }

    pub fn to_json(&self) -> Value {
        json!({
            "value": self.value,
            "attained": self.attained,
            "method": self.method,
            "lower_bound": self.lower_bound,
            "upper_bound": self.upper_bound,
            "slack": self.slack,
            "witness": self.witness.as_ref().map(|w| w.to_json()),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Config {
    pub tol: f64,
}

impl Default for Config {
    fn default() -> Self {
        Config { tol: DEFAULT_TOL }
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if eps.is_finite() && eps > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("eps must be positive and finite, got {eps}")))
    }
}

fn scalar_values(f: &SampledFunction) -> Vec<f64> {
    f.values.iter().map(|p| p.as_real().unwrap_or(f64::NAN)).collect()
}

fn rebuild_scalar(f: &SampledFunction, g: Vec<f64>) -> Result<SampledFunction> {
    let vals = g
        .into_iter()
        .map(|v| match f.space {
            MetricSpace::Euclidean { .. } => Point::Vector(vec![v]),
            _ => Point::Real(v),
        })
        .collect();
    SampledFunction::new(f.domain.clone(), f.space.clone(), vals)
}

fn exact(value: f64, witness: Option<SampledFunction>, method: Method) -> EpsilonVariationResult {
    EpsilonVariationResult { value, attained: true, witness, method, lower_bound: value, upper_bound: value, slack: 0.0 }
}

pub fn approx_variation(f: &SampledFunction, eps: f64) -> Result<EpsilonVariationResult> {
    approx_variation_with(f, eps, &Config::default())
}

pub fn approx_variation_with(f: &SampledFunction, eps: f64, cfg: &Config) -> Result<EpsilonVariationResult> {
    check_eps(eps)?;
    let tol = cfg.tol;
    match &f.space {
        MetricSpace::RealLine | MetricSpace::Euclidean { dim: 1 } => {
            let v = scalar_values(f);
            let sw = taut::sweep(&v, eps);
            let value = sw.costs.last().copied().unwrap_or(0.0);
            let g = taut::witness(&v, eps, &sw);
            Ok(exact(value, Some(rebuild_scalar(f, g)?), Method::TautString))
        }
        MetricSpace::Finite(fm) => {
            let labels: Vec<usize> = f.values.iter().map(|p| p.as_label().unwrap_or(0)).collect();
            let r = finite::layered_dp(fm, &labels, eps, tol);
            let g = SampledFunction::new(f.domain.clone(), f.space.clone(), r.path.into_iter().map(Point::Label).collect())?;
            Ok(exact(r.value, Some(g), Method::FiniteDp))
        }
        MetricSpace::Punctured(h) => {
            let v = scalar_values(f);
            let r = punctured::candidate_dp(&v, eps, Some(h), tol);
            if r.attained {
                let g = rebuild_scalar(f, r.path.clone())?;
                return Ok(exact(r.value, Some(g), Method::CandidateDp));
            }
            let near = punctured::near_witness(&v, eps, h, &r, tol);
            let witness = rebuild_scalar(f, near).ok();
            let slack = witness.as_ref().map(|w| (jordan_variation(w) - r.value).max(0.0)).unwrap_or(0.0);
            Ok(EpsilonVariationResult {
                value: r.value,
                attained: false,
                witness,
                method: Method::CandidateDp,
                lower_bound: r.value,
                upper_bound: r.value,
                slack,
            })
        }
        MetricSpace::Euclidean { .. } => {
            let vals: Vec<Vec<f64>> = f.values.iter().map(|p| p.coords().unwrap_or_default()).collect();
            if let Some((base, u, s)) = euclid::collinear(&vals, tol) {
                let sw = taut::sweep(&s, eps);
                let value = sw.costs.last().copied().unwrap_or(0.0);
                let g = taut::witness(&s, eps, &sw)
                    .into_iter()
                    .map(|c| Point::Vector(base.iter().zip(&u).map(|(b, ui)| b + c * ui).collect()))
                    .collect();
                let g = SampledFunction::new(f.domain.clone(), f.space.clone(), g)?;
                return Ok(exact(value, Some(g), Method::TautString));
            }
            let lower = partition_lower_bound(f, eps);
            let (upper, _) = euclid::upper_bound(&vals, eps, tol);
            Ok(EpsilonVariationResult {
                value: upper,
                attained: false,
                witness: None,
                method: Method::BoundsOnly,
                lower_bound: lower,
                upper_bound: upper,
                slack: 0.0,
            })
        }
    }
}

/// A minimizer (or near-minimizer, for unattained punctured-line cases).
pub fn witness(f: &SampledFunction, eps: f64) -> Result<SampledFunction> {
    let r = approx_variation(f, eps)?;
    if r.method == Method::BoundsOnly {
        return Err(Error::Unsupported("no exact witness for non-collinear Euclidean data".into()));
    }
    r.witness.ok_or_else(|| Error::Unsupported("witness could not be placed inside the space".into()))
}

/// `max` over index subsequences of `sum max(0, d(f_a, f_b) - 2 eps)`; a lower
/// bound for `V_eps` in every metric space.
pub fn partition_lower_bound(f: &SampledFunction, eps: f64) -> f64 {
    let m = f.len();
    let mut best = vec![0.0f64; m];
    let mut out = 0.0f64;
    for b in 0..m {
        let mut v = 0.0f64;
        for a in 0..b {
            v = v.max(best[a] + (f.d(a, b) - 2.0 * eps).max(0.0));
        }
        best[b] = v;
        out = out.max(v);
    }
    out
}

/// `(t_i, V_eps(f restricted to t <= t_i))` for every grid point, in one sweep.
pub fn epsilon_variation_function(f: &SampledFunction, eps: f64) -> Result<Vec<(f64, f64)>> {
    check_eps(eps)?;
    let prefix: Vec<f64> = match &f.space {
        MetricSpace::RealLine | MetricSpace::Euclidean { dim: 1 } => taut::sweep(&scalar_values(f), eps).costs,
        MetricSpace::Finite(fm) => {
            let labels: Vec<usize> = f.values.iter().map(|p| p.as_label().unwrap_or(0)).collect();
            finite::layered_dp(fm, &labels, eps, DEFAULT_TOL).prefix
        }
        MetricSpace::Punctured(h) => punctured::candidate_dp(&scalar_values(f), eps, Some(h), DEFAULT_TOL).prefix,
        MetricSpace::Euclidean { .. } => {
            let vals: Vec<Vec<f64>> = f.values.iter().map(|p| p.coords().unwrap_or_default()).collect();
            match euclid::collinear(&vals, DEFAULT_TOL) {
                Some((_, _, s)) => taut::sweep(&s, eps).costs,
                None => return Err(Error::Unsupported("eps-variation function needs exact values".into())),
            }
        }
    };
    Ok(f.domain.ts().iter().copied().zip(prefix).collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProfileRow {
    pub eps: f64,
    pub result: EpsilonVariationResult,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VariationProfile {
    pub rows: Vec<ProfileRow>,
    /// Values never increase along the grid (up to tolerance).
    pub nonincreasing: bool,
    /// Slope between consecutive rows.
    pub slopes: Vec<f64>,
    /// Rows where the slope changes (heuristic breakpoint flags).
    pub breakpoints: Vec<usize>,
}

pub fn profile(f: &SampledFunction, eps_grid: &[f64]) -> Result<VariationProfile> {
    if eps_grid.is_empty() {
        return Err(Error::Domain("empty eps grid".into()));
    }
    if eps_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain("eps grid must be strictly increasing".into()));
    }
    let rows: Vec<ProfileRow> = eps_grid
        .par_iter()
        .map(|&eps| approx_variation(f, eps).map(|result| ProfileRow { eps, result }))
        .collect::<Result<Vec<_>>>()?;
    let vals: Vec<f64> = rows.iter().map(|r| r.result.value).collect();
    let nonincreasing = vals.windows(2).all(|w| w[1] <= w[0] + 1e-9);
    let slopes: Vec<f64> = rows.windows(2).map(|w| (w[1].result.value - w[0].result.value) / (w[1].eps - w[0].eps)).collect();
    let breakpoints = (1..slopes.len())
        .filter(|&i| (slopes[i] - slopes[i - 1]).abs() > 1e-9 * (1.0 + slopes[i].abs().max(slopes[i - 1].abs())))
        .collect();
    Ok(VariationProfile { rows, nonincreasing, slopes, breakpoints })
}

/// Outcome of a one-sided limit ladder.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimitLadder {
    pub value: f64,
    pub plateau: bool,
    pub steps: Vec<(f64, f64)>,
}

const LADDER: i32 = 40;

fn ladder(f: &SampledFunction, eps: f64, sign: f64) -> Result<LimitLadder> {
    check_eps(eps)?;
    let mut steps: Vec<(f64, f64)> = Vec::new();
    for m in 1..=LADDER {
        let e = eps * (1.0 + sign * 2f64.powi(-m));
        let v = approx_variation(f, e)?.value;
        steps.push((e, v));
        let k = steps.len();
        if k >= 3 && (steps[k - 1].1 - steps[k - 2].1).abs() <= 1e-12 && (steps[k - 2].1 - steps[k - 3].1).abs() <= 1e-12 {
            return Ok(LimitLadder { value: v, plateau: true, steps });
        }
    }
    let value = steps.last().map(|s| s.1).unwrap_or(0.0);
    Ok(LimitLadder { value, plateau: false, steps })
}

/// Strict variant `V'_eps`: the infimum over `g` with `sup d(f, g) < eps`, equal on
/// finite grids to the left limit `V_{eps-0}`.
pub fn strict_variant(f: &SampledFunction, eps: f64) -> Result<f64> {
    ladder(f, eps, -1.0).map(|l| l.value)
}

pub fn left_limit(f: &SampledFunction, eps: f64) -> Result<LimitLadder> {
    ladder(f, eps, -1.0)
}

/// `V_{eps+0}`.
pub fn right_limit(f: &SampledFunction, eps: f64) -> Result<LimitLadder> {
    ladder(f, eps, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampled::GridDomain;
    use crate::spaces::FiniteMetric;

    fn ident() -> SampledFunction {
        SampledFunction::real(&[0.0, 0.25, 0.5, 0.75, 1.0], &[0.0, 0.25, 0.5, 0.75, 1.0]).unwrap()
    }

    #[test]
    fn identity_values() {
        for (eps, want) in [(0.1, 0.8), (0.25, 0.5), (0.6, 0.0)] {
            assert!((approx_variation(&ident(), eps).unwrap().value - want).abs() < 1e-12);
        }
        assert!(matches!(approx_variation(&ident(), 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn identity_prefix_function() {
        let v = epsilon_variation_function(&ident(), 0.1).unwrap();
        let want = [0.0, 0.05, 0.3, 0.55, 0.8];
        assert!(v.iter().zip(want).all(|((_, a), b)| (a - b).abs() < 1e-12));
    }

    #[test]
    fn profile_identity() {
        let p = profile(&ident(), &[0.1, 0.25, 0.5, 0.6]).unwrap();
        let got: Vec<f64> = p.rows.iter().map(|r| r.result.value).collect();
        for (a, b) in got.iter().zip([0.8, 0.5, 0.0, 0.0]) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(p.nonincreasing);
        assert!(profile(&ident(), &[0.2, 0.1]).is_err());
    }

    #[test]
    fn two_point_strict_variant() {
        let fm = FiniteMetric::two_point(1.0);
        let k = 6;
        let dom = GridDomain::from_f64(&(0..=k).map(|i| i as f64).collect::<Vec<_>>()).unwrap();
        let vals = (0..=k).map(|i| Point::Label(i % 2)).collect();
        let f = SampledFunction::new(dom, MetricSpace::Finite(fm), vals).unwrap();
        assert_eq!(approx_variation(&f, 1.0).unwrap().value, 0.0);
        assert_eq!(strict_variant(&f, 1.0).unwrap(), k as f64);
        let r = approx_variation(&f, 0.5).unwrap();
        assert_eq!(r.value, k as f64);
        assert_eq!(r.witness.unwrap(), f);
    }

    #[test]
    fn lower_bound_spike_and_sin() {
        let spike = SampledFunction::real_seq(&[1.0, 0.0, 1.0]).unwrap();
        assert!((partition_lower_bound(&spike, 0.2) - 1.2).abs() < 1e-12);
        let sin = SampledFunction::real_seq(&[0.0, 1.0, 0.0, -1.0, 0.0, 1.0, 0.0, -1.0, 0.0]).unwrap();
        let lb = partition_lower_bound(&sin, 0.25);
        assert!(lb >= 4.0);
        assert!((lb - 5.5).abs() < 1e-12);
    }

    #[test]
    fn euclidean_collinear_is_exact() {
        let dom = GridDomain::from_f64(&[0.0, 0.5, 1.0]).unwrap();
        let vals = vec![Point::Vector(vec![1.0, 1.0]), Point::Vector(vec![0.0, 0.0]), Point::Vector(vec![1.0, 1.0])];
        let f = SampledFunction::new(dom, MetricSpace::Euclidean { dim: 2 }, vals).unwrap();
        let d = 2f64.sqrt();
        let r = approx_variation(&f, 0.2).unwrap();
        assert_eq!(r.method, Method::TautString);
        assert!((r.value - 2.0 * (d - 0.4)).abs() < 1e-12);
    }

    #[test]
    fn euclidean_bounds_bracket() {
        let dom = GridDomain::from_f64(&[0.0, 1.0, 2.0, 3.0]).unwrap();
        let vals = vec![
            Point::Vector(vec![0.0, 0.0]),
            Point::Vector(vec![1.0, 0.0]),
            Point::Vector(vec![1.0, 1.0]),
            Point::Vector(vec![0.0, 1.0]),
        ];
        let f = SampledFunction::new(dom, MetricSpace::Euclidean { dim: 2 }, vals).unwrap();
        let r = approx_variation(&f, 0.1).unwrap();
        assert_eq!(r.method, Method::BoundsOnly);
        assert!(r.lower_bound <= r.upper_bound + 1e-12);
        assert!(r.upper_bound <= 3.0 + 1e-12);
        assert!(matches!(witness(&f, 0.1), Err(Error::Unsupported(_))));
    }
}
