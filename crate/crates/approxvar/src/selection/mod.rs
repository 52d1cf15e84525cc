//! Finite-scale selection experiments on function families.
//!
//! Asymptotic conditions (`limsup`, `o(n)`) are read off a tail window of the
//! family; pointwise convergence becomes "Cauchy within `tol` at every grid point"
//! along the extracted subsequence.

mod conditions;
pub mod families;
mod helly;
mod irregular;
mod ramsey;
mod sp;

pub use conditions::{check_condition, check_exceptional_subset, CheckParams, ExceptionalReport, Thresholds};
pub use helly::{helly_bv, helly_monotone, pairwise_cauchy_pairs};
pub use irregular::{irregular_extract, IrregularLevel};
pub use ramsey::{ramsey_monochromatic_subset, RamseyOutcome};
pub use sp::{sp_extract, sp_extract_local, SpProfile};

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::sampled::SampledFunction;

/// Minimum subsequence length a thinning step may leave behind.
pub const MIN_KEEP: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    HoldsAtScale,
    FailsAtScale,
    Inconclusive,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::HoldsAtScale => "holds-at-scale",
            Verdict::FailsAtScale => "fails-at-scale",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    /// `sup_j V(f_j) < inf`
    Bv,
    /// `limsup_j nu_n(f_j) = o(n)`
    Nu,
    /// `limsup_j N_eps(f_j) < inf` for every eps
    Neps,
    /// `limsup_j V_eps(f_j) < inf` for every eps
    Vep,
    /// `limsup_{j,k} V_eps(f_j - f_k) < inf` for every eps
    Pairwise,
    /// `sup_{j,k} T(f_j - f_k) < inf`
    Schrader,
}

impl Condition {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "bv" => Condition::Bv,
            "nu" => Condition::Nu,
            "neps" => Condition::Neps,
            "vep" | "sp" => Condition::Vep,
            "pairwise" | "spir" => Condition::Pairwise,
            "schrader" => Condition::Schrader,
            other => return Err(Error::Parse(format!("unknown condition {other:?}"))),
        })
    }

    pub fn is_pairwise(&self) -> bool {
        matches!(self, Condition::Pairwise | Condition::Schrader)
    }
}

/// `eps_k = eps_1 * ratio^(k-1)`, `k = 1..=depth`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EpsilonLadder {
    pub eps1: f64,
    pub ratio: f64,
    pub depth: usize,
}

impl EpsilonLadder {
    pub fn new(eps1: f64, ratio: f64, depth: usize) -> Result<Self> {
        if !(eps1.is_finite() && eps1 > 0.0) {
            return Err(Error::Domain(format!("eps1 must be positive, got {eps1}")));
        }
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(Error::Domain(format!("ratio must lie in (0, 1), got {ratio}")));
        }
        if depth == 0 {
            return Err(Error::Domain("ladder depth must be positive".into()));
        }
        Ok(EpsilonLadder { eps1, ratio, depth })
    }

    pub fn eps(&self, k: usize) -> f64 {
        self.eps1 * self.ratio.powi(k as i32 - 1)
    }

    pub fn all(&self) -> Vec<f64> {
        (1..=self.depth).map(|k| self.eps(k)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    HellyMonotone,
    HellyBv,
    Sp,
    SpLocal,
    Irregular,
}

impl Mode {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s.trim().replace('_', "-").as_str() {
            "helly-monotone" => Mode::HellyMonotone,
            "helly-bv" => Mode::HellyBv,
            "sp" => Mode::Sp,
            "sp-local" => Mode::SpLocal,
            "irregular" => Mode::Irregular,
            other => return Err(Error::Parse(format!("unknown selection mode {other:?}"))),
        })
    }
}

/// `V_eps(limit)` against the tail supremum over the extracted subsequence.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundCheck {
    pub eps: Option<f64>,
    pub limit_value: f64,
    pub tail_sup: f64,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SelectionReport {
    pub mode: Mode,
    pub family_size: usize,
    /// Extracted family indices, strictly increasing.
    pub indices: Vec<usize>,
    #[serde(skip)]
    pub limit: Option<SampledFunction>,
    /// Per grid point: spread of the subsequence values.
    pub residuals: Vec<f64>,
    /// Grid points where thinning would have left fewer than two members.
    pub unsettled: Vec<usize>,
    pub tol: f64,
    pub sp_profiles: Vec<SpProfile>,
    pub irregular_levels: Vec<IrregularLevel>,
    /// Per ladder eps, per grid point: midpoint of the final interval.
    pub phi_eps: Vec<Vec<f64>>,
    pub interval_check: Option<bool>,
    pub bounds: Vec<BoundCheck>,
    pub required_j: Option<usize>,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

impl SelectionReport {
    fn empty(mode: Mode, family_size: usize, tol: f64) -> Self {
        SelectionReport {
            mode,
            family_size,
            indices: Vec::new(),
            limit: None,
            residuals: Vec::new(),
            unsettled: Vec::new(),
            tol,
            sp_profiles: Vec::new(),
            irregular_levels: Vec::new(),
            phi_eps: Vec::new(),
            interval_check: None,
            bounds: Vec::new(),
            required_j: None,
            verdict: Verdict::Inconclusive,
            notes: Vec::new(),
        }
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> Value {
        let mut v = serde_json::to_value(self).unwrap_or(json!({}));
        v["verdict"] = json!(self.verdict.name());
        v["limit"] = self.limit.as_ref().map(|l| l.to_json()).unwrap_or(Value::Null);
        v
    }
}

/// Result of restricting a subsequence pointwise.
pub(crate) struct Thinned {
    pub kept: Vec<usize>,
    pub unsettled: Vec<usize>,
    /// Product of the kept fractions, including the would-be fractions at unsettled points.
    pub shrink: f64,
}

/// Largest subset of `members` (positions) whose `vals` lie within `tol` of each other.
/// Ties go to the cluster containing the latest position.
pub(crate) fn largest_cluster(members: &[usize], vals: &[f64], tol: f64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..members.len()).collect();
    order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]).then(members[a].cmp(&members[b])));
    let (mut best, mut best_len, mut best_last) = ((0, 0), 0usize, 0usize);
    let mut hi = 0;
    for lo in 0..order.len() {
        if hi < lo {
            hi = lo;
        }
        while hi + 1 < order.len() && vals[order[hi + 1]] - vals[order[lo]] <= tol {
            hi += 1;
        }
        let len = hi - lo + 1;
        let last = order[lo..=hi].iter().map(|&p| members[p]).max().unwrap_or(0);
        if len > best_len || (len == best_len && last > best_last) {
            best = (lo, hi);
            best_len = len;
            best_last = last;
        }
    }
    if order.is_empty() {
        return Vec::new();
    }
    let mut out: Vec<usize> = order[best.0..=best.1].iter().map(|&p| members[p]).collect();
    out.sort_unstable();
    out
}

/// Cluster by metric balls of radius `tol/2` around member values.
pub(crate) fn largest_ball_cluster(members: &[usize], f: &[SampledFunction], point: usize, tol: f64) -> Vec<usize> {
    let mut best: Vec<usize> = Vec::new();
    for &c in members {
        let center = &f[c].values[point];
        let ball: Vec<usize> = members.iter().copied().filter(|&j| f[j].space.d(center, &f[j].values[point]) <= tol / 2.0).collect();
        let better = ball.len() > best.len() || (ball.len() == best.len() && ball.iter().max() > best.iter().max());
        if better {
            best = ball;
        }
    }
    best
}

/// Thins `start` point by point so that the values at each point cluster within `tol`.
pub(crate) fn thin_values(f: &[SampledFunction], start: Vec<usize>, tol: f64) -> Thinned {
    let m = f.first().map(|g| g.len()).unwrap_or(0);
    let scalar = f.first().map(|g| g.space.is_scalar()).unwrap_or(true);
    let mut kept = start;
    let mut unsettled = Vec::new();
    let mut shrink = 1.0;
    for i in 0..m {
        if kept.is_empty() {
            break;
        }
        let cl = if scalar {
            let vals: Vec<f64> = kept.iter().map(|&j| f[j].values[i].as_real().unwrap_or(f64::NAN)).collect();
            largest_cluster(&kept, &vals, tol)
        } else {
            largest_ball_cluster(&kept, f, i, tol)
        };
        shrink *= cl.len() as f64 / kept.len() as f64;
        if cl.len() >= MIN_KEEP || kept.len() < MIN_KEEP {
            kept = cl;
        } else {
            unsettled.push(i);
        }
    }
    Thinned { kept, unsettled, shrink }
}

/// Thins `start` so that the scalar series `series[j][i]` clusters within `tol` at every `i`.
pub(crate) fn thin_series(series: &[Vec<f64>], start: Vec<usize>, tol: f64) -> Thinned {
    let m = start.first().map(|&j| series[j].len()).unwrap_or(0);
    let mut kept = start;
    let mut unsettled = Vec::new();
    let mut shrink = 1.0;
    for i in 0..m {
        let vals: Vec<f64> = kept.iter().map(|&j| series[j][i]).collect();
        let cl = largest_cluster(&kept, &vals, tol);
        shrink *= cl.len() as f64 / kept.len().max(1) as f64;
        if cl.len() >= MIN_KEEP || kept.len() < MIN_KEEP {
            kept = cl;
        } else {
            unsettled.push(i);
        }
    }
    Thinned { kept, unsettled, shrink }
}

/// Per grid point: largest distance between two members of `idx`.
pub(crate) fn residuals(f: &[SampledFunction], idx: &[usize]) -> Vec<f64> {
    let m = f.first().map(|g| g.len()).unwrap_or(0);
    (0..m)
        .map(|i| {
            let mut r = 0.0f64;
            for (a, &j) in idx.iter().enumerate() {
                for &k in &idx[a + 1..] {
                    r = r.max(f[j].space.d(&f[j].values[i], &f[k].values[i]));
                }
            }
            r
        })
        .collect()
}

/// Limit candidate: the last kept member at settled points, the consensus of the
/// family's tail half at unsettled ones.
pub(crate) fn limit_candidate(f: &[SampledFunction], kept: &[usize], unsettled: &[usize], tol: f64) -> Option<SampledFunction> {
    let last = *kept.last()?;
    let mut g = f[last].clone();
    let tail: Vec<usize> = (f.len() / 2..f.len()).collect();
    for &i in unsettled {
        let cl = if g.space.is_scalar() {
            let vals: Vec<f64> = tail.iter().map(|&j| f[j].values[i].as_real().unwrap_or(f64::NAN)).collect();
            largest_cluster(&tail, &vals, tol)
        } else {
            largest_ball_cluster(&tail, f, i, tol)
        };
        if let Some(&j) = cl.last() {
            g.values[i] = f[j].values[i].clone();
        }
    }
    Some(g)
}

/// Rough family size needed for a thinning with overall kept fraction `shrink` to
/// leave `MIN_KEEP` members.
pub(crate) fn required_family_size(shrink: f64, current: usize) -> usize {
    if shrink <= 0.0 || !shrink.is_finite() {
        return current.saturating_mul(2).max(MIN_KEEP + 1);
    }
    ((MIN_KEEP as f64 / shrink).ceil() as usize).max(current + 1)
}
