use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::{Condition, Verdict};
use crate::approxvar::approx_variation;
use crate::error::{Error, Result};
use crate::sampled::{pointwise_difference, FunctionFamily, SampledFunction};
use crate::spaces::MetricSpace;
use crate::variations::{jordan_variation, modulus_of_variation, n_epsilon_count, schrader_oscillation};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Thresholds {
    /// Holds when the tail sup is at most this multiple of the early median.
    pub holds_ratio: f64,
    /// Growth counts when the last-third slope exceeds this times `1 + max`.
    pub slope_rel: f64,
    /// `nu_n / n` must drop by this fraction between `n_max / 3` and `n_max`.
    pub nu_drop: f64,
    /// Growth also needs `v ~ j^p` over the last third with at least this `p`.
    pub growth_exponent: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds { holds_ratio: 10.0, slope_rel: 1e-9, nu_drop: 0.5, growth_exponent: 0.5 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckParams {
    pub eps: Vec<f64>,
    pub n_max: usize,
    /// Fraction of the family treated as its tail.
    pub tail_fraction: f64,
    pub thresholds: Thresholds,
}

impl Default for CheckParams {
    fn default() -> Self {
        CheckParams { eps: vec![0.25, 0.125, 0.0625], n_max: 12, tail_fraction: 0.5, thresholds: Thresholds::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionRow {
    /// eps, or n for the modulus of variation; absent for parameter-free conditions.
    pub param: Option<f64>,
    /// Per member (or per consecutive pair for pairwise conditions).
    pub values: Vec<f64>,
    pub tail_sup: f64,
    pub early_median: f64,
    pub last_third_slope: f64,
    /// `V_{eps - delta}(f_last)` when every tail member lies within `delta < eps` of
    /// the last one; it bounds the whole tail.
    pub uniform_bound: Option<f64>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionReport {
    pub condition: Condition,
    pub family_size: usize,
    pub tail_fraction: f64,
    /// First member (0-based position) of the tail window.
    pub tail_start: usize,
    pub rows: Vec<ConditionRow>,
    /// `(n, mu_n / n)` for the modulus-of-variation condition.
    pub nu_curve: Vec<(usize, f64)>,
    pub thresholds: Thresholds,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

impl ConditionReport {
    pub fn to_json(&self) -> Value {
        let mut v = serde_json::to_value(self).unwrap_or(json!({}));
        v["verdict"] = json!(self.verdict.name());
        v
    }

    pub fn row(&self, param: f64) -> Option<&ConditionRow> {
        self.rows.iter().find(|r| r.param.map(|p| (p - param).abs() < 1e-12).unwrap_or(false))
    }

    /// Largest tail sup over all rows.
    pub fn max_tail_sup(&self) -> f64 {
        self.rows.iter().map(|r| r.tail_sup).fold(0.0, f64::max)
    }
}

fn median(v: &[f64]) -> f64 {
    if v.is_empty() {
        return 0.0;
    }
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len();
    if n % 2 == 1 {
        s[n / 2]
    } else {
        0.5 * (s[n / 2 - 1] + s[n / 2])
    }
}

fn slope(v: &[f64]) -> f64 {
    let n = v.len() as f64;
    if v.len() < 2 {
        return 0.0;
    }
    let mx = (n - 1.0) / 2.0;
    let my = v.iter().sum::<f64>() / n;
    let (mut num, mut den) = (0.0, 0.0);
    for (i, y) in v.iter().enumerate() {
        num += (i as f64 - mx) * (y - my);
        den += (i as f64 - mx).powi(2);
    }
    num / den
}

fn last_third(v: &[f64]) -> &[f64] {
    let len = v.len().div_ceil(3).max(2).min(v.len());
    &v[v.len() - len..]
}

fn judge(seq: &[f64], tail: &[f64], early: &[f64], th: &Thresholds) -> (Verdict, f64, f64, f64) {
    let sup = tail.iter().copied().fold(0.0, f64::max);
    let med = median(early);
    let lt = last_third(seq);
    let s = slope(lt);
    let scale = 1.0 + seq.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    // a bounded sequence creeping up to its limit is not growth
    let (j0, j1) = ((seq.len() - lt.len() + 1) as f64, seq.len() as f64);
    let exponent = if lt.len() >= 2 && lt[0] > 0.0 { (lt[lt.len() - 1] / lt[0]).ln() / (j1 / j0).ln() } else { 0.0 };
    let growing = lt.len() >= 2 && lt.windows(2).all(|w| w[1] >= w[0]) && s > th.slope_rel * scale && exponent >= th.growth_exponent;
    let verdict = if growing {
        Verdict::FailsAtScale
    } else if sup <= th.holds_ratio * med + 1e-12 {
        Verdict::HoldsAtScale
    } else {
        Verdict::Inconclusive
    };
    (verdict, sup, med, s)
}

fn tail_start(n: usize, frac: f64) -> usize {
    let len = ((n as f64 * frac).ceil() as usize).clamp(1, n.max(1));
    n.saturating_sub(len)
}

fn per_member_row(param: Option<f64>, vals: Vec<f64>, ts: usize, th: &Thresholds) -> ConditionRow {
    let early: Vec<f64> = if ts == 0 { vals.iter().take(1).copied().collect() } else { vals[..ts].to_vec() };
    let (verdict, tail_sup, early_median, last_third_slope) = judge(&vals, &vals[ts..], &early, th);
    ConditionRow { param, values: vals, tail_sup, early_median, last_third_slope, uniform_bound: None, verdict }
}

fn pair_row(param: Option<f64>, n: usize, ts: usize, th: &Thresholds, value: impl Fn(usize, usize) -> Result<f64> + Sync) -> Result<ConditionRow> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|j| (j + 1..n).map(move |k| (j, k))).collect();
    let vals: Vec<((usize, usize), f64)> =
        pairs.par_iter().map(|&(j, k)| value(j, k).map(|v| ((j, k), v))).collect::<Result<Vec<_>>>()?;
    let get = |j: usize, k: usize| vals.iter().find(|(p, _)| *p == (j, k)).map(|x| x.1).unwrap_or(0.0);
    let consecutive: Vec<f64> = (0..n.saturating_sub(1)).map(|j| get(j, j + 1)).collect();
    let tail: Vec<f64> = vals.iter().filter(|((j, _), _)| *j >= ts).map(|x| x.1).collect();
    let mut early: Vec<f64> = vals.iter().filter(|((_, k), _)| *k < ts).map(|x| x.1).collect();
    if early.is_empty() {
        early = consecutive.iter().take(1).copied().collect();
    }
    let (verdict, tail_sup, early_median, last_third_slope) = judge(&consecutive, &tail, &early, th);
    Ok(ConditionRow { param, values: consecutive, tail_sup, early_median, last_third_slope, uniform_bound: None, verdict })
}

fn combine(rows: &[ConditionRow]) -> Verdict {
    if rows.iter().any(|r| r.verdict == Verdict::FailsAtScale) {
        Verdict::FailsAtScale
    } else if rows.iter().all(|r| r.verdict == Verdict::HoldsAtScale) {
        Verdict::HoldsAtScale
    } else {
        Verdict::Inconclusive
    }
}

fn check_eps(eps: &[f64]) -> Result<()> {
    if eps.is_empty() || eps.iter().any(|e| !(e.is_finite() && *e > 0.0)) {
        return Err(Error::Domain("condition needs a nonempty list of positive eps".into()));
    }
    Ok(())
}

/// Evaluates one of the family conditions over a tail window.
pub fn check_condition(family: &FunctionFamily, condition: Condition, params: &CheckParams) -> Result<ConditionReport> {
    let f = family.members()?;
    check_members(&f, condition, params)
}

pub(crate) fn check_members(f: &[SampledFunction], condition: Condition, params: &CheckParams) -> Result<ConditionReport> {
    let n = f.len();
    if n == 0 {
        return Err(Error::Domain("empty family".into()));
    }
    if !(params.tail_fraction > 0.0 && params.tail_fraction <= 1.0) {
        return Err(Error::Domain(format!("tail fraction must lie in (0, 1], got {}", params.tail_fraction)));
    }
    if condition.is_pairwise() && matches!(f[0].space, MetricSpace::Finite(_)) {
        return Err(Error::Unsupported("pairwise conditions need differences of values; finite metric spaces have none".into()));
    }
    let th = &params.thresholds;
    let ts = tail_start(n, params.tail_fraction);
    let mut notes = Vec::new();
    let mut nu_curve = Vec::new();
    let rows: Vec<ConditionRow> = match condition {
        Condition::Bv => vec![per_member_row(None, f.par_iter().map(jordan_variation).collect(), ts, th)],
        Condition::Vep => {
            check_eps(&params.eps)?;
            let last = &f[n - 1];
            let delta = f[ts..]
                .iter()
                .map(|g| (0..g.len()).map(|i| g.space.d(&g.values[i], &last.values[i])).fold(0.0, f64::max))
                .fold(0.0, f64::max);
            let mut rows = Vec::new();
            for &e in &params.eps {
                let vals = f.par_iter().map(|g| approx_variation(g, e).map(|r| r.value)).collect::<Result<Vec<_>>>()?;
                let mut row = per_member_row(Some(e), vals, ts, th);
                if delta < e {
                    let b = approx_variation(last, e - delta)?.value;
                    row.uniform_bound = Some(b);
                    if row.tail_sup <= b + 1e-9 {
                        row.verdict = Verdict::HoldsAtScale;
                    }
                }
                rows.push(row);
            }
            if delta < params.eps.iter().copied().fold(0.0, f64::max) {
                notes.push(format!("tail lies within {delta} of its last member; rows with eps > {delta} are bounded by V_(eps - {delta}) of it"));
            }
            if f.iter().any(|g| approx_variation(g, params.eps[0]).map(|r| !r.is_exact()).unwrap_or(false)) {
                notes.push("values are upper bounds (non-collinear Euclidean data)".into());
            }
            rows
        }
        Condition::Neps => {
            check_eps(&params.eps)?;
            params.eps.iter().map(|&e| per_member_row(Some(e), f.par_iter().map(|g| n_epsilon_count(g, e) as f64).collect(), ts, th)).collect()
        }
        Condition::Nu => {
            let n_max = params.n_max.max(3);
            let nus: Vec<Vec<f64>> = f.par_iter().map(|g| modulus_of_variation(g, n_max)).collect();
            let rows: Vec<ConditionRow> =
                (0..n_max).map(|i| per_member_row(Some((i + 1) as f64), nus.iter().map(|v| v[i]).collect(), ts, th)).collect();
            nu_curve = rows.iter().enumerate().map(|(i, r)| (i + 1, r.tail_sup / (i + 1) as f64)).collect();
            rows
        }
        Condition::Pairwise => {
            check_eps(&params.eps)?;
            let diffs = pair_diffs(f)?;
            let mut rows = Vec::new();
            for &e in &params.eps {
                rows.push(pair_row(Some(e), n, ts, th, |j, k| approx_variation(&diffs[j][k - j - 1], e).map(|r| r.value))?);
            }
            rows
        }
        Condition::Schrader => {
            let diffs = pair_diffs(f)?;
            vec![pair_row(None, n, ts, th, |j, k| schrader_oscillation(&diffs[j][k - j - 1]))?]
        }
    };
    let verdict = if condition == Condition::Nu {
        let n0 = (nu_curve.len() / 3).max(1);
        let (c0, c1) = (nu_curve[n0 - 1].1, nu_curve[nu_curve.len() - 1].1);
        notes.push(format!("nu_n/n: {c0} at n={n0}, {c1} at n={}", nu_curve.len()));
        if c1 <= (1.0 - th.nu_drop) * c0 + 1e-12 {
            Verdict::HoldsAtScale
        } else if c1 >= c0 * (1.0 - 1e-9) {
            Verdict::FailsAtScale
        } else {
            Verdict::Inconclusive
        }
    } else {
        combine(&rows)
    };
    Ok(ConditionReport {
        condition,
        family_size: n,
        tail_fraction: params.tail_fraction,
        tail_start: ts,
        rows,
        nu_curve,
        thresholds: *th,
        verdict,
        notes,
    })
}

/// `diffs[j][k - j - 1] = f_j - f_k` for `j < k`.
fn pair_diffs(f: &[SampledFunction]) -> Result<Vec<Vec<SampledFunction>>> {
    (0..f.len()).into_par_iter().map(|j| (j + 1..f.len()).map(|k| pointwise_difference(&f[j], &f[k])).collect()).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExceptionalReport {
    /// Excluded grid indices.
    pub excluded: Vec<usize>,
    pub full: ConditionReport,
    pub restricted: ConditionReport,
}

impl ExceptionalReport {
    pub fn to_json(&self) -> Value {
        json!({ "excluded": self.excluded, "full": self.full.to_json(), "restricted": self.restricted.to_json() })
    }
}

/// Runs the checker with and without the grid points in `excluded`.
pub fn check_exceptional_subset(
    family: &FunctionFamily,
    excluded: &[usize],
    condition: Condition,
    params: &CheckParams,
) -> Result<ExceptionalReport> {
    let f = family.members()?;
    let m = f.first().map(|g| g.len()).ok_or_else(|| Error::Domain("empty family".into()))?;
    if let Some(bad) = excluded.iter().find(|&&i| i >= m) {
        return Err(Error::Domain(format!("excluded index {bad} outside grid of {m} points")));
    }
    let keep: Vec<usize> = (0..m).filter(|i| !excluded.contains(i)).collect();
    if keep.is_empty() {
        return Err(Error::Domain("complement of the exceptional set is empty".into()));
    }
    let restricted: Vec<SampledFunction> = f.iter().map(|g| g.select(&keep)).collect();
    let mut ex = excluded.to_vec();
    ex.sort_unstable();
    ex.dedup();
    Ok(ExceptionalReport { excluded: ex, full: check_members(&f, condition, params)?, restricted: check_members(&restricted, condition, params)? })
}
