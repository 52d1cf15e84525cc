//! Classical variation functionals on a sampled function.
//!
//! Increments over an index interval `[a, b]` are `d(f(t_a), f(t_b))`. Interval
//! systems are non-overlapping but may share endpoints.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sampled::SampledFunction;

/// Default size cap for exhaustive interval-system search.
pub const DEFAULT_MAX_EXHAUSTIVE: usize = 16;

/// Cap from `APPROXVAR_MAX_EXHAUSTIVE`, else the default.
pub fn exhaustive_cap() -> usize {
    std::env::var("APPROXVAR_MAX_EXHAUSTIVE")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_EXHAUSTIVE)
}

pub fn jordan_variation(f: &SampledFunction) -> f64 {
    (1..f.len()).map(|i| f.d(i - 1, i)).sum()
}

/// Diameter of the image.
pub fn oscillation(f: &SampledFunction) -> f64 {
    let mut best = 0.0f64;
    for i in 0..f.len() {
        for j in i + 1..f.len() {
            best = best.max(f.d(i, j));
        }
    }
    best
}

/// `nu_1, ..., nu_{n_max}`: best total increment over at most `n` intervals.
pub fn modulus_of_variation(f: &SampledFunction, n_max: usize) -> Vec<f64> {
    let m = f.len();
    let mut prev = vec![0.0f64; m];
    let mut out = Vec::with_capacity(n_max);
    for _ in 0..n_max {
        let mut cur = vec![0.0f64; m];
        for b in 0..m {
            let mut v = if b > 0 { cur[b - 1] } else { 0.0 };
            for a in 0..b {
                v = v.max(prev[a] + f.d(a, b));
            }
            cur[b] = v;
        }
        out.push(cur.last().copied().unwrap_or(0.0));
        prev = cur;
    }
    out
}

/// Largest number of intervals whose increments all exceed `eps`.
pub fn n_epsilon_count(f: &SampledFunction, eps: f64) -> usize {
    let m = f.len();
    let mut cnt = vec![0usize; m];
    for b in 0..m {
        let mut c = if b > 0 { cnt[b - 1] } else { 0 };
        for a in 0..b {
            if f.d(a, b) > eps {
                c = c.max(cnt[a] + 1);
            }
        }
        cnt[b] = c;
    }
    cnt.last().copied().unwrap_or(0)
}

/// Nondecreasing positive weights `lambda_1 <= lambda_2 <= ...`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WatermanSequence {
    pub lambda: Vec<f64>,
}

impl WatermanSequence {
    pub fn new(lambda: Vec<f64>) -> Result<Self> {
        if lambda.is_empty() || lambda.iter().any(|l| !(l.is_finite() && *l > 0.0)) {
            return Err(Error::Domain("waterman weights must be positive".into()));
        }
        if lambda.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::Domain("waterman weights must be nondecreasing".into()));
        }
        Ok(WatermanSequence { lambda })
    }

    /// `lambda_i = i` for `i = 1..=n`.
    pub fn harmonic(n: usize) -> Self {
        WatermanSequence { lambda: (1..=n.max(1)).map(|i| i as f64).collect() }
    }
}

/// Waterman variation by exhaustive search over interval systems; the largest
/// increments are paired with the smallest weights.
pub fn waterman_variation(f: &SampledFunction, lam: &WatermanSequence) -> Result<f64> {
    waterman_variation_capped(f, lam, exhaustive_cap())
}

pub fn waterman_variation_capped(f: &SampledFunction, lam: &WatermanSequence, cap: usize) -> Result<f64> {
    if f.len() > cap {
        return Err(Error::capacity(format!("waterman search over {} points exceeds cap {cap}", f.len()), Some(cap)));
    }
    let m = f.len();
    let d: Vec<Vec<f64>> = (0..m).map(|a| (0..m).map(|b| f.d(a, b)).collect()).collect();
    let mut best = 0.0f64;
    let mut incs: Vec<f64> = Vec::new();
    fn score(incs: &[f64], lam: &[f64]) -> f64 {
        let mut s: Vec<f64> = incs.to_vec();
        s.sort_by(|a, b| b.total_cmp(a));
        s.iter().zip(lam).map(|(v, l)| v / l).sum()
    }
    fn dfs(p: usize, d: &[Vec<f64>], lam: &[f64], incs: &mut Vec<f64>, best: &mut f64) {
        *best = best.max(score(incs, lam));
        if incs.len() >= lam.len() {
            return;
        }
        for a in p..d.len() {
            for b in a + 1..d.len() {
                if d[a][b] > 0.0 {
                    incs.push(d[a][b]);
                    dfs(b, d, lam, incs, best);
                    incs.pop();
                }
            }
        }
    }
    dfs(0, &d, &lam.lambda, &mut incs, &mut best);
    Ok(best)
}

/// Gauge functions for the phi-variation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "gauge", rename_all = "snake_case")]
pub enum Gauge {
    Identity,
    Power { p: f64 },
    /// `e^u - 1`
    ExpMinusOne,
}

impl Gauge {
    pub fn eval(&self, u: f64) -> f64 {
        match self {
            Gauge::Identity => u,
            Gauge::Power { p } => u.powf(*p),
            Gauge::ExpMinusOne => u.exp_m1(),
        }
    }

    /// `identity`, `power:2`, `exp`.
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().split_once(':') {
            Some(("power", p)) => p
                .parse::<f64>()
                .ok()
                .filter(|p| *p > 0.0)
                .map(|p| Gauge::Power { p })
                .ok_or_else(|| Error::Parse(format!("bad power {p:?}"))),
            None if s.trim() == "identity" => Ok(Gauge::Identity),
            None if s.trim() == "exp" => Ok(Gauge::ExpMinusOne),
            _ => Err(Error::Parse(format!("unknown gauge {s:?}"))),
        }
    }
}

pub fn phi_variation(f: &SampledFunction, phi: Gauge) -> f64 {
    let m = f.len();
    let mut best = vec![0.0f64; m];
    for b in 0..m {
        let mut v = if b > 0 { best[b - 1] } else { 0.0 };
        for a in 0..b {
            v = v.max(best[a] + phi.eval(f.d(a, b)));
        }
        best[b] = v;
    }
    best.last().copied().unwrap_or(0.0)
}

/// Best sum of `|f(t_i)|` over subsequences whose signs strictly alternate.
/// For sign-constant `f` this is `max |f|`.
pub fn schrader_oscillation(f: &SampledFunction) -> Result<f64> {
    let v = f.real_values().ok_or_else(|| Error::Unsupported("Schrader oscillation needs real values".into()))?;
    let (mut end_pos, mut end_neg, mut best) = (f64::NEG_INFINITY, f64::NEG_INFINITY, 0.0f64);
    for x in v {
        if x > 0.0 {
            let s = x + end_neg.max(0.0);
            end_pos = end_pos.max(s);
            best = best.max(s);
        } else if x < 0.0 {
            let s = -x + end_pos.max(0.0);
            end_neg = end_neg.max(s);
            best = best.max(s);
        }
    }
    Ok(best)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassicalVariationReport {
    pub jordan: f64,
    pub oscillation: f64,
    pub nu: Vec<f64>,
    pub n_eps: Vec<(f64, usize)>,
    pub lambda_var: Option<f64>,
    pub phi_var: Option<f64>,
    pub schrader: Option<f64>,
}

/// All functionals at once. Waterman and phi parts only when requested; Schrader
/// only for real-valued `f`.
pub fn classical_report(
    f: &SampledFunction,
    n_max: usize,
    eps_list: &[f64],
    lam: Option<&WatermanSequence>,
    phi: Option<Gauge>,
) -> Result<ClassicalVariationReport> {
    Ok(ClassicalVariationReport {
        jordan: jordan_variation(f),
        oscillation: oscillation(f),
        nu: modulus_of_variation(f, n_max.max(1)),
        n_eps: eps_list.iter().map(|&e| (e, n_epsilon_count(f, e))).collect(),
        lambda_var: lam.map(|l| waterman_variation(f, l)).transpose()?,
        phi_var: phi.map(|p| phi_variation(f, p)),
        schrader: schrader_oscillation(f).ok(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(v: &[f64]) -> SampledFunction {
        SampledFunction::real_seq(v).unwrap()
    }

    #[test]
    fn jordan_and_oscillation() {
        assert_eq!(jordan_variation(&seq(&[0.0, 0.25, 0.5, 1.0])), 1.0);
        assert_eq!(jordan_variation(&seq(&[1.0, 0.0, 1.0])), 2.0);
        assert_eq!(jordan_variation(&seq(&[0.0, -1.0, 1.0])), 3.0);
        assert_eq!(oscillation(&seq(&[0.0, -1.0, 1.0])), 2.0);
        assert_eq!(oscillation(&seq(&[3.0, 3.0])), 0.0);
    }

    #[test]
    fn modulus_on_pattern() {
        // amplitude 1/2 pattern with 4 alternations
        let f = seq(&[0.5, 0.0, 0.5, 0.0, 0.5]);
        let nu = modulus_of_variation(&f, 6);
        assert_eq!(nu, vec![0.5, 1.0, 1.5, 2.0, 2.0, 2.0]);
        let mono = modulus_of_variation(&seq(&[0.0, 0.1, 0.7, 1.0]), 3);
        assert!(mono.iter().all(|v| (*v - 1.0).abs() < 1e-15));
    }

    #[test]
    fn n_eps_counts() {
        let f = seq(&[0.5, 0.0, 0.5, 0.0, 0.5]);
        assert_eq!(n_epsilon_count(&f, 0.4), 4);
        assert_eq!(n_epsilon_count(&f, 0.5), 0);
        assert_eq!(n_epsilon_count(&seq(&[0.0, 1.0]), 1.0), 0);
    }

    #[test]
    fn waterman_cases() {
        let f = seq(&[0.0, 1.0, 0.2, 0.9]);
        let ones = WatermanSequence::new(vec![1.0; 4]).unwrap();
        assert!((waterman_variation(&f, &ones).unwrap() - jordan_variation(&f)).abs() < 1e-12);
        assert_eq!(waterman_variation(&seq(&[2.0; 5]), &WatermanSequence::harmonic(5)).unwrap(), 0.0);
        let big = seq(&vec![0.0; 20]);
        assert!(matches!(waterman_variation_capped(&big, &ones, 16), Err(Error::Capacity { .. })));
        assert!(WatermanSequence::new(vec![2.0, 1.0]).is_err());
    }

    #[test]
    fn phi_cases() {
        let f = seq(&[0.0, 1.0, 0.2, 0.9]);
        assert!((phi_variation(&f, Gauge::Identity) - jordan_variation(&f)).abs() < 1e-12);
        assert_eq!(phi_variation(&seq(&[1.0, 1.0]), Gauge::Power { p: 2.0 }), 0.0);
        // squares favour one big jump: (1-0)^2 vs 1 + 0.64 + 0.49
        assert!((phi_variation(&f, Gauge::Power { p: 2.0 }) - (1.0 + 0.64 + 0.49)).abs() < 1e-12);
        assert_eq!(Gauge::parse("power:2").unwrap(), Gauge::Power { p: 2.0 });
    }

    #[test]
    fn schrader_cases() {
        assert_eq!(schrader_oscillation(&seq(&[0.0, 2.0, 1.0])).unwrap(), 2.0);
        assert_eq!(schrader_oscillation(&seq(&[0.0, 0.0])).unwrap(), 0.0);
        assert_eq!(schrader_oscillation(&seq(&[1.0, -2.0, 3.0, 5.0, -1.0])).unwrap(), 1.0 + 2.0 + 5.0 + 1.0);
    }
}
