//! Brute-force references for the fast engines on small instances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::approxvar::{approx_variation, candidate_dp};
use crate::error::{Error, Result};
use crate::sampled::{GridDomain, SampledFunction};
use crate::spaces::{ball_members, FiniteMetric, Hole, MetricSpace, Point, DEFAULT_TOL};
use crate::variations::{oscillation, ClassicalVariationReport, Gauge, WatermanSequence};

/// Cap on the number of label assignments visited by the finite product search.
const MAX_PRODUCT: usize = 5_000_000;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleConfig {
    pub max_points: usize,
    /// Tube step as a fraction of the oscillation.
    pub step_factor: f64,
    pub seed: u64,
    pub instances: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { max_points: 10, step_factor: 1e-3, seed: 0, instances: 1000 }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_points < 2 {
            return Err(Error::Domain("max points must be at least 2".into()));
        }
        if !(self.step_factor > 0.0) {
            return Err(Error::Domain("step factor must be positive".into()));
        }
        Ok(())
    }

    /// Absolute tube step for `f`.
    pub fn step(&self, f: &SampledFunction) -> f64 {
        let osc = oscillation(f);
        self.step_factor * if osc > 0.0 { osc } else { 1.0 }
    }
}

fn check_size(f: &SampledFunction, cfg: &OracleConfig) -> Result<()> {
    cfg.validate()?;
    if f.len() > cfg.max_points {
        return Err(Error::capacity(format!("{} points exceed oracle cap {}", f.len(), cfg.max_points), Some(cfg.max_points)));
    }
    Ok(())
}

/// `min_g sum |g_i - g_{i-1}|` with `g_i` from `layers[i]`, by sorted sweeps.
fn layered_abs(layers: &[Vec<f64>]) -> f64 {
    let mut prev: Vec<(f64, f64)> = layers[0].iter().map(|&v| (v, 0.0)).collect();
    for layer in &layers[1..] {
        prev.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut cur: Vec<f64> = layer.clone();
        cur.sort_by(|a, b| a.total_cmp(b));
        let mut out = vec![f64::INFINITY; cur.len()];
        // from below: D(b) - b for b <= a
        let (mut j, mut best) = (0, f64::INFINITY);
        for (k, &a) in cur.iter().enumerate() {
            while j < prev.len() && prev[j].0 <= a {
                best = best.min(prev[j].1 - prev[j].0);
                j += 1;
            }
            out[k] = out[k].min(a + best);
        }
        // from above: D(b) + b for b >= a
        let (mut j, mut best) = (prev.len(), f64::INFINITY);
        for (k, &a) in cur.iter().enumerate().rev() {
            while j > 0 && prev[j - 1].0 >= a {
                j -= 1;
                best = best.min(prev[j].1 + prev[j].0);
            }
            out[k] = out[k].min(best - a);
        }
        prev = cur.into_iter().zip(out).collect();
    }
    prev.iter().map(|p| p.1).fold(f64::INFINITY, f64::min)
}

fn allowed(h: Option<&Hole>, v: f64) -> bool {
    match h {
        None => true,
        // closure of the complement
        Some(h) => v <= h.lo + DEFAULT_TOL || v >= h.hi - DEFAULT_TOL,
    }
}

fn real_brute(vals: &[f64], eps: f64, hole: Option<&Hole>, step: f64) -> f64 {
    let mut g: Vec<f64> = vals.iter().flat_map(|&v| [v - eps, v, v + eps]).collect();
    if let Some(h) = hole {
        g.extend([h.lo, h.hi]);
    }
    let layers: Vec<Vec<f64>> = vals
        .iter()
        .map(|&c| {
            let n = (2.0 * eps / step).floor() as usize;
            let mut l: Vec<f64> = (0..=n).map(|k| c - eps + k as f64 * step).collect();
            l.push(c + eps);
            l.extend(g.iter().copied().filter(|&x| (x - c).abs() <= eps + DEFAULT_TOL));
            l.retain(|&x| allowed(hole, x));
            l
        })
        .collect();
    layered_abs(&layers)
}

fn finite_brute(fm: &FiniteMetric, labels: &[usize], eps: f64) -> Result<f64> {
    let balls: Vec<Vec<usize>> = labels.iter().map(|&c| ball_members(fm, c, eps, DEFAULT_TOL)).collect();
    let total = balls.iter().try_fold(1usize, |acc, b| acc.checked_mul(b.len()));
    if total.map_or(true, |t| t > MAX_PRODUCT) {
        return Err(Error::capacity("finite product search too large", Some(MAX_PRODUCT)));
    }
    fn dfs(i: usize, last: usize, cost: f64, fm: &FiniteMetric, balls: &[Vec<usize>], best: &mut f64) {
        if cost >= *best {
            return;
        }
        if i == balls.len() {
            *best = cost;
            return;
        }
        for &m in &balls[i] {
            dfs(i + 1, m, cost + fm.dist[last][m], fm, balls, best);
        }
    }
    let mut best = f64::INFINITY;
    for &m in &balls[0] {
        dfs(1, m, 0.0, fm, &balls, &mut best);
    }
    Ok(best)
}

/// Reference `V_eps` by exhaustive search: a discretized tube plus the candidate set
/// on the (punctured) line, the full product of balls on finite spaces.
pub fn brute_epsilon_variation(f: &SampledFunction, eps: f64, cfg: &OracleConfig) -> Result<f64> {
    check_size(f, cfg)?;
    if !(eps > 0.0) {
        return Err(Error::Domain("eps must be positive".into()));
    }
    match &f.space {
        MetricSpace::RealLine | MetricSpace::Punctured(_) => {
            let vals = f.real_values().ok_or_else(|| Error::Shape("expected real values".into()))?;
            let hole = match &f.space {
                MetricSpace::Punctured(h) => Some(h),
                _ => None,
            };
            Ok(real_brute(&vals, eps, hole, cfg.step(f)))
        }
        MetricSpace::Euclidean { dim: 1 } => {
            let vals: Vec<f64> = f.values.iter().map(|p| p.coords().map(|c| c[0]).unwrap_or(f64::NAN)).collect();
            Ok(real_brute(&vals, eps, None, cfg.step(f)))
        }
        MetricSpace::Finite(fm) => {
            let labels: Vec<usize> = f.values.iter().map(|p| p.as_label().ok_or_else(|| Error::Shape("expected labels".into()))).collect::<Result<_>>()?;
            finite_brute(fm, &labels, eps)
        }
        MetricSpace::Euclidean { .. } => Err(Error::Unsupported("no reference for multi-dimensional targets".into())),
    }
}

/// Every interval system `[a_1, b_1], [a_2, b_2], ...` with `b_k <= a_{k+1}`, as
/// increments in left-to-right order.
fn for_each_system(d: &[Vec<f64>], visit: &mut impl FnMut(&[f64])) {
    fn go(p: usize, d: &[Vec<f64>], incs: &mut Vec<f64>, visit: &mut impl FnMut(&[f64])) {
        visit(incs);
        for a in p..d.len() {
            for b in a + 1..d.len() {
                incs.push(d[a][b]);
                go(b, d, incs, visit);
                incs.pop();
            }
        }
    }
    go(0, d, &mut Vec::new(), visit);
}

/// Reference classical functionals by enumeration of all interval systems
/// (and all point subsets for the Schrader part).
pub fn brute_interval_functionals(
    f: &SampledFunction,
    n_max: usize,
    eps_list: &[f64],
    lam: Option<&WatermanSequence>,
    phi: Option<Gauge>,
    cfg: &OracleConfig,
) -> Result<ClassicalVariationReport> {
    check_size(f, cfg)?;
    let m = f.len();
    let d: Vec<Vec<f64>> = (0..m).map(|a| (0..m).map(|b| f.d(a, b)).collect()).collect();
    let n_max = n_max.max(1);
    let mut nu = vec![0.0f64; n_max];
    let mut n_eps = vec![0usize; eps_list.len()];
    let mut jordan = 0.0f64;
    let mut osc = 0.0f64;
    let mut lam_best = 0.0f64;
    let mut phi_best = 0.0f64;
    for_each_system(&d, &mut |incs| {
        let s = incs.iter().fold(0.0, |a, v| a + v);
        jordan = jordan.max(s);
        if incs.len() == 1 {
            osc = osc.max(incs[0]);
        }
        for (n, slot) in nu.iter_mut().enumerate() {
            if incs.len() <= n + 1 {
                *slot = slot.max(s);
            }
        }
        let mn = incs.iter().copied().fold(f64::INFINITY, f64::min);
        for (k, &e) in eps_list.iter().enumerate() {
            if incs.is_empty() || mn > e {
                n_eps[k] = n_eps[k].max(incs.len());
            }
        }
        if let Some(l) = lam {
            if incs.len() <= l.lambda.len() {
                let mut srt = incs.to_vec();
                srt.sort_by(|a, b| b.total_cmp(a));
                lam_best = lam_best.max(srt.iter().zip(&l.lambda).map(|(v, w)| v / w).sum());
            }
        }
        if let Some(p) = phi {
            phi_best = phi_best.max(incs.iter().fold(0.0, |a, v| a + p.eval(*v)));
        }
    });
    let schrader = f.real_values().map(|v| {
        let mut best = 0.0f64;
        for mask in 1u32..(1 << m) {
            let pick: Vec<f64> = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| v[i]).collect();
            let alt = pick.iter().all(|x| *x != 0.0) && pick.windows(2).all(|w| (w[0] > 0.0) != (w[1] > 0.0));
            if alt {
                best = best.max(pick.iter().fold(0.0, |a, x| a + x.abs()));
            }
        }
        best
    });
    Ok(ClassicalVariationReport {
        jordan,
        oscillation: osc,
        nu,
        n_eps: eps_list.iter().copied().zip(n_eps).collect(),
        lambda_var: lam.map(|_| lam_best),
        phi_var: phi.map(|_| phi_best),
        schrader,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    Taut,
    Candidate,
    Finite,
}

impl Engine {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "taut" => Ok(Engine::Taut),
            "candidate" => Ok(Engine::Candidate),
            "finite" => Ok(Engine::Finite),
            _ => Err(Error::Parse(format!("unknown engine {s:?} (taut, candidate, finite)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InstanceOutcome {
    pub seed: u64,
    pub points: usize,
    pub eps: f64,
    pub engine_value: f64,
    pub reference_value: f64,
    /// Allowed gap.
    pub bound: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleSummary {
    pub engine: Engine,
    pub config: OracleConfig,
    pub passed: usize,
    pub failed: usize,
    pub failing_seeds: Vec<u64>,
    pub max_gap: f64,
}

/// Dyadic value in `[0, 1]` so sums stay exact.
#[cfg(test)]
fn dyadic(rng: &mut ChaCha8Rng) -> f64 {
    rng.gen_range(0..=256) as f64 / 256.0
}

/// Seeded random instance: uniform values, `eps` uniform in `(0, osc)`.
pub fn random_instance(engine: Engine, seed: u64, max_points: usize) -> Result<(SampledFunction, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = rng.gen_range(2..=max_points.max(2));
    // finite instances stay at 8 points or fewer
    let m = if engine == Engine::Finite { m.min(8) } else { m };
    let f = match engine {
        Engine::Taut => SampledFunction::real_seq(&(0..m).map(|_| rng.gen::<f64>()).collect::<Vec<_>>())?,
        Engine::Candidate => {
            let lo = rng.gen_range(0.1..0.6);
            let hi = lo + rng.gen_range(0.0..0.3);
            let closed = rng.gen_bool(0.5);
            let hi = if hi - lo < 1e-3 && !closed { lo + 1e-3 } else { hi };
            let vals = (0..m)
                .map(|_| {
                    let left = rng.gen_bool(lo / (1.0 - (hi - lo)));
                    let v = if left { rng.gen_range(0.0..lo) } else { rng.gen_range(hi..1.0) };
                    Point::Real(if closed && v == hi { hi + 1e-3 } else { v })
                })
                .collect();
            SampledFunction::new(GridDomain::uniform(m - 1), MetricSpace::punctured(lo, hi, closed), vals)?
        }
        Engine::Finite => {
            let n = rng.gen_range(2..=5);
            let mut dist = vec![vec![0.0; n]; n];
            for a in 0..n {
                for b in a + 1..n {
                    let v = [1.0, 1.5, 2.0][rng.gen_range(0..3)];
                    dist[a][b] = v;
                    dist[b][a] = v;
                }
            }
            let labels = (0..n).map(|i| format!("p{i}")).collect();
            let vals = (0..m).map(|_| Point::Label(rng.gen_range(0..n))).collect();
            SampledFunction::new(GridDomain::uniform(m - 1), MetricSpace::Finite(FiniteMetric::new(labels, dist)), vals)?
        }
    };
    let osc = oscillation(&f);
    let eps = if osc > 0.0 { rng.gen_range(0.0..osc).max(1e-6 * osc) } else { 0.5 };
    Ok((f, eps))
}

/// Engine value against the reference on one seeded instance.
pub fn check_instance(engine: Engine, seed: u64, cfg: &OracleConfig) -> Result<InstanceOutcome> {
    let (f, eps) = random_instance(engine, seed, cfg.max_points)?;
    let reference = brute_epsilon_variation(&f, eps, cfg)?;
    let (value, bound) = match engine {
        Engine::Taut => {
            let taut = approx_variation(&f, eps)?.value;
            let cand = candidate_dp(&f.real_values().unwrap_or_default(), eps, None, DEFAULT_TOL).value;
            // both fast engines must agree with each other too
            let v = if (taut - cand).abs() > 1e-9 { f64::INFINITY } else { taut };
            (v, 2.0 * cfg.step(&f))
        }
        Engine::Candidate => (approx_variation(&f, eps)?.value, 2.0 * cfg.step(&f)),
        Engine::Finite => (approx_variation(&f, eps)?.value, 0.0),
    };
    // the reference can only overestimate
    let gap = reference - value;
    let pass = gap >= -1e-9 && gap <= bound + 1e-9;
    Ok(InstanceOutcome { seed, points: f.len(), eps, engine_value: value, reference_value: reference, bound, pass })
}

/// `cfg.instances` seeds starting at `cfg.seed`, in parallel.
pub fn run_oracle(engine: Engine, cfg: &OracleConfig) -> Result<OracleSummary> {
    cfg.validate()?;
    let out: Vec<InstanceOutcome> = (0..cfg.instances as u64)
        .into_par_iter()
        .map(|k| check_instance(engine, cfg.seed.wrapping_add(k), cfg))
        .collect::<Result<_>>()?;
    let failing_seeds: Vec<u64> = out.iter().filter(|o| !o.pass).map(|o| o.seed).collect();
    Ok(OracleSummary {
        engine,
        config: cfg.clone(),
        passed: out.len() - failing_seeds.len(),
        failed: failing_seeds.len(),
        failing_seeds,
        max_gap: out.iter().map(|o| (o.reference_value - o.engine_value).abs()).fold(0.0, f64::max),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::variations::classical_report;

    #[test]
    fn identity_and_spike() {
        let cfg = OracleConfig::default();
        let id = SampledFunction::real(&[0.0, 0.25, 0.5, 0.75, 1.0], &[0.0, 0.25, 0.5, 0.75, 1.0]).unwrap();
        let v = brute_epsilon_variation(&id, 0.1, &cfg).unwrap();
        assert!((v - 0.8).abs() <= 2.0 * cfg.step(&id));
        let spike = SampledFunction::real_seq(&[0.0, 0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!((brute_epsilon_variation(&spike, 0.2, &cfg).unwrap() - 1.2).abs() <= 2e-3);
    }

    #[test]
    fn cap_enforced() {
        let f = SampledFunction::real_seq(&[0.0; 11]).unwrap();
        assert!(matches!(brute_epsilon_variation(&f, 0.1, &OracleConfig::default()), Err(Error::Capacity { .. })));
    }

    #[test]
    fn small_runs_pass() {
        let cfg = OracleConfig { instances: 40, ..Default::default() };
        for e in [Engine::Taut, Engine::Candidate, Engine::Finite] {
            let s = run_oracle(e, &cfg).unwrap();
            assert_eq!(s.failed, 0, "{e:?} {:?}", s.failing_seeds);
        }
    }

    #[test]
    fn functionals_match() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let lam = WatermanSequence::harmonic(4);
        for _ in 0..30 {
            let m = rng.gen_range(2..=8);
            let v: Vec<f64> = (0..m).map(|_| dyadic(&mut rng) - 0.5).collect();
            let f = SampledFunction::real_seq(&v).unwrap();
            let eps = [0.1, 0.3];
            let a = classical_report(&f, 4, &eps, Some(&lam), Some(Gauge::Power { p: 2.0 })).unwrap();
            let b = brute_interval_functionals(&f, 4, &eps, Some(&lam), Some(Gauge::Power { p: 2.0 }), &OracleConfig::default()).unwrap();
            assert_eq!(a, b, "{v:?}");
        }
    }

    #[test]
    fn monotone_nu_is_total_increment() {
        let f = SampledFunction::real_seq(&[0.0, 0.1, 0.5, 0.7, 1.0]).unwrap();
        let r = brute_interval_functionals(&f, 3, &[1.0], None, None, &OracleConfig::default()).unwrap();
        assert!(r.nu.iter().all(|v| (*v - 1.0).abs() < 1e-15));
        assert_eq!(r.n_eps, vec![(1.0, 0)]);
    }
}
