//! Invariant checks shared by the property tests and the acceptance run.
#![allow(dead_code)]

use approxvar::oracle::{random_instance, Engine};
use approxvar::variations::{jordan_variation, modulus_of_variation, oscillation};
use approxvar::{approx_variation, witness, GridDomain, MetricSpace, SampledFunction};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Check = Result<(), String>;

const TOL: f64 = 1e-9;

fn v(f: &SampledFunction, eps: f64) -> f64 {
    approx_variation(f, eps).expect("engine").value
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Real, punctured or finite instance, by seed.
pub fn instance(seed: u64) -> (SampledFunction, f64) {
    let engine = [Engine::Taut, Engine::Candidate, Engine::Finite][(seed % 3) as usize];
    random_instance(engine, seed, 10).expect("instance")
}

pub fn real_instance(seed: u64) -> (SampledFunction, f64) {
    random_instance(Engine::Taut, seed, 10).expect("instance")
}

pub fn eps_monotone(f: &SampledFunction, e1: f64, e2: f64) -> Check {
    let (a, b) = if e1 <= e2 { (e1, e2) } else { (e2, e1) };
    let (va, vb) = (v(f, a), v(f, b));
    ensure(vb <= va + TOL, || format!("V_{b} = {vb} > V_{a} = {va}"))
}

/// Restriction to every other point (and to a random subset) cannot increase `V_eps`.
pub fn domain_monotone(f: &SampledFunction, eps: f64, mask: u64) -> Check {
    let idx: Vec<usize> = (0..f.len()).filter(|i| mask >> i & 1 == 1).collect();
    if idx.is_empty() {
        return Ok(());
    }
    let (vs, vf) = (v(&f.select(&idx), eps), v(f, eps));
    ensure(vs <= vf + TOL, || format!("subset {idx:?}: {vs} > {vf}"))
}

pub fn zero_rules(f: &SampledFunction, eps: f64) -> Check {
    let osc = oscillation(f);
    ensure(v(f, osc.max(eps)) == 0.0, || format!("V at eps >= |f(T)| is not 0"))?;
    if f.space.is_linear() && !matches!(f.space, MetricSpace::Punctured(_)) {
        ensure(v(f, (osc / 2.0).max(1e-12)) <= TOL, || "V at |f(T)|/2 is not 0".into())?;
        if eps < osc / 2.0 {
            ensure(v(f, eps) > 0.0, || format!("V_{eps} = 0 below |f(T)|/2"))?;
        }
    }
    Ok(())
}

/// `|f(T)| - 2 eps <= V_eps`, `V_eps <= V`, and `V_eps = 0` once `eps >= |f(T)|`.
pub fn sandwich(f: &SampledFunction, eps: f64) -> Check {
    let osc = oscillation(f);
    let ve = v(f, eps);
    ensure(osc <= ve + 2.0 * eps + TOL, || format!("|f(T)| = {osc} > V + 2eps = {}", ve + 2.0 * eps))?;
    if osc > 0.0 {
        let at = v(f, osc) + osc;
        ensure(at <= osc + TOL, || "V_|f(T)| + |f(T)| exceeds |f(T)|".into())?;
    }
    if eps < osc {
        let total = jordan_variation(f);
        ensure((osc - 2.0 * eps).max(0.0) <= ve + TOL && ve <= total + TOL, || format!("{} <= {ve} <= {total} fails", osc - 2.0 * eps))?;
    }
    Ok(())
}

pub fn semi_additive(f: &SampledFunction, eps: f64) -> Check {
    let whole = v(f, eps);
    for t in 0..f.len() {
        let (a, b) = (v(&f.slice(0, t), eps), v(&f.slice(t, f.len() - 1), eps));
        ensure(a + b <= whole + TOL, || format!("split {t}: {a} + {b} > {whole}"))?;
        ensure(whole <= a + b + 2.0 * eps + TOL, || format!("split {t}: {whole} > {a} + {b} + 2eps"))?;
    }
    Ok(())
}

/// Any strictly monotone reparametrization leaves `V_eps` unchanged.
pub fn change_of_variable(f: &SampledFunction, eps: f64, seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = 0.0;
    let ts: Vec<f64> = (0..f.len())
        .map(|_| {
            t += rng.gen_range(0.01..1.0);
            t
        })
        .collect();
    let g = f.with_domain(GridDomain::from_f64(&ts).unwrap()).unwrap();
    let rev: Vec<f64> = ts.iter().map(|x| -x).rev().collect();
    let vals: Vec<_> = f.values.iter().rev().cloned().collect();
    let h = SampledFunction::new(GridDomain::from_f64(&rev).unwrap(), f.space.clone(), vals).unwrap();
    let base = v(f, eps);
    // reversing the order reverses the summation order, so that side is exact up to rounding
    ensure(v(&g, eps) == base && (v(&h, eps) - base).abs() <= 1e-12 * (1.0 + base), || format!("{base} vs {} / {}", v(&g, eps), v(&h, eps)))
}

pub fn witness_valid(f: &SampledFunction, eps: f64) -> Check {
    let r = approx_variation(f, eps).unwrap();
    let g = witness(f, eps).unwrap();
    let dist = (0..f.len()).map(|i| f.space.d(&f.values[i], &g.values[i])).fold(0.0, f64::max);
    ensure(dist <= eps + 1e-9, || format!("witness distance {dist} > {eps}"))?;
    let vg = jordan_variation(&g);
    ensure((vg - r.value - r.slack).abs() <= 1e-9 && (r.attained || r.slack >= 0.0), || format!("V(witness) = {vg}, value {}, slack {}", r.value, r.slack))?;
    if r.attained {
        ensure((vg - r.value).abs() <= 1e-9, || format!("attained but V(witness) = {vg} != {}", r.value))?;
        ensure(g.values.iter().all(|p| f.space.contains(p, 1e-12)), || "witness leaves the space".into())?;
    }
    Ok(())
}

pub fn nu_rules(f: &SampledFunction) -> Check {
    let m = f.len();
    let nu = modulus_of_variation(f, m + 1);
    ensure((nu[0] - oscillation(f)).abs() <= 1e-12, || format!("nu_1 = {} != osc", nu[0]))?;
    ensure(nu.windows(2).all(|w| w[1] >= w[0]), || "nu not nondecreasing".into())?;
    let total = jordan_variation(f);
    ensure(nu[m.saturating_sub(2)..].iter().all(|x| (x - total).abs() <= 1e-12), || "nu_n does not saturate at V".into())
}

pub fn additivity(f: &SampledFunction) -> Check {
    let total = jordan_variation(f);
    for t in 0..f.len() {
        let s = jordan_variation(&f.slice(0, t)) + jordan_variation(&f.slice(t, f.len() - 1));
        ensure((s - total).abs() <= 1e-12, || format!("split {t}: {s} != {total}"))?;
    }
    Ok(())
}

/// Runs `check` on `n` seeded instances; returns failing seeds with messages.
pub fn sweep(n: u64, check: impl Fn(u64) -> Check + Sync) -> Vec<(u64, String)> {
    use rayon::prelude::*;
    (0..n).into_par_iter().filter_map(|s| check(s).err().map(|e| (s, e))).collect()
}

/// The named invariant families, each as a per-seed check.
pub fn invariants() -> Vec<(&'static str, Box<dyn Fn(u64) -> Check + Sync>)> {
    vec![
        ("eps-monotonicity", Box::new(|s| {
            let (f, e) = instance(s);
            eps_monotone(&f, e, e * 1.7 + 0.01)
        })),
        ("domain monotonicity", Box::new(|s| {
            let (f, e) = instance(s);
            domain_monotone(&f, e, s.wrapping_mul(0x9E37_79B9_7F4A_7C15) >> 7)
        })),
        ("zero rules", Box::new(|s| {
            let (f, e) = instance(s);
            zero_rules(&f, e)
        })),
        ("sandwich", Box::new(|s| {
            let (f, e) = instance(s);
            sandwich(&f, e)
        })),
        ("semi-additivity", Box::new(|s| {
            let (f, e) = instance(s);
            semi_additive(&f, e)
        })),
        ("change of variable", Box::new(|s| {
            let (f, e) = instance(s);
            change_of_variable(&f, e, s)
        })),
        ("witness validity", Box::new(|s| {
            let (f, e) = instance(s);
            witness_valid(&f, e)
        })),
        ("nu_1 and saturation", Box::new(|s| nu_rules(&instance(s).0))),
        ("additivity of V", Box::new(|s| additivity(&instance(s).0))),
    ]
}
