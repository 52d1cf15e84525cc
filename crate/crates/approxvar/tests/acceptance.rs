//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

mod common;

use std::time::{Duration, Instant};

use approxvar::closed_forms::{canonical_function, catalog, run_catalog, CaseFamily, ClosedFormCase};
use approxvar::oracle::{run_oracle, Engine, OracleConfig};
use approxvar::sampled::pointwise_difference;
use approxvar::selection::{
    check_condition, families, irregular_extract, pairwise_cauchy_pairs, ramsey_monochromatic_subset, sp_extract, CheckParams, Condition,
    EpsilonLadder, Verdict,
};
use approxvar::approxvar::{left_limit, right_limit};
use approxvar::{approx_variation, strict_variant};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn need(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn value_of(case: ClosedFormCase, k: usize) -> f64 {
    approx_variation(&canonical_function(&case, 0, k).unwrap(), case.eps).unwrap().value
}

fn closed_forms() -> Outcome {
    let rows = run_catalog(&catalog());
    let bad: Vec<&str> = rows.iter().filter(|r| !r.pass).map(|r| r.id.as_str()).collect();
    need(bad.is_empty(), || format!("catalog failures: {bad:?}"))?;
    let expect = |id: &str, v: f64| -> Result<(), String> {
        let r = rows.iter().find(|r| r.id == id).ok_or_else(|| format!("missing case {id}"))?;
        need(close(r.engine_value, v, 1e-9), || format!("{id}: {} != {v}", r.engine_value))
    };
    for (id, v) in [
        ("identity_e0.1", 0.8),
        ("identity_e0.25", 0.5),
        ("identity_e0.6", 0.0),
        ("endpoint_spike_e0.2", 0.6),
        ("interior_spike_e0.2", 1.2),
        ("factorial_j3_e0.2", 7.2),
        ("punctured_endpoint_spike_e0.2", 0.6),
        ("punctured_dirichlet_open_r0.1_e0.7", 0.0),
    ] {
        expect(id, v)?;
    }
    let steps = rows.iter().filter(|r| r.id.starts_with("three_step_")).count();
    need(steps == 12, || format!("{steps} three-step cases"))?;
    let out = std::env::temp_dir().join(format!("approxvar-accept-{}.csv", std::process::id()));
    let code = approxvar::cli::run(["approxvar", "verify-paper", "-o", out.to_str().unwrap()]);
    let _ = std::fs::remove_file(&out);
    need(code == 0, || format!("verify-paper exit {code}"))?;
    Ok(format!("{} catalog cases", rows.len()))
}

fn sin_bounds() -> Outcome {
    for j in 1..=3usize {
        for eps in [0.1, 0.25, 0.4] {
            let v = value_of(ClosedFormCase::new("sin", CaseFamily::SinJt { j }, 1.0, eps), 0);
            let (lo, hi) = (4.0 * j as f64 * (1.0 - 2.0 * eps), 4.0 * j as f64 - 2.0 * eps);
            need(v >= lo - 1e-12 && v <= hi + 1e-12, || format!("j={j} eps={eps}: {v} not in [{lo}, {hi}]"))?;
        }
    }
    Ok("9 cases inside their bounds".into())
}

fn divergence_rates() -> Outcome {
    let ks = [4usize, 8, 16, 32];
    for eps in [0.1, 0.3, 0.45] {
        let vals: Vec<f64> = ks.iter().map(|&k| value_of(ClosedFormCase::new("d", CaseFamily::Dirichlet, 1.0, eps), k)).collect();
        for w in 0..ks.len() - 1 {
            let s = (vals[w + 1] - vals[w]) / (ks[w + 1] - ks[w]) as f64;
            need(close(s, 1.0 - 2.0 * eps, 1e-9), || format!("eps={eps}: slope {s}"))?;
        }
    }
    let r = 0.1;
    for eps in [0.5, 0.55] {
        let fam = CaseFamily::PuncturedDirichlet { r, closed_removed: true };
        let vals: Vec<f64> = ks.iter().map(|&k| value_of(ClosedFormCase::new("p", fam.clone(), 1.0, eps), k)).collect();
        for w in 0..ks.len() - 1 {
            let s = (vals[w + 1] - vals[w]) / (ks[w + 1] - ks[w]) as f64;
            need(s >= 2.0 * r - 1e-9, || format!("closed hole eps={eps}: slope {s} < 2r"))?;
        }
    }
    for &k in &ks {
        for eps in [0.1, 0.5, 0.99] {
            let v = value_of(ClosedFormCase::new("t", CaseFamily::TwoPointDirichlet, 1.0, eps), k);
            need(v == k as f64, || format!("two-point k={k} eps={eps}: {v}"))?;
        }
    }
    Ok("slopes d - 2eps, >= 2r, and k d".into())
}

fn oracle() -> Outcome {
    let real = OracleConfig { instances: 1000, seed: 1, ..Default::default() };
    let fin = OracleConfig { instances: 500, seed: 1, max_points: 8, ..Default::default() };
    let mut msg = Vec::new();
    for (e, cfg) in [(Engine::Taut, &real), (Engine::Candidate, &real), (Engine::Finite, &fin)] {
        let s = run_oracle(e, cfg).map_err(|x| x.to_string())?;
        need(s.failed == 0, || format!("{e:?}: failing seeds {:?}", s.failing_seeds))?;
        if e == Engine::Finite {
            need(s.max_gap == 0.0, || format!("finite gap {}", s.max_gap))?;
        }
        msg.push(format!("{e:?} {}/{}", s.passed, cfg.instances));
    }
    Ok(msg.join(", "))
}

fn invariants() -> Outcome {
    let mut names = Vec::new();
    for (name, check) in common::invariants() {
        let bad = common::sweep(500, check);
        need(bad.is_empty(), || format!("{name}: {} failures, first {:?}", bad.len(), bad.first()))?;
        names.push(name);
    }
    Ok(format!("500 instances each: {}", names.join(", ")))
}

fn dichotomy() -> Outcome {
    let (r, k) = (0.1, 16);
    let eps = 0.5 + r;
    let f = |closed| canonical_function(&ClosedFormCase::new("m", CaseFamily::PuncturedDirichlet { r, closed_removed: closed }, 1.0, eps), 0, k).unwrap();
    let open = approx_variation(&f(false), eps).unwrap();
    let w = open.witness.clone().ok_or("no witness")?;
    need(open.value == 0.0 && open.attained, || format!("open hole: {} attained {}", open.value, open.attained))?;
    need(w.values.windows(2).all(|p| p[0] == p[1]), || "open-hole witness is not constant".into())?;
    let closed = approx_variation(&f(true), eps).unwrap();
    need(closed.value >= 2.0 * r * (k as f64 - 1.0) - 1e-12 && !closed.attained, || {
        format!("closed hole: {} attained {}", closed.value, closed.attained)
    })?;
    Ok(format!("open 0 (constant witness), closed {} unattained", closed.value))
}

fn selection() -> Outcome {
    let ladder = EpsilonLadder::new(0.25, 0.5, 4).unwrap();
    for (name, fam) in [
        ("shrinking pattern", families::shrinking_pattern(4, 32).unwrap()),
        ("constant", families::constant_family(&[0.0, 0.5, 0.25, 1.0], 32).unwrap()),
    ] {
        let rep = sp_extract(&fam, &ladder, 1e-6).map_err(|e| format!("{name}: {e}"))?;
        need(rep.verdict == Verdict::HoldsAtScale && rep.max_residual() <= 1e-6 && rep.indices.len() >= 2, || {
            format!("{name}: {} residual {}", rep.verdict.name(), rep.max_residual())
        })?;
    }
    let sin = families::sin_family(8).unwrap().members().unwrap();
    let pairs = pairwise_cauchy_pairs(&sin, 0.5);
    need(pairs.is_empty(), || format!("sin pairs within 0.5: {pairs:?}"))?;
    let p = CheckParams::default();
    let v = |fam, c| check_condition(&fam, c, &p).unwrap();
    need(v(families::reciprocal_dirichlet(4, 16).unwrap(), Condition::Vep).verdict == Verdict::HoldsAtScale, || "1/j pattern".into())?;
    need(v(families::sin_family(8).unwrap(), Condition::Vep).verdict == Verdict::FailsAtScale, || "sin".into())?;
    let tc = families::two_cluster(8, 32).unwrap();
    let pair = v(tc.clone(), Condition::Pairwise);
    let single = v(tc, Condition::Vep);
    need(pair.verdict == Verdict::HoldsAtScale, || format!("two-cluster pairwise {}", pair.verdict.name()))?;
    for (a, b) in single.rows.iter().zip(&pair.rows) {
        need(a.tail_sup > 10.0 * b.tail_sup, || format!("eps {:?}: {} vs {}", a.param, a.tail_sup, b.tail_sup))?;
    }
    Ok("extraction, sin certificate and condition verdicts".into())
}

fn ramsey() -> Outcome {
    let n = 64usize;
    let idx: Vec<usize> = (0..n).collect();
    let mut smallest = usize::MAX;
    for seed in 0..200u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let col: Vec<Vec<u8>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(0..2)).collect()).collect();
        let c = |a: usize, b: usize| col[a.min(b)][a.max(b)];
        let out = ramsey_monochromatic_subset(&idx, c, 2).map_err(|e| e.to_string())?;
        let s = &out.subset;
        let mono = s.iter().enumerate().all(|(i, &a)| s[i + 1..].iter().all(|&b| c(a, b) == out.color));
        need(mono, || format!("seed {seed}: not monochromatic"))?;
        smallest = smallest.min(s.len());
    }
    need(smallest >= 6, || format!("smallest subset {smallest} < log2 64"))?;
    // at eps = 0.05 the pairwise values are spread over a nontrivial range
    let fam = families::two_cluster(8, 64).unwrap();
    let eps = 0.05;
    let rep = irregular_extract(&fam, &EpsilonLadder::new(eps, 0.5, 1).unwrap(), 3, 1e-6).map_err(|e| e.to_string())?;
    let f = fam.members().unwrap();
    let mut c = 0.0f64;
    for j in 0..f.len() {
        for k in j + 1..f.len() {
            c = c.max(approx_variation(&pointwise_difference(&f[j], &f[k]).unwrap(), eps).unwrap().value);
        }
    }
    need(c > 0.0, || "trivial pairwise range".into())?;
    for lv in rep.irregular_levels.iter().filter(|l| l.depth == 3) {
        need(lv.hi - lv.lo <= c / 8.0 + 1e-12, || format!("interval width {} > C/8 = {}", lv.hi - lv.lo, c / 8.0))?;
    }
    need(rep.interval_check == Some(true), || "pair values outside their intervals".into())?;
    need(rep.max_residual() <= 1e-6, || format!("residual {}", rep.max_residual()))?;
    Ok(format!("min subset {smallest}; irregular kept {} of 64, C = {c}", rep.indices.len()))
}

fn strict_variant_jump() -> Outcome {
    for (d, k) in [(1.0, 4usize), (2.0, 7), (0.5, 16)] {
        let f = canonical_function(&ClosedFormCase::new("t", CaseFamily::TwoPointDirichlet, d, d), 0, k).unwrap();
        let v = approx_variation(&f, d).unwrap().value;
        let s = strict_variant(&f, d).unwrap();
        need(v == 0.0 && close(s, k as f64 * d, 1e-12), || format!("d={d} k={k}: V={v} strict={s}"))?;
    }
    for seed in 0..100u64 {
        let (f, e) = common::real_instance(seed);
        let e1 = e * 1.5;
        let chain = [
            strict_variant(&f, e1).unwrap(),
            right_limit(&f, e).unwrap().value,
            approx_variation(&f, e).unwrap().value,
            left_limit(&f, e).unwrap().value,
            strict_variant(&f, e).unwrap(),
        ];
        need(chain.windows(2).all(|w| w[0] <= w[1] + 1e-9), || format!("seed {seed}: chain {chain:?}"))?;
    }
    Ok("jump at eps = d; chain on 100 instances".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Duration); 9] = [
        ("closed-form reproduction", closed_forms, Duration::from_secs(5)),
        ("bound reproduction", sin_bounds, Duration::from_secs(5)),
        ("divergence rates", divergence_rates, Duration::from_secs(60)),
        ("oracle certification", oracle, Duration::from_secs(60)),
        ("invariant suite", invariants, Duration::from_secs(120)),
        ("proper/improper dichotomy", dichotomy, Duration::from_secs(5)),
        ("selection behavior", selection, Duration::from_secs(30)),
        ("ramsey machinery", ramsey, Duration::from_secs(60)),
        ("strict-variant discontinuity", strict_variant_jump, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let out = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let dt = t.elapsed();
        let out = match out {
            Ok(m) if dt > *budget => Err(format!("{m}; took {dt:?}, budget {budget:?}")),
            o => o,
        };
        match out {
            Ok(m) => println!("criterion {} {name}: PASS ({:.2}s) {m}", i + 1, dt.as_secs_f64()),
            Err(m) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({:.2}s) {m}", i + 1, dt.as_secs_f64());
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
