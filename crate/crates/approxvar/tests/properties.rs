mod common;

use approxvar::selection::{check_condition, CheckParams, Condition, Verdict};
use approxvar::spaces::FiniteMetric;
use approxvar::{approx_variation, FunctionFamily, GridDomain, MetricSpace, Point, SampledFunction};
use proptest::prelude::*;

fn real_fn() -> impl Strategy<Value = SampledFunction> {
    prop::collection::vec(-1.0f64..1.0, 2..10).prop_map(|v| SampledFunction::real_seq(&v).unwrap())
}

fn finite_fn() -> impl Strategy<Value = SampledFunction> {
    (2usize..5, prop::collection::vec(0usize..5, 2..8), prop::collection::vec(0usize..3, 10)).prop_map(|(n, labels, ds)| {
        let mut dist = vec![vec![0.0; n]; n];
        let mut c = 0;
        for a in 0..n {
            for b in a + 1..n {
                dist[a][b] = [1.0, 1.5, 2.0][ds[c % ds.len()]];
                dist[b][a] = dist[a][b];
                c += 1;
            }
        }
        let vals: Vec<Point> = labels.iter().map(|l| Point::Label(l % n)).collect();
        let space = MetricSpace::Finite(FiniteMetric::new((0..n).map(|i| i.to_string()).collect(), dist));
        SampledFunction::new(GridDomain::uniform(vals.len() - 1), space, vals).unwrap()
    })
}

fn any_fn() -> impl Strategy<Value = SampledFunction> {
    prop_oneof![real_fn(), finite_fn()]
}

fn ok(c: common::Check) -> Result<(), TestCaseError> {
    c.map_err(TestCaseError::fail)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn eps_monotone(f in any_fn(), a in 0.001f64..2.0, b in 0.001f64..2.0) {
        ok(common::eps_monotone(&f, a, b))?;
    }

    #[test]
    fn domain_monotone(f in any_fn(), e in 0.001f64..1.0, mask in any::<u64>()) {
        ok(common::domain_monotone(&f, e, mask))?;
    }

    #[test]
    fn zero_rules(f in any_fn(), e in 0.001f64..1.0) {
        ok(common::zero_rules(&f, e))?;
    }

    #[test]
    fn sandwich(f in any_fn(), e in 0.001f64..1.5) {
        ok(common::sandwich(&f, e))?;
    }

    #[test]
    fn semi_additive(f in any_fn(), e in 0.001f64..1.0) {
        ok(common::semi_additive(&f, e))?;
    }

    #[test]
    fn change_of_variable(f in any_fn(), e in 0.001f64..1.0, seed in any::<u64>()) {
        ok(common::change_of_variable(&f, e, seed))?;
    }

    #[test]
    fn witness_valid(f in any_fn(), e in 0.001f64..1.0) {
        ok(common::witness_valid(&f, e))?;
    }

    #[test]
    fn nu_rules(f in any_fn()) {
        ok(common::nu_rules(&f))?;
    }

    #[test]
    fn additivity(f in any_fn()) {
        ok(common::additivity(&f))?;
    }

    /// `sup |f_j - f| <= d_j` gives `V_eps(f_j) <= V_{eps - d_j}(f)`, so a uniformly
    /// convergent family never fails the eps-variation condition.
    #[test]
    fn uniform_limits_keep_eps_variation_bounded(base in prop::collection::vec(-1.0f64..1.0, 3..8), noise in prop::collection::vec(-1.0f64..1.0, 8)) {
        let m = base.len();
        let members: Vec<SampledFunction> = (1..=16)
            .map(|j| {
                let d = 0.1 / j as f64;
                let v: Vec<f64> = base.iter().enumerate().map(|(i, x)| x + d * noise[i % noise.len()]).collect();
                SampledFunction::real_seq(&v).unwrap()
            })
            .collect();
        let f = SampledFunction::real_seq(&base).unwrap();
        for (j, g) in members.iter().enumerate() {
            let d = 0.1 / (j + 1) as f64;
            for e in [0.15, 0.3] {
                let lhs = approx_variation(g, e).unwrap().value;
                let rhs = approx_variation(&f, e - d).unwrap().value;
                prop_assert!(lhs <= rhs + 1e-9, "m={m} j={} eps={e}: {lhs} > {rhs}", j + 1);
            }
        }
        let fam = FunctionFamily::explicit(members).unwrap();
        let r = check_condition(&fam, Condition::Vep, &CheckParams::default()).unwrap();
        prop_assert_ne!(r.verdict, Verdict::FailsAtScale);
    }
}

#[test]
fn seeded_invariant_sweep() {
    for (name, check) in common::invariants() {
        let bad = common::sweep(100, check);
        assert!(bad.is_empty(), "{name}: {bad:?}");
    }
}
