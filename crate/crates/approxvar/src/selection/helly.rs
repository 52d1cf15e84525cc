use super::{limit_candidate, required_family_size, residuals, thin_values, BoundCheck, Mode, SelectionReport, Verdict};
use crate::error::{Error, Result};
use crate::sampled::{FunctionFamily, SampledFunction};
use crate::variations::jordan_variation;

fn is_monotone(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] >= w[0]) || v.windows(2).all(|w| w[1] <= w[0])
}

fn finish(mode: Mode, f: &[SampledFunction], indices: &[usize], tol: f64) -> SelectionReport {
    let th = thin_values(f, (0..f.len()).collect(), tol);
    let mut rep = SelectionReport::empty(mode, f.len(), tol);
    rep.residuals = residuals(f, &th.kept);
    rep.limit = limit_candidate(f, &th.kept, &th.unsettled, tol);
    rep.indices = th.kept.iter().map(|&p| indices[p]).collect();
    if !th.unsettled.is_empty() {
        rep.required_j = Some(required_family_size(th.shrink, f.len()));
        rep.notes.push(format!("{} grid point(s) could not be settled with two or more members", th.unsettled.len()));
    }
    rep.unsettled = th.unsettled;
    rep.verdict = if rep.unsettled.is_empty() { Verdict::HoldsAtScale } else { Verdict::Inconclusive };
    rep
}

/// Helly extraction for real monotone members.
pub fn helly_monotone(family: &FunctionFamily, tol: f64) -> Result<SelectionReport> {
    let f = family.members()?;
    if f.is_empty() {
        return Err(Error::Domain("empty family".into()));
    }
    for (j, g) in f.iter().enumerate() {
        let v = g.real_values().ok_or_else(|| Error::Precondition("monotone extraction needs real values".into()))?;
        if !is_monotone(&v) {
            return Err(Error::Precondition(format!("member {} is not monotone", family.indices()[j])));
        }
    }
    let mut rep = finish(Mode::HellyMonotone, &f, &family.indices(), tol);
    if let Some(l) = &rep.limit {
        if !is_monotone(&l.real_values().unwrap_or_default()) {
            rep.notes.push("limit candidate is not monotone".into());
            rep.verdict = Verdict::Inconclusive;
        }
    }
    Ok(rep)
}

/// Helly extraction for a family of bounded variation. `bound`, when given, is the
/// claimed uniform bound on `V(f_j)`.
pub fn helly_bv(family: &FunctionFamily, bound: Option<f64>, tol: f64) -> Result<SelectionReport> {
    let f = family.members()?;
    if f.is_empty() {
        return Err(Error::Domain("empty family".into()));
    }
    let sup_v = f.iter().map(jordan_variation).fold(0.0, f64::max);
    let mut rep = finish(Mode::HellyBv, &f, &family.indices(), tol);
    if let Some(b) = bound {
        if sup_v > b + tol {
            rep.notes.push(format!("sup V(f_j) = {sup_v} exceeds the stated bound {b}"));
            rep.verdict = Verdict::Inconclusive;
        }
    }
    if let Some(l) = &rep.limit {
        let lv = jordan_variation(l);
        let ok = lv <= sup_v + tol;
        rep.bounds.push(BoundCheck { eps: None, limit_value: lv, tail_sup: sup_v, ok });
        if !ok {
            rep.verdict = Verdict::Inconclusive;
        }
    }
    Ok(rep)
}

/// All pairs `(j, k)` (positions) whose values agree within `tol` at every grid point.
pub fn pairwise_cauchy_pairs(f: &[SampledFunction], tol: f64) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for j in 0..f.len() {
        for k in j + 1..f.len() {
            if (0..f[j].len()).all(|i| f[j].space.d(&f[j].values[i], &f[k].values[i]) <= tol) {
                out.push((j, k));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::selection::families;

    #[test]
    fn scaled_identity_tail() {
        let r = helly_monotone(&families::scaled_identity(32).unwrap(), 0.05).unwrap();
        assert_eq!(r.verdict, Verdict::HoldsAtScale);
        assert_eq!(*r.indices.last().unwrap(), 32);
        assert!(r.indices.windows(2).all(|w| w[0] < w[1]));
        let l = r.limit.unwrap().real_values().unwrap();
        assert!(l.iter().zip([0.0, 0.25, 0.5, 0.75, 1.0]).all(|(a, b)| (a - b).abs() <= 0.05));
    }

    #[test]
    fn constant_family_is_kept() {
        let r = helly_monotone(&families::constant_family(&[0.0, 0.5, 1.0], 6).unwrap(), 1e-9).unwrap();
        assert_eq!(r.indices, (1..=6).collect::<Vec<_>>());
        assert_eq!(r.max_residual(), 0.0);
    }

    #[test]
    fn picks_one_parity() {
        let r = helly_monotone(&families::alternating_monotone(10).unwrap(), 1e-9).unwrap();
        assert_eq!(r.indices, vec![2, 4, 6, 8, 10]);
        let b = helly_bv(&families::alternating_monotone(10).unwrap(), None, 1e-9).unwrap();
        assert_eq!(b.indices, vec![2, 4, 6, 8, 10]);
    }

    #[test]
    fn rejects_non_monotone() {
        assert!(matches!(helly_monotone(&families::sin_family(2).unwrap(), 0.1), Err(Error::Precondition(_))));
    }

    #[test]
    fn moving_spike_limit_is_constant() {
        let r = helly_bv(&families::moving_spike(12).unwrap(), Some(2.0), 1e-9).unwrap();
        let l = r.limit.clone().unwrap();
        assert!(l.real_values().unwrap().iter().all(|v| *v == 0.0));
        assert!(r.bounds[0].ok && r.bounds[0].limit_value == 0.0);
    }
}
