use rayon::prelude::*;
use serde::Serialize;

use super::helly::pairwise_cauchy_pairs;
use super::{limit_candidate, required_family_size, residuals, thin_series, thin_values, BoundCheck, EpsilonLadder, Mode, SelectionReport, Verdict};
use crate::approxvar::{approx_variation, epsilon_variation_function, Method};
use crate::error::{Error, Result};
use crate::sampled::{FunctionFamily, SampledFunction};

/// Representative prefix profile `t -> V_eps(f, T cap (-inf, t])` on the subsequence.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpProfile {
    pub eps: f64,
    /// Cauchy tolerance used at this level.
    pub tol: f64,
    pub phi: Vec<f64>,
    /// Tail sup of `V_eps(f_j)` over the subsequence.
    pub tail_sup: f64,
    pub nondecreasing: bool,
}

struct Core {
    kept: Vec<usize>,
    unsettled_profiles: usize,
    unsettled_values: Vec<usize>,
    shrink: f64,
    profiles: Vec<SpProfile>,
}

fn level_tols(ladder: &EpsilonLadder, tol: f64) -> Vec<f64> {
    (0..ladder.depth).map(|k| tol.max(tol * 2f64.powi((ladder.depth - 1 - k) as i32))).collect()
}

fn tail_sup(vals: &[f64]) -> f64 {
    vals[vals.len() / 2..].iter().copied().fold(0.0, f64::max)
}

fn core(f: &[SampledFunction], start: Vec<usize>, ladder: &EpsilonLadder, tol: f64) -> Result<Core> {
    if f.is_empty() {
        return Err(Error::Domain("empty family".into()));
    }
    if approx_variation(&f[0], ladder.eps1)?.method == Method::BoundsOnly {
        return Err(Error::Unsupported("diagonal extraction needs exact eps-variations".into()));
    }
    let eps = ladder.all();
    let tols = level_tols(ladder, tol);
    // prof[k][j][i]
    let prof: Vec<Vec<Vec<f64>>> = eps
        .iter()
        .map(|&e| {
            f.par_iter()
                .map(|g| epsilon_variation_function(g, e).map(|v| v.into_iter().map(|x| x.1).collect()))
                .collect::<Result<Vec<Vec<f64>>>>()
        })
        .collect::<Result<_>>()?;
    let mut kept = start;
    let mut shrink = 1.0;
    let mut unsettled_profiles = 0;
    for k in 0..eps.len() {
        let th = thin_series(&prof[k], kept, tols[k]);
        kept = th.kept;
        shrink *= th.shrink;
        unsettled_profiles += th.unsettled.len();
    }
    let th = thin_values(f, kept, tol);
    shrink *= th.shrink;
    let kept = th.kept;
    let profiles = (0..eps.len())
        .map(|k| {
            let phi = kept.last().map(|&j| prof[k][j].clone()).unwrap_or_default();
            let finals: Vec<f64> = kept.iter().map(|&j| prof[k][j].last().copied().unwrap_or(0.0)).collect();
            SpProfile {
                eps: eps[k],
                tol: tols[k],
                nondecreasing: phi.windows(2).all(|w| w[1] >= w[0] - 1e-12),
                tail_sup: tail_sup(&finals),
                phi,
            }
        })
        .collect();
    Ok(Core { kept, unsettled_profiles, unsettled_values: th.unsettled, shrink, profiles })
}

fn report_from(f: &[SampledFunction], indices: &[usize], c: Core, mode: Mode, tol: f64) -> Result<SelectionReport> {
    let mut rep = SelectionReport::empty(mode, f.len(), tol);
    if c.unsettled_profiles > 0 || !c.unsettled_values.is_empty() {
        let pairs = pairwise_cauchy_pairs(f, tol);
        if pairs.is_empty() {
            rep.verdict = Verdict::FailsAtScale;
            rep.unsettled = c.unsettled_values.clone();
            rep.residuals = residuals(f, &c.kept);
            rep.indices = c.kept.iter().map(|&p| indices[p]).collect();
            rep.sp_profiles = c.profiles;
            rep.notes.push(format!("no two members agree within {tol} at every grid point"));
            return Ok(rep);
        }
        let need = required_family_size(c.shrink, f.len());
        return Err(Error::capacity(
            format!(
                "{} profile point(s) and {} value point(s) could not keep two members; {} pointwise-Cauchy pair(s) exist, a family of about {need} members may suffice",
                c.unsettled_profiles,
                c.unsettled_values.len(),
                pairs.len()
            ),
            Some(need),
        ));
    }
    rep.residuals = residuals(f, &c.kept);
    rep.limit = limit_candidate(f, &c.kept, &[], tol);
    let sub: Vec<&SampledFunction> = c.kept.iter().map(|&j| &f[j]).collect();
    let mut all_ok = true;
    for p in &c.profiles {
        let vals = sub.iter().map(|g| approx_variation(g, p.eps).map(|r| r.value)).collect::<Result<Vec<_>>>()?;
        let ts = tail_sup(&vals);
        let lv = approx_variation(rep.limit.as_ref().unwrap_or(sub[0]), p.eps)?.value;
        let ok = lv <= ts + tol && p.nondecreasing && p.phi.last().map(|v| *v <= p.tail_sup + p.tol).unwrap_or(true);
        all_ok &= ok;
        rep.bounds.push(BoundCheck { eps: Some(p.eps), limit_value: lv, tail_sup: ts, ok });
    }
    rep.indices = c.kept.iter().map(|&p| indices[p]).collect();
    rep.sp_profiles = c.profiles;
    rep.verdict = if all_ok { Verdict::HoldsAtScale } else { Verdict::Inconclusive };
    Ok(rep)
}

/// Diagonal extraction over an eps ladder: prefix profiles first (tolerance halving
/// per level down to `tol`), then values.
pub fn sp_extract(family: &FunctionFamily, ladder: &EpsilonLadder, tol: f64) -> Result<SelectionReport> {
    let f = family.members()?;
    let c = core(&f, (0..f.len()).collect(), ladder, tol)?;
    report_from(&f, &family.indices(), c, Mode::Sp, tol)
}

/// `sp_extract` on each window `[a, b]` in turn, carrying the subsequence forward.
pub fn sp_extract_local(family: &FunctionFamily, windows: &[(f64, f64)], ladder: &EpsilonLadder, tol: f64) -> Result<SelectionReport> {
    let f = family.members()?;
    if f.is_empty() {
        return Err(Error::Domain("empty family".into()));
    }
    if windows.is_empty() {
        return Err(Error::Domain("no windows".into()));
    }
    let indices = family.indices();
    let mut kept: Vec<usize> = (0..f.len()).collect();
    let mut covered: Vec<usize> = Vec::new();
    let mut notes = Vec::new();
    let mut last = None;
    for &(a, b) in windows {
        let pts: Vec<usize> = (0..f[0].len()).filter(|&i| f[0].t(i) >= a - 1e-12 && f[0].t(i) <= b + 1e-12).collect();
        if pts.is_empty() || a > b {
            return Err(Error::Domain(format!("window [{a}, {b}] contains no grid point")));
        }
        let sub: Vec<SampledFunction> = f.iter().map(|g| g.select(&pts)).collect();
        let c = core(&sub, kept.clone(), ladder, tol)?;
        let rep = report_from(&sub, &indices, c, Mode::SpLocal, tol)?;
        notes.push(format!("window [{a}, {b}]: {} ({} members)", rep.verdict.name(), rep.indices.len()));
        if rep.verdict == Verdict::FailsAtScale {
            let mut rep = rep;
            rep.notes.extend(notes);
            return Ok(rep);
        }
        kept = rep.indices.iter().map(|j| indices.iter().position(|x| x == j).unwrap_or(0)).collect();
        covered.extend(pts);
        last = Some(rep);
    }
    covered.sort_unstable();
    covered.dedup();
    let sub: Vec<SampledFunction> = f.iter().map(|g| g.select(&covered)).collect();
    let mut rep = last.ok_or_else(|| Error::Domain("no windows".into()))?;
    rep.family_size = f.len();
    rep.residuals = residuals(&sub, &kept);
    rep.limit = limit_candidate(&sub, &kept, &[], tol);
    rep.notes.extend(notes);
    rep.notes.push(format!("limit is reported on the {} grid point(s) covered by the windows", covered.len()));
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::selection::families;

    fn ladder() -> EpsilonLadder {
        EpsilonLadder::new(0.25, 0.5, 4).unwrap()
    }

    #[test]
    fn shrinking_pattern_converges_to_zero() {
        let r = sp_extract(&families::shrinking_pattern(4, 32).unwrap(), &ladder(), 1e-6).unwrap();
        assert_eq!(r.verdict, Verdict::HoldsAtScale);
        assert!(r.max_residual() <= 1e-6);
        assert!(r.limit.unwrap().real_values().unwrap().iter().all(|v| v.abs() <= 1e-6));
        assert!(r.sp_profiles.iter().all(|p| p.nondecreasing));
        assert!(r.bounds.iter().all(|b| b.ok));
    }

    #[test]
    fn constant_family() {
        let r = sp_extract(&families::constant_family(&[0.0, 1.0, 0.5], 5).unwrap(), &ladder(), 1e-6).unwrap();
        assert_eq!(r.indices, vec![1, 2, 3, 4, 5]);
        assert_eq!(r.max_residual(), 0.0);
    }

    #[test]
    fn sin_fails() {
        let r = sp_extract(&families::sin_family(8).unwrap(), &ladder(), 0.5).unwrap();
        assert_eq!(r.verdict, Verdict::FailsAtScale);
    }

    #[test]
    fn local_windows() {
        let fam = families::end_blowup(24).unwrap();
        assert_eq!(sp_extract(&fam, &ladder(), 0.1).unwrap().verdict, Verdict::FailsAtScale);
        let r = sp_extract_local(&fam, &[(0.0, 0.5), (0.0, 0.9)], &ladder(), 0.1).unwrap();
        assert_eq!(r.verdict, Verdict::HoldsAtScale);
        assert_eq!(r.residuals.len(), 10);
        assert!(sp_extract_local(&fam, &[(0.91, 0.95)], &ladder(), 0.1).is_err());
        let whole = sp_extract_local(&families::constant_family(&[0.0, 1.0], 4).unwrap(), &[(0.0, 1.0)], &ladder(), 1e-6).unwrap();
        let plain = sp_extract(&families::constant_family(&[0.0, 1.0], 4).unwrap(), &ladder(), 1e-6).unwrap();
        assert_eq!(whole.indices, plain.indices);
    }
}
