use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use super::ramsey::ramsey_monochromatic_subset;
use super::{limit_candidate, required_family_size, residuals, thin_values, EpsilonLadder, Mode, SelectionReport, Verdict};
use crate::approxvar::epsilon_variation_function;
use crate::error::{Error, Result};
use crate::sampled::{pointwise_difference, FunctionFamily};

/// One bisection step at `(eps, t_index)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IrregularLevel {
    pub eps: f64,
    pub t_index: usize,
    pub depth: usize,
    pub lo: f64,
    pub hi: f64,
    /// Subsequence size after this step.
    pub size: usize,
}

/// Pairwise extraction: for each eps and grid point, bisect `[0, C_eps]` `depth` times,
/// coloring pairs by which half their prefix eps-variation of `f_j - f_k` falls in.
pub fn irregular_extract(family: &FunctionFamily, ladder: &EpsilonLadder, depth: usize, tol: f64) -> Result<SelectionReport> {
    let f = family.members()?;
    if f.len() < 2 {
        return Err(Error::Domain("need at least two members".into()));
    }
    if depth == 0 {
        return Err(Error::Domain("bisection depth must be positive".into()));
    }
    let n = f.len();
    let m = f[0].len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let diffs = pairs
        .par_iter()
        .map(|&(a, b)| pointwise_difference(&f[a], &f[b]))
        .collect::<Result<Vec<_>>>()?;
    let eps = ladder.all();
    let mut kept: Vec<usize> = (0..n).collect();
    let mut levels = Vec::new();
    let mut finals: Vec<Vec<(f64, f64)>> = Vec::new();
    let mut prof_all = Vec::new();
    for &e in &eps {
        let prof: HashMap<(usize, usize), Vec<f64>> = pairs
            .par_iter()
            .zip(&diffs)
            .map(|(&p, d)| epsilon_variation_function(d, e).map(|v| (p, v.into_iter().map(|x| x.1).collect())))
            .collect::<Result<_>>()?;
        let c = prof.values().map(|v| v.last().copied().unwrap_or(0.0)).fold(0.0, f64::max);
        let mut ints = Vec::with_capacity(m);
        for i in 0..m {
            let (mut lo, mut hi) = (0.0, c);
            for p in 0..depth {
                let mid = 0.5 * (lo + hi);
                let out = ramsey_monochromatic_subset(&kept, |a, b| u8::from(prof[&(a, b)][i] > mid), 2).map_err(|_| {
                    let bits = (depth * m * eps.len()) as f64;
                    Error::capacity(
                        format!("bisection at eps {e}, grid point {i}, depth {} left fewer than two members; worst case needs about 2^{bits} members", p + 1),
                        if bits < 63.0 { Some(1usize << bits as u32) } else { None },
                    )
                })?;
                kept = out.subset;
                if out.color == 0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
                levels.push(IrregularLevel { eps: e, t_index: i, depth: p + 1, lo, hi, size: kept.len() });
            }
            ints.push((lo, hi));
        }
        finals.push(ints);
        prof_all.push(prof);
    }
    let th = thin_values(&f, kept, tol);
    if !th.unsettled.is_empty() {
        let need = required_family_size(th.shrink, n);
        return Err(Error::capacity(format!("{} grid point(s) could not keep two members within {tol}", th.unsettled.len()), Some(need)));
    }
    let kept = th.kept;
    let mut check = true;
    for (k, prof) in prof_all.iter().enumerate() {
        for (x, &a) in kept.iter().enumerate() {
            for &b in &kept[x + 1..] {
                for (i, &(lo, hi)) in finals[k].iter().enumerate() {
                    let v = prof[&(a, b)][i];
                    check &= v >= lo - 1e-12 && v <= hi + 1e-12;
                }
            }
        }
    }
    let indices = family.indices();
    let mut rep = SelectionReport::empty(Mode::Irregular, n, tol);
    rep.residuals = residuals(&f, &kept);
    rep.limit = limit_candidate(&f, &kept, &[], tol);
    rep.indices = kept.iter().map(|&p| indices[p]).collect();
    rep.irregular_levels = levels;
    rep.phi_eps = finals.iter().map(|v| v.iter().map(|(lo, hi)| 0.5 * (lo + hi)).collect()).collect();
    rep.interval_check = Some(check);
    rep.verdict = if check { Verdict::HoldsAtScale } else { Verdict::Inconclusive };
    Ok(rep)
}
