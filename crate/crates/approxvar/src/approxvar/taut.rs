//! Taut-string sweep for real values.
//!
//! After step `i` the band `[lo, hi]` is the set of values `g_i` reachable at the
//! minimal prefix cost `C_i`, and the cost of ending at `v` inside the tube is
//! `C_i + dist(v, band)`.

pub struct Sweep {
    /// `costs[i]` is the eps-variation of the prefix `0..=i`.
    pub costs: Vec<f64>,
    pub bands: Vec<(f64, f64)>,
}

pub fn sweep(f: &[f64], eps: f64) -> Sweep {
    let mut costs = Vec::with_capacity(f.len());
    let mut bands = Vec::with_capacity(f.len());
    if f.is_empty() {
        return Sweep { costs, bands };
    }
    let (mut lo, mut hi) = (f[0] - eps, f[0] + eps);
    let mut cost = 0.0;
    costs.push(cost);
    bands.push((lo, hi));
    for &v in &f[1..] {
        let (tl, th) = (v - eps, v + eps);
        let (nl, nh) = (lo.max(tl), hi.min(th));
        if nl <= nh {
            lo = nl;
            hi = nh;
        } else if tl > hi {
            cost += tl - hi;
            lo = tl;
            hi = tl;
        } else {
            cost += lo - th;
            lo = th;
            hi = th;
        }
        costs.push(cost);
        bands.push((lo, hi));
    }
    Sweep { costs, bands }
}

fn clamp(v: f64, lo: f64, hi: f64) -> f64 {
    v.max(lo).min(hi)
}

/// Point of `[lo, hi]` closest to `target`; ties (only possible for degenerate
/// input) go to the smaller value.
fn closest(target: f64, lo: f64, hi: f64) -> f64 {
    clamp(target, lo, hi)
}

/// Backward pass producing a minimizer. Within the allowed segment each value is
/// the one closest to `f[i]`.
pub fn witness(f: &[f64], eps: f64, sw: &Sweep) -> Vec<f64> {
    let n = f.len();
    if n == 0 {
        return vec![];
    }
    let (blo, bhi) = sw.bands[n - 1];
    if sw.costs[n - 1] == 0.0 {
        return vec![0.5 * (blo + bhi); n];
    }
    let mut g = vec![0.0; n];
    g[n - 1] = closest(f[n - 1], blo, bhi);
    for i in (0..n - 1).rev() {
        let w = g[i + 1];
        let (lo, hi) = sw.bands[i];
        let p = clamp(w, lo, hi);
        let (a, b) = (p.min(w), p.max(w));
        let (a, b) = (a.max(f[i] - eps), b.min(f[i] + eps));
        g[i] = closest(f[i], a, b);
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    fn var(g: &[f64]) -> f64 {
        g.windows(2).map(|w| (w[1] - w[0]).abs()).sum()
    }

    #[test]
    fn identity_prefixes() {
        let f = [0.0, 0.25, 0.5, 0.75, 1.0];
        let sw = sweep(&f, 0.1);
        let want = [0.0, 0.05, 0.3, 0.55, 0.8];
        for (c, w) in sw.costs.iter().zip(want) {
            assert!((c - w).abs() < 1e-12);
        }
        let g = witness(&f, 0.1, &sw);
        assert!((var(&g) - 0.8).abs() < 1e-12);
        assert!(g.iter().zip(&f).all(|(a, b)| (a - b).abs() <= 0.1 + 1e-12));
    }

    #[test]
    fn interior_spike_witness() {
        let f = [1.0, 0.0, 1.0];
        let sw = sweep(&f, 0.2);
        assert!((sw.costs[2] - 1.2).abs() < 1e-12);
        let g = witness(&f, 0.2, &sw);
        for (a, b) in g.iter().zip([0.8, 0.2, 0.8]) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_gives_midpoint() {
        let f = [0.0, 1.0];
        let sw = sweep(&f, 0.5);
        assert_eq!(sw.costs[1], 0.0);
        assert_eq!(witness(&f, 0.5, &sw), vec![0.5, 0.5]);
    }
}
