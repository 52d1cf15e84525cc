//! Layered shortest-path DP for finite metric spaces: layer `i` holds the labels
//! within `eps` of `f(t_i)`.

use crate::spaces::{ball_members, FiniteMetric};

pub struct LayeredResult {
    pub value: f64,
    pub path: Vec<usize>,
    /// Minimal cost over each prefix.
    pub prefix: Vec<f64>,
}

fn better(c: f64, best: f64, tol: f64) -> bool {
    c < best - tol
}

pub fn layered_dp(fm: &FiniteMetric, f: &[usize], eps: f64, tol: f64) -> LayeredResult {
    let n = f.len();
    if n == 0 {
        return LayeredResult { value: 0.0, path: vec![], prefix: vec![] };
    }
    let layers: Vec<Vec<usize>> = f.iter().map(|&c| ball_members(fm, c, eps, tol)).collect();
    let mut cost: Vec<Vec<f64>> = vec![vec![0.0; layers[0].len()]];
    let mut back: Vec<Vec<usize>> = vec![vec![0; layers[0].len()]];
    let mut prefix = vec![0.0];
    for i in 1..n {
        let prev = &layers[i - 1];
        let mut ci = Vec::with_capacity(layers[i].len());
        let mut bi = Vec::with_capacity(layers[i].len());
        for &s in &layers[i] {
            let mut best = f64::INFINITY;
            let mut arg = 0;
            for (k, &r) in prev.iter().enumerate() {
                let c = cost[i - 1][k] + fm.dist[r][s];
                let tie = !better(c, best, tol) && !better(best, c, tol);
                let closer = fm.dist[r][f[i - 1]] < fm.dist[prev[arg]][f[i - 1]];
                if better(c, best, tol) || (tie && closer) {
                    best = c;
                    arg = k;
                }
            }
            ci.push(best);
            bi.push(arg);
        }
        prefix.push(ci.iter().cloned().fold(f64::INFINITY, f64::min));
        cost.push(ci);
        back.push(bi);
    }
    let last = &layers[n - 1];
    let mut arg = 0;
    for k in 1..last.len() {
        let (c, b) = (cost[n - 1][k], cost[n - 1][arg]);
        let tie = !better(c, b, tol) && !better(b, c, tol);
        if better(c, b, tol) || (tie && fm.dist[last[k]][f[n - 1]] < fm.dist[last[arg]][f[n - 1]]) {
            arg = k;
        }
    }
    let value = cost[n - 1][arg];
    let mut path = vec![0; n];
    let mut k = arg;
    for i in (0..n).rev() {
        path[i] = layers[i][k];
        k = back[i][k];
    }
    LayeredResult { value, path, prefix }
}
