//! Euclidean values of dimension >= 2.
//!
//! Collinear data reduce exactly to the real line: projecting any admissible `g`
//! onto the line through the data keeps it admissible and does not increase its
//! variation. Otherwise only bounds are produced.

use super::taut;

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Base point, unit direction and coordinates along it, when all values lie on one line.
pub fn collinear(vals: &[Vec<f64>], tol: f64) -> Option<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    let base = vals.first()?.clone();
    let far = vals.iter().max_by(|a, b| norm(&sub(a, &base)).total_cmp(&norm(&sub(b, &base))))?;
    let span = norm(&sub(far, &base));
    let dim = base.len();
    if span <= tol {
        let mut u = vec![0.0; dim];
        if dim > 0 {
            u[0] = 1.0;
        }
        return Some((base, u, vec![0.0; vals.len()]));
    }
    let u: Vec<f64> = sub(far, &base).iter().map(|x| x / span).collect();
    let mut s = Vec::with_capacity(vals.len());
    for v in vals {
        let w = sub(v, &base);
        let c = dot(&w, &u);
        let r: Vec<f64> = w.iter().zip(&u).map(|(wi, ui)| wi - c * ui).collect();
        if norm(&r) > tol * (1.0 + span) {
            return None;
        }
        s.push(c);
    }
    Some((base, u, s))
}

pub fn euclid_variation(g: &[Vec<f64>]) -> f64 {
    g.windows(2).map(|w| norm(&sub(&w[1], &w[0]))).sum()
}

/// Upper bound with an admissible path: coordinatewise taut strings in a tube of
/// radius `eps / sqrt(dim)`, or a constant when some center is within `eps` of
/// every value.
pub fn upper_bound(vals: &[Vec<f64>], eps: f64, tol: f64) -> (f64, Vec<Vec<f64>>) {
    let n = vals.len();
    let dim = vals[0].len();
    let mut best = (euclid_variation(vals), vals.to_vec());
    for c in centers(vals) {
        if vals.iter().all(|v| norm(&sub(v, &c)) <= eps + tol) {
            return (0.0, vec![c; n]);
        }
    }
    let r = eps / (dim as f64).sqrt();
    let mut g = vec![vec![0.0; dim]; n];
    for k in 0..dim {
        let col: Vec<f64> = vals.iter().map(|v| v[k]).collect();
        let sw = taut::sweep(&col, r);
        for (i, x) in taut::witness(&col, r, &sw).into_iter().enumerate() {
            g[i][k] = x;
        }
    }
    let v = euclid_variation(&g);
    if v < best.0 {
        best = (v, g);
    }
    best
}

/// Bounding-box midpoint and an approximate minimum enclosing ball center.
fn centers(vals: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let dim = vals[0].len();
    let mid: Vec<f64> = (0..dim)
        .map(|k| {
            let lo = vals.iter().map(|v| v[k]).fold(f64::INFINITY, f64::min);
            let hi = vals.iter().map(|v| v[k]).fold(f64::NEG_INFINITY, f64::max);
            0.5 * (lo + hi)
        })
        .collect();
    let mut c = vals[0].clone();
    for it in 1..=2000 {
        let far = vals.iter().max_by(|a, b| norm(&sub(a, &c)).total_cmp(&norm(&sub(b, &c)))).unwrap();
        let step = 1.0 / (it as f64 + 1.0);
        c = c.iter().zip(far).map(|(ci, fi)| ci + step * (fi - ci)).collect();
    }
    vec![mid, c]
}
