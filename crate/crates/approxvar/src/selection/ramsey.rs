use serde::Serialize;

use crate::error::{Error, Result};

/// Node budget of the exact search per color.
const NODE_BUDGET: usize = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RamseyOutcome {
    /// Monochromatic subset, increasing.
    pub subset: Vec<usize>,
    pub color: u8,
    /// Size reached by the greedy pivot construction alone.
    pub greedy_size: usize,
    /// Whether the exact search finished within its budget.
    pub exhaustive: bool,
}

struct Bits(Vec<u64>);

impl Bits {
    fn empty(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn has(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }
    fn and(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & b).collect())
    }
    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
    fn ones(&self) -> Vec<usize> {
        let mut v = Vec::new();
        for (w, &word) in self.0.iter().enumerate() {
            let mut x = word;
            while x != 0 {
                let b = x.trailing_zeros() as usize;
                v.push(w * 64 + b);
                x &= x - 1;
            }
        }
        v
    }
    fn clear(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }
}

/// Greedy pivoting: smallest remaining index as pivot, keep its majority color class
/// (ties to color 0); the pivots of the most frequent color form a monochromatic set.
fn greedy(n: usize, col: &[Vec<u8>]) -> (Vec<usize>, u8) {
    let mut rest: Vec<usize> = (0..n).collect();
    let mut pivots: Vec<(usize, u8)> = Vec::new();
    while let Some((&p, others)) = rest.split_first() {
        let ones = others.iter().filter(|&&q| col[p][q] == 1).count();
        let c = if ones > others.len() - ones { 1 } else { 0 };
        pivots.push((p, c));
        rest = others.iter().copied().filter(|&q| col[p][q] == c).collect();
    }
    // the last pivot has no constraint on its own color
    let count = |c: u8| pivots.iter().enumerate().filter(|(i, (_, pc))| *pc == c || *i + 1 == pivots.len()).count();
    let c = if count(1) > count(0) { 1 } else { 0 };
    let set = pivots.iter().enumerate().filter(|(i, (_, pc))| *pc == c || *i + 1 == pivots.len()).map(|(_, (p, _))| *p).collect();
    (set, c)
}

/// Maximum clique by branch and bound with a greedy-coloring bound.
fn max_clique(adj: &[Bits], n: usize, best: &mut Vec<usize>, budget: &mut usize) -> bool {
    fn expand(adj: &[Bits], cur: &mut Vec<usize>, cand: Bits, best: &mut Vec<usize>, budget: &mut usize) -> bool {
        if *budget == 0 {
            return false;
        }
        *budget -= 1;
        // greedy coloring of the candidates gives an upper bound per vertex
        let mut order: Vec<(usize, usize)> = Vec::new();
        let mut uncolored = Bits(cand.0.clone());
        let mut color = 0;
        while uncolored.count() > 0 {
            color += 1;
            let mut q = Bits(uncolored.0.clone());
            while let Some(&v) = q.ones().first() {
                order.push((v, color));
                uncolored.clear(v);
                q.clear(v);
                for u in q.ones() {
                    if adj[v].has(u) {
                        q.clear(u);
                    }
                }
            }
        }
        let mut cand = cand;
        let mut complete = true;
        for &(v, c) in order.iter().rev() {
            if cur.len() + c <= best.len() {
                return complete;
            }
            cur.push(v);
            let next = cand.and(&adj[v]);
            if next.count() == 0 {
                if cur.len() > best.len() {
                    *best = cur.clone();
                }
            } else if !expand(adj, cur, next, best, budget) {
                complete = false;
            }
            cur.pop();
            cand.clear(v);
            if *budget == 0 {
                return false;
            }
        }
        complete
    }
    let mut all = Bits::empty(n);
    for i in 0..n {
        all.set(i);
    }
    let mut cur = Vec::new();
    expand(adj, &mut cur, all, best, budget)
}

/// A subset of `indices` on which `color` is constant over all pairs.
///
/// `color(a, b)` is called with `a < b` (as values from `indices`) and must return 0 or 1.
pub fn ramsey_monochromatic_subset(indices: &[usize], color: impl Fn(usize, usize) -> u8, min_size: usize) -> Result<RamseyOutcome> {
    let n = indices.len();
    if n < 2 {
        return Err(Error::Precondition("need at least two indices".into()));
    }
    let mut col = vec![vec![0u8; n]; n];
    for a in 0..n {
        for b in a + 1..n {
            let (x, y) = if indices[a] < indices[b] { (indices[a], indices[b]) } else { (indices[b], indices[a]) };
            let c = color(x, y);
            if c > 1 {
                return Err(Error::Precondition(format!("color {c} is not 0 or 1")));
            }
            col[a][b] = c;
            col[b][a] = c;
        }
    }
    let (g, gc) = greedy(n, &col);
    let greedy_size = g.len();
    let mut best: (Vec<usize>, u8) = (g, gc);
    let mut exhaustive = true;
    for c in [0u8, 1] {
        let adj: Vec<Bits> = (0..n)
            .map(|a| {
                let mut b = Bits::empty(n);
                for x in 0..n {
                    if x != a && col[a][x] == c {
                        b.set(x);
                    }
                }
                b
            })
            .collect();
        let mut found = if best.1 == c { best.0.clone() } else { Vec::new() };
        let mut budget = NODE_BUDGET;
        exhaustive &= max_clique(&adj, n, &mut found, &mut budget);
        if found.len() > best.0.len() || (found.len() == best.0.len() && c == 0 && best.1 != 0) {
            best = (found, c);
        }
    }
    let (mut set, c) = best;
    set.sort_unstable();
    for (i, &a) in set.iter().enumerate() {
        for &b in &set[i + 1..] {
            if col[a][b] != c {
                return Err(Error::Precondition("internal: subset is not monochromatic".into()));
            }
        }
    }
    let mut subset: Vec<usize> = set.iter().map(|&p| indices[p]).collect();
    subset.sort_unstable();
    if subset.len() < min_size {
        return Err(Error::capacity(format!("monochromatic subset of size {} < required {min_size}", subset.len()), Some(subset.len())));
    }
    Ok(RamseyOutcome { subset, color: c, greedy_size, exhaustive })
}
