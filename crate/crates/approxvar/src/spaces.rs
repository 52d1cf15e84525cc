//! Metric spaces that sampled functions take values in.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

/// Absolute tolerance for floating comparisons (membership, interval emptiness, ball radii).
pub const DEFAULT_TOL: f64 = 1e-12;

/// Removed part of the real line. `closed_removed` means `[lo, hi]` is removed,
/// otherwise only the open interval `(lo, hi)` is removed.
#[derive(Clone, Debug, PartialEq)]
pub struct Hole {
    pub lo: f64,
    pub hi: f64,
    pub closed_removed: bool,
}

/// Finite metric space given by labels and a distance matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteMetric {
    pub labels: Vec<String>,
    pub dist: Vec<Vec<f64>>,
}

impl FiniteMetric {
    pub fn new(labels: Vec<String>, dist: Vec<Vec<f64>>) -> Self {
        FiniteMetric { labels, dist }
    }

    /// Two labels `x`, `y` at distance `d`.
    pub fn two_point(d: f64) -> Self {
        FiniteMetric::new(vec!["x".into(), "y".into()], vec![vec![0.0, d], vec![d, 0.0]])
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label_index(&self, name: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == name)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum MetricSpace {
    RealLine,
    Punctured(Hole),
    Euclidean { dim: usize },
    Finite(FiniteMetric),
}

/// A value in one of the supported spaces.
#[derive(Clone, Debug, PartialEq)]
pub enum Point {
    Real(f64),
    Vector(Vec<f64>),
    Label(usize),
}

impl Point {
    pub fn as_real(&self) -> Option<f64> {
        match self {
            Point::Real(v) => Some(*v),
            Point::Vector(v) if v.len() == 1 => Some(v[0]),
            _ => None,
        }
    }

    pub fn as_label(&self) -> Option<usize> {
        match self {
            Point::Label(i) => Some(*i),
            _ => None,
        }
    }

    /// Coordinates of a scalar or vector point.
    pub fn coords(&self) -> Option<Vec<f64>> {
        match self {
            Point::Real(v) => Some(vec![*v]),
            Point::Vector(v) => Some(v.clone()),
            Point::Label(_) => None,
        }
    }
}

/// Outcome of [`MetricSpace::validate`]; never an error by itself.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub issues: Vec<String>,
    pub asymmetries: Vec<(usize, usize)>,
    pub triangle_violations: Vec<(usize, usize, usize)>,
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

impl MetricSpace {
    pub fn punctured(lo: f64, hi: f64, closed_removed: bool) -> Self {
        MetricSpace::Punctured(Hole { lo, hi, closed_removed })
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            MetricSpace::RealLine => "real",
            MetricSpace::Punctured(_) => "punctured",
            MetricSpace::Euclidean { .. } => "euclidean",
            MetricSpace::Finite(_) => "finite",
        }
    }

    /// Scalar kinds: values are plain reals.
    pub fn is_scalar(&self) -> bool {
        matches!(self, MetricSpace::RealLine | MetricSpace::Punctured(_))
            || matches!(self, MetricSpace::Euclidean { dim: 1 })
    }

    /// Kinds whose values can be subtracted.
    pub fn is_linear(&self) -> bool {
        !matches!(self, MetricSpace::Finite(_))
    }

    pub fn validate(&self) -> ValidationReport {
        let mut rep = ValidationReport::default();
        match self {
            MetricSpace::RealLine => {}
            MetricSpace::Punctured(h) => {
                if !(h.lo.is_finite() && h.hi.is_finite()) {
                    rep.issues.push("hole bounds must be finite".into());
                } else if h.lo > h.hi || (h.lo == h.hi && !h.closed_removed) {
                    rep.issues.push(format!("hole [{}, {}] must satisfy lo < hi (lo = hi only when closed)", h.lo, h.hi));
                }
            }
            MetricSpace::Euclidean { dim } => {
                if *dim == 0 {
                    rep.issues.push("euclidean dimension must be positive".into());
                }
            }
            MetricSpace::Finite(fm) => {
                let n = fm.labels.len();
                if n == 0 {
                    rep.issues.push("finite metric needs at least one label".into());
                }
                if fm.dist.len() != n || fm.dist.iter().any(|r| r.len() != n) {
                    rep.issues.push(format!("dist must be a {n}x{n} matrix"));
                    rep.valid = false;
                    return rep;
                }
                for i in 0..n {
                    if fm.dist[i][i] != 0.0 {
                        rep.issues.push(format!("nonzero diagonal at {i}"));
                    }
                    for j in 0..n {
                        let d = fm.dist[i][j];
                        if !d.is_finite() || d < 0.0 {
                            rep.issues.push(format!("bad distance at ({i},{j})"));
                        }
                        if i < j {
                            if (d - fm.dist[j][i]).abs() > DEFAULT_TOL {
                                rep.asymmetries.push((i, j));
                            }
                            if d <= 0.0 {
                                rep.issues.push(format!("zero distance between distinct labels {i},{j}"));
                            }
                        }
                    }
                }
                for a in 0..n {
                    for b in 0..n {
                        for c in 0..n {
                            if a < c && b != a && b != c && fm.dist[a][c] > fm.dist[a][b] + fm.dist[b][c] + DEFAULT_TOL {
                                rep.triangle_violations.push((a, b, c));
                            }
                        }
                    }
                }
                if !rep.asymmetries.is_empty() {
                    rep.issues.push(format!("{} asymmetric pairs", rep.asymmetries.len()));
                }
                if !rep.triangle_violations.is_empty() {
                    rep.issues.push(format!("{} triangle violations", rep.triangle_violations.len()));
                }
            }
        }
        rep.valid = rep.issues.is_empty();
        rep
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let rep = self.validate();
        if rep.valid {
            Ok(())
        } else {
            Err(Error::InvalidSpace(rep.issues.join("; ")))
        }
    }

    /// Membership test with absolute tolerance `tol`. Points within `tol` of a
    /// removed closed boundary count as removed.
    pub fn contains(&self, p: &Point, tol: f64) -> bool {
        match (self, p) {
            (MetricSpace::RealLine, Point::Real(v)) => v.is_finite(),
            (MetricSpace::Punctured(h), Point::Real(v)) => v.is_finite() && !hole_contains(h, *v, tol),
            (MetricSpace::Euclidean { dim }, Point::Vector(v)) => v.len() == *dim && v.iter().all(|x| x.is_finite()),
            (MetricSpace::Euclidean { dim: 1 }, Point::Real(v)) => v.is_finite(),
            (MetricSpace::Finite(fm), Point::Label(i)) => *i < fm.len(),
            _ => false,
        }
    }

    pub fn check_point(&self, p: &Point, tol: f64) -> Result<()> {
        let shape_ok = matches!(
            (self, p),
            (MetricSpace::RealLine | MetricSpace::Punctured(_), Point::Real(_))
                | (MetricSpace::Euclidean { .. }, Point::Vector(_) | Point::Real(_))
                | (MetricSpace::Finite(_), Point::Label(_))
        );
        if !shape_ok {
            return Err(Error::Shape(format!("point {p:?} does not fit a {} space", self.kind_name())));
        }
        if let (MetricSpace::Euclidean { dim }, Point::Vector(v)) = (self, p) {
            if v.len() != *dim {
                return Err(Error::Shape(format!("expected {} coordinates, got {}", dim, v.len())));
            }
        }
        if self.contains(p, tol) {
            Ok(())
        } else {
            Err(Error::Membership(format!("{p:?} is not a member of the {} space", self.kind_name())))
        }
    }

    /// Checked distance.
    pub fn distance(&self, u: &Point, v: &Point) -> Result<f64> {
        self.check_point(u, DEFAULT_TOL)?;
        self.check_point(v, DEFAULT_TOL)?;
        Ok(self.d(u, v))
    }

    /// Distance without membership checks; values must already fit the space.
    pub fn d(&self, u: &Point, v: &Point) -> f64 {
        match (self, u, v) {
            (MetricSpace::Finite(fm), Point::Label(a), Point::Label(b)) => fm.dist[*a][*b],
            (_, Point::Real(a), Point::Real(b)) => (a - b).abs(),
            (_, Point::Vector(a), Point::Vector(b)) => euclid(a, b),
            (_, Point::Real(a), Point::Vector(b)) | (_, Point::Vector(b), Point::Real(a)) => {
                euclid(&[*a], b)
            }
            _ => f64::NAN,
        }
    }

    /// Whether some member `c` satisfies `2 max_i d(v_i, c) = diam(values)`, which
    /// makes `eps >= diam/2` force a zero eps-variation.
    pub fn admits_midpoint(&self, values: &[Point], tol: f64) -> bool {
        if values.is_empty() {
            return true;
        }
        let diam = diameter(self, values);
        match self {
            MetricSpace::RealLine => true,
            MetricSpace::Euclidean { .. } => {
                // Normed spaces: the midpoint of a diametral pair works only when every
                // value lies in the ball of radius diam/2 around it.
                midpoint_center(self, values).map(|c| values.iter().all(|v| self.d(v, &c) <= diam / 2.0 + tol)).unwrap_or(false)
            }
            MetricSpace::Punctured(_) => {
                let lo = values.iter().filter_map(|p| p.as_real()).fold(f64::INFINITY, f64::min);
                let hi = values.iter().filter_map(|p| p.as_real()).fold(f64::NEG_INFINITY, f64::max);
                self.contains(&Point::Real(0.5 * (lo + hi)), tol)
            }
            MetricSpace::Finite(fm) => (0..fm.len()).any(|c| {
                let c = Point::Label(c);
                values.iter().all(|v| 2.0 * self.d(v, &c) <= diam + tol)
            }),
        }
    }

    pub fn point_to_json(&self, p: &Point) -> Value {
        match (self, p) {
            (MetricSpace::Finite(fm), Point::Label(i)) => Value::String(fm.labels.get(*i).cloned().unwrap_or_else(|| i.to_string())),
            (_, Point::Real(v)) => num(*v),
            (_, Point::Vector(v)) => Value::Array(v.iter().map(|x| num(*x)).collect()),
            (_, Point::Label(i)) => Value::from(*i),
        }
    }

    pub fn point_from_json(&self, v: &Value) -> Result<Point> {
        match self {
            MetricSpace::RealLine | MetricSpace::Punctured(_) => v
                .as_f64()
                .map(Point::Real)
                .ok_or_else(|| Error::Parse(format!("expected a number, got {v}"))),
            MetricSpace::Euclidean { dim } => match v {
                Value::Array(xs) => {
                    let c: Option<Vec<f64>> = xs.iter().map(|x| x.as_f64()).collect();
                    let c = c.ok_or_else(|| Error::Parse(format!("expected numeric array, got {v}")))?;
                    if c.len() != *dim {
                        return Err(Error::Shape(format!("expected {} coordinates, got {}", dim, c.len())));
                    }
                    Ok(Point::Vector(c))
                }
                Value::Number(_) if *dim == 1 => Ok(Point::Vector(vec![v.as_f64().unwrap_or(f64::NAN)])),
                _ => Err(Error::Parse(format!("expected coordinate array, got {v}"))),
            },
            MetricSpace::Finite(fm) => match v {
                Value::String(s) => fm
                    .label_index(s)
                    .map(Point::Label)
                    .ok_or_else(|| Error::Membership(format!("unknown label {s:?}"))),
                Value::Number(n) => n
                    .as_u64()
                    .map(|i| Point::Label(i as usize))
                    .ok_or_else(|| Error::Parse(format!("expected label index, got {v}"))),
                _ => Err(Error::Parse(format!("expected label, got {v}"))),
            },
        }
    }
}

fn num(v: f64) -> Value {
    serde_json::Number::from_f64(v).map(Value::Number).unwrap_or(Value::Null)
}

fn hole_contains(h: &Hole, v: f64, tol: f64) -> bool {
    if h.closed_removed {
        v >= h.lo - tol && v <= h.hi + tol
    } else {
        v > h.lo + tol && v < h.hi - tol
    }
}

/// Max pairwise distance.
pub fn diameter(space: &MetricSpace, values: &[Point]) -> f64 {
    let mut best = 0.0f64;
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            best = best.max(space.d(&values[i], &values[j]));
        }
    }
    best
}

fn midpoint_center(space: &MetricSpace, values: &[Point]) -> Option<Point> {
    let (mut bi, mut bj, mut best) = (0, 0, -1.0);
    for i in 0..values.len() {
        for j in i..values.len() {
            let d = space.d(&values[i], &values[j]);
            if d > best {
                best = d;
                bi = i;
                bj = j;
            }
        }
    }
    let a = values[bi].coords()?;
    let b = values[bj].coords()?;
    Some(Point::Vector(a.iter().zip(&b).map(|(x, y)| 0.5 * (x + y)).collect()))
}

/// Labels within `eps` (inclusive, up to `tol`) of `center`, in label order.
pub fn ball_members(space: &FiniteMetric, center: usize, eps: f64, tol: f64) -> Vec<usize> {
    (0..space.len()).filter(|&m| m == center || space.dist[center][m] <= eps + tol).collect()
}

#[derive(Serialize, Deserialize)]
struct SpaceRepr {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    hole: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    hole_closed_removed: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dist: Option<Vec<Vec<f64>>>,
}

impl Serialize for MetricSpace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut r = SpaceRepr { kind: self.kind_name().into(), hole: None, hole_closed_removed: None, dim: None, labels: None, dist: None };
        match self {
            MetricSpace::RealLine => {}
            MetricSpace::Punctured(h) => {
                r.hole = Some([h.lo, h.hi]);
                r.hole_closed_removed = Some(h.closed_removed);
            }
            MetricSpace::Euclidean { dim } => r.dim = Some(*dim),
            MetricSpace::Finite(fm) => {
                r.labels = Some(fm.labels.clone());
                r.dist = Some(fm.dist.clone());
            }
        }
        r.serialize(s)
    }
}

impl<'de> Deserialize<'de> for MetricSpace {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = SpaceRepr::deserialize(d)?;
        match r.kind.as_str() {
            "real" => Ok(MetricSpace::RealLine),
            "punctured" => {
                let [lo, hi] = r.hole.ok_or_else(|| D::Error::missing_field("hole"))?;
                Ok(MetricSpace::punctured(lo, hi, r.hole_closed_removed.unwrap_or(false)))
            }
            "euclidean" => Ok(MetricSpace::Euclidean { dim: r.dim.ok_or_else(|| D::Error::missing_field("dim"))? }),
            "finite" => {
                let dist = r.dist.ok_or_else(|| D::Error::missing_field("dist"))?;
                let labels = r.labels.unwrap_or_else(|| (0..dist.len()).map(|i| format!("p{i}")).collect());
                Ok(MetricSpace::Finite(FiniteMetric::new(labels, dist)))
            }
            other => Err(D::Error::unknown_variant(other, &["real", "punctured", "euclidean", "finite"])),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn three(d: [[f64; 3]; 3]) -> MetricSpace {
        MetricSpace::Finite(FiniteMetric::new(vec!["a".into(), "b".into(), "c".into()], d.iter().map(|r| r.to_vec()).collect()))
    }

    #[test]
    fn distances() {
        assert_eq!(MetricSpace::RealLine.distance(&Point::Real(0.0), &Point::Real(1.0)).unwrap(), 1.0);
        let fm = MetricSpace::Finite(FiniteMetric::two_point(2.5));
        assert_eq!(fm.distance(&Point::Label(0), &Point::Label(1)).unwrap(), 2.5);
        let p = MetricSpace::punctured(0.4, 0.6, false);
        assert_eq!(p.distance(&Point::Real(0.0), &Point::Real(1.0)).unwrap(), 1.0);
        assert!(matches!(p.distance(&Point::Real(0.5), &Point::Real(1.0)), Err(Error::Membership(_))));
        let e = MetricSpace::Euclidean { dim: 2 };
        assert!(matches!(e.distance(&Point::Vector(vec![0.0]), &Point::Vector(vec![1.0, 0.0])), Err(Error::Shape(_))));
    }

    #[test]
    fn hole_boundaries() {
        let open = MetricSpace::punctured(0.4, 0.6, false);
        let closed = MetricSpace::punctured(0.4, 0.6, true);
        assert!(open.contains(&Point::Real(0.4), DEFAULT_TOL));
        assert!(!closed.contains(&Point::Real(0.4), DEFAULT_TOL));
        assert!(!closed.contains(&Point::Real(0.6), DEFAULT_TOL));
        assert!(!open.contains(&Point::Real(0.5), DEFAULT_TOL));
        let single = MetricSpace::punctured(0.5, 0.5, true);
        assert!(single.validate().valid);
        assert!(!single.contains(&Point::Real(0.5), DEFAULT_TOL));
        assert!(!MetricSpace::punctured(0.5, 0.5, false).validate().valid);
    }

    #[test]
    fn validation() {
        assert!(three([[0.0, 1.0, 1.0], [1.0, 0.0, 1.0], [1.0, 1.0, 0.0]]).validate().valid);
        let bad = three([[0.0, 1.0, 5.0], [1.0, 0.0, 1.0], [5.0, 1.0, 0.0]]).validate();
        assert!(!bad.valid);
        assert_eq!(bad.triangle_violations, vec![(0, 1, 2)]);
        let asym = three([[0.0, 1.0, 1.0], [1.5, 0.0, 1.0], [1.0, 1.0, 0.0]]).validate();
        assert_eq!(asym.asymmetries, vec![(0, 1)]);
        assert!(MetricSpace::Euclidean { dim: 3 }.validate().valid);
    }

    #[test]
    fn balls() {
        let fm = FiniteMetric::two_point(1.0);
        assert_eq!(ball_members(&fm, 0, 0.5, DEFAULT_TOL), vec![0]);
        assert_eq!(ball_members(&fm, 0, 1.0, DEFAULT_TOL), vec![0, 1]);
        assert_eq!(ball_members(&fm, 1, 0.99, DEFAULT_TOL), vec![1]);
    }

    #[test]
    fn json_roundtrip() {
        for s in [
            MetricSpace::RealLine,
            MetricSpace::punctured(0.4, 0.6, true),
            MetricSpace::Euclidean { dim: 3 },
            MetricSpace::Finite(FiniteMetric::two_point(1.0)),
        ] {
            let txt = serde_json::to_string(&s).unwrap();
            let back: MetricSpace = serde_json::from_str(&txt).unwrap();
            assert_eq!(back, s);
        }
        let s: MetricSpace = serde_json::from_str(r#"{"kind":"punctured","hole":[0.4,0.6],"hole_closed_removed":false}"#).unwrap();
        assert_eq!(s, MetricSpace::punctured(0.4, 0.6, false));
    }

    #[test]
    fn midpoint_rule() {
        let vals = [Point::Real(0.0), Point::Real(1.0)];
        assert!(MetricSpace::RealLine.admits_midpoint(&vals, DEFAULT_TOL));
        assert!(!MetricSpace::punctured(0.5, 0.5, true).admits_midpoint(&vals, DEFAULT_TOL));
        assert!(MetricSpace::punctured(0.2, 0.3, true).admits_midpoint(&vals, DEFAULT_TOL));
        let two = MetricSpace::Finite(FiniteMetric::two_point(1.0));
        assert!(!two.admits_midpoint(&[Point::Label(0), Point::Label(1)], DEFAULT_TOL));
    }
}
