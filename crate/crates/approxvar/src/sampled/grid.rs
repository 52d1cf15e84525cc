use std::f64::consts::PI;

use serde_json::Value;

use crate::error::{Error, Result};

/// A grid coordinate. Generated grids keep exact rationals and rational
/// multiples of pi; user grids are plain floats.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Coord {
    Rational { num: i64, den: i64 },
    PiMultiple { num: i64, den: i64 },
    Float(f64),
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

fn reduce(num: i64, den: i64) -> (i64, i64) {
    let s = if den < 0 { -1 } else { 1 };
    let g = gcd(num, den);
    (s * num / g, s * den / g)
}

impl Coord {
    pub fn rational(num: i64, den: i64) -> Coord {
        let (n, d) = reduce(num, den);
        Coord::Rational { num: n, den: d }
    }

    pub fn pi_multiple(num: i64, den: i64) -> Coord {
        let (n, d) = reduce(num, den);
        Coord::PiMultiple { num: n, den: d }
    }

    pub fn value(&self) -> f64 {
        match *self {
            Coord::Rational { num, den } => num as f64 / den as f64,
            Coord::PiMultiple { num, den } => PI * num as f64 / den as f64,
            Coord::Float(v) => v,
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, Coord::Float(_))
    }

    /// Equality: exact when both sides are exact of the same kind, otherwise within `tol`.
    pub fn matches(&self, other: &Coord, tol: f64) -> bool {
        match (self, other) {
            (Coord::Rational { num: a, den: b }, Coord::Rational { num: c, den: d })
            | (Coord::PiMultiple { num: a, den: b }, Coord::PiMultiple { num: c, den: d }) => {
                (*a as i128) * (*d as i128) == (*c as i128) * (*b as i128)
            }
            _ => (self.value() - other.value()).abs() <= tol * (1.0 + self.value().abs()),
        }
    }

    pub fn to_json(&self) -> Value {
        match *self {
            Coord::Rational { num, den } if den == 1 => Value::String(num.to_string()),
            Coord::Rational { num, den } => Value::String(format!("{num}/{den}")),
            Coord::PiMultiple { num, den } if den == 1 => Value::String(format!("{num}pi")),
            Coord::PiMultiple { num, den } => Value::String(format!("{num}/{den}pi")),
            Coord::Float(v) => serde_json::Number::from_f64(v).map(Value::Number).unwrap_or(Value::Null),
        }
    }

    pub fn from_json(v: &Value) -> Result<Coord> {
        match v {
            Value::Number(n) => n.as_f64().map(Coord::Float).ok_or_else(|| Error::Parse(format!("bad coordinate {v}"))),
            Value::String(s) => Coord::parse(s),
            _ => Err(Error::Parse(format!("bad coordinate {v}"))),
        }
    }

    /// Parses `"3/8"`, `"5"`, `"3/8pi"`, `"2pi"`, `"pi"` or a decimal literal.
    pub fn parse(s: &str) -> Result<Coord> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad coordinate {s:?}"));
        let (body, pi) = match s.strip_suffix("pi") {
            Some(b) => (b, true),
            None => (s, false),
        };
        let body = if pi && body.is_empty() { "1" } else { body };
        let frac = |b: &str| -> Option<(i64, i64)> {
            match b.split_once('/') {
                Some((n, d)) => Some((n.trim().parse().ok()?, d.trim().parse().ok()?)),
                None => Some((b.trim().parse().ok()?, 1)),
            }
        };
        match frac(body) {
            Some((_, 0)) => Err(bad()),
            Some((n, d)) if pi => Ok(Coord::pi_multiple(n, d)),
            Some((n, d)) => Ok(Coord::rational(n, d)),
            None if !pi => s.parse::<f64>().map(Coord::Float).map_err(|_| bad()),
            None => Err(bad()),
        }
    }
}

/// Per-point tag for Dirichlet-type patterns, standing in for rational/irrational arguments.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointTag {
    Rational,
    Irrational,
}

impl PointTag {
    fn name(self) -> &'static str {
        match self {
            PointTag::Rational => "rational",
            PointTag::Irrational => "irrational",
        }
    }
}

/// Strictly increasing nonempty grid, optionally tagged.
#[derive(Clone, Debug, PartialEq)]
pub struct GridDomain {
    pub points: Vec<Coord>,
    pub tags: Option<Vec<PointTag>>,
    ts: Vec<f64>,
}

impl GridDomain {
    pub fn new(points: Vec<Coord>, tags: Option<Vec<PointTag>>) -> Result<GridDomain> {
        if points.is_empty() {
            return Err(Error::Domain("grid must be nonempty".into()));
        }
        let ts: Vec<f64> = points.iter().map(|c| c.value()).collect();
        if let Some(i) = ts.iter().position(|t| !t.is_finite()) {
            return Err(Error::Domain(format!("grid point {i} is not finite")));
        }
        if let Some(i) = (1..ts.len()).find(|&i| ts[i] <= ts[i - 1]) {
            return Err(Error::Domain(format!("grid not strictly increasing at index {i}")));
        }
        if let Some(t) = &tags {
            if t.len() != points.len() {
                return Err(Error::Shape(format!("{} tags for {} grid points", t.len(), points.len())));
            }
        }
        Ok(GridDomain { points, tags, ts })
    }

    pub fn from_f64(ts: &[f64]) -> Result<GridDomain> {
        GridDomain::new(ts.iter().map(|&t| Coord::Float(t)).collect(), None)
    }

    /// `0, 1/n, ..., 1` as exact rationals.
    pub fn uniform(n: usize) -> GridDomain {
        let n = n.max(1) as i64;
        GridDomain::new((0..=n).map(|i| Coord::rational(i, n)).collect(), None).expect("uniform grid")
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn t(&self, i: usize) -> f64 {
        self.ts[i]
    }

    pub fn ts(&self) -> &[f64] {
        &self.ts
    }

    pub fn select(&self, idx: &[usize]) -> GridDomain {
        GridDomain {
            points: idx.iter().map(|&i| self.points[i]).collect(),
            tags: self.tags.as_ref().map(|t| idx.iter().map(|&i| t[i]).collect()),
            ts: idx.iter().map(|&i| self.ts[i]).collect(),
        }
    }

    pub fn same_points(&self, other: &GridDomain, tol: f64) -> bool {
        self.len() == other.len() && self.points.iter().zip(&other.points).all(|(a, b)| a.matches(b, tol))
    }

    /// Index of the grid point matching `c`.
    pub fn find(&self, c: &Coord, tol: f64) -> Option<usize> {
        self.points.iter().position(|p| p.matches(c, tol))
    }

    /// Sorted union of several grids (duplicates merged), tags dropped.
    pub fn union(grids: &[GridDomain], tol: f64) -> Result<GridDomain> {
        let mut all: Vec<Coord> = grids.iter().flat_map(|g| g.points.iter().copied()).collect();
        all.sort_by(|a, b| a.value().total_cmp(&b.value()));
        let mut out: Vec<Coord> = Vec::with_capacity(all.len());
        for c in all {
            if out.last().map_or(true, |l| !l.matches(&c, tol)) {
                out.push(c);
            }
        }
        GridDomain::new(out, None)
    }

    pub fn points_json(&self) -> Value {
        Value::Array(self.points.iter().map(|c| c.to_json()).collect())
    }

    pub fn tags_json(&self) -> Option<Value> {
        self.tags.as_ref().map(|t| Value::Array(t.iter().map(|x| Value::String(x.name().into())).collect()))
    }

    pub fn to_json_object(&self) -> Value {
        let mut v = serde_json::json!({ "points": self.points_json() });
        if let Some(t) = self.tags_json() {
            v["tags"] = t;
        }
        v
    }

    /// Accepts a bare point array, or an object `{"points": [...], "tags": [...]}`.
    pub fn from_json_parts(points: &Value, tags: Option<&Value>) -> Result<GridDomain> {
        let (pts, tags) = match points {
            Value::Object(m) => (m.get("points").ok_or_else(|| Error::Parse("domain object needs `points`".into()))?, m.get("tags").or(tags)),
            other => (other, tags),
        };
        let arr = pts.as_array().ok_or_else(|| Error::Parse("domain must be an array".into()))?;
        let coords = arr
            .iter()
            .enumerate()
            .map(|(i, v)| Coord::from_json(v).map_err(|e| Error::Parse(format!("field `domain[{i}]`: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        let tags = match tags {
            None | Some(Value::Null) => None,
            Some(Value::Array(ts)) => Some(
                ts.iter()
                    .map(|t| match t.as_str() {
                        Some("rational") | Some("q") => Ok(PointTag::Rational),
                        Some("irrational") | Some("i") => Ok(PointTag::Irrational),
                        _ => Err(Error::Parse(format!("bad tag {t}"))),
                    })
                    .collect::<Result<Vec<_>>>()?,
            ),
            Some(other) => return Err(Error::Parse(format!("bad tags {other}"))),
        };
        GridDomain::new(coords, tags)
    }
}
