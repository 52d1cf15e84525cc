//! Finite grids, sampled functions and function families.

mod family;
mod generators;
mod grid;

pub use family::FunctionFamily;
pub use generators::{canonical_domain, critical_points, generate, BetaRule, GeneratorName, GeneratorSpec};
pub use grid::{Coord, GridDomain, PointTag};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::spaces::{MetricSpace, Point, DEFAULT_TOL};

pub const FORMAT_VERSION: u32 = 1;

/// Grid plus one value per grid point.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledFunction {
    pub domain: GridDomain,
    pub space: MetricSpace,
    pub values: Vec<Point>,
}

impl SampledFunction {
    pub fn new(domain: GridDomain, space: MetricSpace, values: Vec<Point>) -> Result<Self> {
        if values.len() != domain.len() {
            return Err(Error::Shape(format!("{} values for {} grid points", values.len(), domain.len())));
        }
        space.ensure_valid()?;
        for (i, v) in values.iter().enumerate() {
            space
                .check_point(v, DEFAULT_TOL)
                .map_err(|e| match e {
                    Error::Membership(m) => Error::Membership(format!("value {i}: {m}")),
                    Error::Shape(m) => Error::Shape(format!("value {i}: {m}")),
                    other => other,
                })?;
        }
        Ok(SampledFunction { domain, space, values })
    }

    /// Real-valued function on float grid `ts`.
    pub fn real(ts: &[f64], vs: &[f64]) -> Result<Self> {
        Self::new(GridDomain::from_f64(ts)?, MetricSpace::RealLine, vs.iter().map(|&v| Point::Real(v)).collect())
    }

    /// Real values on the grid `0, 1, ..., n-1`.
    pub fn real_seq(vs: &[f64]) -> Result<Self> {
        let ts: Vec<f64> = (0..vs.len()).map(|i| i as f64).collect();
        Self::real(&ts, vs)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn t(&self, i: usize) -> f64 {
        self.domain.t(i)
    }

    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.space.d(&self.values[i], &self.values[j])
    }

    /// Scalar values, for real and punctured spaces (and 1-dimensional Euclidean).
    pub fn real_values(&self) -> Option<Vec<f64>> {
        if !self.space.is_scalar() {
            return None;
        }
        self.values.iter().map(|p| p.as_real()).collect()
    }

    /// Sub-function on the index range `lo..=hi`.
    pub fn slice(&self, lo: usize, hi: usize) -> SampledFunction {
        self.select(&(lo..=hi).collect::<Vec<_>>())
    }

    /// Sub-function on the listed (increasing) indices.
    pub fn select(&self, idx: &[usize]) -> SampledFunction {
        SampledFunction {
            domain: self.domain.select(idx),
            space: self.space.clone(),
            values: idx.iter().map(|&i| self.values[i].clone()).collect(),
        }
    }

    /// Restriction to grid points in `[lo, hi]`.
    pub fn restrict(&self, lo: f64, hi: f64) -> Result<SampledFunction> {
        let idx: Vec<usize> = (0..self.len())
            .filter(|&i| self.t(i) >= lo - DEFAULT_TOL && self.t(i) <= hi + DEFAULT_TOL)
            .collect();
        if idx.is_empty() {
            return Err(Error::Domain(format!("[{lo}, {hi}] contains no grid point")));
        }
        Ok(self.select(&idx))
    }

    /// Same values on a new grid of equal length (strictly increasing remap).
    pub fn with_domain(&self, domain: GridDomain) -> Result<SampledFunction> {
        SampledFunction::new(domain, self.space.clone(), self.values.clone())
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "format_version": FORMAT_VERSION,
            "domain": self.domain.points_json(),
            "space": serde_json::to_value(&self.space).unwrap_or(Value::Null),
            "values": self.values.iter().map(|p| self.space.point_to_json(p)).collect::<Vec<_>>(),
        });
        if let Some(tags) = self.domain.tags_json() {
            v["tags"] = tags;
        }
        v
    }

    pub fn from_json(v: &Value) -> Result<SampledFunction> {
        let space: MetricSpace = match v.get("space") {
            Some(s) => serde_json::from_value(s.clone()).map_err(|e| Error::Parse(format!("field `space`: {e}")))?,
            None => MetricSpace::RealLine,
        };
        let dom = v.get("domain").ok_or_else(|| Error::Parse("missing field `domain`".into()))?;
        let domain = GridDomain::from_json_parts(dom, v.get("tags"))?;
        let vals = v
            .get("values")
            .and_then(|x| x.as_array())
            .ok_or_else(|| Error::Parse("missing array field `values`".into()))?;
        let values = vals
            .iter()
            .enumerate()
            .map(|(i, x)| space.point_from_json(x).map_err(|e| Error::Parse(format!("field `values[{i}]`: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        SampledFunction::new(domain, space, values)
    }
}

/// `f - g` pointwise; scalar kinds difference into the real line.
pub fn pointwise_difference(f: &SampledFunction, g: &SampledFunction) -> Result<SampledFunction> {
    if !f.space.is_linear() || !g.space.is_linear() {
        return Err(Error::Unsupported("differences need a linear value space".into()));
    }
    if !f.domain.same_points(&g.domain, DEFAULT_TOL) {
        return Err(Error::Shape("functions live on different grids".into()));
    }
    let space = match &f.space {
        MetricSpace::Euclidean { dim } if *dim > 1 => MetricSpace::Euclidean { dim: *dim },
        _ => MetricSpace::RealLine,
    };
    let mut values = Vec::with_capacity(f.len());
    for (a, b) in f.values.iter().zip(&g.values) {
        let (ca, cb) = match (a.coords(), b.coords()) {
            (Some(x), Some(y)) if x.len() == y.len() => (x, y),
            _ => return Err(Error::Shape("value shapes differ".into())),
        };
        let d: Vec<f64> = ca.iter().zip(&cb).map(|(x, y)| x - y).collect();
        values.push(if matches!(space, MetricSpace::RealLine) { Point::Real(d[0]) } else { Point::Vector(d) });
    }
    let mut domain = f.domain.clone();
    domain.tags = None;
    SampledFunction::new(domain, space, values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn restrict_examples() {
        let f = SampledFunction::real(&[0.0, 0.5, 1.0], &[0.0, 0.5, 1.0]).unwrap();
        let r = f.restrict(0.0, 0.5).unwrap();
        assert_eq!(r.real_values().unwrap(), vec![0.0, 0.5]);
        assert_eq!(f.restrict(0.0, 1.0).unwrap(), f);
        assert!(matches!(f.restrict(2.0, 3.0), Err(Error::Domain(_))));
        let spike = SampledFunction::real(&[0.0, 0.5, 1.0], &[1.0, 0.0, 1.0]).unwrap();
        assert_eq!(spike.restrict(0.5, 1.0).unwrap().real_values().unwrap(), vec![0.0, 1.0]);
    }

    #[test]
    fn differences() {
        let f = SampledFunction::real(&[0.0, 0.5, 1.0], &[0.0, 0.5, 1.0]).unwrap();
        let g = SampledFunction::real(&[0.0, 0.5, 1.0], &[0.5, 0.5, 0.5]).unwrap();
        assert_eq!(pointwise_difference(&f, &g).unwrap().real_values().unwrap(), vec![-0.5, 0.0, 0.5]);
        assert!(pointwise_difference(&f, &f).unwrap().real_values().unwrap().iter().all(|v| *v == 0.0));
        let fm = crate::spaces::FiniteMetric::two_point(1.0);
        let h = SampledFunction::new(GridDomain::from_f64(&[0.0]).unwrap(), MetricSpace::Finite(fm), vec![Point::Label(0)]).unwrap();
        assert!(matches!(pointwise_difference(&h, &h), Err(Error::Unsupported(_))));
    }

    #[test]
    fn membership_enforced() {
        let d = GridDomain::from_f64(&[0.0, 1.0]).unwrap();
        let r = SampledFunction::new(d, MetricSpace::punctured(0.4, 0.6, true), vec![Point::Real(0.0), Point::Real(0.5)]);
        assert!(matches!(r, Err(Error::Membership(_))));
    }

    #[test]
    fn json_roundtrip() {
        let f = SampledFunction::real(&[0.0, 0.5, 1.0], &[0.0, 0.25, 1.0]).unwrap();
        let back = SampledFunction::from_json(&f.to_json()).unwrap();
        assert_eq!(back, f);
        let err = SampledFunction::from_json(&json!({"domain":[0.0, 1.0], "values":[0.0]}));
        assert!(matches!(err, Err(Error::Shape(_))));
    }
}
