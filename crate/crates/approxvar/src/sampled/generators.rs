use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::grid::{Coord, GridDomain, PointTag};
use super::SampledFunction;
use crate::error::{Error, Result};
use crate::spaces::{MetricSpace, Point, DEFAULT_TOL};

/// Largest `j!` a factorial oscillator grid may use (the grid has `2 j! + 1` points).
pub const MAX_FACTORIAL: i64 = 5040;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorName {
    Identity,
    ScaledMonotone,
    Spike,
    ThreeStep,
    DirichletPattern,
    SinJt,
    FactorialOscillator,
    ScaledDirichlet,
}

impl GeneratorName {
    pub fn parse(s: &str) -> Result<Self> {
        serde_json::from_value(Value::String(s.replace('-', "_"))).map_err(|_| Error::Parse(format!("unknown generator {s:?}")))
    }
}

/// Scale factor sequence for `scaled_dirichlet`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum BetaRule {
    Constant { value: f64 },
    /// `1/j`
    Reciprocal,
    /// `1 + 1/j`
    OnePlusReciprocal,
    /// `1` for odd `j`, `1 + 1/j` for even `j`
    TwoCluster,
    /// `ratio^j`
    Geometric { ratio: f64 },
}

impl BetaRule {
    pub fn beta(&self, j: usize) -> f64 {
        let jf = j as f64;
        match self {
            BetaRule::Constant { value } => *value,
            BetaRule::Reciprocal => 1.0 / jf,
            BetaRule::OnePlusReciprocal => 1.0 + 1.0 / jf,
            BetaRule::TwoCluster => {
                if j % 2 == 1 {
                    1.0
                } else {
                    1.0 + 1.0 / jf
                }
            }
            BetaRule::Geometric { ratio } => ratio.powi(j as i32),
        }
    }

    /// Parses `1.5`, `reciprocal`, `one_plus_reciprocal`, `two_cluster`, `geometric:0.5`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim().replace('-', "_");
        if let Ok(v) = s.parse::<f64>() {
            return Ok(BetaRule::Constant { value: v });
        }
        match s.split_once(':') {
            Some(("geometric", r)) => r.parse().map(|ratio| BetaRule::Geometric { ratio }).map_err(|_| Error::Parse(format!("bad ratio {r:?}"))),
            Some(("constant", v)) => v.parse().map(|value| BetaRule::Constant { value }).map_err(|_| Error::Parse(format!("bad value {v:?}"))),
            _ => match s.as_str() {
                "reciprocal" => Ok(BetaRule::Reciprocal),
                "one_plus_reciprocal" => Ok(BetaRule::OnePlusReciprocal),
                "two_cluster" => Ok(BetaRule::TwoCluster),
                _ => Err(Error::Parse(format!("unknown beta rule {s:?}"))),
            },
        }
    }
}

/// A named family of functions indexed by `j >= 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorSpec {
    pub name: GeneratorName,
    pub space: MetricSpace,
    pub x: Point,
    pub y: Point,
    pub alpha: f64,
    pub tau: f64,
    /// Use `tau / j` as the spike location of member `j`.
    pub tau_decay: bool,
    /// Alternation count of Dirichlet-type patterns.
    pub k: usize,
    pub beta: BetaRule,
    /// Extra uniform points added to canonical grids (0 = critical points only).
    pub resolution: usize,
}

fn default_xy(space: &MetricSpace) -> (Point, Point) {
    match space {
        MetricSpace::Euclidean { dim } => {
            let mut e = vec![0.0; *dim];
            if *dim > 0 {
                e[0] = 1.0;
            }
            (Point::Vector(vec![0.0; *dim]), Point::Vector(e))
        }
        MetricSpace::Finite(_) => (Point::Label(0), Point::Label(1)),
        _ => (Point::Real(0.0), Point::Real(1.0)),
    }
}

impl GeneratorSpec {
    pub fn new(name: GeneratorName) -> Self {
        Self::in_space(name, MetricSpace::RealLine)
    }

    pub fn in_space(name: GeneratorName, space: MetricSpace) -> Self {
        let (x, y) = default_xy(&space);
        GeneratorSpec {
            name,
            space,
            x,
            y,
            alpha: 0.5,
            tau: 0.5,
            tau_decay: false,
            k: 4,
            beta: BetaRule::Constant { value: 1.0 },
            resolution: 0,
        }
    }

    pub fn with_xy(mut self, x: Point, y: Point) -> Self {
        self.x = x;
        self.y = y;
        self
    }

    pub fn with_real_xy(self, x: f64, y: f64) -> Self {
        self.with_xy(Point::Real(x), Point::Real(y))
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_tau(mut self, tau: f64) -> Self {
        self.tau = tau;
        self
    }

    pub fn with_tau_decay(mut self, on: bool) -> Self {
        self.tau_decay = on;
        self
    }

    pub fn with_k(mut self, k: usize) -> Self {
        self.k = k;
        self
    }

    pub fn with_beta(mut self, beta: BetaRule) -> Self {
        self.beta = beta;
        self
    }

    pub fn with_resolution(mut self, n: usize) -> Self {
        self.resolution = n;
        self
    }

    fn tau_j(&self, j: usize) -> Coord {
        let t = nice_coord(self.tau);
        if !self.tau_decay {
            return t;
        }
        match t {
            Coord::Rational { num, den } => Coord::rational(num, den * j as i64),
            other => Coord::Float(other.value() / j as f64),
        }
    }

    fn check(&self) -> Result<()> {
        self.space.ensure_valid()?;
        for p in [&self.x, &self.y] {
            self.space.check_point(p, DEFAULT_TOL).map_err(|e| Error::Generator(format!("parameter point: {e}")))?;
        }
        let needs_distinct = matches!(
            self.name,
            GeneratorName::Spike | GeneratorName::ThreeStep | GeneratorName::DirichletPattern | GeneratorName::ScaledDirichlet | GeneratorName::FactorialOscillator
        );
        if needs_distinct && self.space.d(&self.x, &self.y) <= 0.0 {
            return Err(Error::Generator(format!("{:?} requires x != y", self.name)));
        }
        let needs_linear = matches!(self.name, GeneratorName::ScaledMonotone | GeneratorName::ThreeStep | GeneratorName::ScaledDirichlet);
        if needs_linear && !self.space.is_linear() {
            return Err(Error::Generator(format!("{:?} needs a linear value space", self.name)));
        }
        let needs_scalar = matches!(self.name, GeneratorName::Identity | GeneratorName::SinJt);
        if needs_scalar && !self.space.is_scalar() {
            return Err(Error::Generator(format!("{:?} needs real values", self.name)));
        }
        if matches!(self.name, GeneratorName::Spike | GeneratorName::ThreeStep) && !(0.0..=1.0).contains(&self.tau) {
            return Err(Error::Generator("tau must lie in [0, 1]".into()));
        }
        if matches!(self.name, GeneratorName::DirichletPattern | GeneratorName::ScaledDirichlet) && self.k == 0 {
            return Err(Error::Generator("alternation count k must be positive".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "space": self.space,
            "x": self.space.point_to_json(&self.x),
            "y": self.space.point_to_json(&self.y),
            "alpha": self.alpha,
            "tau": self.tau,
            "tau_decay": self.tau_decay,
            "k": self.k,
            "beta": self.beta,
            "resolution": self.resolution,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let field = |name: &str| v.get(name).filter(|x| !x.is_null());
        let name: GeneratorName = serde_json::from_value(field("name").cloned().ok_or_else(|| Error::Parse("generator needs `name`".into()))?)
            .map_err(|e| Error::Parse(format!("field `name`: {e}")))?;
        let space: MetricSpace = match field("space") {
            Some(s) => serde_json::from_value(s.clone()).map_err(|e| Error::Parse(format!("field `space`: {e}")))?,
            None => MetricSpace::RealLine,
        };
        let mut g = GeneratorSpec::in_space(name, space);
        if let Some(x) = field("x") {
            g.x = g.space.point_from_json(x)?;
        }
        if let Some(y) = field("y") {
            g.y = g.space.point_from_json(y)?;
        }
        let num = |n: &str| -> Result<Option<f64>> {
            field(n).map(|x| x.as_f64().ok_or_else(|| Error::Parse(format!("field `{n}` must be a number")))).transpose()
        };
        if let Some(a) = num("alpha")? {
            g.alpha = a;
        }
        if let Some(t) = num("tau")? {
            g.tau = t;
        }
        if let Some(k) = num("k")? {
            g.k = k as usize;
        }
        if let Some(r) = num("resolution")? {
            g.resolution = r as usize;
        }
        if let Some(b) = field("tau_decay") {
            g.tau_decay = b.as_bool().ok_or_else(|| Error::Parse("field `tau_decay` must be a boolean".into()))?;
        }
        if let Some(b) = field("beta") {
            g.beta = match b {
                Value::Number(n) => BetaRule::Constant { value: n.as_f64().unwrap_or(1.0) },
                Value::String(s) => BetaRule::parse(s)?,
                other => serde_json::from_value(other.clone()).map_err(|e| Error::Parse(format!("field `beta`: {e}")))?,
            };
        }
        Ok(g)
    }
}

/// Exact rational for values like 0.5 or 0.25, float otherwise.
fn nice_coord(v: f64) -> Coord {
    for den in 1..=1024i64 {
        let n = (v * den as f64).round();
        if (v * den as f64 - n).abs() < 1e-12 && n.abs() < 1e15 {
            return Coord::rational(n as i64, den);
        }
    }
    Coord::Float(v)
}

fn factorial(j: usize) -> Result<i64> {
    let mut f: i64 = 1;
    for i in 2..=j as i64 {
        f = f.checked_mul(i).filter(|&f| f <= MAX_FACTORIAL).ok_or_else(|| {
            Error::capacity(format!("factorial oscillator j={j} exceeds the grid cap {MAX_FACTORIAL}"), None)
        })?;
    }
    Ok(f)
}

/// Points every grid for member `j` must contain.
pub fn critical_points(spec: &GeneratorSpec, j: usize) -> Result<Vec<Coord>> {
    Ok(match spec.name {
        GeneratorName::Identity | GeneratorName::ScaledMonotone => vec![Coord::rational(0, 1), Coord::rational(1, 1)],
        GeneratorName::Spike | GeneratorName::ThreeStep => {
            let mut v = vec![Coord::rational(0, 1), spec.tau_j(j), Coord::rational(1, 1)];
            v.sort_by(|a, b| a.value().total_cmp(&b.value()));
            v.dedup_by(|a, b| a.matches(b, DEFAULT_TOL));
            v
        }
        GeneratorName::DirichletPattern | GeneratorName::ScaledDirichlet => vec![],
        GeneratorName::SinJt => (0..=4 * j as i64).map(|k| Coord::pi_multiple(k, 2 * j as i64)).collect(),
        GeneratorName::FactorialOscillator => {
            let f = factorial(j)?;
            (0..=2 * f).map(|m| Coord::rational(m, 2 * f)).collect()
        }
    })
}

/// Smallest grid on which member `j` is faithfully represented, plus `resolution` extra points.
pub fn canonical_domain(spec: &GeneratorSpec, j: usize) -> Result<GridDomain> {
    if matches!(spec.name, GeneratorName::DirichletPattern | GeneratorName::ScaledDirichlet) {
        let k = spec.k.max(1) as i64;
        let pts = (0..=k).map(|i| Coord::rational(i, k)).collect();
        let tags = (0..=k).map(|i| if i % 2 == 0 { PointTag::Rational } else { PointTag::Irrational }).collect();
        return GridDomain::new(pts, Some(tags));
    }
    let crit = GridDomain::new(critical_points(spec, j)?, None)?;
    if spec.resolution == 0 {
        return Ok(crit);
    }
    let n = spec.resolution as i64;
    let extra: Vec<Coord> = if spec.name == GeneratorName::SinJt {
        (0..=n).map(|i| Coord::pi_multiple(2 * i, n)).collect()
    } else {
        (0..=n).map(|i| Coord::rational(i, n)).collect()
    };
    GridDomain::union(&[crit, GridDomain::new(extra, None)?], DEFAULT_TOL)
}

fn lin(a: f64, x: &Point, b: f64, y: &Point) -> Point {
    match (x, y) {
        (Point::Real(u), Point::Real(v)) => Point::Real(a * u + b * v),
        _ => {
            let (u, v) = (x.coords().unwrap_or_default(), y.coords().unwrap_or_default());
            Point::Vector(u.iter().zip(&v).map(|(p, q)| a * p + b * q).collect())
        }
    }
}

fn scale(a: f64, x: &Point) -> Point {
    lin(a, x, 0.0, x)
}

fn scalar(space: &MetricSpace, v: f64) -> Point {
    match space {
        MetricSpace::Euclidean { .. } => Point::Vector(vec![v]),
        _ => Point::Real(v),
    }
}

fn sin_at(c: &Coord, j: usize) -> f64 {
    if let Coord::PiMultiple { num, den } = *c {
        let top = 2 * j as i128 * num as i128;
        if top % den as i128 == 0 {
            return [0.0, 1.0, 0.0, -1.0][(top / den as i128).rem_euclid(4) as usize];
        }
    }
    (j as f64 * c.value()).sin()
}

fn factorial_integral(c: &Coord, f: i64) -> bool {
    match *c {
        Coord::Rational { num, den } => (f as i128 * num as i128) % den as i128 == 0,
        Coord::PiMultiple { num, .. } => num == 0,
        Coord::Float(t) => {
            let s = f as f64 * t;
            (s - s.round()).abs() <= 1e-9
        }
    }
}

/// Member `j` of the family sampled on `domain`.
pub fn generate(spec: &GeneratorSpec, j: usize, domain: &GridDomain) -> Result<SampledFunction> {
    if j == 0 {
        return Err(Error::Generator("family index j starts at 1".into()));
    }
    spec.check()?;
    for c in critical_points(spec, j)? {
        if domain.find(&c, DEFAULT_TOL).is_none() {
            return Err(Error::Generator(format!("{:?} j={j}: grid is missing critical point {}", spec.name, c.to_json())));
        }
    }
    let (x, y) = (&spec.x, &spec.y);
    let values: Vec<Point> = match spec.name {
        GeneratorName::Identity => domain.ts().iter().map(|&t| scalar(&spec.space, t)).collect(),
        GeneratorName::ScaledMonotone => domain.ts().iter().map(|&t| scale(t, x)).collect(),
        GeneratorName::Spike => {
            let tau = spec.tau_j(j);
            domain.points.iter().map(|c| if c.matches(&tau, DEFAULT_TOL) { x.clone() } else { y.clone() }).collect()
        }
        GeneratorName::ThreeStep => {
            let tau = spec.tau_j(j);
            let xa = lin(1.0 - spec.alpha, x, spec.alpha, y);
            domain
                .points
                .iter()
                .map(|c| {
                    if c.matches(&tau, DEFAULT_TOL) {
                        xa.clone()
                    } else if c.value() < tau.value() {
                        x.clone()
                    } else {
                        y.clone()
                    }
                })
                .collect()
        }
        GeneratorName::DirichletPattern | GeneratorName::ScaledDirichlet => {
            let tags = domain
                .tags
                .as_ref()
                .ok_or_else(|| Error::Generator("Dirichlet patterns need a tagged grid".into()))?;
            let flips = tags.windows(2).filter(|w| w[0] != w[1]).count();
            if flips != spec.k {
                return Err(Error::Generator(format!("grid tags alternate {flips} times, expected k={}", spec.k)));
            }
            let (xs, ys) = if spec.name == GeneratorName::ScaledDirichlet {
                let b = spec.beta.beta(j);
                (scale(b, x), scale(b, y))
            } else {
                (x.clone(), y.clone())
            };
            tags.iter().map(|t| if *t == PointTag::Rational { xs.clone() } else { ys.clone() }).collect()
        }
        GeneratorName::SinJt => domain.points.iter().map(|c| scalar(&spec.space, sin_at(c, j))).collect(),
        GeneratorName::FactorialOscillator => {
            let f = factorial(j)?;
            domain.points.iter().map(|c| if factorial_integral(c, f) { x.clone() } else { y.clone() }).collect()
        }
    };
    SampledFunction::new(domain.clone(), spec.space.clone(), values).map_err(|e| Error::Generator(format!("{:?} j={j}: {e}", spec.name)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reals(f: &SampledFunction) -> Vec<f64> {
        f.real_values().unwrap()
    }

    #[test]
    fn identity_values() {
        let g = GeneratorSpec::new(GeneratorName::Identity);
        let d = GridDomain::from_f64(&[0.0, 0.5, 1.0]).unwrap();
        assert_eq!(reals(&generate(&g, 1, &d).unwrap()), vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn factorial_grid() {
        let g = GeneratorSpec::new(GeneratorName::FactorialOscillator).with_real_xy(0.0, 1.0);
        let d = canonical_domain(&g, 2).unwrap();
        assert_eq!(d.len(), 5);
        assert_eq!(reals(&generate(&g, 2, &d).unwrap()), vec![0.0, 1.0, 0.0, 1.0, 0.0]);
        let thin = GridDomain::from_f64(&[0.0, 0.5, 1.0]).unwrap();
        assert!(matches!(generate(&g, 2, &thin), Err(Error::Generator(_))));
    }

    #[test]
    fn spike_values() {
        let g = GeneratorSpec::new(GeneratorName::Spike).with_real_xy(0.0, 1.0).with_tau(0.5);
        let d = canonical_domain(&g, 1).unwrap();
        assert_eq!(reals(&generate(&g, 1, &d).unwrap()), vec![1.0, 0.0, 1.0]);
        let same = GeneratorSpec::new(GeneratorName::Spike).with_real_xy(1.0, 1.0);
        assert!(generate(&same, 1, &d).is_err());
    }

    #[test]
    fn three_step_values() {
        let g = GeneratorSpec::new(GeneratorName::ThreeStep).with_real_xy(0.0, 1.0).with_alpha(-1.0);
        let d = canonical_domain(&g, 1).unwrap();
        assert_eq!(reals(&generate(&g, 1, &d).unwrap()), vec![0.0, -1.0, 1.0]);
    }

    #[test]
    fn sin_exact_at_lattice() {
        let g = GeneratorSpec::new(GeneratorName::SinJt);
        let d = canonical_domain(&g, 2).unwrap();
        assert_eq!(d.len(), 9);
        assert_eq!(reals(&generate(&g, 2, &d).unwrap()), vec![0.0, 1.0, 0.0, -1.0, 0.0, 1.0, 0.0, -1.0, 0.0]);
        let d1 = canonical_domain(&g, 1).unwrap();
        assert!(generate(&g, 2, &d1).is_err());
    }

    #[test]
    fn dirichlet_pattern() {
        let g = GeneratorSpec::new(GeneratorName::ScaledDirichlet).with_real_xy(1.0, 0.0).with_k(3).with_beta(BetaRule::Reciprocal);
        let d = canonical_domain(&g, 2).unwrap();
        assert_eq!(reals(&generate(&g, 2, &d).unwrap()), vec![0.5, 0.0, 0.5, 0.0]);
        let wrong = GeneratorSpec::new(GeneratorName::DirichletPattern).with_k(5);
        assert!(generate(&wrong, 1, &d).is_err());
    }

    #[test]
    fn spec_json_roundtrip() {
        let g = GeneratorSpec::new(GeneratorName::ScaledDirichlet).with_beta(BetaRule::TwoCluster).with_k(7).with_tau_decay(true);
        assert_eq!(GeneratorSpec::from_json(&g.to_json()).unwrap(), g);
    }
}
