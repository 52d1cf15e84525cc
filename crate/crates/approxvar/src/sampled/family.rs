use serde_json::{json, Value};

use super::generators::{canonical_domain, generate, GeneratorSpec};
use super::grid::GridDomain;
use super::{SampledFunction, FORMAT_VERSION};
use crate::error::{Error, Result};
use crate::spaces::DEFAULT_TOL;

/// Indexed family on a shared grid and space.
#[derive(Clone, Debug, PartialEq)]
pub enum FunctionFamily {
    Explicit(Vec<SampledFunction>),
    Generated { spec: GeneratorSpec, j_lo: usize, j_hi: usize, domain: GridDomain },
}

impl FunctionFamily {
    pub fn explicit(members: Vec<SampledFunction>) -> Result<Self> {
        if let Some(first) = members.first() {
            for (i, m) in members.iter().enumerate() {
                if m.space != first.space || !m.domain.same_points(&first.domain, DEFAULT_TOL) {
                    return Err(Error::Shape(format!("member {} does not share the grid and space of member 1", i + 1)));
                }
            }
        }
        Ok(FunctionFamily::Explicit(members))
    }

    /// Generated family `j_lo..=j_hi` on the union of the canonical grids.
    pub fn generated(spec: GeneratorSpec, j_lo: usize, j_hi: usize) -> Result<Self> {
        if j_lo == 0 || j_hi < j_lo {
            return Err(Error::Domain(format!("bad index range {j_lo}..={j_hi}")));
        }
        let grids = (j_lo..=j_hi).map(|j| canonical_domain(&spec, j)).collect::<Result<Vec<_>>>()?;
        let domain = if grids.iter().all(|g| g == &grids[0]) { grids[0].clone() } else { GridDomain::union(&grids, DEFAULT_TOL)? };
        Ok(FunctionFamily::Generated { spec, j_lo, j_hi, domain })
    }

    pub fn len(&self) -> usize {
        match self {
            FunctionFamily::Explicit(m) => m.len(),
            FunctionFamily::Generated { j_lo, j_hi, .. } => j_hi + 1 - j_lo,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Family indices (`j` values), 1-based for explicit families.
    pub fn indices(&self) -> Vec<usize> {
        match self {
            FunctionFamily::Explicit(m) => (1..=m.len()).collect(),
            FunctionFamily::Generated { j_lo, j_hi, .. } => (*j_lo..=*j_hi).collect(),
        }
    }

    pub fn members(&self) -> Result<Vec<SampledFunction>> {
        match self {
            FunctionFamily::Explicit(m) => Ok(m.clone()),
            FunctionFamily::Generated { spec, j_lo, j_hi, domain } => (*j_lo..=*j_hi).map(|j| generate(spec, j, domain)).collect(),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            FunctionFamily::Explicit(m) => json!({
                "format_version": FORMAT_VERSION,
                "members": m.iter().map(|f| f.to_json()).collect::<Vec<_>>(),
            }),
            FunctionFamily::Generated { spec, j_lo, j_hi, domain } => json!({
                "format_version": FORMAT_VERSION,
                "generator": spec.to_json(),
                "j_range": [j_lo, j_hi],
                "domain": domain.to_json_object(),
            }),
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        if let Some(ms) = v.get("members") {
            let arr = ms.as_array().ok_or_else(|| Error::Parse("`members` must be an array".into()))?;
            let members = arr
                .iter()
                .enumerate()
                .map(|(i, m)| SampledFunction::from_json(m).map_err(|e| Error::Parse(format!("members[{i}]: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            return FunctionFamily::explicit(members);
        }
        let g = v.get("generator").ok_or_else(|| Error::Parse("family needs `members` or `generator`".into()))?;
        let spec = GeneratorSpec::from_json(g)?;
        let range = v
            .get("j_range")
            .and_then(|r| r.as_array())
            .filter(|r| r.len() == 2)
            .and_then(|r| Some((r[0].as_u64()? as usize, r[1].as_u64()? as usize)))
            .ok_or_else(|| Error::Parse("field `j_range` must be [lo, hi]".into()))?;
        let fam = FunctionFamily::generated(spec, range.0, range.1)?;
        match (fam, v.get("domain")) {
            (FunctionFamily::Generated { spec, j_lo, j_hi, .. }, Some(d)) if !d.is_null() => {
                let domain = GridDomain::from_json_parts(d, None)?;
                Ok(FunctionFamily::Generated { spec, j_lo, j_hi, domain })
            }
            (fam, _) => Ok(fam),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampled::{GeneratorName, GeneratorSpec};

    #[test]
    fn sin_family_shares_union_grid() {
        let fam = FunctionFamily::generated(GeneratorSpec::new(GeneratorName::SinJt), 1, 3).unwrap();
        let ms = fam.members().unwrap();
        assert_eq!(ms.len(), 3);
        assert!(ms.iter().all(|m| m.len() == ms[0].len()));
        let back = FunctionFamily::from_json(&fam.to_json()).unwrap();
        assert_eq!(back, fam);
    }

    #[test]
    fn explicit_requires_shared_grid() {
        let a = SampledFunction::real(&[0.0, 1.0], &[0.0, 1.0]).unwrap();
        let b = SampledFunction::real(&[0.0, 2.0], &[0.0, 1.0]).unwrap();
        assert!(FunctionFamily::explicit(vec![a.clone(), b]).is_err());
        let fam = FunctionFamily::explicit(vec![a.clone(), a]).unwrap();
        assert_eq!(FunctionFamily::from_json(&fam.to_json()).unwrap(), fam);
    }
}
