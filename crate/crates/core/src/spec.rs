//! The domain-spec text format (TOML).
//!
//! ```toml
//! name = "square"
//! dimension = 2
//! type = "vpolytope"          # interval | vpolytope | hdomain | ellipsoid
//! vertices = [[1, 1], [-1, 1], [-1, -1], [1, -1]]
//! reference_point = [0, 0]    # optional, chart coordinates
//!
//! [chart]                     # optional, default standard
//! infinity = [0, 0, 1]
//! basis = [[1, 0, 0], [0, 1, 0]]
//! ```
//!
//! Vertices may be chart points (`n` entries) or homogeneous lifts (`n + 1`).
//! Functionals are homogeneous. An interval gives `endpoints = [a, b]` in the
//! chart of `RP¹`; an ellipsoid gives `center` and `shape` with
//! `(x − c)ᵀ S (x − c) < 1`. Optional `generators` are `(n+1)×(n+1)` matrices
//! and `puncture` removes a closed disk from the slice of an interval tube.

use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::complexify::ConvexRPManifold;
use crate::domain::{ConvexDomain, Representation};
use crate::error::{Error, Result};
use crate::lp::Halfspace;
use crate::projective::{Chart, ProjectiveMap, RealFunctional, RealPoint};
use crate::tube::Tube;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DomainType {
    Interval,
    Vpolytope,
    Hdomain,
    Ellipsoid,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartSpec {
    pub infinity: Vec<f64>,
    pub basis: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSpec {
    pub name: String,
    pub dimension: usize,
    #[serde(rename = "type")]
    pub kind: DomainType,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub endpoints: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub functionals: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shape: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_point: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<Vec<Vec<f64>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub puncture: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chart: Option<ChartSpec>,
}

fn spec_err(msg: impl Into<String>) -> Error {
    Error::Spec(msg.into())
}

fn need<'a, T>(field: &'a Option<T>, key: &str, kind: &str) -> Result<&'a T> {
    field.as_ref().ok_or_else(|| spec_err(format!("type {kind} needs `{key}`")))
}

fn check_len(v: &[f64], n: usize, what: &str) -> Result<()> {
    if v.len() != n {
        return Err(spec_err(format!("{what} has {} entries, expected {n}", v.len())));
    }
    Ok(())
}

fn matrix(rows: &[Vec<f64>], n: usize, what: &str) -> Result<DMatrix<f64>> {
    if rows.len() != n {
        return Err(spec_err(format!("{what} has {} rows, expected {n}", rows.len())));
    }
    for r in rows {
        check_len(r, n, what)?;
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

fn functional(c: &[f64], n: usize, what: &str) -> Result<RealFunctional> {
    check_len(c, n + 1, what)?;
    RealFunctional::from_slice(c).map_err(|e| spec_err(format!("{what}: {e}")))
}

fn rows_of(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

impl DomainSpec {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| spec_err(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| spec_err(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("domain specs serialize")
    }

    pub fn chart(&self) -> Result<Chart> {
        let n = self.dimension;
        match &self.chart {
            None => Ok(Chart::standard(n)),
            Some(c) => {
                if c.basis.len() != n {
                    return Err(spec_err(format!("chart basis has {} rows, expected {n}", c.basis.len())));
                }
                let infinity = functional(&c.infinity, n, "chart infinity")?;
                let basis = c.basis.iter().map(|b| functional(b, n, "chart basis row")).collect::<Result<Vec<_>>>()?;
                Chart::new(&infinity, &basis)
            }
        }
    }

    /// The described domain, after [`ConvexDomain::validate`].
    pub fn to_domain(&self) -> Result<ConvexDomain> {
        let n = self.dimension;
        if n == 0 {
            return Err(spec_err("dimension must be positive"));
        }
        let chart = self.chart()?;
        let reference = match &self.reference_point {
            Some(r) => {
                check_len(r, n, "reference_point")?;
                Some(DVector::from_column_slice(r))
            }
            None => None,
        };
        let domain = match self.kind {
            DomainType::Interval => {
                if n != 1 {
                    return Err(spec_err("type interval needs dimension 1"));
                }
                let e = need(&self.endpoints, "endpoints", "interval")?;
                check_len(e, 2, "endpoints")?;
                let (a, b) = (e[0].min(e[1]), e[0].max(e[1]));
                // t − a > 0 and b − t > 0 in the chart coordinate.
                let fs = [Halfspace { linear: vec![1.0], constant: -a }, Halfspace { linear: vec![-1.0], constant: b }];
                ConvexDomain::hdomain(fs.iter().map(|h| chart.from_affine(h)).collect(), chart.clone(), reference)?
            }
            DomainType::Vpolytope => {
                let vs = need(&self.vertices, "vertices", "vpolytope")?;
                let lifts = vs
                    .iter()
                    .map(|v| {
                        if v.len() == n {
                            Ok(chart.lift(&DVector::from_column_slice(v)))
                        } else {
                            check_len(v, n + 1, "vertex")?;
                            RealPoint::from_slice(v).map_err(|e| spec_err(format!("vertex: {e}")))
                        }
                    })
                    .collect::<Result<Vec<_>>>()?;
                ConvexDomain::vpolytope(lifts, chart, reference)?
            }
            DomainType::Hdomain => {
                let fs = need(&self.functionals, "functionals", "hdomain")?;
                let fs = fs.iter().map(|f| functional(f, n, "functional")).collect::<Result<Vec<_>>>()?;
                ConvexDomain::hdomain(fs, chart, reference)?
            }
            DomainType::Ellipsoid => {
                let c = need(&self.center, "center", "ellipsoid")?;
                check_len(c, n, "center")?;
                let s = matrix(need(&self.shape, "shape", "ellipsoid")?, n, "shape")?;
                ConvexDomain::ellipsoid(DVector::from_column_slice(c), s, chart, reference)?
            }
        };
        domain.validated()
    }

    pub fn generators(&self) -> Result<Vec<ProjectiveMap<f64>>> {
        let n = self.dimension + 1;
        self.generators.iter().flatten().map(|g| ProjectiveMap::new(matrix(g, n, "generator")?)).collect()
    }

    pub fn tube(&self) -> Result<Tube> {
        let d = self.to_domain()?;
        match self.puncture {
            Some(r) => Tube::punctured(d, r),
            None => Tube::new(d),
        }
    }

    pub fn manifold(&self) -> Result<ConvexRPManifold> {
        if self.generators.is_none() {
            return Err(spec_err("the domain file lists no generators"));
        }
        ConvexRPManifold::new(self.to_domain()?, self.generators()?)
    }

    /// A spec describing `d` in its own chart. Vertices are written as lifts.
    pub fn from_domain(name: impl Into<String>, d: &ConvexDomain) -> Self {
        let chart = d.chart();
        let chart_spec = (!chart.is_standard()).then(|| ChartSpec {
            infinity: chart.infinity().coeffs().iter().copied().collect(),
            basis: chart.basis().iter().map(|f| f.coeffs().iter().copied().collect()).collect(),
        });
        let mut spec = DomainSpec {
            name: name.into(),
            dimension: d.dim(),
            kind: DomainType::Hdomain,
            endpoints: None,
            vertices: None,
            functionals: None,
            center: None,
            shape: None,
            reference_point: Some(d.reference().iter().copied().collect()),
            generators: None,
            puncture: None,
            chart: chart_spec,
        };
        match d.representation() {
            Representation::VPolytope { vertices } => {
                spec.kind = DomainType::Vpolytope;
                spec.vertices = Some(vertices.iter().map(|v| v.canonical().iter().copied().collect()).collect());
            }
            Representation::HDomain { functionals } => {
                spec.functionals = Some(functionals.iter().map(|f| f.coeffs().iter().copied().collect()).collect());
            }
            Representation::Ellipsoid { center, shape } => {
                spec.kind = DomainType::Ellipsoid;
                spec.center = Some(center.iter().copied().collect());
                spec.shape = Some(rows_of(shape));
            }
        }
        spec
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::duality::dual_domain;

    const SQUARE: &str = r#"
name = "square"
dimension = 2
type = "vpolytope"
vertices = [[1, 1], [-1, 1], [-1, -1], [1, -1]]
"#;

    #[test]
    fn parses_square() {
        let s = DomainSpec::parse(SQUARE).unwrap();
        let d = s.to_domain().unwrap();
        assert!(d.is_polytope());
        assert_eq!(d.vertex_lifts().unwrap().len(), 4);
        assert!(d.contains_chart(&DVector::from_vec(vec![0.9, -0.9])));
    }

    #[test]
    fn rejects_unknown_keys() {
        let text = format!("{SQUARE}colour = \"red\"\n");
        assert!(matches!(DomainSpec::parse(&text), Err(Error::Spec(m)) if m.contains("colour")));
    }

    #[test]
    fn unbounded_is_reported() {
        let text = "name = \"wedge\"\ndimension = 2\ntype = \"hdomain\"\nfunctionals = [[1, 0, 0], [0, 1, 0]]\n";
        let err = DomainSpec::parse(text).unwrap().to_domain().unwrap_err();
        assert!(err.to_string().contains("unbounded in chart"), "{err}");
    }

    #[test]
    fn interval_and_ellipse() {
        let i = DomainSpec::parse("name = \"i\"\ndimension = 1\ntype = \"interval\"\nendpoints = [-1, 1]\n").unwrap();
        let d = i.to_domain().unwrap();
        assert!(d.contains_chart(&DVector::from_element(1, 0.99)));
        assert!(!d.contains_chart(&DVector::from_element(1, 1.01)));
        let e = DomainSpec::parse("name = \"e\"\ndimension = 2\ntype = \"ellipsoid\"\ncenter = [0, 0]\nshape = [[1, 0], [0, 4]]\n").unwrap();
        let d = e.to_domain().unwrap();
        assert!(d.contains_chart(&DVector::from_vec(vec![0.0, 0.49])));
        assert!(!d.contains_chart(&DVector::from_vec(vec![0.0, 0.51])));
        assert!(matches!(
            DomainSpec::parse("name = \"e\"\ndimension = 2\ntype = \"ellipsoid\"\ncenter = [0, 0]\n").unwrap().to_domain(),
            Err(Error::Spec(_))
        ));
    }

    #[test]
    fn dual_written_and_reread() {
        let d = DomainSpec::parse(SQUARE).unwrap().to_domain().unwrap();
        let dual = dual_domain(&d).unwrap();
        let text = DomainSpec::from_domain("square-dual", &dual).to_toml();
        let back = DomainSpec::parse(&text).unwrap().to_domain().unwrap();
        let dd = dual_domain(&back).unwrap();
        let Representation::VPolytope { vertices } = dd.representation() else { panic!("{text}") };
        assert_eq!(vertices.len(), 4);
        for v in d.vertex_lifts().unwrap() {
            assert!(vertices.iter().any(|w| w.proj_eq(&v, 1e-12)));
        }
    }

    #[test]
    fn generators_and_puncture() {
        let text = "name = \"h\"\ndimension = 1\ntype = \"hdomain\"\nfunctionals = [[1, 0], [0, 1]]\ngenerators = [[[2, 0], [0, 0.5]]]\n\n[chart]\ninfinity = [1, 1]\nbasis = [[1, -1]]\n";
        let m = DomainSpec::parse(text).unwrap().manifold().unwrap();
        assert_eq!(m.generators().len(), 1);
        let p = DomainSpec::parse("name = \"p\"\ndimension = 1\ntype = \"interval\"\nendpoints = [-1, 1]\npuncture = 0.3\n").unwrap();
        assert_eq!(p.tube().unwrap().puncture(), Some(0.3));
    }
}
