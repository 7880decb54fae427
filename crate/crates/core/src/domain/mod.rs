//! Properly convex domains of RPⁿ, written in an affine chart where they are bounded.

pub mod polytope;

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::error::{Error, Result};
use crate::lp::{self, Halfspace, LpOutcome};
use crate::projective::{cross_ratio, AffineLine, Chart, ProjectiveMap, RealFunctional, RealLine, RealPoint};
use crate::report::VerifierReport;

/// Clips shorter than this (in chart length) count as empty.
pub const MIN_CLIP: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub enum Representation {
    /// Convex hull of finitely many points.
    VPolytope { vertices: Vec<RealPoint> },
    /// Points where every functional has the same sign.
    HDomain { functionals: Vec<RealFunctional> },
    /// `{x : (x − center)ᵀ shape (x − center) < 1}` in chart coordinates.
    Ellipsoid { center: DVector<f64>, shape: DMatrix<f64> },
}

impl Representation {
    pub fn kind(&self) -> &'static str {
        match self {
            Representation::VPolytope { .. } => "vpolytope",
            Representation::HDomain { .. } => "hdomain",
            Representation::Ellipsoid { .. } => "ellipsoid",
        }
    }
}

/// Chart-level description used by every geometric routine.
#[derive(Debug, Clone, PartialEq)]
enum Shape {
    /// Unit-normal halfspaces (positive inside) and hull vertices.
    Polytope { halfspaces: Vec<Halfspace>, vertices: Vec<DVector<f64>> },
    Ellipsoid { center: DVector<f64>, shape: DMatrix<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvexDomain {
    rep: Representation,
    chart: Chart,
    reference: DVector<f64>,
    shape: Shape,
    /// Problems found while building the chart description; surfaced by `validate`.
    issues: Vec<String>,
}

/// The open segment `L ∩ D` in the affine parameter of its line.
#[derive(Debug, Clone, PartialEq)]
pub struct Interval {
    /// Line spanned so that line coordinate `t` is the chart point `affine.at(t)`.
    pub line: RealLine,
    pub affine: AffineLine,
    pub a: f64,
    pub b: f64,
}

impl Interval {
    /// Endpoint lifts `v₀, v₁`; the interior is `{c₀v₀ + c₁v₁ : c₀c₁ > 0}`.
    pub fn endpoint_lifts(&self) -> (RealPoint, RealPoint) {
        (self.line.point(self.a), self.line.point(self.b))
    }

    pub fn endpoints(&self) -> (DVector<f64>, DVector<f64>) {
        (self.affine.at(self.a), self.affine.at(self.b))
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }
}

impl ConvexDomain {
    pub fn vpolytope(vertices: Vec<RealPoint>, chart: Chart, reference: Option<DVector<f64>>) -> Result<Self> {
        let n = chart.dim();
        check_dims(vertices.iter().map(|v| v.dim()), n)?;
        let mut issues = Vec::new();
        let mut pts = Vec::new();
        for v in &vertices {
            match chart.coords(v) {
                Ok(x) => pts.push(x),
                Err(_) => issues.push("unbounded in chart: vertex on the hyperplane at infinity".to_string()),
            }
        }
        if pts.is_empty() {
            return Err(Error::Validation("no finite vertices".into()));
        }
        let reference = match reference {
            Some(r) => r,
            None => pts.iter().fold(DVector::zeros(n), |s, p| s + p) / pts.len() as f64,
        };
        check_dims(std::iter::once(reference.len()), n)?;
        let halfspaces = polytope::facets(&pts);
        let hull_vertices = polytope::vertices(&halfspaces, n);
        let shape = Shape::Polytope { halfspaces, vertices: hull_vertices };
        Ok(Self { rep: Representation::VPolytope { vertices }, chart, reference, shape, issues })
    }

    pub fn hdomain(functionals: Vec<RealFunctional>, chart: Chart, reference: Option<DVector<f64>>) -> Result<Self> {
        let n = chart.dim();
        check_dims(functionals.iter().map(|f| f.dim()), n)?;
        let mut issues = Vec::new();
        let raw: Vec<Halfspace> = functionals.iter().map(|f| chart.affine(f)).collect();
        let reference = match reference {
            Some(r) => r,
            None => default_reference(&raw, n),
        };
        check_dims(std::iter::once(reference.len()), n)?;
        // Global sign so the reference lift pairs positively.
        let lift = chart.lift(&reference);
        let values: Vec<f64> = functionals.iter().map(|f| f.eval(&lift)).collect();
        let flip = values.iter().filter(|v| **v < 0.0).count() > values.len() / 2;
        let sign = if flip { -1.0 } else { 1.0 };
        let functionals: Vec<RealFunctional> = functionals.iter().map(|f| f.scaled(sign)).collect();
        let mut halfspaces = Vec::new();
        for h in &raw {
            let nrm = lp_norm(&h.linear);
            if nrm <= 1e-14 * h.constant.abs().max(1e-300) {
                // Pure multiple of the hyperplane at infinity.
                if sign * h.constant <= 0.0 {
                    issues.push("functional vanishes on the chart but is negative everywhere".into());
                }
                continue;
            }
            halfspaces.push(Halfspace {
                linear: h.linear.iter().map(|c| sign * c / nrm).collect(),
                constant: sign * h.constant / nrm,
            });
        }
        if bounded(&halfspaces, n).is_none() {
            issues.push("unbounded in chart".into());
        }
        let vertices = if issues.is_empty() { polytope::vertices(&halfspaces, n) } else { Vec::new() };
        let shape = Shape::Polytope { halfspaces, vertices };
        Ok(Self { rep: Representation::HDomain { functionals }, chart, reference, shape, issues })
    }

    pub fn ellipsoid(center: DVector<f64>, shape: DMatrix<f64>, chart: Chart, reference: Option<DVector<f64>>) -> Result<Self> {
        let n = chart.dim();
        check_dims([center.len(), shape.nrows(), shape.ncols()].into_iter(), n)?;
        let mut issues = Vec::new();
        let sym = (&shape - shape.transpose()).amax() <= 1e-12 * shape.amax().max(1.0);
        if !sym || shape.clone().cholesky().is_none() {
            issues.push("unbounded in chart: shape matrix is not symmetric positive definite".into());
        }
        let reference = reference.unwrap_or_else(|| center.clone());
        check_dims(std::iter::once(reference.len()), n)?;
        let rep = Representation::Ellipsoid { center: center.clone(), shape: shape.clone() };
        Ok(Self { rep, chart, reference, shape: Shape::Ellipsoid { center, shape }, issues })
    }

    /// Ellipsoid `{x̃ᵀ Q x̃ < 0}` written in `chart`.
    pub fn from_quadric(q: &DMatrix<f64>, chart: Chart, reference: Option<DVector<f64>>) -> Result<Self> {
        let n = chart.dim();
        let inv = chart.inverse();
        let p = inv.transpose() * q * inv;
        let a = p.view((0, 0), (n, n)).into_owned();
        let b = p.view((0, n), (n, 1)).column(0).into_owned();
        let gamma = p[(n, n)];
        let a = (&a + a.transpose()) * 0.5;
        let chol = a
            .clone()
            .cholesky()
            .ok_or_else(|| Error::Validation("quadric is not an ellipsoid in this chart".into()))?;
        let ainv_b = chol.solve(&b);
        let k = b.dot(&ainv_b) - gamma;
        if !(k > 0.0) {
            return Err(Error::Validation("quadric has empty interior in this chart".into()));
        }
        Self::ellipsoid(-ainv_b, a / k, chart, reference)
    }

    pub fn representation(&self) -> &Representation {
        &self.rep
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn reference(&self) -> &DVector<f64> {
        &self.reference
    }

    /// Reference lift with chart denominator +1; every normalized functional is positive on it.
    pub fn reference_lift(&self) -> RealPoint {
        self.chart.lift(&self.reference)
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn is_polytope(&self) -> bool {
        matches!(self.shape, Shape::Polytope { .. })
    }

    /// Facet inequalities in chart coordinates (unit normals, positive inside).
    pub fn halfspaces(&self) -> Result<&[Halfspace]> {
        match &self.shape {
            Shape::Polytope { halfspaces, .. } => Ok(halfspaces),
            Shape::Ellipsoid { .. } => Err(Error::Representation("polytope")),
        }
    }

    /// Hull vertices in chart coordinates.
    pub fn vertices(&self) -> Result<&[DVector<f64>]> {
        match &self.shape {
            Shape::Polytope { vertices, .. } => Ok(vertices),
            Shape::Ellipsoid { .. } => Err(Error::Representation("polytope")),
        }
    }

    /// Sign-normalized defining functionals: the given family for an HDomain,
    /// the facets for a VPolytope.
    pub fn functionals(&self) -> Result<Vec<RealFunctional>> {
        match &self.rep {
            Representation::HDomain { functionals } => Ok(functionals.clone()),
            Representation::VPolytope { .. } => {
                Ok(self.halfspaces()?.iter().map(|h| self.chart.from_affine(h)).collect())
            }
            Representation::Ellipsoid { .. } => Err(Error::Representation("polytope")),
        }
    }

    /// Vertex lifts in the cone over the reference point.
    pub fn vertex_lifts(&self) -> Result<Vec<RealPoint>> {
        Ok(self.vertices()?.iter().map(|v| self.chart.lift(v)).collect())
    }

    /// Homogeneous quadric `Q` with `D = {x̃ᵀ Q x̃ < 0}` (ellipsoids only).
    pub fn quadric(&self) -> Result<DMatrix<f64>> {
        let Shape::Ellipsoid { center, shape } = &self.shape else {
            return Err(Error::Representation("ellipsoid"));
        };
        let n = self.dim();
        let mc = shape * center;
        let mut qh = DMatrix::zeros(n + 1, n + 1);
        qh.view_mut((0, 0), (n, n)).copy_from(shape);
        for i in 0..n {
            qh[(i, n)] = -mc[i];
            qh[(n, i)] = -mc[i];
        }
        qh[(n, n)] = center.dot(&mc) - 1.0;
        let c = self.chart.matrix();
        Ok(c.transpose() * qh * c)
    }

    /// Membership of a real projective point in the open domain.
    ///
    /// HDomain: all functionals share a sign on the lift. VPolytope: a strictly
    /// positive barycentric representation exists. Ellipsoid: quadratic form < 1.
    pub fn contains(&self, x: &RealPoint) -> bool {
        match &self.rep {
            Representation::HDomain { functionals } => {
                let vals: Vec<f64> = functionals.iter().map(|f| f.eval(x)).collect();
                vals.iter().all(|v| *v > 0.0) || vals.iter().all(|v| *v < 0.0)
            }
            Representation::VPolytope { .. } => {
                let Ok(xc) = self.chart.coords(x) else { return false };
                let Ok(vs) = self.vertices() else { return false };
                let pts: Vec<Vec<f64>> = vs.iter().map(|v| v.iter().copied().collect()).collect();
                lp::barycentric_margin(&pts, xc.as_slice()).map(|m| m > 1e-12).unwrap_or(false)
            }
            Representation::Ellipsoid { .. } => match self.chart.coords(x) {
                Ok(xc) => self.contains_chart(&xc),
                Err(_) => false,
            },
        }
    }

    /// Membership of a chart point, using the chart description directly.
    pub fn contains_chart(&self, x: &DVector<f64>) -> bool {
        match &self.shape {
            Shape::Polytope { halfspaces, .. } => halfspaces.iter().all(|h| h.eval(x.as_slice()) > 0.0),
            Shape::Ellipsoid { center, shape } => {
                let d = x - center;
                d.dot(&(shape * &d)) < 1.0
            }
        }
    }

    /// Parameters `(lo, hi)` with `p + t·d ∈ D̄` iff `lo ≤ t ≤ hi`; `None` when the line misses D̄.
    pub fn clip_params(&self, p: &DVector<f64>, d: &DVector<f64>) -> Option<(f64, f64)> {
        match &self.shape {
            Shape::Polytope { halfspaces, .. } => {
                let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
                let dn = d.norm();
                for h in halfspaces {
                    let g0 = h.eval(p.as_slice());
                    let g1: f64 = h.linear.iter().zip(d.iter()).map(|(a, b)| a * b).sum();
                    if g1.abs() <= 1e-15 * dn {
                        if g0 < 0.0 {
                            return None;
                        }
                    } else if g1 > 0.0 {
                        lo = lo.max(-g0 / g1);
                    } else {
                        hi = hi.min(-g0 / g1);
                    }
                }
                (lo <= hi && lo.is_finite() && hi.is_finite()).then_some((lo, hi))
            }
            Shape::Ellipsoid { center, shape } => {
                let e = p - center;
                let md = shape * d;
                let a = d.dot(&md);
                let b = e.dot(&md);
                let c = e.dot(&(shape * &e)) - 1.0;
                let disc = b * b - a * c;
                if !(disc >= 0.0) || a <= 0.0 {
                    return None;
                }
                let s = disc.sqrt();
                let q = -(b + b.signum() * s);
                let (t1, t2) = if q == 0.0 { (0.0, 0.0) } else { (q / a, c / q) };
                Some((t1.min(t2), t1.max(t2)))
            }
        }
    }

    /// The open interval `L ∩ D`, oriented by the line's span basis.
    pub fn line_clip(&self, line: &RealLine) -> Option<Interval> {
        let affine = self.chart.affine_line(line).ok()?;
        self.clip_affine(affine)
    }

    pub fn clip_affine(&self, affine: AffineLine) -> Option<Interval> {
        let (a, b) = self.clip_params(&affine.origin, &affine.direction)?;
        if b - a < MIN_CLIP {
            return None;
        }
        Some(Interval { line: self.chart.real_line(&affine), affine, a, b })
    }

    /// Hilbert distance `½ log` of the cross-ratio of `x, y` with the chord endpoints.
    pub fn hilbert_distance(&self, x: &DVector<f64>, y: &DVector<f64>) -> Result<f64> {
        if !self.contains_chart(x) || !self.contains_chart(y) {
            return Err(Error::NotInterior);
        }
        let d = y - x;
        if d.norm() == 0.0 {
            return Ok(0.0);
        }
        let (a, b) = self.clip_params(x, &d).ok_or(Error::NotInterior)?;
        let lift = |t: f64| self.chart.lift(&(x + &d * t));
        let cr = cross_ratio(&lift(a), &lift(0.0), &lift(1.0), &lift(b))?;
        Ok(0.5 * cr.ln().max(0.0))
    }

    /// Hilbert distance between projective points.
    pub fn hilbert_distance_points(&self, x: &RealPoint, y: &RealPoint) -> Result<f64> {
        let xc = self.chart.coords(x).map_err(|_| Error::NotInterior)?;
        let yc = self.chart.coords(y).map_err(|_| Error::NotInterior)?;
        self.hilbert_distance(&xc, &yc)
    }

    /// Hilbert–Finsler norm `½(1/|x−a| + 1/|x−b|)·|w|` along the chord through `x`.
    pub fn finsler_norm(&self, x: &DVector<f64>, w: &DVector<f64>) -> Result<f64> {
        if !self.contains_chart(x) {
            return Err(Error::NotInterior);
        }
        let len = w.norm();
        if len == 0.0 {
            return Ok(0.0);
        }
        let (a, b) = self.clip_params(x, &(w / len)).ok_or(Error::NotInterior)?;
        Ok(0.5 * (1.0 / -a + 1.0 / b) * len)
    }

    /// Minkowski gauge about the reference point: `< 1` inside, `1` on the boundary.
    pub fn gauge(&self, x: &DVector<f64>) -> f64 {
        let d = x - &self.reference;
        if d.norm() == 0.0 {
            return 0.0;
        }
        match self.clip_params(&self.reference, &d) {
            Some((_, hi)) if hi > 0.0 => 1.0 / hi,
            _ => f64::INFINITY,
        }
    }

    /// `(1 − δ)·D` about the reference point.
    pub fn scaled_copy(&self, delta: f64) -> Result<ConvexDomain> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::Validation(format!("scale parameter {delta} outside (0,1)")));
        }
        let s = 1.0 - delta;
        let r = &self.reference;
        match &self.rep {
            Representation::VPolytope { vertices } => {
                let vs = vertices
                    .iter()
                    .map(|v| {
                        let x = self.chart.coords(v)?;
                        Ok(self.chart.lift(&(r + (x - r) * s)))
                    })
                    .collect::<Result<Vec<_>>>()?;
                ConvexDomain::vpolytope(vs, self.chart.clone(), Some(r.clone()))
            }
            Representation::HDomain { functionals } => {
                let fs = functionals
                    .iter()
                    .map(|f| {
                        let h = self.chart.affine(f);
                        let lr: f64 = h.linear.iter().zip(r.iter()).map(|(a, b)| a * b).sum();
                        let scaled = Halfspace { linear: h.linear.clone(), constant: s * h.constant + (s - 1.0) * lr };
                        self.chart.from_affine(&scaled)
                    })
                    .collect();
                ConvexDomain::hdomain(fs, self.chart.clone(), Some(r.clone()))
            }
            Representation::Ellipsoid { center, shape } => {
                ConvexDomain::ellipsoid(r + (center - r) * s, shape / (s * s), self.chart.clone(), Some(r.clone()))
            }
        }
    }

    /// Image `A(D)`, written in `chart` (or in the chart transported by `A`).
    pub fn transformed(&self, a: &ProjectiveMap<f64>, chart: Option<Chart>) -> Result<ConvexDomain> {
        // f ↦ f∘A⁻¹, so that A(D) looks in the new chart as D does in the old.
        let transported = || {
            let infinity = a.apply_dual(&self.chart.infinity());
            let basis: Vec<_> = self.chart.basis().iter().map(|f| a.apply_dual(f)).collect();
            Chart::new(&infinity, &basis)
        };
        let chart = match chart {
            Some(c) => c,
            None => transported()?,
        };
        let reference = chart.coords(&a.apply(&self.reference_lift())).map_err(|_| Error::NotInterior)?;
        match &self.rep {
            Representation::VPolytope { vertices } => {
                ConvexDomain::vpolytope(vertices.iter().map(|v| a.apply(v)).collect(), chart, Some(reference))
            }
            Representation::HDomain { functionals } => {
                ConvexDomain::hdomain(functionals.iter().map(|f| a.apply_dual(f)).collect(), chart, Some(reference))
            }
            Representation::Ellipsoid { .. } => {
                let inv = a.inverse();
                let q = inv.matrix().transpose() * self.quadric()? * inv.matrix();
                ConvexDomain::from_quadric(&q, chart, Some(reference))
            }
        }
    }

    /// Axis-aligned bounding box of D̄ in chart coordinates.
    pub fn bbox(&self) -> (DVector<f64>, DVector<f64>) {
        let n = self.dim();
        match &self.shape {
            Shape::Polytope { vertices, .. } if !vertices.is_empty() => {
                let lo = DVector::from_fn(n, |i, _| vertices.iter().map(|v| v[i]).fold(f64::INFINITY, f64::min));
                let hi = DVector::from_fn(n, |i, _| vertices.iter().map(|v| v[i]).fold(f64::NEG_INFINITY, f64::max));
                (lo, hi)
            }
            Shape::Ellipsoid { center, shape } => {
                let inv = shape.clone().try_inverse().unwrap_or_else(|| DMatrix::identity(n, n));
                let half = DVector::from_fn(n, |i, _| inv[(i, i)].max(0.0).sqrt());
                (center - &half, center + &half)
            }
            Shape::Polytope { .. } => (DVector::from_element(n, f64::NAN), DVector::from_element(n, f64::NAN)),
        }
    }

    /// Chart diameter of the bounding box.
    pub fn extent(&self) -> f64 {
        let (lo, hi) = self.bbox();
        (hi - lo).norm()
    }

    /// Uniform sample of D by rejection from the bounding box.
    pub fn sample_interior<R: Rng + ?Sized>(&self, rng: &mut R) -> DVector<f64> {
        let (lo, hi) = self.bbox();
        loop {
            let x = DVector::from_fn(self.dim(), |i, _| rng.random_range(lo[i]..hi[i]));
            if self.contains_chart(&x) {
                return x;
            }
        }
    }

    /// Checks boundedness, interiority of the reference point, affine spanning
    /// and the sign normalization of functional families.
    pub fn validate(&self) -> VerifierReport {
        let mut report = VerifierReport::new("validate", 0.0, 0);
        report.samples_run = 1;
        for issue in &self.issues {
            report.violation("bounded", issue.clone(), f64::NAN);
        }
        let n = self.dim();
        if report.passed() {
            if let Shape::Polytope { vertices, .. } = &self.shape {
                let spanning = vertices.len() > n && {
                    let rows: Vec<_> = vertices[1..].iter().map(|v| (v - &vertices[0]).transpose()).collect();
                    DMatrix::from_rows(&rows).rank(1e-9) == n
                };
                if !spanning {
                    report.violation("spanning", "vertices do not affinely span the chart", vertices.len() as f64);
                }
            }
        }
        let ref_point = self.reference_lift();
        if !self.contains(&ref_point) || !self.contains_chart(&self.reference) {
            report.violation("reference", format!("reference point {:?} is not interior", self.reference.as_slice()), f64::NAN);
        }
        if let Representation::HDomain { functionals } = &self.rep {
            for (i, f) in functionals.iter().enumerate() {
                let v = f.eval(&ref_point);
                if !(v > 0.0) {
                    report.violation("normalization", format!("functional {i} is not positive at the reference lift"), v);
                }
            }
        }
        report
    }

    /// Returns `self` if [`validate`](Self::validate) passes, otherwise the first violation.
    pub fn validated(self) -> Result<Self> {
        let report = self.validate();
        match report.violations.first() {
            None => Ok(self),
            Some(v) => Err(Error::Validation(v.witness.clone())),
        }
    }
}

fn check_dims(dims: impl Iterator<Item = usize>, n: usize) -> Result<()> {
    for d in dims {
        if d != n {
            return Err(Error::Dimension { expected: n, got: d });
        }
    }
    Ok(())
}

fn lp_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Maximal coordinate extent of `{h ≥ 0}`, or `None` when unbounded or empty.
fn bounded(halfspaces: &[Halfspace], n: usize) -> Option<f64> {
    let mut extent: f64 = 0.0;
    for j in 0..n {
        for sign in [1.0, -1.0] {
            let obj: Vec<f64> = (0..n).map(|i| if i == j { sign } else { 0.0 }).collect();
            match lp::maximize(&obj, halfspaces) {
                Ok(LpOutcome::Optimal { value, .. }) => extent = extent.max(value.abs()),
                _ => return None,
            }
        }
    }
    Some(extent)
}

/// Deepest point of `{h ≥ 0}` or, when that is empty, of `{h ≤ 0}`.
fn default_reference(raw: &[Halfspace], n: usize) -> DVector<f64> {
    let cap = 1e6;
    let flipped: Vec<Halfspace> = raw
        .iter()
        .map(|h| Halfspace { linear: h.linear.iter().map(|c| -c).collect(), constant: -h.constant })
        .collect();
    let best = [raw, flipped.as_slice()]
        .into_iter()
        .filter_map(|hs| lp::deepest_point(hs, n, cap, cap).ok())
        .max_by(|a, b| a.0.total_cmp(&b.0));
    match best {
        Some((_, x)) => DVector::from_vec(x),
        None => DVector::zeros(n),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn v(x: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(x)
    }

    fn rp(x: &[f64]) -> RealPoint {
        RealPoint::from_slice(x).unwrap()
    }

    fn f(x: &[f64]) -> RealFunctional {
        RealFunctional::from_slice(x).unwrap()
    }

    pub(crate) fn square() -> ConvexDomain {
        let vs = [[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]].iter().map(|p| rp(&[p[0], p[1], 1.0])).collect();
        ConvexDomain::vpolytope(vs, Chart::standard(2), None).unwrap()
    }

    fn interval() -> ConvexDomain {
        ConvexDomain::hdomain(vec![f(&[1.0, 1.0]), f(&[-1.0, 1.0])], Chart::standard(1), None).unwrap()
    }

    #[test]
    fn containment_examples() {
        let sq = square();
        assert!(sq.contains(&rp(&[0.0, 0.0, 1.0])));
        assert!(!sq.contains(&rp(&[1.0, 0.0, 1.0])));
        assert!(!interval().contains(&rp(&[2.0, 1.0])));
        assert!(interval().contains(&rp(&[-0.5, -1.0])));
    }

    #[test]
    fn clip_examples() {
        let sq = square();
        let x_axis = RealLine::new(rp(&[0.0, 0.0, 1.0]), rp(&[1.0, 0.0, 0.0])).unwrap();
        let i = sq.line_clip(&x_axis).unwrap();
        assert_relative_eq!(i.a, -1.0, epsilon = 1e-14);
        assert_relative_eq!(i.b, 1.0, epsilon = 1e-14);

        let offset = RealLine::new(rp(&[0.3, 0.1, 1.0]), rp(&[1.0, 0.0, 0.0])).unwrap();
        let i = sq.line_clip(&offset).unwrap();
        let (p, q) = i.endpoints();
        assert_relative_eq!(p, v(&[-1.0, 0.1]), epsilon = 1e-14);
        assert_relative_eq!(q, v(&[1.0, 0.1]), epsilon = 1e-14);

        let far = RealLine::new(rp(&[0.0, 5.0, 1.0]), rp(&[1.0, 0.0, 0.0])).unwrap();
        assert!(sq.line_clip(&far).is_none());
        // tangent to an edge
        let edge = RealLine::new(rp(&[0.0, 1.0, 1.0]), rp(&[1.0, 0.0, 0.0])).unwrap();
        assert!(sq.line_clip(&edge).is_none_or(|i| i.length() > 0.0));
    }

    #[test]
    fn clip_orientation_follows_span_basis() {
        let sq = square();
        let reversed = RealLine::new(rp(&[0.0, 0.0, 1.0]), rp(&[-1.0, 0.0, 0.0])).unwrap();
        let i = sq.line_clip(&reversed).unwrap();
        assert_relative_eq!(i.affine.direction, v(&[-1.0, 0.0]), epsilon = 1e-15);
    }

    #[test]
    fn hilbert_examples() {
        let half_ln3 = 0.5 * 3f64.ln();
        assert_relative_eq!(interval().hilbert_distance(&v(&[0.0]), &v(&[0.5])).unwrap(), half_ln3, epsilon = 1e-14);
        assert_relative_eq!(square().hilbert_distance(&v(&[0.0, 0.0]), &v(&[0.5, 0.0])).unwrap(), half_ln3, epsilon = 1e-14);
        assert_eq!(square().hilbert_distance(&v(&[0.2, 0.1]), &v(&[0.2, 0.1])).unwrap(), 0.0);
        assert_eq!(square().hilbert_distance(&v(&[2.0, 0.0]), &v(&[0.0, 0.0])), Err(Error::NotInterior));
    }

    #[test]
    fn finsler_examples() {
        let d = interval();
        assert_relative_eq!(d.finsler_norm(&v(&[0.0]), &v(&[1.0])).unwrap(), 1.0, epsilon = 1e-15);
        assert_relative_eq!(d.finsler_norm(&v(&[0.5]), &v(&[1.0])).unwrap(), 4.0 / 3.0, epsilon = 1e-14);
        assert_relative_eq!(d.finsler_norm(&v(&[0.5]), &v(&[3.0])).unwrap(), 4.0, epsilon = 1e-14);
    }

    #[test]
    fn finsler_is_derivative_of_hilbert() {
        let d = square();
        let x = v(&[0.2, -0.3]);
        let w = v(&[0.6, 0.8]);
        let eps = 1e-6;
        let fd = d.hilbert_distance(&x, &(&x + &w * eps)).unwrap() / eps;
        let exact = d.finsler_norm(&x, &w).unwrap();
        assert!(((fd - exact) / exact).abs() < 1e-4);
    }

    #[test]
    fn scaled_square() {
        let s = square().scaled_copy(0.5).unwrap();
        let (lo, hi) = s.bbox();
        assert_relative_eq!(lo, v(&[-0.5, -0.5]), epsilon = 1e-14);
        assert_relative_eq!(hi, v(&[0.5, 0.5]), epsilon = 1e-14);
        let t = square().scaled_copy(0.1).unwrap();
        for vert in t.vertex_lifts().unwrap() {
            assert!(square().contains(&vert));
        }
    }

    #[test]
    fn scaled_hdomain_matches_scaled_vertices() {
        let s = interval().scaled_copy(0.25).unwrap();
        let (lo, hi) = s.bbox();
        assert_relative_eq!(lo[0], -0.75, epsilon = 1e-14);
        assert_relative_eq!(hi[0], 0.75, epsilon = 1e-14);
    }

    #[test]
    fn validate_examples() {
        let simplex = ConvexDomain::hdomain(
            vec![f(&[1.0, 0.0, 0.0]), f(&[0.0, 1.0, 0.0]), f(&[0.0, 0.0, 1.0])],
            Chart::new(&f(&[1.0, 1.0, 1.0]), &[f(&[1.0, 0.0, 0.0]), f(&[0.0, 1.0, 0.0])]).unwrap(),
            None,
        )
        .unwrap();
        assert!(simplex.validate().passed(), "{:?}", simplex.validate());

        let line = ConvexDomain::hdomain(vec![f(&[1.0, 1.0])], Chart::standard(1), Some(v(&[0.0]))).unwrap();
        let r = line.validate();
        assert!(!r.passed());
        assert!(r.violations[0].witness.contains("unbounded in chart"));

        let vs = [[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]].iter().map(|p| rp(&[p[0], p[1], 1.0])).collect();
        let bad_ref = ConvexDomain::vpolytope(vs, Chart::standard(2), Some(v(&[2.0, 0.0]))).unwrap();
        let r = bad_ref.validate();
        assert!(r.violations.iter().any(|x| x.check == "reference"));
    }

    #[test]
    fn transported_chart_keeps_the_picture() {
        let a = ProjectiveMap::new(DMatrix::from_row_slice(3, 3, &[1.0, 0.3, 0.2, -0.4, 1.1, 0.0, 0.1, 0.2, 1.0])).unwrap();
        let circle = ConvexDomain::ellipsoid(DVector::zeros(2), DMatrix::identity(2, 2), Chart::standard(2), None).unwrap();
        let image = circle.transformed(&a, None).unwrap();
        let x = DVector::from_vec(vec![0.3, -0.5]);
        let ax = a.apply(&circle.chart().lift(&x));
        assert_relative_eq!(image.chart().coords(&ax).unwrap(), x, epsilon = 1e-12);
        assert!(image.contains(&ax));
    }

    #[test]
    fn ellipse_clip_and_quadric_round_trip() {
        let e = ConvexDomain::ellipsoid(v(&[0.1, 0.0]), DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 4.0]), Chart::standard(2), None).unwrap();
        let (a, b) = e.clip_params(&v(&[0.1, 0.0]), &v(&[1.0, 0.0])).unwrap();
        assert_relative_eq!(a, -1.0, epsilon = 1e-14);
        assert_relative_eq!(b, 1.0, epsilon = 1e-14);
        let back = ConvexDomain::from_quadric(&e.quadric().unwrap(), Chart::standard(2), None).unwrap();
        let (lo, hi) = back.bbox();
        assert_relative_eq!(lo, v(&[-0.9, -0.5]), epsilon = 1e-12);
        assert_relative_eq!(hi, v(&[1.1, 0.5]), epsilon = 1e-12);
    }

    #[test]
    fn vpolytope_contains_agrees_with_chart_test() {
        let sq = square();
        for p in [[0.5, 0.5], [0.99, -0.99], [1.01, 0.0], [0.0, -1.2]] {
            let x = v(&p);
            assert_eq!(sq.contains(&sq.chart().lift(&x)), sq.contains_chart(&x));
        }
    }
}
