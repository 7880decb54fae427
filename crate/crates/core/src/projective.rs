//! Homogeneous-coordinate arithmetic for RPⁿ, CPⁿ and their duals.
//!
//! Points and functionals are stored as the lift the caller supplied; the
//! scale is only normalized on request ([`HPoint::canonical`]). Keeping the
//! caller's lift means chart coordinates of exactly representable inputs stay
//! exact.

use nalgebra::{ComplexField, DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, canonical_direction, mul_real, rank2_ratio};

/// Default relative threshold for reality and projective-equality tests.
pub const REALITY_TOL: f64 = 1e-9;

/// A point of KPⁿ given by one of its lifts.
#[derive(Debug, Clone, PartialEq)]
pub struct HPoint<T: ComplexField<RealField = f64>> {
    coords: DVector<T>,
}

pub type RealPoint = HPoint<f64>;
pub type ComplexPoint = HPoint<Complex64>;

impl<T: ComplexField<RealField = f64>> HPoint<T> {
    pub fn new(coords: DVector<T>) -> Result<Self> {
        if coords.iter().all(|c| c.clone().modulus() == 0.0) {
            return Err(Error::ZeroVector);
        }
        Ok(Self { coords })
    }

    pub fn from_slice(coords: &[T]) -> Result<Self> {
        Self::new(DVector::from_column_slice(coords))
    }

    pub fn coords(&self) -> &DVector<T> {
        &self.coords
    }

    /// Projective dimension n (the lift has n+1 entries).
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    /// Unit-norm lift whose first non-negligible coordinate is real and positive.
    pub fn canonical(&self) -> DVector<T> {
        let n = self.coords.norm();
        let mut v = self.coords.map(|c| c.unscale(n));
        if let Some(first) = v.iter().find(|c| (*c).clone().modulus() > 1e-12).cloned() {
            let phase = first.clone().unscale(first.clone().modulus());
            v = v.map(|c| c / phase.clone());
        }
        v
    }

    /// Projective equality: the two lifts are linearly dependent within `tol`.
    pub fn proj_eq(&self, other: &Self, tol: f64) -> bool {
        self.coords.len() == other.coords.len() && rank2_ratio(&self.coords, &other.coords) < tol
    }
}

impl RealPoint {
    pub fn complexify(&self) -> ComplexPoint {
        ComplexPoint { coords: linalg::to_complex(&self.coords) }
    }
}

impl ComplexPoint {
    pub fn conj(&self) -> ComplexPoint {
        ComplexPoint { coords: self.coords.map(|c| c.conj()) }
    }
}

/// A hyperplane class: a nonzero dual vector acting on lifts by the bilinear pairing.
#[derive(Debug, Clone, PartialEq)]
pub struct Functional<T: ComplexField<RealField = f64>> {
    coeffs: DVector<T>,
}

pub type RealFunctional = Functional<f64>;
pub type ComplexFunctional = Functional<Complex64>;

impl<T: ComplexField<RealField = f64>> Functional<T> {
    pub fn new(coeffs: DVector<T>) -> Result<Self> {
        if coeffs.iter().all(|c| c.clone().modulus() == 0.0) {
            return Err(Error::ZeroVector);
        }
        Ok(Self { coeffs })
    }

    pub fn from_slice(coeffs: &[T]) -> Result<Self> {
        Self::new(DVector::from_column_slice(coeffs))
    }

    pub fn coeffs(&self) -> &DVector<T> {
        &self.coeffs
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, p: &HPoint<T>) -> T {
        self.coeffs.dot(&p.coords)
    }

    pub fn scaled(&self, s: T) -> Self {
        Self { coeffs: self.coeffs.map(|c| c * s.clone()) }
    }

    /// Reads the functional as a point of the dual projective space.
    pub fn as_point(&self) -> HPoint<T> {
        HPoint { coords: self.coeffs.clone() }
    }

    pub fn from_point(p: &HPoint<T>) -> Self {
        Self { coeffs: p.coords.clone() }
    }

    pub fn proj_eq(&self, other: &Self, tol: f64) -> bool {
        self.as_point().proj_eq(&other.as_point(), tol)
    }
}

impl RealFunctional {
    pub fn eval_complex(&self, z: &ComplexPoint) -> Complex64 {
        self.coeffs.iter().zip(z.coords.iter()).map(|(a, b)| b * *a).sum()
    }

    pub fn complexify(&self) -> ComplexFunctional {
        ComplexFunctional { coeffs: linalg::to_complex(&self.coeffs) }
    }
}

/// Whether `z` is a real point; returns a real representative when it is.
///
/// The lift `ũ + iṽ` is real iff `ũ` and `ṽ` are dependent; the
/// representative is the dominant direction of the pair.
pub fn as_real(z: &ComplexPoint, tol: f64) -> Option<RealPoint> {
    let a = linalg::re(&z.coords);
    let b = linalg::im(&z.coords);
    if rank2_ratio(&a, &b) >= tol {
        return None;
    }
    let aa = a.dot(&a);
    let bb = b.dot(&b);
    let ab = a.dot(&b);
    let rep = if ab.abs() <= 1e-300 {
        if aa >= bb {
            a
        } else {
            b
        }
    } else {
        let tr = aa + bb;
        let l1 = 0.5 * (tr + ((aa - bb).powi(2) + 4.0 * ab * ab).sqrt());
        let e1 = DVector::from_vec(vec![ab, l1 - aa]);
        let e2 = DVector::from_vec(vec![l1 - bb, ab]);
        let e = if e1.norm() >= e2.norm() { e1 } else { e2 };
        &a * e[0] + &b * e[1]
    };
    RealPoint::new(rep).ok()
}

pub fn is_real(z: &ComplexPoint, tol: f64) -> bool {
    as_real(z, tol).is_some()
}

/// A real projective line spanned by two independent real points.
///
/// Its line coordinate `w` names the point `ũ + w·ṽ`, over ℝ for the line
/// itself and over ℂ for its complexification.
#[derive(Debug, Clone, PartialEq)]
pub struct RealLine {
    u: RealPoint,
    v: RealPoint,
}

impl RealLine {
    pub fn new(u: RealPoint, v: RealPoint) -> Result<Self> {
        if u.coords.len() != v.coords.len() {
            return Err(Error::Dimension { expected: u.coords.len(), got: v.coords.len() });
        }
        if rank2_ratio(&u.coords, &v.coords) < REALITY_TOL {
            return Err(Error::Degenerate("line span has rank 1".into()));
        }
        Ok(Self { u, v })
    }

    pub fn u(&self) -> &RealPoint {
        &self.u
    }

    pub fn v(&self) -> &RealPoint {
        &self.v
    }

    pub fn dim(&self) -> usize {
        self.u.dim()
    }

    /// The point with line coordinate `w`.
    pub fn point<T: ComplexField<RealField = f64>>(&self, w: T) -> HPoint<T> {
        let u = self.u.coords.map(T::from_real);
        let v = self.v.coords.map(T::from_real);
        HPoint { coords: u + v * w }
    }

    /// Line coordinate of a point of the line (or of its complexification).
    ///
    /// Fails with [`Error::Collinearity`] when `p` is off the line and with
    /// [`Error::Infinity`] at `p = [ṽ]`.
    pub fn coordinate<T: ComplexField<RealField = f64>>(&self, p: &HPoint<T>) -> Result<T> {
        let u = &self.u.coords;
        let v = &self.v.coords;
        let (uu, uv, vv) = (u.dot(u), u.dot(v), v.dot(v));
        let det = uu * vv - uv * uv;
        let pu: T = p.coords.iter().zip(u.iter()).map(|(a, b)| a.clone() * T::from_real(*b)).fold(T::zero(), |s, x| s + x);
        let pv: T = p.coords.iter().zip(v.iter()).map(|(a, b)| a.clone() * T::from_real(*b)).fold(T::zero(), |s, x| s + x);
        let c0 = (pu.clone() * T::from_real(vv) - pv.clone() * T::from_real(uv)) * T::from_real(1.0 / det);
        let c1 = (pv * T::from_real(uu) - pu * T::from_real(uv)) * T::from_real(1.0 / det);
        let recon = u.map(T::from_real) * c0.clone() + v.map(T::from_real) * c1.clone();
        let resid = (&p.coords - recon).norm();
        if resid > 1e-8 * p.coords.norm() {
            return Err(Error::Collinearity);
        }
        let scale = (c0.clone().modulus_squared() + c1.clone().modulus_squared()).sqrt();
        if c0.clone().modulus() <= 1e-14 * scale {
            return Err(Error::Infinity);
        }
        Ok(c1 / c0)
    }

    /// Two independent functionals whose common kernel is this line.
    pub fn annihilating_functionals(&self) -> Vec<RealFunctional> {
        let m = DMatrix::from_rows(&[self.u.coords.transpose(), self.v.coords.transpose()]);
        linalg::nullspace(&m, 1e-12)
            .into_iter()
            .map(|c| RealFunctional { coeffs: c })
            .collect()
    }
}

/// Affine chart `RPⁿ ∖ H`: the hyperplane at infinity plus n coordinate functionals.
#[derive(Debug, Clone, PartialEq)]
pub struct Chart {
    /// Rows 0..n are the coordinate functionals, row n is the hyperplane at infinity.
    matrix: DMatrix<f64>,
    inverse: DMatrix<f64>,
}

/// A real line written affinely in a chart: `origin + t·direction`, unit direction.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineLine {
    pub origin: DVector<f64>,
    pub direction: DVector<f64>,
}

impl AffineLine {
    /// Canonical form: origin is the point nearest the chart origin, direction
    /// is a sign-canonical unit vector.
    pub fn canonical(point: &DVector<f64>, direction: &DVector<f64>) -> Self {
        let d = canonical_direction(direction);
        let origin = point - &d * point.dot(&d);
        Self { origin, direction: d }
    }

    pub fn at(&self, t: f64) -> DVector<f64> {
        &self.origin + &self.direction * t
    }
}

impl Chart {
    pub fn standard(n: usize) -> Self {
        Self { matrix: DMatrix::identity(n + 1, n + 1), inverse: DMatrix::identity(n + 1, n + 1) }
    }

    pub fn new(infinity: &RealFunctional, basis: &[RealFunctional]) -> Result<Self> {
        let n = infinity.dim();
        if basis.len() != n {
            return Err(Error::Dimension { expected: n, got: basis.len() });
        }
        let mut rows: Vec<_> = basis.iter().map(|f| f.coeffs.transpose()).collect();
        rows.push(infinity.coeffs.transpose());
        let matrix = DMatrix::from_rows(&rows);
        let inverse = matrix
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Degenerate("chart functionals are dependent".into()))?;
        let scale = matrix.norm() * inverse.norm();
        if !scale.is_finite() || scale > 1e12 {
            return Err(Error::Degenerate("chart functionals are nearly dependent".into()));
        }
        Ok(Self { matrix, inverse })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows() - 1
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn inverse(&self) -> &DMatrix<f64> {
        &self.inverse
    }

    pub fn infinity(&self) -> RealFunctional {
        RealFunctional { coeffs: self.matrix.row(self.dim()).transpose() }
    }

    pub fn basis(&self) -> Vec<RealFunctional> {
        (0..self.dim()).map(|i| RealFunctional { coeffs: self.matrix.row(i).transpose() }).collect()
    }

    pub fn is_standard(&self) -> bool {
        self.matrix == DMatrix::identity(self.dim() + 1, self.dim() + 1)
    }

    /// Chart coordinates `basis_i(x̃) / infinity(x̃)`.
    pub fn coords<T: ComplexField<RealField = f64>>(&self, p: &HPoint<T>) -> Result<DVector<T>> {
        let n = self.dim();
        if p.coords.len() != n + 1 {
            return Err(Error::Dimension { expected: n + 1, got: p.coords.len() });
        }
        let y = mul_real(&self.matrix, &p.coords);
        let last = y[n].clone();
        if last.clone().modulus() <= 1e-14 * y.norm() {
            return Err(Error::Infinity);
        }
        Ok(DVector::from_fn(n, |i, _| y[i].clone() / last.clone()))
    }

    /// The lift `C⁻¹(x, 1)` of a chart point.
    pub fn lift<T: ComplexField<RealField = f64>>(&self, x: &DVector<T>) -> HPoint<T> {
        let n = self.dim();
        let ext = DVector::from_fn(n + 1, |i, _| if i < n { x[i].clone() } else { T::one() });
        HPoint { coords: mul_real(&self.inverse, &ext) }
    }

    /// The point at infinity in direction `d`.
    pub fn lift_direction(&self, d: &DVector<f64>) -> RealPoint {
        let n = self.dim();
        let ext = DVector::from_fn(n + 1, |i, _| if i < n { d[i] } else { 0.0 });
        HPoint { coords: &self.inverse * ext }
    }

    /// A real functional written as `linear · x + constant` on chart points.
    pub fn affine(&self, f: &RealFunctional) -> crate::lp::Halfspace {
        let row = f.coeffs.transpose() * &self.inverse;
        let n = self.dim();
        crate::lp::Halfspace { linear: (0..n).map(|i| row[i]).collect(), constant: row[n] }
    }

    pub fn from_affine(&self, h: &crate::lp::Halfspace) -> RealFunctional {
        let n = self.dim();
        let row = DVector::from_fn(n + 1, |i, _| if i < n { h.linear[i] } else { h.constant });
        RealFunctional { coeffs: self.matrix.transpose() * row }
    }

    /// Affine form of a real line, oriented by increasing line coordinate at `w = 0`.
    pub fn affine_line(&self, line: &RealLine) -> Result<AffineLine> {
        let n = self.dim();
        let a = &self.matrix * &line.u.coords;
        let b = &self.matrix * &line.v.coords;
        let (an, bn) = (a[n], b[n]);
        let den = an * an + bn * bn;
        if den <= 1e-28 * (a.norm_squared() + b.norm_squared()) {
            return Err(Error::Infinity);
        }
        let q = (&a * an + &b * bn) / den;
        let dir = &a * bn - &b * an;
        let point = q.rows(0, n).into_owned();
        let dvec = dir.rows(0, n).into_owned();
        let mut line_aff = AffineLine::canonical(&point, &dvec);
        if an.abs() > 1e-14 * a.norm() {
            let tangent = (b.rows(0, n) * an - a.rows(0, n) * bn) / (an * an);
            if tangent.dot(&line_aff.direction) < 0.0 {
                line_aff.direction = -line_aff.direction;
            }
        }
        Ok(line_aff)
    }

    /// The real line of an affine line, spanned so that its line coordinate is
    /// the affine parameter `t`.
    pub fn real_line(&self, line: &AffineLine) -> RealLine {
        RealLine { u: self.lift(&line.origin), v: self.lift_direction(&line.direction) }
    }
}

/// The unique real line whose complexification contains the non-real point `z`.
///
/// The span is `Re z̃, Im z̃`; the returned basis is the canonical affine form
/// in the standard chart when the line is finite there.
pub fn real_trace_line(z: &ComplexPoint) -> Result<RealLine> {
    if is_real(z, REALITY_TOL) {
        return Err(Error::RealPoint);
    }
    let a = RealPoint::new(linalg::re(&z.coords))?;
    let b = RealPoint::new(linalg::im(&z.coords))?;
    let raw = RealLine::new(a, b)?;
    let chart = Chart::standard(z.dim());
    match chart.affine_line(&raw) {
        Ok(aff) => {
            let aff = AffineLine::canonical(&aff.origin, &aff.direction);
            Ok(chart.real_line(&aff))
        }
        Err(Error::Infinity) => Ok(raw),
        Err(e) => Err(e),
    }
}

/// Cross-ratio `((a−y)(b−x)) / ((a−x)(b−y))` of four collinear real points.
///
/// Computed from 2×2 determinants of the points in an orthonormal basis of
/// their common span, so it is independent of lift scaling and of any
/// projective reparametrization of the line.
pub fn cross_ratio(a: &RealPoint, x: &RealPoint, y: &RealPoint, b: &RealPoint) -> Result<f64> {
    let pts = [a, x, y, b];
    let dim = a.coords.len();
    if pts.iter().any(|p| p.coords.len() != dim) {
        return Err(Error::Dimension { expected: dim, got: pts.iter().map(|p| p.coords.len()).max().unwrap_or(0) });
    }
    let cols: Vec<_> = pts.iter().map(|p| p.coords.normalize()).collect();
    let m = DMatrix::from_columns(&cols);
    let svd = m.clone().svd(true, false);
    let s = &svd.singular_values;
    if s.len() > 2 && s[2] > 1e-9 * s[0] {
        return Err(Error::Collinearity);
    }
    let u = svd.u.expect("requested left singular vectors");
    let e0 = u.column(0);
    let e1 = u.column(1);
    let proj: Vec<(f64, f64)> = cols.iter().map(|c| (c.dot(&e0), c.dot(&e1))).collect();
    let det = |p: usize, q: usize| proj[p].0 * proj[q].1 - proj[p].1 * proj[q].0;
    let (ax, by) = (det(0, 1), det(3, 2));
    if ax.abs() < 1e-14 || by.abs() < 1e-14 {
        return Err(Error::Degenerate("cross-ratio denominator vanishes".into()));
    }
    Ok((det(0, 2) * det(3, 1)) / (ax * by))
}

/// An invertible (n+1)×(n+1) matrix acting on lifts.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectiveMap<T: ComplexField<RealField = f64>> {
    matrix: DMatrix<T>,
}

impl<T: ComplexField<RealField = f64>> ProjectiveMap<T> {
    pub fn new(matrix: DMatrix<T>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Dimension { expected: matrix.nrows(), got: matrix.ncols() });
        }
        let k = matrix.nrows() as i32;
        let det = matrix.clone().determinant().modulus();
        let scale = matrix.norm().powi(k);
        if !(det > 1e-13 * scale) {
            return Err(Error::Degenerate("projective map is singular".into()));
        }
        Ok(Self { matrix })
    }

    pub fn identity(n: usize) -> Self {
        Self { matrix: DMatrix::identity(n + 1, n + 1) }
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.matrix
    }

    pub fn apply(&self, p: &HPoint<T>) -> HPoint<T> {
        HPoint { coords: &self.matrix * &p.coords }
    }

    pub fn inverse(&self) -> Self {
        Self { matrix: self.matrix.clone().try_inverse().expect("checked invertible at construction") }
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self { matrix: &self.matrix * &other.matrix }
    }

    /// Action on dual vectors: `ξ ↦ A⁻ᵀ ξ`, so that pairings are preserved.
    pub fn apply_dual(&self, f: &Functional<T>) -> Functional<T> {
        let inv = self.matrix.clone().try_inverse().expect("checked invertible at construction");
        Functional { coeffs: inv.transpose() * &f.coeffs }
    }
}

impl ProjectiveMap<f64> {
    pub fn apply_complex(&self, z: &ComplexPoint) -> ComplexPoint {
        HPoint { coords: mul_real(&self.matrix, &z.coords) }
    }

    pub fn complexify(&self) -> ProjectiveMap<Complex64> {
        ProjectiveMap { matrix: self.matrix.map(Complex64::from) }
    }
}

/// Derivative of the chart expression of `a` at chart point `x`, applied to `w`.
pub fn pushforward(a: &ProjectiveMap<f64>, chart: &Chart, x: &DVector<f64>, w: &DVector<f64>) -> Result<DVector<f64>> {
    let n = chart.dim();
    let m = chart.matrix() * a.matrix() * chart.inverse();
    let ext = DVector::from_fn(n + 1, |i, _| if i < n { x[i] } else { 1.0 });
    let y = &m * &ext;
    let den = y[n];
    if den.abs() <= 1e-14 * y.norm() {
        return Err(Error::Infinity);
    }
    let top = m.view((0, 0), (n, n));
    let last = m.view((n, 0), (1, n));
    let image = y.rows(0, n) / den;
    let dl = (last * w)[0];
    Ok((top * w - image * dl) / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rp(v: &[f64]) -> RealPoint {
        RealPoint::from_slice(v).unwrap()
    }

    #[test]
    fn reality_examples() {
        let real = ComplexPoint::from_slice(&[c(1.0, 0.0), c(0.5, 0.0)]).unwrap();
        assert!(as_real(&real, REALITY_TOL).unwrap().proj_eq(&rp(&[1.0, 0.5]), 1e-12));

        let phased = ComplexPoint::from_slice(&[c(0.0, 1.0), c(0.0, 0.5)]).unwrap();
        assert!(as_real(&phased, REALITY_TOL).unwrap().proj_eq(&rp(&[1.0, 0.5]), 1e-12));

        let generic = ComplexPoint::from_slice(&[c(1.0, 0.0), c(0.0, 0.5)]).unwrap();
        assert!(as_real(&generic, REALITY_TOL).is_none());
    }

    #[test]
    fn zero_vector_rejected() {
        assert_eq!(RealPoint::from_slice(&[0.0, 0.0]), Err(Error::ZeroVector));
    }

    #[test]
    fn trace_line_of_imaginary_axis_point() {
        let z = ComplexPoint::from_slice(&[c(0.0, 0.5), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let l = real_trace_line(&z).unwrap();
        assert!(l.u().proj_eq(&rp(&[0.0, 0.0, 1.0]), 1e-12));
        assert!(l.v().proj_eq(&rp(&[1.0, 0.0, 0.0]), 1e-12));
    }

    #[test]
    fn trace_line_through_offset_point() {
        let z = ComplexPoint::from_slice(&[c(0.3, 0.4), c(0.1, 0.0), c(1.0, 0.0)]).unwrap();
        let l = real_trace_line(&z).unwrap();
        assert!(l.u().proj_eq(&rp(&[0.0, 0.1, 1.0]), 1e-12));
        assert!(l.v().proj_eq(&rp(&[1.0, 0.0, 0.0]), 1e-12));
        let w = l.coordinate(&z).unwrap();
        assert_relative_eq!(w.re, 0.3, epsilon = 1e-14);
        assert_relative_eq!(w.im, 0.4, epsilon = 1e-14);
        // z and its conjugate lie on the complexified line
        for f in l.annihilating_functionals() {
            assert!(f.eval_complex(&z).norm() < 1e-10);
            assert!(f.eval_complex(&z.conj()).norm() < 1e-10);
        }
    }

    #[test]
    fn trace_line_of_real_point_fails() {
        let z = rp(&[0.3, 0.1, 1.0]).complexify();
        assert_eq!(real_trace_line(&z), Err(Error::RealPoint));
    }

    #[test]
    fn cross_ratio_examples() {
        let pt = |t: f64| rp(&[t, 1.0]);
        let cr = cross_ratio(&pt(-1.0), &pt(0.0), &pt(0.5), &pt(1.0)).unwrap();
        assert_relative_eq!(cr, 3.0, epsilon = 1e-14);
        let one = cross_ratio(&pt(-1.0), &pt(0.2), &pt(0.2), &pt(1.0)).unwrap();
        assert_relative_eq!(one, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn cross_ratio_rejects_non_collinear() {
        let r = cross_ratio(&rp(&[0.0, 0.0, 1.0]), &rp(&[1.0, 0.0, 1.0]), &rp(&[0.0, 1.0, 1.0]), &rp(&[1.0, 1.0, 1.0]));
        assert_eq!(r, Err(Error::Collinearity));
    }

    #[test]
    fn cross_ratio_rejects_coincident_endpoint() {
        let pt = |t: f64| rp(&[t, 1.0]);
        assert!(matches!(cross_ratio(&pt(0.0), &pt(0.0), &pt(0.5), &pt(1.0)), Err(Error::Degenerate(_))));
    }

    #[test]
    fn diagonal_map_and_pushforward() {
        let a = ProjectiveMap::new(DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 0.5])).unwrap();
        let chart = Chart::standard(1);
        let img = chart.coords(&a.apply(&rp(&[1.0, 1.0]))).unwrap();
        assert_relative_eq!(img[0], 4.0);
        let pf = pushforward(&a, &chart, &DVector::from_vec(vec![1.0]), &DVector::from_vec(vec![1.0])).unwrap();
        assert_relative_eq!(pf[0], 4.0, epsilon = 1e-14);

        let scaled = ProjectiveMap::new(a.matrix() * 7.0).unwrap();
        let pf7 = pushforward(&scaled, &chart, &DVector::from_vec(vec![1.0]), &DVector::from_vec(vec![1.0])).unwrap();
        assert_relative_eq!(pf7[0], 4.0, epsilon = 1e-14);
        assert!(scaled.apply(&rp(&[0.3, 1.0])).proj_eq(&a.apply(&rp(&[0.3, 1.0])), 1e-12));
    }

    #[test]
    fn identity_pushforward() {
        let chart = Chart::standard(2);
        let id = ProjectiveMap::<f64>::identity(2);
        let w = DVector::from_vec(vec![0.3, -0.2]);
        let x = DVector::from_vec(vec![0.1, 0.4]);
        assert_relative_eq!(pushforward(&id, &chart, &x, &w).unwrap(), w, epsilon = 1e-15);
    }

    #[test]
    fn pushforward_matches_finite_difference() {
        let a = ProjectiveMap::new(DMatrix::from_row_slice(3, 3, &[1.0, 0.2, 0.1, -0.3, 1.1, 0.0, 0.05, 0.1, 1.0])).unwrap();
        let chart = Chart::standard(2);
        let x = DVector::from_vec(vec![0.2, -0.1]);
        let w = DVector::from_vec(vec![0.7, 0.4]);
        let f = |p: &DVector<f64>| chart.coords(&a.apply(&chart.lift(p))).unwrap();
        let h = 1e-6;
        let fd = (f(&(&x + &w * h)) - f(&(&x - &w * h))) / (2.0 * h);
        let pf = pushforward(&a, &chart, &x, &w).unwrap();
        assert_relative_eq!(pf, fd, epsilon = 1e-8);
    }

    #[test]
    fn pushforward_at_infinity_errors() {
        let a = ProjectiveMap::new(DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0])).unwrap();
        let r = pushforward(&a, &Chart::standard(1), &DVector::from_vec(vec![0.0]), &DVector::from_vec(vec![1.0]));
        assert_eq!(r, Err(Error::Infinity));
    }

    #[test]
    fn line_chart_round_trip() {
        let l = RealLine::new(rp(&[0.0, 0.1, 1.0]), rp(&[1.0, 0.0, 0.0])).unwrap();
        let p = rp(&[0.7, 0.1, 1.0]);
        assert_relative_eq!(l.coordinate(&p).unwrap(), 0.7, epsilon = 1e-14);
        for w in [c(0.3, 0.4), c(-2.0, 0.01), c(5.0, -3.0)] {
            let back = l.coordinate(&l.point(w)).unwrap();
            assert!((back - w).norm() < 1e-14 * (1.0 + w.norm()));
            // conjugation on the line is coordinate conjugation
            let cb = l.coordinate(&l.point(w).conj()).unwrap();
            assert!((cb - w.conj()).norm() < 1e-14 * (1.0 + w.norm()));
        }
    }

    #[test]
    fn chart_affine_round_trip() {
        let inf = RealFunctional::from_slice(&[1.0, 1.0]).unwrap();
        let basis = [RealFunctional::from_slice(&[1.0, -1.0]).unwrap()];
        let chart = Chart::new(&inf, &basis).unwrap();
        let p = rp(&[3.0, 1.0]);
        assert_relative_eq!(chart.coords(&p).unwrap()[0], 0.5);
        let f = RealFunctional::from_slice(&[1.0, 0.0]).unwrap();
        let h = chart.affine(&f);
        let back = chart.from_affine(&h);
        assert!(back.proj_eq(&f, 1e-12));
    }
}
