//! Standard domains used by tests, benches and the command line.

use nalgebra::{DMatrix, DVector};

use crate::domain::ConvexDomain;
use crate::projective::{Chart, RealFunctional, RealPoint};

fn f(c: &[f64]) -> RealFunctional {
    RealFunctional::from_slice(c).expect("nonzero functional")
}

fn p(c: &[f64]) -> RealPoint {
    RealPoint::from_slice(c).expect("nonzero point")
}

/// `(−1, 1) ⊂ RP¹` as the functional pair `1 ± t`.
pub fn interval() -> ConvexDomain {
    ConvexDomain::hdomain(vec![f(&[1.0, 1.0]), f(&[-1.0, 1.0])], Chart::standard(1), None).expect("interval")
}

/// The square `(−1, 1)²` by its vertices.
pub fn square() -> ConvexDomain {
    let vs = [[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]].iter().map(|v| p(&[v[0], v[1], 1.0])).collect();
    ConvexDomain::vpolytope(vs, Chart::standard(2), None).expect("square")
}

/// The square `(−1, 1)²` by its four edge functionals.
pub fn square_h() -> ConvexDomain {
    let fs = vec![f(&[-1.0, 0.0, 1.0]), f(&[1.0, 0.0, 1.0]), f(&[0.0, -1.0, 1.0]), f(&[0.0, 1.0, 1.0])];
    ConvexDomain::hdomain(fs, Chart::standard(2), None).expect("square")
}

/// The triangle `x > 0, y > 0, x + y < 1` by its edge functionals.
pub fn triangle_h() -> ConvexDomain {
    let fs = vec![f(&[1.0, 0.0, 0.0]), f(&[0.0, 1.0, 0.0]), f(&[-1.0, -1.0, 1.0])];
    ConvexDomain::hdomain(fs, Chart::standard(2), None).expect("triangle")
}

/// The triangle `x > 0, y > 0, x + y < 1` by its vertices.
pub fn triangle() -> ConvexDomain {
    let vs = vec![p(&[0.0, 0.0, 1.0]), p(&[1.0, 0.0, 1.0]), p(&[0.0, 1.0, 1.0])];
    ConvexDomain::vpolytope(vs, Chart::standard(2), None).expect("triangle")
}

/// The coordinate simplex `{[x₀:x₁:x₂] : xᵢ > 0}` in the chart `x₀ + x₁ + x₂ = 1`.
///
/// Positive diagonal matrices preserve it.
pub fn simplex() -> ConvexDomain {
    let chart = Chart::new(&f(&[1.0, 1.0, 1.0]), &[f(&[1.0, 0.0, 0.0]), f(&[0.0, 1.0, 0.0])]).expect("chart");
    ConvexDomain::vpolytope(vec![p(&[1.0, 0.0, 0.0]), p(&[0.0, 1.0, 0.0]), p(&[0.0, 0.0, 1.0])], chart, None).expect("simplex")
}

/// The ellipse `x² + 4y² < 1`.
pub fn ellipse() -> ConvexDomain {
    ConvexDomain::ellipsoid(DVector::zeros(2), DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 4.0]), Chart::standard(2), None)
        .expect("ellipse")
}

/// The unit disk.
pub fn disk() -> ConvexDomain {
    ConvexDomain::ellipsoid(DVector::zeros(2), DMatrix::identity(2, 2), Chart::standard(2), None).expect("disk")
}
