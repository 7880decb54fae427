//! Brute-force facet and vertex enumeration for small dimensions.
//!
//! Both directions test every n-subset, which is fine for the handful of
//! vertices and facets desk-scale domains have.

use itertools::Itertools;
use nalgebra::{DMatrix, DVector};

use crate::linalg::nullspace;
use crate::lp::Halfspace;

/// Relative slack for "on the correct side" tests.
const SIDE_TOL: f64 = 1e-9;

fn normalized(linear: DVector<f64>, constant: f64) -> Option<Halfspace> {
    let n = linear.norm();
    if n == 0.0 || !n.is_finite() {
        return None;
    }
    Some(Halfspace { linear: (linear / n).iter().copied().collect(), constant: constant / n })
}

fn same_halfspace(a: &Halfspace, b: &Halfspace, scale: f64) -> bool {
    let dl: f64 = a.linear.iter().zip(&b.linear).map(|(x, y)| (x - y).abs()).sum();
    dl < 1e-9 && (a.constant - b.constant).abs() < 1e-9 * scale.max(1.0)
}

/// Facet halfspaces (unit normals, nonnegative on the hull) of the convex hull of `points`.
pub fn facets(points: &[DVector<f64>]) -> Vec<Halfspace> {
    let Some(first) = points.first() else { return Vec::new() };
    let n = first.len();
    let scale = points.iter().map(|p| p.amax()).fold(0.0, f64::max);
    let mut out: Vec<Halfspace> = Vec::new();
    for combo in (0..points.len()).combinations(n) {
        let p0 = &points[combo[0]];
        let normal = if n == 1 {
            DVector::from_element(1, 1.0)
        } else {
            let rows: Vec<_> = combo[1..].iter().map(|&k| (&points[k] - p0).transpose()).collect();
            let m = DMatrix::from_rows(&rows);
            let ns = nullspace(&m, 1e-10);
            if ns.len() != 1 {
                continue;
            }
            ns.into_iter().next().unwrap()
        };
        let c = -normal.dot(p0);
        let values: Vec<f64> = points.iter().map(|p| normal.dot(p) + c).collect();
        let tol = SIDE_TOL * scale.max(1.0);
        let h = if values.iter().all(|v| *v >= -tol) {
            normalized(normal, c)
        } else if values.iter().all(|v| *v <= tol) {
            normalized(-normal, -c)
        } else {
            None
        };
        let Some(h) = h else { continue };
        if values.iter().all(|v| v.abs() <= tol) {
            continue;
        }
        if !out.iter().any(|o| same_halfspace(o, &h, scale)) {
            out.push(h);
        }
    }
    out
}

/// Vertices of `{x : h(x) ≥ 0 for all h}`, assuming it is bounded.
pub fn vertices(halfspaces: &[Halfspace], dim: usize) -> Vec<DVector<f64>> {
    let mut out: Vec<DVector<f64>> = Vec::new();
    for combo in (0..halfspaces.len()).combinations(dim) {
        let a = DMatrix::from_fn(dim, dim, |i, j| halfspaces[combo[i]].linear[j]);
        let rhs = DVector::from_fn(dim, |i, _| -halfspaces[combo[i]].constant);
        let Some(x) = a.clone().lu().solve(&rhs) else { continue };
        if !x.iter().all(|v| v.is_finite()) {
            continue;
        }
        let det = a.determinant().abs();
        if det < 1e-12 {
            continue;
        }
        let scale = x.amax().max(1.0);
        if halfspaces.iter().all(|h| h.eval(x.as_slice()) >= -SIDE_TOL * scale)
            && !out.iter().any(|v| (v - &x).amax() < 1e-9 * scale)
        {
            out.push(x);
        }
    }
    out
}
