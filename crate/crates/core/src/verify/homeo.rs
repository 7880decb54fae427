use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use super::{fmt_cvec, in_band, run_samples};
use crate::domain::ConvexDomain;
use crate::error::{Error, Result};
use crate::exec::{derive_seed, sample_rng, Execution};
use crate::projective::ProjectiveMap;
use crate::report::VerifierReport;
use crate::tangent::{from_tangent_chart, to_tangent_chart, TangentVector};
use crate::tube::Tube;

const ROUND_TRIP_TOL: f64 = 1e-8;
const CONJUGATION_TOL: f64 = 1e-10;
const EQUIVARIANCE_TOL: f64 = 1e-9;
const FOOT_TOL: f64 = 1e-9;

/// Largest magnitude drawn for inverse round trips; beyond it the slice point
/// sits within rounding of the boundary.
const MAX_MAGNITUDE: f64 = 5.0;

/// Checks that every element maps `D` onto itself: a permutation of the
/// vertices for polytopes, a rescaling of the quadric for ellipsoids.
pub fn validate_group(d: &ConvexDomain, elements: &[ProjectiveMap<f64>]) -> Result<()> {
    for (k, g) in elements.iter().enumerate() {
        if g.matrix().nrows() != d.dim() + 1 {
            return Err(Error::GroupValidation(format!("element {k} has the wrong size")));
        }
        if !d.contains(&g.apply(&d.reference_lift())) {
            return Err(Error::GroupValidation(format!("element {k} moves the reference point out of the domain")));
        }
        if d.is_polytope() {
            let vs = d.vertex_lifts()?;
            let mut hit = vec![false; vs.len()];
            for v in &vs {
                let gv = g.apply(v);
                match vs.iter().position(|w| w.proj_eq(&gv, 1e-9)) {
                    Some(j) if !hit[j] => hit[j] = true,
                    _ => return Err(Error::GroupValidation(format!("element {k} does not permute the vertices"))),
                }
            }
        } else {
            let q = d.quadric()?;
            let m: DMatrix<f64> = g.matrix().transpose() * &q * g.matrix();
            let lambda = m.dot(&q) / q.dot(&q);
            if (&m - &q * lambda).norm() > 1e-9 * m.norm() {
                return Err(Error::GroupValidation(format!("element {k} does not preserve the quadric")));
            }
        }
    }
    Ok(())
}

/// `g_*(v)`: the image base point, the image direction (unit, through the
/// chart differential) and the unchanged Finsler magnitude.
pub fn pushforward_tangent(tube: &Tube, g: &ProjectiveMap<f64>, v: &TangentVector) -> Result<TangentVector> {
    let chart = tube.chart();
    let n = tube.dim();
    let x = g.apply(&chart.lift(&v.base));
    let base = chart.coords(&x)?;
    if v.is_zero() {
        return Ok(TangentVector::zero(base));
    }
    let y = chart.matrix() * x.coords();
    let yv = chart.matrix() * g.apply(&chart.lift_direction(&v.direction)).coords();
    // d/dt of N(X + tV)/δ(X + tV) at t = 0.
    let dir = DVector::from_fn(n, |i, _| (yv[i] * y[n] - y[i] * yv[n]) / (y[n] * y[n]));
    Ok(TangentVector { base, direction: &dir / dir.norm(), magnitude: v.magnitude })
}

fn unit(v: &DVector<f64>) -> DVector<f64> {
    v / v.norm()
}

/// Distance between tangent vectors: base, unit direction and magnitude errors.
fn tangent_error(a: &TangentVector, b: &TangentVector) -> f64 {
    let base = (&a.base - &b.base).norm() / a.base.norm().max(1.0);
    let mag = (a.magnitude - b.magnitude).abs() / a.magnitude.max(1.0);
    let dir = if a.is_zero() && b.is_zero() { 0.0 } else { (unit(&a.direction) - unit(&b.direction)).norm() };
    base.max(mag).max(dir)
}

/// Runs the tube-to-tangent-bundle checks on samples: both round trips,
/// conjugation as negation, equivariance under `group` and agreement of the
/// foot and magnitude with the core distance.
pub fn verify_homeomorphism(
    tube: &Tube,
    n_samples: usize,
    group: &[ProjectiveMap<f64>],
    seed: u64,
    exec: Execution,
) -> Result<VerifierReport> {
    validate_group(tube.base(), group)?;
    let stream = derive_seed(seed, "homeo");
    let d = tube.base();
    Ok(run_samples("homeomorphism", ROUND_TRIP_TOL, seed, exec, n_samples, |i, r| {
        let mut rng = sample_rng(stream, i as u64);
        let zeta = tube.sample_point(&mut rng);
        if in_band(tube, &zeta) {
            r.skipped += 1;
            return;
        }
        r.samples_run += 1;
        let w = || fmt_cvec(&zeta);
        let v = match to_tangent_chart(tube, &zeta) {
            Ok(v) => v,
            Err(e) => return r.violation("to_tangent defined", format!("{} ({e})", w()), f64::NAN),
        };
        match from_tangent_chart(tube, &v) {
            Ok(back) => r.check("inverse after forward", w, (&back - &zeta).norm() / zeta.norm().max(1.0), ROUND_TRIP_TOL),
            Err(e) => r.violation("from_tangent defined", format!("{} ({e})", w()), f64::NAN),
        }

        let conj = zeta.map(|c| c.conj());
        match to_tangent_chart(tube, &conj) {
            Ok(vc) => r.check("conjugation negates", w, tangent_error(&vc, &v.negated()), CONJUGATION_TOL),
            Err(e) => r.violation("to_tangent of conjugate", format!("{} ({e})", w()), f64::NAN),
        }

        match tube.core_distance(&zeta) {
            Ok(cd) => {
                let foot = (&cd.foot - &v.base).norm() / v.base.norm().max(1.0);
                let mag = (cd.distance_via_foot - v.magnitude).abs().max((cd.distance - v.magnitude).abs()) / v.magnitude.max(1.0);
                r.check("foot and magnitude", w, foot.max(mag), FOOT_TOL);
            }
            Err(e) => r.violation("core distance defined", format!("{} ({e})", w()), f64::NAN),
        }

        for (k, g) in group.iter().enumerate() {
            let gz = tube.chart_coords(&g.apply_complex(&tube.lift(&zeta)));
            let lhs = gz.and_then(|gz| to_tangent_chart(tube, &gz));
            let rhs = pushforward_tangent(tube, g, &v);
            match (lhs, rhs) {
                (Ok(a), Ok(b)) => r.check("equivariance", || format!("{} element {k}", w()), tangent_error(&a, &b), EQUIVARIANCE_TOL),
                (a, b) => r.violation("equivariance defined", format!("{} element {k}: {a:?} {b:?}", w()), f64::NAN),
            }
        }

        // Inverse round trip from a random tangent vector.
        let base = d.sample_interior(&mut rng);
        let dir = DVector::from_fn(tube.dim(), |_, _| rng.sample::<f64, _>(StandardNormal));
        let t = TangentVector { base, direction: unit(&dir), magnitude: rng.random_range(0.0..MAX_MAGNITUDE) };
        match from_tangent_chart(tube, &t) {
            Ok(z) if in_band(tube, &z) => r.skipped += 1,
            Ok(z) => match to_tangent_chart(tube, &z) {
                Ok(back) => {
                    let err = (t.chart_vector(tube).ok(), back.chart_vector(tube).ok());
                    let vec_err = match err {
                        (Some(a), Some(b)) => (a - b).norm() / (t.magnitude.max(1.0)),
                        _ => f64::NAN,
                    };
                    let base_err = (&back.base - &t.base).norm() / t.base.norm().max(1.0);
                    r.check("forward after inverse", || format!("{} from tangent vector", fmt_cvec(&z)), vec_err.max(base_err), ROUND_TRIP_TOL);
                }
                Err(e) => r.violation("to_tangent defined", format!("{} ({e})", fmt_cvec(&z)), f64::NAN),
            },
            Err(e) => r.violation("from_tangent defined", format!("{:?} ({e})", t), f64::NAN),
        }
    }))
}
