use num_complex::Complex64;
use rand::Rng;

use super::{fmt_cvec, fmt_rvec, in_band, run_samples};
use crate::domain::ConvexDomain;
use crate::error::Result;
use crate::exec::{derive_seed, sample_rng, Execution};
use crate::report::VerifierReport;
use crate::tube::{poincare_disk, Tube};

const DISTANCE_TOL: f64 = 1e-10;
const PHI_TOL: f64 = 1e-9;

/// Compares the Hilbert distance with the slice Poincaré distance on real
/// pairs, the slice distance under two normalizations on same-slice pairs,
/// and `u` with `2·arctan(tanh d)` where `d` is measured to the geodesic foot.
pub fn verify_metric_consistency(d: &ConvexDomain, n_pairs: usize, seed: u64, exec: Execution) -> Result<VerifierReport> {
    let tube = Tube::new(d.clone())?;

    let s1 = derive_seed(seed, "metric-real");
    let real = run_samples("hilbert = slice poincare", DISTANCE_TOL, seed, exec, n_pairs, |i, r| {
        let mut rng = sample_rng(s1, i as u64);
        let x = d.sample_interior(&mut rng);
        let y = d.sample_interior(&mut rng);
        r.samples_run += 1;
        match (d.hilbert_distance(&x, &y), tube.slice_poincare(&x, &y)) {
            (Ok(h), Ok(k)) => r.check("hilbert = slice poincare", || format!("{} | {}", fmt_rvec(&x), fmt_rvec(&y)), (h - k).abs(), DISTANCE_TOL),
            (h, k) => r.violation("both routes defined", format!("{} | {}: {h:?} {k:?}", fmt_rvec(&x), fmt_rvec(&y)), f64::NAN),
        }
    });

    let s2 = derive_seed(seed, "metric-slice");
    let slice = run_samples("slice normalizations agree", DISTANCE_TOL, seed, exec, n_pairs, |i, r| {
        let mut rng = sample_rng(s2, i as u64);
        let zeta = tube.sample_point(&mut rng);
        if in_band(&tube, &zeta) {
            r.skipped += 1;
            return;
        }
        let z = tube.lift(&zeta);
        let Ok(disk) = tube.slice_disk(&z).or_else(|_| {
            // A real sample has no trace line of its own; use the line in a random direction.
            let x = crate::linalg::re(&zeta);
            let dir = nalgebra::DVector::from_fn(d.dim(), |_, _| rng.random::<f64>() - 0.5);
            let line = crate::projective::RealLine::new(d.chart().lift(&x), d.chart().lift_direction(&dir))?;
            tube.slice_of_line(&line)
        }) else {
            r.skipped += 1;
            return;
        };
        r.samples_run += 1;
        let Ok(w1) = disk.coordinate(&z) else {
            r.violation("point on its slice", fmt_cvec(&zeta), f64::NAN);
            return;
        };
        // Second point: a random point of the normalized disk, real a quarter of the time.
        let rad = rng.random::<f64>().sqrt() * 0.999;
        let m2 = if rng.random::<f64>() < 0.25 {
            Complex64::new(if rng.random::<bool>() { rad } else { -rad }, 0.0)
        } else {
            Complex64::from_polar(rad, rng.random_range(0.0..std::f64::consts::TAU))
        };
        let w2 = disk.denormalize(m2);
        let first = disk.poincare(w1, w2);
        let (a, b) = (disk.interval.a, disk.interval.b);
        let x0 = a + (b - a) * rng.random_range(0.05..0.95);
        let mob = disk.to_unit_disk_centered(x0);
        let second = poincare_disk(mob.apply(w1), mob.apply(w2));
        r.check("two normalizations", || format!("{} w2={w2}", fmt_cvec(&zeta)), (first - second).abs() / first.max(1.0), DISTANCE_TOL);
    });

    let s3 = derive_seed(seed, "metric-phi");
    let phi = run_samples("u = phi(d)", PHI_TOL, seed, exec, n_pairs, |i, r| {
        let mut rng = sample_rng(s3, i as u64);
        let zeta = tube.sample_point(&mut rng);
        if in_band(&tube, &zeta) {
            r.skipped += 1;
            return;
        }
        r.samples_run += 1;
        match (tube.u_value(&zeta), tube.core_distance(&zeta)) {
            (Ok(u), Ok(cd)) => {
                let phi = 2.0 * cd.distance_via_foot.tanh().atan();
                r.check("u = 2 arctan tanh d", || fmt_cvec(&zeta), (u - phi).abs(), PHI_TOL);
            }
            (u, cd) => r.violation("u and d defined", format!("{}: {u:?} {cd:?}", fmt_cvec(&zeta)), f64::NAN),
        }
    });

    let mut report = VerifierReport::new("metric_consistency", DISTANCE_TOL, seed);
    report.absorb(real);
    report.absorb(slice);
    report.absorb(phi);
    Ok(report)
}
