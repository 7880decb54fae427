use num_complex::Complex64;

use super::{chart_form, fmt_cvec, in_band, kernel_point_near, run_samples};
use crate::domain::{ConvexDomain, Representation};
use crate::duality::{dual_complement, tube_separator};
use crate::error::{Error, Result};
use crate::exec::{derive_seed, sample_rng, Execution};
use crate::projective::{ComplexFunctional, ComplexPoint, Functional, RealFunctional};
use crate::report::VerifierReport;
use crate::tube::{Membership, Tube, BOUNDARY_BAND};

const MEMBER_TOL: f64 = 1e-9;

/// Kernel points tested per sampled dual point.
const KERNEL_POINTS: usize = 8;

const MAX_DRAWS: usize = 10_000;

/// Most negative normalized pairing `Re(f̃(ξ)·conj g̃(ξ))/(|f̃(ξ)||g̃(ξ)|)`;
/// nonnegative exactly on the closed tube over the domain cut out by `fs`.
fn pairwise_deficit(fs: &[RealFunctional], xi: &ComplexPoint) -> f64 {
    let vals: Vec<Complex64> = fs.iter().map(|f| f.eval_complex(xi)).collect();
    let mut worst = 0.0f64;
    for i in 0..vals.len() {
        for j in i..vals.len() {
            let den = vals[i].norm() * vals[j].norm();
            if den > 0.0 {
                worst = worst.max(-(vals[i] * vals[j].conj()).re / den);
            }
        }
    }
    worst
}

/// Both inclusions of the tube duality on samples: every hyperplane from the
/// tube over the dual misses the tube, and every exterior point lies on a
/// hyperplane from the closed tube over the dual.
pub fn verify_duality_identity(d: &ConvexDomain, n_samples: usize, seed: u64, exec: Execution) -> Result<VerifierReport> {
    if !matches!(d.representation(), Representation::VPolytope { .. }) {
        return Err(Error::Representation("vpolytope"));
    }
    let tube = Tube::new(d.clone())?;
    let dual = dual_complement(d)?;
    let dual_tube = Tube::new(dual.clone())?;
    let spread = 0.25 * d.extent();

    let s1 = derive_seed(seed, "duality-kernel");
    let kernels = run_samples("kernel misses tube", 0.0, seed, exec, n_samples, |i, r| {
        let mut rng = sample_rng(s1, i as u64);
        let eta = dual_tube.sample_point(&mut rng);
        if in_band(&dual_tube, &eta) {
            r.skipped += 1;
            return;
        }
        r.samples_run += 1;
        let xi: ComplexFunctional = Functional::from_point(&dual_tube.lift(&eta));
        let (a, b) = chart_form(tube.chart(), &xi);
        if a.norm() == 0.0 {
            return;
        }
        for _ in 0..KERNEL_POINTS {
            let w = tube.sample_point(&mut rng);
            let k = kernel_point_near(&a, b, &w, spread, &mut rng);
            if tube.membership_chart(&k, BOUNDARY_BAND) == Membership::Inside {
                r.violation("kernel misses tube", format!("xi={} kernel point={}", fmt_cvec(&eta), fmt_cvec(&k)), 1.0);
            }
        }
    });

    let facets = d.functionals()?;
    let dual_fs = dual.functionals()?;
    let s2 = derive_seed(seed, "duality-separator");
    let separators = run_samples("separator in dual tube", MEMBER_TOL, seed, exec, n_samples, |i, r| {
        let mut rng = sample_rng(s2, i as u64);
        for _ in 0..MAX_DRAWS {
            let zeta = tube.sample_box(&mut rng);
            if in_band(&tube, &zeta) {
                r.skipped += 1;
                continue;
            }
            if tube.membership_chart(&zeta, 0.0) != Membership::Outside {
                continue;
            }
            r.samples_run += 1;
            match tube_separator(&facets, &tube.lift(&zeta)) {
                Ok(xi) => r.check("separator in closed dual tube", || fmt_cvec(&zeta), pairwise_deficit(&dual_fs, &xi.as_point()), MEMBER_TOL),
                Err(e) => r.violation("separator exists", format!("{} ({e})", fmt_cvec(&zeta)), f64::NAN),
            }
            return;
        }
    });

    let mut report = VerifierReport::new("duality_identity", MEMBER_TOL, seed);
    report.absorb(kernels);
    report.absorb(separators);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes;
    use crate::projective::RealFunctional;
    use nalgebra::DVector;

    #[test]
    fn simplex_and_square_pass() {
        for d in [shapes::simplex(), shapes::square()] {
            let r = verify_duality_identity(&d, 300, 5, Execution::Parallel).unwrap();
            assert!(r.passed(), "{:?}", r.parts.iter().map(|p| &p.violations).collect::<Vec<_>>());
            assert_eq!(r.parts.len(), 2);
        }
    }

    #[test]
    fn edge_functional_is_tangent() {
        // x = 1 supports the square along an edge: real, on the dual boundary,
        // and its kernel misses the open tube.
        let d = shapes::square();
        let t = Tube::new(d.clone()).unwrap();
        let edge = RealFunctional::from_slice(&[-1.0, 0.0, 1.0]).unwrap();
        let dual = dual_complement(&d).unwrap();
        assert!(pairwise_deficit(&dual.functionals().unwrap(), &edge.complexify().as_point()) < 1e-15);
        let (a, b) = chart_form(t.chart(), &edge.complexify());
        let mut rng = sample_rng(0, 0);
        for _ in 0..200 {
            let w = t.sample_point(&mut rng);
            let k = kernel_point_near(&a, b, &w, 1.0, &mut rng);
            assert_ne!(t.membership_chart(&k, 0.0), Membership::Inside);
        }
        let on_edge = DVector::from_vec(vec![Complex64::new(1.0, 0.0), Complex64::new(0.3, 0.0)]);
        assert_ne!(t.membership_chart(&on_edge, 0.0), Membership::Inside);
    }

    #[test]
    fn needs_vertices() {
        assert_eq!(verify_duality_identity(&shapes::ellipse(), 1, 0, Execution::Sequential), Err(Error::Representation("vpolytope")));
    }
}
