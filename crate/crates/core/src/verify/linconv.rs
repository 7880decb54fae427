use num_complex::Complex64;

use super::{chart_form, fmt_cvec, in_band, kernel_point_near, run_samples};
use crate::duality::tube_separator;
use crate::error::{Error, Result};
use crate::exec::{derive_seed, sample_rng, Execution};
use crate::linalg;
use crate::projective::{ComplexFunctional, ComplexPoint, RealFunctional};
use crate::report::VerifierReport;
use crate::tube::{Membership, Tube, BOUNDARY_BAND};

/// Relative tolerance on `|ξ(z)|` for a separator through `z`.
const THROUGH_TOL: f64 = 1e-10;

/// Draws before an exterior sample is given up on.
const MAX_DRAWS: usize = 10_000;

/// The separator with the wrong sign, `g̃(z)·f̃ + f̃(z)·g̃`. It does not vanish
/// at `z`, so a correct verifier must reject it.
pub fn flipped_separator(functionals: &[RealFunctional], z: &ComplexPoint) -> Result<ComplexFunctional> {
    let vals: Vec<Complex64> = functionals.iter().map(|f| f.eval_complex(z)).collect();
    for i in 0..vals.len() {
        for j in (i + 1)..vals.len() {
            if (vals[i] * vals[j].conj()).re <= 0.0 {
                let f = linalg::to_complex(functionals[i].coeffs());
                let g = linalg::to_complex(functionals[j].coeffs());
                return ComplexFunctional::new(f * vals[j] + g * vals[i]);
            }
        }
    }
    Err(Error::InsideTube)
}

/// For exterior points `z` of a polyhedral tube, checks that the separator
/// vanishes at `z` and that its kernel avoids the tube near tube samples.
pub fn verify_linear_convexity(tube: &Tube, n_exterior: usize, n_kernel: usize, seed: u64, exec: Execution) -> Result<VerifierReport> {
    verify_linear_convexity_with(tube, n_exterior, n_kernel, seed, exec, tube_separator)
}

/// [`verify_linear_convexity`] with a caller-supplied separator construction.
pub fn verify_linear_convexity_with<S>(
    tube: &Tube,
    n_exterior: usize,
    n_kernel: usize,
    seed: u64,
    exec: Execution,
    separator: S,
) -> Result<VerifierReport>
where
    S: Fn(&[RealFunctional], &ComplexPoint) -> Result<ComplexFunctional> + Sync + Send,
{
    let functionals = tube.base().functionals()?;
    let spread = 0.25 * tube.base().extent();
    let stream = derive_seed(seed, "linconv");
    let mut report = run_samples("linear_convexity", THROUGH_TOL, seed, exec, n_exterior, |i, r| {
        let mut rng = sample_rng(stream, i as u64);
        let mut zeta = None;
        for _ in 0..MAX_DRAWS {
            let c = tube.sample_box(&mut rng);
            if in_band(tube, &c) {
                r.skipped += 1;
                continue;
            }
            if tube.membership_chart(&c, 0.0) == Membership::Outside {
                zeta = Some(c);
                break;
            }
        }
        let Some(zeta) = zeta else {
            r.note(format!("sample {i}: no exterior point in {MAX_DRAWS} draws"));
            return;
        };
        r.samples_run += 1;
        let z = tube.lift(&zeta);
        let xi = match separator(&functionals, &z) {
            Ok(xi) => xi,
            Err(e) => {
                r.violation("separator exists", format!("{} ({e})", fmt_cvec(&zeta)), f64::NAN);
                return;
            }
        };
        let through = xi.eval(&z).norm() / (xi.coeffs().norm() * z.coords().norm());
        r.check("xi(z) = 0", || fmt_cvec(&zeta), through, THROUGH_TOL);

        let (a, b) = chart_form(tube.chart(), &xi);
        if a.norm() == 0.0 {
            // ξ is the chart's hyperplane at infinity, which misses the tube.
            return;
        }
        let mut min_on_tube = f64::INFINITY;
        for _ in 0..n_kernel {
            let w = tube.sample_point(&mut rng);
            let wl = tube.lift(&w);
            min_on_tube = min_on_tube.min(xi.eval(&wl).norm() / (xi.coeffs().norm() * wl.coords().norm()));
            let k = kernel_point_near(&a, b, &w, spread, &mut rng);
            if tube.membership_chart(&k, BOUNDARY_BAND) == Membership::Inside {
                r.violation("kernel misses tube", format!("z={} kernel point={}", fmt_cvec(&zeta), fmt_cvec(&k)), 1.0);
            }
        }
        if n_kernel > 0 && !(min_on_tube > 1e-14) {
            r.violation("xi nonzero on tube", fmt_cvec(&zeta), min_on_tube);
        }
    });

    // Harness check: an interior point must have no separator.
    let reference = tube.base().reference_lift().complexify();
    match separator(&functionals, &reference) {
        Err(Error::InsideTube) => report.note("interior reference point: InsideTube raised"),
        other => report.violation("interior point rejected", format!("reference point gave {other:?}"), f64::NAN),
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes;
    use nalgebra::DVector;

    #[test]
    fn square_passes() {
        let t = Tube::new(shapes::square()).unwrap();
        let r = verify_linear_convexity(&t, 200, 50, 1, Execution::Parallel).unwrap();
        assert!(r.passed(), "{:?}", r.violations);
        assert_eq!(r.samples_run, 200);
    }

    #[test]
    fn interval_separator_at_two() {
        let t = Tube::new(shapes::interval()).unwrap();
        let z = t.lift(&DVector::from_element(1, Complex64::new(2.0, 0.0)));
        let xi = tube_separator(&t.base().functionals().unwrap(), &z).unwrap();
        // The kernel is the single point t = 2.
        let (a, b) = chart_form(t.chart(), &xi);
        assert!((-b / a[0] - Complex64::new(2.0, 0.0)).norm() < 1e-14);
        let r = verify_linear_convexity(&t, 100, 20, 2, Execution::Sequential).unwrap();
        assert!(r.passed(), "{:?}", r.violations);
    }

    #[test]
    fn flipped_separator_fails() {
        let t = Tube::new(shapes::square_h()).unwrap();
        let r = verify_linear_convexity_with(&t, 50, 10, 3, Execution::Sequential, flipped_separator).unwrap();
        assert!(!r.passed());
        assert!(r.violations.iter().any(|v| v.check == "xi(z) = 0"));
    }

    #[test]
    fn ellipse_is_rejected() {
        let t = Tube::new(shapes::ellipse()).unwrap();
        assert!(verify_linear_convexity(&t, 1, 1, 0, Execution::Sequential).is_err());
    }
}
