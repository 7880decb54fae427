//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::cmp::Ordering;
use std::f64::consts::{FRAC_PI_2, PI};
use std::process::ExitCode;
use std::time::Instant;

use etube::complexify::{check_free_action, orbit_reduce, quotient_distance_cyclic, ConvexRPManifold};
use etube::exec::sample_rng;
use etube::shapes;
use etube::tangent::to_tangent_chart;
use etube::tube::{BoundaryClass, Membership, BOUNDARY_BAND};
use etube::verify::{
    verify_c_convexity, verify_duality_identity, verify_homeomorphism, verify_linear_convexity, verify_metric_consistency,
};
use etube::{Complex64, ComplexPoint, ConvexDomain, Execution, ProjectiveMap, RealLine, Tube, VerifierReport};
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

const SEED: u64 = 20_240_601;
const EXEC: Execution = Execution::Parallel;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn from_reports(reports: &[VerifierReport]) -> Outcome {
    let pass = reports.iter().all(VerifierReport::passed);
    let detail = reports
        .iter()
        .map(|r| format!("{} n={} viol={} max_err={:.2e}", r.name, r.samples_run, r.violation_count(), r.max_error))
        .collect::<Vec<_>>()
        .join("; ");
    outcome(pass, detail)
}

fn c1(re: f64, im: f64) -> DVector<Complex64> {
    DVector::from_element(1, Complex64::new(re, im))
}

fn tube(d: ConvexDomain) -> Tube {
    Tube::new(d).expect("tube")
}

fn unit_direction<R: Rng>(rng: &mut R, n: usize) -> DVector<f64> {
    loop {
        let d = DVector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal));
        let nd = d.norm();
        if nd > 1e-6 {
            return d / nd;
        }
    }
}

fn interval_baseline() -> Outcome {
    let t = tube(shapes::interval());
    let (mut disagreements, mut compared) = (0, 0);
    for i in 0..10_000u64 {
        let mut rng = sample_rng(SEED ^ 1, i);
        let z = Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        if (z.norm() - 1.0).abs() < 1e-8 {
            continue;
        }
        compared += 1;
        if t.contains_chart(&c1(z.re, z.im)) != (z.norm() < 1.0) {
            disagreements += 1;
        }
    }
    outcome(disagreements == 0, format!("compared={compared} disagreements={disagreements}"))
}

fn dual_membership() -> Outcome {
    let mut details = Vec::new();
    let mut pass = true;
    for (name, d) in [("interval", shapes::interval()), ("square", shapes::square_h()), ("triangle", shapes::triangle_h())] {
        let t = tube(d);
        let (mut disagreements, mut compared) = (0, 0);
        for i in 0..10_000u64 {
            let mut rng = sample_rng(SEED ^ 2, i);
            // Half the samples from the tube itself so both verdicts occur often.
            let zeta = if i % 2 == 0 { t.sample_box(&mut rng) } else { t.sample_point(&mut rng) };
            let z = t.lift(&zeta);
            let margin = t.pairwise_margin(&z).expect("pairwise margin");
            if t.membership_chart(&zeta, BOUNDARY_BAND) == Membership::Boundary || margin.abs() < BOUNDARY_BAND {
                continue;
            }
            compared += 1;
            if t.contains(&z) != t.contains_pairwise(&z).expect("pairwise") {
                disagreements += 1;
            }
        }
        pass &= disagreements == 0;
        details.push(format!("{name}: compared={compared} disagreements={disagreements}"));
    }
    outcome(pass, details.join("; "))
}

fn hilbert_is_kobayashi() -> Outcome {
    let reports: Vec<_> = [shapes::square(), shapes::simplex(), shapes::ellipse()]
        .iter()
        .map(|d| verify_metric_consistency(d, 1000, SEED, EXEC).expect("metric"))
        .collect();
    let square = shapes::square();
    let h = square.hilbert_distance(&DVector::from_vec(vec![0.0, 0.0]), &DVector::from_vec(vec![0.5, 0.0])).expect("hilbert");
    let anchor = (h - 0.5 * 3.0f64.ln()).abs();
    let mut o = from_reports(&reports);
    o.pass &= anchor < 1e-12;
    o.detail.push_str(&format!("; anchor |h - ln3/2|={anchor:.2e}"));
    o
}

fn u_is_phi() -> Outcome {
    let mut worst = 0.0f64;
    let mut n = 0;
    for d in [shapes::square(), shapes::simplex(), shapes::ellipse()] {
        let t = tube(d);
        for i in 0..10_000u64 {
            let mut rng = sample_rng(SEED ^ 4, i);
            let zeta = t.sample_point(&mut rng);
            let (Ok(u), Ok(cd)) = (t.u_value(&zeta), t.core_distance(&zeta)) else { continue };
            worst = worst.max((u - 2.0 * cd.distance_via_foot.tanh().atan()).abs());
            n += 1;
        }
    }
    let t = tube(shapes::interval());
    let z = c1(0.0, 0.5);
    let u = t.u_value(&z).expect("u");
    let d = t.core_distance(&z).expect("core distance").distance;
    let (eu, ed) = ((u - (4.0f64 / 3.0).atan()).abs(), (d - 0.5f64.atanh()).abs());
    let pass = worst < 1e-9 && eu < 1e-12 && ed < 1e-12;
    outcome(pass, format!("samples={n} max|u - 2atan(tanh d)|={worst:.2e}; anchor u err={eu:.1e} d err={ed:.1e}"))
}

/// Points `x + (c + r e^{iθ})·v` on the circle over the chord of `D` through `x` along `v`.
fn boundary_characterization() -> Outcome {
    let mut misclassified = 0;
    let mut worst = 0.0f64;
    let mut n = 0;
    for d in [shapes::square(), shapes::triangle_h(), shapes::ellipse(), shapes::simplex()] {
        let t = tube(d);
        for i in 0..250u64 {
            let mut rng = sample_rng(SEED ^ 5, i);
            let x = t.base().sample_interior(&mut rng);
            let v = unit_direction(&mut rng, t.dim());
            let (lo, hi) = t.base().clip_params(&x, &v).expect("interior chord");
            let theta = rng.random_range(0.05..PI - 0.05) * if rng.random::<bool>() { 1.0 } else { -1.0 };
            let s = Complex64::new(0.5 * (lo + hi), 0.0) + Complex64::from_polar(0.5 * (hi - lo), theta);
            let zeta = x.map(Complex64::from) + v.map(Complex64::from) * s;
            let z = t.lift(&zeta);
            n += 1;
            if t.boundary_classify(&z, BOUNDARY_BAND) != BoundaryClass::ComplexBoundary {
                misclassified += 1;
            }
            let slice = t.slice_disk(&z).expect("slice");
            let m = slice.normalize(slice.coordinate(&z).expect("coordinate")).norm();
            worst = worst.max((m - 1.0).abs());
        }
    }
    outcome(misclassified == 0 && worst < 1e-9, format!("points={n} misclassified={misclassified} max||m|-1|={worst:.2e}"))
}

fn linear_convexity() -> Outcome {
    from_reports(&[verify_linear_convexity(&tube(shapes::square()), 1000, 1000, SEED, EXEC).expect("linconv")])
}

fn duality_identity() -> Outcome {
    from_reports(&[
        verify_duality_identity(&shapes::simplex(), 10_000, SEED, EXEC).expect("simplex"),
        verify_duality_identity(&shapes::square(), 10_000, SEED, EXEC).expect("square"),
    ])
}

fn c_convexity() -> Outcome {
    let t = tube(shapes::triangle_h());
    let coarse = verify_c_convexity(&t, 200, 512, SEED, EXEC).expect("512");
    let fine = verify_c_convexity(&t, 200, 1024, SEED, EXEC).expect("1024");
    let punctured = Tube::punctured(shapes::interval(), 0.3).expect("punctured");
    let control = verify_c_convexity(&punctured, 20, 512, SEED, EXEC).expect("control");
    let witnesses = control.violations.iter().filter(|v| v.check == "complement connected").count();
    let pass = coarse.passed() && fine.passed() && !control.passed() && witnesses > 0;
    let bridged = |r: &VerifierReport| r.notes.iter().find(|n| n.starts_with("sub-cell")).cloned().unwrap_or_default();
    outcome(
        pass,
        format!(
            "triangle 512² viol={} ({}) 1024² viol={} ({}); punctured control viol={} complement witnesses={witnesses}",
            coarse.violation_count(),
            bridged(&coarse),
            fine.violation_count(),
            bridged(&fine),
            control.violation_count()
        ),
    )
}

fn diag(entries: &[f64]) -> ProjectiveMap<f64> {
    ProjectiveMap::new(DMatrix::from_diagonal(&DVector::from_column_slice(entries))).expect("invertible")
}

fn homeomorphism() -> Outcome {
    let simplex_group = [diag(&[2.0, 1.0, 1.0]), diag(&[1.0, 3.0, 1.0]), diag(&[0.5, 1.5, 1.0])];
    let ellipse_group = [diag(&[-1.0, 1.0, 1.0]), diag(&[1.0, -1.0, 1.0])];
    let reports = [
        verify_homeomorphism(&tube(shapes::simplex()), 1000, &simplex_group, SEED, EXEC).expect("simplex"),
        verify_homeomorphism(&tube(shapes::ellipse()), 1000, &ellipse_group, SEED, EXEC).expect("ellipse"),
        verify_homeomorphism(&tube(shapes::square()), 1000, &[ProjectiveMap::identity(2)], SEED, EXEC).expect("square"),
    ];
    let t = tube(shapes::interval());
    let v = to_tangent_chart(&t, &c1(0.0, 0.5)).expect("tangent");
    let err = v.base[0].abs().max((v.direction[0] - 1.0).abs()).max((v.magnitude - 0.5f64.atanh()).abs());
    let mut o = from_reports(&reports);
    o.pass &= err < 1e-12;
    o.detail.push_str(&format!("; anchor f(0.5i) err={err:.1e}"));
    o
}

/// Radii `r_k` increasing to `0.99995`, dense near the circle.
fn radii() -> Vec<f64> {
    let mut r: Vec<f64> = (0..=100).map(|k| 0.9 * k as f64 / 100.0).collect();
    r.extend((1..=100).map(|k| 1.0 - 0.1 * (5e-4f64).powf(k as f64 / 100.0)));
    r
}

fn completeness_proxy() -> Outcome {
    let radii = radii();
    // Monotonicity is checked on every ray; the threshold on the radius
    // perpendicular to the real diameter, where d(r) = artanh r.
    let angles = [PI / 6.0, PI / 3.0, FRAC_PI_2, 2.0 * PI / 3.0, 5.0 * PI / 6.0, -FRAC_PI_2];
    let (mut slices, mut failures) = (0, 0);
    let mut smallest_final = f64::INFINITY;
    for d in [shapes::interval(), shapes::square(), shapes::simplex(), shapes::ellipse()] {
        let t = tube(d);
        for i in 0..40u64 {
            let mut rng = sample_rng(SEED ^ 10, i);
            let x = t.base().sample_interior(&mut rng);
            let v = unit_direction(&mut rng, t.dim());
            let line = RealLine::new(t.chart().lift(&x), t.chart().lift_direction(&v)).expect("line");
            let slice = t.slice_of_line(&line).expect("slice");
            slices += 1;
            for theta in angles {
                let ds: Vec<f64> = radii
                    .iter()
                    .map(|r| {
                        let z = slice.point(slice.denormalize(Complex64::from_polar(*r, theta)));
                        let zeta = t.chart_coords(&z).expect("chart");
                        t.core_distance(&zeta).map(|c| c.distance).unwrap_or(f64::NAN)
                    })
                    .collect();
                let increasing = ds.windows(2).all(|w| w[1] > w[0]);
                let last = *ds.last().expect("radii");
                let perpendicular = (theta.abs() - FRAC_PI_2).abs() < 1e-12;
                if perpendicular {
                    smallest_final = smallest_final.min(last);
                }
                if !increasing || (perpendicular && last.partial_cmp(&5.0) != Some(Ordering::Greater)) {
                    failures += 1;
                }
            }
        }
    }
    outcome(
        failures == 0,
        format!("slices={slices} radii={} failures={failures} min perpendicular d(0.99995)={smallest_final:.3}", radii.len()),
    )
}

fn complexification() -> Outcome {
    let m = ConvexRPManifold::half_line();
    let free = check_free_action(&m, 8, EXEC);
    // `[w : 1]` in the homogeneous coordinates the generator is diagonal in.
    let lift = |re: f64, im: f64| ComplexPoint::new(DVector::from_vec(vec![Complex64::new(re, im), Complex64::new(1.0, 0.0)])).expect("nonzero");
    let (rep, _) = orbit_reduce(&m, &lift(5.0, 1.0), 8).expect("orbit");
    let w = rep.coords()[0] / rep.coords()[1];
    let exact = w == Complex64::new(1.25, 0.25);
    let q = quotient_distance_cyclic(&m, &lift(1.0, 0.0), &lift(4.0, 0.0), 8).expect("distance");
    let pass = free.passed() && exact && q.abs() < 1e-12;
    outcome(pass, format!("free action words={} viol={}; orbit_reduce(5+i)={w}; q(1,4)={q:.1e}", free.samples_run, free.violation_count()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("interval baseline", interval_baseline),
        ("dual-algorithm membership", dual_membership),
        ("Hilbert = Kobayashi", hilbert_is_kobayashi),
        ("u = phi", u_is_phi),
        ("boundary characterization", boundary_characterization),
        ("linear convexity", linear_convexity),
        ("duality identity", duality_identity),
        ("C-convexity", c_convexity),
        ("homeomorphism", homeomorphism),
        ("completeness proxy", completeness_proxy),
        ("complexification", complexification),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!("{verdict} [{:>2}] {name}: {} ({:.1}s)", k + 1, o.detail, start.elapsed().as_secs_f64());
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
