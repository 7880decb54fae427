use etube::complexify::{orbit_reduce, quotient_distance_cyclic, ConvexRPManifold};
use etube::duality::{dual_complement, dual_domain};
use etube::exec::sample_rng;
use etube::projective::{cross_ratio, is_real, real_trace_line};
use etube::shapes;
use etube::tangent::{from_tangent_chart, to_tangent_chart};
use etube::tube::Membership;
use etube::{Chart, Complex64, ComplexPoint, ConvexDomain, ProjectiveMap, RealFunctional, RealPoint, Representation, Tube};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

fn domains() -> Vec<ConvexDomain> {
    vec![shapes::square(), shapes::simplex(), shapes::ellipse(), shapes::triangle_h()]
}

fn domain_strategy() -> impl Strategy<Value = ConvexDomain> {
    (0..domains().len()).prop_map(|k| domains().swap_remove(k))
}

fn complex() -> impl Strategy<Value = Complex64> {
    (-3.0..3.0f64, -3.0..3.0f64).prop_map(|(a, b)| Complex64::new(a, b))
}

fn scalar() -> impl Strategy<Value = Complex64> {
    (0.1..10.0f64, -3.2..3.2f64).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

/// Invertible `(n+1)×(n+1)` real matrices with bounded condition number.
fn pgl(n: usize) -> impl Strategy<Value = ProjectiveMap<f64>> {
    prop::collection::vec(-2.0..2.0f64, (n + 1) * (n + 1))
        .prop_map(move |v| DMatrix::from_row_slice(n + 1, n + 1, &v))
        .prop_filter("well conditioned", |m| {
            let s = m.clone().singular_values();
            s.min() > 0.2 * s.max()
        })
        .prop_map(|m| ProjectiveMap::new(m).unwrap())
}

fn interior(d: &ConvexDomain, seed: u64, i: u64) -> DVector<f64> {
    d.sample_interior(&mut sample_rng(seed, i))
}

fn off_band(t: &Tube, zeta: &DVector<Complex64>) -> bool {
    t.membership_chart(zeta, 1e-6) != Membership::Boundary
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn projective_equality_is_an_equivalence(c in prop::collection::vec(complex(), 3), s in scalar(), t in scalar()) {
        let p = ComplexPoint::new(DVector::from_vec(c)).unwrap();
        prop_assume!(p.coords().norm() > 1e-3);
        let q = ComplexPoint::new(p.coords() * s).unwrap();
        let r = ComplexPoint::new(q.coords() * t).unwrap();
        prop_assert!(p.proj_eq(&p, 1e-12));
        prop_assert_eq!(p.proj_eq(&q, 1e-10), q.proj_eq(&p, 1e-10));
        prop_assert!(p.proj_eq(&q, 1e-10) && q.proj_eq(&r, 1e-10) && p.proj_eq(&r, 1e-10));
    }

    #[test]
    fn trace_line_holds_the_point_and_its_conjugate(c in prop::collection::vec(complex(), 3)) {
        let z = ComplexPoint::new(DVector::from_vec(c)).unwrap();
        prop_assume!(!is_real(&z, 1e-3));
        let line = real_trace_line(&z).unwrap();
        let fs = line.annihilating_functionals();
        prop_assert_eq!(fs.len(), 1);
        for f in &fs {
            let scale = f.coeffs().norm() * z.coords().norm();
            prop_assert!(f.eval_complex(&z).norm() < 1e-10 * scale);
            prop_assert!(f.eval_complex(&z.conj()).norm() < 1e-10 * scale);
        }
    }

    #[test]
    fn cross_ratio_is_projectively_invariant(t in prop::collection::vec(-1.0..1.0f64, 4), a in pgl(1)) {
        let mut t = t;
        t.sort_by(f64::total_cmp);
        prop_assume!(t.windows(2).all(|w| w[1] - w[0] > 1e-2));
        let p = |x: f64| RealPoint::from_slice(&[x, 1.0]).unwrap();
        let before = cross_ratio(&p(t[0]), &p(t[1]), &p(t[2]), &p(t[3])).unwrap();
        let q = |x: f64| a.apply(&p(x));
        let after = cross_ratio(&q(t[0]), &q(t[1]), &q(t[2]), &q(t[3])).unwrap();
        prop_assert!((after - before).abs() <= 1e-10 * before.abs().max(1.0), "{} vs {}", before, after);
    }

    #[test]
    fn conjugation_commutes_with_real_maps(c in prop::collection::vec(complex(), 3), a in pgl(2)) {
        let z = ComplexPoint::new(DVector::from_vec(c)).unwrap();
        prop_assume!(z.coords().norm() > 1e-3);
        prop_assert!(a.apply_complex(&z.conj()).proj_eq(&a.apply_complex(&z).conj(), 1e-12));
    }

    #[test]
    fn hilbert_triangle_inequality(d in domain_strategy(), seed in any::<u64>()) {
        let (x, y, w) = (interior(&d, seed, 0), interior(&d, seed, 1), interior(&d, seed, 2));
        let h = |p: &DVector<f64>, q: &DVector<f64>| d.hilbert_distance(p, q).unwrap();
        prop_assert!(h(&x, &w) <= h(&x, &y) + h(&y, &w) + 1e-10);
        // Points on one segment achieve equality.
        let m = &x * 0.3 + &w * 0.7;
        prop_assert!((h(&x, &w) - h(&x, &m) - h(&m, &w)).abs() < 1e-10);
    }

    #[test]
    fn hilbert_is_projectively_invariant(d in domain_strategy(), seed in any::<u64>(), a in pgl(2)) {
        let image = d.transformed(&a, None).unwrap();
        let (x, y) = (d.chart().lift(&interior(&d, seed, 0)), d.chart().lift(&interior(&d, seed, 1)));
        let before = d.hilbert_distance_points(&x, &y).unwrap();
        let after = image.hilbert_distance_points(&a.apply(&x), &a.apply(&y)).unwrap();
        prop_assert!((after - before).abs() <= 1e-9 * before.max(1.0), "{} vs {}", before, after);
    }

    #[test]
    fn finsler_norm_is_the_derivative(d in domain_strategy(), seed in any::<u64>(), w in prop::collection::vec(-1.0..1.0f64, 2)) {
        let x = interior(&d, seed, 0);
        let w = DVector::from_vec(w);
        // The forward difference is off by O(ε·F²), which the tolerance absorbs
        // only away from the boundary.
        prop_assume!(w.norm() > 0.1 && d.gauge(&x) < 0.9);
        let eps = 1e-6;
        let fd = d.hilbert_distance(&x, &(&x + &w * eps)).unwrap() / eps;
        let f = d.finsler_norm(&x, &w).unwrap();
        prop_assert!((fd - f).abs() < 1e-4 * f, "{} vs {}", fd, f);
    }

    #[test]
    fn scaled_copies_clip_inside(d in domain_strategy(), seed in any::<u64>(), delta in 0.01..0.9f64, theta in 0.0..6.3f64) {
        let small = d.scaled_copy(delta).unwrap();
        let x = interior(&small, seed, 0);
        let v = DVector::from_vec(vec![theta.cos(), theta.sin()]);
        let (lo, hi) = d.clip_params(&x, &v).unwrap();
        let (slo, shi) = small.clip_params(&x, &v).unwrap();
        prop_assert!(lo <= slo + 1e-12 && shi <= hi + 1e-12);
    }

    #[test]
    fn tube_membership_is_projectively_invariant(d in domain_strategy(), seed in any::<u64>(), a in pgl(2)) {
        let t = Tube::new(d).unwrap();
        let image = t.transformed(&a, None).unwrap();
        let mut rng = sample_rng(seed, 0);
        let zeta = if seed % 2 == 0 { t.sample_box(&mut rng) } else { t.sample_point(&mut rng) };
        prop_assume!(off_band(&t, &zeta));
        let z = t.lift(&zeta);
        let az = a.apply_complex(&z);
        prop_assume!(image.chart_coords(&az).map(|c| off_band(&image, &c)).unwrap_or(false));
        prop_assert_eq!(image.contains(&az), t.contains(&z));
    }

    #[test]
    fn disk_formula_for_u(re in -0.99..0.99f64, im in -0.99..0.99f64) {
        let z = Complex64::new(re, im);
        prop_assume!(z.norm() < 0.999);
        let t = Tube::new(shapes::interval()).unwrap();
        let u = t.u_value(&DVector::from_element(1, z)).unwrap();
        let expected = (2.0 * im.abs() / (1.0 - z.norm_sqr())).atan();
        prop_assert!((u - expected).abs() < 1e-10, "{} vs {}", u, expected);
    }

    #[test]
    fn tangent_map_round_trips(d in domain_strategy(), seed in any::<u64>()) {
        let t = Tube::new(d).unwrap();
        let zeta = t.sample_point(&mut sample_rng(seed, 0));
        prop_assume!(off_band(&t, &zeta));
        let v = to_tangent_chart(&t, &zeta).unwrap();
        let back = from_tangent_chart(&t, &v).unwrap();
        prop_assert!((&back - &zeta).norm() < 1e-8 * zeta.norm().max(1.0));
        let vbar = to_tangent_chart(&t, &zeta.map(|c| c.conj())).unwrap();
        prop_assert!((vbar.magnitude - v.magnitude).abs() < 1e-10);
        prop_assert!((&vbar.base - &v.base).norm() < 1e-10);
        if !v.is_zero() {
            prop_assert!((&vbar.direction + &v.direction).norm() < 1e-10);
        }
    }

    #[test]
    fn dual_points_are_positive_on_vertices(pts in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 4..9), seed in any::<u64>()) {
        let Some(d) = polygon(&pts) else { return Ok(()) };
        let dual = dual_complement(&d).unwrap();
        let is_h = matches!(dual.representation(), Representation::HDomain { .. });
        prop_assert!(is_h);
        for i in 0..8 {
            let xi = RealFunctional::from_point(&dual.chart().lift(&interior(&dual, seed, i)));
            for v in d.vertex_lifts().unwrap() {
                prop_assert!(xi.eval(&v) > 0.0);
            }
        }
    }

    #[test]
    fn double_dual_returns_the_vertices(pts in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 4..9)) {
        let Some(d) = polygon(&pts) else { return Ok(()) };
        let dd = dual_domain(&dual_domain(&d).unwrap()).unwrap();
        let original = d.vertex_lifts().unwrap();
        let twice = dd.vertex_lifts().unwrap();
        prop_assert_eq!(original.len(), twice.len());
        for v in &original {
            prop_assert!(twice.iter().any(|w| w.proj_eq(v, 1e-9)));
        }
    }
}

/// A vertex polytope on the points, when their hull is a nondegenerate polygon
/// containing the origin with room to spare.
fn polygon(pts: &[(f64, f64)]) -> Option<ConvexDomain> {
    let mut with_box: Vec<(f64, f64)> = pts.to_vec();
    with_box.extend([(0.5, 0.5), (-0.5, 0.5), (-0.5, -0.5), (0.5, -0.5)]);
    let lifts = with_box.iter().map(|(x, y)| RealPoint::from_slice(&[*x, *y, 1.0]).unwrap()).collect();
    ConvexDomain::vpolytope(lifts, Chart::standard(2), None).ok()?.validated().ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cyclic_action_preserves_the_tube_and_commutes_with_conjugation(re in 0.01..50.0f64, im in -20.0..20.0f64, k in -6i32..6) {
        let m = ConvexRPManifold::half_line();
        let z = ComplexPoint::new(DVector::from_vec(vec![Complex64::new(re, im), Complex64::new(1.0, 0.0)])).unwrap();
        let g = ProjectiveMap::new(DMatrix::from_diagonal(&m.generators()[0].matrix().diagonal().map(|x| x.powi(k)))).unwrap();
        prop_assert_eq!(m.tube().contains(&g.apply_complex(&z)), m.tube().contains(&z));
        prop_assert!(g.apply_complex(&z.conj()).proj_eq(&g.apply_complex(&z).conj(), 1e-12));
        let (rep, _) = orbit_reduce(&m, &z, 16).unwrap();
        prop_assert!(quotient_distance_cyclic(&m, &z, &rep, 16).unwrap() < 1e-9);
    }

    #[test]
    fn cyclic_quotient_distance_is_a_pseudometric(w in prop::collection::vec((0.1..10.0f64, -5.0..5.0f64), 3)) {
        let m = ConvexRPManifold::half_line();
        // Real points, so every pair has a closed-form Kobayashi distance.
        let p: Vec<ComplexPoint> = w
            .iter()
            .map(|(re, _)| ComplexPoint::new(DVector::from_vec(vec![Complex64::new(*re, 0.0), Complex64::new(1.0, 0.0)])).unwrap())
            .collect();
        let q = |a: usize, b: usize| quotient_distance_cyclic(&m, &p[a], &p[b], 8).unwrap();
        prop_assert!((q(0, 1) - q(1, 0)).abs() < 1e-9);
        prop_assert!(q(0, 2) <= q(0, 1) + q(1, 2) + 1e-9);
        prop_assert!(q(0, 0) < 1e-12);
    }
}
