//! Dual complements, the separating hyperplane of a point outside a tube, and
//! sampled tangent sets `Γ(a) = ann(a) ∩ (Dᵉ)*`.

use argmin::core::{CostFunction, Executor, State};
use argmin::solver::neldermead::NelderMead;
use nalgebra::{ComplexField, DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::domain::{ConvexDomain, Representation};
use crate::error::{Error, Result};
use crate::exec::sample_rng;
use crate::linalg::{self, mul_real, nullspace};
use crate::lp;
use crate::projective::{Chart, ComplexFunctional, ComplexPoint, Functional, HPoint, RealFunctional, RealPoint};
use crate::tube::{BoundaryClass, Tube};

/// `ann(x)`: the dual hyperplane of functionals vanishing at `x`, as a functional on dual vectors.
pub fn annihilator<T: ComplexField<RealField = f64>>(x: &HPoint<T>) -> Functional<T> {
    Functional::from_point(x)
}

/// Chart of the dual space in which a dual complement is bounded: the
/// reference lift is the hyperplane at infinity.
pub fn dual_chart(reference_lift: &RealPoint) -> Result<Chart> {
    let r = reference_lift.coords();
    let skip = r.iamax();
    let n = r.len() - 1;
    let basis: Vec<RealFunctional> = (0..=n)
        .filter(|&j| j != skip)
        .map(|j| RealFunctional::new(DVector::from_fn(n + 1, |i, _| if i == j { 1.0 } else { 0.0 })))
        .collect::<Result<_>>()?;
    Chart::new(&RealFunctional::from_point(reference_lift), &basis)
}

/// `D*` of a vertex polytope: functionals positive on every vertex lift.
pub fn dual_complement(d: &ConvexDomain) -> Result<ConvexDomain> {
    if !matches!(d.representation(), Representation::VPolytope { .. }) {
        return Err(Error::Representation("vpolytope"));
    }
    let d = d.clone().validated()?;
    let functionals = d.vertex_lifts()?.iter().map(RealFunctional::from_point).collect();
    let chart = dual_chart(&d.reference_lift())?;
    ConvexDomain::hdomain(functionals, chart, None)?.validated()
}

/// `D*` of a functional family: the polytope whose vertices are the irredundant functionals.
pub fn dual_complement_h(d: &ConvexDomain) -> Result<ConvexDomain> {
    let Representation::HDomain { functionals } = d.representation() else {
        return Err(Error::Representation("hdomain"));
    };
    let d = d.clone().validated()?;
    let mut keep: Vec<Vec<f64>> = functionals.iter().map(|f| f.coeffs().iter().copied().collect()).collect();
    let mut k = 0;
    while k < keep.len() {
        let others: Vec<Vec<f64>> = keep.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, v)| v.clone()).collect();
        if lp::in_cone(&others, &keep[k], 1e-9)? {
            keep.remove(k);
        } else {
            k += 1;
        }
    }
    let vertices = keep.into_iter().map(|v| RealPoint::new(DVector::from_vec(v))).collect::<Result<Vec<_>>>()?;
    let chart = dual_chart(&d.reference_lift())?;
    ConvexDomain::vpolytope(vertices, chart, None)?.validated()
}

/// `D*` for any representation; ellipsoids dualize through the inverse quadric.
pub fn dual_domain(d: &ConvexDomain) -> Result<ConvexDomain> {
    match d.representation() {
        Representation::VPolytope { .. } => dual_complement(d),
        Representation::HDomain { .. } => dual_complement_h(d),
        Representation::Ellipsoid { .. } => {
            let q = d.quadric()?;
            let qinv = q.try_inverse().ok_or_else(|| Error::Degenerate("singular quadric".into()))?;
            let chart = dual_chart(&d.reference_lift())?;
            ConvexDomain::from_quadric(&qinv, chart, None)?.validated()
        }
    }
}

/// A complex hyperplane through `z` missing `Dᵉ`, built from the first pair
/// `(f, g)` with `Re(f̃(z)·conj g̃(z)) ≤ 0` as `ξ̃ = g̃(z)·f̃ − f̃(z)·g̃`.
pub fn tube_separator(functionals: &[RealFunctional], z: &ComplexPoint) -> Result<ComplexFunctional> {
    let vals: Vec<Complex64> = functionals.iter().map(|f| f.eval_complex(z)).collect();
    let zn = z.coords().norm();
    for (f, v) in functionals.iter().zip(&vals) {
        if v.norm() <= 1e-15 * f.coeffs().norm() * zn {
            return Ok(f.complexify());
        }
    }
    for i in 0..vals.len() {
        for j in (i + 1)..vals.len() {
            if (vals[i] * vals[j].conj()).re <= 0.0 {
                let f = linalg::to_complex(functionals[i].coeffs());
                let g = linalg::to_complex(functionals[j].coeffs());
                return ComplexFunctional::new(f * vals[j] - g * vals[i]);
            }
        }
    }
    Err(Error::InsideTube)
}

/// Closed pairwise test `Re(f̃(ξ)·conj g̃(ξ)) ≥ −slack·|f̃(ξ)||g̃(ξ)|` for a
/// complex dual point against a family of real functionals on the dual.
pub fn in_closed_tube_pairwise(functionals: &[RealFunctional], xi: &ComplexPoint, slack: f64) -> bool {
    let vals: Vec<Complex64> = functionals.iter().map(|f| f.eval_complex(xi)).collect();
    (0..vals.len()).all(|i| (i..vals.len()).all(|j| (vals[i] * vals[j].conj()).re >= -slack * vals[i].norm() * vals[j].norm()))
}

/// Membership margin of a chart point in the closed tube over `d`: nonnegative
/// exactly on the closed tube, continuous across its boundary.
pub fn closed_tube_margin(d: &ConvexDomain, zeta: &DVector<Complex64>) -> f64 {
    let x = linalg::re(zeta);
    let y = linalg::im(zeta);
    let ny2 = y.norm_squared();
    let scale = d.extent().powi(2);
    let g = d.gauge(&x);
    if g > 1.0 {
        return -(g - 1.0) * scale - ny2;
    }
    if ny2 == 0.0 {
        return (1.0 - g) * scale;
    }
    match d.clip_params(&x, &(&y / ny2.sqrt())) {
        Some((lo, hi)) => -lo.min(0.0) * hi.max(0.0) - ny2,
        None => -ny2,
    }
}

/// Sampled tangent set at a tube boundary point.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentSetSample {
    pub functionals: Vec<ComplexFunctional>,
    /// Largest pairwise distance of the samples in the dual chart.
    pub diameter: f64,
    /// Dual chart coordinates of the samples.
    pub points: Vec<DVector<Complex64>>,
}

struct NegMargin<'a> {
    dual: &'a ConvexDomain,
    base: DVector<Complex64>,
    dirs: Vec<DVector<Complex64>>,
}

impl NegMargin<'_> {
    fn point(&self, s: &[f64]) -> DVector<Complex64> {
        let mut p = self.base.clone();
        for (k, d) in self.dirs.iter().enumerate() {
            p += d * Complex64::new(s[2 * k], s[2 * k + 1]);
        }
        p
    }
}

impl CostFunction for NegMargin<'_> {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, s: &Self::Param) -> std::result::Result<f64, argmin::core::Error> {
        Ok(-closed_tube_margin(self.dual, &self.point(s)))
    }
}

/// Samples `Γ(a)`: functionals through `a` whose kernels miss `Dᵉ`.
///
/// `ann(a)` is parametrized in the chart of `D*`. A Nelder–Mead search finds a
/// point of maximal closed dual-tube margin; each of `n_samples` seeded rays
/// from it is then bisected to the last point whose margin is within
/// `1e−15·extent²` of the closed tube.
pub fn tangent_set_sample(tube: &Tube, a: &ComplexPoint, n_samples: usize, seed: u64) -> Result<TangentSetSample> {
    match tube.boundary_classify(a, 1e-6) {
        BoundaryClass::RealBoundary | BoundaryClass::ComplexBoundary => {}
        _ => return Err(Error::NotBoundary),
    }
    let dual = dual_domain(tube.base())?;
    let chart = dual.chart();
    let n = chart.dim();
    // ξ̃ = C⁻¹(η, 1) pairs with ã through r = C⁻ᵀ ã.
    let r = mul_real(&chart.inverse().transpose(), a.coords());
    let head = r.rows(0, n).into_owned();
    let hn = head.norm_squared();
    if hn == 0.0 {
        return Err(Error::Degenerate("annihilator is the dual hyperplane at infinity".into()));
    }
    let base = head.map(|c| c.conj()) * (-r[n] / hn);
    let row = DMatrix::from_fn(1, n, |_, j| head[j]);
    let dirs = if n > 1 { nullspace(&row, 1e-12) } else { Vec::new() };
    let problem = NegMargin { dual: &dual, base, dirs };
    let dim = 2 * problem.dirs.len();
    let scale = dual.extent();
    let slack = 1e-15 * scale * scale;
    let margin = |s: &[f64]| closed_tube_margin(&dual, &problem.point(s));

    let mut params: Vec<Vec<f64>> = Vec::new();
    if dim == 0 {
        if margin(&[]) >= -slack {
            params.push(Vec::new());
        }
    } else {
        let mut best: Option<(f64, Vec<f64>)> = None;
        for k in 0..4 {
            let mut rng = sample_rng(seed, u64::MAX - k);
            let start: Vec<f64> = (0..dim).map(|_| 0.5 * scale * rng.sample::<f64, _>(StandardNormal)).collect();
            let x = maximize(&problem, start, scale, &mut rng)?;
            let m = margin(&x);
            if best.as_ref().is_none_or(|(bm, _)| m > *bm) {
                best = Some((m, x));
            }
        }
        let (m_star, s_star) = best.expect("at least one start");
        if m_star >= -slack {
            params.push(s_star.clone());
            for k in 0..n_samples {
                let mut rng = sample_rng(seed, k as u64);
                let radius = 2.0 * scale * rng.random::<f64>();
                let dir: Vec<f64> = (0..dim).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
                let dn = dir.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-300);
                let at = |t: f64| -> Vec<f64> { s_star.iter().zip(&dir).map(|(s, d)| s + t * radius * d / dn).collect() };
                let (mut lo, mut hi) = (0.0, 1.0);
                if margin(&at(1.0)) >= -slack {
                    lo = 1.0;
                } else {
                    for _ in 0..80 {
                        let mid = 0.5 * (lo + hi);
                        if margin(&at(mid)) >= -slack {
                            lo = mid;
                        } else {
                            hi = mid;
                        }
                    }
                }
                params.push(at(lo));
            }
        }
    }
    let points: Vec<DVector<Complex64>> = params.iter().map(|s| problem.point(s)).collect();
    let functionals = points
        .iter()
        .map(|p| ComplexFunctional::new(chart.lift(p).coords().clone()))
        .collect::<Result<Vec<_>>>()?;
    let mut diameter: f64 = 0.0;
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            diameter = diameter.max((&points[i] - &points[j]).norm());
        }
    }
    Ok(TangentSetSample { functionals, diameter, points })
}

fn maximize<R: Rng>(problem: &NegMargin<'_>, start: Vec<f64>, scale: f64, rng: &mut R) -> Result<Vec<f64>> {
    let solver_err = |e: argmin::core::Error| Error::Solver(e.to_string());
    let mut x = start;
    let mut step = 0.5 * scale;
    // Restarted simplex: each round shrinks the initial simplex around the incumbent.
    for _ in 0..6 {
        let mut simplex = vec![x.clone()];
        for i in 0..x.len() {
            let mut v = x.clone();
            v[i] += step * (1.0 + 0.1 * rng.random::<f64>());
            simplex.push(v);
        }
        let solver = NelderMead::new(simplex).with_sd_tolerance(1e-20).map_err(solver_err)?;
        let res = Executor::new(NegMarginRef(problem), solver)
            .configure(|s| s.max_iters(400))
            .run()
            .map_err(solver_err)?;
        if let Some(p) = res.state().get_best_param() {
            x = p.clone();
        }
        step *= 0.05;
    }
    Ok(x)
}

struct NegMarginRef<'a, 'b>(&'a NegMargin<'b>);

impl CostFunction for NegMarginRef<'_, '_> {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, s: &Self::Param) -> std::result::Result<f64, argmin::core::Error> {
        self.0.cost(s)
    }
}
