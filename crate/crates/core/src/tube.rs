//! The elliptic tube `Dᵉ ⊂ CPⁿ` over a properly convex domain `D`.
//!
//! A non-real point `z` lies in `Dᵉ` iff, on the complexification of its real
//! trace line, it lies in the disk whose diameter is the chord `L ∩ D`. In a
//! chart with `z = x + iy` this reads `|y|² < −ab`, where `(a, b)` is the chord
//! of the line `x + t·ŷ`.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::domain::{ConvexDomain, Interval, Representation};
use crate::error::{Error, Result};
use crate::linalg;
use crate::projective::{as_real, real_trace_line, Chart, ComplexPoint, ProjectiveMap, RealLine, REALITY_TOL};
use crate::tangent::geodesic_foot;

/// Default width of the boundary band in which membership verdicts are withheld.
pub const BOUNDARY_BAND: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    Inside,
    Outside,
    /// Within the boundary band; neither verdict is meaningful.
    Boundary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundaryClass {
    Interior,
    RealBoundary,
    ComplexBoundary,
    Exterior,
}

/// A real Möbius map `w ↦ (αw + β)/(γw + δ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mobius {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl Mobius {
    pub fn apply(&self, w: Complex64) -> Complex64 {
        (w * self.alpha + self.beta) / (w * self.gamma + self.delta)
    }

    pub fn inverse(&self) -> Mobius {
        Mobius { alpha: self.delta, beta: -self.beta, gamma: -self.gamma, delta: self.alpha }
    }
}

/// Poincaré distance `artanh |m₁ − m₂| / |1 − m₁m̄₂|` on the unit disk.
///
/// Written through `1 − ρ² = (1−|m₁|²)(1−|m₂|²) / |1 − m₁m̄₂|²` so that points
/// near the circle keep full relative accuracy.
pub fn poincare_disk(m1: Complex64, m2: Complex64) -> f64 {
    let one_minus = |m: Complex64| {
        let r = m.norm();
        (1.0 - r) * (1.0 + r)
    };
    poincare_from_parts(one_minus(m1), one_minus(m2), (m1 - m2).norm_sqr())
}

fn poincare_from_parts(a: f64, b: f64, d: f64) -> f64 {
    if d == 0.0 {
        return 0.0;
    }
    let ab = a * b;
    let rho = (d / (d + ab)).sqrt();
    rho.ln_1p() - 0.5 * (ab / (d + ab)).ln()
}

/// `Δ_z = L^C ∩ Dᵉ`: the disk with real diameter `L ∩ D`, in line coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct SliceDisk {
    pub interval: Interval,
}

impl SliceDisk {
    pub fn line(&self) -> &RealLine {
        &self.interval.line
    }

    /// The affine Möbius map sending the diameter `(a, b)` onto `(−1, 1)`.
    pub fn to_unit_disk(&self) -> Mobius {
        let (a, b) = (self.interval.a, self.interval.b);
        Mobius { alpha: 2.0, beta: -(a + b), gamma: 0.0, delta: b - a }
    }

    /// A second normalization: sends `a ↦ −1`, `x₀ ↦ 0`, `b ↦ 1`.
    pub fn to_unit_disk_centered(&self, x0: f64) -> Mobius {
        let (a, b) = (self.interval.a, self.interval.b);
        Mobius { alpha: b - a, beta: -(b - a) * x0, gamma: a + b - 2.0 * x0, delta: x0 * (a + b) - 2.0 * a * b }
    }

    pub fn normalize(&self, w: Complex64) -> Complex64 {
        self.to_unit_disk().apply(w)
    }

    pub fn denormalize(&self, m: Complex64) -> Complex64 {
        self.to_unit_disk().inverse().apply(m)
    }

    /// Line coordinate of a point of the complexified line.
    pub fn coordinate(&self, z: &ComplexPoint) -> Result<Complex64> {
        self.interval.line.coordinate(z)
    }

    pub fn point(&self, w: Complex64) -> ComplexPoint {
        self.interval.line.point(w)
    }

    /// `1 − |m(w)|²`, computed from distances to the endpoints.
    pub fn one_minus_modulus_sq(&self, w: Complex64) -> f64 {
        let (a, b) = (self.interval.a, self.interval.b);
        4.0 * ((w.re - a) * (b - w.re) - w.im * w.im) / ((b - a) * (b - a))
    }

    /// Poincaré distance between two line coordinates of the slice.
    pub fn poincare(&self, w1: Complex64, w2: Complex64) -> f64 {
        let len = self.interval.length();
        let d = 4.0 * (w1 - w2).norm_sqr() / (len * len);
        poincare_from_parts(self.one_minus_modulus_sq(w1), self.one_minus_modulus_sq(w2), d)
    }
}

/// Result of [`Tube::core_distance`].
#[derive(Debug, Clone, PartialEq)]
pub struct CoreDistance {
    /// `artanh(tan(u/2))`.
    pub distance: f64,
    /// Chart coordinates of the nearest real point along the slice geodesic.
    pub foot: DVector<f64>,
    /// Poincaré distance from the point to the foot, measured in the slice.
    pub distance_via_foot: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tube {
    base: ConvexDomain,
    puncture: Option<f64>,
}

impl Tube {
    pub fn new(base: ConvexDomain) -> Result<Self> {
        Ok(Self { base: base.validated()?, puncture: None })
    }

    /// The tube with the closed normalized disk of radius `r` removed from its
    /// slice. Only defined over an interval, where there is a single slice; it
    /// is a deliberately non-simply-connected region for negative controls.
    pub fn punctured(base: ConvexDomain, r: f64) -> Result<Self> {
        if base.dim() != 1 {
            return Err(Error::UnsupportedConfiguration("punctured tubes need a one-dimensional base".into()));
        }
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::Validation(format!("puncture radius {r} outside (0,1)")));
        }
        Ok(Self { base: base.validated()?, puncture: Some(r) })
    }

    pub fn base(&self) -> &ConvexDomain {
        &self.base
    }

    pub fn chart(&self) -> &Chart {
        self.base.chart()
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn puncture(&self) -> Option<f64> {
        self.puncture
    }

    pub fn chart_coords(&self, z: &ComplexPoint) -> Result<DVector<Complex64>> {
        self.chart().coords(z)
    }

    pub fn lift(&self, zeta: &DVector<Complex64>) -> ComplexPoint {
        self.chart().lift(zeta)
    }

    /// Tube over `A(D)` in `chart` (or in the transported chart).
    pub fn transformed(&self, a: &ProjectiveMap<f64>, chart: Option<Chart>) -> Result<Tube> {
        Ok(Tube { base: self.base.transformed(a, chart)?.validated()?, puncture: self.puncture })
    }

    fn punctured_out(&self, zeta: &DVector<Complex64>) -> bool {
        let Some(r) = self.puncture else { return false };
        let (lo, hi) = self.base.bbox();
        let m = (zeta[0] * 2.0 - (lo[0] + hi[0])) / (hi[0] - lo[0]);
        m.norm() <= r
    }

    /// Membership through the slice disk of the real trace line.
    pub fn contains(&self, z: &ComplexPoint) -> bool {
        if let Some(x) = as_real(z, REALITY_TOL) {
            if !self.base.contains(&x) {
                return false;
            }
            return match self.chart_coords(z) {
                Ok(zeta) => !self.punctured_out(&zeta),
                Err(_) => true,
            };
        }
        let Ok(slice) = self.slice_disk(z) else { return false };
        let Ok(w) = slice.coordinate(z) else { return false };
        if slice.normalize(w).norm() >= 1.0 {
            return false;
        }
        match self.chart_coords(z) {
            Ok(zeta) => !self.punctured_out(&zeta),
            Err(_) => true,
        }
    }

    /// Membership of a chart point: `x ∈ D` and `|y|² < −ab` on the chord along `y`.
    pub fn contains_chart(&self, zeta: &DVector<Complex64>) -> bool {
        self.membership_chart(zeta, 0.0) == Membership::Inside
    }

    /// Membership with a boundary band on the normalized slice modulus
    /// (or on the gauge for real points).
    pub fn membership_chart(&self, zeta: &DVector<Complex64>, band: f64) -> Membership {
        let x = linalg::re(zeta);
        let y = linalg::im(zeta);
        let verdict = if y.iter().all(|c| *c == 0.0) {
            let g = self.base.gauge(&x);
            if (1.0 - g).abs() < band {
                Membership::Boundary
            } else if self.base.contains_chart(&x) {
                Membership::Inside
            } else {
                Membership::Outside
            }
        } else {
            // The chord along y must pass through the open domain, so x ∈ D.
            match self.base.clip_params(&x, &y).filter(|_| self.base.contains_chart(&x)) {
                None => Membership::Outside,
                Some((lo, hi)) => {
                    // 1 − |m|² on the normalized slice, with z at line parameter i.
                    let len = hi - lo;
                    let margin = 4.0 * (-lo * hi - 1.0) / (len * len);
                    let modulus = (1.0 - margin).max(0.0).sqrt();
                    if (1.0 - modulus).abs() < band {
                        Membership::Boundary
                    } else if margin > 0.0 && lo < 0.0 && hi > 0.0 {
                        Membership::Inside
                    } else {
                        Membership::Outside
                    }
                }
            }
        };
        if verdict == Membership::Inside && self.punctured_out(zeta) {
            return Membership::Outside;
        }
        verdict
    }

    /// Membership by the pairwise criterion `Re(f̃(z)·conj g̃(z)) > 0` over the
    /// defining functionals of an HDomain base.
    pub fn contains_pairwise(&self, z: &ComplexPoint) -> Result<bool> {
        Ok(self.pairwise_margin(z)? > 0.0)
    }

    /// `min Re(f̃(z)·conj g̃(z)) / (|f̃(z)||g̃(z)|)` over pairs, a scale-free margin.
    pub fn pairwise_margin(&self, z: &ComplexPoint) -> Result<f64> {
        let Representation::HDomain { functionals } = self.base.representation() else {
            return Err(Error::Representation("hdomain"));
        };
        let vals: Vec<Complex64> = functionals.iter().map(|f| f.eval_complex(z)).collect();
        let mut margin = f64::INFINITY;
        for i in 0..vals.len() {
            for j in i..vals.len() {
                let den = vals[i].norm() * vals[j].norm();
                let m = if den == 0.0 { 0.0 } else { (vals[i] * vals[j].conj()).re / den };
                margin = margin.min(m);
            }
        }
        Ok(margin)
    }

    pub fn slice_disk(&self, z: &ComplexPoint) -> Result<SliceDisk> {
        let line = real_trace_line(z)?;
        self.slice_of_line(&line)
    }

    pub fn slice_of_line(&self, line: &RealLine) -> Result<SliceDisk> {
        let interval = self.base.line_clip(line).ok_or(Error::EmptySlice)?;
        Ok(SliceDisk { interval })
    }

    /// `(p(z), p(z̄))`: reciprocal exit parameters of the rays `x ± s·y`.
    pub fn p_pair(&self, zeta: &DVector<Complex64>) -> Result<(f64, f64)> {
        let x = linalg::re(zeta);
        let y = linalg::im(zeta);
        if !self.base.contains_chart(&x) {
            return Err(Error::NotInterior);
        }
        let ny = y.norm();
        if ny == 0.0 {
            return Ok((0.0, 0.0));
        }
        let (lo, hi) = self.base.clip_params(&x, &(&y / ny)).ok_or(Error::NotInterior)?;
        Ok((ny / hi, ny / -lo))
    }

    /// `p(z) = inf{t > 0 : x + y/t ∈ D}`.
    pub fn p_value(&self, zeta: &DVector<Complex64>) -> Result<f64> {
        Ok(self.p_pair(zeta)?.0)
    }

    /// `u(z) = arctan((p + p̄)/(1 − pp̄))`, continued to `π/2` at the tube boundary.
    pub fn u_value(&self, zeta: &DVector<Complex64>) -> Result<f64> {
        let x = linalg::re(zeta);
        let y = linalg::im(zeta);
        if !self.base.contains_chart(&x) {
            return Err(Error::OutsideTube);
        }
        let ny = y.norm();
        if ny == 0.0 {
            return Ok(0.0);
        }
        let (lo, hi) = self.base.clip_params(&x, &(&y / ny)).ok_or(Error::OutsideTube)?;
        let (p, pbar) = (ny / hi, ny / -lo);
        // 1 − pp̄ = (−ab − |y|²)/(−ab), formed without cancellation in pp̄.
        let prod = -lo * hi;
        let one_minus = (prod - ny * ny) / prod;
        if one_minus <= -1e-12 {
            return Err(Error::OutsideTube);
        }
        Ok((p + pbar).atan2(one_minus))
    }

    /// Kobayashi distance from `z` to the real part `D`, with its foot point.
    pub fn core_distance(&self, zeta: &DVector<Complex64>) -> Result<CoreDistance> {
        let u = self.u_value(zeta)?;
        let x = linalg::re(zeta);
        if u == 0.0 {
            return Ok(CoreDistance { distance: 0.0, foot: x, distance_via_foot: 0.0 });
        }
        let distance = (u / 2.0).tan().atanh();
        let z = self.lift(zeta);
        let slice = self.slice_disk(&z)?;
        let w = slice.normalize(slice.coordinate(&z)?);
        let (foot_m, l) = geodesic_foot(w)?;
        let t = slice.denormalize(Complex64::from(foot_m)).re;
        Ok(CoreDistance { distance, foot: slice.interval.affine.at(t), distance_via_foot: l })
    }

    pub fn boundary_classify(&self, z: &ComplexPoint, band: f64) -> BoundaryClass {
        if let Some(x) = as_real(z, REALITY_TOL) {
            if let Ok(xc) = self.chart().coords(&x) {
                if (1.0 - self.base.gauge(&xc)).abs() < band {
                    return BoundaryClass::RealBoundary;
                }
            }
            return if self.base.contains(&x) { BoundaryClass::Interior } else { BoundaryClass::Exterior };
        }
        if let Ok(zeta) = self.chart_coords(z) {
            if let Ok((p, pbar)) = self.p_pair(&zeta) {
                if (p * pbar - 1.0).abs() < band {
                    return BoundaryClass::ComplexBoundary;
                }
            }
        }
        if self.contains(z) {
            BoundaryClass::Interior
        } else {
            BoundaryClass::Exterior
        }
    }

    /// Kobayashi distance where it is known in closed form: both points real
    /// (the Hilbert distance), or both on one slice (the slice Poincaré distance).
    pub fn kobayashi_supported(&self, z: &ComplexPoint, w: &ComplexPoint) -> Result<f64> {
        let zr = as_real(z, REALITY_TOL);
        let wr = as_real(w, REALITY_TOL);
        if let (Some(x), Some(y)) = (&zr, &wr) {
            return self.base.hilbert_distance_points(x, y);
        }
        let (anchor, other) = if zr.is_none() { (z, w) } else { (w, z) };
        let slice = self.slice_disk(anchor)?;
        let (Ok(a), Ok(b)) = (slice.coordinate(anchor), slice.coordinate(other)) else {
            return Err(Error::UnsupportedConfiguration("points are not on one complexified real line".into()));
        };
        for c in [a, b] {
            if slice.normalize(c).norm() >= 1.0 {
                return Err(Error::OutsideTube);
            }
        }
        Ok(slice.poincare(a, b))
    }

    /// Poincaré distance of two real chart points, computed in the slice of
    /// their common line rather than by the cross-ratio.
    pub fn slice_poincare(&self, x: &DVector<f64>, y: &DVector<f64>) -> Result<f64> {
        if !self.base.contains_chart(x) || !self.base.contains_chart(y) {
            return Err(Error::NotInterior);
        }
        let d = y - x;
        if d.norm() == 0.0 {
            return Ok(0.0);
        }
        let line = RealLine::new(self.chart().lift(x), self.chart().lift_direction(&d))?;
        let slice = self.slice_of_line(&line)?;
        let tx = slice.coordinate(&self.chart().lift(x).complexify())?;
        let ty = slice.coordinate(&self.chart().lift(y).complexify())?;
        Ok(slice.poincare(tx, ty))
    }

    /// A tube point drawn by choosing `x ∈ D`, a direction, and a modulus below the slice radius.
    pub fn sample_point<R: Rng + ?Sized>(&self, rng: &mut R) -> DVector<Complex64> {
        let n = self.dim();
        loop {
            let x = self.base.sample_interior(rng);
            let dir = DVector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal));
            let nd = dir.norm();
            if nd == 0.0 {
                continue;
            }
            let dir = dir / nd;
            let Some((lo, hi)) = self.base.clip_params(&x, &dir) else { continue };
            let r = (-lo * hi).max(0.0).sqrt() * rng.random::<f64>();
            let zeta = DVector::from_fn(n, |i, _| Complex64::new(x[i], r * dir[i]));
            if self.puncture.is_none() || self.contains_chart(&zeta) {
                return zeta;
            }
        }
    }

    /// Chart box `(re_lo, re_hi, im_half)` containing the tube with margin on every side.
    pub fn sampling_box(&self) -> (DVector<f64>, DVector<f64>, f64) {
        let (lo, hi) = self.base.bbox();
        let pad = (&hi - &lo) * 0.5;
        (&lo - &pad, &hi + &pad, self.base.extent())
    }

    /// A point drawn uniformly from [`sampling_box`](Self::sampling_box).
    pub fn sample_box<R: Rng + ?Sized>(&self, rng: &mut R) -> DVector<Complex64> {
        let (lo, hi, h) = self.sampling_box();
        DVector::from_fn(self.dim(), |i, _| Complex64::new(rng.random_range(lo[i]..hi[i]), rng.random_range(-h..h)))
    }
}
