//! The homeomorphism from a tube `Ωᵉ` onto the tangent bundle `TΩ`.
//!
//! A non-real `z` is sent to the point where the slice geodesic joining `z` and
//! `z̄` crosses the real diameter, together with a tangent vector along the
//! slice line whose Hilbert–Finsler length is the Poincaré distance from `z` to
//! that crossing. The sign of the vector records which half of the slice `z`
//! lies in, so conjugation acts as fiberwise negation.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg;
use crate::projective::{as_real, ComplexPoint, REALITY_TOL};
use crate::tube::{poincare_disk, Tube};

/// A point of `TΩ` in chart form: base, unit chart direction, Finsler magnitude.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentVector {
    pub base: DVector<f64>,
    pub direction: DVector<f64>,
    pub magnitude: f64,
}

impl TangentVector {
    pub fn zero(base: DVector<f64>) -> Self {
        let n = base.len();
        let mut direction = DVector::zeros(n);
        if n > 0 {
            direction[0] = 1.0;
        }
        Self { base, direction, magnitude: 0.0 }
    }

    pub fn negated(&self) -> Self {
        Self { base: self.base.clone(), direction: -&self.direction, magnitude: self.magnitude }
    }

    pub fn is_zero(&self) -> bool {
        self.magnitude == 0.0
    }

    /// The vector itself in chart coordinates: `direction · magnitude / F(base, direction)`.
    pub fn chart_vector(&self, tube: &Tube) -> Result<DVector<f64>> {
        if self.is_zero() {
            return Ok(DVector::zeros(self.base.len()));
        }
        let f = tube.base().finsler_norm(&self.base, &self.direction)?;
        Ok(&self.direction * (self.magnitude / f))
    }
}

/// Foot `x*` of the Poincaré geodesic through `w` and `w̄` on the real diameter
/// of the unit disk, and the distance `l = k(w, x*)`.
pub fn geodesic_foot(w: Complex64) -> Result<(f64, f64)> {
    if w.im == 0.0 {
        return Err(Error::RealInput);
    }
    if w.norm() >= 1.0 {
        return Err(Error::OutsideTube);
    }
    let foot = if w.re == 0.0 {
        0.0
    } else {
        // The geodesic is the circle centered at c on the real axis, orthogonal
        // to the unit circle; its inner crossing is 1/c reflected, written stably.
        let c = (w.norm_sqr() + 1.0) / (2.0 * w.re);
        c.signum() / (c.abs() + (c * c - 1.0).max(0.0).sqrt())
    };
    Ok((foot, poincare_disk(w, Complex64::from(foot))))
}

/// `f(z) = (x_z, l_z·Jv)`; real points go to the zero section.
pub fn to_tangent(tube: &Tube, z: &ComplexPoint) -> Result<TangentVector> {
    if let Some(x) = as_real(z, REALITY_TOL) {
        if !tube.base().contains(&x) {
            return Err(Error::OutsideTube);
        }
        let xc = tube.chart().coords(&x).map_err(|_| Error::OutsideTube)?;
        return Ok(TangentVector::zero(xc));
    }
    let slice = tube.slice_disk(z).map_err(|_| Error::OutsideTube)?;
    let w = slice.normalize(slice.coordinate(z)?);
    if w.norm() >= 1.0 {
        return Err(Error::OutsideTube);
    }
    let (foot, magnitude) = geodesic_foot(w)?;
    let t = slice.denormalize(Complex64::from(foot)).re;
    let affine = &slice.interval.affine;
    let direction = if w.im > 0.0 { affine.direction.clone() } else { -&affine.direction };
    Ok(TangentVector { base: affine.at(t), direction, magnitude })
}

/// [`to_tangent`] on chart coordinates.
pub fn to_tangent_chart(tube: &Tube, zeta: &DVector<Complex64>) -> Result<TangentVector> {
    to_tangent(tube, &tube.lift(zeta))
}

/// Inverse of [`to_tangent`], in chart coordinates.
pub fn from_tangent_chart(tube: &Tube, t: &TangentVector) -> Result<DVector<Complex64>> {
    let base = &t.base;
    if !tube.base().contains_chart(base) {
        return Err(Error::NotInterior);
    }
    if t.magnitude == 0.0 {
        return Ok(linalg::to_complex(base));
    }
    let len = t.direction.norm();
    if len == 0.0 || !len.is_finite() {
        return Err(Error::ZeroDirection);
    }
    let dir = &t.direction / len;
    let (lo, hi) = tube.base().clip_params(base, &dir).ok_or(Error::NotInterior)?;
    // Normalize the chord to (−1, 1); the base lands at c0. The disk
    // automorphism m ↦ (m − c0)/(1 − c0·m) moves it to 0, where the point at
    // Poincaré distance l upward is i·tanh(l).
    let c0 = -(lo + hi) / (hi - lo);
    let q = Complex64::new(0.0, t.magnitude.tanh());
    let m = (q + c0) / (q * c0 + 1.0);
    let s = (m * (hi - lo) + (lo + hi)) * 0.5;
    Ok(DVector::from_fn(base.len(), |i, _| s * dir[i] + base[i]))
}

pub fn from_tangent(tube: &Tube, t: &TangentVector) -> Result<ComplexPoint> {
    Ok(tube.lift(&from_tangent_chart(tube, t)?))
}
