//! Sampling checks of the tube theorems.
//!
//! Each verifier is a map over sample indices. Sample `i` draws from its own
//! stream `sample_rng(seed', i)` and returns a partial report; partials are
//! merged in index order, so the result does not depend on the [`Execution`]
//! strategy.

mod cconvex;
mod dual;
mod exhaust;
mod homeo;
mod linconv;
mod metric;
pub mod raster;

pub use cconvex::{sample_line, verify_c_convexity};
pub use dual::verify_duality_identity;
pub use exhaust::{absorption_index, verify_exhaustion_monotone};
pub use homeo::{pushforward_tangent, validate_group, verify_homeomorphism};
pub use linconv::{flipped_separator, verify_linear_convexity, verify_linear_convexity_with};
pub use metric::verify_metric_consistency;
pub use raster::SliceRaster;

use nalgebra::DVector;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::exec::{map_indexed, Execution};
use crate::linalg;
use crate::projective::{Chart, ComplexFunctional};
use crate::report::VerifierReport;
use crate::tube::{Membership, Tube};

/// Samples within this distance of a tube boundary (in normalized slice
/// modulus, or in gauge for real points) are skipped and counted.
pub const SKIP_BAND: f64 = 1e-6;

/// Runs `f` for every index and merges the partial reports in order.
pub(crate) fn run_samples<F>(name: &str, tolerance: f64, seed: u64, exec: Execution, n: usize, f: F) -> VerifierReport
where
    F: Fn(usize, &mut VerifierReport) + Sync + Send,
{
    let parts = map_indexed(exec, n, |i| {
        let mut r = VerifierReport::new(name, tolerance, seed);
        f(i, &mut r);
        r
    });
    let mut report = VerifierReport::new(name, tolerance, seed);
    for p in parts {
        report.merge(p);
    }
    report
}

/// True when `zeta` is too close to `∂Dᵉ` or has real part too close to `∂D`.
pub(crate) fn in_band(tube: &Tube, zeta: &DVector<Complex64>) -> bool {
    let x = linalg::re(zeta);
    (1.0 - tube.base().gauge(&x)).abs() < SKIP_BAND || tube.membership_chart(zeta, SKIP_BAND) == Membership::Boundary
}

pub(crate) fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DVector<Complex64> {
    DVector::from_fn(n, |_, _| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
}

/// `ξ` on chart points as `a·ζ + b` (bilinear, no conjugation).
pub(crate) fn chart_form(chart: &Chart, xi: &ComplexFunctional) -> (DVector<Complex64>, Complex64) {
    let n = chart.dim();
    let row = DVector::from_fn(n + 1, |j, _| (0..=n).map(|k| xi.coeffs()[k] * chart.inverse()[(k, j)]).sum::<Complex64>());
    (row.rows(0, n).into_owned(), row[n])
}

/// A point of `ker ξ` near `zeta`: the orthogonal projection onto the kernel,
/// moved within the kernel by a Gaussian step of size about `spread`.
pub(crate) fn kernel_point_near<R: Rng + ?Sized>(
    a: &DVector<Complex64>,
    b: Complex64,
    zeta: &DVector<Complex64>,
    spread: f64,
    rng: &mut R,
) -> DVector<Complex64> {
    let abar = a.map(|c| c.conj());
    let na = a.norm_squared();
    let eval = |v: &DVector<Complex64>| a.iter().zip(v.iter()).map(|(x, y)| x * y).sum::<Complex64>();
    let foot = zeta - &abar * ((eval(zeta) + b) / na);
    let v = gaussian_complex(rng, zeta.len()).scale(spread * rng.random::<f64>());
    let v = &v - &abar * (eval(&v) / na);
    foot + v
}

fn fmt_complex(c: Complex64) -> String {
    if c.im < 0.0 {
        format!("{}-{}i", c.re, -c.im)
    } else {
        format!("{}+{}i", c.re, c.im)
    }
}

/// Witness formatting for complex chart points.
pub(crate) fn fmt_cvec(v: &DVector<Complex64>) -> String {
    v.iter().map(|c| fmt_complex(*c)).collect::<Vec<_>>().join(",")
}

pub(crate) fn fmt_rvec(v: &DVector<f64>) -> String {
    v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
}
