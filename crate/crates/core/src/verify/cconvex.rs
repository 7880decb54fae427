use nalgebra::DVector;
use num_complex::Complex64;
use rand::Rng;

use super::raster::SliceRaster;
use super::{fmt_cvec, gaussian_complex};
use crate::error::{Error, Result};
use crate::exec::{derive_seed, map_indexed, sample_rng, Execution};
use crate::report::VerifierReport;
use crate::tube::Tube;

/// Share of lines drawn through two tube points; the rest pass through one
/// tube point in a Gaussian complex direction.
const TWO_POINT_SHARE: f64 = 0.7;

/// The `i`-th sampled line as `(origin, unit direction)` in chart coordinates.
/// The origin is always a tube point.
pub fn sample_line(tube: &Tube, seed: u64, i: usize) -> (DVector<Complex64>, DVector<Complex64>) {
    let mut rng = sample_rng(derive_seed(seed, "cconv"), i as u64);
    let two_point = rng.random::<f64>() < TWO_POINT_SHARE;
    loop {
        let p = tube.sample_point(&mut rng);
        let d = if two_point { tube.sample_point(&mut rng) - &p } else { gaussian_complex(&mut rng, tube.dim()) };
        let nd = d.norm();
        if nd > 1e-9 * tube.base().extent() {
            return (p, d.unscale(nd));
        }
    }
}

/// Rasterizes the slice of the tube by sampled complex lines and checks that
/// each is one 4-connected region whose complement is one 8-connected piece,
/// after [`SliceRaster::topology`] settles splits finer than a cell.
pub fn verify_c_convexity(tube: &Tube, n_lines: usize, resolution: usize, seed: u64, exec: Execution) -> Result<VerifierReport> {
    let outcomes = map_indexed(exec, n_lines, |i| {
        let (origin, direction) = sample_line(tube, seed, i);
        let raster = SliceRaster::fit(tube, &origin, &direction, resolution)?;
        Ok((origin, direction, raster.topology(tube)))
    });
    let mut report = VerifierReport::new("c_convexity", 0.0, seed);
    report.note(format!("resolution={resolution}"));
    let mut bridged = 0;
    for (i, o) in outcomes.into_iter().enumerate() {
        let (origin, direction, topo) = o.map_err(|e: Error| match e {
            Error::Resolution(m) => Error::Resolution(format!("line {i}: {m}")),
            e => e,
        })?;
        report.samples_run += 1;
        let witness = || format!("line {i}: origin={} direction={}", fmt_cvec(&origin), fmt_cvec(&direction));
        bridged += topo.bridged;
        if topo.region != 1 {
            report.violation("slice connected", witness(), topo.region as f64);
        }
        if topo.complement != 1 {
            report.violation("complement connected", witness(), topo.complement as f64);
        }
    }
    report.note(format!("sub-cell splits bridged={bridged}"));
    Ok(report)
}
