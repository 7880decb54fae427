use nalgebra::DVector;
use num_complex::Complex64;

use super::{fmt_cvec, in_band, run_samples};
use crate::domain::ConvexDomain;
use crate::error::{Error, Result};
use crate::exec::{derive_seed, sample_rng, Execution};
use crate::report::VerifierReport;
use crate::tube::{Membership, Tube};

/// Halvings of the last parameter tried before a point counts as not absorbed.
const MAX_HALVINGS: usize = 60;

fn check_deltas(deltas: &[f64]) -> Result<()> {
    if deltas.is_empty() || deltas.iter().any(|d| !(*d > 0.0 && *d < 1.0)) || deltas.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Validation("deltas must be strictly decreasing in (0,1)".into()));
    }
    Ok(())
}

/// Tubes over `scaled_copy(δ)` for the given parameters followed by repeated
/// halvings of the last one.
fn scaled_tubes(d: &ConvexDomain, deltas: &[f64]) -> Result<Vec<(f64, Tube)>> {
    let last = *deltas.last().expect("nonempty");
    let extra = (1..=MAX_HALVINGS).map(|k| last * 0.5f64.powi(k as i32));
    deltas.iter().copied().chain(extra).map(|delta| Ok((delta, Tube::new(d.scaled_copy(delta)?)?))).collect()
}

/// Index of the first parameter in `deltas`, continued by halving the last
/// one, whose scaled tube contains `zeta`.
pub fn absorption_index(d: &ConvexDomain, deltas: &[f64], zeta: &DVector<Complex64>) -> Result<Option<usize>> {
    check_deltas(deltas)?;
    let tubes = scaled_tubes(d, deltas)?;
    Ok(tubes.iter().position(|(_, t)| t.contains_chart(zeta)))
}

/// Checks `Dᵉ_{δ_k} ⊂ Dᵉ_{δ_{k+1}} ⊂ Dᵉ` on samples of each scaled tube, and
/// that every sample of `Dᵉ` lies in some scaled tube.
pub fn verify_exhaustion_monotone(d: &ConvexDomain, deltas: &[f64], n_samples: usize, seed: u64, exec: Execution) -> Result<VerifierReport> {
    check_deltas(deltas)?;
    let tube = Tube::new(d.clone())?;
    let tubes = scaled_tubes(d, deltas)?;
    let k = deltas.len();

    let s1 = derive_seed(seed, "exhaust-monotone");
    let monotone = run_samples("scaled tubes nested", 0.0, seed, exec, n_samples, |i, r| {
        let mut rng = sample_rng(s1, i as u64);
        let level = i % k;
        let zeta = tubes[level].1.sample_point(&mut rng);
        if in_band(&tubes[level].1, &zeta) {
            r.skipped += 1;
            return;
        }
        r.samples_run += 1;
        let outer = tubes[level + 1..k].iter().map(|(_, t)| t).chain(std::iter::once(&tube));
        for t in outer {
            if t.membership_chart(&zeta, 0.0) != Membership::Inside {
                r.violation("nested", format!("delta={} point={}", tubes[level].0, fmt_cvec(&zeta)), 1.0);
            }
        }
    });

    let s2 = derive_seed(seed, "exhaust-absorb");
    let absorbed = run_samples("tube exhausted", 0.0, seed, exec, n_samples, |i, r| {
        let mut rng = sample_rng(s2, i as u64);
        let zeta = tube.sample_point(&mut rng);
        if in_band(&tube, &zeta) {
            r.skipped += 1;
            return;
        }
        r.samples_run += 1;
        match tubes.iter().position(|(_, t)| t.contains_chart(&zeta)) {
            Some(j) if j >= k => r.note(format!("absorbed after {} halvings: {}", j + 1 - k, fmt_cvec(&zeta))),
            Some(_) => {}
            None => r.violation("absorbed", fmt_cvec(&zeta), f64::NAN),
        }
    });

    let mut report = VerifierReport::new("exhaustion_monotone", 0.0, seed);
    report.absorb(monotone);
    report.absorb(absorbed);
    Ok(report)
}
