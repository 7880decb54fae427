//! Convex projective manifolds `Ω/Γ` and their complexifications `Ωᵉ/Γ`.
//!
//! Only freeness of the action on `Ωᵉ` is checked, word by word. The quotient
//! metric and fundamental domains are implemented for cyclic groups acting on
//! a segment of `RP¹`, where `Ωᵉ` is a single disk.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::domain::ConvexDomain;
use crate::error::{Error, Result};
use crate::exec::{derive_seed, map_indexed, sample_rng, Execution};
use crate::linalg;
use crate::projective::{Chart, ComplexPoint, ProjectiveMap, RealFunctional};
use crate::report::VerifierReport;
use crate::tube::{Membership, Tube, BOUNDARY_BAND};
use crate::verify::validate_group;

/// A properly convex domain with a finite set of generators preserving it.
#[derive(Debug, Clone)]
pub struct ConvexRPManifold {
    tube: Tube,
    generators: Vec<ProjectiveMap<f64>>,
}

/// A reduced word in the generators: `(generator index, exponent ±1)` letters.
pub type Word = Vec<(usize, i8)>;

pub fn format_word(w: &Word) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter().map(|(g, e)| if *e > 0 { format!("g{}", g + 1) } else { format!("g{}^-1", g + 1) }).collect::<Vec<_>>().join("·")
}

/// All reduced words of length `1..=max_len`.
pub fn reduced_words(n_generators: usize, max_len: usize) -> Vec<Word> {
    let letters: Vec<(usize, i8)> = (0..n_generators).flat_map(|g| [(g, 1), (g, -1)]).collect();
    let mut out = Vec::new();
    let mut layer: Vec<Word> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for l in &letters {
                if w.last().is_some_and(|last| last.0 == l.0 && last.1 == -l.1) {
                    continue;
                }
                let mut v = w.clone();
                v.push(*l);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

impl ConvexRPManifold {
    /// Validates that every generator preserves the domain. Freeness is not
    /// assumed; see [`check_free_action`].
    pub fn new(domain: ConvexDomain, generators: Vec<ProjectiveMap<f64>>) -> Result<Self> {
        validate_group(&domain, &generators)?;
        Ok(Self { tube: Tube::new(domain)?, generators })
    }

    /// `Ω = {[a:b] : ab > 0} ⊂ RP¹` with `Γ = ⟨diag(2, 1/2)⟩`.
    ///
    /// In the coordinate `w = a/b`, `Ω` is the positive half-line, `Ωᵉ` the
    /// right half-plane and the generator acts by `w ↦ 4w`. The domain is
    /// stored in the chart `s = (a − b)/(a + b)`, where it is `(−1, 1)`.
    pub fn half_line() -> Self {
        let f = |c: &[f64]| RealFunctional::from_slice(c).expect("nonzero");
        let chart = Chart::new(&f(&[1.0, 1.0]), &[f(&[1.0, -1.0])]).expect("chart");
        let domain = ConvexDomain::hdomain(vec![f(&[1.0, 0.0]), f(&[0.0, 1.0])], chart, None).expect("half-line");
        let g = ProjectiveMap::new(DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 0.5])).expect("generator");
        Self::new(domain, vec![g]).expect("diag(2, 1/2) preserves the half-line")
    }

    pub fn domain(&self) -> &ConvexDomain {
        self.tube.base()
    }

    pub fn tube(&self) -> &Tube {
        &self.tube
    }

    pub fn generators(&self) -> &[ProjectiveMap<f64>] {
        &self.generators
    }

    /// The product of the letters of `w`, leftmost applied last.
    pub fn word_map(&self, w: &Word) -> ProjectiveMap<f64> {
        let n = self.domain().dim();
        w.iter().fold(ProjectiveMap::identity(n), |acc, (g, e)| {
            let m = if *e > 0 { self.generators[*g].clone() } else { self.generators[*g].inverse() };
            acc.compose(&m)
        })
    }

    fn contains(&self, z: &ComplexPoint) -> bool {
        match self.tube.chart_coords(z) {
            Ok(zeta) => self.tube.membership_chart(&zeta, BOUNDARY_BAND) == Membership::Inside,
            // The tube lies in the affine part of its chart.
            Err(_) => false,
        }
    }
}

/// Fixed points of a real projective map: bases of the complex eigenspaces.
/// Higher-dimensional eigenspaces are represented by their basis vectors and
/// pairwise sums.
fn fixed_points(m: &DMatrix<f64>) -> Vec<ComplexPoint> {
    let n = m.nrows();
    let mc = m.map(Complex64::from);
    let scale = m.norm();
    let mut eigs: Vec<Complex64> = Vec::new();
    for l in m.complex_eigenvalues().iter() {
        if !eigs.iter().any(|e| (e - l).norm() <= 1e-9 * scale) {
            eigs.push(*l);
        }
    }
    let mut out = Vec::new();
    for l in eigs {
        let shifted = &mc - DMatrix::from_diagonal_element(n, n, l);
        let basis = linalg::nullspace(&shifted, 1e-8);
        for (i, v) in basis.iter().enumerate() {
            out.extend(ComplexPoint::new(v.clone()).ok());
            for w in &basis[i + 1..] {
                out.extend(ComplexPoint::new(v + w).ok());
            }
        }
    }
    out
}

/// For every reduced word up to length `word_length`, asserts that no complex
/// fixed point of the word lies in `Ωᵉ`. The empty word is skipped.
pub fn check_free_action(m: &ConvexRPManifold, word_length: usize, exec: Execution) -> VerifierReport {
    let words = reduced_words(m.generators.len(), word_length);
    let results = map_indexed(exec, words.len(), |i| {
        let a = m.word_map(&words[i]);
        let mat = a.matrix();
        let scalar = mat[(0, 0)];
        let identity_like = (mat - DMatrix::from_diagonal_element(mat.nrows(), mat.ncols(), scalar)).norm() <= 1e-12 * mat.norm();
        if identity_like {
            return Some("word acts as the identity".to_string());
        }
        fixed_points(mat).into_iter().find(|p| m.contains(p)).map(|p| format!("fixed point {:?} in the tube", p.canonical().as_slice()))
    });
    let mut report = VerifierReport::new("free_action", 0.0, 0);
    report.skipped = 1;
    for (w, r) in words.iter().zip(results) {
        report.samples_run += 1;
        if let Some(msg) = r {
            report.violation("no fixed point in tube", format!("{}: {msg}", format_word(w)), 1.0);
        }
    }
    report.note(format!("words up to length {word_length}"));
    report
}

/// Smallest sine distance allowed between a tube sample and its image under a nontrivial word.
const ORBIT_SEPARATION: f64 = 1e-9;

/// On tube samples and every word up to `word_length`: `γ` preserves tube
/// membership and commutes with conjugation, and `γz` stays away from `z`
/// (orbit discreteness on samples, in the projective sine distance).
pub fn check_action_invariants(m: &ConvexRPManifold, word_length: usize, n_samples: usize, seed: u64, exec: Execution) -> VerifierReport {
    let words = reduced_words(m.generators.len(), word_length);
    let maps: Vec<_> = words.iter().map(|w| m.word_map(w)).collect();
    let stream = derive_seed(seed, "action");
    let parts = map_indexed(exec, n_samples, |i| {
        let mut r = VerifierReport::new("action_invariants", 1e-9, seed);
        let mut separation = f64::INFINITY;
        let mut rng = sample_rng(stream, i as u64);
        let use_box = i % 2 == 1;
        let zeta = if use_box { m.tube.sample_box(&mut rng) } else { m.tube.sample_point(&mut rng) };
        if m.tube.membership_chart(&zeta, 1e-6) == Membership::Boundary {
            r.skipped += 1;
            return (r, separation);
        }
        r.samples_run += 1;
        let z = m.tube.lift(&zeta);
        let inside = m.contains(&z);
        for (w, a) in words.iter().zip(&maps) {
            let gz = a.apply_complex(&z);
            if m.contains(&gz) != inside {
                r.violation("membership preserved", format!("{} at {:?}", format_word(w), zeta.as_slice()), 1.0);
            }
            let lhs = a.apply_complex(&z.conj());
            let rhs = gz.conj();
            let err = linalg::rank2_ratio(lhs.coords(), rhs.coords());
            r.check("conjugation commutes", || format!("{} at {:?}", format_word(w), zeta.as_slice()), err, 1e-9);
            if inside {
                let gap = linalg::rank2_ratio(gz.coords(), z.coords());
                separation = separation.min(gap);
                if gap < ORBIT_SEPARATION {
                    r.violation("orbit discrete", format!("{} at {:?}", format_word(w), zeta.as_slice()), gap);
                }
            }
        }
        (r, separation)
    });
    let mut report = VerifierReport::new("action_invariants", 1e-9, seed);
    let mut separation = f64::INFINITY;
    for (p, s) in parts {
        report.merge(p);
        separation = separation.min(s);
    }
    report.note(format!("min orbit separation={separation:e}"));
    report
}

/// Eigen-coordinate of a cyclic action on `RP¹`: the generator acts by
/// `w ↦ μ·w` with `μ > 1`, and `Ω` is `w > 0`.
struct CyclicCoordinate {
    /// Columns: the expanding and the contracting eigenvector.
    basis_inv: DMatrix<f64>,
    mu: f64,
}

fn eigenvector_2x2(m: &DMatrix<f64>, l: f64) -> DVector<f64> {
    let (a, b, c, d) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    if b != 0.0 && b.abs() >= c.abs() {
        DVector::from_vec(vec![b, l - a])
    } else if c != 0.0 {
        DVector::from_vec(vec![l - d, c])
    } else if (l - a).abs() <= (l - d).abs() {
        DVector::from_vec(vec![1.0, 0.0])
    } else {
        DVector::from_vec(vec![0.0, 1.0])
    }
}

impl CyclicCoordinate {
    fn new(m: &ConvexRPManifold) -> Result<Self> {
        if m.domain().dim() != 1 || m.generators.len() != 1 {
            return Err(Error::UnsupportedConfiguration("cyclic quotients need a one-dimensional base and one generator".into()));
        }
        let g = m.generators[0].matrix();
        let (tr, det) = (g.trace(), g.determinant());
        let disc = tr * tr - 4.0 * det;
        if !(disc > 0.0) || det <= 0.0 {
            return Err(Error::UnsupportedConfiguration("the generator is not hyperbolic".into()));
        }
        let (l1, l2) = {
            let s = disc.sqrt();
            let (p, q) = (0.5 * (tr + s), 0.5 * (tr - s));
            if p.abs() >= q.abs() { (p, q) } else { (q, p) }
        };
        let mut e1 = eigenvector_2x2(g, l1);
        let e2 = eigenvector_2x2(g, l2);
        let mut basis = DMatrix::from_columns(&[e1.clone(), e2.clone()]);
        let mut inv = basis.clone().try_inverse().ok_or_else(|| Error::Degenerate("eigenvectors".into()))?;
        let reference = m.domain().reference_lift();
        let c = &inv * reference.coords();
        if c[0] / c[1] < 0.0 {
            e1 = -e1;
            basis = DMatrix::from_columns(&[e1, e2]);
            inv = basis.try_inverse().ok_or_else(|| Error::Degenerate("eigenvectors".into()))?;
        }
        Ok(Self { basis_inv: inv, mu: l1 / l2 })
    }

    fn coordinate(&self, z: &ComplexPoint) -> Result<Complex64> {
        let c = linalg::mul_real(&self.basis_inv, z.coords());
        if c[1].norm() == 0.0 {
            return Err(Error::Infinity);
        }
        Ok(c[0] / c[1])
    }
}

/// `γᵏ` for the single generator.
fn power(m: &ConvexRPManifold, k: i64) -> ProjectiveMap<f64> {
    let g = if k >= 0 { m.generators[0].clone() } else { m.generators[0].inverse() };
    (0..k.unsigned_abs()).fold(ProjectiveMap::identity(1), |acc, _| acc.compose(&g))
}

/// The orbit point `γᵏz` in the fundamental annulus `1 ≤ |w| < μ` of the
/// eigen-coordinate, with its exponent `k`, `|k| ≤ word_length`.
pub fn orbit_reduce(m: &ConvexRPManifold, z: &ComplexPoint, word_length: usize) -> Result<(ComplexPoint, i64)> {
    let cc = CyclicCoordinate::new(m)?;
    if !m.tube.contains(z) {
        return Err(Error::OutsideTube);
    }
    let w = cc.coordinate(z)?;
    let mut k = -(w.norm().ln() / cc.mu.ln()).floor() as i64;
    // The logarithm can land one step off at the annulus boundary; settle it exactly.
    let modulus_at = |k: i64| w.norm() * cc.mu.powi(k as i32);
    while modulus_at(k) < 1.0 {
        k += 1;
    }
    while modulus_at(k) >= cc.mu {
        k -= 1;
    }
    if k.unsigned_abs() as usize > word_length {
        return Err(Error::UnsupportedConfiguration(format!("orbit representative needs a word of length {}", k.abs())));
    }
    Ok((power(m, k).apply_complex(z), k))
}

/// `min_{|k| ≤ W} k_{Ωᵉ}(z, γᵏw)` for a cyclic group acting on a segment of `RP¹`.
pub fn quotient_distance_cyclic(m: &ConvexRPManifold, z: &ComplexPoint, w: &ComplexPoint, word_length: usize) -> Result<f64> {
    CyclicCoordinate::new(m)?;
    let w_len = word_length as i64;
    let mut best = f64::INFINITY;
    for k in -w_len..=w_len {
        let d = m.tube.kobayashi_supported(z, &power(m, k).apply_complex(w))?;
        best = best.min(d);
    }
    Ok(best)
}
