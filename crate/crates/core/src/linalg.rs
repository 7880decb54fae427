//! Small dense helpers shared by the projective kernel.

use nalgebra::{ComplexField, DMatrix, DVector};
use num_complex::Complex64;

/// Ratio of the second to the first singular value of the 2×m stack `[a; b]`.
///
/// Uses the Gram determinant `|a|²|b|² − |a·b̄|²`, which for real vectors is
/// the Lagrange sum of squared 2×2 minors, so no cancellation occurs.
pub fn rank2_ratio<T: ComplexField<RealField = f64>>(a: &DVector<T>, b: &DVector<T>) -> f64 {
    let aa: f64 = a.iter().map(|x| x.clone().modulus_squared()).sum();
    let bb: f64 = b.iter().map(|x| x.clone().modulus_squared()).sum();
    if aa == 0.0 && bb == 0.0 {
        return 0.0;
    }
    // Sum over i<j of |a_i b_j − a_j b_i|² equals the Gram determinant.
    let mut det = 0.0;
    for i in 0..a.len() {
        for j in (i + 1)..a.len() {
            let m = a[i].clone() * b[j].clone() - a[j].clone() * b[i].clone();
            det += m.modulus_squared();
        }
    }
    let tr = aa + bb;
    let disc = (tr * tr - 4.0 * det).max(0.0).sqrt();
    let l1 = 0.5 * (tr + disc);
    if l1 == 0.0 {
        return 0.0;
    }
    let l2 = det / l1;
    (l2 / l1).max(0.0).sqrt()
}

/// Multiplies a real matrix into a vector over any field containing the reals.
pub fn mul_real<T: ComplexField<RealField = f64>>(m: &DMatrix<f64>, v: &DVector<T>) -> DVector<T> {
    DVector::from_fn(m.nrows(), |i, _| {
        let mut acc = T::zero();
        for j in 0..m.ncols() {
            acc += T::from_real(m[(i, j)]) * v[j].clone();
        }
        acc
    })
}

pub fn to_complex(v: &DVector<f64>) -> DVector<Complex64> {
    v.map(Complex64::from)
}

pub fn re(v: &DVector<Complex64>) -> DVector<f64> {
    v.map(|c| c.re)
}

pub fn im(v: &DVector<Complex64>) -> DVector<f64> {
    v.map(|c| c.im)
}

/// Orthonormal basis of the null space of `m`, using singular values below
/// `rel_tol` times the largest.
pub fn nullspace<T: ComplexField<RealField = f64>>(m: &DMatrix<T>, rel_tol: f64) -> Vec<DVector<T>> {
    let cols = m.ncols();
    if m.nrows() == 0 {
        return (0..cols)
            .map(|k| DVector::from_fn(cols, |i, _| if i == k { T::one() } else { T::zero() }))
            .collect();
    }
    // Pad to at least square so the SVD exposes the full right singular basis.
    let rows = m.nrows().max(cols);
    let mut padded = DMatrix::<T>::zeros(rows, cols);
    padded.view_mut((0, 0), (m.nrows(), cols)).copy_from(m);
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let smax = svd.singular_values.iter().cloned().fold(0.0_f64, f64::max);
    let cutoff = if smax == 0.0 { 0.0 } else { rel_tol * smax };
    let mut out = Vec::new();
    for (k, s) in svd.singular_values.iter().enumerate() {
        if *s <= cutoff {
            out.push(v_t.row(k).transpose().map(|x| x.conjugate()));
        }
    }
    out
}

/// Euclidean norm of a real slice.
pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Sign-canonical unit vector: first entry with non-negligible magnitude is positive.
pub fn canonical_direction(d: &DVector<f64>) -> DVector<f64> {
    let n = d.norm();
    let mut u = d / n;
    if let Some(first) = u.iter().find(|x| x.abs() > 1e-12) {
        if *first < 0.0 {
            u = -u;
        }
    }
    u
}
