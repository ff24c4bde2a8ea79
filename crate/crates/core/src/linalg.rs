//! Dense linear-algebra helpers shared by the basis, frame and solver modules.

use faer::complex_native::c64;
use faer::{Mat, Side};
use nalgebra::{ComplexField, DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub fn to_complex(m: &DMatrix<f64>) -> CMatrix {
    m.map(|v| Complex64::new(v, 0.0))
}

pub fn to_complex_vec(v: &DVector<f64>) -> CVector {
    v.map(|x| Complex64::new(x, 0.0))
}

pub fn is_real(m: &CMatrix) -> bool {
    m.iter().all(|z| z.im == 0.0)
}

/// Relative tolerance used to group numerically equal eigenvalues.
const DEGENERACY_TOL: f64 = 1e-9;

/// Eigendecomposition of a Hermitian matrix with eigenvalues ascending,
/// degenerate blocks re-orthonormalized by ordered Gram-Schmidt, and every
/// eigenvector scaled so its largest-magnitude entry is real and positive.
pub fn hermitian_eigen(a: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Eigen("matrix has non-finite entries".into()));
    }
    let n = a.nrows();
    let (values, vectors) = if is_real(a) {
        let eig = Mat::<f64>::from_fn(n, n, |i, j| a[(i, j)].re).selfadjoint_eigendecomposition(Side::Lower);
        let (s, u) = (eig.s().column_vector(), eig.u());
        let values: Vec<f64> = (0..n).map(|i| s.read(i)).collect();
        (values, CMatrix::from_fn(n, n, |i, j| Complex64::new(u.read(i, j), 0.0)))
    } else {
        let eig = Mat::<c64>::from_fn(n, n, |i, j| c64::new(a[(i, j)].re, a[(i, j)].im))
            .selfadjoint_eigendecomposition(Side::Lower);
        let (s, u) = (eig.s().column_vector(), eig.u());
        let values: Vec<f64> = (0..n).map(|i| s.read(i).re).collect();
        (
            values,
            CMatrix::from_fn(n, n, |i, j| {
                let z = u.read(i, j);
                Complex64::new(z.re, z.im)
            }),
        )
    };
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Eigen("non-finite eigenvalue".into()));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]).then(i.cmp(&j)));
    let sorted_values: Vec<f64> = order.iter().map(|&i| values[i]).collect();
    let mut sorted = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        sorted.set_column(dst, &vectors.column(src));
    }

    let scale = sorted_values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && sorted_values[end] - sorted_values[end - 1] <= DEGENERACY_TOL * scale {
            end += 1;
        }
        if end - start > 1 {
            gram_schmidt_columns(&mut sorted, start, end);
        }
        start = end;
    }
    for k in 0..n {
        let mut col = sorted.column(k).clone_owned();
        fix_phase(&mut col);
        sorted.set_column(k, &col);
    }
    Ok((sorted_values, sorted))
}

/// Ordered modified Gram-Schmidt on columns `start..end` of `m`.
pub fn gram_schmidt_columns<T: ComplexField<RealField = f64> + Copy>(m: &mut DMatrix<T>, start: usize, end: usize) {
    for k in start..end {
        let mut v = m.column(k).clone_owned();
        for _ in 0..2 {
            for j in start..k {
                let u = m.column(j);
                let proj = u.dotc(&v);
                v.axpy(-proj, &u, T::one());
            }
        }
        let norm = v.norm();
        if norm > 0.0 {
            v.unscale_mut(norm);
        }
        m.set_column(k, &v);
    }
}

/// Scales `v` so that its largest-magnitude entry is real and positive. The
/// first maximal entry wins ties.
pub fn fix_phase(v: &mut CVector) {
    let mut best = 0;
    let mut best_mag = -1.0;
    for (i, z) in v.iter().enumerate() {
        let m = z.norm();
        if m > best_mag * (1.0 + 1e-12) {
            best = i;
            best_mag = m;
        }
    }
    if best_mag > 0.0 {
        let phase = v[best].conj() / best_mag;
        v.apply(|z| *z *= phase);
    }
}

/// Largest entry of `|V^H V - I|`.
pub fn orthonormality_residual(v: &CMatrix) -> f64 {
    let gram = if is_real(v) {
        let r = v.map(|z| z.re);
        to_complex(&(r.transpose() * &r))
    } else {
        v.ad_mul(v)
    };
    let mut worst: f64 = 0.0;
    for i in 0..gram.nrows() {
        for j in 0..gram.ncols() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((gram[(i, j)] - Complex64::new(target, 0.0)).norm());
        }
    }
    worst
}

/// Power-iteration estimate of the spectral norm `||A||_2`.
pub fn spectral_norm_estimate<T: ComplexField<RealField = f64> + Copy>(a: &DMatrix<T>, iterations: usize) -> f64 {
    let m = a.ncols();
    if m == 0 || a.nrows() == 0 {
        return 0.0;
    }
    // deterministic start with non-uniform entries
    let mut x = DVector::<T>::from_fn(m, |i, _| T::from_real(1.0 + (i as f64 * 0.618_033_988_75).fract()));
    let n0 = x.norm();
    x.unscale_mut(n0);
    let mut sigma = 0.0;
    for _ in 0..iterations {
        let y = a.ad_mul(&(a * &x));
        let ny = y.norm();
        if ny == 0.0 {
            return 0.0;
        }
        sigma = ny.sqrt();
        x = y.unscale(ny);
    }
    sigma
}

/// Rank of `a` from its singular values with relative threshold `tol`.
pub fn numerical_rank(a: &CMatrix, tol: f64) -> usize {
    let sv = if is_real(a) {
        a.map(|z| z.re).singular_values()
    } else {
        a.clone().singular_values()
    };
    let smax = sv.iter().fold(0.0f64, |m, &s| m.max(s));
    sv.iter().filter(|&&s| s > tol * smax.max(f64::MIN_POSITIVE)).count()
}

/// Smallest singular value of a wide matrix (the frame lower bound is its square).
pub fn min_singular_value(a: &CMatrix) -> f64 {
    let sv = if is_real(a) {
        a.map(|z| z.re).singular_values()
    } else {
        a.clone().singular_values()
    };
    sv.iter()
        .copied()
        .take(a.nrows().min(a.ncols()))
        .fold(f64::INFINITY, f64::min)
}
