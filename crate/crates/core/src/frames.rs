//! Denser-graph-frequency frames: a basis plus extra unit vectors whose
//! frequencies fall between consecutive basis frequencies, sorted ascending.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::basis::{
    cosine_vector, dcb, dfb, dfb_indices, mag_gfb, path_frequency, ring_eigenvalue, ring_frequency, ring_vector,
    SpectralBasis,
};
use crate::error::{invalid, Error, Result};
use crate::graph::{dv_unchecked, Graph};
use crate::linalg::{is_real, min_singular_value, numerical_rank, orthonormality_residual, CMatrix, CVector};
use crate::manifold::{pcal_solve, IntermediateObjective, PcalOutcome, SolverConfig, StiefelProblem};
use crate::spectral::spectral_dispersion;

/// Where a frame vector came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Origin {
    /// Column `k` (0-based, in frequency order) of the parent basis.
    Original { k: usize },
    /// Normalized `alpha u_k + beta u_{k+1}`.
    Interpolated { k: usize, alpha: f64, beta: f64 },
    /// Closed-form ring/path vector at fractional index `k + alpha`.
    Analytic { k: usize, alpha: f64 },
    /// Optimized vector targeting the frequency between `u_k` and `u_{k+1}`.
    Optimized { k: usize, alpha: f64, beta: f64 },
    /// Eigenvector of the shifted operator `L - 2 rho I`.
    Shifted { k: usize, rho: f64 },
}

impl Origin {
    pub fn is_original(&self) -> bool {
        matches!(self, Origin::Original { .. })
    }

    pub fn label(&self) -> String {
        match *self {
            Origin::Original { k } => format!("original({k})"),
            Origin::Interpolated { k, alpha, beta } => format!("interpolated({k};{alpha};{beta})"),
            Origin::Analytic { k, alpha } => format!("analytic({k};{alpha})"),
            Origin::Optimized { k, alpha, beta } => format!("optimized({k};{alpha};{beta})"),
            Origin::Shifted { k, rho } => format!("shifted({k};{rho})"),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("unrecognized origin tag '{s}'"));
        let (name, rest) = s.split_once('(').ok_or_else(bad)?;
        let inner = rest.strip_suffix(')').ok_or_else(bad)?;
        let parts: Vec<&str> = inner.split(';').collect();
        let idx = |i: usize| -> Result<usize> { parts.get(i).and_then(|p| p.parse().ok()).ok_or_else(bad) };
        let num = |i: usize| -> Result<f64> { parts.get(i).and_then(|p| p.parse().ok()).ok_or_else(bad) };
        match (name, parts.len()) {
            ("original", 1) => Ok(Origin::Original { k: idx(0)? }),
            ("interpolated", 3) => Ok(Origin::Interpolated {
                k: idx(0)?,
                alpha: num(1)?,
                beta: num(2)?,
            }),
            ("analytic", 2) => Ok(Origin::Analytic {
                k: idx(0)?,
                alpha: num(1)?,
            }),
            ("optimized", 3) => Ok(Origin::Optimized {
                k: idx(0)?,
                alpha: num(1)?,
                beta: num(2)?,
            }),
            ("shifted", 2) => Ok(Origin::Shifted {
                k: idx(0)?,
                rho: num(1)?,
            }),
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameFamily {
    Adgff,
    LiDgff,
    LrLiDgff,
    SfDgff,
    Rgff,
    /// A plain orthonormal basis viewed as a frame.
    Basis,
}

impl FrameFamily {
    pub fn name(&self) -> &'static str {
        match self {
            FrameFamily::Adgff => "adgff",
            FrameFamily::LiDgff => "lidgff",
            FrameFamily::LrLiDgff => "lrlidgff",
            FrameFamily::SfDgff => "sfdgff",
            FrameFamily::Rgff => "rgff",
            FrameFamily::Basis => "basis",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "adgff" => FrameFamily::Adgff,
            "lidgff" => FrameFamily::LiDgff,
            "lrlidgff" => FrameFamily::LrLiDgff,
            "sfdgff" => FrameFamily::SfDgff,
            "rgff" => FrameFamily::Rgff,
            "basis" => FrameFamily::Basis,
            _ => return Err(Error::Parse(format!("unknown frame family '{s}'"))),
        })
    }
}

/// `M` unit vectors (columns) spanning `C^n`, with ascending frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralFrame {
    pub vectors: CMatrix,
    pub frequencies: Vec<f64>,
    pub origins: Vec<Origin>,
    pub family: FrameFamily,
}

impl SpectralFrame {
    /// Assembles a frame and stably sorts it by frequency.
    pub fn from_unsorted(
        vectors: Vec<CVector>,
        frequencies: Vec<f64>,
        origins: Vec<Origin>,
        family: FrameFamily,
    ) -> Self {
        let m = vectors.len();
        let n = vectors.first().map_or(0, |v| v.len());
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| frequencies[a].total_cmp(&frequencies[b]));
        let mut mat = CMatrix::zeros(n, m);
        for (dst, &src) in order.iter().enumerate() {
            mat.set_column(dst, &vectors[src]);
        }
        Self {
            vectors: mat,
            frequencies: order.iter().map(|&i| frequencies[i]).collect(),
            origins: order.iter().map(|&i| origins[i]).collect(),
            family,
        }
    }

    pub fn from_basis(b: &SpectralBasis) -> Self {
        Self {
            vectors: b.vectors.clone(),
            frequencies: b.frequencies.clone(),
            origins: (0..b.len()).map(|k| Origin::Original { k }).collect(),
            family: FrameFamily::Basis,
        }
    }

    /// Number of frame vectors `M`.
    pub fn len(&self) -> usize {
        self.frequencies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frequencies.is_empty()
    }

    /// Signal dimension.
    pub fn n(&self) -> usize {
        self.vectors.nrows()
    }

    pub fn is_real(&self) -> bool {
        is_real(&self.vectors)
    }

    pub fn real_vectors(&self) -> Option<DMatrix<f64>> {
        self.is_real().then(|| self.vectors.map(|z| z.re))
    }

    pub fn rank(&self) -> usize {
        numerical_rank(&self.vectors, 1e-10)
    }

    /// Lower frame bound: squared smallest singular value of the frame matrix.
    pub fn lower_frame_bound(&self) -> f64 {
        min_singular_value(&self.vectors).powi(2)
    }

    pub fn dispersion(&self) -> f64 {
        spectral_dispersion(&self.frequencies)
    }

    /// Largest deviation of a column norm from one.
    pub fn norm_defect(&self) -> f64 {
        self.vectors
            .column_iter()
            .map(|c| (c.norm() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Number of vectors not taken from the parent basis.
    pub fn added(&self) -> usize {
        self.origins.iter().filter(|o| !o.is_original()).count()
    }
}

fn check_open_unit(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v < 1.0) {
        return Err(invalid(format!("{name} = {v} must lie in (0, 1)")));
    }
    Ok(())
}

fn check_weights(alpha: f64, beta: f64) -> Result<()> {
    if !(alpha >= 0.0 && beta >= 0.0 && alpha.is_finite() && beta.is_finite()) || alpha == 0.0 && beta == 0.0 {
        return Err(invalid(format!(
            "weights ({alpha}, {beta}) must be non-negative and not both zero"
        )));
    }
    Ok(())
}

/// Ring ADGFF: the Fourier basis plus the vectors at index `k + alpha`.
pub fn adgff_ring(n: usize, alpha: f64) -> Result<SpectralFrame> {
    check_open_unit("alpha", alpha)?;
    let base = dfb(n)?;
    let idx = dfb_indices(n);
    let mut vectors = Vec::with_capacity(2 * n);
    let mut freqs = Vec::with_capacity(2 * n);
    let mut origins = Vec::with_capacity(2 * n);
    for (col, &k) in idx.iter().enumerate() {
        vectors.push(base.column(col));
        freqs.push(base.frequencies[col]);
        origins.push(Origin::Original { k });
    }
    for k in 0..n {
        let t = k as f64 + alpha;
        vectors.push(ring_vector(n, t));
        freqs.push(ring_frequency(n, t));
        origins.push(Origin::Analytic { k, alpha });
    }
    Ok(SpectralFrame::from_unsorted(
        vectors,
        freqs,
        origins,
        FrameFamily::Adgff,
    ))
}

/// Complex nominal frequency `1 - exp(j 2 pi (k + alpha) / n)` of a ring ADGFF vector.
pub fn adgff_ring_complex_frequency(n: usize, k: usize, alpha: f64) -> Complex64 {
    ring_eigenvalue(n, k as f64 + alpha)
}

/// Path ADGFF: the cosine basis plus normalized cosines at index `k + alpha`.
pub fn adgff_path(n: usize, alpha: f64) -> Result<SpectralFrame> {
    check_open_unit("alpha", alpha)?;
    let base = dcb(n)?;
    let mut vectors = Vec::with_capacity(2 * n);
    let mut freqs = Vec::with_capacity(2 * n);
    let mut origins = Vec::with_capacity(2 * n);
    for k in 0..n {
        vectors.push(base.column(k));
        freqs.push(base.frequencies[k]);
        origins.push(Origin::Original { k });
    }
    for k in 0..n {
        let t = k as f64 + alpha;
        let mut v = cosine_vector(n, k, t);
        let norm = v.norm();
        if norm == 0.0 {
            return Err(Error::NonFinite("zero analytic path vector".into()));
        }
        v.unscale_mut(norm);
        vectors.push(v.map(|x| Complex64::new(x, 0.0)));
        freqs.push(path_frequency(n, t));
        origins.push(Origin::Analytic { k, alpha });
    }
    Ok(SpectralFrame::from_unsorted(
        vectors,
        freqs,
        origins,
        FrameFamily::Adgff,
    ))
}

/// Normalized `alpha u + beta v` for an orthonormal pair `(u, v)`.
pub fn interpolate_vector(u: &CVector, v: &CVector, alpha: f64, beta: f64) -> Result<CVector> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch {
            expected: u.len(),
            got: v.len(),
        });
    }
    check_weights(alpha, beta)?;
    let overlap = u.dotc(v).norm();
    if overlap > 1e-8 {
        return Err(Error::NotOrthonormal(overlap));
    }
    let mut w = u * Complex64::new(alpha, 0.0) + v * Complex64::new(beta, 0.0);
    let norm = w.norm();
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::NonFinite("interpolated vector".into()));
    }
    w.unscale_mut(norm);
    Ok(w)
}

/// Frequency `(alpha^2 l_k + beta^2 l_{k+1}) / (alpha^2 + beta^2)` of an
/// interpolated eigenvector pair.
pub fn intermediate_frequency(lambda_k: f64, lambda_k1: f64, alpha: f64, beta: f64) -> Result<f64> {
    check_weights(alpha, beta)?;
    let (a2, b2) = (alpha * alpha, beta * beta);
    Ok((a2 * lambda_k + b2 * lambda_k1) / (a2 + b2))
}

fn check_basis(b: &SpectralBasis) -> Result<()> {
    let r = b.orthonormality_residual();
    if r > 1e-8 {
        return Err(Error::NotOrthonormal(r));
    }
    Ok(())
}

fn interpolated_frame(b: &SpectralBasis, per_gap: &[Vec<(f64, f64)>], family: FrameFamily) -> Result<SpectralFrame> {
    check_basis(b)?;
    let n = b.len();
    let extra: usize = per_gap.iter().map(|w| w.len()).sum();
    let mut vectors = Vec::with_capacity(n + extra);
    let mut freqs = Vec::with_capacity(n + extra);
    let mut origins = Vec::with_capacity(n + extra);
    for k in 0..n {
        vectors.push(b.column(k));
        freqs.push(b.frequencies[k]);
        origins.push(Origin::Original { k });
        if k + 1 < n {
            let (u, v) = (b.column(k), b.column(k + 1));
            for &(alpha, beta) in &per_gap[k] {
                vectors.push(interpolate_vector(&u, &v, alpha, beta)?);
                freqs.push(intermediate_frequency(
                    b.frequencies[k],
                    b.frequencies[k + 1],
                    alpha,
                    beta,
                )?);
                origins.push(Origin::Interpolated { k, alpha, beta });
            }
        }
    }
    Ok(SpectralFrame::from_unsorted(vectors, freqs, origins, family))
}

/// LiDGFF: one interpolated vector between every pair of adjacent basis vectors.
pub fn lidgff(b: &SpectralBasis, alpha: f64, beta: f64) -> Result<SpectralFrame> {
    check_weights(alpha, beta)?;
    let per_gap = vec![vec![(alpha, beta)]; b.len().saturating_sub(1)];
    interpolated_frame(b, &per_gap, FrameFamily::LiDgff)
}

/// Low-redundancy LiDGFF. A gap with `T_l <= gap < T_{l+1}` receives the `l`
/// interpolated vectors of `weight_sets[l - 1]`; gaps below `T_1` receive none.
pub fn lrlidgff(b: &SpectralBasis, thresholds: &[f64], weight_sets: &[Vec<(f64, f64)>]) -> Result<SpectralFrame> {
    if thresholds.len() < 2 {
        return Err(invalid("lrlidgff needs at least two thresholds"));
    }
    if thresholds.iter().any(|t| t.is_nan() || *t < 0.0)
        || thresholds[..thresholds.len() - 1].iter().any(|t| t.is_infinite())
    {
        return Err(invalid(
            "thresholds must be non-negative, finite except possibly the last",
        ));
    }
    if thresholds.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid("thresholds must be strictly increasing"));
    }
    if weight_sets.len() != thresholds.len() - 1 {
        return Err(invalid(format!(
            "{} thresholds need {} weight sets, got {}",
            thresholds.len(),
            thresholds.len() - 1,
            weight_sets.len()
        )));
    }
    for (l, set) in weight_sets.iter().enumerate() {
        if set.len() != l + 1 {
            return Err(invalid(format!("weight set {} must hold {} pairs", l + 1, l + 1)));
        }
        for &(a, b) in set {
            check_weights(a, b)?;
        }
    }
    let mut t = thresholds.to_vec();
    // a zero first threshold would duplicate vectors across repeated eigenvalues
    if t[0] == 0.0 {
        t[0] = f64::MIN_POSITIVE;
    }
    let per_gap: Vec<Vec<(f64, f64)>> = b
        .frequencies
        .windows(2)
        .map(|w| {
            let gap = w[1] - w[0];
            (0..t.len() - 1)
                .find(|&l| t[l] <= gap && gap < t[l + 1])
                .map(|l| weight_sets[l].clone())
                .unwrap_or_default()
        })
        .collect();
    interpolated_frame(b, &per_gap, FrameFamily::LrLiDgff)
}

/// Two-level lrLiDGFF with thresholds `(t1, inf)` and the midpoint weights.
pub fn lrlidgff_single(b: &SpectralBasis, t1: f64) -> Result<SpectralFrame> {
    lrlidgff(b, &[t1, f64::INFINITY], &[vec![(0.5, 0.5)]])
}

/// One third of the mean consecutive gap, `(l_N - l_1) / (3 (N - 1))`.
pub fn default_threshold(frequencies: &[f64]) -> Result<f64> {
    let n = frequencies.len();
    if n < 2 {
        return Err(invalid("default_threshold needs at least two frequencies"));
    }
    let total: f64 = frequencies.windows(2).map(|w| w[1] - w[0]).sum();
    Ok(total / (3.0 * (n - 1) as f64))
}

/// LiDGFF of the magnetic-Laplacian eigenbasis.
pub fn mag_dgff(g: &Graph, q: f64, alpha: f64, beta: f64) -> Result<SpectralFrame> {
    lidgff(&mag_gfb(g, q)?, alpha, beta)
}

/// Diagnostics of an SfDGFF construction.
#[derive(Debug, Clone)]
pub struct SfDgffReport {
    /// `sqrt(sum (DV(x_k) - (alpha DV(u_k) + beta DV(u_{k+1})))^2)`.
    pub residual: f64,
    /// `||X^T X - I||_F` of each half block.
    pub feasibility: [f64; 2],
    pub blocks: [PcalOutcome; 2],
}

/// Column split of the SfDGFF: block one holds columns `0..k1`, block two
/// `k1 - 1..n`, so the middle column is shared.
pub fn sfdgff_split(n: usize) -> usize {
    (n + 2) / 2
}

/// SfDGFF: for each half of the spread-frequency basis, orthonormal vectors
/// whose directed variations approach `alpha DV(u_k) + (1 - alpha) DV(u_{k+1})`.
pub fn sfdgff(
    g: &Graph,
    u_sf: &SpectralBasis,
    alpha: f64,
    cfg: &SolverConfig,
) -> Result<(SpectralFrame, SfDgffReport)> {
    check_open_unit("alpha", alpha)?;
    check_basis(u_sf)?;
    let n = u_sf.len();
    if n != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            got: n,
        });
    }
    if n < 3 {
        return Err(invalid("sfdgff needs n >= 3"));
    }
    let u = u_sf
        .real_vectors()
        .ok_or_else(|| invalid("sfdgff expects a real spread-frequency basis"))?;
    let beta = 1.0 - alpha;
    let k1 = sfdgff_split(n);
    let ranges = [(0usize, k1), (k1 - 1, n)];

    let mut vectors: Vec<CVector> = Vec::with_capacity(2 * n - 1);
    let mut freqs = Vec::with_capacity(2 * n - 1);
    let mut origins = Vec::with_capacity(2 * n - 1);
    for k in 0..n {
        vectors.push(u_sf.column(k));
        freqs.push(u_sf.frequencies[k]);
        origins.push(Origin::Original { k });
    }
    let dv_u: Vec<f64> = (0..n).map(|k| dv_unchecked(g, u.column(k).as_slice())).collect();

    let mut residual_sq = 0.0;
    let mut outcomes = Vec::with_capacity(2);
    for &(start, end) in &ranges {
        let block = u.columns(start, end - start).clone_owned();
        let kx = end - start - 1;
        let mut x0 = DMatrix::zeros(n, kx);
        for k in 0..kx {
            let a = block.column(k).clone_owned();
            let b = block.column(k + 1).clone_owned();
            let mut v: DVector<f64> = a * alpha + b * beta;
            let norm = v.norm();
            v.unscale_mut(norm);
            x0.set_column(k, &v);
        }
        let objective = IntermediateObjective::new(g, &block, alpha, beta)?;
        let problem = StiefelProblem::new(&objective, n, kx)?;
        let outcome = pcal_solve(&problem, cfg, &x0)?;
        for k in 0..kx {
            let x = outcome.x.column(k).clone_owned();
            let d = dv_unchecked(g, x.as_slice());
            let target = alpha * dv_u[start + k] + beta * dv_u[start + k + 1];
            residual_sq += (d - target).powi(2);
            vectors.push(x.map(|v| Complex64::new(v, 0.0)));
            freqs.push(d);
            origins.push(Origin::Optimized {
                k: start + k,
                alpha,
                beta,
            });
        }
        outcomes.push(outcome);
    }
    let second = outcomes.pop().expect("two blocks");
    let first = outcomes.pop().expect("two blocks");
    let report = SfDgffReport {
        residual: residual_sq.sqrt(),
        feasibility: [first.feasibility, second.feasibility],
        blocks: [first, second],
    };
    Ok((
        SpectralFrame::from_unsorted(vectors, freqs, origins, FrameFamily::SfDgff),
        report,
    ))
}

/// Orthonormality residual of the inserted (non-original) columns of `frame`.
pub fn inserted_orthonormality(frame: &SpectralFrame) -> f64 {
    let cols: Vec<usize> = (0..frame.len()).filter(|&m| !frame.origins[m].is_original()).collect();
    if cols.is_empty() {
        return 0.0;
    }
    let sub = frame.vectors.select_columns(&cols);
    orthonormality_residual(&sub)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{gfb, sf_gfb, SfConfig};
    use crate::generators::{make_path, make_random_connected};
    use crate::graph::{gtv, laplacian};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn e(n: usize, i: usize) -> CVector {
        CVector::from_fn(n, |r, _| Complex64::new(if r == i { 1.0 } else { 0.0 }, 0.0))
    }

    #[test]
    fn ring_adgff_example() {
        let f = adgff_ring(4, 0.5).unwrap();
        assert_eq!(f.len(), 8);
        let m = f
            .origins
            .iter()
            .position(|o| *o == Origin::Analytic { k: 0, alpha: 0.5 })
            .unwrap();
        for l in 0..4 {
            let expected = Complex64::from_polar(0.5, std::f64::consts::PI * l as f64 / 4.0);
            assert_abs_diff_eq!((f.vectors[(l, m)] - expected).norm(), 0.0, epsilon = 1e-15);
        }
        for z in f.vectors.iter() {
            assert_abs_diff_eq!(z.norm(), 0.5, epsilon = 1e-14);
        }
        assert!(f.frequencies.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(f.rank(), 4);
        assert!(adgff_ring(4, 1.0).is_err() && adgff_ring(4, 0.0).is_err());
    }

    #[test]
    fn adgff_small_alpha_recovers_parents() {
        for n in [4, 7] {
            let base = dfb(n).unwrap();
            let idx = dfb_indices(n);
            let f = adgff_ring(n, 1e-6).unwrap();
            for (m, o) in f.origins.iter().enumerate() {
                if let Origin::Analytic { k, .. } = *o {
                    let col = idx.iter().position(|&i| i == k).unwrap();
                    assert!((f.vectors.column(m) - base.vectors.column(col)).norm() < 1e-4);
                }
            }
            let c = dcb(n).unwrap();
            let p = adgff_path(n, 1e-6).unwrap();
            assert!(p.norm_defect() < 1e-12);
            for (m, o) in p.origins.iter().enumerate() {
                if let Origin::Analytic { k, .. } = *o {
                    assert!((p.vectors.column(m) - c.vectors.column(k)).norm() < 1e-4);
                }
            }
        }
    }

    #[test]
    fn interpolation_examples() {
        let v = interpolate_vector(&e(3, 0), &e(3, 1), 0.5, 0.5).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(v[0].re, s, epsilon = 1e-15);
        assert_abs_diff_eq!(v[1].re, s, epsilon = 1e-15);
        let w = interpolate_vector(&e(3, 0), &e(3, 1), 1.0 - 1e-9, 1e-9).unwrap();
        assert!((w - e(3, 0)).norm() < 1e-8);
        let not_orth = e(3, 0) + e(3, 1) * Complex64::new(1e-3, 0.0);
        assert!(matches!(
            interpolate_vector(&e(3, 0), &not_orth, 0.5, 0.5),
            Err(Error::NotOrthonormal(_))
        ));
        assert_abs_diff_eq!(
            intermediate_frequency(1.0, 3.0, 1.0, 2.0).unwrap(),
            2.6,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            intermediate_frequency(1.0, 3.0, 0.3, 0.3).unwrap(),
            2.0,
            epsilon = 1e-15
        );
        assert_eq!(intermediate_frequency(1.0, 3.0, 0.7, 0.0).unwrap(), 1.0);
        assert!(intermediate_frequency(1.0, 3.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn lidgff_counts_and_bounds() {
        let g = make_path(48).unwrap();
        let b = gfb(&laplacian(&g).unwrap()).unwrap();
        let f = lidgff(&b, 0.5, 0.5).unwrap();
        assert_eq!(f.len(), 95);
        assert_eq!(f.rank(), 48);
        assert!(f.lower_frame_bound() > 0.0);
        for (m, o) in f.origins.iter().enumerate() {
            if let Origin::Interpolated { k, .. } = *o {
                assert!(b.frequencies[k] <= f.frequencies[m] && f.frequencies[m] <= b.frequencies[k + 1]);
            }
        }
    }

    #[test]
    fn lrlidgff_limits() {
        let g = make_random_connected(20, 0.2, false, 1).unwrap();
        let b = gfb(&laplacian(&g).unwrap()).unwrap();
        let none = lrlidgff_single(&b, 1e9).unwrap();
        assert_eq!(none.len(), 20);
        let all = lrlidgff_single(&b, 0.0).unwrap();
        let li = lidgff(&b, 0.5, 0.5).unwrap();
        assert_eq!(all.vectors, li.vectors);
        assert_eq!(all.frequencies, li.frequencies);
        assert!(lrlidgff(&b, &[1.0, 0.5], &[vec![(0.5, 0.5)]]).is_err());
        assert!(lrlidgff(&b, &[0.1, 1.0, 2.0], &[vec![(0.5, 0.5)]]).is_err());

        let two = lrlidgff(
            &b,
            &[0.1, 0.5, f64::INFINITY],
            &[vec![(0.5, 0.5)], vec![(2.0 / 3.0, 1.0 / 3.0), (1.0 / 3.0, 2.0 / 3.0)]],
        )
        .unwrap();
        let expected: usize = b
            .frequencies
            .windows(2)
            .map(|w| {
                let gap = w[1] - w[0];
                if gap >= 0.5 {
                    2
                } else if gap >= 0.1 {
                    1
                } else {
                    0
                }
            })
            .sum();
        assert_eq!(two.len(), 20 + expected);
    }

    #[test]
    fn default_threshold_examples() {
        assert_eq!(default_threshold(&[0.0, 3.0]).unwrap(), 1.0);
        assert_abs_diff_eq!(default_threshold(&[0.0, 0.6, 1.2, 1.8]).unwrap(), 0.2, epsilon = 1e-15);
        assert_eq!(default_threshold(&[2.0, 2.0, 2.0]).unwrap(), 0.0);
        assert!(default_threshold(&[1.0]).is_err());
    }

    #[test]
    fn mag_dgff_reduces_on_undirected_graphs() {
        let g = make_random_connected(10, 0.3, false, 6).unwrap();
        let a = mag_dgff(&g, 0.01, 0.5, 0.5).unwrap();
        let b = lidgff(&gfb(&laplacian(&g).unwrap()).unwrap(), 0.5, 0.5).unwrap();
        assert_eq!(a.vectors, b.vectors);
        assert_eq!(a.frequencies, b.frequencies);
    }

    #[test]
    fn origin_labels_round_trip() {
        for o in [
            Origin::Original { k: 3 },
            Origin::Interpolated {
                k: 1,
                alpha: 0.25,
                beta: 0.75,
            },
            Origin::Analytic { k: 2, alpha: 0.5 },
            Origin::Optimized {
                k: 0,
                alpha: 0.3,
                beta: 0.7,
            },
            Origin::Shifted { k: 4, rho: 0.125 },
        ] {
            assert_eq!(Origin::parse(&o.label()).unwrap(), o);
        }
        assert!(Origin::parse("nope").is_err());
    }

    #[test]
    fn sfdgff_small_directed_graph() {
        let g = make_random_connected(9, 0.25, true, 3).unwrap();
        let (u, _) = sf_gfb(&g, &SfConfig::default()).unwrap();
        let (f, report) = sfdgff(&g, &u, 0.5, &SolverConfig::default()).unwrap();
        assert_eq!(f.len(), 17);
        assert_eq!(f.rank(), 9);
        assert!(f.norm_defect() < 1e-10);
        assert!(report.residual < 1e-4, "residual {}", report.residual);
        assert!(report.feasibility.iter().all(|&r| r < 1e-6));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn theorem_identity_holds(seed in 0u64..10_000, n in 4usize..20, alpha in 0.01f64..0.99, beta in 0.01f64..0.99) {
            let g = make_random_connected(n, 0.2, false, seed).unwrap();
            let l = laplacian(&g).unwrap();
            let b = gfb(&l).unwrap();
            for k in 0..n - 1 {
                let v = interpolate_vector(&b.column(k), &b.column(k + 1), alpha, beta).unwrap();
                let expected = intermediate_frequency(b.frequencies[k], b.frequencies[k + 1], alpha, beta).unwrap();
                prop_assert!((gtv(&l, &v).unwrap() - expected).abs() <= 1e-10 * (1.0 + expected));
            }
        }

        #[test]
        fn lrlidgff_count_is_bounded_and_monotone(seed in 0u64..10_000, n in 4usize..25, t in 0.0f64..2.0, dt in 0.0f64..1.0) {
            let g = make_random_connected(n, 0.2, false, seed).unwrap();
            let b = gfb(&laplacian(&g).unwrap()).unwrap();
            let lo = lrlidgff_single(&b, t).unwrap();
            let hi = lrlidgff_single(&b, t + dt + 1e-9).unwrap();
            prop_assert!(lo.len() >= n && lo.len() < 2 * n);
            prop_assert!(hi.len() <= lo.len());
            prop_assert!(lo.frequencies.windows(2).all(|w| w[0] <= w[1]));
        }

        #[test]
        fn ring_adgff_entries_are_unimodular(n in 2usize..24, alpha in 0.01f64..0.99) {
            let f = adgff_ring(n, alpha).unwrap();
            let s = 1.0 / (n as f64).sqrt();
            for z in f.vectors.iter() {
                prop_assert!((z.norm() - s).abs() < 1e-12);
            }
        }
    }
}
