//! Graph Fourier bases: Laplacian and magnetic-Laplacian eigenbases, the
//! closed-form Fourier and cosine bases of ring and path graphs, the
//! spread-frequency basis of a directed graph, and the redundant RGFF frame
//! used as a baseline.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{invalid, Error, Result};
use crate::frames::{FrameFamily, Origin, SpectralFrame};
use crate::generators::rng;
use crate::graph::{dv_unchecked, laplacian, magnetic_laplacian, Graph, HermitianOperator, OperatorKind};
use crate::linalg::{hermitian_eigen, is_real, orthonormality_residual, to_complex, CMatrix, CVector};
use crate::manifold::{dv_gradient_into, pcal_solve, DispersionObjective, PcalOutcome, SolverConfig, StiefelProblem};
use crate::spectral::spectral_dispersion;

/// How the frequency attached to each basis vector is measured.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VariationMeasure {
    /// `x^H L x` for the (normalized) Laplacian.
    Gtv,
    /// Directed variation.
    Dv,
    /// `x^H L^(q) x` for the magnetic Laplacian.
    Magnetic { q: f64 },
    /// Closed-form frequency of an analytic ring/path basis.
    Analytic,
}

/// `N` orthonormal vectors (columns) with ascending real frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralBasis {
    pub vectors: CMatrix,
    pub frequencies: Vec<f64>,
    pub measure: VariationMeasure,
}

impl SpectralBasis {
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

    pub fn column(&self, k: usize) -> CVector {
        self.vectors.column(k).clone_owned()
    }

    pub fn is_real(&self) -> bool {
        is_real(&self.vectors)
    }

    pub fn real_vectors(&self) -> Option<DMatrix<f64>> {
        self.is_real().then(|| self.vectors.map(|z| z.re))
    }

    pub fn orthonormality_residual(&self) -> f64 {
        orthonormality_residual(&self.vectors)
    }

    pub fn dispersion(&self) -> f64 {
        spectral_dispersion(&self.frequencies)
    }
}

/// Graph Fourier basis: eigenvectors of a Hermitian graph operator with
/// ascending eigenvalues as frequencies.
pub fn gfb(l: &HermitianOperator) -> Result<SpectralBasis> {
    let (frequencies, vectors) = hermitian_eigen(&l.entries)?;
    let measure = match l.kind {
        OperatorKind::Laplacian | OperatorKind::NormalizedLaplacian => VariationMeasure::Gtv,
        OperatorKind::Magnetic { q } => VariationMeasure::Magnetic { q },
    };
    Ok(SpectralBasis {
        vectors,
        frequencies,
        measure,
    })
}

/// Eigenbasis of the magnetic Laplacian with rotation parameter `q`.
pub fn mag_gfb(g: &Graph, q: f64) -> Result<SpectralBasis> {
    gfb(&magnetic_laplacian(g, q)?)
}

/// Frequency `|1 - exp(j 2 pi k / n)|` of the ring Fourier vector with (possibly
/// fractional) index `k`.
pub fn ring_frequency(n: usize, k: f64) -> f64 {
    ring_eigenvalue(n, k).norm()
}

/// Complex ring-graph eigenvalue `1 - exp(j 2 pi k / n)`.
pub fn ring_eigenvalue(n: usize, k: f64) -> Complex64 {
    Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, 2.0 * PI * k / n as f64)
}

/// Path-graph Laplacian eigenvalue `2 - 2 cos(pi k / n)` for (possibly
/// fractional) index `k`.
pub fn path_frequency(n: usize, k: f64) -> f64 {
    2.0 - 2.0 * (PI * k / n as f64).cos()
}

pub(crate) fn ring_vector(n: usize, k: f64) -> CVector {
    let scale = 1.0 / (n as f64).sqrt();
    CVector::from_fn(n, |l, _| {
        Complex64::from_polar(scale, 2.0 * PI * k * l as f64 / n as f64)
    })
}

/// Unnormalized type-II cosine vector `c_k sqrt(2/n) cos(pi k (l + 1/2) / n)`.
pub(crate) fn cosine_vector(n: usize, k_index: usize, k: f64) -> DVector<f64> {
    let c = if k_index == 0 {
        std::f64::consts::FRAC_1_SQRT_2
    } else {
        1.0
    };
    let scale = c * (2.0 / n as f64).sqrt();
    DVector::from_fn(n, |l, _| scale * (PI * k * (l as f64 + 0.5) / n as f64).cos())
}

/// Discrete Fourier basis of the directed ring, sorted by `|1 - exp(j 2 pi k/n)|`.
pub fn dfb(n: usize) -> Result<SpectralBasis> {
    if n < 2 {
        return Err(invalid("dfb needs n >= 2"));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        ring_frequency(n, a as f64)
            .total_cmp(&ring_frequency(n, b as f64))
            .then(a.cmp(&b))
    });
    let mut vectors = CMatrix::zeros(n, n);
    let mut frequencies = Vec::with_capacity(n);
    for (col, &k) in order.iter().enumerate() {
        vectors.set_column(col, &ring_vector(n, k as f64));
        frequencies.push(ring_frequency(n, k as f64));
    }
    Ok(SpectralBasis {
        vectors,
        frequencies,
        measure: VariationMeasure::Analytic,
    })
}

/// Index `k` of each column of [`dfb`] in the closed-form definition.
pub fn dfb_indices(n: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        ring_frequency(n, a as f64)
            .total_cmp(&ring_frequency(n, b as f64))
            .then(a.cmp(&b))
    });
    order
}

/// Type-II discrete cosine basis, the eigenbasis of the path-graph Laplacian.
pub fn dcb(n: usize) -> Result<SpectralBasis> {
    if n < 2 {
        return Err(invalid("dcb needs n >= 2"));
    }
    let mut vectors = CMatrix::zeros(n, n);
    let mut frequencies = Vec::with_capacity(n);
    for k in 0..n {
        let v = cosine_vector(n, k, k as f64);
        vectors.set_column(k, &v.map(|x| Complex64::new(x, 0.0)));
        frequencies.push(path_frequency(n, k as f64));
    }
    Ok(SpectralBasis {
        vectors,
        frequencies,
        measure: VariationMeasure::Gtv,
    })
}

/// Settings for the spread-frequency basis.
#[derive(Debug, Clone)]
pub struct SfConfig {
    pub pcal: SolverConfig,
    /// Random restarts of the maximal-variation search.
    pub restarts: usize,
    /// Iteration cap of each ascent run.
    pub ascent_iterations: usize,
    pub seed: u64,
}

impl Default for SfConfig {
    fn default() -> Self {
        Self {
            pcal: SolverConfig::default(),
            restarts: 16,
            ascent_iterations: 5000,
            seed: 0,
        }
    }
}

fn normalize(v: &mut DVector<f64>) -> bool {
    let n = v.norm();
    if n > 0.0 && n.is_finite() {
        v.unscale_mut(n);
        true
    } else {
        false
    }
}

fn remove_mean(v: &mut DVector<f64>) {
    let m = v.mean();
    v.add_scalar_mut(-m);
}

/// Unit vector of (approximately) maximal directed variation, found by
/// projected gradient ascent on the sphere with backtracking and random restarts.
pub fn u_max(g: &Graph, cfg: &SfConfig) -> DVector<f64> {
    let n = g.n();
    let mut rng = rng(cfg.seed ^ 0x5eed_u64);
    let mut best = DVector::from_fn(n, |i, _| if i % 2 == 0 { 1.0 } else { -1.0 });
    remove_mean(&mut best);
    if !normalize(&mut best) {
        best = DVector::from_element(n, 1.0 / (n as f64).sqrt());
    }
    let mut best_val = dv_unchecked(g, best.as_slice());
    let mut grad = DVector::zeros(n);
    for _ in 0..cfg.restarts.max(1) {
        let mut x = DVector::from_fn(n, |_, _| StandardNormal.sample(&mut rng));
        remove_mean(&mut x);
        if !normalize(&mut x) {
            continue;
        }
        let mut val = dv_unchecked(g, x.as_slice());
        let mut step = 1.0;
        for _ in 0..cfg.ascent_iterations {
            dv_gradient_into(g, x.as_slice(), grad.as_mut_slice());
            let mut accepted = false;
            while step > 1e-12 {
                let mut cand = &x + &grad * step;
                if !normalize(&mut cand) {
                    step *= 0.5;
                    continue;
                }
                let cv = dv_unchecked(g, cand.as_slice());
                if cv > val {
                    let gain = cv - val;
                    x = cand;
                    val = cv;
                    step *= 2.0;
                    accepted = gain > 1e-15 * val.max(1.0);
                    break;
                }
                step *= 0.5;
            }
            if !accepted {
                break;
            }
        }
        if val > best_val {
            best_val = val;
            best = x;
        }
    }
    best
}

/// Result of the spread-frequency basis construction.
#[derive(Debug, Clone)]
pub struct SfReport {
    pub dispersion: f64,
    /// Dispersion of the symmetrized-Laplacian eigenbasis measured with DV.
    pub initial_dispersion: f64,
    /// Dispersion of the symmetrized-Laplacian eigenvalues.
    pub gfb_dispersion: f64,
    pub solver: PcalOutcome,
}

/// Orthonormal basis with spread directed-variation frequencies: the first
/// column is the constant vector, the last a maximal-DV vector, and the
/// remaining columns minimize the dispersion of consecutive DV values.
pub fn sf_gfb(g: &Graph, cfg: &SfConfig) -> Result<(SpectralBasis, SfReport)> {
    let n = g.n();
    if n < 3 {
        return Err(invalid("spread-frequency basis needs n >= 3"));
    }
    let first = DVector::from_element(n, 1.0 / (n as f64).sqrt());
    let mut last = u_max(g, cfg);
    // DV is shift invariant, so the maximizer has no DC component
    remove_mean(&mut last);
    if !normalize(&mut last) {
        return Err(Error::NonFinite("maximal variation vector".into()));
    }

    let sym = g.symmetrized();
    let base = gfb(&laplacian(&sym)?)?;
    let gfb_dispersion = base.dispersion();
    let base_real = base.vectors.map(|z| z.re);
    let mut x0 = DMatrix::zeros(n, n - 2);
    for k in 0..n - 2 {
        let mut v = base_real.column(k + 1).clone_owned();
        for _ in 0..2 {
            let p1 = first.dot(&v);
            v.axpy(-p1, &first, 1.0);
            let p2 = last.dot(&v);
            v.axpy(-p2, &last, 1.0);
        }
        if !normalize(&mut v) {
            v = DVector::from_fn(n, |i, _| if i == k { 1.0 } else { 0.0 });
        }
        x0.set_column(k, &v);
    }

    let d_first = dv_unchecked(g, first.as_slice());
    let d_last = dv_unchecked(g, last.as_slice());
    let objective = DispersionObjective::new(g, d_first, d_last);
    let initial_dispersion = {
        use crate::manifold::StiefelObjective;
        objective.value(&x0)
    };
    let problem = StiefelProblem::with_fixed(&objective, n, n - 2, vec![first.clone(), last.clone()])?;
    let outcome = pcal_solve(&problem, &cfg.pcal, &x0)?;

    let mut cols: Vec<DVector<f64>> = Vec::with_capacity(n);
    cols.push(first);
    for k in 0..n - 2 {
        cols.push(outcome.x.column(k).clone_owned());
    }
    cols.push(last);
    let mut entries: Vec<(f64, DVector<f64>)> = cols.into_iter().map(|c| (dv_unchecked(g, c.as_slice()), c)).collect();
    // keep the fixed endpoints in place, sort the interior by frequency
    entries[1..n - 1].sort_by(|a, b| a.0.total_cmp(&b.0));
    let frequencies: Vec<f64> = entries.iter().map(|e| e.0).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (k, (_, c)) in entries.iter().enumerate() {
        vectors.set_column(k, c);
    }
    let basis = SpectralBasis {
        vectors: to_complex(&vectors),
        frequencies,
        measure: VariationMeasure::Dv,
    };
    let report = SfReport {
        dispersion: spectral_dispersion(&basis.frequencies),
        initial_dispersion,
        gfb_dispersion,
        solver: outcome,
    };
    Ok((basis, report))
}

/// Redundant graph Fourier frame: the eigenvectors of `L` together with those
/// of `L - 2 rho I`, where `rho` is a quarter of the smallest positive
/// eigenvalue gap. The added vectors carry frequencies `lambda_k + 2 rho`.
pub fn rgff(l: &HermitianOperator) -> Result<SpectralFrame> {
    if matches!(l.kind, OperatorKind::Magnetic { .. }) {
        return Err(invalid("rgff expects an undirected graph Laplacian"));
    }
    let base = gfb(l)?;
    let scale = base.frequencies.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let min_gap = base
        .frequencies
        .windows(2)
        .map(|w| w[1] - w[0])
        .filter(|&gap| gap > 1e-10 * scale)
        .fold(f64::INFINITY, f64::min);
    if !min_gap.is_finite() {
        return Err(invalid("rgff needs at least one positive eigenvalue gap"));
    }
    let rho = 0.25 * min_gap;
    let mut shifted = l.entries.clone();
    for i in 0..l.n() {
        shifted[(i, i)] -= Complex64::new(2.0 * rho, 0.0);
    }
    let (_, extra) = hermitian_eigen(&shifted)?;

    let mut vectors = Vec::with_capacity(2 * base.len());
    let mut frequencies = Vec::with_capacity(2 * base.len());
    let mut origins = Vec::with_capacity(2 * base.len());
    for k in 0..base.len() {
        vectors.push(base.column(k));
        frequencies.push(base.frequencies[k]);
        origins.push(Origin::Original { k });
        vectors.push(extra.column(k).clone_owned());
        frequencies.push(base.frequencies[k] + 2.0 * rho);
        origins.push(Origin::Shifted { k, rho });
    }
    Ok(SpectralFrame::from_unsorted(
        vectors,
        frequencies,
        origins,
        FrameFamily::Rgff,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{make_path, make_random_connected, make_ring};
    use crate::graph::{dv, gtv};
    use approx::assert_abs_diff_eq;

    fn reconstruct(b: &SpectralBasis) -> CMatrix {
        let lam = CMatrix::from_diagonal(&CVector::from_iterator(
            b.len(),
            b.frequencies.iter().map(|&f| Complex64::new(f, 0.0)),
        ));
        &b.vectors * lam * b.vectors.adjoint()
    }

    #[test]
    fn two_node_gfb() {
        let g = make_path(2).unwrap();
        let b = gfb(&laplacian(&g).unwrap()).unwrap();
        assert_abs_diff_eq!(b.frequencies[0], 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(b.frequencies[1], 2.0, epsilon = 1e-14);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(b.vectors[(0, 0)].re, s, epsilon = 1e-14);
        assert_abs_diff_eq!(b.vectors[(1, 0)].re, s, epsilon = 1e-14);
        assert_abs_diff_eq!(b.vectors[(0, 1)].re.abs(), s, epsilon = 1e-14);
        assert_abs_diff_eq!(b.vectors[(0, 1)].re, -b.vectors[(1, 1)].re, epsilon = 1e-14);
    }

    #[test]
    fn triangle_gfb_frequencies() {
        let g = make_ring(3, false).unwrap();
        let b = gfb(&laplacian(&g).unwrap()).unwrap();
        for (f, e) in b.frequencies.iter().zip([0.0, 3.0, 3.0]) {
            assert_abs_diff_eq!(*f, e, epsilon = 1e-12);
        }
        assert!(b.orthonormality_residual() < 1e-12);
    }

    #[test]
    fn path_gfb_matches_cosine_basis() {
        for n in [4, 8, 16] {
            let g = make_path(n).unwrap();
            let b = gfb(&laplacian(&g).unwrap()).unwrap();
            let c = dcb(n).unwrap();
            for k in 0..n {
                assert_abs_diff_eq!(b.frequencies[k], c.frequencies[k], epsilon = 1e-10);
                let overlap = b.column(k).dotc(&c.column(k)).norm();
                assert_abs_diff_eq!(overlap, 1.0, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn first_eigenvector_of_connected_graph_is_constant() {
        let g = make_random_connected(12, 0.2, false, 3).unwrap();
        let b = gfb(&laplacian(&g).unwrap()).unwrap();
        let c = 1.0 / 12f64.sqrt();
        for i in 0..12 {
            assert_abs_diff_eq!(b.vectors[(i, 0)].re, c, epsilon = 1e-10);
        }
    }

    #[test]
    fn gfb_reconstructs_and_is_deterministic() {
        let g = make_random_connected(20, 0.15, false, 11).unwrap();
        let l = laplacian(&g).unwrap();
        let b = gfb(&l).unwrap();
        assert!((reconstruct(&b) - &l.entries).norm() < 1e-8);
        assert_eq!(b, gfb(&l).unwrap());
        for k in 0..b.len() {
            assert_abs_diff_eq!(gtv(&l, &b.column(k)).unwrap(), b.frequencies[k], epsilon = 1e-8);
        }
    }

    #[test]
    fn mag_gfb_properties() {
        let g = make_random_connected(10, 0.25, true, 5).unwrap();
        let l = magnetic_laplacian(&g, 0.1).unwrap();
        let b = mag_gfb(&g, 0.1).unwrap();
        assert!(b.orthonormality_residual() < 1e-10);
        assert!((reconstruct(&b) - &l.entries).norm() < 1e-8);
        for k in 0..b.len() {
            assert_abs_diff_eq!(
                l.quadratic_form(&b.column(k)).unwrap(),
                b.frequencies[k],
                epsilon = 1e-8
            );
        }
        let u = make_random_connected(10, 0.25, false, 5).unwrap();
        let a = mag_gfb(&u, 0.01).unwrap();
        let c = gfb(&laplacian(&u).unwrap()).unwrap();
        assert_eq!(a.vectors, c.vectors);
        assert_eq!(a.frequencies, c.frequencies);
    }

    #[test]
    fn analytic_bases() {
        let c = dcb(2).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(c.vectors[(0, 0)].re, s, epsilon = 1e-15);
        assert_abs_diff_eq!(c.vectors[(1, 0)].re, s, epsilon = 1e-15);
        assert_abs_diff_eq!(c.vectors[(0, 1)].re, s, epsilon = 1e-15);
        assert_abs_diff_eq!(c.vectors[(1, 1)].re, -s, epsilon = 1e-15);

        let f = dfb(6).unwrap();
        for i in 0..6 {
            assert_abs_diff_eq!(f.vectors[(i, 0)].re, 1.0 / 6f64.sqrt(), epsilon = 1e-15);
            assert_abs_diff_eq!(f.vectors[(i, 0)].im, 0.0, epsilon = 1e-15);
        }
        assert!(f.orthonormality_residual() < 1e-12);
        assert!(f.frequencies.windows(2).all(|w| w[0] <= w[1]));

        // column k+1 of the 4-point cosine basis changes sign k times
        let c4 = dcb(4).unwrap();
        for k in 0..4 {
            let changes = (0..3)
                .filter(|&i| c4.vectors[(i, k)].re * c4.vectors[(i + 1, k)].re < 0.0)
                .count();
            assert_eq!(changes, k);
        }
        assert!(dcb(1).is_err() && dfb(1).is_err());
    }

    #[test]
    fn u_max_two_node_examples() {
        let cfg = SfConfig::default();
        let d = Graph::from_triples(2, &[(0, 1, 1.0)], true).unwrap();
        let x = u_max(&d, &cfg);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(x[0], s, epsilon = 1e-6);
        assert_abs_diff_eq!(x[1], -s, epsilon = 1e-6);
        assert_abs_diff_eq!(dv(&d, x.as_slice()).unwrap(), 2.0, epsilon = 1e-10);

        let u = make_path(2).unwrap();
        let y = u_max(&u, &cfg);
        assert_abs_diff_eq!(y[0].abs(), s, epsilon = 1e-6);
        assert_abs_diff_eq!(y[0], -y[1], epsilon = 1e-6);
        assert_abs_diff_eq!(dv(&u, y.as_slice()).unwrap(), 2.0, epsilon = 1e-10);
    }

    #[test]
    fn u_max_beats_random_unit_vectors() {
        let g = make_random_connected(12, 0.2, true, 8).unwrap();
        let cfg = SfConfig::default();
        let x = u_max(&g, &cfg);
        let best = dv(&g, x.as_slice()).unwrap();
        let mut r = rng(99);
        for _ in 0..1000 {
            let mut v = DVector::from_fn(12, |_, _| StandardNormal.sample(&mut r));
            normalize(&mut v);
            assert!(dv(&g, v.as_slice()).unwrap() <= best + 1e-12);
        }
    }

    #[test]
    fn u_max_on_undirected_graph_reaches_top_eigenvalue() {
        let g = make_random_connected(10, 0.3, false, 2).unwrap();
        let b = gfb(&laplacian(&g).unwrap()).unwrap();
        let x = u_max(&g, &SfConfig::default());
        assert_abs_diff_eq!(dv(&g, x.as_slice()).unwrap(), b.frequencies[9], epsilon = 1e-8);
    }

    #[test]
    fn rgff_structure() {
        let g = make_random_connected(12, 0.3, false, 4).unwrap();
        let l = laplacian(&g).unwrap();
        let f = rgff(&l).unwrap();
        assert_eq!(f.len(), 24);
        let base = gfb(&l).unwrap();
        let gaps: Vec<f64> = base.frequencies.windows(2).map(|w| w[1] - w[0]).collect();
        let rho = 0.25
            * gaps
                .iter()
                .copied()
                .filter(|&g| g > 1e-10)
                .fold(f64::INFINITY, f64::min);
        for k in 0..11 {
            let xi = base.frequencies[k] + 2.0 * rho;
            assert!(base.frequencies[k] <= xi && xi < base.frequencies[k + 1]);
        }
        // the shifted operator has the same eigenvectors
        for (m, o) in f.origins.iter().enumerate() {
            if let Origin::Shifted { k, .. } = *o {
                let overlap = f.vectors.column(m).dotc(&base.vectors.column(k)).norm();
                assert_abs_diff_eq!(overlap, 1.0, epsilon = 1e-8);
            }
        }
        let k2 = Graph::from_triples(2, &[(0, 1, 1.0)], false).unwrap();
        assert!(rgff(&laplacian(&k2).unwrap()).is_ok());
        let empty = Graph::new(3, vec![], false).unwrap();
        assert!(rgff(&laplacian(&empty).unwrap()).is_err());
    }
}
