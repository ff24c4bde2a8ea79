//! Sparse frame analysis, spectral filtering through frames, sampling-based
//! recovery and the evaluation metrics used to compare frames.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::seq::index::sample;

use crate::convex::{pds_solve, PdsResult, SplitProblem, DEFAULT_GAMMA1, DEFAULT_MAX_ITER, DEFAULT_TOL};
use crate::error::{invalid, Error, Result};
use crate::frames::SpectralFrame;
use crate::generators::rng;
use crate::linalg::{CMatrix, CVector};

/// Reported SNR when the reconstruction is exact.
pub const SNR_SENTINEL_DB: f64 = 300.0;

/// Relative reconstruction error treated as exact recovery (200 dB), well
/// below what the splitting solver's stopping rule can distinguish.
pub const EXACT_RELATIVE_ERROR: f64 = 1e-10;

/// Step sizes and stopping rule of the splitting solver.
#[derive(Debug, Clone, Copy)]
pub struct SolveConfig {
    pub gamma1: f64,
    /// Defaults to `1 / (12 gamma1)`.
    pub gamma2: Option<f64>,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self {
            gamma1: DEFAULT_GAMMA1,
            gamma2: None,
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
        }
    }
}

/// Coefficients or signal returned by a sparse solve, with solver statistics.
#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub values: CVector,
    pub iterations: usize,
    pub converged: bool,
    pub feasibility_residual: f64,
}

fn run<T: nalgebra::ComplexField<RealField = f64> + Copy>(
    a: DMatrix<T>,
    y: DVector<T>,
    eps: f64,
    cfg: &SolveConfig,
) -> Result<PdsResult<T>> {
    let mut p = SplitProblem::new(a, y, eps);
    p.gamma1 = cfg.gamma1;
    p.gamma2 = cfg.gamma2.unwrap_or(1.0 / (12.0 * cfg.gamma1));
    p.tol = cfg.tol;
    p.max_iter = cfg.max_iter;
    pds_solve(&p)
}

/// `min ||a||_1 s.t. ||A a - y|| <= eps`, on the real path when all data are real.
pub fn sparse_solve(a: &CMatrix, y: &CVector, eps: f64, cfg: &SolveConfig) -> Result<SolveOutcome> {
    let real = a.iter().chain(y.iter()).all(|z| z.im == 0.0);
    if real {
        let r = run(a.map(|z| z.re), y.map(|z| z.re), eps, cfg)?;
        Ok(SolveOutcome {
            values: r.coeffs.map(|v| Complex64::new(v, 0.0)),
            iterations: r.iterations,
            converged: r.converged,
            feasibility_residual: r.feasibility_residual,
        })
    } else {
        let r = run(a.clone(), y.clone(), eps, cfg)?;
        Ok(SolveOutcome {
            values: r.coeffs,
            iterations: r.iterations,
            converged: r.converged,
            feasibility_residual: r.feasibility_residual,
        })
    }
}

fn check_signal(f: &SpectralFrame, s: &CVector) -> Result<()> {
    if s.len() != f.n() {
        return Err(Error::DimensionMismatch {
            expected: f.n(),
            got: s.len(),
        });
    }
    Ok(())
}

fn is_orthonormal_square(f: &SpectralFrame) -> bool {
    f.len() == f.n() && crate::linalg::orthonormality_residual(&f.vectors) <= 1e-10
}

/// Minimum-l1 coefficients `a` with `F a = s`. For an orthonormal basis the
/// constraint has the single solution `F^H s`, which is returned directly.
pub fn analyze(f: &SpectralFrame, s: &CVector, cfg: &SolveConfig) -> Result<SolveOutcome> {
    check_signal(f, s)?;
    if is_orthonormal_square(f) {
        return Ok(SolveOutcome {
            values: f.vectors.ad_mul(s),
            iterations: 0,
            converged: true,
            feasibility_residual: 0.0,
        });
    }
    sparse_solve(&f.vectors, s, 0.0, cfg)
}

/// Response of a spectral filter at each frame frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterResponse {
    pub values: Vec<f64>,
    pub kind: FilterKind,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FilterKind {
    Tikhonov { c: f64 },
    IdealLowpass { cutoff: usize },
    Custom,
}

impl FilterResponse {
    pub fn custom(values: Vec<f64>) -> Self {
        Self {
            values,
            kind: FilterKind::Custom,
        }
    }
}

/// `h_k = 1 / (1 + c lambda_k)`.
pub fn tikhonov_response(frequencies: &[f64], c: f64) -> Result<FilterResponse> {
    if !(c >= 0.0 && c.is_finite()) {
        return Err(invalid(format!("Tikhonov weight c = {c} must be non-negative")));
    }
    let mut values = Vec::with_capacity(frequencies.len());
    for &l in frequencies {
        let d = 1.0 + c * l;
        if !(d > 0.0) {
            return Err(invalid(format!("1 + c lambda = {d} is not positive")));
        }
        values.push(1.0 / d);
    }
    Ok(FilterResponse {
        values,
        kind: FilterKind::Tikhonov { c },
    })
}

/// Keeps the first `cutoff` frame components.
pub fn ideal_lowpass(m: usize, cutoff: usize) -> Result<FilterResponse> {
    if cutoff == 0 || cutoff > m {
        return Err(invalid(format!("cutoff {cutoff} outside 1..={m}")));
    }
    Ok(FilterResponse {
        values: (0..m).map(|k| if k < cutoff { 1.0 } else { 0.0 }).collect(),
        kind: FilterKind::IdealLowpass { cutoff },
    })
}

/// Synthesis of filtered coefficients `F diag(h) a`.
pub fn synthesize(f: &SpectralFrame, coeffs: &CVector, h: &FilterResponse) -> Result<CVector> {
    if h.values.len() != f.len() || coeffs.len() != f.len() {
        return Err(Error::DimensionMismatch {
            expected: f.len(),
            got: h.values.len().min(coeffs.len()),
        });
    }
    let scaled = CVector::from_fn(f.len(), |m, _| coeffs[m] * h.values[m]);
    Ok(&f.vectors * scaled)
}

/// Filtering through a frame: sparse analysis, response scaling, synthesis.
pub fn dgs_filter(f: &SpectralFrame, s: &CVector, h: &FilterResponse, cfg: &SolveConfig) -> Result<CVector> {
    if h.values.len() != f.len() {
        return Err(Error::DimensionMismatch {
            expected: f.len(),
            got: h.values.len(),
        });
    }
    let a = analyze(f, s, cfg)?;
    synthesize(f, &a.values, h)
}

/// `e_f = ||Re s~ - s*|| / ||s*||`, `e = ||n|| / ||s*||` and their ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelativeError {
    pub e_f: f64,
    pub e: f64,
    pub ratio: f64,
}

pub fn relative_error(estimate: &CVector, truth: &DVector<f64>, noise: &DVector<f64>) -> Result<RelativeError> {
    if estimate.len() != truth.len() || noise.len() != truth.len() {
        return Err(Error::DimensionMismatch {
            expected: truth.len(),
            got: estimate.len().min(noise.len()),
        });
    }
    let t = truth.norm();
    if t == 0.0 {
        return Err(invalid("ground truth is the zero signal"));
    }
    let diff: f64 = estimate
        .iter()
        .zip(truth.iter())
        .map(|(a, b)| (a.re - b).powi(2))
        .sum::<f64>()
        .sqrt();
    let e_f = diff / t;
    let e = noise.norm() / t;
    Ok(RelativeError { e_f, e, ratio: e_f / e })
}

/// `20 log10(||s*|| / ||Re s~ - s*||)`; numerically exact recoveries (see
/// [`EXACT_RELATIVE_ERROR`]) report [`SNR_SENTINEL_DB`].
pub fn snr_db(estimate: &CVector, truth: &DVector<f64>) -> Result<f64> {
    if estimate.len() != truth.len() {
        return Err(Error::DimensionMismatch {
            expected: truth.len(),
            got: estimate.len(),
        });
    }
    let t = truth.norm();
    if t == 0.0 {
        return Err(invalid("ground truth is the zero signal"));
    }
    let err: f64 = estimate
        .iter()
        .zip(truth.iter())
        .map(|(a, b)| (a.re - b).powi(2))
        .sum::<f64>()
        .sqrt();
    if err <= EXACT_RELATIVE_ERROR * t {
        return Ok(SNR_SENTINEL_DB);
    }
    Ok((20.0 * (t / err).log10()).min(SNR_SENTINEL_DB))
}

/// Sum of squared consecutive differences of the sorted values.
pub fn spectral_dispersion(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v.windows(2).map(|w| (w[1] - w[0]).powi(2)).sum()
}

/// Sorted set of observed nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplingPattern {
    pub indices: Vec<usize>,
    pub n: usize,
    pub rate: f64,
    pub seed: u64,
}

impl SamplingPattern {
    /// Keeps `round(rate n)` nodes chosen uniformly without replacement.
    pub fn random(n: usize, rate: f64, seed: u64) -> Result<Self> {
        if !(rate > 0.0 && rate <= 1.0) {
            return Err(invalid(format!("sampling rate {rate} must lie in (0, 1]")));
        }
        let m = (rate * n as f64).round() as usize;
        if m == 0 {
            return Err(invalid(format!("rate {rate} keeps no node of {n}")));
        }
        let mut indices = sample(&mut rng(seed), n, m).into_vec();
        indices.sort_unstable();
        Ok(Self { indices, n, rate, seed })
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn apply(&self, s: &DVector<f64>) -> DVector<f64> {
        DVector::from_iterator(self.len(), self.indices.iter().map(|&i| s[i]))
    }

    /// Rows of `f` at the kept nodes.
    pub fn restrict(&self, f: &CMatrix) -> CMatrix {
        f.select_rows(&self.indices)
    }
}

fn check_sampling(f: &SpectralFrame, phi: &SamplingPattern, y: &DVector<f64>) -> Result<()> {
    if phi.n != f.n() {
        return Err(Error::DimensionMismatch {
            expected: f.n(),
            got: phi.n,
        });
    }
    if y.len() != phi.len() {
        return Err(Error::DimensionMismatch {
            expected: phi.len(),
            got: y.len(),
        });
    }
    Ok(())
}

fn recover(
    f: &SpectralFrame,
    phi: &SamplingPattern,
    y: &DVector<f64>,
    eps: f64,
    cfg: &SolveConfig,
) -> Result<SolveOutcome> {
    check_sampling(f, phi, y)?;
    let a = phi.restrict(&f.vectors);
    let yc = y.map(|v| Complex64::new(v, 0.0));
    let out = sparse_solve(&a, &yc, eps, cfg)?;
    Ok(SolveOutcome {
        values: &f.vectors * &out.values,
        ..out
    })
}

/// Recovery from exact samples: `s~ = F a~`, `a~ = argmin ||a||_1 s.t. Phi F a = y`.
pub fn recover_noiseless(
    f: &SpectralFrame,
    phi: &SamplingPattern,
    y: &DVector<f64>,
    cfg: &SolveConfig,
) -> Result<SolveOutcome> {
    recover(f, phi, y, 0.0, cfg)
}

/// Ball radius `0.90 sigma sqrt(N)` used for noisy recovery on `N` nodes.
pub fn noisy_radius(sigma: f64, n: usize) -> f64 {
    0.90 * sigma * (n as f64).sqrt()
}

/// Recovery from noisy samples with the constraint `||Phi F a - y|| <= 0.9 sigma sqrt(N)`.
pub fn recover_noisy(
    f: &SpectralFrame,
    phi: &SamplingPattern,
    y: &DVector<f64>,
    sigma: f64,
    cfg: &SolveConfig,
) -> Result<SolveOutcome> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(invalid(format!("noise level {sigma} must be positive")));
    }
    recover(f, phi, y, noisy_radius(sigma, f.n()), cfg)
}

/// One method's result within a recovery trial.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodOutcome {
    pub method: String,
    pub snr_db: f64,
    pub e_ratio: f64,
    pub iterations: usize,
    pub seconds: f64,
    pub failed: bool,
}

/// Results of one recovery trial across methods.
#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryReport {
    pub rate: f64,
    pub sigma: f64,
    pub trial: usize,
    /// SNR of the observed samples against the truth on the kept nodes.
    pub observation_snr_db: f64,
    pub methods: Vec<MethodOutcome>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::gfb;
    use crate::frames::lidgff;
    use crate::generators::make_random_connected;
    use crate::graph::laplacian;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::Rng;

    fn real(v: &[f64]) -> CVector {
        CVector::from_iterator(v.len(), v.iter().map(|&x| Complex64::new(x, 0.0)))
    }

    fn frames(seed: u64) -> (SpectralFrame, SpectralFrame, crate::graph::HermitianOperator) {
        let g = make_random_connected(8, 0.3, false, seed).unwrap();
        let l = laplacian(&g).unwrap();
        let b = gfb(&l).unwrap();
        (SpectralFrame::from_basis(&b), lidgff(&b, 0.5, 0.5).unwrap(), l)
    }

    #[test]
    fn analysis_of_basis_is_adjoint() {
        let (b, _, _) = frames(1);
        let s = real(&[0.1, -0.4, 0.9, 0.0, 0.3, 0.2, -0.7, 0.5]);
        let a = analyze(&b, &s, &SolveConfig::default()).unwrap();
        assert!((a.values - b.vectors.adjoint() * &s).norm() < 1e-12);
        let z = analyze(&b, &CVector::zeros(8), &SolveConfig::default()).unwrap();
        assert_eq!(z.values.norm(), 0.0);
    }

    #[test]
    fn all_pass_and_zero_filters() {
        let (_, f, _) = frames(2);
        let s = real(&[0.3, -0.1, 0.8, 0.4, -0.6, 0.2, 0.1, 0.9]);
        let all = FilterResponse::custom(vec![1.0; f.len()]);
        let out = dgs_filter(&f, &s, &all, &SolveConfig::default()).unwrap();
        assert!((out - &s).norm() < 1e-7);
        let none = FilterResponse::custom(vec![0.0; f.len()]);
        assert_eq!(dgs_filter(&f, &s, &none, &SolveConfig::default()).unwrap().norm(), 0.0);
        assert!(dgs_filter(&f, &s, &FilterResponse::custom(vec![1.0; 3]), &SolveConfig::default()).is_err());
    }

    #[test]
    fn tikhonov_matches_linear_solve() {
        let (b, _, l) = frames(3);
        let y = DVector::from_vec(vec![0.3, -0.1, 0.8, 0.4, -0.6, 0.2, 0.1, 0.9]);
        for c in [0.1, 1.0, 10.0] {
            let h = tikhonov_response(&b.frequencies, c).unwrap();
            let out = dgs_filter(&b, &y.map(|v| Complex64::new(v, 0.0)), &h, &SolveConfig::default()).unwrap();
            let m = DMatrix::identity(8, 8) + l.real_part() * c;
            let direct = m.lu().solve(&y).unwrap();
            for i in 0..8 {
                assert_abs_diff_eq!(out[i].re, direct[i], epsilon = 1e-10);
            }
        }
        let h = tikhonov_response(&[0.0, 2.0], 0.0).unwrap();
        assert_eq!(h.values, vec![1.0, 1.0]);
        assert!(tikhonov_response(&[1.0], -1.0).is_err());
    }

    #[test]
    fn lowpass_examples() {
        assert_eq!(ideal_lowpass(4, 4).unwrap().values, vec![1.0; 4]);
        assert_eq!(ideal_lowpass(4, 1).unwrap().values, vec![1.0, 0.0, 0.0, 0.0]);
        assert!(ideal_lowpass(4, 0).is_err() && ideal_lowpass(4, 5).is_err());
        for w in 1..6 {
            let a = ideal_lowpass(6, w).unwrap();
            let b = ideal_lowpass(6, w + 1).unwrap();
            assert!(a.values.iter().zip(&b.values).all(|(x, y)| y >= x));
        }
    }

    #[test]
    fn error_metrics() {
        let t = DVector::from_vec(vec![3.0, 4.0]);
        let n = DVector::from_vec(vec![0.3, 0.0]);
        let exact = relative_error(&real(&[3.0, 4.0]), &t, &n).unwrap();
        assert_eq!(exact.e_f, 0.0);
        let noisy = relative_error(&real(&[3.3, 4.0]), &t, &n).unwrap();
        assert_abs_diff_eq!(noisy.ratio, 1.0, epsilon = 1e-12);
        assert!(relative_error(&real(&[1.0, 1.0]), &DVector::zeros(2), &n).is_err());

        assert_eq!(snr_db(&real(&[3.0, 4.0]), &t).unwrap(), SNR_SENTINEL_DB);
        assert_abs_diff_eq!(snr_db(&real(&[3.3, 4.4]), &t).unwrap(), 20.0, epsilon = 1e-12);
        assert_abs_diff_eq!(snr_db(&real(&[0.0, 0.0]), &t).unwrap(), 0.0, epsilon = 1e-12);
        let one = snr_db(&real(&[3.3, 4.4]), &t).unwrap();
        let two = snr_db(&real(&[3.6, 4.8]), &t).unwrap();
        assert_abs_diff_eq!(one - two, 20.0 * 2f64.log10(), epsilon = 1e-12);
    }

    #[test]
    fn dispersion_examples() {
        assert_abs_diff_eq!(spectral_dispersion(&[0.0, 1.0, 2.0, 3.0]), 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(spectral_dispersion(&[3.0, 0.0, 1.0, 1.0, 2.0]), 3.0, epsilon = 1e-15);
    }

    #[test]
    fn sampling_is_deterministic() {
        let a = SamplingPattern::random(250, 0.3, 7).unwrap();
        assert_eq!(a, SamplingPattern::random(250, 0.3, 7).unwrap());
        assert_eq!(a.len(), 75);
        assert!(a.indices.windows(2).all(|w| w[0] < w[1]));
        assert!(SamplingPattern::random(10, 0.0, 1).is_err());
        assert_eq!(
            SamplingPattern::random(10, 1.0, 1).unwrap().indices,
            (0..10).collect::<Vec<_>>()
        );
    }

    #[test]
    fn full_sampling_recovers_signal() {
        let (_, f, _) = frames(4);
        let s = DVector::from_vec(vec![0.9, 0.9, 0.9, 0.9, 0.1, 0.1, 0.1, 0.1]);
        let phi = SamplingPattern::random(8, 1.0, 0).unwrap();
        let out = recover_noiseless(&f, &phi, &phi.apply(&s), &SolveConfig::default()).unwrap();
        for i in 0..8 {
            assert_abs_diff_eq!(out.values[i].re, s[i], epsilon = 1e-7);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]

        #[test]
        fn noiseless_recovery_reproduces_samples(seed in 0u64..1000, rate in 0.4f64..1.0) {
            let (_, f, _) = frames(seed);
            let mut r = rng(seed + 1);
            let s = DVector::from_fn(8, |_, _| r.gen_range(-1.0..1.0));
            let phi = SamplingPattern::random(8, rate, seed).unwrap();
            let y = phi.apply(&s);
            let out = recover_noiseless(&f, &phi, &y, &SolveConfig::default()).unwrap();
            for (j, &i) in phi.indices.iter().enumerate() {
                prop_assert!((out.values[i].re - y[j]).abs() <= 1e-7);
            }
        }

        #[test]
        fn dispersion_of_equal_spacing(k in 2usize..30, r in 0.1f64..10.0) {
            let v: Vec<f64> = (0..k).map(|i| r * i as f64 / (k - 1) as f64).collect();
            prop_assert!((spectral_dispersion(&v) - r * r / (k - 1) as f64).abs() < 1e-9 * r * r);
        }
    }
}
