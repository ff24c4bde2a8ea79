//! Experiment protocols: frame construction by name, sampling-recovery
//! trials, the injected-spike filtering demo and the scaling benchmark.

use std::time::Instant;

use dgff::basis::{dcb, dfb, gfb, mag_gfb, rgff, sf_gfb, SfConfig};
use dgff::frames::{
    adgff_path, adgff_ring, default_threshold, lidgff, lrlidgff_single, mag_dgff, sfdgff, SpectralFrame,
};
use dgff::generators::{make_sbm, sbm_membership};
use dgff::graph::{laplacian, Graph};
use dgff::spectral::{
    analyze, ideal_lowpass, recover_noiseless, recover_noisy, relative_error, snr_db, synthesize, SamplingPattern,
    SolveConfig,
};
use dgff::{CVector, Error, Result, SolverConfig, TraceRow};
use nalgebra::DVector;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Gfb,
    Rgff,
    LiDgff,
    LrLiDgff,
    MagGfb,
    MagDgff,
    SfGfb,
    SfDgff,
    AdgffRing,
    AdgffPath,
    Dfb,
    Dcb,
}

impl Method {
    pub const ALL: [Method; 12] = [
        Method::Gfb,
        Method::Rgff,
        Method::LiDgff,
        Method::LrLiDgff,
        Method::MagGfb,
        Method::MagDgff,
        Method::SfGfb,
        Method::SfDgff,
        Method::AdgffRing,
        Method::AdgffPath,
        Method::Dfb,
        Method::Dcb,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Method::Gfb => "gfb",
            Method::Rgff => "rgff",
            Method::LiDgff => "lidgff",
            Method::LrLiDgff => "lrlidgff",
            Method::MagGfb => "maggfb",
            Method::MagDgff => "magdgff",
            Method::SfGfb => "sfgfb",
            Method::SfDgff => "sfdgff",
            Method::AdgffRing => "adgff-ring",
            Method::AdgffPath => "adgff-path",
            Method::Dfb => "dfb",
            Method::Dcb => "dcb",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Method::ALL
            .iter()
            .copied()
            .find(|m| m.name() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| Error::Parse(format!("unknown frame '{s}'")))
    }

    /// Whether the construction runs the Stiefel solver.
    pub fn uses_pcal(&self) -> bool {
        matches!(self, Method::SfGfb | Method::SfDgff)
    }
}

#[derive(Debug, Clone)]
pub struct FrameParams {
    pub alpha: f64,
    pub beta: f64,
    pub q: f64,
    /// lrLiDGFF threshold; the default is a third of the mean eigenvalue gap.
    pub threshold: Option<f64>,
    pub seed: u64,
    pub pcal: SolverConfig,
}

impl Default for FrameParams {
    fn default() -> Self {
        Self {
            alpha: 0.5,
            beta: 0.5,
            q: 0.01,
            threshold: None,
            seed: 0,
            pcal: SolverConfig::default(),
        }
    }
}

/// A constructed frame plus construction diagnostics.
#[derive(Debug, Clone)]
pub struct Built {
    pub frame: SpectralFrame,
    /// Extra `(key, value)` diagnostics such as solver residuals.
    pub notes: Vec<(String, String)>,
    pub trace: Vec<TraceRow>,
}

fn basis_frame(b: &dgff::SpectralBasis) -> Built {
    Built {
        frame: SpectralFrame::from_basis(b),
        notes: Vec::new(),
        trace: Vec::new(),
    }
}

fn plain(frame: SpectralFrame) -> Built {
    Built {
        frame,
        notes: Vec::new(),
        trace: Vec::new(),
    }
}

pub fn build_frame(g: &Graph, method: Method, p: &FrameParams) -> Result<Built> {
    let sf_cfg = SfConfig {
        pcal: p.pcal.clone(),
        seed: p.seed,
        ..SfConfig::default()
    };
    Ok(match method {
        Method::Gfb => basis_frame(&gfb(&laplacian(g)?)?),
        Method::Rgff => plain(rgff(&laplacian(g)?)?),
        Method::LiDgff => plain(lidgff(&gfb(&laplacian(g)?)?, p.alpha, p.beta)?),
        Method::LrLiDgff => {
            let b = gfb(&laplacian(g)?)?;
            let t = match p.threshold {
                Some(t) => t,
                None => default_threshold(&b.frequencies)?,
            };
            let mut built = plain(lrlidgff_single(&b, t)?);
            built.notes.push(("threshold".into(), t.to_string()));
            built
        }
        Method::MagGfb => basis_frame(&mag_gfb(g, p.q)?),
        Method::MagDgff => plain(mag_dgff(g, p.q, p.alpha, p.beta)?),
        Method::SfGfb => {
            let (b, report) = sf_gfb(g, &sf_cfg)?;
            let mut built = basis_frame(&b);
            built
                .notes
                .push(("initial_dispersion".into(), report.initial_dispersion.to_string()));
            built
                .notes
                .push(("gfb_dispersion".into(), report.gfb_dispersion.to_string()));
            built
                .notes
                .push(("pcal_iterations".into(), report.solver.iterations.to_string()));
            built
                .notes
                .push(("pcal_feasibility".into(), report.solver.feasibility.to_string()));
            built.trace = report.solver.trace;
            built
        }
        Method::SfDgff => {
            let (b, _) = sf_gfb(g, &sf_cfg)?;
            let (frame, report) = sfdgff(g, &b, p.alpha, &p.pcal)?;
            let mut built = plain(frame);
            built
                .notes
                .push(("frequency_residual".into(), report.residual.to_string()));
            built
                .notes
                .push(("block1_feasibility".into(), report.feasibility[0].to_string()));
            built
                .notes
                .push(("block2_feasibility".into(), report.feasibility[1].to_string()));
            let [first, second] = report.blocks;
            let offset = first.iterations;
            built.trace = first.trace;
            built.trace.extend(second.trace.into_iter().map(|r| TraceRow {
                iteration: r.iteration + offset,
                ..r
            }));
            built
        }
        Method::AdgffRing => plain(adgff_ring(g.n(), p.alpha)?),
        Method::AdgffPath => plain(adgff_path(g.n(), p.alpha)?),
        Method::Dfb => basis_frame(&dfb(g.n())?),
        Method::Dcb => basis_frame(&dcb(g.n())?),
    })
}

/// Two-level signal: 0.9 on the first cluster, 0.1 elsewhere.
pub fn cluster_signal(n: usize, clusters: usize) -> DVector<f64> {
    let labels = sbm_membership(n, clusters);
    DVector::from_iterator(n, labels.into_iter().map(|c| if c == 0 { 0.9 } else { 0.1 }))
}

/// Affine map of the signal onto `[-1, 1]` when it leaves that range.
pub fn normalize_signal(s: &DVector<f64>) -> DVector<f64> {
    let (lo, hi) = (s.min(), s.max());
    if lo >= -1.0 && hi <= 1.0 || hi == lo {
        return s.clone();
    }
    s.map(|v| 2.0 * (v - lo) / (hi - lo) - 1.0)
}

/// Deterministic seed derivation (splitmix64 finalizer).
pub fn mix(seed: u64, parts: &[u64]) -> u64 {
    let mut z = seed;
    for &p in parts {
        z = z.wrapping_add(0x9e37_79b9_7f4a_7c15).wrapping_add(p);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^= z >> 31;
    }
    z
}

#[derive(Debug, Clone)]
pub struct RecoverySetup {
    pub rates: Vec<f64>,
    pub sigmas: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub solve: SolveConfig,
}

/// One (method, rate, sigma, trial) cell of a recovery experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryRow {
    pub method: String,
    pub rate: f64,
    pub sigma: f64,
    pub trial: usize,
    pub snr_db: f64,
    /// `e_f / e`, or `e_f` alone for noiseless cells.
    pub e_ratio: f64,
    pub iterations: usize,
    pub seconds: f64,
    pub failed: bool,
}

struct Cell {
    rate_idx: usize,
    sigma_idx: usize,
    trial: usize,
}

fn run_cell(
    frames: &[(String, SpectralFrame)],
    truth: &DVector<f64>,
    setup: &RecoverySetup,
    cell: &Cell,
) -> Vec<RecoveryRow> {
    let n = truth.len();
    let rate = setup.rates[cell.rate_idx];
    let sigma = setup.sigmas[cell.sigma_idx];
    let sample_seed = mix(setup.seed, &[cell.trial as u64, rate.to_bits()]);
    let noise_seed = mix(setup.seed, &[cell.trial as u64, rate.to_bits(), sigma.to_bits(), 1]);
    let failed_rows = |reason: bool| {
        frames
            .iter()
            .map(|(name, _)| RecoveryRow {
                method: name.clone(),
                rate,
                sigma,
                trial: cell.trial,
                snr_db: f64::NAN,
                e_ratio: f64::NAN,
                iterations: 0,
                seconds: 0.0,
                failed: reason,
            })
            .collect::<Vec<_>>()
    };
    let Ok(phi) = SamplingPattern::random(n, rate, sample_seed) else {
        return failed_rows(true);
    };
    let noise = if sigma > 0.0 {
        let mut r = ChaCha8Rng::seed_from_u64(noise_seed);
        let dist = Normal::new(0.0, sigma).expect("positive sigma");
        DVector::from_fn(n, |_, _| dist.sample(&mut r))
    } else {
        DVector::zeros(n)
    };
    let y = phi.apply(&(truth + &noise));
    frames
        .iter()
        .map(|(name, f)| {
            let start = Instant::now();
            let out = if sigma > 0.0 {
                recover_noisy(f, &phi, &y, sigma, &setup.solve)
            } else {
                recover_noiseless(f, &phi, &y, &setup.solve)
            };
            let seconds = start.elapsed().as_secs_f64();
            match out {
                Ok(o) => {
                    let snr = snr_db(&o.values, truth).unwrap_or(f64::NAN);
                    let e_ratio = relative_error(&o.values, truth, &noise)
                        .map(|r| if sigma > 0.0 { r.ratio } else { r.e_f })
                        .unwrap_or(f64::NAN);
                    RecoveryRow {
                        method: name.clone(),
                        rate,
                        sigma,
                        trial: cell.trial,
                        snr_db: snr,
                        e_ratio,
                        iterations: o.iterations,
                        seconds,
                        failed: false,
                    }
                }
                Err(_) => RecoveryRow {
                    method: name.clone(),
                    rate,
                    sigma,
                    trial: cell.trial,
                    snr_db: f64::NAN,
                    e_ratio: f64::NAN,
                    iterations: 0,
                    seconds,
                    failed: true,
                },
            }
        })
        .collect()
}

/// Runs every (rate, sigma, trial) cell; all frames see the same sampling
/// pattern and noise draw within a cell. Rows come back in a fixed order.
pub fn run_recovery(
    frames: &[(String, SpectralFrame)],
    truth: &DVector<f64>,
    setup: &RecoverySetup,
) -> Vec<RecoveryRow> {
    let mut cells = Vec::new();
    for rate_idx in 0..setup.rates.len() {
        for sigma_idx in 0..setup.sigmas.len() {
            for trial in 0..setup.trials {
                cells.push(Cell {
                    rate_idx,
                    sigma_idx,
                    trial,
                });
            }
        }
    }
    let nested: Vec<Vec<RecoveryRow>> = cells.par_iter().map(|c| run_cell(frames, truth, setup, c)).collect();
    nested.into_iter().flatten().collect()
}

/// Mean SNR per (method, rate, sigma) over successful trials.
#[derive(Debug, Clone, PartialEq)]
pub struct Aggregate {
    pub method: String,
    pub rate: f64,
    pub sigma: f64,
    pub mean_snr_db: f64,
    pub mean_e_ratio: f64,
    pub mean_iterations: f64,
    pub trials: usize,
    pub failures: usize,
}

pub fn aggregate(rows: &[RecoveryRow]) -> Vec<Aggregate> {
    let mut keys: Vec<(String, f64, f64)> = Vec::new();
    for r in rows {
        if !keys.iter().any(|k| k.0 == r.method && k.1 == r.rate && k.2 == r.sigma) {
            keys.push((r.method.clone(), r.rate, r.sigma));
        }
    }
    keys.into_iter()
        .map(|(method, rate, sigma)| {
            let cell: Vec<&RecoveryRow> = rows
                .iter()
                .filter(|r| r.method == method && r.rate == rate && r.sigma == sigma)
                .collect();
            let ok: Vec<&&RecoveryRow> = cell.iter().filter(|r| !r.failed).collect();
            let mean = |f: &dyn Fn(&RecoveryRow) -> f64| {
                if ok.is_empty() {
                    f64::NAN
                } else {
                    ok.iter().map(|r| f(r)).sum::<f64>() / ok.len() as f64
                }
            };
            Aggregate {
                mean_snr_db: mean(&|r| r.snr_db),
                mean_e_ratio: mean(&|r| r.e_ratio),
                mean_iterations: mean(&|r| r.iterations as f64),
                trials: cell.len(),
                failures: cell.len() - ok.len(),
                method,
                rate,
                sigma,
            }
        })
        .collect()
}

/// Outcome of one injected-spike filtering trial.
#[derive(Debug, Clone)]
pub struct SpikeTrial {
    pub seed: u64,
    /// Frame index of the injected spike.
    pub spike_index: usize,
    pub spike_amplitude: f64,
    /// Coefficients of the clean signal in the frame.
    pub clean_spectrum: Vec<f64>,
    /// Coefficients of the noisy signal in the basis and the frame.
    pub basis_spectrum: Vec<f64>,
    pub frame_spectrum: Vec<f64>,
    /// `e_f / e` for low-pass cutoffs `1..=N` (basis) and `1..=M` (frame).
    pub basis_curve: Vec<f64>,
    pub frame_curve: Vec<f64>,
}

impl SpikeTrial {
    pub fn basis_min(&self) -> f64 {
        self.basis_curve.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn frame_min(&self) -> f64 {
        self.frame_curve.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Strict improvement; rounding-level differences count as ties.
    pub fn frame_wins(&self) -> bool {
        self.frame_min() < self.basis_min() * (1.0 - TIE_MARGIN)
    }
}

pub const SPIKE_NODES: usize = 30;

/// Relative margin below which two error minima are treated as equal.
pub const TIE_MARGIN: f64 = 1e-9;

/// Injected-spike demo: a two-cluster SBM signal is analyzed in the LiDGFF,
/// the highest-index interpolated component with a zero coefficient receives
/// a spike of the largest coefficient magnitude, and the noisy signal is
/// low-pass filtered through the basis and through the frame.
pub fn spike_trial(seed: u64, n: usize, solve: &SolveConfig) -> Result<SpikeTrial> {
    let g = make_sbm(n, 2, 0.7, 0.25, seed)?;
    let truth = cluster_signal(n, 2);
    let b = gfb(&laplacian(&g)?)?;
    let basis = SpectralFrame::from_basis(&b);
    let frame = lidgff(&b, 0.5, 0.5)?;
    let s = truth.map(|v| Complex64::new(v, 0.0));
    let clean = analyze(&frame, &s, solve)?;
    let amp = clean.values.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    let spike_index = (0..frame.len())
        .rev()
        .find(|&m| !frame.origins[m].is_original() && clean.values[m].norm() <= 1e-8 * amp)
        .ok_or_else(|| Error::Infeasible("no interpolated component has a zero coefficient".into()))?;
    let noise_c: CVector = frame.vectors.column(spike_index) * Complex64::new(amp, 0.0);
    let noise = noise_c.map(|z| z.re);
    let y = &s + &noise_c;

    let basis_coeffs = analyze(&basis, &y, solve)?;
    let frame_coeffs = analyze(&frame, &y, solve)?;
    let curve = |f: &SpectralFrame, coeffs: &CVector| -> Result<Vec<f64>> {
        (1..=f.len())
            .map(|w| {
                let out = synthesize(f, coeffs, &ideal_lowpass(f.len(), w)?)?;
                Ok(relative_error(&out, &truth, &noise)?.ratio)
            })
            .collect()
    };
    Ok(SpikeTrial {
        seed,
        spike_index,
        spike_amplitude: amp,
        clean_spectrum: clean.values.iter().map(|z| z.re).collect(),
        basis_spectrum: basis_coeffs.values.iter().map(|z| z.re).collect(),
        frame_spectrum: frame_coeffs.values.iter().map(|z| z.re).collect(),
        basis_curve: curve(&basis, &basis_coeffs.values)?,
        frame_curve: curve(&frame, &frame_coeffs.values)?,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub method: String,
    pub frame_size: usize,
    pub iterations: usize,
    pub snr_db: f64,
    pub build_seconds: f64,
    pub solve_seconds: f64,
    pub over_budget: bool,
}

/// Builds GFB, LiDGFF and lrLiDGFF on a two-cluster SBM of size `n` and
/// runs one noiseless recovery with each. Rows exceeding `budget_seconds`
/// are flagged.
pub fn bench_size(n: usize, rate: f64, seed: u64, solve: &SolveConfig, budget_seconds: f64) -> Result<Vec<BenchRow>> {
    let g = make_sbm(n, 2, 0.7, 0.25, seed)?;
    let truth = cluster_signal(n, 2);
    let phi = SamplingPattern::random(n, rate, mix(seed, &[n as u64]))?;
    let y = phi.apply(&truth);
    let mut rows = Vec::new();
    for method in [Method::Gfb, Method::LiDgff, Method::LrLiDgff] {
        let start = Instant::now();
        let built = build_frame(&g, method, &FrameParams::default())?;
        let build_seconds = start.elapsed().as_secs_f64();
        let start = Instant::now();
        let out = recover_noiseless(&built.frame, &phi, &y, solve)?;
        let solve_seconds = start.elapsed().as_secs_f64();
        rows.push(BenchRow {
            n,
            method: method.name().to_string(),
            frame_size: built.frame.len(),
            iterations: out.iterations,
            snr_db: snr_db(&out.values, &truth)?,
            build_seconds,
            solve_seconds,
            over_budget: build_seconds + solve_seconds > budget_seconds,
        });
    }
    Ok(rows)
}
