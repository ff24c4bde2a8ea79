//! Subcommand definitions and their drivers.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use dgff::generators::{make_erdos_renyi, make_path, make_random_connected, make_ring, make_sbm, make_swiss_roll};
use dgff::io::{read_frame, read_graph, read_signal, write_frame, write_signal};
use dgff::spectral::{analyze, ideal_lowpass, relative_error, synthesize, tikhonov_response, SolveConfig};
use dgff::{Error, Graph, Result, SolverConfig, SpectralFrame};
use nalgebra::DVector;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::config::Manifest;
use crate::experiment::{
    aggregate, bench_size, build_frame, cluster_signal, mix, normalize_signal, run_recovery, spike_trial, FrameParams,
    Method, RecoverySetup, SPIKE_NODES,
};

#[derive(Debug, Parser)]
#[command(name = "dgff", version, about = "Denser-graph-frequency graph Fourier frames")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Construct a basis or frame and write its vectors and frequencies.
    Build(BuildArgs),
    /// Filter a signal through a frame over a sweep of responses.
    Filter(FilterArgs),
    /// Sampling-recovery experiment over rates, noise levels and trials.
    Recover(RecoverArgs),
    /// Build and recovery cost against graph size.
    Bench(BenchArgs),
    /// Injected intermediate-frequency spike: low-pass denoising through
    /// the basis versus the interpolated frame.
    #[command(name = "demo-fig10", alias = "demo-spike")]
    DemoSpike(DemoArgs),
    /// Re-read a stored frame, re-write it and emit a plotting script.
    Export(ExportArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Generator spec (`path:N`, `ring:N[:directed]`, `sbm:N:C:PIN:POUT`,
    /// `er:N:P[:directed]`, `random:N:P[:directed]`, `swissroll:N[:K]`) or an
    /// edge-list CSV path.
    #[arg(long)]
    pub graph: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Flat `key = value` manifest; flags override its entries.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FrameArgs {
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// Magnetic rotation parameter.
    #[arg(long)]
    pub q: Option<f64>,
    /// lrLiDGFF frequency-gap threshold.
    #[arg(long)]
    pub threshold: Option<f64>,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub params: FrameArgs,
    /// Family: gfb, rgff, lidgff, lrlidgff, maggfb, magdgff, sfgfb, sfdgff,
    /// adgff-ring, adgff-path, dfb, dcb.
    #[arg(long)]
    pub frame: Option<String>,
    /// Record the Stiefel solver trace.
    #[arg(long)]
    pub trace: bool,
}

#[derive(Debug, Args)]
pub struct FilterArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub params: FrameArgs,
    #[arg(long)]
    pub frame: Option<String>,
    /// Directory holding `frame.csv` and `frequencies.csv` from `build`.
    #[arg(long)]
    pub frame_dir: Option<PathBuf>,
    /// `node,value` signal; defaults to the two-level cluster signal.
    #[arg(long)]
    pub signal: Option<PathBuf>,
    /// Standard deviation of added Gaussian noise.
    #[arg(long)]
    pub sigma: Option<f64>,
    /// `tikhonov` or `lowpass`.
    #[arg(long)]
    pub response: Option<String>,
    /// Tikhonov weights to sweep; low-pass sweeps every cutoff.
    #[arg(long, value_delimiter = ',')]
    pub c: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct RecoverArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub params: FrameArgs,
    /// Comma-separated families to compare.
    #[arg(long, value_delimiter = ',')]
    pub frame: Vec<String>,
    #[arg(long)]
    pub signal: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    pub rate: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub sigma: Vec<f64>,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Iteration cap of the sparse solver.
    #[arg(long)]
    pub max_iter: Option<usize>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Node counts.
    #[arg(long, value_delimiter = ',')]
    pub sizes: Vec<usize>,
    #[arg(long)]
    pub rate: Option<f64>,
    /// Per-size budget in seconds; slower rows are flagged.
    #[arg(long)]
    pub timeout: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
}

#[derive(Debug, Args)]
pub struct DemoArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long)]
    pub trials: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    /// Directory holding `frame.csv` and `frequencies.csv`.
    #[arg(long)]
    pub frame_dir: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

/// Process exit status for an error: 1 for numerical failures, 2 for usage,
/// parsing and I/O problems.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Eigen(_)
        | Error::Divergence(_)
        | Error::NonFinite(_)
        | Error::NotOrthonormal(_)
        | Error::Infeasible(_) => 1,
        _ => 2,
    }
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Build(a) => cmd_build(a),
        Command::Filter(a) => cmd_filter(a),
        Command::Recover(a) => cmd_recover(a),
        Command::Bench(a) => cmd_bench(a),
        Command::DemoSpike(a) => cmd_demo(a),
        Command::Export(a) => cmd_export(a),
    }
}

fn manifest(c: &CommonArgs) -> Result<Manifest> {
    match &c.config {
        Some(p) => Manifest::load(p),
        None => Ok(Manifest::default()),
    }
}

fn out_dir(c: &CommonArgs, m: &Manifest) -> Result<PathBuf> {
    let dir = m.pick_or(c.out.clone(), "out", PathBuf::from("."))?;
    fs::create_dir_all(&dir)?;
    Ok(dir)
}

fn field<T: std::str::FromStr>(parts: &[&str], i: usize, spec: &str) -> Result<T> {
    parts
        .get(i)
        .ok_or_else(|| Error::Parse(format!("graph spec '{spec}' is missing field {}", i + 1)))?
        .parse()
        .map_err(|_| Error::Parse(format!("graph spec '{spec}': bad field '{}'", parts[i])))
}

fn directed_flag(parts: &[&str], i: usize, spec: &str) -> Result<bool> {
    match parts.get(i) {
        None => Ok(false),
        Some(&"directed") => Ok(true),
        Some(&"undirected") => Ok(false),
        Some(other) => Err(Error::Parse(format!("graph spec '{spec}': unknown option '{other}'"))),
    }
}

/// Prefixes file-access errors with the offending path.
fn with_path(e: Error, path: &str) -> Error {
    match e {
        Error::Io(_) | Error::Csv(_) => Error::Io(std::io::Error::other(format!("{path}: {e}"))),
        e => e,
    }
}

/// Graph plus the number of clusters when it came from a block model.
pub fn load_graph(spec: &str, seed: u64) -> Result<(Graph, usize)> {
    let parts: Vec<&str> = spec.split(':').collect();
    let g = match parts[0] {
        "path" => make_path(field(&parts, 1, spec)?)?,
        "ring" => make_ring(field(&parts, 1, spec)?, directed_flag(&parts, 2, spec)?)?,
        "sbm" => {
            let c: usize = field(&parts, 2, spec)?;
            let g = make_sbm(
                field(&parts, 1, spec)?,
                c,
                field(&parts, 3, spec)?,
                field(&parts, 4, spec)?,
                seed,
            )?;
            return Ok((g, c));
        }
        "er" => make_erdos_renyi(
            field(&parts, 1, spec)?,
            field(&parts, 2, spec)?,
            directed_flag(&parts, 3, spec)?,
            seed,
        )?,
        "random" => make_random_connected(
            field(&parts, 1, spec)?,
            field(&parts, 2, spec)?,
            directed_flag(&parts, 3, spec)?,
            seed,
        )?,
        "swissroll" => {
            let k = if parts.len() > 2 { field(&parts, 2, spec)? } else { 6 };
            make_swiss_roll(field(&parts, 1, spec)?, k, seed)?.0
        }
        _ => read_graph(Path::new(spec)).map_err(|e| with_path(e, spec))?,
    };
    Ok((g, 2))
}

fn graph_from(c: &CommonArgs, m: &Manifest) -> Result<(Graph, usize)> {
    let spec: Option<String> = m.pick(c.graph.clone(), "graph")?;
    let spec = spec.ok_or_else(|| Error::InvalidParameter("--graph is required".into()))?;
    load_graph(&spec, m.pick_or(c.seed, "seed", 0)?)
}

fn frame_params(p: &FrameArgs, m: &Manifest, seed: u64) -> Result<FrameParams> {
    let d = FrameParams::default();
    Ok(FrameParams {
        alpha: m.pick_or(p.alpha, "alpha", d.alpha)?,
        beta: m.pick_or(p.beta, "beta", d.beta)?,
        q: m.pick_or(p.q, "q", d.q)?,
        threshold: m.pick(p.threshold, "threshold")?,
        seed,
        pcal: SolverConfig::default(),
    })
}

fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}

fn real_signal(path: &Path) -> Result<DVector<f64>> {
    let s = read_signal(path).map_err(|e| with_path(e, &path.display().to_string()))?;
    if s.iter().any(|z| z.im != 0.0) {
        return Err(Error::InvalidParameter(format!(
            "{}: signal must be real",
            path.display()
        )));
    }
    Ok(normalize_signal(&s.map(|z| z.re)))
}

fn cmd_build(a: BuildArgs) -> Result<()> {
    let m = manifest(&a.common)?;
    let (g, _) = graph_from(&a.common, &m)?;
    let seed = m.pick_or(a.common.seed, "seed", 0)?;
    let method = Method::parse(&m.pick_or(a.frame.clone(), "frame", "lidgff".to_string())?)?;
    let mut params = frame_params(&a.params, &m, seed)?;
    params.pcal.trace = a.trace || m.pick_or(None, "trace", false)?;
    let built = build_frame(&g, method, &params)?;
    let dir = out_dir(&a.common, &m)?;
    write_frame(&dir.join("frame.csv"), &dir.join("frequencies.csv"), &built.frame)?;
    let f = &built.frame;
    let mut rows = vec![
        vec!["family".into(), method.name().into()],
        vec!["nodes".into(), f.n().to_string()],
        vec!["vectors".into(), f.len().to_string()],
        vec!["dispersion".into(), f.dispersion().to_string()],
        vec!["rank".into(), f.rank().to_string()],
        vec!["norm_defect".into(), f.norm_defect().to_string()],
    ];
    rows.extend(built.notes.iter().map(|(k, v)| vec![k.clone(), v.clone()]));
    write_csv(&dir.join("summary.csv"), &["key", "value"], &rows)?;
    if params.pcal.trace {
        let rows: Vec<Vec<String>> = built
            .trace
            .iter()
            .map(|t| vec![t.iteration.to_string(), t.value.to_string(), t.feasibility.to_string()])
            .collect();
        write_csv(
            &dir.join("trace.csv"),
            &["iteration", "objective", "feasibility"],
            &rows,
        )?;
    }
    println!(
        "{}: {} vectors on {} nodes, dispersion {}",
        method.name(),
        f.len(),
        f.n(),
        f.dispersion()
    );
    Ok(())
}

fn cmd_filter(a: FilterArgs) -> Result<()> {
    let m = manifest(&a.common)?;
    let seed = m.pick_or(a.common.seed, "seed", 0)?;
    let graph_spec: Option<String> = m.pick(a.common.graph.clone(), "graph")?;
    let frame_dir: Option<PathBuf> = m.pick(a.frame_dir.clone(), "frame-dir")?;
    let frame = match (&frame_dir, &graph_spec) {
        (Some(d), _) => read_frame(&d.join("frame.csv"), &d.join("frequencies.csv"))?,
        (None, Some(_)) => {
            let (g, _) = graph_from(&a.common, &m)?;
            let method = Method::parse(&m.pick_or(a.frame.clone(), "frame", "lidgff".to_string())?)?;
            build_frame(&g, method, &frame_params(&a.params, &m, seed)?)?.frame
        }
        (None, None) => return Err(Error::InvalidParameter("--graph or --frame-dir is required".into())),
    };
    let signal: Option<PathBuf> = m.pick(a.signal.clone(), "signal")?;
    let truth = match signal {
        Some(p) => real_signal(&p)?,
        None => match &graph_spec {
            Some(spec) => cluster_signal(frame.n(), load_graph(spec, seed)?.1),
            None => cluster_signal(frame.n(), 2),
        },
    };
    if truth.len() != frame.n() {
        return Err(Error::DimensionMismatch {
            expected: frame.n(),
            got: truth.len(),
        });
    }
    let sigma = m.pick_or(a.sigma, "sigma", 0.0)?;
    let noise = if sigma > 0.0 {
        let dist = Normal::new(0.0, sigma).map_err(|e| Error::InvalidParameter(e.to_string()))?;
        let mut r = ChaCha8Rng::seed_from_u64(mix(seed, &[0xf1]));
        DVector::from_fn(truth.len(), |_, _| dist.sample(&mut r))
    } else {
        DVector::zeros(truth.len())
    };
    let y = (&truth + &noise).map(|v| Complex64::new(v, 0.0));
    let coeffs = analyze(&frame, &y, &SolveConfig::default())?;

    let response = m.pick_or(a.response.clone(), "response", "tikhonov".to_string())?;
    let sweep: Vec<(String, dgff::FilterResponse)> = match response.as_str() {
        "tikhonov" => {
            let default: Vec<f64> = (-8..=8).map(|e| 10f64.powf(e as f64 / 4.0)).collect();
            m.pick_list(&a.c, "c", &default)?
                .into_iter()
                .map(|c| Ok((c.to_string(), tikhonov_response(&frame.frequencies, c)?)))
                .collect::<Result<_>>()?
        }
        "lowpass" => (1..=frame.len())
            .map(|w| Ok((w.to_string(), ideal_lowpass(frame.len(), w)?)))
            .collect::<Result<_>>()?,
        other => return Err(Error::InvalidParameter(format!("unknown response '{other}'"))),
    };
    let mut rows = Vec::new();
    let mut best: Option<(f64, dgff::CVector)> = None;
    for (label, h) in &sweep {
        let out = synthesize(&frame, &coeffs.values, h)?;
        let err = relative_error(&out, &truth, &noise)?;
        rows.push(vec![
            label.clone(),
            err.e_f.to_string(),
            err.e.to_string(),
            err.ratio.to_string(),
        ]);
        if best.as_ref().map_or(true, |(b, _)| err.e_f < *b) {
            best = Some((err.e_f, out));
        }
    }
    let dir = out_dir(&a.common, &m)?;
    write_csv(&dir.join("sweep.csv"), &["parameter", "e_f", "e", "ratio"], &rows)?;
    if let Some((e_f, out)) = best {
        write_signal(&dir.join("filtered.csv"), &out)?;
        println!("{} sweep points, best e_f {e_f}", rows.len());
    }
    let coeff_rows: Vec<Vec<String>> = coeffs
        .values
        .iter()
        .enumerate()
        .map(|(i, z)| {
            vec![
                (i + 1).to_string(),
                frame.frequencies[i].to_string(),
                dgff::io::format_complex(*z),
            ]
        })
        .collect();
    write_csv(
        &dir.join("coefficients.csv"),
        &["index", "frequency", "coefficient"],
        &coeff_rows,
    )?;
    Ok(())
}

fn fmt_f(v: f64) -> String {
    v.to_string()
}

fn cmd_recover(a: RecoverArgs) -> Result<()> {
    let m = manifest(&a.common)?;
    let seed = m.pick_or(a.common.seed, "seed", 0)?;
    let (g, clusters) = graph_from(&a.common, &m)?;
    let names = m.pick_list(
        &a.frame,
        "frame",
        &["gfb".to_string(), "lidgff".to_string(), "lrlidgff".to_string()],
    )?;
    let params = frame_params(&a.params, &m, seed)?;
    let signal: Option<PathBuf> = m.pick(a.signal.clone(), "signal")?;
    let truth = match signal {
        Some(p) => real_signal(&p)?,
        None => cluster_signal(g.n(), clusters),
    };
    if truth.len() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            got: truth.len(),
        });
    }
    let mut frames = Vec::new();
    for name in &names {
        let method = Method::parse(name)?;
        frames.push((method.name().to_string(), build_frame(&g, method, &params)?.frame));
    }
    let mut solve = SolveConfig::default();
    solve.max_iter = m.pick_or(a.max_iter, "max-iter", solve.max_iter)?;
    let setup = RecoverySetup {
        rates: m.pick_list(&a.rate, "rate", &[0.3, 0.5, 0.7])?,
        sigmas: m.pick_list(&a.sigma, "sigma", &[0.0])?,
        trials: m.pick_or(a.trials, "trials", 20)?,
        seed,
        solve,
    };
    let rows = run_recovery(&frames, &truth, &setup);
    let dir = out_dir(&a.common, &m)?;
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.method.clone(),
                fmt_f(r.rate),
                fmt_f(r.sigma),
                r.trial.to_string(),
                fmt_f(r.snr_db),
                fmt_f(r.e_ratio),
                r.iterations.to_string(),
                r.failed.to_string(),
            ]
        })
        .collect();
    write_csv(
        &dir.join("recovery.csv"),
        &[
            "method",
            "rate",
            "sigma",
            "trial",
            "snr_db",
            "e_ratio",
            "iterations",
            "failed",
        ],
        &body,
    )?;
    let timing: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.method.clone(),
                fmt_f(r.rate),
                fmt_f(r.sigma),
                r.trial.to_string(),
                fmt_f(r.seconds),
            ]
        })
        .collect();
    write_csv(
        &dir.join("timing.csv"),
        &["method", "rate", "sigma", "trial", "seconds"],
        &timing,
    )?;
    let agg = aggregate(&rows);
    let body: Vec<Vec<String>> = agg
        .iter()
        .map(|r| {
            vec![
                r.method.clone(),
                fmt_f(r.rate),
                fmt_f(r.sigma),
                fmt_f(r.mean_snr_db),
                fmt_f(r.mean_e_ratio),
                fmt_f(r.mean_iterations),
                r.trials.to_string(),
                r.failures.to_string(),
            ]
        })
        .collect();
    write_csv(
        &dir.join("aggregate.csv"),
        &[
            "method",
            "rate",
            "sigma",
            "mean_snr_db",
            "mean_e_ratio",
            "mean_iterations",
            "trials",
            "failures",
        ],
        &body,
    )?;
    for r in &agg {
        println!(
            "{:>10} p={} sigma={} snr={:.3} dB",
            r.method, r.rate, r.sigma, r.mean_snr_db
        );
    }
    Ok(())
}

fn cmd_bench(a: BenchArgs) -> Result<()> {
    let m = manifest(&a.common)?;
    let seed = m.pick_or(a.common.seed, "seed", 0)?;
    let sizes = m.pick_list(&a.sizes, "sizes", &[250, 500, 1000])?;
    let rate = m.pick_or(a.rate, "rate", 0.5)?;
    let budget = m.pick_or(a.timeout, "timeout", 600.0)?;
    let mut solve = SolveConfig::default();
    solve.max_iter = m.pick_or(a.max_iter, "max-iter", solve.max_iter)?;
    let dir = out_dir(&a.common, &m)?;
    let mut body = Vec::new();
    let mut timing = Vec::new();
    for n in sizes {
        for r in bench_size(n, rate, seed, &solve, budget)? {
            body.push(vec![
                r.n.to_string(),
                r.method.clone(),
                r.frame_size.to_string(),
                r.iterations.to_string(),
                fmt_f(r.snr_db),
            ]);
            timing.push(vec![
                r.n.to_string(),
                r.method.clone(),
                fmt_f(r.build_seconds),
                fmt_f(r.solve_seconds),
                r.over_budget.to_string(),
            ]);
            println!(
                "n={} {:>9} M={} iters={} {:.2}s",
                r.n,
                r.method,
                r.frame_size,
                r.iterations,
                r.build_seconds + r.solve_seconds
            );
        }
    }
    write_csv(
        &dir.join("bench.csv"),
        &["n", "method", "frame_size", "iterations", "snr_db"],
        &body,
    )?;
    write_csv(
        &dir.join("bench_timing.csv"),
        &["n", "method", "build_seconds", "solve_seconds", "over_budget"],
        &timing,
    )?;
    Ok(())
}

fn cmd_demo(a: DemoArgs) -> Result<()> {
    let m = manifest(&a.common)?;
    let seed = m.pick_or(a.common.seed, "seed", 0)?;
    let trials = m.pick_or(a.trials, "trials", 20)?;
    let dir = out_dir(&a.common, &m)?;
    let solve = SolveConfig::default();
    let mut summary = Vec::new();
    let mut spectra = Vec::new();
    let mut curves = Vec::new();
    let mut wins = 0;
    for t in 0..trials {
        let r = spike_trial(mix(seed, &[t as u64]), SPIKE_NODES, &solve)?;
        wins += r.frame_wins() as usize;
        summary.push(vec![
            t.to_string(),
            r.seed.to_string(),
            (r.spike_index + 1).to_string(),
            fmt_f(r.spike_amplitude),
            fmt_f(r.basis_min()),
            fmt_f(r.frame_min()),
            r.frame_wins().to_string(),
        ]);
        for (path, values) in [
            ("basis", &r.basis_spectrum),
            ("frame", &r.frame_spectrum),
            ("clean", &r.clean_spectrum),
        ] {
            for (i, v) in values.iter().enumerate() {
                spectra.push(vec![t.to_string(), path.into(), (i + 1).to_string(), fmt_f(*v)]);
            }
        }
        for (path, values) in [("basis", &r.basis_curve), ("frame", &r.frame_curve)] {
            for (i, v) in values.iter().enumerate() {
                curves.push(vec![t.to_string(), path.into(), (i + 1).to_string(), fmt_f(*v)]);
            }
        }
    }
    write_csv(
        &dir.join("spike_summary.csv"),
        &[
            "trial",
            "seed",
            "spike_index",
            "amplitude",
            "basis_min_ratio",
            "frame_min_ratio",
            "frame_wins",
        ],
        &summary,
    )?;
    write_csv(
        &dir.join("spike_spectra.csv"),
        &["trial", "path", "index", "coefficient"],
        &spectra,
    )?;
    write_csv(
        &dir.join("spike_curves.csv"),
        &["trial", "path", "cutoff", "ratio"],
        &curves,
    )?;
    println!("frame path wins in {wins} of {trials} trials");
    Ok(())
}

const PLOT_SCRIPT: &str = r#"import csv, sys
import matplotlib.pyplot as plt

d = sys.argv[1] if len(sys.argv) > 1 else "."
with open(f"{d}/frequencies.csv") as fh:
    rows = list(csv.DictReader(fh))
freq = [float(r["frequency"]) for r in rows]
orig = [r["origin"].startswith("original") for r in rows]
fig, ax = plt.subplots()
ax.scatter(range(1, len(freq) + 1), freq, c=["k" if o else "r" for o in orig], s=8)
ax.set_xlabel("index")
ax.set_ylabel("graph frequency")
fig.savefig(f"{d}/frequencies.png", dpi=150)
"#;

fn cmd_export(a: ExportArgs) -> Result<()> {
    let f: SpectralFrame = read_frame(&a.frame_dir.join("frame.csv"), &a.frame_dir.join("frequencies.csv"))?;
    fs::create_dir_all(&a.out)?;
    write_frame(&a.out.join("frame.csv"), &a.out.join("frequencies.csv"), &f)?;
    fs::write(a.out.join("plot_frequencies.py"), PLOT_SCRIPT)?;
    println!("exported {} vectors to {}", f.len(), a.out.display());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_specs() {
        assert_eq!(load_graph("path:5", 0).unwrap().0.n(), 5);
        assert!(load_graph("ring:6:directed", 0).unwrap().0.is_directed());
        let (g, c) = load_graph("sbm:20:4:0.7:0.2", 1).unwrap();
        assert_eq!((g.n(), c), (20, 4));
        assert!(load_graph("ring:6:sideways", 0).is_err());
        assert!(load_graph("path:x", 0).is_err());
        let missing = load_graph("/nonexistent/graph.csv", 0).unwrap_err();
        assert_eq!(exit_code(&missing), 2);
    }

    #[test]
    fn numerical_errors_exit_one() {
        assert_eq!(exit_code(&Error::Divergence("x".into())), 1);
        assert_eq!(exit_code(&Error::InvalidParameter("x".into())), 2);
    }

    #[test]
    fn cli_parses() {
        let cli = Cli::try_parse_from([
            "dgff",
            "recover",
            "--graph",
            "path:8",
            "--rate",
            "0.3,0.5",
            "--frame",
            "gfb,lidgff",
        ])
        .unwrap();
        match cli.command {
            Command::Recover(a) => {
                assert_eq!(a.rate, vec![0.3, 0.5]);
                assert_eq!(a.frame, vec!["gfb", "lidgff"]);
            }
            _ => panic!("wrong subcommand"),
        }
        assert!(Cli::try_parse_from(["dgff", "demo-spike"]).is_ok());
    }
}
