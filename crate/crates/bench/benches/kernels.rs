use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dgff::convex::{pds_solve, SplitProblem};
use dgff::frames::{default_threshold, lidgff, lrlidgff_single};
use dgff::graph::laplacian;
use dgff::linalg::to_complex_vec;
use dgff::manifold::{pcal_solve, SolverConfig, StiefelProblem};
use dgff::spectral::SamplingPattern;
use dgff::{gfb, SpectralFrame};
use dgff_bench::{community_basis, community_graph, community_signal, objective, stiefel_fixture};

fn bases(c: &mut Criterion) {
    let mut group = c.benchmark_group("gfb");
    for n in [50, 100, 200] {
        let l = laplacian(&community_graph(n)).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &l, |b, l| b.iter(|| gfb(l).unwrap()));
    }
    group.finish();
}

fn frames(c: &mut Criterion) {
    let mut group = c.benchmark_group("frames");
    for n in [50, 200] {
        let basis = community_basis(n);
        let t1 = default_threshold(&basis.frequencies).unwrap();
        group.bench_with_input(BenchmarkId::new("lidgff", n), &basis, |b, basis| {
            b.iter(|| lidgff(basis, 0.5, 0.5).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("lrlidgff", n), &basis, |b, basis| {
            b.iter(|| lrlidgff_single(basis, t1).unwrap())
        });
    }
    group.finish();
}

fn recovery(c: &mut Criterion) {
    let mut group = c.benchmark_group("pds");
    group.sample_size(10);
    let n = 60;
    let basis = community_basis(n);
    let phi = SamplingPattern::random(n, 0.5, 1).unwrap();
    let y = to_complex_vec(&phi.apply(&community_signal(n)));
    for (name, frame) in [
        ("gfb", SpectralFrame::from_basis(&basis)),
        ("lidgff", lidgff(&basis, 0.5, 0.5).unwrap()),
    ] {
        let mut p = SplitProblem::new(phi.restrict(&frame.vectors), y.clone(), 0.0);
        p.max_iter = 5000;
        group.bench_function(name, |b| b.iter(|| pds_solve(&p).unwrap()));
    }
    group.finish();
}

fn stiefel(c: &mut Criterion) {
    let mut group = c.benchmark_group("pcal");
    group.sample_size(10);
    let (g, u, x0) = stiefel_fixture(16);
    let obj = objective(&g, &u);
    let problem = StiefelProblem::new(&obj, g.n(), x0.ncols()).unwrap();
    let cfg = SolverConfig {
        max_iter: 2000,
        ..SolverConfig::default()
    };
    group.bench_function("intermediate-16", |b| {
        b.iter(|| pcal_solve(&problem, &cfg, &x0).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bases, frames, recovery, stiefel);
criterion_main!(benches);
