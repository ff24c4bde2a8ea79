//! Shared fixtures for the criterion benchmarks.

use dgff::basis::gfb;
use dgff::generators::{make_random_connected, make_sbm, sbm_membership};
use dgff::graph::laplacian;
use dgff::manifold::IntermediateObjective;
use dgff::{Graph, SpectralBasis};
use nalgebra::{DMatrix, DVector};

/// Two-cluster block model used across benchmarks.
pub fn community_graph(n: usize) -> Graph {
    make_sbm(n, 2, 0.7, 0.25, n as u64).expect("valid block model")
}

pub fn community_signal(n: usize) -> DVector<f64> {
    DVector::from_iterator(
        n,
        sbm_membership(n, 2).into_iter().map(|c| if c == 0 { 0.9 } else { 0.1 }),
    )
}

pub fn community_basis(n: usize) -> SpectralBasis {
    gfb(&laplacian(&community_graph(n)).expect("undirected")).expect("eigendecomposition")
}

/// Directed graph, its symmetrized eigenbasis as a real matrix, and a
/// feasible starting block for the intermediate-frequency objective.
pub fn stiefel_fixture(n: usize) -> (Graph, DMatrix<f64>, DMatrix<f64>) {
    let g = make_random_connected(n, 0.3, true, 7).expect("valid graph");
    let b = gfb(&laplacian(&g.symmetrized()).expect("undirected")).expect("eigendecomposition");
    let u = b.real_vectors().expect("real basis");
    let k = n / 2;
    let x0 = DMatrix::from_fn(n, k, |i, j| (u[(i, j)] + u[(i, j + 1)]) / std::f64::consts::SQRT_2);
    (g, u.columns(0, k + 1).into_owned(), x0)
}

pub fn objective<'g>(g: &'g Graph, u: &DMatrix<f64>) -> IntermediateObjective<'g> {
    IntermediateObjective::new(g, u, 0.5, 0.5).expect("valid block")
}
