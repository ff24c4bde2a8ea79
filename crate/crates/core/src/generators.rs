//! Synthetic graph generators. All random generators are reproducible from a
//! `u64` seed (ChaCha8 stream).

use std::f64::consts::PI;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Result};
use crate::graph::{Edge, Graph};

pub(crate) fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(invalid(format!("graph generators need n >= 2, got {n}")));
    }
    Ok(())
}

fn check_prob(name: &str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid(format!("{name} = {p} is not a probability")));
    }
    Ok(())
}

/// Cycle `0 -> 1 -> ... -> n-1 -> 0` with unit weights.
pub fn make_ring(n: usize, directed: bool) -> Result<Graph> {
    check_n(n)?;
    let mut edges: Vec<Edge> = (0..n)
        .map(|i| Edge {
            src: i,
            dst: (i + 1) % n,
            weight: 1.0,
        })
        .collect();
    if n == 2 && !directed {
        // the undirected 2-cycle collapses to one edge
        edges.truncate(1);
    }
    Graph::new(n, edges, directed)
}

/// Undirected unit-weight chain.
pub fn make_path(n: usize) -> Result<Graph> {
    check_n(n)?;
    let edges = (0..n - 1)
        .map(|i| Edge {
            src: i,
            dst: i + 1,
            weight: 1.0,
        })
        .collect();
    Graph::new(n, edges, false)
}

/// Cluster label of each node for [`make_sbm`]: contiguous, near-equal blocks.
pub fn sbm_membership(n: usize, clusters: usize) -> Vec<usize> {
    (0..n).map(|i| i * clusters / n).collect()
}

/// Undirected stochastic block model with unit weights.
pub fn make_sbm(n: usize, clusters: usize, p_in: f64, p_out: f64, seed: u64) -> Result<Graph> {
    check_n(n)?;
    check_prob("p_in", p_in)?;
    check_prob("p_out", p_out)?;
    if clusters == 0 || clusters > n {
        return Err(invalid(format!("cluster count {clusters} invalid for n = {n}")));
    }
    let labels = sbm_membership(n, clusters);
    let mut rng = rng(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let p = if labels[i] == labels[j] { p_in } else { p_out };
            if rng.gen::<f64>() < p {
                edges.push(Edge {
                    src: i,
                    dst: j,
                    weight: 1.0,
                });
            }
        }
    }
    Graph::new(n, edges, false)
}

/// Erdos-Renyi graph with weights drawn uniformly from `[0.5, 1.5)`.
pub fn make_erdos_renyi(n: usize, p: f64, directed: bool, seed: u64) -> Result<Graph> {
    check_n(n)?;
    check_prob("p", p)?;
    let mut rng = rng(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j || (!directed && j < i) {
                continue;
            }
            if rng.gen::<f64>() < p {
                edges.push(Edge {
                    src: i,
                    dst: j,
                    weight: rng.gen_range(0.5..1.5),
                });
            }
        }
    }
    Graph::new(n, edges, directed)
}

/// Erdos-Renyi graph overlaid on a random spanning tree, so the result is
/// (weakly) connected for every seed.
pub fn make_random_connected(n: usize, p: f64, directed: bool, seed: u64) -> Result<Graph> {
    check_n(n)?;
    check_prob("p", p)?;
    let mut rng = rng(seed);
    let mut w = vec![vec![0.0f64; n]; n];
    for v in 1..n {
        let u = rng.gen_range(0..v);
        let (a, b) = if directed && rng.gen::<bool>() { (v, u) } else { (u, v) };
        w[a][b] = rng.gen_range(0.5..1.5);
    }
    for i in 0..n {
        for j in 0..n {
            if i == j || (!directed && j < i) {
                continue;
            }
            if w[i][j] == 0.0 && (directed || w[j][i] == 0.0) && rng.gen::<f64>() < p {
                w[i][j] = rng.gen_range(0.5..1.5);
            }
        }
    }
    let mut edges = Vec::new();
    for (i, row) in w.iter().enumerate() {
        for (j, &wij) in row.iter().enumerate() {
            if wij > 0.0 {
                let (src, dst) = if directed || i < j { (i, j) } else { (j, i) };
                edges.push(Edge { src, dst, weight: wij });
            }
        }
    }
    Graph::new(n, edges, directed)
}

/// Points sampled on a Swiss roll, connected by a symmetric k-nearest-neighbour
/// graph with Gaussian weights. Returns the graph and the 3-D coordinates.
pub fn make_swiss_roll(n: usize, k: usize, seed: u64) -> Result<(Graph, Vec<[f64; 3]>)> {
    check_n(n)?;
    if k == 0 || k >= n {
        return Err(invalid(format!("neighbour count {k} invalid for n = {n}")));
    }
    let mut rng = rng(seed);
    let pts: Vec<[f64; 3]> = (0..n)
        .map(|_| {
            let t = 1.5 * PI * (1.0 + 2.0 * rng.gen::<f64>());
            let h = 21.0 * rng.gen::<f64>();
            [t * t.cos(), h, t * t.sin()]
        })
        .collect();
    let dist2 = |a: &[f64; 3], b: &[f64; 3]| -> f64 { (0..3).map(|c| (a[c] - b[c]).powi(2)).sum() };

    let mut neighbours: Vec<Vec<(usize, f64)>> = Vec::with_capacity(n);
    let mut scale = 0.0;
    for i in 0..n {
        let mut d: Vec<(usize, f64)> = (0..n)
            .filter(|&j| j != i)
            .map(|j| (j, dist2(&pts[i], &pts[j])))
            .collect();
        d.select_nth_unstable_by(k - 1, |a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
        d.truncate(k);
        d.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
        scale += d.iter().map(|x| x.1.sqrt()).sum::<f64>();
        neighbours.push(d);
    }
    let sigma = scale / (n * k) as f64;
    let mut pairs = std::collections::BTreeMap::new();
    for (i, list) in neighbours.iter().enumerate() {
        for &(j, d2) in list {
            let key = (i.min(j), i.max(j));
            pairs.entry(key).or_insert((-d2 / (sigma * sigma)).exp());
        }
    }
    let edges = pairs
        .into_iter()
        .map(|((src, dst), weight)| Edge { src, dst, weight })
        .collect();
    Ok((Graph::new(n, edges, false)?, pts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn path_and_ring_shapes() {
        let p = make_path(2).unwrap();
        assert_eq!(p.edges().len(), 1);
        assert!(!p.is_directed());
        assert_eq!(make_ring(5, true).unwrap().edges().len(), 5);
        assert!(make_path(1).is_err());
        assert!(make_ring(1, true).is_err());
    }

    #[test]
    fn directed_ring_spectrum_matches_closed_form() {
        // L = D - W for the directed 4-cycle has eigenvalues 1 - exp(j 2 pi k / 4)
        let g = make_ring(4, true).unwrap();
        let w = g.adjacency();
        let mut l = -w.clone();
        for i in 0..4 {
            l[(i, i)] = w.row(i).sum();
        }
        let ev = l.complex_eigenvalues();
        let mut expected: Vec<Complex64> = (0..4)
            .map(|k| Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, 2.0 * PI * k as f64 / 4.0))
            .collect();
        for z in ev.iter() {
            let pos = expected
                .iter()
                .position(|e| (e - z).norm() < 1e-10)
                .unwrap_or_else(|| panic!("eigenvalue {z} not in closed form"));
            expected.remove(pos);
        }
        assert!(expected.is_empty());
    }

    #[test]
    fn sbm_is_seed_deterministic() {
        let a = make_sbm(20, 2, 0.7, 0.25, 9).unwrap();
        let b = make_sbm(20, 2, 0.7, 0.25, 9).unwrap();
        assert_eq!(a, b);
        let c = make_sbm(20, 2, 0.7, 0.25, 10).unwrap();
        assert_ne!(a.edges(), c.edges());
        assert!(make_sbm(20, 2, 1.5, 0.25, 9).is_err());
        assert_eq!(sbm_membership(4, 2), vec![0, 0, 1, 1]);
    }

    #[test]
    fn random_connected_is_connected() {
        for seed in 0..20 {
            assert!(make_random_connected(15, 0.1, false, seed).unwrap().is_connected());
            assert!(make_random_connected(15, 0.1, true, seed).unwrap().is_connected());
        }
    }

    #[test]
    fn swiss_roll_is_symmetric_knn() {
        let (g, pts) = make_swiss_roll(60, 6, 1).unwrap();
        assert_eq!(pts.len(), 60);
        assert!(!g.is_directed());
        assert!(g.degrees().iter().all(|&d| d > 0.0));
    }
}
