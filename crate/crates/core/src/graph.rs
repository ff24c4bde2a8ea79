//! Graph representation, the Laplacian family, and the variation measures
//! (graph total variation, directed variation, edge total variation).
//!
//! Node indices are 0-based everywhere inside the crate. The CSV formats in
//! [`crate::io`] are 1-based and convert at the boundary.

use std::collections::HashSet;
use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub weight: f64,
}

/// Weighted graph on `n` nodes.
///
/// For an undirected graph each edge is stored once and contributes to both
/// `W[src, dst]` and `W[dst, src]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    directed: bool,
}

impl Graph {
    pub fn new(n: usize, edges: Vec<Edge>, directed: bool) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph("node count must be positive".into()));
        }
        let mut seen = HashSet::with_capacity(edges.len());
        for e in &edges {
            if e.src >= n || e.dst >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge {} -> {} out of range for n = {n}",
                    e.src + 1,
                    e.dst + 1
                )));
            }
            if !e.weight.is_finite() || e.weight < 0.0 {
                return Err(Error::InvalidGraph(format!(
                    "edge {} -> {} has invalid weight {}",
                    e.src + 1,
                    e.dst + 1,
                    e.weight
                )));
            }
            if e.src == e.dst {
                return Err(Error::SelfLoop(e.src + 1));
            }
            let key = if directed {
                (e.src, e.dst)
            } else {
                (e.src.min(e.dst), e.src.max(e.dst))
            };
            if !seen.insert(key) {
                return Err(Error::DuplicateEdge(e.src + 1, e.dst + 1));
            }
        }
        Ok(Self { n, edges, directed })
    }

    /// Builds a graph from `(src, dst, weight)` triples with 0-based indices.
    pub fn from_triples(n: usize, triples: &[(usize, usize, f64)], directed: bool) -> Result<Self> {
        let edges = triples
            .iter()
            .map(|&(src, dst, weight)| Edge { src, dst, weight })
            .collect();
        Self::new(n, edges, directed)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    /// Dense adjacency matrix, `W[i, j]` = weight of the edge i -> j.
    pub fn adjacency(&self) -> DMatrix<f64> {
        let mut w = DMatrix::zeros(self.n, self.n);
        for e in &self.edges {
            w[(e.src, e.dst)] = e.weight;
            if !self.directed {
                w[(e.dst, e.src)] = e.weight;
            }
        }
        w
    }

    /// The undirected graph with adjacency `Sym(W) = (W + W^T) / 2`.
    pub fn symmetrized(&self) -> Graph {
        if !self.directed {
            return self.clone();
        }
        let w = self.adjacency();
        let mut edges = Vec::new();
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let ws = 0.5 * (w[(i, j)] + w[(j, i)]);
                if ws > 0.0 {
                    edges.push(Edge {
                        src: i,
                        dst: j,
                        weight: ws,
                    });
                }
            }
        }
        Graph {
            n: self.n,
            edges,
            directed: false,
        }
    }

    /// Weighted degrees `d_i = sum_j W[i, j]` of the (possibly directed) adjacency.
    pub fn degrees(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.n];
        for e in &self.edges {
            d[e.src] += e.weight;
            if !self.directed {
                d[e.dst] += e.weight;
            }
        }
        d
    }

    pub fn is_connected(&self) -> bool {
        let mut adj = vec![Vec::new(); self.n];
        for e in &self.edges {
            if e.weight > 0.0 {
                adj[e.src].push(e.dst);
                adj[e.dst].push(e.src);
            }
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &u in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OperatorKind {
    Laplacian,
    NormalizedLaplacian,
    Magnetic { q: f64 },
}

/// A Hermitian positive semidefinite graph operator.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    pub entries: DMatrix<Complex64>,
    pub kind: OperatorKind,
}

impl HermitianOperator {
    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    /// True when every entry has zero imaginary part.
    pub fn is_real(&self) -> bool {
        self.entries.iter().all(|z| z.im == 0.0)
    }

    pub fn real_part(&self) -> DMatrix<f64> {
        self.entries.map(|z| z.re)
    }

    /// Largest `|A[i,j] - conj(A[j,i])|`.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.n();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((self.entries[(i, j)] - self.entries[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// `Re(x^H A x)`; the imaginary part vanishes for Hermitian `A`.
    pub fn quadratic_form(&self, x: &DVector<Complex64>) -> Result<f64> {
        check_len(self.n(), x.len())?;
        Ok(x.dotc(&(&self.entries * x)).re)
    }
}

fn real_operator(m: DMatrix<f64>, kind: OperatorKind) -> HermitianOperator {
    HermitianOperator {
        entries: m.map(|v| Complex64::new(v, 0.0)),
        kind,
    }
}

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}

fn laplacian_matrix(g: &Graph) -> DMatrix<f64> {
    let w = g.adjacency();
    let mut l = -w;
    for (i, d) in g.degrees().into_iter().enumerate() {
        l[(i, i)] = d;
    }
    l
}

/// Combinatorial Laplacian `L = D - W` of an undirected graph.
pub fn laplacian(g: &Graph) -> Result<HermitianOperator> {
    if g.is_directed() {
        return Err(Error::DirectedGraph);
    }
    Ok(real_operator(laplacian_matrix(g), OperatorKind::Laplacian))
}

/// Symmetric normalized Laplacian `D^{-1/2} L D^{-1/2}`.
pub fn normalized_laplacian(g: &Graph) -> Result<HermitianOperator> {
    if g.is_directed() {
        return Err(Error::DirectedGraph);
    }
    let d = g.degrees();
    if let Some(i) = d.iter().position(|&di| di <= 0.0) {
        return Err(Error::ZeroDegree(i + 1));
    }
    let inv_sqrt: Vec<f64> = d.iter().map(|di| 1.0 / di.sqrt()).collect();
    let mut l = laplacian_matrix(g);
    for i in 0..g.n() {
        for j in 0..g.n() {
            l[(i, j)] *= inv_sqrt[i] * inv_sqrt[j];
        }
    }
    Ok(real_operator(l, OperatorKind::NormalizedLaplacian))
}

/// Magnetic Laplacian `D_s - Gamma(q) .* W_s` with `W_s = Sym(W)` and
/// `Gamma[i,j] = exp(j 2 pi q (w_ij - w_ji))`.
pub fn magnetic_laplacian(g: &Graph, q: f64) -> Result<HermitianOperator> {
    if !(0.0..1.0).contains(&q) {
        return Err(invalid(format!("rotation parameter q = {q} outside [0, 1)")));
    }
    let n = g.n();
    let w = g.adjacency();
    let mut l = DMatrix::<Complex64>::zeros(n, n);
    for i in 0..n {
        let mut deg = 0.0;
        for j in 0..n {
            if i == j {
                continue;
            }
            let ws = 0.5 * (w[(i, j)] + w[(j, i)]);
            if ws == 0.0 {
                continue;
            }
            deg += ws;
            let phase = 2.0 * PI * q * (w[(i, j)] - w[(j, i)]);
            l[(i, j)] = -Complex64::from_polar(ws, phase);
        }
        l[(i, i)] = Complex64::new(deg, 0.0);
    }
    Ok(HermitianOperator {
        entries: l,
        kind: OperatorKind::Magnetic { q },
    })
}

/// Graph total variation `x^H L x`.
pub fn gtv(l: &HermitianOperator, x: &DVector<Complex64>) -> Result<f64> {
    if let OperatorKind::Magnetic { .. } = l.kind {
        return Err(invalid(
            "gtv is defined for the (normalized) Laplacian; use quadratic_form for the magnetic Laplacian",
        ));
    }
    l.quadratic_form(x)
}

/// Directed variation `sum_{i,j} w_ij [x_i - x_j]_+^2`.
///
/// Undirected edges count in both directions, so the value coincides with
/// the graph total variation.
pub fn dv(g: &Graph, x: &[f64]) -> Result<f64> {
    check_len(g.n(), x.len())?;
    Ok(dv_unchecked(g, x))
}

pub(crate) fn dv_unchecked(g: &Graph, x: &[f64]) -> f64 {
    let mut acc = 0.0;
    if g.is_directed() {
        for e in g.edges() {
            let d = x[e.src] - x[e.dst];
            if d > 0.0 {
                acc += e.weight * d * d;
            }
        }
    } else {
        for e in g.edges() {
            let d = x[e.src] - x[e.dst];
            acc += e.weight * d * d;
        }
    }
    acc
}

/// Edge total variation `sum_{(i,j) in E} |x_i - x_j|^2` for complex signals.
pub fn tv_complex(g: &Graph, x: &DVector<Complex64>) -> Result<f64> {
    check_len(g.n(), x.len())?;
    Ok(g.edges().iter().map(|e| (x[e.src] - x[e.dst]).norm_sqr()).sum())
}
