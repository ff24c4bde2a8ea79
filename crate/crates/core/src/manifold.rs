//! Orthogonality-constrained minimization with a column-wise proximal
//! augmented-Lagrangian scheme, plus the directed-variation objectives it is
//! used for.

use nalgebra::{DMatrix, DVector};
use rand_distr::{Distribution, StandardNormal};

use crate::error::{invalid, Error, Result};
use crate::generators::rng;
use crate::graph::{dv_unchecked, Graph};

/// Gradient of the directed variation at `x`, written into `out`.
pub(crate) fn dv_gradient_into(g: &Graph, x: &[f64], out: &mut [f64]) {
    out.iter_mut().for_each(|v| *v = 0.0);
    let directed = g.is_directed();
    for e in g.edges() {
        let d = x[e.src] - x[e.dst];
        if directed && d <= 0.0 {
            continue;
        }
        let s = 2.0 * e.weight * d;
        out[e.src] += s;
        out[e.dst] -= s;
    }
}

/// Gradient of `sum w_ij [x_i - x_j]_+^2`. At a kink (`x_i = x_j` on a directed
/// edge) the one-sided value zero is used.
pub fn dv_gradient(g: &Graph, x: &[f64]) -> Result<DVector<f64>> {
    if x.len() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            got: x.len(),
        });
    }
    let mut out = DVector::zeros(g.n());
    dv_gradient_into(g, x, out.as_mut_slice());
    Ok(out)
}

/// A smooth objective on `n x K` real matrices.
pub trait StiefelObjective {
    fn value(&self, x: &DMatrix<f64>) -> f64;
    fn gradient(&self, x: &DMatrix<f64>) -> DMatrix<f64>;
}

fn check_block(g: &Graph, u: &DMatrix<f64>, x: &DMatrix<f64>) -> Result<()> {
    if u.nrows() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            got: u.nrows(),
        });
    }
    if x.nrows() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            got: x.nrows(),
        });
    }
    if u.ncols() < 2 || x.ncols() + 1 != u.ncols() {
        return Err(Error::DimensionMismatch {
            expected: u.ncols().saturating_sub(1),
            got: x.ncols(),
        });
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("objective argument".into()));
    }
    Ok(())
}

/// `sum_k alpha (DV(u_k) - DV(x_k))^2 + beta (DV(u_{k+1}) - DV(x_k))^2`.
pub fn phi_objective(g: &Graph, u: &DMatrix<f64>, x: &DMatrix<f64>, alpha: f64, beta: f64) -> Result<f64> {
    check_block(g, u, x)?;
    Ok(IntermediateObjective::new(g, u, alpha, beta)?.value(x))
}

/// Column-wise gradient of [`phi_objective`].
pub fn phi_gradient(g: &Graph, u: &DMatrix<f64>, x: &DMatrix<f64>, alpha: f64, beta: f64) -> Result<DMatrix<f64>> {
    check_block(g, u, x)?;
    Ok(IntermediateObjective::new(g, u, alpha, beta)?.gradient(x))
}

/// Objective pulling each `DV(x_k)` towards the weighted frequencies of the
/// neighbouring basis vectors `u_k`, `u_{k+1}`.
pub struct IntermediateObjective<'g> {
    graph: &'g Graph,
    lower: Vec<f64>,
    upper: Vec<f64>,
    alpha: f64,
    beta: f64,
}

impl<'g> IntermediateObjective<'g> {
    pub fn new(graph: &'g Graph, u: &DMatrix<f64>, alpha: f64, beta: f64) -> Result<Self> {
        if u.nrows() != graph.n() {
            return Err(Error::DimensionMismatch {
                expected: graph.n(),
                got: u.nrows(),
            });
        }
        if u.ncols() < 2 {
            return Err(invalid("the basis block needs at least two columns"));
        }
        if !(alpha.is_finite() && beta.is_finite()) {
            return Err(invalid("weights must be finite"));
        }
        let dv: Vec<f64> = u.column_iter().map(|c| dv_unchecked(graph, c.as_slice())).collect();
        Ok(Self {
            graph,
            lower: dv[..dv.len() - 1].to_vec(),
            upper: dv[1..].to_vec(),
            alpha,
            beta,
        })
    }

    /// Target `alpha DV(u_k) + beta DV(u_{k+1})` of column `k`.
    pub fn target(&self, k: usize) -> f64 {
        self.alpha * self.lower[k] + self.beta * self.upper[k]
    }
}

impl StiefelObjective for IntermediateObjective<'_> {
    fn value(&self, x: &DMatrix<f64>) -> f64 {
        x.column_iter()
            .enumerate()
            .map(|(k, c)| {
                let d = dv_unchecked(self.graph, c.as_slice());
                self.alpha * (self.lower[k] - d).powi(2) + self.beta * (self.upper[k] - d).powi(2)
            })
            .sum()
    }

    fn gradient(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(x.nrows(), x.ncols());
        for k in 0..x.ncols() {
            let c = x.column(k);
            let d = dv_unchecked(self.graph, c.as_slice());
            let factor = -2.0 * (self.alpha * (self.lower[k] - d) + self.beta * (self.upper[k] - d));
            let mut col = out.column_mut(k);
            dv_gradient_into(self.graph, c.as_slice(), col.as_mut_slice());
            col *= factor;
        }
        out
    }
}

/// Spectral dispersion of the sequence `first, DV(x_1), ..., DV(x_K), last`.
pub struct DispersionObjective<'g> {
    graph: &'g Graph,
    first: f64,
    last: f64,
}

impl<'g> DispersionObjective<'g> {
    pub fn new(graph: &'g Graph, first: f64, last: f64) -> Self {
        Self { graph, first, last }
    }

    fn sequence(&self, x: &DMatrix<f64>) -> Vec<f64> {
        let mut s = Vec::with_capacity(x.ncols() + 2);
        s.push(self.first);
        s.extend(x.column_iter().map(|c| dv_unchecked(self.graph, c.as_slice())));
        s.push(self.last);
        s
    }
}

impl StiefelObjective for DispersionObjective<'_> {
    fn value(&self, x: &DMatrix<f64>) -> f64 {
        self.sequence(x).windows(2).map(|w| (w[1] - w[0]).powi(2)).sum()
    }

    fn gradient(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        let s = self.sequence(x);
        let mut out = DMatrix::zeros(x.nrows(), x.ncols());
        for k in 0..x.ncols() {
            let d = s[k + 1];
            let factor = 2.0 * (d - s[k]) - 2.0 * (s[k + 2] - d);
            let mut col = out.column_mut(k);
            dv_gradient_into(self.graph, x.column(k).as_slice(), col.as_mut_slice());
            col *= factor;
        }
        out
    }
}

/// Minimize an objective over `n x K` matrices with orthonormal columns,
/// optionally also orthogonal to a fixed set of vectors.
pub struct StiefelProblem<'a> {
    pub objective: &'a dyn StiefelObjective,
    pub n: usize,
    pub k: usize,
    pub fixed: Vec<DVector<f64>>,
}

impl<'a> StiefelProblem<'a> {
    /// Plain problem; requires `n >= 2K`.
    pub fn new(objective: &'a dyn StiefelObjective, n: usize, k: usize) -> Result<Self> {
        if k == 0 || n < 2 * k {
            return Err(invalid(format!("need n >= 2K with K >= 1, got n = {n}, K = {k}")));
        }
        Ok(Self {
            objective,
            n,
            k,
            fixed: Vec::new(),
        })
    }

    /// Problem whose columns must also be orthogonal to `fixed`. The solver
    /// works in coordinates of the orthogonal complement, which only needs
    /// `K <= n - fixed.len()`.
    pub fn with_fixed(
        objective: &'a dyn StiefelObjective,
        n: usize,
        k: usize,
        fixed: Vec<DVector<f64>>,
    ) -> Result<Self> {
        if k == 0 || k + fixed.len() > n {
            return Err(invalid(format!(
                "K = {k} columns do not fit beside {} fixed vectors in dimension {n}",
                fixed.len()
            )));
        }
        if fixed.iter().any(|f| f.len() != n) {
            return Err(invalid("fixed vectors have the wrong length"));
        }
        Ok(Self { objective, n, k, fixed })
    }
}

#[derive(Debug, Clone)]
pub struct SolverConfig {
    /// Penalty weight of `||X^T X - I||_F^2`.
    pub mu: f64,
    /// Proximal parameter; estimated from the gradient when `None`.
    pub eta: Option<f64>,
    pub max_iter: usize,
    /// Stopping tolerance on `||X^{i+1} - X^i||_F`.
    pub tol: f64,
    /// Required `||X^T X - I||_F` at termination.
    pub feas_tol: f64,
    pub trace: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            mu: 10.0,
            eta: None,
            max_iter: 50_000,
            tol: 1e-10,
            feas_tol: 1e-8,
            trace: false,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.mu > 0.0 && self.mu.is_finite()) {
            return Err(invalid("mu must be positive"));
        }
        if let Some(eta) = self.eta {
            if !(eta > 0.0 && eta.is_finite()) {
                return Err(invalid("eta must be positive"));
            }
        }
        if !(self.tol > 0.0) || !(self.feas_tol > 0.0) {
            return Err(invalid("tolerances must be positive"));
        }
        if self.max_iter == 0 {
            return Err(invalid("max_iter must be positive"));
        }
        Ok(())
    }
}

/// One row of a solver trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub iteration: usize,
    pub value: f64,
    pub feasibility: f64,
}

#[derive(Debug, Clone)]
pub struct PcalOutcome {
    pub x: DMatrix<f64>,
    pub iterations: usize,
    pub objective: f64,
    /// `||X^T X - I||_F` of the returned iterate.
    pub feasibility: f64,
    pub converged: bool,
    /// Whether feasibility was non-increasing over the last quarter of the run.
    pub tail_monotone: bool,
    pub eta: f64,
    /// Penalty weight at termination.
    pub mu: f64,
    pub trace: Vec<TraceRow>,
}

fn feasibility(x: &DMatrix<f64>) -> f64 {
    let mut g = x.tr_mul(x);
    for i in 0..g.nrows() {
        g[(i, i)] -= 1.0;
    }
    g.norm()
}

fn complement_basis(n: usize, fixed: &[DVector<f64>]) -> DMatrix<f64> {
    let mut kept: Vec<DVector<f64>> = Vec::with_capacity(n);
    let push = |mut v: DVector<f64>, kept: &mut Vec<DVector<f64>>| {
        for _ in 0..2 {
            for u in kept.iter() {
                let p = u.dot(&v);
                v.axpy(-p, u, 1.0);
            }
        }
        let norm = v.norm();
        if norm > 0.5 {
            v.unscale_mut(norm);
            kept.push(v);
            true
        } else {
            false
        }
    };
    for f in fixed {
        push(f.clone(), &mut kept);
    }
    let nf = kept.len();
    for i in 0..n {
        if kept.len() == n {
            break;
        }
        push(DVector::from_fn(n, |r, _| if r == i { 1.0 } else { 0.0 }), &mut kept);
    }
    DMatrix::from_columns(&kept[nf..])
}

struct Reduced<'a> {
    inner: &'a dyn StiefelObjective,
    q: DMatrix<f64>,
}

impl StiefelObjective for Reduced<'_> {
    fn value(&self, y: &DMatrix<f64>) -> f64 {
        self.inner.value(&(&self.q * y))
    }

    fn gradient(&self, y: &DMatrix<f64>) -> DMatrix<f64> {
        self.q.tr_mul(&self.inner.gradient(&(&self.q * y)))
    }
}

/// `grad_X L_mu(X, Lambda) = G - X Lambda + mu X (X^T X - I)`.
fn lagrangian_gradient(g: &DMatrix<f64>, x: &DMatrix<f64>, lambda: &DMatrix<f64>, mu: f64) -> DMatrix<f64> {
    let mut e = x.tr_mul(x);
    for i in 0..e.nrows() {
        e[(i, i)] -= 1.0;
    }
    g - x * lambda + x * e * mu
}

fn sym(a: &DMatrix<f64>) -> DMatrix<f64> {
    (a + a.transpose()) * 0.5
}

/// Power-iteration estimate of the Lipschitz constant of the augmented
/// Lagrangian gradient at `x`, with the multiplier frozen.
fn lipschitz_probe(obj: &dyn StiefelObjective, x: &DMatrix<f64>, mu: f64) -> f64 {
    let g0 = obj.gradient(x);
    let lambda = sym(&g0.tr_mul(x));
    let grad = |y: &DMatrix<f64>| lagrangian_gradient(&obj.gradient(y), y, &lambda, mu);
    let mut r = rng(0x9e37_79b9);
    let mut v = DMatrix::from_fn(x.nrows(), x.ncols(), |_, _| StandardNormal.sample(&mut r));
    v.unscale_mut(v.norm());
    let h = 1e-6;
    let mut est: f64 = 0.0;
    for _ in 0..20 {
        let hv = (grad(&(x + &v * h)) - grad(&(x - &v * h))) / (2.0 * h);
        let norm = hv.norm();
        if !norm.is_finite() || norm == 0.0 {
            break;
        }
        est = norm;
        v = hv / norm;
    }
    est
}

const PENALTY_WINDOW: usize = 200;
const MAX_PENALTY: f64 = 1e8;

/// Column-wise proximal linearized augmented-Lagrangian iteration.
///
/// Each iteration computes the multiplier `Sym(G^T X)` with the diagonal
/// correction, then moves every column along the Lagrangian gradient and
/// renormalizes it. The penalty weight doubles whenever feasibility fails to
/// halve over a window of iterations. Returns the last iterate with
/// convergence diagnostics.
pub fn pcal_solve(p: &StiefelProblem, cfg: &SolverConfig, x0: &DMatrix<f64>) -> Result<PcalOutcome> {
    cfg.validate()?;
    if x0.nrows() != p.n || x0.ncols() != p.k {
        return Err(Error::DimensionMismatch {
            expected: p.n * p.k,
            got: x0.nrows() * x0.ncols(),
        });
    }
    if x0.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("initial iterate".into()));
    }
    let q = (!p.fixed.is_empty()).then(|| complement_basis(p.n, &p.fixed));
    let reduced = q.as_ref().map(|q| Reduced {
        inner: p.objective,
        q: q.clone(),
    });
    let obj: &dyn StiefelObjective = match &reduced {
        Some(r) => r,
        None => p.objective,
    };
    let mut x = match &q {
        Some(q) => q.tr_mul(x0),
        None => x0.clone(),
    };
    for mut c in x.column_iter_mut() {
        let norm = c.norm();
        if norm == 0.0 {
            return Err(invalid("initial columns must be non-zero"));
        }
        c.unscale_mut(norm);
    }

    let mut mu = cfg.mu;
    let mut eta = cfg.eta.unwrap_or_else(|| lipschitz_probe(obj, &x, mu).max(1.0));
    let mut window_feas = feasibility(&x);
    let mut trace = Vec::new();
    let mut feas_history = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    let k = x.ncols();
    for it in 1..=cfg.max_iter {
        let g = obj.gradient(&x);
        if g.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("gradient at iteration {it}")));
        }
        let lambda_hat = sym(&g.tr_mul(&x));
        let grad_hat = lagrangian_gradient(&g, &x, &lambda_hat, mu);
        let mut h = grad_hat;
        for j in 0..k {
            let c = x.column(j).dot(&h.column(j));
            let xj = x.column(j).clone_owned();
            h.column_mut(j).axpy(-c, &xj, 1.0);
        }
        let mut next = &x - &h / eta;
        for j in 0..k {
            let norm = next.column(j).norm();
            if norm > 0.0 && norm.is_finite() {
                next.column_mut(j).unscale_mut(norm);
            } else {
                let keep = x.column(j).clone_owned();
                next.set_column(j, &keep);
            }
        }
        let change = (&next - &x).norm();
        x = next;
        iterations = it;
        let feas = feasibility(&x);
        if !feas.is_finite() || !change.is_finite() {
            return Err(Error::NonFinite(format!("iterate at iteration {it}")));
        }
        feas_history.push(feas);
        if it % PENALTY_WINDOW == 0 {
            // a penalty too weak for the objective leaves the iterate stuck
            // at an infeasible stationary point
            if feas > cfg.feas_tol && feas > 0.5 * window_feas && mu < MAX_PENALTY {
                mu *= 2.0;
                if cfg.eta.is_none() {
                    eta = eta.max(lipschitz_probe(obj, &x, mu));
                } else {
                    eta = eta.max(2.0 * mu);
                }
            }
            window_feas = feas;
        }
        if cfg.trace {
            trace.push(TraceRow {
                iteration: it,
                value: obj.value(&x),
                feasibility: feas,
            });
        }
        if change <= cfg.tol && feas <= cfg.feas_tol {
            converged = true;
            break;
        }
    }
    let tail_start = feas_history.len() - feas_history.len() / 4;
    let tail_monotone = feas_history[tail_start.saturating_sub(1)..]
        .windows(2)
        .all(|w| w[1] <= w[0] + 1e-12);
    let objective = obj.value(&x);
    let feas = feasibility(&x);
    let x = match &q {
        Some(q) => q * x,
        None => x,
    };
    Ok(PcalOutcome {
        x,
        iterations,
        objective,
        feasibility: feas,
        converged,
        tail_monotone,
        eta,
        mu,
        trace,
    })
}
