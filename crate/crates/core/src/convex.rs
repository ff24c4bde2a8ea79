//! Primal-dual splitting for `min ||a||_1 s.t. ||A a - y||_2 <= eps`, with the
//! proximal operators it needs. Works for real and complex data.

use nalgebra::{ComplexField, DMatrix, DVector};

use crate::error::{invalid, Error, Result};
use crate::linalg::spectral_norm_estimate;
use crate::manifold::TraceRow;

/// Entrywise magnitude shrinkage `max(|v_i| - gamma, 0)` keeping sign or phase.
pub fn soft_threshold<T: ComplexField<RealField = f64> + Copy>(v: &DVector<T>, gamma: f64) -> DVector<T> {
    v.map(|z| {
        let m = z.modulus();
        if m <= gamma {
            T::zero()
        } else {
            z.scale(1.0 - gamma / m)
        }
    })
}

/// Euclidean projection of `v` onto the ball of radius `eps` centred at `y`.
pub fn project_l2_ball<T: ComplexField<RealField = f64> + Copy>(
    v: &DVector<T>,
    y: &DVector<T>,
    eps: f64,
) -> DVector<T> {
    let d = v - y;
    let r = d.norm();
    if r <= eps {
        v.clone()
    } else {
        y + d.scale(eps / r)
    }
}

/// Proximal map of `gamma g*` from the proximal map of `g` through the Moreau
/// identity. `prox(v, t)` must return `prox_{t g}(v)`.
pub fn conjugate_prox<T, F>(prox: F, x: &DVector<T>, gamma: f64) -> DVector<T>
where
    T: ComplexField<RealField = f64> + Copy,
    F: Fn(&DVector<T>, f64) -> DVector<T>,
{
    x - prox(&x.unscale(gamma), 1.0 / gamma).scale(gamma)
}

pub fn l1_norm<T: ComplexField<RealField = f64> + Copy>(v: &DVector<T>) -> f64 {
    v.iter().map(|z| z.modulus()).sum()
}

/// Basis-pursuit(-denoising) instance `min ||a||_1 s.t. ||A a - y||_2 <= epsilon`.
#[derive(Debug, Clone)]
pub struct SplitProblem<T: ComplexField<RealField = f64> + Copy> {
    pub a: DMatrix<T>,
    pub y: DVector<T>,
    pub epsilon: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub tol: f64,
    pub max_iter: usize,
    pub trace: bool,
}

pub const DEFAULT_GAMMA1: f64 = 0.01;
pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_ITER: usize = 200_000;

impl<T: ComplexField<RealField = f64> + Copy> SplitProblem<T> {
    /// Problem with the default steps `gamma1 = 0.01`, `gamma2 = 1 / (12 gamma1)`.
    pub fn new(a: DMatrix<T>, y: DVector<T>, epsilon: f64) -> Self {
        Self {
            a,
            y,
            epsilon,
            gamma1: DEFAULT_GAMMA1,
            gamma2: 1.0 / (12.0 * DEFAULT_GAMMA1),
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
            trace: false,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.a.nrows() != self.y.len() {
            return Err(Error::DimensionMismatch {
                expected: self.a.nrows(),
                got: self.y.len(),
            });
        }
        if !(self.gamma1 > 0.0 && self.gamma2 > 0.0 && self.gamma1.is_finite() && self.gamma2.is_finite()) {
            return Err(invalid("step sizes must be positive"));
        }
        if !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            return Err(invalid("ball radius must be non-negative"));
        }
        if !(self.tol > 0.0) || self.max_iter == 0 {
            return Err(invalid("tolerance and iteration cap must be positive"));
        }
        if self.a.iter().chain(self.y.iter()).any(|z| !z.is_finite()) {
            return Err(Error::NonFinite("problem data".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct PdsResult<T: ComplexField<RealField = f64> + Copy> {
    pub coeffs: DVector<T>,
    pub dual: DVector<T>,
    pub iterations: usize,
    pub converged: bool,
    /// `max(0, ||A a - y|| - epsilon)`.
    pub feasibility_residual: f64,
    pub objective: f64,
    /// Dual step actually used after the step-size safeguard.
    pub gamma2: f64,
    pub trace: Vec<TraceRow>,
}

const DIVERGENCE_NORM: f64 = 1e12;

/// Primal-dual splitting from zero initial points. If `gamma1 gamma2 ||A||^2 > 1`
/// the dual step is reduced to `0.99 / (gamma1 ||A||^2)`. Stops once both the
/// primal change and the scaled dual change are at most `tol`.
pub fn pds_solve<T: ComplexField<RealField = f64> + Copy>(p: &SplitProblem<T>) -> Result<PdsResult<T>> {
    p.validate()?;
    let (m, k) = (p.a.nrows(), p.a.ncols());
    let g1 = p.gamma1;
    let norm_a = spectral_norm_estimate(&p.a, 500) * 1.01;
    let mut g2 = p.gamma2;
    if g1 * g2 * norm_a * norm_a > 1.0 {
        g2 = 0.99 / (g1 * norm_a * norm_a);
    }
    let eps = p.epsilon;
    let mut x = DVector::<T>::zeros(k);
    let mut z = DVector::<T>::zeros(m);
    let mut aht = DVector::<T>::zeros(k);
    let mut ax = DVector::<T>::zeros(m);
    let mut trace = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    let one = T::one();
    for it in 1..=p.max_iter {
        // x+ = soft(x - g1 A^H z, g1)
        aht.gemv_ad(one, &p.a, &z, T::zero());
        let mut xn = x.clone();
        xn.axpy(T::from_real(-g1), &aht, one);
        let xn = soft_threshold(&xn, g1);
        // v = z + g2 A (2 x+ - x)
        let mut w = xn.scale(2.0);
        w -= &x;
        let mut v = z.clone();
        ax.gemv(one, &p.a, &w, T::zero());
        v.axpy(T::from_real(g2), &ax, one);
        // z+ = v - g2 P_B(v / g2)
        let proj = project_l2_ball(&v.unscale(g2), &p.y, eps);
        v.axpy(T::from_real(-g2), &proj, one);
        let dual_change = (&v - &z).norm() / g2;
        z = v;
        let change = (&xn - &x).norm();
        x = xn;
        iterations = it;
        if !change.is_finite() || x.norm() > DIVERGENCE_NORM || z.norm() > DIVERGENCE_NORM {
            return Err(Error::Divergence(format!(
                "iterate norm exceeded {DIVERGENCE_NORM:e} at iteration {it}"
            )));
        }
        if p.trace {
            ax.gemv(one, &p.a, &x, T::zero());
            trace.push(TraceRow {
                iteration: it,
                value: change,
                feasibility: ((&ax - &p.y).norm() - eps).max(0.0),
            });
        }
        // with zero initial points the primal iterate can stall at 0 while the
        // dual variable builds up, so the dual movement must settle as well
        if change <= p.tol && dual_change <= p.tol {
            converged = true;
            break;
        }
    }
    ax.gemv(one, &p.a, &x, T::zero());
    let feasibility_residual = ((&ax - &p.y).norm() - eps).max(0.0);
    Ok(PdsResult {
        objective: l1_norm(&x),
        coeffs: x,
        dual: z,
        iterations,
        converged,
        feasibility_residual,
        gamma2: g2,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::rng;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;
    use proptest::prelude::*;
    use rand::Rng;

    #[test]
    fn soft_threshold_examples() {
        let v = DVector::from_vec(vec![2.0, -0.5]);
        assert_eq!(soft_threshold(&v, 1.0).as_slice(), &[1.0, 0.0]);
        assert_eq!(soft_threshold(&v, 0.0), v);
        // 1-D scan of gamma |a| + |a - v|^2 / 2 over the ray of v's phase
        for theta in [0.3, 1.7, -2.4] {
            let z = Complex64::from_polar(2.0, theta);
            let out = soft_threshold(&DVector::from_vec(vec![z]), 1.0)[0];
            let best = (0..=40_000)
                .map(|i| Complex64::from_polar(i as f64 * 1e-4, theta))
                .min_by(|a, b| {
                    let f = |c: &Complex64| c.norm() + 0.5 * (c - z).norm_sqr();
                    f(a).total_cmp(&f(b))
                })
                .unwrap();
            assert!((out - best).norm() < 1e-4);
            assert_abs_diff_eq!((out - Complex64::from_polar(1.0, theta)).norm(), 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn ball_projection_examples() {
        let y = DVector::from_vec(vec![1.0, 2.0]);
        assert_eq!(project_l2_ball(&y, &y, 0.5), y);
        let v = DVector::from_vec(vec![4.0, -2.0]);
        assert_eq!(project_l2_ball(&v, &y, 0.0), y);
        let eps = (&v - &y).norm() / 2.0;
        let mid = project_l2_ball(&v, &y, eps);
        assert!((mid - (&y + (&v - &y) / 2.0)).norm() < 1e-14);
    }

    #[test]
    fn conjugate_prox_examples() {
        let y = DVector::from_vec(vec![0.3, -1.0, 2.0]);
        let x = DVector::from_vec(vec![1.0, 1.0, 1.0]);
        let gamma = 2.5;
        let p = conjugate_prox(|v: &DVector<f64>, _| project_l2_ball(v, &y, 0.0), &x, gamma);
        assert!((p - (&x - &y * gamma)).norm() < 1e-14);
        let zero = conjugate_prox(|v: &DVector<f64>, _| v.clone(), &x, gamma);
        assert!(zero.norm() < 1e-14);
    }

    #[test]
    fn orthonormal_square_gives_adjoint_transform() {
        let q = DMatrix::from_row_slice(2, 2, &[0.6, -0.8, 0.8, 0.6]);
        let y = DVector::from_vec(vec![0.7, -0.2]);
        let r = pds_solve(&SplitProblem::new(q.clone(), y.clone(), 0.0)).unwrap();
        assert!((r.coeffs - q.transpose() * y).norm() < 1e-8);
        let z = pds_solve(&SplitProblem::new(q, DVector::zeros(2), 0.0)).unwrap();
        assert!(z.coeffs.norm() < 1e-12);
    }

    #[test]
    fn step_safeguard_kicks_in() {
        let a = DMatrix::from_element(3, 3, 10.0);
        let r = pds_solve(&SplitProblem::new(a, DVector::from_element(3, 1.0), 0.5)).unwrap();
        assert!(r.gamma2 < 1.0 / 0.12);
        assert!(r.feasibility_residual < 1e-8);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn moreau_decomposition(seed in 0u64..1000, gamma in 0.1f64..5.0, eps in 0.0f64..2.0) {
            let mut r = rng(seed);
            let y = DVector::from_fn(5, |_, _| r.gen_range(-1.0..1.0));
            let x = DVector::from_fn(5, |_, _| r.gen_range(-3.0..3.0));
            let prox = |v: &DVector<f64>, _t: f64| project_l2_ball(v, &y, eps);
            // x = prox_{gamma g}(x) + gamma prox_{g*/gamma}(x/gamma)
            let lhs = prox(&x, gamma) + conjugate_prox(prox, &x.unscale(gamma), 1.0 / gamma) * gamma;
            prop_assert!((lhs - &x).norm() < 1e-10);
        }

        #[test]
        fn column_permutation_permutes_solution(seed in 0u64..1000) {
            let mut r = rng(seed);
            let a = DMatrix::from_fn(4, 6, |_, _| r.gen_range(-1.0..1.0));
            let y = DVector::from_fn(4, |_, _| r.gen_range(-1.0..1.0));
            let perm: Vec<usize> = vec![3, 0, 5, 1, 4, 2];
            let ap = DMatrix::from_fn(4, 6, |i, j| a[(i, perm[j])]);
            let s = pds_solve(&SplitProblem::new(a, y.clone(), 0.0)).unwrap();
            let sp = pds_solve(&SplitProblem::new(ap, y, 0.0)).unwrap();
            prop_assert!((s.objective - sp.objective).abs() < 1e-6 * (1.0 + s.objective));
        }
    }
}
