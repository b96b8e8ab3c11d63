//! Seeded benchmark families with constructed optima.
//!
//! Every generator here builds its instance around a chosen minimizer so that
//! the reference pair `(x*, f*)` is exact by construction rather than solved
//! for numerically:
//!
//! * quadratics pick `x*` first and set `b = A x*`, so the gradient vanishes
//!   there (this also works on the simplex when `x*` is interior);
//! * piecewise-linear-plus-quadratic instances use symmetric slope pairs
//!   `(+a_j, -a_j)` with equal offsets, making the kink point the minimizer;
//! * Holder residual objectives use consistent right-hand sides `b = A x*`,
//!   so the objective value and gradient vanish at `x*`.

use crate::geometry::{dot, FeasibleSet, NormKind, ProxGeometry, PsiKind};
use crate::problems::{
    estimate_holder_constant, make_composite_adapter, make_mixed_adapter, make_smooth_adapter,
    NonSmoothProblem, StructuredProblem, ValueFn, VectorFn,
};
use crate::rng::SplitMix64;
use std::sync::Arc;

/// Minimal row-major dense matrix.
#[derive(Clone, Debug)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.rows).map(|i| dot(self.row(i), x)).collect()
    }

    /// `A^T y` for the same storage.
    pub fn t_matvec(&self, y: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.cols];
        for i in 0..self.rows {
            let r = self.row(i);
            for j in 0..self.cols {
                out[j] += r[j] * y[i];
            }
        }
        out
    }
}

/// Random orthogonal matrix via modified Gram-Schmidt on a Gaussian draw.
fn random_orthogonal(rng: &mut SplitMix64, n: usize) -> Matrix {
    let mut q = Matrix::zeros(n, n);
    for i in 0..n {
        let mut v = rng.normal_vec(n);
        for j in 0..i {
            let proj = dot(q.row(j), &v);
            for t in 0..n {
                v[t] -= proj * q.get(j, t);
            }
        }
        let norm = NormKind::L2.eval(&v);
        // a degenerate draw is vanishingly unlikely; resample deterministically
        if norm < 1e-12 {
            return random_orthogonal(rng, n);
        }
        for t in 0..n {
            q.set(i, t, v[t] / norm);
        }
    }
    q
}

// ---------------------------------------------------------------------------
// Quadratics
// ---------------------------------------------------------------------------

/// `f(x) = 0.5 x^T A x - b^T x`, with spectrum `[sigma, l]` and gradient zero
/// at `x_star`.
#[derive(Clone, Debug)]
pub struct QuadraticInstance {
    pub a: Matrix,
    pub b: Vec<f64>,
    pub l: f64,
    pub sigma: f64,
    pub x_star: Vec<f64>,
    pub f_star: f64,
}

impl QuadraticInstance {
    pub fn dim(&self) -> usize {
        self.b.len()
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        0.5 * dot(&self.a.matvec(x), x) - dot(&self.b, x)
    }

    pub fn grad(&self, x: &[f64]) -> Vec<f64> {
        let mut g = self.a.matvec(x);
        for i in 0..g.len() {
            g[i] -= self.b[i];
        }
        g
    }

    /// As a structured problem with declared convexity `sigma_declared`
    /// (any value in `[0, sigma]` is valid).
    pub fn smooth_problem(
        &self,
        geom: &ProxGeometry,
        sigma_declared: f64,
    ) -> crate::error::Result<StructuredProblem> {
        let me = Arc::new(self.clone());
        let mv = me.clone();
        let f: ValueFn = Arc::new(move |x: &[f64]| mv.value(x));
        let mg = me;
        let g: VectorFn = Arc::new(move |x: &[f64]| mg.grad(x));
        make_smooth_adapter(geom, f, g, self.l, sigma_declared)
    }

    /// As a non-smooth problem through its gradient (used by reduction tests).
    pub fn nonsmooth_problem(&self, sigma_declared: f64) -> NonSmoothProblem {
        let me = Arc::new(self.clone());
        let mv = me.clone();
        let mg = me;
        NonSmoothProblem {
            objective: Arc::new(move |x: &[f64]| mv.value(x)),
            subgradient: Arc::new(move |x: &[f64]| mg.grad(x)),
            sigma_f: sigma_declared,
            subgrad_bound: None,
        }
    }
}

/// Build a quadratic with eigenvalues log-spaced in `[sigma, l]` (`sigma = 0`
/// pins the smallest eigenvalue to zero) and minimizer exactly `x_star`.
pub fn gen_quadratic(
    rng: &mut SplitMix64,
    dim: usize,
    l: f64,
    sigma: f64,
    x_star: Vec<f64>,
) -> QuadraticInstance {
    assert!(dim >= 1 && l > 0.0 && sigma >= 0.0 && sigma <= l);
    assert_eq!(x_star.len(), dim);
    let mut eigs = Vec::with_capacity(dim);
    if dim == 1 {
        eigs.push(l);
    } else {
        let lo = if sigma > 0.0 { sigma } else { l * 1e-2 };
        for i in 0..dim {
            let t = i as f64 / (dim - 1) as f64;
            eigs.push(lo * (l / lo).powf(t));
        }
        eigs[0] = sigma;
        eigs[dim - 1] = l;
    }
    let q = random_orthogonal(rng, dim);
    // A = Q^T diag(eigs) Q
    let mut a = Matrix::zeros(dim, dim);
    for i in 0..dim {
        for j in i..dim {
            let mut v = 0.0;
            for t in 0..dim {
                v += q.get(t, i) * eigs[t] * q.get(t, j);
            }
            a.set(i, j, v);
            a.set(j, i, v);
        }
    }
    let b = a.matvec(&x_star);
    let mut inst = QuadraticInstance {
        a,
        b,
        l,
        sigma,
        x_star,
        f_star: 0.0,
    };
    inst.f_star = inst.value(&inst.x_star);
    inst
}

// ---------------------------------------------------------------------------
// Piecewise-linear plus strongly convex quadratic
// ---------------------------------------------------------------------------

/// `f(x) = max_j <a_j, x - q> + sigma/2 ||x - q||_2^2` with symmetric pieces
/// `{+a_j, -a_j}`, so `x* = q` and `f* = 0`.
#[derive(Clone, Debug)]
pub struct PwlInstance {
    pub slopes: Matrix,
    pub sigma: f64,
    pub vertex: Vec<f64>,
    pub x_star: Vec<f64>,
    pub f_star: f64,
}

impl PwlInstance {
    pub fn dim(&self) -> usize {
        self.vertex.len()
    }

    fn active_piece(&self, shifted: &[f64]) -> (usize, f64) {
        let mut best = (0usize, f64::NEG_INFINITY);
        for j in 0..self.slopes.rows {
            let v = dot(self.slopes.row(j), shifted);
            if v > best.1 {
                best = (j, v);
            }
        }
        best
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        let shifted: Vec<f64> = x.iter().zip(&self.vertex).map(|(a, b)| a - b).collect();
        let (_, top) = self.active_piece(&shifted);
        top + 0.5 * self.sigma * dot(&shifted, &shifted)
    }

    /// Lowest-index active piece plus the quadratic part.
    pub fn subgrad(&self, x: &[f64]) -> Vec<f64> {
        let shifted: Vec<f64> = x.iter().zip(&self.vertex).map(|(a, b)| a - b).collect();
        let (j, _) = self.active_piece(&shifted);
        let mut g = self.slopes.row(j).to_vec();
        for i in 0..g.len() {
            g[i] += self.sigma * shifted[i];
        }
        g
    }

    /// Subgradient-norm bound valid on `||x - q||_2 <= radius`.
    pub fn subgrad_bound(&self, radius: f64) -> f64 {
        let mut m: f64 = 0.0;
        for j in 0..self.slopes.rows {
            m = m.max(NormKind::L2.eval(self.slopes.row(j)));
        }
        m + self.sigma * radius
    }

    pub fn nonsmooth_problem(&self, bound: Option<f64>) -> NonSmoothProblem {
        let me = Arc::new(self.clone());
        let mv = me.clone();
        let mg = me;
        let sigma = self.sigma;
        NonSmoothProblem {
            objective: Arc::new(move |x: &[f64]| mv.value(x)),
            subgradient: Arc::new(move |x: &[f64]| mg.subgrad(x)),
            sigma_f: sigma,
            subgrad_bound: bound,
        }
    }
}

pub fn gen_pwl_strong(
    rng: &mut SplitMix64,
    dim: usize,
    pieces: usize,
    sigma: f64,
    vertex: Vec<f64>,
) -> PwlInstance {
    assert!(pieces >= 1 && sigma > 0.0);
    assert_eq!(vertex.len(), dim);
    let mut slopes = Matrix::zeros(2 * pieces, dim);
    for j in 0..pieces {
        let a = rng.normal_vec(dim);
        for t in 0..dim {
            slopes.set(2 * j, t, a[t]);
            slopes.set(2 * j + 1, t, -a[t]);
        }
    }
    PwlInstance {
        slopes,
        sigma,
        x_star: vertex.clone(),
        vertex,
        f_star: 0.0,
    }
}

// ---------------------------------------------------------------------------
// Holder residual objectives
// ---------------------------------------------------------------------------

/// `f(x) = 1/rho sum_i |<a_i, x> - b_i|^rho + mu/2 ||x - q||_2^2` with
/// `b = A q`, so `x* = q`, `f* = 0`. The gradient of the residual part is
/// Holder-continuous with exponent `rho - 1`.
#[derive(Clone, Debug)]
pub struct HolderInstance {
    pub a: Matrix,
    pub b: Vec<f64>,
    pub rho: f64,
    pub mu: f64,
    pub anchor: Vec<f64>,
    pub x_star: Vec<f64>,
    pub f_star: f64,
    /// Sampled-and-inflated Holder constant of the residual gradient.
    pub m_est: f64,
}

impl HolderInstance {
    pub fn dim(&self) -> usize {
        self.anchor.len()
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        let res = self.a.matvec(x);
        let mut v = 0.0;
        for (ri, bi) in res.iter().zip(&self.b) {
            v += (ri - bi).abs().powf(self.rho) / self.rho;
        }
        if self.mu > 0.0 {
            let shifted: Vec<f64> = x.iter().zip(&self.anchor).map(|(a, b)| a - b).collect();
            v += 0.5 * self.mu * dot(&shifted, &shifted);
        }
        v
    }

    pub fn grad(&self, x: &[f64]) -> Vec<f64> {
        let res = self.a.matvec(x);
        let coef: Vec<f64> = res
            .iter()
            .zip(&self.b)
            .map(|(ri, bi)| {
                let r = ri - bi;
                r.abs().powf(self.rho - 1.0) * r.signum()
            })
            .collect();
        let mut g = self.a.t_matvec(&coef);
        if self.mu > 0.0 {
            for i in 0..g.len() {
                g[i] += self.mu * (x[i] - self.anchor[i]);
            }
        }
        g
    }

    /// As a structured problem with slack `m/rho ||y-x||^rho` and `L = mu`.
    pub fn structured_problem(
        &self,
        sigma_declared: f64,
    ) -> crate::error::Result<StructuredProblem> {
        let me = Arc::new(self.clone());
        let mv = me.clone();
        let f: ValueFn = Arc::new(move |x: &[f64]| mv.value(x));
        let mg = me;
        let g: VectorFn = Arc::new(move |x: &[f64]| mg.grad(x));
        make_mixed_adapter(f, g, self.mu, self.m_est, self.rho, sigma_declared)
    }
}

/// Build a Holder instance and estimate its constant over `sample_set`.
pub fn gen_holder(
    rng: &mut SplitMix64,
    dim: usize,
    terms: usize,
    rho: f64,
    mu: f64,
    anchor: Vec<f64>,
    sample_set: &FeasibleSet,
    pairs: usize,
) -> HolderInstance {
    assert!((1.0..2.0).contains(&rho));
    assert_eq!(anchor.len(), dim);
    let mut a = Matrix::zeros(terms, dim);
    for i in 0..terms {
        let row = rng.normal_vec(dim);
        // keep rows O(1) so the Holder constant stays well scaled
        let norm = NormKind::L2.eval(&row).max(1e-12);
        for t in 0..dim {
            a.set(i, t, row[t] / norm);
        }
    }
    let b = a.matvec(&anchor);
    let mut inst = HolderInstance {
        a,
        b,
        rho,
        mu: 0.0,
        x_star: anchor.clone(),
        anchor,
        f_star: 0.0,
        m_est: 0.0,
    };
    // estimate the constant of the residual part only (mu stays separate as L)
    let probe = Arc::new(inst.clone());
    let grad: VectorFn = Arc::new(move |x: &[f64]| probe.grad(x));
    inst.m_est = estimate_holder_constant(&grad, sample_set, NormKind::L2, rho, pairs, 1.5, rng);
    inst.mu = mu;
    inst
}

// ---------------------------------------------------------------------------
// Lasso (composite) instances
// ---------------------------------------------------------------------------

/// `f(x) = 0.5 ||A x - b||_2^2 + tau ||x||_1`.
#[derive(Clone, Debug)]
pub struct LassoInstance {
    pub a: Matrix,
    pub b: Vec<f64>,
    pub tau: f64,
    /// Largest eigenvalue of `A^T A` (power-iteration estimate, inflated).
    pub l: f64,
}

impl LassoInstance {
    pub fn dim(&self) -> usize {
        self.a.cols
    }

    pub fn smooth_part(&self, x: &[f64]) -> f64 {
        let r = self.residual(x);
        0.5 * dot(&r, &r)
    }

    fn residual(&self, x: &[f64]) -> Vec<f64> {
        let mut r = self.a.matvec(x);
        for i in 0..r.len() {
            r[i] -= self.b[i];
        }
        r
    }

    pub fn smooth_grad(&self, x: &[f64]) -> Vec<f64> {
        self.a.t_matvec(&self.residual(x))
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        self.smooth_part(x) + self.tau * NormKind::L1.eval(x)
    }

    pub fn composite_problem(
        &self,
        geom: &ProxGeometry,
    ) -> crate::error::Result<StructuredProblem> {
        let me = Arc::new(self.clone());
        let mv = me.clone();
        let f0: ValueFn = Arc::new(move |x: &[f64]| mv.smooth_part(x));
        let mg = me;
        let g0: VectorFn = Arc::new(move |x: &[f64]| mg.smooth_grad(x));
        make_composite_adapter(
            geom,
            f0,
            g0,
            self.l,
            0.0,
            PsiKind::L1 { weight: self.tau },
            0.0,
        )
    }
}

pub fn gen_lasso(rng: &mut SplitMix64, rows: usize, dim: usize, tau: f64) -> LassoInstance {
    let mut a = Matrix::zeros(rows, dim);
    for i in 0..rows {
        for j in 0..dim {
            a.set(i, j, rng.normal() / (rows as f64).sqrt());
        }
    }
    // sparse ground signal plus noise for a realistic right-hand side
    let mut x0 = vec![0.0; dim];
    for j in 0..dim.div_ceil(4) {
        x0[(j * 7) % dim] = rng.range(-2.0, 2.0);
    }
    let mut b = a.matvec(&x0);
    for v in &mut b {
        *v += 0.05 * rng.normal();
    }
    // power iteration on A^T A, inflated 2% for a safe Lipschitz constant
    let mut v = rng.normal_vec(dim);
    let mut lam = 1.0;
    for _ in 0..300 {
        let w = a.t_matvec(&a.matvec(&v));
        lam = NormKind::L2.eval(&w);
        if lam < 1e-18 {
            break;
        }
        v = w.into_iter().map(|t| t / lam).collect();
    }
    LassoInstance {
        a,
        b,
        tau,
        l: lam * 1.02,
    }
}
