//! Normed-space and prox-function machinery.
//!
//! A [`ProxGeometry`] bundles a norm pair, a prox-function `d` with its
//! strong-convexity modulus `sigma_d`, and the prox-center `x0` where
//! `d(x0) = min_Q d = 0`. The induced Bregman distance
//! `xi(y, x) = d(x) - d(y) - <grad d(y), x - y>` is the generalized squared
//! distance every method in this crate regularizes with.
//!
//! Two geometries ship: the Euclidean one, `d(x) = 0.5*||x - x0||_2^2`, and
//! the entropy one on the probability simplex, `d(x) = sum_i x_i ln(x_i/x0_i)`
//! (with uniform center this is `ln n + sum_i x_i ln x_i`), which is 1-strongly
//! convex with respect to the l1 norm. Other prox-functions plug in by
//! extending [`ProxKind`] together with a matching arm in [`solve_canonical`].

use crate::error::{Error, Result};
use crate::rng::SplitMix64;

/// Absolute tolerance on constraint residuals for membership checks.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// Floor applied to simplex coordinates before taking logarithms.
pub const ENTROPY_CLAMP: f64 = 1e-300;

pub fn dot(s: &[f64], x: &[f64]) -> f64 {
    debug_assert_eq!(s.len(), x.len());
    s.iter().zip(x).map(|(a, b)| a * b).sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormKind {
    L1,
    L2,
    LInf,
}

impl NormKind {
    /// The dual norm: l1 <-> linf, l2 self-dual.
    pub fn dual(self) -> NormKind {
        match self {
            NormKind::L1 => NormKind::LInf,
            NormKind::L2 => NormKind::L2,
            NormKind::LInf => NormKind::L1,
        }
    }

    pub fn eval(self, x: &[f64]) -> f64 {
        match self {
            NormKind::L1 => x.iter().map(|v| v.abs()).sum(),
            NormKind::L2 => x.iter().map(|v| v * v).sum::<f64>().sqrt(),
            NormKind::LInf => x.iter().fold(0.0_f64, |m, v| m.max(v.abs())),
        }
    }

    /// Norm of a dual vector, i.e. the dual norm.
    pub fn dual_eval(self, s: &[f64]) -> f64 {
        self.dual().eval(s)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct NormSpec {
    pub kind: NormKind,
    pub dim: usize,
}

impl NormSpec {
    pub fn new(kind: NormKind, dim: usize) -> Self {
        Self { kind, dim }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProxKind {
    /// `d(x) = 0.5 * ||x - x0||_2^2`.
    EuclideanHalfSq,
    /// `d(x) = sum_i x_i ln(x_i / x0_i)` on the probability simplex.
    EntropySimplex,
}

/// A composite term `Psi` admitted by the subproblem solvers.
#[derive(Clone, Copy, Debug)]
pub enum PsiKind {
    Zero,
    /// `Psi(x) = weight * ||x||_1`.
    L1 { weight: f64 },
}

impl PsiKind {
    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            PsiKind::Zero => 0.0,
            PsiKind::L1 { weight } => weight * NormKind::L1.eval(x),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, PsiKind::Zero)
    }
}

#[derive(Clone, Debug)]
pub struct ProxGeometry {
    pub norm: NormSpec,
    pub kind: ProxKind,
    /// The prox-center: unique minimizer of `d` over the feasible set.
    pub center: Vec<f64>,
    /// Strong-convexity modulus of `d` with respect to `norm`.
    pub sigma_d: f64,
    /// Quadratic-growth constant `A` with `xi(y,x) <= A/2 ||x-y||^2`, when known.
    pub quad_growth: Option<f64>,
}

impl ProxGeometry {
    /// Euclidean geometry centered at `center`; `sigma_d = A = 1` for the l2 norm.
    pub fn euclidean(center: Vec<f64>) -> Self {
        let dim = center.len();
        Self {
            norm: NormSpec::new(NormKind::L2, dim),
            kind: ProxKind::EuclideanHalfSq,
            center,
            sigma_d: 1.0,
            quad_growth: Some(1.0),
        }
    }

    /// Entropy geometry on the `dim`-simplex with uniform center; `sigma_d = 1`
    /// for the l1 norm.
    pub fn entropy_simplex(dim: usize) -> Self {
        Self {
            norm: NormSpec::new(NormKind::L1, dim),
            kind: ProxKind::EntropySimplex,
            center: vec![1.0 / dim as f64; dim],
            sigma_d: 1.0,
            quad_growth: None,
        }
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    /// Prox-function value `d(x)`.
    pub fn prox_value(&self, x: &[f64]) -> Result<f64> {
        match self.kind {
            ProxKind::EuclideanHalfSq => {
                let mut acc = 0.0;
                for (xi, ci) in x.iter().zip(&self.center) {
                    let dlt = xi - ci;
                    acc += dlt * dlt;
                }
                Ok(0.5 * acc)
            }
            ProxKind::EntropySimplex => {
                let mut acc = 0.0;
                for (xi, ci) in x.iter().zip(&self.center) {
                    if *xi < -MEMBERSHIP_TOL {
                        return Err(Error::Domain(format!(
                            "entropy prox at negative coordinate {xi}"
                        )));
                    }
                    if *xi > 0.0 {
                        acc += xi * (xi.max(ENTROPY_CLAMP) / ci).ln();
                    }
                }
                Ok(acc)
            }
        }
    }

    /// Gradient of the prox-function at `y`.
    pub fn prox_grad(&self, y: &[f64]) -> Result<Vec<f64>> {
        match self.kind {
            ProxKind::EuclideanHalfSq => {
                Ok(y.iter().zip(&self.center).map(|(a, c)| a - c).collect())
            }
            ProxKind::EntropySimplex => {
                let mut g = Vec::with_capacity(y.len());
                for (yi, ci) in y.iter().zip(&self.center) {
                    if *yi < -MEMBERSHIP_TOL {
                        return Err(Error::Domain(format!(
                            "entropy gradient at negative coordinate {yi}"
                        )));
                    }
                    g.push((yi.max(ENTROPY_CLAMP) / ci).ln() + 1.0);
                }
                Ok(g)
            }
        }
    }

    /// Linearization of `d` at `y`, evaluated at `x`:
    /// `l_d(y; x) = d(y) + <grad d(y), x - y>`.
    pub fn linearize_d(&self, y: &[f64], x: &[f64]) -> Result<f64> {
        let dy = self.prox_value(y)?;
        let gy = self.prox_grad(y)?;
        let mut acc = dy;
        for i in 0..x.len() {
            acc += gy[i] * (x[i] - y[i]);
        }
        Ok(acc)
    }

    /// Bregman distance `xi(y, x) = d(x) - l_d(y; x)`, non-negative on the domain.
    pub fn bregman(&self, y: &[f64], x: &[f64]) -> Result<f64> {
        Ok(self.prox_value(x)? - self.linearize_d(y, x)?)
    }
}

#[derive(Clone, Debug)]
pub enum FeasibleSet {
    Unconstrained { dim: usize },
    Box { lower: Vec<f64>, upper: Vec<f64> },
    Simplex { dim: usize },
    Ball { center: Vec<f64>, radius: f64 },
}

impl FeasibleSet {
    pub fn symmetric_box(dim: usize, half_width: f64) -> Self {
        FeasibleSet::Box {
            lower: vec![-half_width; dim],
            upper: vec![half_width; dim],
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            FeasibleSet::Unconstrained { dim } | FeasibleSet::Simplex { dim } => *dim,
            FeasibleSet::Box { lower, .. } => lower.len(),
            FeasibleSet::Ball { center, .. } => center.len(),
        }
    }

    pub fn is_bounded(&self) -> bool {
        !matches!(self, FeasibleSet::Unconstrained { .. })
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        if x.len() != self.dim() {
            return false;
        }
        match self {
            FeasibleSet::Unconstrained { .. } => true,
            FeasibleSet::Box { lower, upper } => x
                .iter()
                .enumerate()
                .all(|(i, v)| *v >= lower[i] - tol && *v <= upper[i] + tol),
            FeasibleSet::Simplex { .. } => {
                x.iter().all(|v| *v >= -tol) && (x.iter().sum::<f64>() - 1.0).abs() <= tol
            }
            FeasibleSet::Ball { center, radius } => {
                let dist: f64 = x
                    .iter()
                    .zip(center)
                    .map(|(a, c)| (a - c) * (a - c))
                    .sum::<f64>()
                    .sqrt();
                dist <= radius + tol
            }
        }
    }

    /// Exact diameter under `norm`; `None` for unbounded sets.
    pub fn diameter(&self, norm: NormKind) -> Option<f64> {
        match self {
            FeasibleSet::Unconstrained { .. } => None,
            FeasibleSet::Box { lower, upper } => {
                let widths: Vec<f64> = lower.iter().zip(upper).map(|(l, u)| u - l).collect();
                Some(norm.eval(&widths))
            }
            FeasibleSet::Simplex { dim } => Some(match norm {
                // extreme pair is a pair of vertices e_i, e_j
                NormKind::L1 => {
                    if *dim >= 2 {
                        2.0
                    } else {
                        0.0
                    }
                }
                NormKind::L2 => {
                    if *dim >= 2 {
                        std::f64::consts::SQRT_2
                    } else {
                        0.0
                    }
                }
                NormKind::LInf => {
                    if *dim >= 2 {
                        1.0
                    } else {
                        0.0
                    }
                }
            }),
            FeasibleSet::Ball { center, radius } => {
                let n = center.len() as f64;
                Some(match norm {
                    // largest l1/linf stretch of a Euclidean ball
                    NormKind::L1 => 2.0 * radius * n.sqrt(),
                    NormKind::L2 | NormKind::LInf => 2.0 * radius,
                })
            }
        }
    }

    /// A random feasible point, uniform-ish; used for probes and tests.
    pub fn sample(&self, rng: &mut SplitMix64) -> Vec<f64> {
        match self {
            FeasibleSet::Unconstrained { dim } => rng.normal_vec(*dim),
            FeasibleSet::Box { lower, upper } => lower
                .iter()
                .zip(upper)
                .map(|(l, u)| rng.range(*l, *u))
                .collect(),
            FeasibleSet::Simplex { dim } => {
                // normalized exponentials give a Dirichlet(1,...,1) draw
                let mut v: Vec<f64> = (0..*dim)
                    .map(|_| -rng.next_f64().max(f64::MIN_POSITIVE).ln())
                    .collect();
                let s: f64 = v.iter().sum();
                for x in &mut v {
                    *x /= s;
                }
                v
            }
            FeasibleSet::Ball { center, radius } => {
                let dim = center.len();
                let dir = rng.normal_vec(dim);
                let n = NormKind::L2.eval(&dir).max(f64::MIN_POSITIVE);
                let r = radius * rng.next_f64().powf(1.0 / dim as f64);
                center
                    .iter()
                    .zip(&dir)
                    .map(|(c, d)| c + r * d / n)
                    .collect()
            }
        }
    }
}

/// Linear minimization oracle: an extreme minimizer of `<s, .>` over the set.
///
/// Ties are broken toward the lowest coordinate index (for boxes, toward the
/// lower bound).
pub fn lmo(set: &FeasibleSet, s: &[f64]) -> Result<Vec<f64>> {
    match set {
        FeasibleSet::Unconstrained { .. } => Err(Error::Unbounded),
        FeasibleSet::Box { lower, upper } => Ok(s
            .iter()
            .enumerate()
            .map(|(i, si)| if *si < 0.0 { upper[i] } else { lower[i] })
            .collect()),
        FeasibleSet::Simplex { dim } => {
            let mut best = 0;
            for i in 1..*dim {
                if s[i] < s[best] {
                    best = i;
                }
            }
            let mut v = vec![0.0; *dim];
            v[best] = 1.0;
            Ok(v)
        }
        FeasibleSet::Ball { center, radius } => {
            let n = NormKind::L2.eval(s);
            if n == 0.0 {
                return Ok(center.clone());
            }
            Ok(center
                .iter()
                .zip(s)
                .map(|(c, si)| c - radius * si / n)
                .collect())
        }
    }
}

/// Solve `min_{x in Q} <s, x> + beta * d(x) + w * Psi(x)` in closed form.
///
/// `beta = 0` and `w = 0` degrades to the linear minimization oracle and
/// requires a bounded set. Combinations without a closed form are rejected
/// with [`Error::UnsupportedCombination`].
pub fn solve_canonical(
    geom: &ProxGeometry,
    set: &FeasibleSet,
    psi: PsiKind,
    s: &[f64],
    beta: f64,
    w: f64,
) -> Result<Vec<f64>> {
    if beta < 0.0 || w < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "canonical subproblem needs beta >= 0 and w >= 0, got beta={beta}, w={w}"
        )));
    }
    let l1_weight = match psi {
        PsiKind::Zero => 0.0,
        PsiKind::L1 { weight } => w * weight,
    };
    if beta == 0.0 {
        if l1_weight == 0.0 {
            return lmo(set, s);
        }
        // linear plus l1 stays separable only over a box
        if let FeasibleSet::Box { lower, upper } = set {
            return Ok(linear_l1_over_box(s, l1_weight, lower, upper));
        }
        return Err(Error::UnsupportedCombination(
            "beta = 0 with an l1 term is only solvable over a box".into(),
        ));
    }

    match (geom.kind, set) {
        (ProxKind::EuclideanHalfSq, FeasibleSet::Unconstrained { .. }) => {
            Ok(shifted_shrink(geom, s, beta, l1_weight))
        }
        (ProxKind::EuclideanHalfSq, FeasibleSet::Box { lower, upper }) => {
            let mut x = shifted_shrink(geom, s, beta, l1_weight);
            for i in 0..x.len() {
                x[i] = x[i].clamp(lower[i], upper[i]);
            }
            Ok(x)
        }
        (ProxKind::EuclideanHalfSq, FeasibleSet::Ball { center, radius }) => {
            if l1_weight != 0.0 {
                return Err(Error::UnsupportedCombination(
                    "l1 term over a Euclidean ball has no closed-form solver".into(),
                ));
            }
            let u = shifted_shrink(geom, s, beta, 0.0);
            let diff: Vec<f64> = u.iter().zip(center).map(|(a, c)| a - c).collect();
            let n = NormKind::L2.eval(&diff);
            if n <= *radius {
                Ok(u)
            } else {
                Ok(center
                    .iter()
                    .zip(&diff)
                    .map(|(c, d)| c + radius * d / n)
                    .collect())
            }
        }
        (ProxKind::EntropySimplex, FeasibleSet::Simplex { dim }) => {
            if l1_weight != 0.0 {
                return Err(Error::UnsupportedCombination(
                    "l1 term is constant on the simplex; declare it Zero".into(),
                ));
            }
            // x_i proportional to x0_i * exp(-s_i / beta), log-sum-exp stabilized
            let mut t = Vec::with_capacity(*dim);
            for i in 0..*dim {
                t.push(geom.center[i].max(ENTROPY_CLAMP).ln() - s[i] / beta);
            }
            let m = t.iter().fold(f64::NEG_INFINITY, |a, b| a.max(*b));
            let mut x: Vec<f64> = t.iter().map(|ti| (ti - m).exp()).collect();
            let z: f64 = x.iter().sum();
            for v in &mut x {
                *v = (*v / z).max(ENTROPY_CLAMP);
            }
            Ok(x)
        }
        (kind, set) => Err(Error::UnsupportedCombination(format!(
            "{kind:?} prox over {} feasible set",
            set_name(set)
        ))),
    }
}

fn set_name(set: &FeasibleSet) -> &'static str {
    match set {
        FeasibleSet::Unconstrained { .. } => "unconstrained",
        FeasibleSet::Box { .. } => "box",
        FeasibleSet::Simplex { .. } => "simplex",
        FeasibleSet::Ball { .. } => "ball",
    }
}

/// Unconstrained minimizer of `<s,x> + beta/2 ||x - x0||^2 + t ||x||_1`:
/// soft-threshold of `x0 - s/beta` at level `t/beta`.
fn shifted_shrink(geom: &ProxGeometry, s: &[f64], beta: f64, t: f64) -> Vec<f64> {
    let thr = t / beta;
    geom.center
        .iter()
        .zip(s)
        .map(|(c, si)| {
            let u = c - si / beta;
            if thr > 0.0 {
                u.signum() * (u.abs() - thr).max(0.0)
            } else {
                u
            }
        })
        .collect()
}

/// Coordinatewise minimizer of `<s,x> + t ||x||_1` over a box: the objective
/// is piecewise linear in each coordinate, so the minimum sits at a bound or
/// at zero.
fn linear_l1_over_box(s: &[f64], t: f64, lower: &[f64], upper: &[f64]) -> Vec<f64> {
    let mut x = Vec::with_capacity(s.len());
    for i in 0..s.len() {
        let pick = |v: f64| s[i] * v + t * v.abs();
        let mut best = lower[i];
        let mut best_val = pick(best);
        for cand in [0.0, upper[i]] {
            if cand < lower[i] || cand > upper[i] {
                continue;
            }
            let v = pick(cand);
            if v < best_val {
                best = cand;
                best_val = v;
            }
        }
        x.push(best);
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn dual_norm_pairs() {
        assert_eq!(NormKind::L1.dual(), NormKind::LInf);
        assert_eq!(NormKind::L2.dual(), NormKind::L2);
        assert_eq!(NormKind::LInf.dual(), NormKind::L1);
    }

    #[test]
    fn bregman_euclidean_identity_point() {
        let geom = ProxGeometry::euclidean(vec![0.0, 0.0]);
        let x = vec![1.5, -2.0];
        assert_close(geom.bregman(&x, &x).unwrap(), 0.0, 1e-15);
    }

    #[test]
    fn bregman_euclidean_half_square_distance() {
        let geom = ProxGeometry::euclidean(vec![0.0, 0.0]);
        let y = vec![0.0, 0.0];
        let x = vec![3.0, 4.0];
        assert_close(geom.bregman(&y, &x).unwrap(), 12.5, 1e-12);
    }

    #[test]
    fn bregman_entropy_matches_kl_sum() {
        let geom = ProxGeometry::entropy_simplex(2);
        let y = vec![0.5, 0.5];
        let x = vec![0.75, 0.25];
        // direct summation oracle for KL(x || y)
        let kl: f64 = x
            .iter()
            .zip(&y)
            .map(|(xi, yi): (&f64, &f64)| xi * (xi / yi).ln())
            .sum();
        let val = geom.bregman(&y, &x).unwrap();
        assert_close(val, kl, 1e-14);
        assert_close(val, 0.130_812_035_941_137, 1e-12);
    }

    #[test]
    fn entropy_rejects_negative_coordinate() {
        let geom = ProxGeometry::entropy_simplex(2);
        assert!(matches!(
            geom.prox_grad(&[-1e-3, 1.0 + 1e-3]),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn linearize_at_same_point_returns_d() {
        let geom = ProxGeometry::euclidean(vec![1.0, -1.0]);
        let x = vec![2.0, 3.0];
        assert_close(
            geom.linearize_d(&x, &x).unwrap(),
            geom.prox_value(&x).unwrap(),
            1e-14,
        );
    }

    #[test]
    fn linearize_frozen_value() {
        // x0=(0,0), y=(1,0), x=(0,1): d(y) + <y - x0, x - y> = 0.5 - 1 = -0.5
        let geom = ProxGeometry::euclidean(vec![0.0, 0.0]);
        assert_close(geom.linearize_d(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), -0.5, 1e-14);
    }

    #[test]
    fn linearize_at_center_is_minimized_at_zero() {
        // min over Q of l_d(x0; x) equals min d = 0 at the prox-center
        let geom = ProxGeometry::euclidean(vec![0.25, 0.75]);
        let set = FeasibleSet::Simplex { dim: 2 };
        let mut rng = SplitMix64::new(11);
        for _ in 0..200 {
            let x = set.sample(&mut rng);
            assert!(geom.linearize_d(&geom.center, &x).unwrap() >= -1e-12);
        }
        assert_close(geom.linearize_d(&geom.center, &geom.center).unwrap(), 0.0, 1e-15);
    }

    #[test]
    fn solve_unconstrained_euclidean_is_center_shift() {
        let geom = ProxGeometry::euclidean(vec![1.0, 2.0]);
        let set = FeasibleSet::Unconstrained { dim: 2 };
        let s = vec![2.0, -4.0];
        let x = solve_canonical(&geom, &set, PsiKind::Zero, &s, 2.0, 0.0).unwrap();
        assert_close(x[0], 0.0, 1e-14);
        assert_close(x[1], 4.0, 1e-14);
    }

    #[test]
    fn solve_entropy_softmax_against_grid_oracle() {
        let geom = ProxGeometry::entropy_simplex(3);
        let set = FeasibleSet::Simplex { dim: 3 };
        let s = vec![1.0, -2.0, 0.5];
        let beta = 0.7;
        let x = solve_canonical(&geom, &set, PsiKind::Zero, &s, beta, 0.0).unwrap();
        let objective = |p: &[f64]| dot(&s, p) + beta * geom.prox_value(p).unwrap();
        // dense barycentric grid oracle on the 3-simplex
        let n = 400usize;
        let mut best = f64::INFINITY;
        for i in 0..=n {
            for j in 0..=(n - i) {
                let p = [
                    i as f64 / n as f64,
                    j as f64 / n as f64,
                    (n - i - j) as f64 / n as f64,
                ];
                best = best.min(objective(&p));
            }
        }
        let val = objective(&x);
        assert!(val <= best + 1e-5, "solver {val} vs grid {best}");
        assert!((x.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn solve_entropy_with_nonuniform_center_weights_by_center() {
        // the prox-center weights the softmax: x_i proportional to x0_i exp(-s_i/beta)
        let geom = ProxGeometry {
            norm: NormSpec::new(NormKind::L1, 3),
            kind: ProxKind::EntropySimplex,
            center: vec![0.5, 0.3, 0.2],
            sigma_d: 1.0,
            quad_growth: None,
        };
        let set = FeasibleSet::Simplex { dim: 3 };
        let s = vec![0.4, -0.9, 0.1];
        let beta = 1.3;
        let x = solve_canonical(&geom, &set, PsiKind::Zero, &s, beta, 0.0).unwrap();
        let weights: Vec<f64> = geom
            .center
            .iter()
            .zip(&s)
            .map(|(c, si)| c * (-si / beta).exp())
            .collect();
        let z: f64 = weights.iter().sum();
        for i in 0..3 {
            assert_close(x[i], weights[i] / z, 1e-12);
        }
        // and the Bregman distance to the center is the KL divergence
        let kl: f64 = x
            .iter()
            .zip(&geom.center)
            .map(|(xi, ci)| xi * (xi / ci).ln())
            .sum();
        assert_close(geom.bregman(&geom.center, &x).unwrap(), kl, 1e-13);
    }

    #[test]
    fn solve_lmo_mode_picks_cheapest_vertex() {
        let geom = ProxGeometry::euclidean(vec![1.0 / 3.0; 3]);
        let set = FeasibleSet::Simplex { dim: 3 };
        let x = solve_canonical(&geom, &set, PsiKind::Zero, &[1.0, -2.0, 0.0], 0.0, 0.0).unwrap();
        assert_eq!(x, vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn lmo_box_sign_rule() {
        let set = FeasibleSet::symmetric_box(3, 1.0);
        let x = lmo(&set, &[0.5, -0.5, 0.0]).unwrap();
        assert_eq!(x, vec![-1.0, 1.0, -1.0]);
    }

    #[test]
    fn lmo_ball_radial_extreme() {
        let set = FeasibleSet::Ball {
            center: vec![1.0, 1.0],
            radius: 2.0,
        };
        let x = lmo(&set, &[3.0, 4.0]).unwrap();
        assert_close(x[0], 1.0 - 2.0 * 3.0 / 5.0, 1e-14);
        assert_close(x[1], 1.0 - 2.0 * 4.0 / 5.0, 1e-14);
    }

    #[test]
    fn lmo_simplex_tie_breaks_to_lowest_index() {
        let set = FeasibleSet::Simplex { dim: 3 };
        assert_eq!(lmo(&set, &[0.0, 0.0, 0.0]).unwrap(), vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn lmo_unconstrained_is_unbounded() {
        let set = FeasibleSet::Unconstrained { dim: 2 };
        assert!(matches!(lmo(&set, &[1.0, 0.0]), Err(Error::Unbounded)));
    }

    #[test]
    fn unsupported_combination_is_reported() {
        let geom = ProxGeometry::entropy_simplex(3);
        let set = FeasibleSet::symmetric_box(3, 1.0);
        assert!(matches!(
            solve_canonical(&geom, &set, PsiKind::Zero, &[0.0; 3], 1.0, 0.0),
            Err(Error::UnsupportedCombination(_))
        ));
    }

    #[test]
    fn l1_over_ball_is_unsupported() {
        let geom = ProxGeometry::euclidean(vec![0.0; 2]);
        let set = FeasibleSet::Ball {
            center: vec![0.0; 2],
            radius: 1.0,
        };
        assert!(matches!(
            solve_canonical(&geom, &set, PsiKind::L1 { weight: 0.5 }, &[1.0, 1.0], 1.0, 1.0),
            Err(Error::UnsupportedCombination(_))
        ));
    }

    #[test]
    fn soft_threshold_matches_scalar_enumeration() {
        let geom = ProxGeometry::euclidean(vec![0.5, -1.5, 0.0]);
        let set = FeasibleSet::Unconstrained { dim: 3 };
        let s = vec![0.2, -0.4, 0.9];
        let (beta, w, tau) = (1.3, 1.0, 0.6);
        let x = solve_canonical(&geom, &set, PsiKind::L1 { weight: tau }, &s, beta, w).unwrap();
        // scalar line search oracle per coordinate
        for i in 0..3 {
            let f = |v: f64| {
                s[i] * v + 0.5 * beta * (v - geom.center[i]).powi(2) + w * tau * v.abs()
            };
            let mut best = x[i];
            for step in -4000..=4000 {
                let cand = step as f64 * 1e-3;
                if f(cand) < f(best) {
                    best = cand;
                }
            }
            assert_close(x[i], best, 2e-3);
        }
    }

    #[test]
    fn diameters_under_declared_norms() {
        let bx = FeasibleSet::symmetric_box(4, 1.0);
        assert_close(bx.diameter(NormKind::L2).unwrap(), 4.0, 1e-14); // ||(2,2,2,2)||_2
        assert_close(bx.diameter(NormKind::LInf).unwrap(), 2.0, 1e-14);
        let sx = FeasibleSet::Simplex { dim: 5 };
        assert_close(sx.diameter(NormKind::L1).unwrap(), 2.0, 1e-14);
        let ball = FeasibleSet::Ball {
            center: vec![0.0; 2],
            radius: 1.5,
        };
        assert_close(ball.diameter(NormKind::L2).unwrap(), 3.0, 1e-14);
        assert!(FeasibleSet::Unconstrained { dim: 2 }
            .diameter(NormKind::L2)
            .is_none());
    }

    #[test]
    fn samples_are_members() {
        let mut rng = SplitMix64::new(5);
        let sets = [
            FeasibleSet::symmetric_box(4, 2.0),
            FeasibleSet::Simplex { dim: 4 },
            FeasibleSet::Ball {
                center: vec![1.0; 4],
                radius: 0.5,
            },
        ];
        for set in &sets {
            for _ in 0..200 {
                let x = set.sample(&mut rng);
                assert!(set.contains(&x, MEMBERSHIP_TOL));
            }
        }
    }
}
