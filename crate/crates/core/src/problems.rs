//! Problem classes and their lower approximation models.
//!
//! Every method in this crate works against a *lower approximation model*
//! `m_f(y; x) <= f(x)` anchored at a query point `y`. All models in scope are
//! affine plus a multiple of the prox-function plus (optionally) a composite
//! term, so they are carried exactly in canonical form:
//!
//! ```text
//! m_f(y; x) = <s, x> + c + sigma_coeff * d(x) + psi_coeff * Psi(x)
//! ```
//!
//! The Bregman term `sigma_f * xi(y, x)` of the defining formulas is expanded
//! through `xi(y, x) = d(x) - l_d(y; x)` into the affine and `d` parts, which
//! is what keeps every auxiliary function solvable by the closed-form
//! subproblem solvers.
//!
//! Two classes are covered: non-smooth problems (subgradient oracle plus a
//! convexity parameter `sigma_f`) and structured problems, which pair the
//! model with constants `(sigma_f, sigma_f_bar, L(.), delta(., .))` satisfying
//!
//! ```text
//! f(x) <= [m_f(y;x) - sigma_f_bar * xi(y,x)] + L(y)/2 ||y-x||^2 + delta(y,x).
//! ```
//!
//! Adapters below realize this for smooth, composite, inexact-oracle, weakly
//! smooth (Holder gradient), and mixed smooth-plus-Holder objectives.

use crate::error::{Error, Result};
use crate::geometry::{dot, FeasibleSet, NormKind, ProxGeometry, PsiKind};
use crate::rng::{hash_unit, SplitMix64};
use std::sync::Arc;

pub type ValueFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
pub type VectorFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;
pub type ScalarFieldFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
pub type ModelFn = Arc<dyn Fn(&ProxGeometry, &[f64]) -> CanonicalModel + Send + Sync>;

/// A lower approximation model in canonical form, anchored at `anchor`.
#[derive(Clone, Debug)]
pub struct CanonicalModel {
    pub s: Vec<f64>,
    pub c: f64,
    pub sigma_coeff: f64,
    pub psi_coeff: f64,
    pub anchor: Vec<f64>,
}

impl CanonicalModel {
    /// Expand `value + <slope, x - y> + sigma * xi(y, x)` into canonical form.
    pub fn from_linearization(
        geom: &ProxGeometry,
        y: &[f64],
        value: f64,
        slope: &[f64],
        sigma: f64,
        psi_coeff: f64,
    ) -> Result<CanonicalModel> {
        let gd = geom.prox_grad(y)?;
        let dy = geom.prox_value(y)?;
        let s: Vec<f64> = slope.iter().zip(&gd).map(|(g, gd)| g - sigma * gd).collect();
        let c = value - dot(&s, y) - sigma * dy;
        Ok(CanonicalModel {
            s,
            c,
            sigma_coeff: sigma,
            psi_coeff,
            anchor: y.to_vec(),
        })
    }

    pub fn eval(&self, geom: &ProxGeometry, psi: PsiKind, x: &[f64]) -> Result<f64> {
        let mut v = dot(&self.s, x) + self.c;
        if self.sigma_coeff != 0.0 {
            v += self.sigma_coeff * geom.prox_value(x)?;
        }
        if self.psi_coeff != 0.0 {
            v += self.psi_coeff * psi.eval(x);
        }
        Ok(v)
    }

    /// Gradient of the smooth part of the model at `x` (excludes `Psi`).
    pub fn grad_smooth(&self, geom: &ProxGeometry, x: &[f64]) -> Result<Vec<f64>> {
        let mut g = self.s.clone();
        if self.sigma_coeff != 0.0 {
            let gd = geom.prox_grad(x)?;
            for i in 0..g.len() {
                g[i] += self.sigma_coeff * gd[i];
            }
        }
        Ok(g)
    }
}

/// How the structured inequality's slack term `delta(y, x)` is shaped.
#[derive(Clone, Copy, Debug)]
pub enum DeltaKind {
    Constant(f64),
    /// `delta(y, x) = m/rho * ||y - x||^rho`, `rho in [1, 2)`.
    Holder { m: f64, rho: f64 },
}

impl DeltaKind {
    pub fn eval(&self, norm: NormKind, y: &[f64], x: &[f64]) -> f64 {
        match self {
            DeltaKind::Constant(d) => *d,
            DeltaKind::Holder { m, rho } => {
                if *m == 0.0 {
                    return 0.0;
                }
                let diff: Vec<f64> = y.iter().zip(x).map(|(a, b)| a - b).collect();
                m / rho * norm.eval(&diff).powf(*rho)
            }
        }
    }
}

/// A problem known through a subgradient oracle.
#[derive(Clone)]
pub struct NonSmoothProblem {
    pub objective: ValueFn,
    pub subgradient: VectorFn,
    pub sigma_f: f64,
    /// A priori bound on `||g(x)||_*`, when available.
    pub subgrad_bound: Option<f64>,
}

impl NonSmoothProblem {
    pub fn value(&self, x: &[f64]) -> f64 {
        (self.objective)(x)
    }

    pub fn subgrad(&self, x: &[f64]) -> Vec<f64> {
        (self.subgradient)(x)
    }

    /// The canonical lower model `f(y) + <g(y), x-y> + sigma_f * xi(y, x)`.
    pub fn lower_model(&self, geom: &ProxGeometry, y: &[f64]) -> Result<CanonicalModel> {
        let value = self.value(y);
        let slope = self.subgrad(y);
        CanonicalModel::from_linearization(geom, y, value, &slope, self.sigma_f, 0.0)
    }
}

/// Free-function face of [`NonSmoothProblem::lower_model`].
pub fn nsp_lower_model(
    p: &NonSmoothProblem,
    geom: &ProxGeometry,
    y: &[f64],
) -> Result<CanonicalModel> {
    p.lower_model(geom, y)
}

/// A problem known through a model builder and structured constants.
#[derive(Clone)]
pub struct StructuredProblem {
    pub objective: ValueFn,
    pub model_builder: ModelFn,
    pub sigma_f: f64,
    pub sigma_f_bar: f64,
    pub lipschitz: ScalarFieldFn,
    pub delta: DeltaKind,
    pub psi: PsiKind,
}

impl StructuredProblem {
    pub fn value(&self, x: &[f64]) -> f64 {
        (self.objective)(x)
    }

    pub fn model(&self, geom: &ProxGeometry, y: &[f64]) -> CanonicalModel {
        (self.model_builder)(geom, y)
    }

    pub fn lipschitz_at(&self, x: &[f64]) -> f64 {
        (self.lipschitz)(x)
    }

    pub fn delta_at(&self, norm: NormKind, y: &[f64], x: &[f64]) -> f64 {
        self.delta.eval(norm, y, x)
    }
}

fn constant_field(v: f64) -> ScalarFieldFn {
    Arc::new(move |_: &[f64]| v)
}

/// Adapter for `f` with an `L`-Lipschitz gradient: model
/// `f(y) + <grad f(y), x-y> + sigma_f * xi(y,x)`, slack-free.
pub fn make_smooth_adapter(
    geom: &ProxGeometry,
    f: ValueFn,
    grad_f: VectorFn,
    l: f64,
    sigma_f: f64,
) -> Result<StructuredProblem> {
    if l < sigma_f * geom.sigma_d {
        return Err(Error::InvalidParameter(format!(
            "smooth adapter needs L >= sigma_f*sigma_d, got L={l}, sigma_f={sigma_f}"
        )));
    }
    let fc = f.clone();
    let gc = grad_f;
    let builder: ModelFn = Arc::new(move |geom: &ProxGeometry, y: &[f64]| {
        CanonicalModel::from_linearization(geom, y, fc(y), &gc(y), sigma_f, 0.0)
            .expect("smooth model expansion")
    });
    Ok(StructuredProblem {
        objective: f,
        model_builder: builder,
        sigma_f,
        sigma_f_bar: sigma_f,
        lipschitz: constant_field(l),
        delta: DeltaKind::Constant(0.0),
        psi: PsiKind::Zero,
    })
}

/// Adapter for composite objectives `f = f0 + Psi` with smooth `f0`: the model
/// keeps `Psi` intact, `sigma_f = sigma_f0 + sigma_psi`, `sigma_f_bar = sigma_f0`.
pub fn make_composite_adapter(
    geom: &ProxGeometry,
    f0: ValueFn,
    grad_f0: VectorFn,
    l: f64,
    sigma_f0: f64,
    psi: PsiKind,
    sigma_psi: f64,
) -> Result<StructuredProblem> {
    if l < sigma_f0 * geom.sigma_d {
        return Err(Error::InvalidParameter(format!(
            "composite adapter needs L >= sigma_f0*sigma_d, got L={l}"
        )));
    }
    if sigma_psi != 0.0 && psi.is_zero() {
        return Err(Error::InvalidParameter(
            "sigma_psi > 0 requires a non-trivial composite term".into(),
        ));
    }
    let f0c = f0.clone();
    let objective: ValueFn = Arc::new(move |x: &[f64]| f0c(x) + psi.eval(x));
    let f0m = f0;
    let builder: ModelFn = Arc::new(move |geom: &ProxGeometry, y: &[f64]| {
        CanonicalModel::from_linearization(geom, y, f0m(y), &grad_f0(y), sigma_f0, 1.0)
            .expect("composite model expansion")
    });
    Ok(StructuredProblem {
        objective,
        model_builder: builder,
        sigma_f: sigma_f0 + sigma_psi,
        sigma_f_bar: sigma_f0,
        lipschitz: constant_field(l),
        delta: DeltaKind::Constant(0.0),
        psi,
    })
}

/// Wrap an exact structured problem as a first-order oracle with accuracy
/// `delta`: the reported value is lowered by a deterministic, query-seeded
/// perturbation in `[0, delta/2]`, so both envelope inequalities
///
/// ```text
/// mu/2 ||x-y||^2 <= f(x) - (f_d(y) + <g_d(y), x-y>) <= L/2 ||x-y||^2 + delta
/// ```
///
/// hold whenever the exact problem is `mu`-strongly convex with an
/// `L_exact <= L` gradient. Constants become `sigma_f = sigma_f_bar = mu/A`.
pub fn make_inexact_oracle_adapter(
    exact: &StructuredProblem,
    delta: f64,
    l: f64,
    mu: f64,
    geom: &ProxGeometry,
    noise_seed: u64,
) -> Result<StructuredProblem> {
    if delta < 0.0 || mu < 0.0 || l < mu {
        return Err(Error::InvalidParameter(format!(
            "inexact oracle needs 0 <= mu <= L and delta >= 0, got mu={mu}, L={l}, delta={delta}"
        )));
    }
    let a = if mu == 0.0 {
        geom.quad_growth.unwrap_or(1.0)
    } else {
        geom.quad_growth.ok_or_else(|| {
            Error::InvalidParameter(
                "mu > 0 requires a quadratic-growth constant on the prox-function".into(),
            )
        })?
    };
    if !exact.psi.is_zero() {
        return Err(Error::UnsupportedCombination(
            "inexact oracle wrapping is only supported for Psi = 0 problems".into(),
        ));
    }
    let sigma = mu / a;
    let exact_builder = exact.model_builder.clone();
    let builder: ModelFn = Arc::new(move |geom: &ProxGeometry, y: &[f64]| {
        let exact_model = exact_builder(geom, y);
        // recover the exact pair (f(y), g(y)) from the exact model at its anchor
        let value = exact_model
            .eval(geom, PsiKind::Zero, y)
            .expect("exact model evaluation");
        let slope = exact_model
            .grad_smooth(geom, y)
            .expect("exact model gradient");
        let noisy = value - 0.5 * delta * hash_unit(noise_seed, y);
        CanonicalModel::from_linearization(geom, y, noisy, &slope, sigma, 0.0)
            .expect("inexact model expansion")
    });
    Ok(StructuredProblem {
        objective: exact.objective.clone(),
        model_builder: builder,
        sigma_f: sigma,
        sigma_f_bar: sigma,
        lipschitz: constant_field(l),
        delta: DeltaKind::Constant(delta),
        psi: PsiKind::Zero,
    })
}

/// Adapter for objectives with a Holder-continuous (sub)gradient:
/// `||g(x) - g(y)||_* <= M ||x - y||^(rho-1)` gives the slack
/// `delta(y,x) = M/rho ||y-x||^rho` with `L(.) = 0`.
pub fn make_weakly_smooth_adapter(
    f: ValueFn,
    grad_f: VectorFn,
    m: f64,
    rho: f64,
    sigma_f: f64,
) -> Result<StructuredProblem> {
    make_mixed_adapter(f, grad_f, 0.0, m, rho, sigma_f)
}

/// Adapter for objectives combining a Lipschitz-gradient part (`L`) and a
/// Holder part (`M`, `rho`) in the slack of the structured inequality.
pub fn make_mixed_adapter(
    f: ValueFn,
    grad_f: VectorFn,
    l: f64,
    m: f64,
    rho: f64,
    sigma_f: f64,
) -> Result<StructuredProblem> {
    if !(1.0..2.0).contains(&rho) {
        return Err(Error::InvalidParameter(format!(
            "Holder exponent rho must lie in [1, 2), got {rho}"
        )));
    }
    if m < 0.0 || l < 0.0 || sigma_f < 0.0 {
        return Err(Error::InvalidParameter(
            "constants L, M, sigma_f must be non-negative".into(),
        ));
    }
    let fc = f.clone();
    let builder: ModelFn = Arc::new(move |geom: &ProxGeometry, y: &[f64]| {
        CanonicalModel::from_linearization(geom, y, fc(y), &grad_f(y), sigma_f, 0.0)
            .expect("Holder model expansion")
    });
    Ok(StructuredProblem {
        objective: f,
        model_builder: builder,
        sigma_f,
        sigma_f_bar: sigma_f,
        lipschitz: constant_field(l),
        delta: DeltaKind::Holder { m, rho },
    psi: PsiKind::Zero,
    })
}

/// Estimate a Holder constant by maximizing `||g(x)-g(y)||_* / ||x-y||^(rho-1)`
/// over sampled pairs (both set-wide pairs and short-range perturbations, which
/// probe the kinks) and inflating the maximum by `inflation`.
pub fn estimate_holder_constant(
    grad: &VectorFn,
    set: &FeasibleSet,
    norm: NormKind,
    rho: f64,
    pairs: usize,
    inflation: f64,
    rng: &mut SplitMix64,
) -> f64 {
    let mut worst: f64 = 0.0;
    let dual = norm.dual();
    for i in 0..pairs {
        let x = set.sample(rng);
        let y = if i % 2 == 0 {
            set.sample(rng)
        } else {
            // short-range probe around x, projected back by resampling on miss
            let scale = 10f64.powf(rng.range(-4.0, -1.0));
            let mut y: Vec<f64> = x.iter().map(|v| v + scale * rng.normal()).collect();
            if !set.contains(&y, 0.0) {
                y = set.sample(rng);
            }
            y
        };
        let diff: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a - b).collect();
        let dist = norm.eval(&diff);
        if dist < 1e-14 {
            continue;
        }
        let gx = grad(&x);
        let gy = grad(&y);
        let gdiff: Vec<f64> = gx.iter().zip(&gy).map(|(a, b)| a - b).collect();
        let ratio = dual.eval(&gdiff) / dist.powf(rho - 1.0);
        worst = worst.max(ratio);
    }
    worst * inflation
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    fn abs_value_problem(sigma_f: f64) -> NonSmoothProblem {
        NonSmoothProblem {
            objective: Arc::new(|x: &[f64]| x[0].abs()),
            subgradient: Arc::new(|x: &[f64]| vec![if x[0] >= 0.0 { 1.0 } else { -1.0 }]),
            sigma_f,
            subgrad_bound: Some(1.0),
        }
    }

    #[test]
    fn nsp_model_is_affine_minorant_at_smooth_point() {
        // f(x) = |x|, anchored at y = 2: the model is the line m(x) = x
        let geom = ProxGeometry::euclidean(vec![0.0]);
        let p = abs_value_problem(0.0);
        let m = p.lower_model(&geom, &[2.0]).unwrap();
        for x in [-3.0, -1.0, 0.0, 0.5, 2.0, 4.0] {
            close(m.eval(&geom, PsiKind::Zero, &[x]).unwrap(), x, 1e-14);
        }
    }

    #[test]
    fn nsp_model_anchor_consistency_with_strong_term() {
        // f(x) = |x| + sigma/2 x^2 with the prox-center at 0, so xi(y,x) = (x-y)^2/2
        let sigma = 0.7;
        let geom = ProxGeometry::euclidean(vec![0.0]);
        let p = NonSmoothProblem {
            objective: Arc::new(move |x: &[f64]| x[0].abs() + 0.5 * sigma * x[0] * x[0]),
            subgradient: Arc::new(move |x: &[f64]| {
                vec![if x[0] >= 0.0 { 1.0 } else { -1.0 } + sigma * x[0]]
            }),
            sigma_f: sigma,
            subgrad_bound: None,
        };
        for y in [-2.0, -0.5, 0.25, 3.0] {
            let m = p.lower_model(&geom, &[y]).unwrap();
            close(
                m.eval(&geom, PsiKind::Zero, &[y]).unwrap(),
                p.value(&[y]),
                1e-12,
            );
            assert!((m.sigma_coeff - sigma).abs() < 1e-15);
        }
    }

    #[test]
    fn nsp_lower_model_property_sampled() {
        // random piecewise-max instance, model stays below f on 1000 samples
        let mut rng = SplitMix64::new(42);
        let rows: Vec<Vec<f64>> = (0..6).map(|_| rng.normal_vec(3)).collect();
        let offs: Vec<f64> = (0..6).map(|_| rng.range(-1.0, 1.0)).collect();
        let rows_f = rows.clone();
        let offs_f = offs.clone();
        let piece = move |x: &[f64]| -> (usize, f64) {
            let mut best = (0usize, f64::NEG_INFINITY);
            for (j, a) in rows_f.iter().enumerate() {
                let v = dot(a, x) + offs_f[j];
                if v > best.1 {
                    best = (j, v);
                }
            }
            best
        };
        let piece_g = piece.clone();
        let rows_g = rows.clone();
        let p = NonSmoothProblem {
            objective: Arc::new(move |x: &[f64]| piece(x).1),
            subgradient: Arc::new(move |x: &[f64]| rows_g[piece_g(x).0].clone()),
            sigma_f: 0.0,
            subgrad_bound: None,
        };
        let geom = ProxGeometry::euclidean(vec![0.0; 3]);
        let set = FeasibleSet::symmetric_box(3, 2.0);
        for _ in 0..1000 {
            let y = set.sample(&mut rng);
            let x = set.sample(&mut rng);
            let m = p.lower_model(&geom, &y).unwrap();
            assert!(
                m.eval(&geom, PsiKind::Zero, &x).unwrap() <= p.value(&x) + 1e-10,
                "lower-model property violated"
            );
        }
    }

    #[test]
    fn smooth_adapter_rejects_small_l() {
        let geom = ProxGeometry::euclidean(vec![0.0]);
        let f: ValueFn = Arc::new(|x: &[f64]| x[0] * x[0]);
        let g: VectorFn = Arc::new(|x: &[f64]| vec![2.0 * x[0]]);
        assert!(make_smooth_adapter(&geom, f, g, 0.5, 1.0).is_err());
    }

    #[test]
    fn smooth_adapter_exact_for_matching_quadratic() {
        // f(x) = 1/2 ||x||^2 with L = sigma_f = 1 in the Euclidean geometry at 0:
        // the structured inequality holds with zero margin
        let geom = ProxGeometry::euclidean(vec![0.0, 0.0]);
        let f: ValueFn = Arc::new(|x: &[f64]| 0.5 * dot(x, x));
        let g: VectorFn = Arc::new(|x: &[f64]| x.to_vec());
        let p = make_smooth_adapter(&geom, f, g, 1.0, 1.0).unwrap();
        let mut rng = SplitMix64::new(3);
        for _ in 0..100 {
            let y = rng.normal_vec(2);
            let x = rng.normal_vec(2);
            let m = p.model(&geom, &y);
            let lhs = p.value(&x);
            let rhs = m.eval(&geom, PsiKind::Zero, &x).unwrap()
                - p.sigma_f_bar * geom.bregman(&y, &x).unwrap()
                + 0.5 * p.lipschitz_at(&y) * {
                    let d: Vec<f64> = y.iter().zip(&x).map(|(a, b)| a - b).collect();
                    NormKind::L2.eval(&d).powi(2)
                };
            close(lhs, rhs, 1e-10);
        }
    }

    #[test]
    fn composite_adapter_anchor_and_reduction() {
        let geom = ProxGeometry::euclidean(vec![0.0, 0.0]);
        let f0: ValueFn = Arc::new(|x: &[f64]| 0.5 * dot(x, x));
        let g0: VectorFn = Arc::new(|x: &[f64]| x.to_vec());
        let psi = PsiKind::L1 { weight: 0.3 };
        let p = make_composite_adapter(&geom, f0.clone(), g0.clone(), 1.0, 0.0, psi, 0.0).unwrap();
        let y = vec![1.0, -2.0];
        let m = p.model(&geom, &y);
        close(m.eval(&geom, psi, &y).unwrap(), p.value(&y), 1e-12);
        assert_eq!(m.psi_coeff, 1.0);
        close(m.sigma_coeff, 0.0, 0.0);

        // Psi = 0 degenerates to the smooth adapter on probes
        let smooth = make_smooth_adapter(&geom, f0, g0, 1.0, 0.0).unwrap();
        let degen =
            make_composite_adapter(&geom, smooth.objective.clone(), Arc::new(|x: &[f64]| x.to_vec()),
                1.0, 0.0, PsiKind::Zero, 0.0)
            .unwrap();
        let mut rng = SplitMix64::new(9);
        for _ in 0..100 {
            let y = rng.normal_vec(2);
            let x = rng.normal_vec(2);
            let a = smooth.model(&geom, &y).eval(&geom, PsiKind::Zero, &x).unwrap();
            let b = degen.model(&geom, &y).eval(&geom, PsiKind::Zero, &x).unwrap();
            close(a, b, 1e-12);
        }
    }

    #[test]
    fn inexact_oracle_zero_delta_matches_exact() {
        let geom = ProxGeometry::euclidean(vec![0.0, 0.0]);
        let f: ValueFn = Arc::new(|x: &[f64]| 0.5 * dot(x, x));
        let g: VectorFn = Arc::new(|x: &[f64]| x.to_vec());
        let exact = make_smooth_adapter(&geom, f, g, 1.0, 1.0).unwrap();
        let wrapped = make_inexact_oracle_adapter(&exact, 0.0, 1.0, 1.0, &geom, 7).unwrap();
        let mut rng = SplitMix64::new(13);
        for _ in 0..50 {
            let y = rng.normal_vec(2);
            let x = rng.normal_vec(2);
            let a = exact.model(&geom, &y).eval(&geom, PsiKind::Zero, &x).unwrap();
            let b = wrapped.model(&geom, &y).eval(&geom, PsiKind::Zero, &x).unwrap();
            close(a, b, 1e-12);
        }
        close(wrapped.sigma_f, 1.0, 1e-15); // A = 1 in the Euclidean setting
    }

    #[test]
    fn inexact_oracle_envelope_holds_on_samples() {
        let geom = ProxGeometry::euclidean(vec![0.0, 0.0]);
        // strongly convex quadratic: f = 1/2 (2 x0^2 + 5 x1^2), mu = 2, L = 5
        let f: ValueFn = Arc::new(|x: &[f64]| x[0] * x[0] + 2.5 * x[1] * x[1]);
        let g: VectorFn = Arc::new(|x: &[f64]| vec![2.0 * x[0], 5.0 * x[1]]);
        let exact = make_smooth_adapter(&geom, f.clone(), g, 5.0, 2.0).unwrap();
        let delta = 1e-3;
        let wrapped = make_inexact_oracle_adapter(&exact, delta, 5.0, 2.0, &geom, 99).unwrap();
        let mut rng = SplitMix64::new(17);
        for _ in 0..1000 {
            let y = rng.normal_vec(2);
            let x = rng.normal_vec(2);
            let m = wrapped.model(&geom, &y);
            let lin = m.eval(&geom, PsiKind::Zero, &y).unwrap()
                + dot(&m.grad_smooth(&geom, &y).unwrap(), &{
                    let d: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a - b).collect();
                    d
                });
            let excess = f(&x) - lin;
            let dist2 = {
                let d: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a - b).collect();
                dot(&d, &d)
            };
            assert!(excess >= 0.5 * 2.0 * dist2 - 1e-10, "lower envelope");
            assert!(excess <= 0.5 * 5.0 * dist2 + delta + 1e-10, "upper envelope");
        }
    }

    #[test]
    fn mixed_adapter_rejects_bad_rho() {
        let f: ValueFn = Arc::new(|x: &[f64]| x[0].abs());
        let g: VectorFn = Arc::new(|x: &[f64]| vec![x[0].signum()]);
        assert!(make_mixed_adapter(f.clone(), g.clone(), 0.0, 1.0, 2.0, 0.0).is_err());
        assert!(make_mixed_adapter(f, g, 0.0, 1.0, 0.5, 0.0).is_err());
    }

    #[test]
    fn holder_delta_at_exponent_one_is_m_times_distance() {
        let d = DeltaKind::Holder { m: 2.0, rho: 1.0 };
        close(d.eval(NormKind::L2, &[0.0, 0.0], &[3.0, 4.0]), 10.0, 1e-12);
    }

    #[test]
    fn holder_gradient_inequality_on_samples() {
        // f(x) = 1/rho sum |a_i.x - b_i|^rho has a (rho-1)-Holder gradient
        let rho = 1.5;
        let mut rng = SplitMix64::new(23);
        let rows: Vec<Vec<f64>> = (0..5).map(|_| rng.normal_vec(3)).collect();
        let rhs: Vec<f64> = (0..5).map(|_| rng.range(-0.5, 0.5)).collect();
        let rows_f = rows.clone();
        let rhs_f = rhs.clone();
        let f: ValueFn = Arc::new(move |x: &[f64]| {
            rows_f
                .iter()
                .zip(&rhs_f)
                .map(|(a, b)| (dot(a, x) - b).abs().powf(rho) / rho)
                .sum()
        });
        let rows_g = rows.clone();
        let rhs_g = rhs.clone();
        let grad: VectorFn = Arc::new(move |x: &[f64]| {
            let mut g = vec![0.0; x.len()];
            for (a, b) in rows_g.iter().zip(&rhs_g) {
                let r = dot(a, x) - b;
                let coef = r.abs().powf(rho - 1.0) * r.signum();
                for i in 0..g.len() {
                    g[i] += coef * a[i];
                }
            }
            g
        });
        let set = FeasibleSet::symmetric_box(3, 1.0);
        let m = estimate_holder_constant(&grad, &set, NormKind::L2, rho, 10_000, 1.5, &mut rng);
        assert!(m > 0.0);
        // descent-lemma style consequence of the Holder condition
        for _ in 0..1000 {
            let y = set.sample(&mut rng);
            let x = set.sample(&mut rng);
            let d: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a - b).collect();
            let lhs = f(&x) - f(&y) - dot(&grad(&y), &d);
            let rhs_bound = m / rho * NormKind::L2.eval(&d).powf(rho);
            assert!(lhs <= rhs_bound + 1e-9, "{lhs} vs {rhs_bound}");
        }
    }
}
