//! The classical and modified (sub)gradient methods, their conditional
//! gradient specialization, and the online certificate tracker.
//!
//! Both problem classes run the same skeleton: at each iteration a lower
//! approximation model is taken at the test point `x_k`, folded into the
//! auxiliary function(s), and the minimizer(s) `z_k` (and `w_k`) drive the
//! next test point and the averaged output `x_hat_k`. The two variants differ
//! only in the test-point update:
//!
//! * classical: `x_{k+1} = z_k`;
//! * modified:  `x_{k+1} = (S_k x_hat_k + lambda_{k+1} z_k) / S_{k+1}`.
//!
//! Alongside the iterates the engine accumulates the certificate `C_k` whose
//! increments depend on the problem class and variant, and asserts the
//! certificate relation
//!
//! ```text
//! S_k f(x_hat_k) <= psi_k(w_k) + C_k
//! ```
//!
//! at every iteration (the induction carrying every gap bound; see
//! [`certificate_bounds`]). Classical runs additionally assert the cumulative relation
//! `sum_i lambda_i f(x_i) <= psi_k(w_k) + C_k` (non-smooth) or the same with
//! `f(w_i)` (structured). Violations beyond `rk_tol * scale` abort in strict
//! mode and are recorded otherwise.

mod bounds;

pub use bounds::{
    certificate_bounds, cgm_smooth_bounds, cgm_weak_bounds, check_bound_table,
    nonsmooth_simple_bounds, structured_constant_bounds, weak_smooth_bounds, BoundRow,
    Reference, WeakBoundRow, WeakClosedForm,
};

use crate::error::{Error, Result};
use crate::geometry::{FeasibleSet, ProxGeometry, PsiKind, MEMBERSHIP_TOL};
use crate::models::{
    da_step, emd_step, hybrid_step, init_aux, AuxStep, AuxTrace, ModelKind,
};
use crate::problems::{NonSmoothProblem, StructuredProblem};
use crate::schedules::{Schedule, ScheduleKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    Classical,
    Modified,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub variant: Variant,
    pub model: ModelKind,
    pub schedule: ScheduleKind,
    /// Final iteration index `K`; the trace holds rows `k = 0..=K`.
    pub iterations: usize,
    /// Abort on a violated certificate inequality instead of recording it.
    pub strict: bool,
    /// Scale-relative tolerance for the runtime inequalities.
    pub rk_tol: f64,
    /// Retain models and auxiliary functions for structural property checks.
    pub track_aux: bool,
    /// Fault-injection factor on certificate increments; 1.0 in normal use.
    /// The harness self-test sets it to 0 to confirm the relation check trips.
    pub c_scale: f64,
}

impl RunConfig {
    pub fn new(
        variant: Variant,
        model: ModelKind,
        schedule: ScheduleKind,
        iterations: usize,
    ) -> Self {
        Self {
            variant,
            model,
            schedule,
            iterations,
            strict: true,
            rk_tol: 1e-8,
            track_aux: false,
            c_scale: 1.0,
        }
    }
}

/// One iteration of telemetry.
#[derive(Clone, Debug)]
pub struct IterRow {
    pub k: usize,
    pub lambda: f64,
    pub beta: f64,
    pub s_cum: f64,
    pub x: Vec<f64>,
    pub z: Vec<f64>,
    pub w: Vec<f64>,
    pub x_hat: Vec<f64>,
    pub f_hat: f64,
    pub f_x: f64,
    pub f_w: f64,
    /// `psi_k(w_k)`, the minimum of the second auxiliary function.
    pub psi_min: f64,
    pub c_cert: f64,
    /// `||g_k||_*` for non-smooth runs, 0 for structured ones.
    pub grad_dual_norm: f64,
    /// Scaled residual of the certificate relation (non-positive when it holds).
    pub cert_residual: f64,
    /// Scaled residual of the cumulative relation; classical runs only.
    pub cum_residual: Option<f64>,
    /// `||w_k - z_{k-1}||` under the geometry norm.
    pub step_norm: f64,
}

#[derive(Clone, Debug)]
pub struct Violation {
    pub k: usize,
    pub what: String,
    pub residual: f64,
}

/// Full retained run: telemetry rows plus enough context to derive bounds.
#[derive(Clone, Debug)]
pub struct RunTrace {
    pub rows: Vec<IterRow>,
    pub aux: Option<AuxTrace>,
    pub violations: Vec<Violation>,
    pub variant: Variant,
    pub model: ModelKind,
    pub schedule: ScheduleKind,
    pub sigma_f: f64,
    pub sigma_f_bar: f64,
    pub beta_minus1: f64,
}

impl RunTrace {
    pub fn last(&self) -> &IterRow {
        self.rows.last().expect("non-empty trace")
    }

    /// Worst (largest) certificate-relation residual over the run.
    pub fn worst_cert_residual(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| r.cert_residual)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Recompute the non-smooth certificate sequence from the retained
    /// iterates and return the worst relative deviation from the tracked
    /// values (two-pass consistency).
    pub fn recompute_certificates_nonsmooth(&self, sigma_d: f64) -> f64 {
        let mut c = 0.0;
        let mut worst: f64 = 0.0;
        for (k, row) in self.rows.iter().enumerate() {
            let beta_prev = if k == 0 {
                self.beta_minus1
            } else {
                self.rows[k - 1].beta
            };
            let s_prev = if k == 0 { 0.0 } else { self.rows[k - 1].s_cum };
            let lam = row.lambda;
            c += match self.variant {
                Variant::Classical => {
                    lam * lam * row.grad_dual_norm.powi(2)
                        / (2.0 * sigma_d * (beta_prev + row.s_cum * self.sigma_f))
                }
                Variant::Modified => {
                    lam * lam * row.s_cum * row.grad_dual_norm.powi(2)
                        / (2.0
                            * sigma_d
                            * (lam * lam * self.sigma_f
                                + row.s_cum * (beta_prev + s_prev * self.sigma_f)))
                }
            };
            let scale = 1.0_f64.max(row.c_cert.abs()).max(c.abs());
            worst = worst.max((c - row.c_cert).abs() / scale);
        }
        worst
    }

    /// Recompute the structured certificate sequence from the retained
    /// iterates and return the worst relative deviation from the tracked
    /// values (two-pass consistency).
    pub fn recompute_certificates_structured(
        &self,
        problem: &StructuredProblem,
        geom: &ProxGeometry,
    ) -> f64 {
        let norm = geom.norm.kind;
        let mut c = 0.0;
        let mut worst: f64 = 0.0;
        for (k, row) in self.rows.iter().enumerate() {
            let beta_prev = if k == 0 {
                self.beta_minus1
            } else {
                self.rows[k - 1].beta
            };
            let s_prev = if k == 0 { 0.0 } else { self.rows[k - 1].s_cum };
            let lam = row.lambda;
            let l_here = problem.lipschitz_at(&row.x);
            c += match self.variant {
                Variant::Classical => {
                    let d: Vec<f64> = row.w.iter().zip(&row.x).map(|(a, b)| a - b).collect();
                    lam * (0.5 * l_here
                        - 0.5
                            * geom.sigma_d
                            * (self.sigma_f_bar + (beta_prev + s_prev * self.sigma_f) / lam))
                        * norm.eval(&d).powi(2)
                        + lam * problem.delta_at(norm, &row.x, &row.w)
                }
                Variant::Modified => {
                    let d: Vec<f64> = row.x_hat.iter().zip(&row.x).map(|(a, b)| a - b).collect();
                    row.s_cum
                        * (0.5 * l_here
                            - 0.5
                                * geom.sigma_d
                                * (self.sigma_f_bar
                                    + row.s_cum * (beta_prev + s_prev * self.sigma_f)
                                        / (lam * lam)))
                        * norm.eval(&d).powi(2)
                        + row.s_cum * problem.delta_at(norm, &row.x, &row.x_hat)
                }
            };
            let scale = 1.0_f64.max(row.c_cert.abs()).max(c.abs());
            worst = worst.max((c - row.c_cert).abs() / scale);
        }
        worst
    }
}

struct CheckCtx<'a> {
    strict: bool,
    tol: f64,
    violations: &'a mut Vec<Violation>,
}

impl CheckCtx<'_> {
    /// Enforce `lhs <= rhs + tol * scale`; returns the scaled residual.
    fn upper(&mut self, k: usize, what: &str, lhs: f64, rhs: f64) -> Result<f64> {
        let scale = 1.0_f64.max(lhs.abs()).max(rhs.abs());
        let residual = (lhs - rhs) / scale;
        if residual > self.tol {
            if self.strict {
                return Err(Error::InvariantViolated {
                    k,
                    what: format!("{what}: {lhs} > {rhs} (scaled residual {residual:.3e})"),
                });
            }
            self.violations.push(Violation {
                k,
                what: what.to_string(),
                residual,
            });
        }
        Ok(residual)
    }
}

/// Method for non-smooth problems (subgradient oracle).
pub fn run_nonsmooth(
    cfg: &RunConfig,
    problem: &NonSmoothProblem,
    geom: &ProxGeometry,
    set: &FeasibleSet,
) -> Result<RunTrace> {
    if cfg.model.is_coupled() {
        return Err(Error::InvalidParameter(
            "non-smooth runs use a single auxiliary sequence; pick extended-md or dual-averaging"
                .into(),
        ));
    }
    if !set.contains(&geom.center, MEMBERSHIP_TOL) {
        return Err(Error::InvalidParameter(
            "prox-center lies outside the feasible set".into(),
        ));
    }
    let sched = Schedule::generate(&cfg.schedule, cfg.iterations)?;
    let sigma_f = problem.sigma_f;
    if sched.lambda(0) * sigma_f + sched.beta(-1) <= 0.0 {
        return Err(Error::DegenerateC0);
    }

    let k_max = cfg.iterations;
    let psi = PsiKind::Zero;
    let mut rows = Vec::with_capacity(k_max + 1);
    let mut violations = Vec::new();
    let mut aux_steps = Vec::new();

    let mut x = geom.center.clone();
    let mut x_hat = x.clone();
    let mut z_prev = geom.center.clone();
    let mut phi = init_aux(sched.beta(-1), geom);
    let mut phi_min = 0.0;
    let mut c_cert = 0.0;
    let mut cum_lf = 0.0;

    for k in 0..=k_max {
        let ki = k as isize;
        let lam = sched.lambda(k);
        let beta_prev = sched.beta(ki - 1);
        let beta_k = sched.beta(ki);
        let s_prev = sched.s_cum(ki - 1);
        let s_k = sched.s_cum(ki);

        if k > 0 {
            // both variants share the averaged-output update; they differ in
            // whether the test point is z_{k-1} or the average itself
            let mut next: Vec<f64> = x_hat
                .iter()
                .zip(&z_prev)
                .map(|(h, z)| (s_prev * h + lam * z) / s_k)
                .collect();
            std::mem::swap(&mut x_hat, &mut next);
            x = match cfg.variant {
                Variant::Classical => z_prev.clone(),
                Variant::Modified => x_hat.clone(),
            };
        }

        let g = problem.subgrad(&x);
        let g_norm = geom.norm.kind.dual_eval(&g);
        let model = problem.lower_model(geom, &x)?;
        phi = match cfg.model {
            ModelKind::ExtendedMd => emd_step(
                phi_min, &z_prev, &model, lam, beta_prev, beta_k, s_prev, sigma_f, geom,
            )?,
            ModelKind::DualAveraging => da_step(&phi, &model, lam, beta_prev, beta_k),
            ModelKind::Hybrid => unreachable!(),
        };
        let z = phi.minimize(geom, set, psi)?;
        phi_min = phi.eval(geom, psi, &z)?;

        let inc = match cfg.variant {
            Variant::Classical => {
                lam * lam * g_norm * g_norm / (2.0 * geom.sigma_d * (beta_prev + s_k * sigma_f))
            }
            Variant::Modified => {
                lam * lam * s_k * g_norm * g_norm
                    / (2.0
                        * geom.sigma_d
                        * (lam * lam * sigma_f + s_k * (beta_prev + s_prev * sigma_f)))
            }
        };
        c_cert += cfg.c_scale * inc;

        let f_hat = problem.value(&x_hat);
        let f_x = problem.value(&x);
        cum_lf += lam * f_x;
        let step_norm = {
            let d: Vec<f64> = z.iter().zip(&z_prev).map(|(a, b)| a - b).collect();
            geom.norm.kind.eval(&d)
        };

        let mut ctx = CheckCtx {
            strict: cfg.strict,
            tol: cfg.rk_tol,
            violations: &mut violations,
        };
        let cert_residual =
            ctx.upper(k, "certificate relation", s_k * f_hat, phi_min + c_cert)?;
        let cum_residual = match cfg.variant {
            Variant::Classical => {
                Some(ctx.upper(k, "cumulative test-point relation", cum_lf, phi_min + c_cert)?)
            }
            Variant::Modified => None,
        };

        if cfg.track_aux {
            aux_steps.push(AuxStep {
                lambda: lam,
                beta: beta_k,
                s_cum: s_k,
                model: model.clone(),
                phi: phi.clone(),
                psi_fn: phi.clone(),
                z: z.clone(),
                w: z.clone(),
                phi_min,
                psi_min: phi_min,
            });
        }
        rows.push(IterRow {
            k,
            lambda: lam,
            beta: beta_k,
            s_cum: s_k,
            x: x.clone(),
            z: z.clone(),
            w: z.clone(),
            x_hat: x_hat.clone(),
            f_hat,
            f_x,
            f_w: f_x,
            psi_min: phi_min,
            c_cert,
            grad_dual_norm: g_norm,
            cert_residual,
            cum_residual,
            step_norm,
        });
        z_prev = z;
    }

    Ok(RunTrace {
        rows,
        aux: cfg.track_aux.then(|| AuxTrace {
            kind: cfg.model,
            sigma_f,
            beta_minus1: sched.beta(-1),
            start: geom.center.clone(),
            psi,
            steps: aux_steps,
        }),
        violations,
        variant: cfg.variant,
        model: cfg.model,
        schedule: cfg.schedule.clone(),
        sigma_f,
        sigma_f_bar: sigma_f,
        beta_minus1: sched.beta(-1),
    })
}

/// Method for structured problems (model builder plus constants).
pub fn run_structured(
    cfg: &RunConfig,
    problem: &StructuredProblem,
    geom: &ProxGeometry,
    set: &FeasibleSet,
) -> Result<RunTrace> {
    if !set.contains(&geom.center, MEMBERSHIP_TOL) {
        return Err(Error::InvalidParameter(
            "prox-center lies outside the feasible set".into(),
        ));
    }
    let sched = Schedule::generate(&cfg.schedule, cfg.iterations)?;
    let sigma_f = problem.sigma_f;
    let sigma_bar = problem.sigma_f_bar;
    let psi = problem.psi;
    let norm = geom.norm.kind;

    let k_max = cfg.iterations;
    let mut rows = Vec::with_capacity(k_max + 1);
    let mut violations = Vec::new();
    let mut aux_steps = Vec::new();

    let mut x = geom.center.clone();
    let mut x_hat: Vec<f64> = Vec::new();
    let mut z_prev = geom.center.clone();
    let mut phi = init_aux(sched.beta(-1), geom);
    let mut phi_min = 0.0;
    let mut c_cert = 0.0;
    let mut cum_lf = 0.0;

    for k in 0..=k_max {
        let ki = k as isize;
        let lam = sched.lambda(k);
        let beta_prev = sched.beta(ki - 1);
        let beta_k = sched.beta(ki);
        let s_prev = sched.s_cum(ki - 1);
        let s_k = sched.s_cum(ki);

        if k > 0 {
            x = match cfg.variant {
                Variant::Classical => z_prev.clone(),
                Variant::Modified => x_hat
                    .iter()
                    .zip(&z_prev)
                    .map(|(h, z)| (s_prev * h + lam * z) / s_k)
                    .collect(),
            };
        }

        let model = problem.model(geom, &x);
        let prev_phi_min = phi_min;
        match cfg.model {
            ModelKind::ExtendedMd => {
                phi = emd_step(
                    prev_phi_min,
                    &z_prev,
                    &model,
                    lam,
                    beta_prev,
                    beta_k,
                    s_prev,
                    sigma_f,
                    geom,
                )?;
            }
            ModelKind::DualAveraging | ModelKind::Hybrid => {
                phi = da_step(&phi, &model, lam, beta_prev, beta_k);
            }
        }
        let psi_aux = if cfg.model.is_coupled() {
            hybrid_step(
                prev_phi_min,
                &z_prev,
                &model,
                lam,
                beta_prev,
                beta_k,
                s_prev,
                sigma_f,
                geom,
            )?
        } else {
            phi.clone()
        };

        let z = phi.minimize(geom, set, psi)?;
        phi_min = phi.eval(geom, psi, &z)?;
        let w = if cfg.model.is_coupled() {
            psi_aux.minimize(geom, set, psi)?
        } else {
            z.clone()
        };
        let psi_min = psi_aux.eval(geom, psi, &w)?;

        // averaged output folds in w_{k}; at k = 0 it starts at w_0
        if k == 0 {
            x_hat = w.clone();
        } else {
            x_hat = x_hat
                .iter()
                .zip(&w)
                .map(|(h, wi)| (s_prev * h + lam * wi) / s_k)
                .collect();
        }

        let step_norm = {
            let d: Vec<f64> = w.iter().zip(&z_prev).map(|(a, b)| a - b).collect();
            norm.eval(&d)
        };
        let l_here = problem.lipschitz_at(&x);
        let inc = match cfg.variant {
            Variant::Classical => {
                let diff: Vec<f64> = w.iter().zip(&x).map(|(a, b)| a - b).collect();
                let dist2 = norm.eval(&diff).powi(2);
                lam * (0.5 * l_here
                    - 0.5 * geom.sigma_d * (sigma_bar + (beta_prev + s_prev * sigma_f) / lam))
                    * dist2
                    + lam * problem.delta_at(norm, &x, &w)
            }
            Variant::Modified => {
                let diff: Vec<f64> = x_hat.iter().zip(&x).map(|(a, b)| a - b).collect();
                let dist2 = norm.eval(&diff).powi(2);
                s_k * (0.5 * l_here
                    - 0.5
                        * geom.sigma_d
                        * (sigma_bar + s_k * (beta_prev + s_prev * sigma_f) / (lam * lam)))
                    * dist2
                    + s_k * problem.delta_at(norm, &x, &x_hat)
            }
        };
        c_cert += cfg.c_scale * inc;

        let f_hat = problem.value(&x_hat);
        let f_x = problem.value(&x);
        let f_w = problem.value(&w);
        cum_lf += lam * f_w;

        let mut ctx = CheckCtx {
            strict: cfg.strict,
            tol: cfg.rk_tol,
            violations: &mut violations,
        };
        let cert_residual =
            ctx.upper(k, "certificate relation", s_k * f_hat, psi_min + c_cert)?;
        let cum_residual = match cfg.variant {
            Variant::Classical => Some(ctx.upper(
                k,
                "cumulative inner-point relation",
                cum_lf,
                psi_min + c_cert,
            )?),
            Variant::Modified => None,
        };

        if cfg.track_aux {
            aux_steps.push(AuxStep {
                lambda: lam,
                beta: beta_k,
                s_cum: s_k,
                model: model.clone(),
                phi: phi.clone(),
                psi_fn: psi_aux.clone(),
                z: z.clone(),
                w: w.clone(),
                phi_min,
                psi_min,
            });
        }
        rows.push(IterRow {
            k,
            lambda: lam,
            beta: beta_k,
            s_cum: s_k,
            x: x.clone(),
            z: z.clone(),
            w: w.clone(),
            x_hat: x_hat.clone(),
            f_hat,
            f_x,
            f_w,
            psi_min,
            c_cert,
            grad_dual_norm: 0.0,
            cert_residual,
            cum_residual,
            step_norm,
        });
        z_prev = z;
    }

    Ok(RunTrace {
        rows,
        aux: cfg.track_aux.then(|| AuxTrace {
            kind: cfg.model,
            sigma_f,
            beta_minus1: sched.beta(-1),
            start: geom.center.clone(),
            psi,
            steps: aux_steps,
        }),
        violations,
        variant: cfg.variant,
        model: cfg.model,
        schedule: cfg.schedule.clone(),
        sigma_f,
        sigma_f_bar: sigma_bar,
        beta_minus1: sched.beta(-1),
    })
}

/// Conditional-gradient specialization: the structured method with zero
/// convexity parameters and zero scalings, so every subproblem is a linear
/// minimization over the (necessarily bounded) set.
pub fn run_cgm(
    cfg: &RunConfig,
    problem: &StructuredProblem,
    geom: &ProxGeometry,
    set: &FeasibleSet,
) -> Result<RunTrace> {
    if problem.sigma_f != 0.0 || problem.sigma_f_bar != 0.0 {
        return Err(Error::InvalidParameter(
            "conditional gradient mode needs sigma_f = sigma_f_bar = 0".into(),
        ));
    }
    if !set.is_bounded() {
        return Err(Error::Unbounded);
    }
    let sched = Schedule::generate(&cfg.schedule, cfg.iterations)?;
    for k in -1..=(cfg.iterations as isize) {
        if sched.beta(k) != 0.0 {
            return Err(Error::InvalidParameter(
                "conditional gradient mode needs beta identically zero".into(),
            ));
        }
    }
    run_structured(cfg, problem, geom, set)
}

/// One row of a classical Frank-Wolfe run.
#[derive(Clone, Debug)]
pub struct FwRow {
    pub k: usize,
    pub x: Vec<f64>,
    pub f_x: f64,
    /// Certificate-style upper bound on `f(x_k) - f*`.
    pub bound: f64,
    /// Certified lower value `min_Q m_f(x_k; .)`; for a linear objective this
    /// already equals `f*` after the first oracle call.
    pub model_min: f64,
}

/// The classical Frank-Wolfe iteration `x_{k+1} = (1 - tau_k) x_k + tau_k v_k`
/// with `v_k` from the linear minimization oracle at `grad f(x_k)` and
/// `tau_k = lambda_{k+1} / S_{k+1}` for the averaging weights
/// `lambda_k = (k+1)/2`. Tracks the certificate bound built from the initial
/// model gap, the curvature term, and the accumulated slack.
pub fn run_classical_fw(
    problem: &StructuredProblem,
    geom: &ProxGeometry,
    set: &FeasibleSet,
    k_max: usize,
) -> Result<Vec<FwRow>> {
    if problem.sigma_f != 0.0 {
        return Err(Error::InvalidParameter(
            "classical Frank-Wolfe needs an affine model (sigma_f = 0)".into(),
        ));
    }
    if !set.is_bounded() {
        return Err(Error::Unbounded);
    }
    let lambda = |k: usize| (k as f64 + 1.0) / 2.0;
    let s_cum = |k: usize| (k as f64 + 1.0) * (k as f64 + 2.0) / 4.0;
    let norm = geom.norm.kind;
    let diam = set.diameter(norm).ok_or(Error::Unbounded)?;

    let mut x = geom.center.clone();
    let mut rows = Vec::with_capacity(k_max + 1);
    let mut head_gap = 0.0;
    let mut curvature_sum = 0.0;
    let mut slack_sum = 0.0;
    let mut x_prev = x.clone();

    for k in 0..=k_max {
        let model = problem.model(geom, &x);
        let v = crate::geometry::lmo(set, &model.s)?;
        let model_min = model.eval(geom, problem.psi, &v)?;
        if k == 0 {
            head_gap = lambda(0) * (problem.value(&x) - model_min);
        } else {
            let lam = lambda(k);
            curvature_sum +=
                problem.lipschitz_at(&x_prev) * lam * lam / s_cum(k) * 0.5 * diam * diam;
            slack_sum += s_cum(k) * problem.delta_at(norm, &x_prev, &x);
        }
        let bound = (head_gap + curvature_sum + slack_sum) / s_cum(k);
        rows.push(FwRow {
            k,
            x: x.clone(),
            f_x: problem.value(&x),
            bound,
            model_min,
        });
        let tau = lambda(k + 1) / s_cum(k + 1);
        x_prev = x.clone();
        for i in 0..x.len() {
            x[i] = (1.0 - tau) * x[i] + tau * v[i];
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::dot;
    use crate::instances::{gen_pwl_strong, gen_quadratic};
    use crate::rng::SplitMix64;
    use std::sync::Arc;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn optimum_at_prox_center_stays_fixed() {
        // f = sigma * d with zero gradient at the center: every iterate stays put
        let sigma = 0.8;
        let geom = ProxGeometry::euclidean(vec![0.0, 0.0]);
        let set = FeasibleSet::Unconstrained { dim: 2 };
        let p = NonSmoothProblem {
            objective: Arc::new(move |x: &[f64]| 0.5 * sigma * dot(x, x)),
            subgradient: Arc::new(move |x: &[f64]| x.iter().map(|v| sigma * v).collect()),
            sigma_f: sigma,
            subgrad_bound: None,
        };
        let cfg = RunConfig::new(
            Variant::Classical,
            ModelKind::ExtendedMd,
            ScheduleKind::SimpleAveraging { beta: 0.0 },
            50,
        );
        let trace = run_nonsmooth(&cfg, &p, &geom, &set).unwrap();
        for row in &trace.rows {
            close(row.f_hat, 0.0, 1e-14);
            assert!(crate::geometry::NormKind::L2.eval(&row.z) < 1e-14);
        }
    }

    #[test]
    fn degenerate_start_is_rejected() {
        let geom = ProxGeometry::euclidean(vec![0.0]);
        let set = FeasibleSet::Unconstrained { dim: 1 };
        let p = NonSmoothProblem {
            objective: Arc::new(|x: &[f64]| x[0].abs()),
            subgradient: Arc::new(|x: &[f64]| vec![x[0].signum()]),
            sigma_f: 0.0,
            subgrad_bound: Some(1.0),
        };
        let cfg = RunConfig::new(
            Variant::Classical,
            ModelKind::ExtendedMd,
            ScheduleKind::SimpleAveraging { beta: 0.0 },
            5,
        );
        assert!(matches!(
            run_nonsmooth(&cfg, &p, &geom, &set),
            Err(Error::DegenerateC0)
        ));
    }

    #[test]
    fn certificate_relation_holds_on_pwl_run() {
        let mut rng = SplitMix64::new(12);
        let inst = gen_pwl_strong(&mut rng, 4, 8, 1.0, vec![0.0; 4]);
        let p = inst.nonsmooth_problem(None);
        let geom = ProxGeometry::euclidean(vec![0.5; 4]);
        let set = FeasibleSet::Unconstrained { dim: 4 };
        for variant in [Variant::Classical, Variant::Modified] {
            for model in [ModelKind::ExtendedMd, ModelKind::DualAveraging] {
                let cfg = RunConfig::new(
                    variant,
                    model,
                    ScheduleKind::SimpleAveraging { beta: 0.0 },
                    100,
                );
                let trace = run_nonsmooth(&cfg, &p, &geom, &set).unwrap();
                assert!(trace.worst_cert_residual() <= 1e-8);
                assert!(trace.violations.is_empty());
            }
        }
    }

    #[test]
    fn structured_fixed_point_at_optimum() {
        // prox-center at the constructed optimum: gap stays zero
        let mut rng = SplitMix64::new(7);
        let xstar = vec![0.0; 3];
        let inst = gen_quadratic(&mut rng, 3, 5.0, 1.0, xstar.clone());
        let geom = ProxGeometry::euclidean(xstar);
        let set = FeasibleSet::Unconstrained { dim: 3 };
        let p = inst.smooth_problem(&geom, 1.0).unwrap();
        let cfg = RunConfig::new(
            Variant::Modified,
            ModelKind::ExtendedMd,
            ScheduleKind::ModifiedStructured {
                l: 5.0,
                sigma_d: 1.0,
                sigma_f: 1.0,
                sigma_f_bar: 1.0,
            },
            30,
        );
        let trace = run_structured(&cfg, &p, &geom, &set).unwrap();
        for row in &trace.rows {
            close(row.f_hat - inst.f_star, 0.0, 1e-10);
        }
    }

    #[test]
    fn structured_certificate_vanishes_for_matched_schedules() {
        // classical: C_k = S_k * delta; modified: C_k = sum S_i delta; with
        // delta = 0 both certificates stay identically zero
        let mut rng = SplitMix64::new(8);
        let inst = gen_quadratic(&mut rng, 6, 10.0, 1.0, vec![0.4; 6]);
        let geom = ProxGeometry::euclidean(vec![0.0; 6]);
        let set = FeasibleSet::Unconstrained { dim: 6 };
        let p = inst.smooth_problem(&geom, 1.0).unwrap();
        for (variant, kind) in [
            (
                Variant::Classical,
                ScheduleKind::ClassicalStructured {
                    l: 10.0,
                    sigma_d: 1.0,
                    sigma_f: 1.0,
                    sigma_f_bar: 1.0,
                },
            ),
            (
                Variant::Modified,
                ScheduleKind::ModifiedStructured {
                    l: 10.0,
                    sigma_d: 1.0,
                    sigma_f: 1.0,
                    sigma_f_bar: 1.0,
                },
            ),
        ] {
            let cfg = RunConfig::new(variant, ModelKind::ExtendedMd, kind, 60);
            let trace = run_structured(&cfg, &p, &geom, &set).unwrap();
            for row in &trace.rows {
                assert!(
                    row.c_cert.abs() <= 1e-8 * row.s_cum.max(1.0),
                    "k={}, C={}",
                    row.k,
                    row.c_cert
                );
            }
        }
    }

    #[test]
    fn cgm_requires_zero_constants_and_bounded_set() {
        let mut rng = SplitMix64::new(9);
        let inst = gen_quadratic(&mut rng, 3, 2.0, 0.0, vec![0.2, 0.3, 0.5]);
        let geom = ProxGeometry::euclidean(vec![1.0 / 3.0; 3]);
        let p = inst.smooth_problem(&geom, 0.0).unwrap();
        let cfg = RunConfig::new(
            Variant::Modified,
            ModelKind::ExtendedMd,
            ScheduleKind::SimpleAveraging { beta: 0.0 },
            10,
        );
        let unbounded = FeasibleSet::Unconstrained { dim: 3 };
        assert!(matches!(
            run_cgm(&cfg, &p, &geom, &unbounded),
            Err(Error::Unbounded)
        ));
        let simplex = FeasibleSet::Simplex { dim: 3 };
        let trace = run_cgm(&cfg, &p, &geom, &simplex).unwrap();
        assert!(trace.worst_cert_residual() <= 1e-8);
    }

    #[test]
    fn classical_fw_linear_objective_converges_after_first_step() {
        // linear objective: the first oracle call already lands on the optimum
        let geom = ProxGeometry::euclidean(vec![1.0 / 3.0; 3]);
        let set = FeasibleSet::Simplex { dim: 3 };
        let cost = vec![1.0, -2.0, 0.0];
        let cost_f = cost.clone();
        let cost_g = cost.clone();
        let f: crate::problems::ValueFn = Arc::new(move |x: &[f64]| dot(&cost_f, x));
        let g: crate::problems::VectorFn = Arc::new(move |_: &[f64]| cost_g.clone());
        let p = crate::problems::make_smooth_adapter(&geom, f, g, 1.0, 0.0).unwrap();
        let rows = run_classical_fw(&p, &geom, &set, 20).unwrap();
        // tau_0 = lambda_1 / S_1 = 2/3, so x_1 = 1/3 x_0 + 2/3 e_2
        close(rows[1].x[1], 1.0 / 9.0 + 2.0 / 3.0, 1e-12);
        // the first oracle call already certifies the optimal value
        let f_star = -2.0;
        close(rows[0].model_min, f_star, 1e-14);
        for row in &rows[8..] {
            assert!(row.f_x - f_star <= row.bound + 1e-12);
        }
    }

    #[test]
    fn classical_fw_bound_dominates_on_smooth_quadratic() {
        let mut rng = SplitMix64::new(14);
        let dim = 6;
        let interior = vec![1.0 / dim as f64; dim];
        let inst = gen_quadratic(&mut rng, dim, 3.0, 0.0, interior.clone());
        let geom = ProxGeometry::euclidean(interior);
        let set = FeasibleSet::Simplex { dim };
        let p = inst.smooth_problem(&geom, 0.0).unwrap();
        let rows = run_classical_fw(&p, &geom, &set, 300).unwrap();
        for row in &rows {
            let gap = row.f_x - inst.f_star;
            assert!(
                gap <= row.bound + 1e-9 * row.bound.abs().max(1.0),
                "k={}: {gap} vs {}",
                row.k,
                row.bound
            );
            assert!(row.model_min <= inst.f_star + 1e-10);
        }
    }

    #[test]
    fn fault_injected_certificate_trips_the_check() {
        let mut rng = SplitMix64::new(10);
        let inst = gen_pwl_strong(&mut rng, 4, 6, 1.0, vec![0.3; 4]);
        let p = inst.nonsmooth_problem(None);
        let geom = ProxGeometry::euclidean(vec![0.0; 4]);
        let set = FeasibleSet::Unconstrained { dim: 4 };
        let mut cfg = RunConfig::new(
            Variant::Classical,
            ModelKind::ExtendedMd,
            ScheduleKind::SimpleAveraging { beta: 0.0 },
            20,
        );
        cfg.c_scale = 0.0;
        assert!(matches!(
            run_nonsmooth(&cfg, &p, &geom, &set),
            Err(Error::InvariantViolated { .. })
        ));
        cfg.strict = false;
        let trace = run_nonsmooth(&cfg, &p, &geom, &set).unwrap();
        assert!(!trace.violations.is_empty());
    }

    #[test]
    fn deterministic_reruns_are_bit_identical() {
        let mut rng = SplitMix64::new(11);
        let inst = gen_quadratic(&mut rng, 5, 8.0, 0.5, vec![0.1; 5]);
        let geom = ProxGeometry::euclidean(vec![0.0; 5]);
        let set = FeasibleSet::symmetric_box(5, 2.0);
        let p = inst.smooth_problem(&geom, 0.5).unwrap();
        let cfg = RunConfig::new(
            Variant::Modified,
            ModelKind::Hybrid,
            ScheduleKind::ModifiedStructured {
                l: 8.0,
                sigma_d: 1.0,
                sigma_f: 0.5,
                sigma_f_bar: 0.5,
            },
            40,
        );
        let a = run_structured(&cfg, &p, &geom, &set).unwrap();
        let b = run_structured(&cfg, &p, &geom, &set).unwrap();
        for (ra, rb) in a.rows.iter().zip(&b.rows) {
            assert_eq!(ra.f_hat.to_bits(), rb.f_hat.to_bits());
            assert_eq!(ra.c_cert.to_bits(), rb.c_cert.to_bits());
            assert_eq!(ra.psi_min.to_bits(), rb.psi_min.to_bits());
        }
    }
}
