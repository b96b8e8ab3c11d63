//! Auxiliary-function state machine.
//!
//! The methods minimize an *auxiliary function* at every iteration. Three
//! recursive constructions are supported:
//!
//! * extended mirror-descent: collapse the previous auxiliary function to its
//!   minimum value and rebuild around the new model,
//!   `phi_{k+1}(x) = phi_k(z_k) + lambda_{k+1} m_{k+1}(x) + beta_{k+1} d(x)
//!    - beta_k l_d(z_k; x) + S_k sigma_f xi(z_k, x)`;
//! * dual averaging: accumulate weighted models,
//!   `phi_{k+1}(x) = phi_k(x) + lambda_{k+1} m_{k+1}(x) + (beta_{k+1} - beta_k) d(x)`,
//!   so after `k` steps `phi_k = sum_i lambda_i m_i + beta_k d`;
//! * hybrid: a dual-averaging sequence `phi_k` coupled with a second sequence
//!   `psi_{k+1}` built by the mirror-descent collapse of `phi_k`.
//!
//! Because every in-scope model is affine + multiple-of-`d` (+ `Psi`), each
//! update stays exactly representable in canonical form
//! `<s, x> + c + beta d(x) + w Psi(x)`; the updates below just push the
//! `l_d` / `xi` expansions into those four fields. [`check_properties`]
//! re-verifies the structural conditions that the convergence analysis needs
//! (recursive minorization, the aggregate model bound, pair domination, and
//! strong-convexity growth at the minimizer) numerically on probe points.

use crate::error::Result;
use crate::geometry::{dot, FeasibleSet, ProxGeometry, PsiKind};
use crate::problems::CanonicalModel;

/// An auxiliary function held exactly as `<s, x> + c + beta d(x) + w Psi(x)`.
#[derive(Clone, Debug)]
pub struct CanonicalAux {
    pub s: Vec<f64>,
    pub c: f64,
    pub beta: f64,
    pub w: f64,
}

impl CanonicalAux {
    pub fn eval(&self, geom: &ProxGeometry, psi: PsiKind, x: &[f64]) -> Result<f64> {
        let mut v = dot(&self.s, x) + self.c;
        if self.beta != 0.0 {
            v += self.beta * geom.prox_value(x)?;
        }
        if self.w != 0.0 {
            v += self.w * psi.eval(x);
        }
        Ok(v)
    }

    /// Minimize over the feasible set with the closed-form solvers.
    pub fn minimize(
        &self,
        geom: &ProxGeometry,
        set: &FeasibleSet,
        psi: PsiKind,
    ) -> Result<Vec<f64>> {
        crate::geometry::solve_canonical(geom, set, psi, &self.s, self.beta, self.w)
    }
}

/// Which auxiliary-function construction a run uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    ExtendedMd,
    DualAveraging,
    Hybrid,
}

impl ModelKind {
    /// Hybrid couples a second sequence; the other two keep `psi_k == phi_k`.
    pub fn is_coupled(self) -> bool {
        matches!(self, ModelKind::Hybrid)
    }
}

/// The initial auxiliary function `beta_{-1} d(x)`: zero slope, zero offset,
/// minimized at the prox-center with value 0 (also when `beta_{-1} = 0`, by
/// the convention `z_{-1} = x0`).
pub fn init_aux(beta_minus1: f64, geom: &ProxGeometry) -> CanonicalAux {
    CanonicalAux {
        s: vec![0.0; geom.dim()],
        c: 0.0,
        beta: beta_minus1,
        w: 0.0,
    }
}

/// Extended mirror-descent update. Only the minimum value `phi_min = phi_k(z_k)`
/// and the minimizer `z` of the previous function enter the new one.
#[allow(clippy::too_many_arguments)]
pub fn emd_step(
    phi_min: f64,
    z: &[f64],
    model: &CanonicalModel,
    lambda_next: f64,
    beta_k: f64,
    beta_next: f64,
    s_cum_k: f64,
    sigma_f: f64,
    geom: &ProxGeometry,
) -> Result<CanonicalAux> {
    let grad_z = geom.prox_grad(z)?;
    let d_z = geom.prox_value(z)?;
    // -(beta_k + S_k sigma_f) multiplies the linearization l_d(z; .);
    // +S_k sigma_f multiplies d(.) from xi(z, .) = d(.) - l_d(z; .)
    let shrink = beta_k + s_cum_k * sigma_f;
    let mut s = Vec::with_capacity(z.len());
    for i in 0..z.len() {
        s.push(lambda_next * model.s[i] - shrink * grad_z[i]);
    }
    let c = phi_min + lambda_next * model.c - shrink * (d_z - dot(&grad_z, z));
    Ok(CanonicalAux {
        s,
        c,
        beta: beta_next + lambda_next * model.sigma_coeff + s_cum_k * sigma_f,
        w: lambda_next * model.psi_coeff,
    })
}

/// Dual-averaging update: add the weighted model and re-scale the `d` term.
pub fn da_step(
    aux: &CanonicalAux,
    model: &CanonicalModel,
    lambda_next: f64,
    beta_k: f64,
    beta_next: f64,
) -> CanonicalAux {
    let mut s = aux.s.clone();
    for i in 0..s.len() {
        s[i] += lambda_next * model.s[i];
    }
    CanonicalAux {
        s,
        c: aux.c + lambda_next * model.c,
        beta: aux.beta + lambda_next * model.sigma_coeff + (beta_next - beta_k),
        w: aux.w + lambda_next * model.psi_coeff,
    }
}

/// Hybrid second-sequence update: the mirror-descent collapse of the
/// dual-averaging function `phi_k`, producing `psi_{k+1}`.
#[allow(clippy::too_many_arguments)]
pub fn hybrid_step(
    phi_min: f64,
    z: &[f64],
    model: &CanonicalModel,
    lambda_next: f64,
    beta_k: f64,
    beta_next: f64,
    s_cum_k: f64,
    sigma_f: f64,
    geom: &ProxGeometry,
) -> Result<CanonicalAux> {
    emd_step(
        phi_min, z, model, lambda_next, beta_k, beta_next, s_cum_k, sigma_f, geom,
    )
}

/// One recorded iteration of an auxiliary-function trace.
#[derive(Clone, Debug)]
pub struct AuxStep {
    pub lambda: f64,
    /// `beta_k` (the previous scaling is in the preceding step or `beta_minus1`).
    pub beta: f64,
    /// `S_k = sum_{i<=k} lambda_i`.
    pub s_cum: f64,
    /// The model `m_f(x_k; .)` consumed at this step.
    pub model: CanonicalModel,
    pub phi: CanonicalAux,
    /// Equals `phi` unless the trace is hybrid.
    pub psi_fn: CanonicalAux,
    pub z: Vec<f64>,
    pub w: Vec<f64>,
    pub phi_min: f64,
    pub psi_min: f64,
}

/// A full retained trace, enough to re-check every structural condition.
#[derive(Clone, Debug)]
pub struct AuxTrace {
    pub kind: ModelKind,
    pub sigma_f: f64,
    pub beta_minus1: f64,
    /// `x0 = z_{-1} = w_{-1}`.
    pub start: Vec<f64>,
    pub psi: PsiKind,
    pub steps: Vec<AuxStep>,
}

/// Worst signed scaled residuals over all iterations and probes; a condition
/// passes when its residual is not materially negative.
#[derive(Clone, Copy, Debug, Default)]
pub struct PropertyReport {
    /// Recursive minorization: `next(x) - [collapse expression](x)`.
    pub worst_minorization: f64,
    /// Aggregate bound: `[weighted models + beta l_d - S sigma_f xi](x) - min`.
    pub worst_aggregate: f64,
    /// Pair domination `phi_k(x) - psi_k(x)` (coupled traces only).
    pub worst_domination: f64,
    /// Growth at the minimizer: `phi_k(x) - phi_k(z_k) - (beta_k + S_k sigma_f) xi(z_k, x)`.
    pub worst_growth: f64,
    pub checked_probes: usize,
}

impl PropertyReport {
    pub fn worst_overall(&self) -> f64 {
        self.worst_minorization
            .min(self.worst_aggregate)
            .min(self.worst_domination)
            .min(self.worst_growth)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.worst_overall() >= -tol
    }
}

fn scaled(lhs: f64, rhs: f64) -> f64 {
    (lhs - rhs) / 1.0_f64.max(lhs.abs()).max(rhs.abs())
}

/// Numerically re-verify the structural conditions of a retained trace at the
/// given probe points. All conditions are for-all-x statements; probing is the
/// desk-scale surrogate (for the aggregate bound, the minimum over the set is
/// below the value at any probe, so probing is sufficient, not just sampled).
pub fn check_properties(
    trace: &AuxTrace,
    geom: &ProxGeometry,
    probes: &[Vec<f64>],
) -> Result<PropertyReport> {
    let mut report = PropertyReport {
        worst_minorization: f64::INFINITY,
        worst_aggregate: f64::INFINITY,
        worst_domination: f64::INFINITY,
        worst_growth: f64::INFINITY,
        checked_probes: probes.len() * trace.steps.len(),
    };
    let psi = trace.psi;
    for (k, step) in trace.steps.iter().enumerate() {
        let (prev_min, prev_z, prev_beta, prev_s_cum) = if k == 0 {
            (0.0, trace.start.clone(), trace.beta_minus1, 0.0)
        } else {
            let p = &trace.steps[k - 1];
            (p.phi_min, p.z.clone(), p.beta, p.s_cum)
        };
        for x in probes {
            // recursive minorization: the new second-sequence function dominates
            // the collapsed construction at x
            let lhs = step.psi_fn.eval(geom, psi, x)?;
            let collapse = prev_min
                + step.lambda * step.model.eval(geom, psi, x)?
                + step.beta * geom.prox_value(x)?
                - prev_beta * geom.linearize_d(&prev_z, x)?
                + prev_s_cum * trace.sigma_f * geom.bregman(&prev_z, x)?;
            report.worst_minorization = report.worst_minorization.min(scaled(lhs, collapse));

            // aggregate model bound at the probe: psi_k(w_k) <= sum_i lambda_i m_i(x)
            //   + beta_k l_d(z_k; x) - S_k sigma_f xi(z_k, x)
            let mut agg = step.beta * geom.linearize_d(&step.z, x)?
                - step.s_cum * trace.sigma_f * geom.bregman(&step.z, x)?;
            for prior in &trace.steps[..=k] {
                agg += prior.lambda * prior.model.eval(geom, psi, x)?;
            }
            report.worst_aggregate = report.worst_aggregate.min(scaled(agg, step.psi_min));

            // pair domination for coupled traces
            if trace.kind.is_coupled() {
                let phi_v = step.phi.eval(geom, psi, x)?;
                let psi_v = step.psi_fn.eval(geom, psi, x)?;
                report.worst_domination = report.worst_domination.min(scaled(phi_v, psi_v));
            }

            // growth at the minimizer
            let phi_x = step.phi.eval(geom, psi, x)?;
            let grow = step.phi_min
                + (step.beta + step.s_cum * trace.sigma_f) * geom.bregman(&step.z, x)?;
            report.worst_growth = report.worst_growth.min(scaled(phi_x, grow));
        }
    }
    if !trace.kind.is_coupled() {
        report.worst_domination = 0.0;
    }
    Ok(report)
}
