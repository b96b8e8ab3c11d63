//! Gap-bound tables derived from a retained run.
//!
//! [`certificate_bounds`] evaluates, per iteration, the general certificate
//! bound
//!
//! ```text
//! f(x_hat_k) - f(x*) + sigma_f xi(z_k, x*) <= (beta_k l_d(z_k; x*) + C_k)/S_k
//! ```
//!
//! together with the distance bound it implies when `sigma_f > 0`. The other
//! functions compute the closed-form rates of the individual schedules;
//! each one only loosens the general bound, so tables can be checked for
//! domination against observed gaps with [`check_bound_table`].

use crate::error::{Error, Result};
use crate::geometry::ProxGeometry;
use super::{RunTrace, Variant};

/// Reference optimum for bound evaluation.
#[derive(Clone, Debug)]
pub struct Reference {
    pub x_star: Vec<f64>,
    pub f_star: f64,
}

/// One row of the certificate bound table.
#[derive(Clone, Debug)]
pub struct BoundRow {
    pub k: usize,
    /// `f(x_hat_k) - f*`.
    pub gap: f64,
    /// `sigma_f * xi(z_k, x*)`.
    pub strong_term: f64,
    /// `(beta_k l_d(z_k; x*) + C_k) / S_k`.
    pub general_bound: f64,
    /// Schedule-specific closed-form bound, when one was requested.
    pub closed_form: Option<f64>,
    /// `(beta_k l_d + C_k)/(sigma_f sigma_d S_k)`; only when `sigma_f > 0`.
    pub distance_bound: Option<f64>,
    /// `min(||x_hat_k - x*||^2, ||z_k - x*||^2)` under the geometry norm.
    pub min_dist_sq: f64,
}

/// Evaluate the general certificate bound along a run. `closed_form`, when
/// given, must hold one value per iteration (use infinity for rows where a
/// rate does not apply).
pub fn certificate_bounds(
    trace: &RunTrace,
    geom: &ProxGeometry,
    reference: &Reference,
    closed_form: Option<&[f64]>,
) -> Result<Vec<BoundRow>> {
    if let Some(cf) = closed_form {
        if cf.len() != trace.rows.len() {
            return Err(Error::InvalidParameter(
                "closed-form table length does not match the trace".into(),
            ));
        }
    }
    let xs = &reference.x_star;
    let norm = geom.norm.kind;
    let mut out = Vec::with_capacity(trace.rows.len());
    for row in &trace.rows {
        let l_d = geom.linearize_d(&row.z, xs)?;
        let xi = geom.bregman(&row.z, xs)?;
        let general = (row.beta * l_d + row.c_cert) / row.s_cum;
        let dist = |p: &[f64]| {
            let d: Vec<f64> = p.iter().zip(xs).map(|(a, b)| a - b).collect();
            norm.eval(&d).powi(2)
        };
        out.push(BoundRow {
            k: row.k,
            gap: row.f_hat - reference.f_star,
            strong_term: trace.sigma_f * xi,
            general_bound: general,
            closed_form: closed_form.map(|cf| cf[row.k]),
            distance_bound: (trace.sigma_f > 0.0)
                .then(|| general / (trace.sigma_f * geom.sigma_d)),
            min_dist_sq: dist(&row.x_hat).min(dist(&row.z)),
        });
    }
    Ok(out)
}

/// Worst scale-relative violations of a bound table: returns
/// `(worst general, worst closed-form, worst distance)`, each the max of
/// `lhs - rhs` over rows scaled by `max(1, |lhs|, |rhs|)`. Values at or below
/// the working tolerance mean the table dominates the observations.
pub fn check_bound_table(rows: &[BoundRow]) -> (f64, f64, f64) {
    let mut general: f64 = f64::NEG_INFINITY;
    let mut closed: f64 = f64::NEG_INFINITY;
    let mut distance: f64 = f64::NEG_INFINITY;
    let scaled = |lhs: f64, rhs: f64| (lhs - rhs) / 1.0_f64.max(lhs.abs()).max(rhs.abs());
    for row in rows {
        let lhs = row.gap + row.strong_term;
        general = general.max(scaled(lhs, row.general_bound));
        if let Some(cf) = row.closed_form {
            if cf.is_finite() {
                closed = closed.max(scaled(lhs, cf));
            }
        }
        if let Some(db) = row.distance_bound {
            distance = distance.max(scaled(row.min_dist_sq, db));
        }
    }
    (general, closed, distance)
}

/// Closed-form rates for the simple-averaging schedule on strongly convex
/// non-smooth problems. `m_known` overrides the running max of observed
/// subgradient norms when an a priori bound is configured.
pub fn nonsmooth_simple_bounds(
    trace: &RunTrace,
    sigma_d: f64,
    m_known: Option<f64>,
) -> Result<Vec<f64>> {
    let sigma_f = trace.sigma_f;
    if sigma_f <= 0.0 {
        return Err(Error::InvalidParameter(
            "the simple-averaging rate needs sigma_f > 0".into(),
        ));
    }
    let mut running_max: f64 = 0.0;
    let mut out = Vec::with_capacity(trace.rows.len());
    for row in &trace.rows {
        running_max = running_max.max(row.grad_dual_norm);
        let m = m_known.unwrap_or(running_max);
        let kf = row.k as f64;
        let v = match trace.variant {
            Variant::Classical => 2.0 * m * m / (sigma_d * sigma_f * (kf + 4.0)),
            Variant::Modified => {
                if row.k == 0 {
                    f64::INFINITY
                } else {
                    2.0 * m * m / (sigma_d * sigma_f) * (kf + kf.ln() + 1.5)
                        / ((kf + 1.0) * (kf + 2.0))
                }
            }
        };
        out.push(v);
    }
    Ok(out)
}

/// Closed-form rates for the constant-scaling structured schedules with
/// constant slack `delta`: geometric-or-harmonic decay for the classical
/// variant, accelerated decay for the modified one.
#[allow(clippy::too_many_arguments)]
pub fn structured_constant_bounds(
    trace: &RunTrace,
    geom: &ProxGeometry,
    reference: &Reference,
    l: f64,
    sigma_f: f64,
    sigma_f_bar: f64,
    delta: f64,
) -> Result<Vec<f64>> {
    let sigma_d = geom.sigma_d;
    let beta = l - sigma_f_bar * sigma_d;
    if beta <= 0.0 {
        return Err(Error::DegenerateBeta(beta));
    }
    let beta = beta / sigma_d;
    let r = sigma_f * sigma_d / (l - sigma_f_bar * sigma_d);
    let mut out = Vec::with_capacity(trace.rows.len());
    for row in &trace.rows {
        let l_d = geom.linearize_d(&row.z, &reference.x_star)?;
        let kf = row.k as f64;
        let v = match trace.variant {
            Variant::Classical => {
                let geo = (1.0 - sigma_f * sigma_d / (l - sigma_f_bar * sigma_d + sigma_f * sigma_d))
                    .powi(row.k as i32);
                beta * l_d * geo.min(1.0 / (kf + 1.0)) + delta
            }
            Variant::Modified => {
                // geometric factor computed in log space to dodge underflow
                let geo = (-2.0 * kf * (1.0 + 0.5 * r.sqrt()).ln()).exp();
                let factor = (4.0 / (kf + 2.0).powi(2)).min(geo);
                let slack_weight = if r > 0.0 {
                    (kf / 3.0 + (kf + 2.0).ln() / 6.0 + 1.0).min(1.0 + (1.0 / r).sqrt())
                } else {
                    kf / 3.0 + (kf + 2.0).ln() / 6.0 + 1.0
                };
                beta * l_d * factor + slack_weight * delta
            }
        };
        out.push(v);
    }
    Ok(out)
}

/// Conditional-gradient rate for smooth objectives with constant slack:
/// `2 L max_i ||w_i - z_{i-1}||^2 / (k+4) + (k+3)/3 delta`.
pub fn cgm_smooth_bounds(trace: &RunTrace, l: f64, delta: f64) -> Vec<f64> {
    let mut max_step: f64 = 0.0;
    trace
        .rows
        .iter()
        .map(|row| {
            max_step = max_step.max(row.step_norm);
            let kf = row.k as f64;
            2.0 * l * max_step * max_step / (kf + 4.0) + (kf + 3.0) / 3.0 * delta
        })
        .collect()
}

/// Conditional-gradient rate for Holder-smooth objectives over a set of the
/// given diameter.
pub fn cgm_weak_bounds(k_max: usize, l: f64, m: f64, rho: f64, diam: f64) -> Vec<f64> {
    (0..=k_max)
        .map(|k| {
            let kf = k as f64;
            2.0 * l * diam * diam / (kf + 4.0)
                + 2.0_f64.powf(rho + 1.0) * m * diam.powf(rho)
                    / (rho * (3.0 - rho) * (kf + 2.0).powf(rho - 1.0))
        })
        .collect()
}

/// Which closed-form rate accompanies the curvature-margin bound.
#[derive(Clone, Copy, Debug)]
pub enum WeakClosedForm {
    /// Growing-scaling schedule for the non-strongly-convex case.
    NonStrong { gamma: f64 },
    /// Power schedule for the strongly convex case.
    Strong { p: f64, beta: f64 },
}

#[derive(Clone, Debug)]
pub struct WeakBoundRow {
    pub k: usize,
    pub gap: f64,
    pub strong_term: f64,
    /// Curvature-margin bound computed from the actual run quantities.
    pub margin_bound: f64,
    /// Schedule-specific closed-form rate.
    pub closed_form: f64,
}

/// Bound table for Holder-slack runs of the modified method.
///
/// At every iteration the curvature margin
/// `alpha_i = L - sigma_d (sigma_f_bar + S_i (beta_{i-1} + S_{i-1} sigma_f)/lambda_i^2)`
/// must be negative; the margin bound is then
///
/// ```text
/// beta_k l_d(z_k; x*)/S_k
///   + (2-rho) max_i M^{2/(2-rho)} / (2 rho S_k) * sum_i S_i/(-alpha_i)^{rho/(2-rho)}
/// ```
///
/// and the requested closed form is evaluated alongside it.
#[allow(clippy::too_many_arguments)]
pub fn weak_smooth_bounds(
    trace: &RunTrace,
    geom: &ProxGeometry,
    reference: &Reference,
    l: f64,
    m: f64,
    rho: f64,
    closed_form: WeakClosedForm,
) -> Result<Vec<WeakBoundRow>> {
    if !(1.0..2.0).contains(&rho) {
        return Err(Error::InvalidParameter(format!(
            "rho must lie in [1, 2), got {rho}"
        )));
    }
    if trace.variant != Variant::Modified {
        return Err(Error::InvalidParameter(
            "the Holder-slack analysis covers the modified variant".into(),
        ));
    }
    let sigma_d = geom.sigma_d;
    let sigma_f = trace.sigma_f;
    let sigma_bar = trace.sigma_f_bar;
    let exp_ratio = rho / (2.0 - rho);
    let m_pow = m.powf(2.0 / (2.0 - rho));

    let mut margin_sum = 0.0;
    let mut out = Vec::with_capacity(trace.rows.len());
    for (k, row) in trace.rows.iter().enumerate() {
        let beta_prev = if k == 0 {
            trace.beta_minus1
        } else {
            trace.rows[k - 1].beta
        };
        let s_prev = if k == 0 { 0.0 } else { trace.rows[k - 1].s_cum };
        let lam = row.lambda;
        let alpha =
            l - sigma_d * (sigma_bar + row.s_cum * (beta_prev + s_prev * sigma_f) / (lam * lam));
        if alpha >= 0.0 {
            return Err(Error::NonNegativeAlpha { k, alpha });
        }
        margin_sum += row.s_cum / (-alpha).powf(exp_ratio);
        let l_d = geom.linearize_d(&row.z, &reference.x_star)?;
        let margin_bound = row.beta * l_d / row.s_cum
            + (2.0 - rho) * m_pow / (2.0 * rho * row.s_cum) * margin_sum;

        let kf = row.k as f64;
        let closed = match closed_form {
            WeakClosedForm::NonStrong { gamma } => {
                4.0 * l * l_d / (sigma_d * (kf + 1.0) * (kf + 2.0))
                    + (4.0 * gamma * l_d / sigma_d + m_pow / (3.0 * rho * gamma.powf(exp_ratio)))
                        * (kf + 3.0).powf(1.5 * (2.0 - rho))
                        / ((kf + 1.0) * (kf + 2.0))
            }
            WeakClosedForm::Strong { p, beta } => {
                let base = sigma_d * sigma_bar + p * l + (p + 1.0) * sigma_d * beta;
                let term1 = (l / sigma_d + beta)
                    * (p + 1.0).powi(2)
                    * l_d
                    * (kf + 2.0).powf(p - 1.0)
                    / (kf + 1.0).powf(p + 1.0);
                let term2 = (p + 1.0) * (2.0 - rho) * m_pow
                    / (2.0 * rho * base.powf(exp_ratio) * (kf + 1.0).powf(p + 1.0));
                let term3 = 3.0_f64.powf(p + 1.0) * (2.0 - rho) * m_pow / (2.0 * rho)
                    * (2.0_f64.powf(p - 1.0) * (p + 1.0).powi(2) / (sigma_d * sigma_f))
                        .powf(exp_ratio)
                    * power_sum_factor(row.k, p, rho);
                term1 + term2 + term3
            }
        };
        let xi = geom.bregman(&row.z, &reference.x_star)?;
        out.push(WeakBoundRow {
            k: row.k,
            gap: row.f_hat - reference.f_star,
            strong_term: sigma_f * xi,
            margin_bound,
            closed_form: closed,
        });
    }
    Ok(out)
}

/// The tail factor of the strong-case closed form: an upper bound on
/// `sum_{i=1}^k i^q / (k+1)^{p+1}` with `q = p + 1 - 2 rho/(2 - rho)`,
/// branching on the sign of `q + 1`. Exactly zero at `k = 0` (empty sum).
pub fn power_sum_factor(k: usize, p: f64, rho: f64) -> f64 {
    if k == 0 {
        return 0.0;
    }
    let kf = k as f64;
    let q = p + 1.0 - 2.0 * rho / (2.0 - rho);
    let denom = (kf + 1.0).powf(p + 1.0);
    if q > -1.0 - 1e-12 && q < -1.0 + 1e-12 {
        (1.0 + kf.ln()) / denom
    } else if q > -1.0 {
        (kf + 1.0).powf(q + 1.0) / (1.0 + q) / denom
    } else {
        (1.0 - 1.0 / (1.0 + q)) / denom
    }
}
