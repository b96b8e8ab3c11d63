//! Weight and scaling parameter sequences.
//!
//! A schedule emits, per iteration `k`, the weight `lambda_k > 0`, the
//! non-decreasing scaling `beta_k >= 0` (with a `beta_{-1}` entry), and the
//! cumulative weight `S_k = sum_{i<=k} lambda_i`. Each shipped kind matches
//! one convergence regime:
//!
//! * `SimpleAveraging`: `lambda_k = (k+1)/2`, constant `beta` — the strongly
//!   convex subgradient setting and the conditional-gradient setting (`beta = 0`).
//! * `ClassicalStructured`: constant `beta = (L - sigma_f_bar*sigma_d)/sigma_d`
//!   and `lambda_{k+1} = (beta + S_k sigma_f)/beta` — classical gradient steps.
//! * `ModifiedStructured`: same constant `beta`, with `lambda_{k+1}` the largest
//!   root of `(L - sigma_f_bar*sigma_d) lambda^2 =
//!   sigma_d (S_k sigma_f + beta)(lambda + S_k)` — the accelerated regime.
//! * `WeakNonStrong`: `lambda_k = (k+1)/2`,
//!   `beta_k = L/sigma_d + gamma/sigma_d (k+3)^{1.5(2-rho)}` for Holder-smooth
//!   objectives without strong convexity (`gamma` tunable via [`tune_gamma`]).
//! * `WeakStrong`: `lambda_k = (k+1)^p/(p+1)`,
//!   `beta_k = (L/sigma_d + beta)(k+2)^{p-1}` for Holder-smooth strongly convex
//!   objectives.
//!
//! The modified recurrence normalizes (dividing by `beta`) to
//! `S_0 = 1, (S_{k+1} - S_k)^2 = S_{k+1} (1 + r S_k)` with
//! `r = sigma_f*sigma_d/(L - sigma_f_bar*sigma_d)`; the appendix validators at
//! the bottom check its growth estimates pointwise in ratio/log space so that
//! `k` up to 10^4 and `r` up to 10 stay finite.

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub enum ScheduleKind {
    SimpleAveraging {
        beta: f64,
    },
    ClassicalStructured {
        l: f64,
        sigma_d: f64,
        sigma_f: f64,
        sigma_f_bar: f64,
    },
    ModifiedStructured {
        l: f64,
        sigma_d: f64,
        sigma_f: f64,
        sigma_f_bar: f64,
    },
    WeakNonStrong {
        l: f64,
        sigma_d: f64,
        rho: f64,
        gamma: f64,
    },
    WeakStrong {
        l: f64,
        sigma_d: f64,
        p: f64,
        beta: f64,
        /// Used only to validate the standing positivity condition.
        sigma_f_bar: f64,
    },
    CustomTable {
        lambda: Vec<f64>,
        /// `beta_{-1}..beta_K`, one longer than `lambda`.
        beta: Vec<f64>,
    },
}

/// A generated schedule covering iterations `0..=k_max`.
#[derive(Clone, Debug)]
pub struct Schedule {
    lambda: Vec<f64>,
    /// Stored with offset 1: `beta[0] = beta_{-1}`.
    beta: Vec<f64>,
    s_cum: Vec<f64>,
}

impl Schedule {
    pub fn generate(kind: &ScheduleKind, k_max: usize) -> Result<Schedule> {
        let n = k_max + 1;
        let (lambda, beta) = match kind {
            ScheduleKind::SimpleAveraging { beta } => {
                if *beta < 0.0 {
                    return Err(Error::InvalidParameter("beta must be >= 0".into()));
                }
                let lambda: Vec<f64> = (0..n).map(|k| (k as f64 + 1.0) / 2.0).collect();
                (lambda, vec![*beta; n + 1])
            }
            ScheduleKind::ClassicalStructured {
                l,
                sigma_d,
                sigma_f,
                sigma_f_bar,
            } => {
                let beta = structured_beta(*l, *sigma_d, *sigma_f_bar)?;
                let mut lambda = Vec::with_capacity(n);
                let mut s = 0.0;
                for k in 0..n {
                    let lam = if k == 0 { 1.0 } else { (beta + s * sigma_f) / beta };
                    lambda.push(lam);
                    s += lam;
                }
                (lambda, vec![beta; n + 1])
            }
            ScheduleKind::ModifiedStructured {
                l,
                sigma_d,
                sigma_f,
                sigma_f_bar,
            } => {
                let beta = structured_beta(*l, *sigma_d, *sigma_f_bar)?;
                let r = sigma_f * sigma_d / (l - sigma_f_bar * sigma_d);
                let mut lambda = Vec::with_capacity(n);
                let mut s = 0.0;
                for _ in 0..n {
                    let next_s = if lambda.is_empty() {
                        1.0
                    } else {
                        largest_root_next(s, r)
                    };
                    lambda.push(next_s - s);
                    s = next_s;
                }
                (lambda, vec![beta; n + 1])
            }
            ScheduleKind::WeakNonStrong {
                l,
                sigma_d,
                rho,
                gamma,
            } => {
                if !(1.0..2.0).contains(rho) {
                    return Err(Error::InvalidParameter(format!(
                        "rho must lie in [1, 2), got {rho}"
                    )));
                }
                if *gamma <= 0.0 || *l < 0.0 || *sigma_d <= 0.0 {
                    return Err(Error::InvalidParameter(
                        "need gamma > 0, L >= 0, sigma_d > 0".into(),
                    ));
                }
                let lambda: Vec<f64> = (0..n).map(|k| (k as f64 + 1.0) / 2.0).collect();
                let exponent = 1.5 * (2.0 - rho);
                let beta_at =
                    |k: f64| l / sigma_d + gamma / sigma_d * (k + 3.0).powf(exponent);
                let mut beta = Vec::with_capacity(n + 1);
                beta.push(beta_at(0.0)); // beta_{-1} := beta_0
                for k in 0..n {
                    beta.push(beta_at(k as f64));
                }
                (lambda, beta)
            }
            ScheduleKind::WeakStrong {
                l,
                sigma_d,
                p,
                beta,
                sigma_f_bar,
            } => {
                if *p < 1.0 {
                    return Err(Error::InvalidParameter(format!("p must be >= 1, got {p}")));
                }
                if *beta < 0.0 || *l < 0.0 || *sigma_d <= 0.0 {
                    return Err(Error::InvalidParameter(
                        "need beta >= 0, L >= 0, sigma_d > 0".into(),
                    ));
                }
                if sigma_d * sigma_f_bar + p * l + (p + 1.0) * sigma_d * beta <= 0.0 {
                    return Err(Error::InvalidParameter(
                        "sigma_d*sigma_f_bar + p*L + (p+1)*sigma_d*beta must be positive".into(),
                    ));
                }
                let lambda: Vec<f64> = (0..n)
                    .map(|k| (k as f64 + 1.0).powf(*p) / (p + 1.0))
                    .collect();
                let beta_at = |k: f64| (l / sigma_d + beta) * (k + 2.0).powf(p - 1.0);
                let mut b = Vec::with_capacity(n + 1);
                b.push(beta_at(0.0)); // beta_{-1} := beta_0
                for k in 0..n {
                    b.push(beta_at(k as f64));
                }
                (lambda, b)
            }
            ScheduleKind::CustomTable { lambda, beta } => {
                if beta.len() != lambda.len() + 1 {
                    return Err(Error::InvalidParameter(
                        "custom table needs one more beta entry than lambda".into(),
                    ));
                }
                if lambda.len() < n {
                    return Err(Error::InvalidParameter(format!(
                        "custom table holds {} entries, {n} requested",
                        lambda.len()
                    )));
                }
                (lambda[..n].to_vec(), beta[..=n].to_vec())
            }
        };

        let mut s_cum = Vec::with_capacity(n);
        let mut acc = 0.0;
        for (k, lam) in lambda.iter().enumerate() {
            if *lam <= 0.0 || !lam.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "weight lambda_{k} = {lam} must be positive and finite"
                )));
            }
            acc += lam;
            if !acc.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "cumulative weight overflowed at k = {k}; shorten the run or recondition"
                )));
            }
            s_cum.push(acc);
        }
        for (i, pair) in beta.windows(2).enumerate() {
            if pair[0] < 0.0 || pair[1] < pair[0] {
                return Err(Error::InvalidParameter(format!(
                    "scalings must be non-negative and non-decreasing, beta[{}..] = {:?}",
                    i as i64 - 1,
                    pair
                )));
            }
        }
        Ok(Schedule {
            lambda,
            beta,
            s_cum,
        })
    }

    pub fn k_max(&self) -> usize {
        self.lambda.len() - 1
    }

    pub fn lambda(&self, k: usize) -> f64 {
        self.lambda[k]
    }

    /// `beta_k`, defined from `k = -1`.
    pub fn beta(&self, k: isize) -> f64 {
        self.beta[(k + 1) as usize]
    }

    /// `S_k`, with `S_{-1} = 0`.
    pub fn s_cum(&self, k: isize) -> f64 {
        if k < 0 {
            0.0
        } else {
            self.s_cum[k as usize]
        }
    }
}

fn structured_beta(l: f64, sigma_d: f64, sigma_f_bar: f64) -> Result<f64> {
    if sigma_d <= 0.0 {
        return Err(Error::InvalidParameter("sigma_d must be positive".into()));
    }
    let num = l - sigma_f_bar * sigma_d;
    if num <= 0.0 {
        return Err(Error::DegenerateBeta(num));
    }
    Ok(num / sigma_d)
}

/// Largest root of `(S' - s)^2 = S' (1 + r s)` in `S'`, i.e.
/// `S' = (1 + (2+r)s + sqrt((1 + (2+r)s)^2 - 4 s^2)) / 2`, with the
/// discriminant factored as `(1 + r s)(1 + (4+r) s)` to avoid cancellation
/// for large `s`.
fn largest_root_next(s: f64, r: f64) -> f64 {
    let disc = (1.0 + r * s) * (1.0 + (4.0 + r) * s);
    (1.0 + (2.0 + r) * s + disc.sqrt()) / 2.0
}

/// The tuned curvature weight for the non-strongly-convex Holder schedule:
/// `gamma* = m_hat * (sigma_d / (12 (2 - rho) d_star))^{(2-rho)/2}`.
pub fn tune_gamma(m_hat: f64, sigma_d: f64, rho: f64, d_star: f64) -> Result<f64> {
    if !(1.0..2.0).contains(&rho) {
        return Err(Error::InvalidParameter(format!(
            "rho must lie in [1, 2), got {rho}"
        )));
    }
    if m_hat <= 0.0 || sigma_d <= 0.0 || d_star <= 0.0 {
        return Err(Error::InvalidParameter(
            "tune_gamma needs m_hat, sigma_d, d_star > 0".into(),
        ));
    }
    Ok(m_hat * (sigma_d / (12.0 * (2.0 - rho) * d_star)).powf((2.0 - rho) / 2.0))
}

// ---------------------------------------------------------------------------
// Recurrence sequences and their growth estimates
// ---------------------------------------------------------------------------

/// Ratio-space view of the normalized recurrence `S_0 = 1`,
/// `(S_{k+1} - S_k)^2 = S_{k+1}(1 + r S_k)`: per-step ratios `q_k = S_k/S_{k+1}`,
/// reciprocals `1/S_k`, logarithms `ln S_k`, and head ratios
/// `sum_{i<=k} S_i / S_k`. Values stay finite far beyond where `S_k` itself
/// overflows.
#[derive(Clone, Debug)]
pub struct RecurrenceRatios {
    pub r: f64,
    pub ratio: Vec<f64>,
    pub inv: Vec<f64>,
    pub log_s: Vec<f64>,
    pub head_ratio: Vec<f64>,
}

pub fn recurrence_ratios(r: f64, k_max: usize) -> RecurrenceRatios {
    let mut inv = Vec::with_capacity(k_max + 1);
    let mut log_s = Vec::with_capacity(k_max + 1);
    let mut head_ratio = Vec::with_capacity(k_max + 1);
    let mut ratio = Vec::with_capacity(k_max);
    inv.push(1.0);
    log_s.push(0.0);
    head_ratio.push(1.0);
    let mut u = 1.0_f64;
    let mut log = 0.0_f64;
    let mut head = 1.0_f64;
    for _ in 0..k_max {
        // S_{k+1}/S_k = (u + 2 + r + sqrt((u + r)(u + 4 + r))) / 2 with u = 1/S_k
        let growth = (u + 2.0 + r + ((u + r) * (u + 4.0 + r)).sqrt()) / 2.0;
        let q = 1.0 / growth;
        ratio.push(q);
        u *= q;
        log += growth.ln();
        head = 1.0 + q * head;
        inv.push(u);
        log_s.push(log);
        head_ratio.push(head);
    }
    RecurrenceRatios {
        r,
        ratio,
        inv,
        log_s,
        head_ratio,
    }
}

/// The recurrence values `S_0..S_K` themselves (saturating to infinity once
/// they leave f64 range), plus the `r = 0` comparison sequence `T_k`.
pub fn reference_sequences(r: f64, k_max: usize) -> (Vec<f64>, Vec<f64>) {
    let seq = |r: f64| {
        let mut v = Vec::with_capacity(k_max + 1);
        let mut s = 1.0_f64;
        v.push(s);
        for _ in 0..k_max {
            s = largest_root_next(s, r);
            v.push(s);
        }
        v
    };
    (seq(r), seq(0.0))
}

/// Per-estimate worst one-sided relative residuals; a check passes when its
/// residual is at most the tolerance.
#[derive(Clone, Copy, Debug, Default)]
pub struct AppendixReport {
    /// `1/S_k <= 4/((k+1)(k+4))`.
    pub worst_inverse_poly: f64,
    /// `ln S_k >= k ln(1/factor)` where `factor = 2/(2 + r + sqrt(r^2 + 4r))`.
    pub worst_inverse_geo: f64,
    /// `sum S_i / S_k <= (1 + sqrt(1 + 4/r))/2` (only for `r > 0`).
    pub worst_head_ratio: f64,
    /// `sum S_i / S_k <= sum T_i / T_k`.
    pub worst_vs_reference: f64,
    /// `sum T_i / T_k <= k/3 + ln(k+2)/6 + 1`.
    pub worst_reference_log: f64,
    /// `1 - sqrt(r/(r+1)) <= factor <= (1 + sqrt(r)/2)^{-2}`.
    pub worst_factor_sandwich: f64,
}

impl AppendixReport {
    pub fn worst_overall(&self) -> f64 {
        self.worst_inverse_poly
            .max(self.worst_inverse_geo)
            .max(self.worst_head_ratio)
            .max(self.worst_vs_reference)
            .max(self.worst_reference_log)
            .max(self.worst_factor_sandwich)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.worst_overall() <= tol
    }
}

/// One-sided relative residual of `lhs <= rhs`.
fn one_sided(lhs: f64, rhs: f64) -> f64 {
    (lhs - rhs) / 1.0_f64.max(lhs.abs()).max(rhs.abs())
}

/// Validate the growth estimates of the recurrence pointwise for `k <= k_max`.
pub fn validate_appendix(r: f64, k_max: usize) -> AppendixReport {
    let s = recurrence_ratios(r, k_max);
    let t = recurrence_ratios(0.0, k_max);
    let factor = 2.0 / (2.0 + r + (r * r + 4.0 * r).sqrt());
    let mut rep = AppendixReport {
        worst_inverse_poly: f64::NEG_INFINITY,
        worst_inverse_geo: f64::NEG_INFINITY,
        worst_head_ratio: f64::NEG_INFINITY,
        worst_vs_reference: f64::NEG_INFINITY,
        worst_reference_log: f64::NEG_INFINITY,
        worst_factor_sandwich: f64::NEG_INFINITY,
    };
    let head_cap = if r > 0.0 {
        (1.0 + (1.0 + 4.0 / r).sqrt()) / 2.0
    } else {
        f64::INFINITY
    };
    for k in 0..=k_max {
        let kf = k as f64;
        rep.worst_inverse_poly = rep
            .worst_inverse_poly
            .max(one_sided(s.inv[k], 4.0 / ((kf + 1.0) * (kf + 4.0))));
        // geometric branch compared in log space: ln S_k >= -k ln(factor)
        rep.worst_inverse_geo = rep
            .worst_inverse_geo
            .max(one_sided(-kf * factor.ln(), s.log_s[k]));
        if r > 0.0 {
            rep.worst_head_ratio = rep
                .worst_head_ratio
                .max(one_sided(s.head_ratio[k], head_cap));
        } else {
            rep.worst_head_ratio = 0.0;
        }
        rep.worst_vs_reference = rep
            .worst_vs_reference
            .max(one_sided(s.head_ratio[k], t.head_ratio[k]));
        rep.worst_reference_log = rep
            .worst_reference_log
            .max(one_sided(t.head_ratio[k], kf / 3.0 + (kf + 2.0).ln() / 6.0 + 1.0));
    }
    let lower = 1.0 - (r / (r + 1.0)).sqrt();
    let upper = (1.0 + 0.5 * r.sqrt()).powi(-2);
    rep.worst_factor_sandwich = one_sided(lower, factor).max(one_sided(factor, upper));
    rep
}
