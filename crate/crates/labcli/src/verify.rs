//! The acceptance suite: ten self-contained criteria covering the certificate
//! relation, the structural conditions of the auxiliary functions, every
//! shipped convergence rate, the recurrence estimates, the reductions to
//! hand-written reference methods, and the error contracts.
//!
//! Each criterion generates its own fixtures from fixed seeds, runs at the
//! stated iteration counts and tolerances, and reports a pass/fail with its
//! worst residual. `quick` mode shrinks iteration counts for smoke testing;
//! the acceptance gate runs the full configuration.

use proxgrad::engine::{
    certificate_bounds, cgm_smooth_bounds, cgm_weak_bounds, check_bound_table,
    nonsmooth_simple_bounds, run_cgm, run_nonsmooth, run_structured, structured_constant_bounds,
    weak_smooth_bounds, Reference, RunConfig, Variant, WeakClosedForm,
};
use proxgrad::error::Error;
use proxgrad::geometry::{FeasibleSet, NormKind, ProxGeometry};
use proxgrad::instances::{gen_holder, gen_lasso, gen_pwl_strong, gen_quadratic};
use proxgrad::models::{check_properties, ModelKind};
use proxgrad::problems::make_inexact_oracle_adapter;
use proxgrad::rng::SplitMix64;
use proxgrad::schedules::{tune_gamma, validate_appendix, ScheduleKind};
use serde::Serialize;
use std::time::Instant;

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    /// Worst residual in the criterion's own scale (see `details`).
    pub worst: f64,
    pub details: String,
    pub wall_ms: u128,
}

/// Worst scaled residual of "general certificate bound <= closed form" over a
/// table; the closed form may only loosen the certificate, so a positive
/// residual flags a mis-derived rate even when both still dominate the gap.
fn worst_loosening_residual(rows: &[proxgrad::engine::BoundRow]) -> f64 {
    let mut worst = f64::NEG_INFINITY;
    for row in rows {
        if let Some(cf) = row.closed_form {
            if cf.is_finite() {
                worst = worst
                    .max((row.general_bound - cf) / 1.0_f64.max(cf.abs()).max(row.general_bound.abs()));
            }
        }
    }
    worst
}

impl CriterionResult {
    fn new(id: u32, name: &str) -> Self {
        Self {
            id,
            name: name.to_string(),
            passed: true,
            worst: f64::NEG_INFINITY,
            details: String::new(),
            wall_ms: 0,
        }
    }

    fn fail(&mut self, details: String) {
        self.passed = false;
        if self.details.is_empty() {
            self.details = details;
        } else {
            self.details.push_str("; ");
            self.details.push_str(&details);
        }
    }

    fn track(&mut self, residual: f64, tol: f64, what: &str) {
        self.worst = self.worst.max(residual);
        if residual > tol {
            self.fail(format!("{what}: residual {residual:.3e} > {tol:.1e}"));
        }
    }
}

pub fn run_all(quick: bool) -> Vec<CriterionResult> {
    let criteria: Vec<fn(bool) -> CriterionResult> = vec![
        criterion_1_certificate_relation,
        criterion_2_structural_properties,
        criterion_3_nonsmooth_rates,
        criterion_4_classical_structured_rate,
        criterion_5_modified_structured_rate,
        criterion_6_cgm_rates,
        criterion_7_weak_smooth_rates,
        criterion_8_recurrence_estimates,
        criterion_9_reductions,
        criterion_10_error_contracts,
    ];
    criteria
        .into_iter()
        .map(|f| {
            let start = Instant::now();
            let mut r = f(quick);
            r.wall_ms = start.elapsed().as_millis();
            r
        })
        .collect()
}

pub fn render(results: &[CriterionResult]) -> String {
    let mut out = String::new();
    for r in results {
        out.push_str(&format!(
            "{} criterion {:2} [{}] worst={:.3e} ({} ms){}\n",
            if r.passed { "PASS" } else { "FAIL" },
            r.id,
            r.name,
            r.worst,
            r.wall_ms,
            if r.details.is_empty() {
                String::new()
            } else {
                format!(" -- {}", r.details)
            }
        ));
    }
    out
}

// ---------------------------------------------------------------------------
// fixtures
// ---------------------------------------------------------------------------

const RK_TOL: f64 = 1e-8;
const PROP_TOL: f64 = 1e-9;

fn nsp_fixture(seed: u64, dim: usize, sigma: f64) -> (proxgrad::instances::PwlInstance, ProxGeometry, FeasibleSet) {
    let mut rng = SplitMix64::new(seed);
    let inst = gen_pwl_strong(&mut rng, dim, 10, sigma, vec![0.2; dim]);
    let geom = ProxGeometry::euclidean(vec![0.0; dim]);
    let set = FeasibleSet::symmetric_box(dim, 2.0);
    (inst, geom, set)
}

fn quad_fixture(
    seed: u64,
    dim: usize,
    l: f64,
    sigma: f64,
) -> (proxgrad::instances::QuadraticInstance, ProxGeometry, FeasibleSet) {
    let mut rng = SplitMix64::new(seed);
    let inst = gen_quadratic(&mut rng, dim, l, sigma, vec![0.3; dim]);
    let geom = ProxGeometry::euclidean(vec![0.0; dim]);
    let set = FeasibleSet::Unconstrained { dim };
    (inst, geom, set)
}

// ---------------------------------------------------------------------------
// 1. certificate relation across the 12 shipped configurations
// ---------------------------------------------------------------------------

fn criterion_1_certificate_relation(quick: bool) -> CriterionResult {
    let mut res = CriterionResult::new(1, "certificate relation, 12 configurations");
    let start = Instant::now();
    let k = if quick { 60 } else { 500 };
    let seeds: &[u64] = if quick { &[1, 2] } else { &[1, 2, 3, 4, 5] };
    let mut configs = 0usize;

    // non-smooth: 2 variants x 2 models on strongly convex piecewise instances
    for variant in [Variant::Classical, Variant::Modified] {
        for model in [ModelKind::ExtendedMd, ModelKind::DualAveraging] {
            configs += 1;
            for &seed in seeds {
                let (inst, geom, set) = nsp_fixture(seed, 20, 1.0);
                let p = inst.nonsmooth_problem(None);
                let cfg = RunConfig::new(
                    variant,
                    model,
                    ScheduleKind::SimpleAveraging { beta: 0.0 },
                    k,
                );
                match run_nonsmooth(&cfg, &p, &geom, &set) {
                    Ok(trace) => res.track(
                        trace.worst_cert_residual(),
                        RK_TOL,
                        &format!("nsp {variant:?}/{model:?} seed {seed}"),
                    ),
                    Err(e) => res.fail(format!("nsp {variant:?}/{model:?} seed {seed}: {e}")),
                }
            }
        }
    }

    // structured: 2 variants x 3 models; instances mix plain quadratics, an
    // inexact-oracle wrap, and a composite problem
    for variant in [Variant::Classical, Variant::Modified] {
        for model in [
            ModelKind::ExtendedMd,
            ModelKind::DualAveraging,
            ModelKind::Hybrid,
        ] {
            configs += 1;
            for &seed in seeds {
                let (l, sigma) = (10.0, 1.0);
                let geom = ProxGeometry::euclidean(vec![0.0; 20]);
                let set = FeasibleSet::Unconstrained { dim: 20 };
                let schedule = match variant {
                    Variant::Classical => ScheduleKind::ClassicalStructured {
                        l,
                        sigma_d: 1.0,
                        sigma_f: sigma,
                        sigma_f_bar: sigma,
                    },
                    Variant::Modified => ScheduleKind::ModifiedStructured {
                        l,
                        sigma_d: 1.0,
                        sigma_f: sigma,
                        sigma_f_bar: sigma,
                    },
                };
                let label = format!("sp {variant:?}/{model:?} seed {seed}");
                let trace = match seed % 3 {
                    // composite problem: constants sigma_f = 0 need their own schedule
                    0 => {
                        let mut rng = SplitMix64::new(seed);
                        let lasso = gen_lasso(&mut rng, 40, 20, 0.1);
                        let p = match lasso.composite_problem(&geom) {
                            Ok(p) => p,
                            Err(e) => {
                                res.fail(format!("{label}: {e}"));
                                continue;
                            }
                        };
                        let schedule = match variant {
                            Variant::Classical => ScheduleKind::ClassicalStructured {
                                l: lasso.l,
                                sigma_d: 1.0,
                                sigma_f: 0.0,
                                sigma_f_bar: 0.0,
                            },
                            Variant::Modified => ScheduleKind::ModifiedStructured {
                                l: lasso.l,
                                sigma_d: 1.0,
                                sigma_f: 0.0,
                                sigma_f_bar: 0.0,
                            },
                        };
                        let cfg = RunConfig::new(variant, model, schedule, k);
                        run_structured(&cfg, &p, &geom, &set)
                    }
                    1 => {
                        let (inst, geom, set) = quad_fixture(seed * 31, 20, l, sigma);
                        let exact = inst.smooth_problem(&geom, sigma).unwrap();
                        match make_inexact_oracle_adapter(&exact, 1e-3, l, sigma, &geom, seed) {
                            Ok(p) => {
                                let cfg = RunConfig::new(variant, model, schedule, k);
                                run_structured(&cfg, &p, &geom, &set)
                            }
                            Err(e) => {
                                res.fail(format!("{label}: {e}"));
                                continue;
                            }
                        }
                    }
                    _ => {
                        let (inst, geom, set) = quad_fixture(seed * 17, 20, l, sigma);
                        let p = inst.smooth_problem(&geom, sigma).unwrap();
                        let cfg = RunConfig::new(variant, model, schedule, k);
                        run_structured(&cfg, &p, &geom, &set)
                    }
                };
                match trace {
                    Ok(t) => res.track(t.worst_cert_residual(), RK_TOL, &label),
                    Err(e) => res.fail(format!("{label}: {e}")),
                }
            }
        }
    }

    // conditional gradient: modified variant over the simplex, both
    // single-sequence constructions
    for model in [ModelKind::ExtendedMd, ModelKind::DualAveraging] {
        configs += 1;
        for &seed in seeds {
            let dim = 20;
            let mut rng = SplitMix64::new(seed ^ 0xc6);
            let interior = vec![1.0 / dim as f64; dim];
            let inst = gen_quadratic(&mut rng, dim, 3.0, 0.0, interior.clone());
            let geom = ProxGeometry::euclidean(interior);
            let set = FeasibleSet::Simplex { dim };
            let p = inst.smooth_problem(&geom, 0.0).unwrap();
            let cfg = RunConfig::new(
                Variant::Modified,
                model,
                ScheduleKind::SimpleAveraging { beta: 0.0 },
                k,
            );
            match run_cgm(&cfg, &p, &geom, &set) {
                Ok(t) => res.track(
                    t.worst_cert_residual(),
                    RK_TOL,
                    &format!("cgm {model:?} seed {seed}"),
                ),
                Err(e) => res.fail(format!("cgm {model:?} seed {seed}: {e}")),
            }
        }
    }

    if configs != 12 {
        res.fail(format!("expected 12 configurations, ran {configs}"));
    }
    let elapsed = start.elapsed().as_secs_f64();
    if !quick && elapsed > 60.0 {
        res.fail(format!("runtime budget exceeded: {elapsed:.1} s > 60 s"));
    }
    res.details = format!(
        "{} configs x {} seeds, K={k}, {:.2} s{}",
        configs,
        seeds.len(),
        elapsed,
        if res.details.is_empty() { "" } else { "; " }
    ) + &res.details.clone();
    res
}

// ---------------------------------------------------------------------------
// 2. structural properties of the auxiliary functions
// ---------------------------------------------------------------------------

fn criterion_2_structural_properties(quick: bool) -> CriterionResult {
    let mut res = CriterionResult::new(2, "auxiliary-function structural properties");
    let k = if quick { 20 } else { 50 };
    let probe_count = 100;
    let (inst, geom, _) = quad_fixture(21, 8, 8.0, 1.0);
    let set = FeasibleSet::symmetric_box(8, 2.0);
    let p = inst.smooth_problem(&geom, 1.0).unwrap();
    let mut rng = SplitMix64::new(22);
    for model in [
        ModelKind::ExtendedMd,
        ModelKind::DualAveraging,
        ModelKind::Hybrid,
    ] {
        for variant in [Variant::Classical, Variant::Modified] {
            let mut cfg = RunConfig::new(
                variant,
                model,
                ScheduleKind::ModifiedStructured {
                    l: 8.0,
                    sigma_d: 1.0,
                    sigma_f: 1.0,
                    sigma_f_bar: 1.0,
                },
                k,
            );
            cfg.track_aux = true;
            let trace = match run_structured(&cfg, &p, &geom, &set) {
                Ok(t) => t,
                Err(e) => {
                    res.fail(format!("{model:?}/{variant:?}: {e}"));
                    continue;
                }
            };
            // probes: iterates, random feasible points, and the optimum
            let mut probes: Vec<Vec<f64>> = vec![inst.x_star.clone()];
            for row in trace.rows.iter().step_by(5) {
                probes.push(row.x_hat.clone());
            }
            while probes.len() < probe_count {
                probes.push(set.sample(&mut rng));
            }
            match check_properties(trace.aux.as_ref().unwrap(), &geom, &probes) {
                Ok(report) => res.track(
                    -report.worst_overall(),
                    PROP_TOL,
                    &format!("{model:?}/{variant:?}"),
                ),
                Err(e) => res.fail(format!("{model:?}/{variant:?}: {e}")),
            }
        }
    }
    res
}

// ---------------------------------------------------------------------------
// 3. non-smooth strongly convex rates
// ---------------------------------------------------------------------------

fn criterion_3_nonsmooth_rates(quick: bool) -> CriterionResult {
    let mut res = CriterionResult::new(3, "non-smooth strongly convex rates");
    let k = if quick { 200 } else { 1000 };
    for &(dim, seed) in &[(40usize, 31u64), (100, 32)] {
        for &sigma in &[0.1, 1.0] {
            let mut rng = SplitMix64::new(seed);
            let inst = gen_pwl_strong(&mut rng, dim, 12, sigma, vec![0.25; dim]);
            let p = inst.nonsmooth_problem(None);
            let geom = ProxGeometry::euclidean(vec![0.0; dim]);
            let set = FeasibleSet::symmetric_box(dim, 2.0);
            let reference = Reference {
                x_star: inst.x_star.clone(),
                f_star: inst.f_star,
            };
            for variant in [Variant::Classical, Variant::Modified] {
                let cfg = RunConfig::new(
                    variant,
                    ModelKind::ExtendedMd,
                    ScheduleKind::SimpleAveraging { beta: 0.0 },
                    k,
                );
                let label = format!("dim={dim} sigma={sigma} {variant:?}");
                let trace = match run_nonsmooth(&cfg, &p, &geom, &set) {
                    Ok(t) => t,
                    Err(e) => {
                        res.fail(format!("{label}: {e}"));
                        continue;
                    }
                };
                let closed = nonsmooth_simple_bounds(&trace, geom.sigma_d, None).unwrap();
                let rows = certificate_bounds(&trace, &geom, &reference, Some(&closed)).unwrap();
                let (general, closed_v, distance) = check_bound_table(&rows);
                res.track(general, RK_TOL, &format!("{label} general"));
                res.track(closed_v, RK_TOL, &format!("{label} closed-form"));
                res.track(distance, RK_TOL, &format!("{label} distance"));
                res.track(
                    worst_loosening_residual(&rows),
                    RK_TOL,
                    &format!("{label} loosening"),
                );
            }
        }
    }
    res
}

// ---------------------------------------------------------------------------
// 4. classical structured rate (constant scaling), delta in {0, 1e-3}
// ---------------------------------------------------------------------------

fn run_structured_rate(
    res: &mut CriterionResult,
    variant: Variant,
    k: usize,
    delta: f64,
    seed: u64,
    sigma: f64,
) {
    let (l, dim) = (10.0, 30usize);
    let (inst, geom, set) = quad_fixture(seed, dim, l, sigma);
    let reference = Reference {
        x_star: inst.x_star.clone(),
        f_star: inst.f_star,
    };
    let exact = inst.smooth_problem(&geom, sigma).unwrap();
    let p = if delta > 0.0 {
        make_inexact_oracle_adapter(&exact, delta, l, sigma, &geom, seed).unwrap()
    } else {
        exact
    };
    let schedule = match variant {
        Variant::Classical => ScheduleKind::ClassicalStructured {
            l,
            sigma_d: 1.0,
            sigma_f: sigma,
            sigma_f_bar: sigma,
        },
        Variant::Modified => ScheduleKind::ModifiedStructured {
            l,
            sigma_d: 1.0,
            sigma_f: sigma,
            sigma_f_bar: sigma,
        },
    };
    let cfg = RunConfig::new(variant, ModelKind::ExtendedMd, schedule, k);
    let label = format!("{variant:?} delta={delta} sigma={sigma} seed={seed}");
    let trace = match run_structured(&cfg, &p, &geom, &set) {
        Ok(t) => t,
        Err(e) => {
            res.fail(format!("{label}: {e}"));
            return;
        }
    };
    let closed =
        structured_constant_bounds(&trace, &geom, &reference, l, sigma, sigma, delta).unwrap();
    let rows = certificate_bounds(&trace, &geom, &reference, Some(&closed)).unwrap();
    let (general, closed_v, distance) = check_bound_table(&rows);
    res.track(general, RK_TOL, &format!("{label} general"));
    res.track(closed_v, RK_TOL, &format!("{label} closed-form"));
    res.track(distance, RK_TOL, &format!("{label} distance"));
    res.track(
        worst_loosening_residual(&rows),
        RK_TOL,
        &format!("{label} loosening"),
    );
}

fn criterion_4_classical_structured_rate(quick: bool) -> CriterionResult {
    let mut res = CriterionResult::new(4, "classical structured rate");
    let k = if quick { 200 } else { 1000 };
    for &delta in &[0.0, 1e-3] {
        for &(seed, sigma) in &[(41u64, 1.0), (42, 0.5)] {
            run_structured_rate(&mut res, Variant::Classical, k, delta, seed, sigma);
        }
    }
    res
}

// ---------------------------------------------------------------------------
// 5. modified structured rate plus empirical accelerated decay
// ---------------------------------------------------------------------------

fn criterion_5_modified_structured_rate(quick: bool) -> CriterionResult {
    let mut res = CriterionResult::new(5, "modified structured rate and decay slope");
    let k = if quick { 200 } else { 1000 };
    for &delta in &[0.0, 1e-3] {
        for &(seed, sigma) in &[(51u64, 1.0), (52, 0.5)] {
            run_structured_rate(&mut res, Variant::Modified, k, delta, seed, sigma);
        }
    }

    // empirical accelerated decay on a non-strongly-convex quadratic whose
    // spectrum spans six decades, so the polynomial regime persists through
    // the fit window; least-squares slope of log gap vs log k over the tail
    let dim = 30;
    let l = 5.0;
    let mut a = proxgrad::instances::Matrix::zeros(dim, dim);
    for i in 0..dim {
        let t = i as f64 / (dim - 1) as f64;
        a.set(i, i, l * (1e-6_f64).powf(1.0 - t));
    }
    let x_star = vec![0.4; dim];
    let b = a.matvec(&x_star);
    let mut inst = proxgrad::instances::QuadraticInstance {
        a,
        b,
        l,
        sigma: 0.0,
        x_star,
        f_star: 0.0,
    };
    inst.f_star = inst.value(&inst.x_star);
    let geom = ProxGeometry::euclidean(vec![0.0; dim]);
    let set = FeasibleSet::Unconstrained { dim };
    let p = inst.smooth_problem(&geom, 0.0).unwrap();
    let k_slope = if quick { 300 } else { 1000 };
    let cfg = RunConfig::new(
        Variant::Modified,
        ModelKind::ExtendedMd,
        ScheduleKind::ModifiedStructured {
            l,
            sigma_d: 1.0,
            sigma_f: 0.0,
            sigma_f_bar: 0.0,
        },
        k_slope,
    );
    match run_structured(&cfg, &p, &geom, &set) {
        Ok(trace) => {
            let lo = if quick { 30 } else { 100 };
            let pts: Vec<(f64, f64)> = trace.rows[lo..]
                .iter()
                .filter(|r| r.f_hat - inst.f_star > 1e-300)
                .map(|r| ((r.k as f64).ln(), (r.f_hat - inst.f_star).ln()))
                .collect();
            let n = pts.len() as f64;
            let sx: f64 = pts.iter().map(|p| p.0).sum();
            let sy: f64 = pts.iter().map(|p| p.1).sum();
            let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
            let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
            let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
            res.track(slope, -1.9, "log-log decay slope");
            res.details = format!("tail slope {slope:.3}; {}", res.details);
        }
        Err(e) => res.fail(format!("slope run: {e}")),
    }
    res
}

// ---------------------------------------------------------------------------
// 6. conditional-gradient rates (smooth simplex, Holder box)
// ---------------------------------------------------------------------------

fn criterion_6_cgm_rates(quick: bool) -> CriterionResult {
    let mut res = CriterionResult::new(6, "conditional gradient rates");
    let k = if quick { 200 } else { 1000 };

    // smooth over the simplex
    let dim = 20;
    let mut rng = SplitMix64::new(61);
    let interior = vec![1.0 / dim as f64; dim];
    let inst = gen_quadratic(&mut rng, dim, 3.0, 0.0, interior.clone());
    let geom = ProxGeometry::euclidean(interior);
    let set = FeasibleSet::Simplex { dim };
    let p = inst.smooth_problem(&geom, 0.0).unwrap();
    let cfg = RunConfig::new(
        Variant::Modified,
        ModelKind::ExtendedMd,
        ScheduleKind::SimpleAveraging { beta: 0.0 },
        k,
    );
    match run_cgm(&cfg, &p, &geom, &set) {
        Ok(trace) => {
            let closed = cgm_smooth_bounds(&trace, 3.0, 0.0);
            let mut worst = f64::NEG_INFINITY;
            for (row, cap) in trace.rows.iter().zip(&closed) {
                let gap = row.f_hat - inst.f_star;
                worst = worst.max((gap - cap) / 1.0_f64.max(gap.abs()).max(cap.abs()));
            }
            res.track(worst, RK_TOL, "smooth simplex");
        }
        Err(e) => res.fail(format!("smooth simplex: {e}")),
    }

    // Holder objectives over a box, three exponents
    for (i, &rho) in [1.25, 1.5, 1.75].iter().enumerate() {
        let dim = 15;
        let mut rng = SplitMix64::new(62 + i as u64);
        let set = FeasibleSet::symmetric_box(dim, 1.0);
        let geom = ProxGeometry::euclidean(vec![0.0; dim]);
        let pairs = if quick { 2000 } else { crate::runner::HOLDER_SAMPLE_PAIRS };
        let inst = gen_holder(&mut rng, dim, 12, rho, 0.0, vec![0.2; dim], &set, pairs);
        let p = inst.structured_problem(0.0).unwrap();
        let cfg = RunConfig::new(
            Variant::Modified,
            ModelKind::DualAveraging,
            ScheduleKind::SimpleAveraging { beta: 0.0 },
            k,
        );
        match run_cgm(&cfg, &p, &geom, &set) {
            Ok(trace) => {
                let diam = set.diameter(NormKind::L2).unwrap();
                let closed = cgm_weak_bounds(k, 0.0, inst.m_est, rho, diam);
                let mut worst = f64::NEG_INFINITY;
                for (row, cap) in trace.rows.iter().zip(&closed) {
                    let gap = row.f_hat - inst.f_star;
                    worst = worst.max((gap - cap) / 1.0_f64.max(gap.abs()).max(cap.abs()));
                }
                res.track(worst, RK_TOL, &format!("Holder box rho={rho}"));
            }
            Err(e) => res.fail(format!("Holder box rho={rho}: {e}")),
        }
    }
    res
}

// ---------------------------------------------------------------------------
// 7. Holder-slack proximal rates, both schedules, all decay branches
// ---------------------------------------------------------------------------

fn criterion_7_weak_smooth_rates(quick: bool) -> CriterionResult {
    let mut res = CriterionResult::new(7, "Holder-slack proximal rates");
    let k = if quick { 200 } else { 1000 };
    let dim = 15;
    let rho = 1.5;
    let pairs = if quick { 2000 } else { crate::runner::HOLDER_SAMPLE_PAIRS };

    // non-strongly-convex schedule with the tuned curvature weight
    {
        let mut rng = SplitMix64::new(71);
        let set = FeasibleSet::symmetric_box(dim, 1.0);
        let geom = ProxGeometry::euclidean(vec![0.0; dim]);
        let inst = gen_holder(&mut rng, dim, 12, rho, 0.0, vec![0.25; dim], &set, pairs);
        let p = inst.structured_problem(0.0).unwrap();
        let d_star = geom.prox_value(&inst.x_star).unwrap();
        let gamma = tune_gamma(inst.m_est, 1.0, rho, d_star).unwrap();
        let cfg = RunConfig::new(
            Variant::Modified,
            ModelKind::ExtendedMd,
            ScheduleKind::WeakNonStrong {
                l: 0.0,
                sigma_d: 1.0,
                rho,
                gamma,
            },
            k,
        );
        let reference = Reference {
            x_star: inst.x_star.clone(),
            f_star: inst.f_star,
        };
        match run_structured(&cfg, &p, &geom, &set).map(|t| {
            weak_smooth_bounds(
                &t,
                &geom,
                &reference,
                0.0,
                inst.m_est,
                rho,
                WeakClosedForm::NonStrong { gamma },
            )
        }) {
            Ok(Ok(rows)) => {
                let mut worst = f64::NEG_INFINITY;
                for row in &rows {
                    let lhs = row.gap + row.strong_term;
                    worst = worst.max(
                        (lhs - row.margin_bound)
                            / 1.0_f64.max(lhs.abs()).max(row.margin_bound.abs()),
                    );
                    worst = worst.max(
                        (lhs - row.closed_form)
                            / 1.0_f64.max(lhs.abs()).max(row.closed_form.abs()),
                    );
                }
                res.track(worst, RK_TOL, "tuned non-strong schedule");
            }
            Ok(Err(e)) | Err(e) => res.fail(format!("tuned non-strong schedule: {e}")),
        }
    }

    // strongly convex power schedule; rho = 1.5 puts the branch threshold at
    // p + 1 = 5, so p in {5, 4, 2} exercises all three decay branches
    for (i, &p_pow) in [5.0, 4.0, 2.0].iter().enumerate() {
        let mu = 0.5;
        let mut rng = SplitMix64::new(72 + i as u64);
        let set = FeasibleSet::symmetric_box(dim, 1.0);
        let geom = ProxGeometry::euclidean(vec![0.0; dim]);
        let inst = gen_holder(&mut rng, dim, 12, rho, mu, vec![0.25; dim], &set, pairs);
        let p = inst.structured_problem(mu).unwrap();
        let cfg = RunConfig::new(
            Variant::Modified,
            ModelKind::ExtendedMd,
            ScheduleKind::WeakStrong {
                l: mu,
                sigma_d: 1.0,
                p: p_pow,
                beta: 0.0,
                sigma_f_bar: mu,
            },
            k,
        );
        let reference = Reference {
            x_star: inst.x_star.clone(),
            f_star: inst.f_star,
        };
        match run_structured(&cfg, &p, &geom, &set).map(|t| {
            weak_smooth_bounds(
                &t,
                &geom,
                &reference,
                mu,
                inst.m_est,
                rho,
                WeakClosedForm::Strong { p: p_pow, beta: 0.0 },
            )
        }) {
            Ok(Ok(rows)) => {
                let mut worst = f64::NEG_INFINITY;
                for row in &rows {
                    let lhs = row.gap + row.strong_term;
                    worst = worst.max(
                        (lhs - row.margin_bound)
                            / 1.0_f64.max(lhs.abs()).max(row.margin_bound.abs()),
                    );
                    worst = worst.max(
                        (lhs - row.closed_form)
                            / 1.0_f64.max(lhs.abs()).max(row.closed_form.abs()),
                    );
                }
                res.track(worst, RK_TOL, &format!("power schedule p={p_pow}"));
            }
            Ok(Err(e)) | Err(e) => res.fail(format!("power schedule p={p_pow}: {e}")),
        }
    }
    res
}

// ---------------------------------------------------------------------------
// 8. recurrence growth estimates
// ---------------------------------------------------------------------------

fn criterion_8_recurrence_estimates(quick: bool) -> CriterionResult {
    let mut res = CriterionResult::new(8, "recurrence growth estimates");
    let start = Instant::now();
    let k = if quick { 2000 } else { 10_000 };
    for &r in &[0.0, 0.01, 0.1, 1.0, 10.0] {
        let report = validate_appendix(r, k);
        res.track(report.worst_overall(), 1e-12, &format!("r={r}"));
    }
    let elapsed = start.elapsed().as_secs_f64();
    if !quick && elapsed > 1.0 {
        res.fail(format!("runtime budget exceeded: {elapsed:.2} s > 1 s"));
    }
    res.details = format!("{elapsed:.3} s; {}", res.details);
    res
}

// ---------------------------------------------------------------------------
// 9. reductions to hand-written reference methods
// ---------------------------------------------------------------------------

fn criterion_9_reductions(quick: bool) -> CriterionResult {
    let mut res = CriterionResult::new(9, "reductions to reference methods");
    let k = if quick { 40 } else { 120 };
    let dim = 8;
    let half = 1.5;
    let clamp = |x: &mut Vec<f64>| {
        for v in x.iter_mut() {
            *v = v.clamp(-half, half);
        }
    };
    let drift = |a: &[f64], b: &[f64]| -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    };

    // (a) projected subgradient
    {
        let mut rng = SplitMix64::new(91);
        let inst = gen_quadratic(&mut rng, dim, 4.0, 0.5, vec![0.4; dim]);
        let p = inst.nonsmooth_problem(0.0);
        let geom = ProxGeometry::euclidean(vec![0.0; dim]);
        let set = FeasibleSet::symmetric_box(dim, half);
        let beta = 2.0;
        let cfg = RunConfig::new(
            Variant::Classical,
            ModelKind::ExtendedMd,
            ScheduleKind::SimpleAveraging { beta },
            k,
        );
        match run_nonsmooth(&cfg, &p, &geom, &set) {
            Ok(trace) => {
                let mut x = geom.center.clone();
                let mut worst: f64 = 0.0;
                for kk in 0..=k {
                    let lam = (kk as f64 + 1.0) / 2.0;
                    let g = inst.grad(&x);
                    for i in 0..dim {
                        x[i] -= lam / beta * g[i];
                    }
                    clamp(&mut x);
                    worst = worst.max(drift(&x, &trace.rows[kk].z));
                }
                res.track(worst, 1e-10, "projected subgradient");
            }
            Err(e) => res.fail(format!("projected subgradient: {e}")),
        }
    }

    // (b) strongly convex fixed-stepsize form
    {
        let mut rng = SplitMix64::new(92);
        let inst = gen_pwl_strong(&mut rng, dim, 8, 1.0, vec![0.3; dim]);
        let sigma = inst.sigma;
        let p = inst.nonsmooth_problem(None);
        let geom = ProxGeometry::euclidean(vec![0.0; dim]);
        let set = FeasibleSet::symmetric_box(dim, 2.0);
        let cfg = RunConfig::new(
            Variant::Classical,
            ModelKind::ExtendedMd,
            ScheduleKind::SimpleAveraging { beta: 0.0 },
            k,
        );
        match run_nonsmooth(&cfg, &p, &geom, &set) {
            Ok(trace) => {
                let mut x = geom.center.clone();
                let mut worst: f64 = 0.0;
                for kk in 0..=k {
                    let step = 2.0 / (sigma * (kk as f64 + 2.0));
                    let g = inst.subgrad(&x);
                    for i in 0..dim {
                        x[i] -= step * g[i];
                    }
                    for v in x.iter_mut() {
                        *v = v.clamp(-2.0, 2.0);
                    }
                    worst = worst.max(drift(&x, &trace.rows[kk].z));
                }
                res.track(worst, 1e-12, "fixed-stepsize strongly convex form");
            }
            Err(e) => res.fail(format!("fixed-stepsize form: {e}")),
        }
    }

    // (c) constant-scaling gradient method
    {
        let mut rng = SplitMix64::new(93);
        let (l, sigma) = (10.0, 1.0);
        let inst = gen_quadratic(&mut rng, dim, l, sigma, vec![0.3; dim]);
        let geom = ProxGeometry::euclidean(vec![0.0; dim]);
        let set = FeasibleSet::symmetric_box(dim, half);
        let p = inst.smooth_problem(&geom, sigma).unwrap();
        let cfg = RunConfig::new(
            Variant::Classical,
            ModelKind::ExtendedMd,
            ScheduleKind::ClassicalStructured {
                l,
                sigma_d: 1.0,
                sigma_f: sigma,
                sigma_f_bar: sigma,
            },
            k,
        );
        match run_structured(&cfg, &p, &geom, &set) {
            Ok(trace) => {
                let mut x = geom.center.clone();
                let mut worst: f64 = 0.0;
                for kk in 0..=k {
                    let g = inst.grad(&x);
                    for i in 0..dim {
                        x[i] -= g[i] / l;
                    }
                    clamp(&mut x);
                    worst = worst.max(drift(&x, &trace.rows[kk].z));
                }
                res.track(worst, 1e-12, "constant-scaling gradient method");
            }
            Err(e) => res.fail(format!("constant-scaling gradient method: {e}")),
        }
    }
    res
}

// ---------------------------------------------------------------------------
// 10. error contracts
// ---------------------------------------------------------------------------

fn criterion_10_error_contracts(_quick: bool) -> CriterionResult {
    let mut res = CriterionResult::new(10, "error contracts");
    res.worst = 0.0;

    // degenerate start: lambda_0 sigma_f + beta_{-1} = 0
    for _ in 0..2 {
        let geom = ProxGeometry::euclidean(vec![0.0]);
        let set = FeasibleSet::symmetric_box(1, 1.0);
        let p = proxgrad::problems::NonSmoothProblem {
            objective: std::sync::Arc::new(|x: &[f64]| x[0].abs()),
            subgradient: std::sync::Arc::new(|x: &[f64]| vec![x[0].signum()]),
            sigma_f: 0.0,
            subgrad_bound: Some(1.0),
        };
        let cfg = RunConfig::new(
            Variant::Classical,
            ModelKind::ExtendedMd,
            ScheduleKind::SimpleAveraging { beta: 0.0 },
            3,
        );
        match run_nonsmooth(&cfg, &p, &geom, &set) {
            Err(Error::DegenerateC0) => {}
            other => res.fail(format!("degenerate start: got {other:?}")),
        }
    }

    // linear minimization over an unbounded set
    for _ in 0..2 {
        match proxgrad::geometry::lmo(&FeasibleSet::Unconstrained { dim: 2 }, &[1.0, 0.0]) {
            Err(Error::Unbounded) => {}
            other => res.fail(format!("unbounded oracle: got {other:?}")),
        }
    }

    // degenerate constant scaling: L = sigma_f_bar * sigma_d
    for _ in 0..2 {
        match proxgrad::schedules::Schedule::generate(
            &ScheduleKind::ClassicalStructured {
                l: 2.0,
                sigma_d: 1.0,
                sigma_f: 2.0,
                sigma_f_bar: 2.0,
            },
            3,
        ) {
            Err(Error::DegenerateBeta(_)) => {}
            other => res.fail(format!("degenerate scaling: got {other:?}")),
        }
    }

    // exponent out of range in the weak schedules
    for _ in 0..2 {
        match proxgrad::schedules::Schedule::generate(
            &ScheduleKind::WeakNonStrong {
                l: 1.0,
                sigma_d: 1.0,
                rho: 2.0,
                gamma: 1.0,
            },
            3,
        ) {
            Err(Error::InvalidParameter(_)) => {}
            other => res.fail(format!("exponent range: got {other:?}")),
        }
        match proxgrad::problems::make_mixed_adapter(
            std::sync::Arc::new(|x: &[f64]| x[0].abs()),
            std::sync::Arc::new(|x: &[f64]| vec![x[0].signum()]),
            0.0,
            1.0,
            2.0,
            0.0,
        ) {
            Err(Error::InvalidParameter(_)) => {}
            other => res.fail(format!("adapter exponent range: got {:?}", other.is_ok())),
        }
    }

    // harness self-test: shrinking the certificate must trip the relation
    {
        let (inst, geom, set) = nsp_fixture(101, 6, 1.0);
        let p = inst.nonsmooth_problem(None);
        let mut cfg = RunConfig::new(
            Variant::Classical,
            ModelKind::ExtendedMd,
            ScheduleKind::SimpleAveraging { beta: 0.0 },
            30,
        );
        cfg.c_scale = 0.0;
        match run_nonsmooth(&cfg, &p, &geom, &set) {
            Err(Error::InvariantViolated { .. }) => {}
            other => res.fail(format!(
                "certificate fault injection went undetected: ok={}",
                other.is_ok()
            )),
        }
    }
    res
}
