//! Builds problems from instance files, resolves schedules, drives the
//! engine, and maps traces to telemetry rows.

use crate::config::{FamilySpec, ModelSpec, ProblemSpec, RunClass, RunSpec, ScheduleSpec, VariantSpec};
use crate::instance_io::{
    from_holder, from_lasso, from_pwl, from_quadratic, InstanceFile, SetSpec,
};
use crate::telemetry::TelemetryRow;
use anyhow::{anyhow, bail, Context, Result};
use proxgrad::engine::{
    certificate_bounds, cgm_smooth_bounds, cgm_weak_bounds, nonsmooth_simple_bounds, run_cgm,
    run_nonsmooth, run_structured, structured_constant_bounds, weak_smooth_bounds, Reference,
    RunConfig, RunTrace, Variant, WeakClosedForm,
};
use proxgrad::geometry::{FeasibleSet, NormKind, ProxGeometry};
use proxgrad::instances::{gen_holder, gen_lasso, gen_pwl_strong, gen_quadratic};
use proxgrad::models::ModelKind;
use proxgrad::problems::{make_inexact_oracle_adapter, NonSmoothProblem, StructuredProblem};
use proxgrad::rng::SplitMix64;
use proxgrad::schedules::{tune_gamma, ScheduleKind};

/// Pairs sampled when estimating Holder constants at generation time.
pub const HOLDER_SAMPLE_PAIRS: usize = 10_000;

/// Generate one instance file from its spec, deterministically from the seed.
pub fn generate_instance(spec: &ProblemSpec, seed: u64, index: u64) -> Result<InstanceFile> {
    let mut rng = SplitMix64::new(seed).fork(index);
    let dim = spec.family.dim();
    let set = spec.set.build(dim);

    // an interior point of the set, used as the constructed optimum
    let interior = |rng: &mut SplitMix64| -> Vec<f64> {
        match &spec.set {
            SetSpec::Unconstrained => rng.normal_vec(dim).iter().map(|v| 0.5 * v).collect(),
            SetSpec::Box { half_width } => (0..dim)
                .map(|_| rng.range(-0.5 * half_width, 0.5 * half_width))
                .collect(),
            SetSpec::Simplex => {
                // strictly interior: blend a Dirichlet draw with the center
                let draw = FeasibleSet::Simplex { dim }.sample(rng);
                draw.iter().map(|v| 0.5 * v + 0.5 / dim as f64).collect()
            }
            SetSpec::Ball { radius } => {
                let dir = rng.normal_vec(dim);
                let n = NormKind::L2.eval(&dir).max(1e-12);
                let r = 0.5 * radius * rng.next_f64();
                dir.iter().map(|v| r * v / n).collect()
            }
        }
    };

    Ok(match &spec.family {
        FamilySpec::Quadratic { dim, l, sigma } => {
            let xs = interior(&mut rng);
            let inst = gen_quadratic(&mut rng, *dim, *l, *sigma, xs);
            from_quadratic(&spec.id, &inst, spec.set.clone(), spec.geometry)
        }
        FamilySpec::PwlStrong { dim, pieces, sigma } => {
            let vertex = interior(&mut rng);
            let inst = gen_pwl_strong(&mut rng, *dim, *pieces, *sigma, vertex);
            from_pwl(&spec.id, &inst, spec.set.clone(), spec.geometry)
        }
        FamilySpec::Holder {
            dim,
            terms,
            rho,
            mu,
        } => {
            let anchor = interior(&mut rng);
            let sample_set = match &spec.set {
                // estimate over a box around the anchor when unconstrained
                SetSpec::Unconstrained => FeasibleSet::symmetric_box(*dim, 2.0),
                _ => set,
            };
            let inst = gen_holder(
                &mut rng,
                *dim,
                *terms,
                *rho,
                *mu,
                anchor,
                &sample_set,
                HOLDER_SAMPLE_PAIRS,
            );
            from_holder(&spec.id, &inst, spec.set.clone(), spec.geometry)
        }
        FamilySpec::Lasso { rows, dim, tau } => {
            let inst = gen_lasso(&mut rng, *rows, *dim, *tau);
            from_lasso(&spec.id, &inst, spec.set.clone(), spec.geometry)
        }
    })
}

/// Everything a single (run, problem) execution needs.
pub struct BuiltJob {
    pub experiment: String,
    pub geom: ProxGeometry,
    pub set: FeasibleSet,
    pub reference: Option<Reference>,
    pub kind: BuiltProblem,
    pub run_cfg: RunConfig,
    pub class: RunClass,
    /// Constants used to select the closed-form bound column.
    pub bound_ctx: BoundContext,
}

pub enum BuiltProblem {
    Nonsmooth(NonSmoothProblem),
    Structured(StructuredProblem),
}

#[derive(Clone, Debug)]
pub enum BoundContext {
    NonsmoothSimple,
    StructuredConstant { l: f64, delta: f64 },
    CgmSmooth { l: f64 },
    CgmWeak { m: f64, rho: f64, diam: f64 },
    WeakHolder { l: f64, m: f64, rho: f64, closed: WeakClosedForm },
    None,
}

fn to_variant(v: VariantSpec) -> Variant {
    match v {
        VariantSpec::Classical => Variant::Classical,
        VariantSpec::Modified => Variant::Modified,
    }
}

fn to_model(m: ModelSpec) -> ModelKind {
    match m {
        ModelSpec::ExtendedMd => ModelKind::ExtendedMd,
        ModelSpec::DualAveraging => ModelKind::DualAveraging,
        ModelSpec::Hybrid => ModelKind::Hybrid,
    }
}

/// Assemble a job: build the problem object, resolve schedule constants, and
/// pick the closed-form bound that matches the configuration.
pub fn build_job(run: &RunSpec, inst: &InstanceFile, strict: bool) -> Result<BuiltJob> {
    let dim = inst.dim();
    let set = inst.set.build(dim);
    let geom = inst.geometry.build(dim, &inst.set)?;
    let reference = match (inst.x_star()?, inst.f_star) {
        (Some(x), Some(f)) => Some(Reference { x_star: x, f_star: f }),
        _ => None,
    };

    // problem object plus the constants the schedules and bounds need
    let (built, sigma_f, sigma_f_bar, l_const, holder_m_rho) = match (&run.class, &inst.family) {
        (RunClass::Nonsmooth, crate::instance_io::FamilyData::PwlStrong { sigma, .. }) => {
            let p = inst.pwl()?.nonsmooth_problem(None);
            (BuiltProblem::Nonsmooth(p), *sigma, *sigma, 0.0, None)
        }
        (RunClass::Nonsmooth, crate::instance_io::FamilyData::Quadratic { sigma, .. }) => {
            let p = inst.quadratic()?.nonsmooth_problem(*sigma);
            (BuiltProblem::Nonsmooth(p), *sigma, *sigma, 0.0, None)
        }
        (
            RunClass::Structured | RunClass::Cgm,
            crate::instance_io::FamilyData::Quadratic { l, sigma, .. },
        ) => {
            let quad = inst.quadratic()?;
            let declared = if run.class == RunClass::Cgm { 0.0 } else { *sigma };
            let p = quad.smooth_problem(&geom, declared)?;
            let p = wrap_oracle(run, p, &geom, *l, declared)?;
            (BuiltProblem::Structured(p), declared, declared, *l, None)
        }
        (
            RunClass::Structured | RunClass::Cgm,
            crate::instance_io::FamilyData::Holder { rho, mu, m_est, .. },
        ) => {
            let hol = inst.holder()?;
            let declared = if run.class == RunClass::Cgm { 0.0 } else { *mu };
            let p = hol.structured_problem(declared)?;
            (
                BuiltProblem::Structured(p),
                declared,
                declared,
                *mu,
                Some((*m_est, *rho)),
            )
        }
        (RunClass::Structured, crate::instance_io::FamilyData::Lasso { l, .. }) => {
            let p = inst.lasso()?.composite_problem(&geom)?;
            (BuiltProblem::Structured(p), 0.0, 0.0, *l, None)
        }
        (class, fam) => bail!("run class {class:?} does not apply to {fam:?}"),
    };

    let schedule = resolve_schedule(
        &run.schedule,
        &geom,
        sigma_f,
        sigma_f_bar,
        l_const,
        holder_m_rho,
        reference.as_ref(),
        run.class,
    )?;

    let mut run_cfg = RunConfig::new(
        to_variant(run.variant),
        to_model(run.model),
        schedule.clone(),
        run.iterations,
    );
    run_cfg.strict = strict;
    if let Some(scale) = run.certificate_scale {
        run_cfg.c_scale = scale;
    }

    // closed-form bound selection
    let delta = run.oracle_delta.unwrap_or(0.0);
    let bound_ctx = match (&run.class, &schedule) {
        (RunClass::Nonsmooth, ScheduleKind::SimpleAveraging { .. }) if sigma_f > 0.0 => {
            BoundContext::NonsmoothSimple
        }
        (RunClass::Structured, ScheduleKind::ClassicalStructured { .. })
        | (RunClass::Structured, ScheduleKind::ModifiedStructured { .. }) => {
            BoundContext::StructuredConstant { l: l_const, delta }
        }
        (RunClass::Cgm, _) => match holder_m_rho {
            Some((m, rho)) => BoundContext::CgmWeak {
                m,
                rho,
                diam: set
                    .diameter(geom.norm.kind)
                    .ok_or_else(|| anyhow!("bounded set required"))?,
            },
            None => BoundContext::CgmSmooth { l: l_const },
        },
        (RunClass::Structured, ScheduleKind::WeakNonStrong { gamma, .. }) => match holder_m_rho {
            Some((m, rho)) => BoundContext::WeakHolder {
                l: l_const,
                m,
                rho,
                closed: WeakClosedForm::NonStrong { gamma: *gamma },
            },
            None => BoundContext::None,
        },
        (RunClass::Structured, ScheduleKind::WeakStrong { p, beta, .. }) => match holder_m_rho {
            Some((m, rho)) => BoundContext::WeakHolder {
                l: l_const,
                m,
                rho,
                closed: WeakClosedForm::Strong { p: *p, beta: *beta },
            },
            None => BoundContext::None,
        },
        _ => BoundContext::None,
    };

    Ok(BuiltJob {
        experiment: format!("{}__{}", run.id, inst.id),
        geom,
        set,
        reference,
        kind: built,
        run_cfg,
        class: run.class,
        bound_ctx,
    })
}

fn wrap_oracle(
    run: &RunSpec,
    p: StructuredProblem,
    geom: &ProxGeometry,
    l: f64,
    mu: f64,
) -> Result<StructuredProblem> {
    match run.oracle_delta {
        Some(delta) if delta > 0.0 => {
            Ok(make_inexact_oracle_adapter(&p, delta, l, mu, geom, 0x6f72_61c1_u64)?)
        }
        _ => Ok(p),
    }
}

/// Default power for the strongly convex Holder schedule:
/// `max(1, ceil((3 rho - 2)/(2 - rho)))`, which always lands in the fastest
/// decay branch since `p + 1 > (3 rho - 2)/(2 - rho)` then holds strictly.
pub fn default_power(rho: f64) -> f64 {
    ((3.0 * rho - 2.0) / (2.0 - rho)).ceil().max(1.0)
}

#[allow(clippy::too_many_arguments)]
fn resolve_schedule(
    spec: &ScheduleSpec,
    geom: &ProxGeometry,
    sigma_f: f64,
    sigma_f_bar: f64,
    l_const: f64,
    holder: Option<(f64, f64)>,
    reference: Option<&Reference>,
    class: RunClass,
) -> Result<ScheduleKind> {
    let sigma_d = geom.sigma_d;
    Ok(match spec {
        ScheduleSpec::SimpleAveraging { beta } => {
            if class == RunClass::Cgm && *beta != 0.0 {
                bail!("conditional gradient runs need beta = 0");
            }
            ScheduleKind::SimpleAveraging { beta: *beta }
        }
        ScheduleSpec::ClassicalStructured => ScheduleKind::ClassicalStructured {
            l: l_const,
            sigma_d,
            sigma_f,
            sigma_f_bar,
        },
        ScheduleSpec::ModifiedStructured => ScheduleKind::ModifiedStructured {
            l: l_const,
            sigma_d,
            sigma_f,
            sigma_f_bar,
        },
        ScheduleSpec::WeakNonstrong { gamma } => {
            let (m, rho) = holder.ok_or_else(|| {
                anyhow!("the growing-scaling schedule needs a Holder instance")
            })?;
            let gamma = match gamma {
                Some(g) => *g,
                None => {
                    let r = reference
                        .ok_or_else(|| anyhow!("tuning gamma needs a reference optimum"))?;
                    let d_star = geom
                        .prox_value(&r.x_star)
                        .map_err(|e| anyhow!("{e}"))?
                        .max(1e-12);
                    tune_gamma(m, sigma_d, rho, d_star).map_err(|e| anyhow!("{e}"))?
                }
            };
            ScheduleKind::WeakNonStrong {
                l: l_const,
                sigma_d,
                rho,
                gamma,
            }
        }
        ScheduleSpec::WeakStrong { p, beta } => {
            let (_, rho) = holder
                .ok_or_else(|| anyhow!("the power schedule needs a Holder instance"))?;
            ScheduleKind::WeakStrong {
                l: l_const,
                sigma_d,
                p: p.unwrap_or_else(|| default_power(rho)),
                beta: *beta,
                sigma_f_bar,
            }
        }
    })
}

/// Execute a job and flatten its trace into telemetry rows.
pub fn execute(job: &BuiltJob) -> Result<(Vec<TelemetryRow>, RunTrace)> {
    let trace = match (&job.kind, job.class) {
        (BuiltProblem::Nonsmooth(p), _) => run_nonsmooth(&job.run_cfg, p, &job.geom, &job.set),
        (BuiltProblem::Structured(p), RunClass::Cgm) => {
            run_cgm(&job.run_cfg, p, &job.geom, &job.set)
        }
        (BuiltProblem::Structured(p), _) => run_structured(&job.run_cfg, p, &job.geom, &job.set),
    }
    // keep the typed engine error downcastable so the CLI can map strict-mode
    // invariant violations to their own exit code
    .map_err(|e| anyhow::Error::new(e).context(job.experiment.clone()))?;

    let closed: Option<Vec<f64>> = match (&job.bound_ctx, &job.reference) {
        (BoundContext::NonsmoothSimple, Some(_)) => {
            Some(nonsmooth_simple_bounds(&trace, job.geom.sigma_d, None).map_err(|e| anyhow!("{e}"))?)
        }
        (BoundContext::StructuredConstant { l, delta }, Some(r)) => Some(
            structured_constant_bounds(
                &trace,
                &job.geom,
                r,
                *l,
                trace.sigma_f,
                trace.sigma_f_bar,
                *delta,
            )
            .map_err(|e| anyhow!("{e}"))?,
        ),
        (BoundContext::CgmSmooth { l }, Some(_)) => Some(cgm_smooth_bounds(&trace, *l, 0.0)),
        (BoundContext::CgmWeak { m, rho, diam }, Some(_)) => {
            Some(cgm_weak_bounds(job.run_cfg.iterations, 0.0, *m, *rho, *diam))
        }
        (BoundContext::WeakHolder { l, m, rho, closed }, Some(r)) => Some(
            weak_smooth_bounds(&trace, &job.geom, r, *l, *m, *rho, *closed)
                .map_err(|e| anyhow!("{e}"))?
                .into_iter()
                .map(|row| row.closed_form)
                .collect(),
        ),
        _ => None,
    };

    let rows = match &job.reference {
        Some(r) => {
            let table = certificate_bounds(&trace, &job.geom, r, closed.as_deref())
                .map_err(|e| anyhow!("{e}"))?;
            trace
                .rows
                .iter()
                .zip(&table)
                .map(|(row, b)| TelemetryRow {
                    experiment: job.experiment.clone(),
                    k: row.k,
                    f_hat: row.f_hat,
                    gap: b.gap,
                    strong_term: b.strong_term,
                    c_k: row.c_cert,
                    s_k: row.s_cum,
                    beta_k: row.beta,
                    general_bound: b.general_bound,
                    closed_form_bound: b.closed_form.unwrap_or(f64::NAN),
                    cert_residual: row.cert_residual,
                    wall_ns: 0,
                })
                .collect()
        }
        None => trace
            .rows
            .iter()
            .map(|row| TelemetryRow {
                experiment: job.experiment.clone(),
                k: row.k,
                f_hat: row.f_hat,
                gap: f64::NAN,
                strong_term: f64::NAN,
                c_k: row.c_cert,
                s_k: row.s_cum,
                beta_k: row.beta,
                general_bound: f64::NAN,
                closed_form_bound: f64::NAN,
                cert_residual: row.cert_residual,
                wall_ns: 0,
            })
            .collect(),
    };
    Ok((rows, trace))
}

/// Load an instance file and check its schema version.
pub fn load_instance(path: &std::path::Path) -> Result<InstanceFile> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let inst: InstanceFile = serde_json::from_str(&text)
        .with_context(|| format!("parsing {}", path.display()))?;
    if inst.schema != crate::instance_io::SCHEMA_VERSION {
        bail!(
            "{}: unsupported schema {} (expected {})",
            path.display(),
            inst.schema,
            crate::instance_io::SCHEMA_VERSION
        );
    }
    Ok(inst)
}
