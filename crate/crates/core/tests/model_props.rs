//! Structural property checks on retained auxiliary-function traces: the
//! recursive minorization, the aggregate model bound, pair domination for the
//! coupled construction, growth at the minimizer, and the freedom to mix the
//! two single-sequence updates.

use proxgrad::engine::{run_nonsmooth, run_structured, RunConfig, Variant};
use proxgrad::geometry::{FeasibleSet, ProxGeometry, PsiKind};
use proxgrad::instances::{gen_pwl_strong, gen_quadratic};
use proxgrad::models::{check_properties, da_step, emd_step, AuxStep, AuxTrace, ModelKind};
use proxgrad::rng::SplitMix64;
use proxgrad::schedules::ScheduleKind;

fn probes(set: &FeasibleSet, extra: &[Vec<f64>], count: usize, rng: &mut SplitMix64) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = extra.to_vec();
    while out.len() < count {
        out.push(set.sample(rng));
    }
    out
}

#[test]
fn properties_hold_for_all_models_on_structured_runs() {
    let mut rng = SplitMix64::new(200);
    let dim = 5;
    let inst = gen_quadratic(&mut rng, dim, 8.0, 1.0, vec![0.3; dim]);
    let geom = ProxGeometry::euclidean(vec![0.0; dim]);
    let set = FeasibleSet::symmetric_box(dim, 2.0);
    let p = inst.smooth_problem(&geom, 1.0).unwrap();
    for model in [ModelKind::ExtendedMd, ModelKind::DualAveraging, ModelKind::Hybrid] {
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
                30,
            );
            cfg.track_aux = true;
            let trace = run_structured(&cfg, &p, &geom, &set).unwrap();
            let aux = trace.aux.as_ref().unwrap();
            let pts = probes(&set, &[inst.x_star.clone()], 100, &mut rng);
            let report = check_properties(aux, &geom, &pts).unwrap();
            assert!(
                report.passes(1e-9),
                "{model:?}/{variant:?}: worst {:?}",
                report
            );
        }
    }
}

#[test]
fn properties_hold_on_nonsmooth_runs_and_entropy_geometry() {
    let mut rng = SplitMix64::new(201);
    let dim = 4;
    let inst = gen_pwl_strong(&mut rng, dim, 8, 1.0, vec![0.1; dim]);
    let p = inst.nonsmooth_problem(None);

    // Euclidean over a box
    let geom = ProxGeometry::euclidean(vec![0.0; dim]);
    let set = FeasibleSet::symmetric_box(dim, 2.0);
    for model in [ModelKind::ExtendedMd, ModelKind::DualAveraging] {
        let mut cfg = RunConfig::new(
            Variant::Classical,
            model,
            ScheduleKind::SimpleAveraging { beta: 0.0 },
            30,
        );
        cfg.track_aux = true;
        let trace = run_nonsmooth(&cfg, &p, &geom, &set).unwrap();
        let pts = probes(&set, &[], 100, &mut rng);
        let report = check_properties(trace.aux.as_ref().unwrap(), &geom, &pts).unwrap();
        assert!(report.passes(1e-9), "{model:?}: {report:?}");
    }

    // entropy geometry over the simplex: objective restricted there
    let geom = ProxGeometry::entropy_simplex(dim);
    let set = FeasibleSet::Simplex { dim };
    let mut cfg = RunConfig::new(
        Variant::Modified,
        ModelKind::ExtendedMd,
        ScheduleKind::SimpleAveraging { beta: 0.0 },
        25,
    );
    cfg.track_aux = true;
    let trace = run_nonsmooth(&cfg, &p, &geom, &set).unwrap();
    let pts = probes(&set, &[], 100, &mut rng);
    let report = check_properties(trace.aux.as_ref().unwrap(), &geom, &pts).unwrap();
    assert!(report.passes(1e-9), "entropy: {report:?}");
}

#[test]
fn initialization_is_exact() {
    // the k = -1 state has minimum value exactly zero at the prox-center,
    // checked through a one-step trace whose collapse constant must carry it
    let mut rng = SplitMix64::new(202);
    let dim = 3;
    let inst = gen_pwl_strong(&mut rng, dim, 5, 1.0, vec![0.0; dim]);
    let p = inst.nonsmooth_problem(None);
    let geom = ProxGeometry::euclidean(vec![0.2; dim]);
    let set = FeasibleSet::symmetric_box(dim, 1.5);
    let mut cfg = RunConfig::new(
        Variant::Classical,
        ModelKind::ExtendedMd,
        ScheduleKind::SimpleAveraging { beta: 1.0 },
        0,
    );
    cfg.track_aux = true;
    let trace = run_nonsmooth(&cfg, &p, &geom, &set).unwrap();
    let aux = trace.aux.as_ref().unwrap();
    let step = &aux.steps[0];
    // phi_0(x) = lambda_0 m(x_0; x) + beta_0 d(x) - beta_{-1} l_d(x0; x)
    let m0 = step
        .model
        .eval(&geom, PsiKind::Zero, &geom.center)
        .unwrap();
    let phi0_at_center = step.phi.eval(&geom, PsiKind::Zero, &geom.center).unwrap();
    // at the prox-center d = 0 and l_d(x0; x0) = 0: phi_0(x0) = lambda_0 f(x0)
    assert!((phi0_at_center - step.lambda * m0).abs() <= 1e-12);
}

#[test]
fn mixed_update_order_still_satisfies_properties() {
    // alternate the two single-sequence updates by hand and re-check the
    // structural conditions; any interleaving is admissible
    let mut rng = SplitMix64::new(203);
    let dim = 4;
    let inst = gen_pwl_strong(&mut rng, dim, 6, 0.7, vec![0.0; dim]);
    let p = inst.nonsmooth_problem(None);
    let geom = ProxGeometry::euclidean(vec![0.0; dim]);
    let set = FeasibleSet::symmetric_box(dim, 2.0);
    let psi = PsiKind::Zero;
    let sigma_f = p.sigma_f;

    let k_max = 20usize;
    let lambda: Vec<f64> = (0..=k_max).map(|k| (k as f64 + 1.0) / 2.0).collect();
    let beta = 0.5_f64; // constant scaling
    let mut s_cum = 0.0;

    let mut steps: Vec<AuxStep> = Vec::new();
    let mut x = geom.center.clone();
    let mut z_prev = geom.center.clone();
    let mut phi = proxgrad::models::init_aux(beta, &geom);
    let mut phi_min = 0.0;

    for k in 0..=k_max {
        let lam = lambda[k];
        let s_prev = s_cum;
        s_cum += lam;
        let model = p.lower_model(&geom, &x).unwrap();
        phi = if k % 2 == 0 {
            emd_step(phi_min, &z_prev, &model, lam, beta, beta, s_prev, sigma_f, &geom).unwrap()
        } else {
            da_step(&phi, &model, lam, beta, beta)
        };
        let z = phi.minimize(&geom, &set, psi).unwrap();
        phi_min = phi.eval(&geom, psi, &z).unwrap();
        steps.push(AuxStep {
            lambda: lam,
            beta,
            s_cum,
            model,
            phi: phi.clone(),
            psi_fn: phi.clone(),
            z: z.clone(),
            w: z.clone(),
            phi_min,
            psi_min: phi_min,
        });
        x = z.clone(); // classical update
        z_prev = z;
    }
    let trace = AuxTrace {
        kind: ModelKind::ExtendedMd,
        sigma_f,
        beta_minus1: beta,
        start: geom.center.clone(),
        psi,
        steps,
    };
    let pts = probes(&set, &[], 100, &mut rng);
    let report = check_properties(&trace, &geom, &pts).unwrap();
    assert!(report.passes(1e-9), "mixed trace: {report:?}");
}

#[test]
fn dual_averaging_minorization_slack_is_nonnegative() {
    // for the accumulation update the minorization residual equals the
    // strong-convexity slack, so it must be (weakly) positive at every probe
    let mut rng = SplitMix64::new(204);
    let dim = 3;
    let inst = gen_pwl_strong(&mut rng, dim, 5, 1.0, vec![0.1; dim]);
    let p = inst.nonsmooth_problem(None);
    let geom = ProxGeometry::euclidean(vec![0.0; dim]);
    let set = FeasibleSet::symmetric_box(dim, 1.0);
    let mut cfg = RunConfig::new(
        Variant::Classical,
        ModelKind::DualAveraging,
        ScheduleKind::SimpleAveraging { beta: 0.0 },
        15,
    );
    cfg.track_aux = true;
    let trace = run_nonsmooth(&cfg, &p, &geom, &set).unwrap();
    let pts = probes(&set, &[], 100, &mut rng);
    let report = check_properties(trace.aux.as_ref().unwrap(), &geom, &pts).unwrap();
    assert!(report.worst_minorization >= -1e-12, "{report:?}");
}
