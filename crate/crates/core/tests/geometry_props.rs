//! Property tests for norms, Bregman machinery, and the subproblem solvers.

use proptest::prelude::*;
use proxgrad::geometry::{
    dot, lmo, solve_canonical, FeasibleSet, NormKind, ProxGeometry, PsiKind, MEMBERSHIP_TOL,
};
use proxgrad::rng::SplitMix64;

fn vec_pair(dim: usize) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (
        prop::collection::vec(-10.0..10.0f64, dim),
        prop::collection::vec(-10.0..10.0f64, dim),
    )
}

proptest! {
    // |<s, x>| <= ||s||_* ||x|| for every norm pair
    #[test]
    fn holder_inequality((s, x) in vec_pair(6)) {
        for kind in [NormKind::L1, NormKind::L2, NormKind::LInf] {
            let lhs = dot(&s, &x).abs();
            let rhs = kind.dual_eval(&s) * kind.eval(&x);
            prop_assert!(lhs <= rhs + 1e-9 * rhs.max(1.0));
        }
    }

    // d(x) = l_d(y; x) + xi(y, x) exactly, Euclidean case
    #[test]
    fn three_point_identity_euclidean((y, x) in vec_pair(5)) {
        let geom = ProxGeometry::euclidean(vec![0.5; 5]);
        let d = geom.prox_value(&x).unwrap();
        let rebuilt = geom.linearize_d(&y, &x).unwrap() + geom.bregman(&y, &x).unwrap();
        let scale = d.abs().max(1.0);
        prop_assert!((d - rebuilt).abs() <= 1e-10 * scale);
    }

    // unconstrained solver satisfies stationarity against random directions
    #[test]
    fn canonical_solver_stationarity((s, dir) in vec_pair(4), beta in 0.1..5.0f64) {
        let geom = ProxGeometry::euclidean(vec![0.0; 4]);
        let set = FeasibleSet::Unconstrained { dim: 4 };
        let xs = solve_canonical(&geom, &set, PsiKind::Zero, &s, beta, 0.0).unwrap();
        // grad of <s,.> + beta d at the solution, dotted with any direction
        let g: Vec<f64> = (0..4).map(|i| s[i] + beta * xs[i]).collect();
        prop_assert!(dot(&g, &dir).abs() <= 1e-9 * (1.0 + dot(&dir, &dir).sqrt()));
    }
}

#[test]
fn three_point_identity_entropy_sampled() {
    let geom = ProxGeometry::entropy_simplex(5);
    let set = FeasibleSet::Simplex { dim: 5 };
    let mut rng = SplitMix64::new(71);
    for _ in 0..1000 {
        let y = set.sample(&mut rng);
        let x = set.sample(&mut rng);
        let d = geom.prox_value(&x).unwrap();
        let rebuilt = geom.linearize_d(&y, &x).unwrap() + geom.bregman(&y, &x).unwrap();
        assert!((d - rebuilt).abs() <= 1e-10 * d.abs().max(1.0));
    }
}

#[test]
fn strong_convexity_on_samples() {
    // xi(y, x) >= sigma_d/2 ||x - y||^2 in both geometries, 1000 pairs each
    let mut rng = SplitMix64::new(7);

    let geom = ProxGeometry::euclidean(vec![0.25; 4]);
    let set = FeasibleSet::symmetric_box(4, 3.0);
    for _ in 0..1000 {
        let y = set.sample(&mut rng);
        let x = set.sample(&mut rng);
        let diff: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a - b).collect();
        let xi = geom.bregman(&y, &x).unwrap();
        let lower = 0.5 * geom.sigma_d * NormKind::L2.eval(&diff).powi(2);
        assert!(xi >= lower - 1e-10 * lower.max(1.0));
        // Euclidean Bregman also grows quadratically with A = 1
        let upper = 0.5 * geom.quad_growth.unwrap() * NormKind::L2.eval(&diff).powi(2);
        assert!(xi <= upper + 1e-10 * upper.max(1.0));
    }

    let geom = ProxGeometry::entropy_simplex(4);
    let set = FeasibleSet::Simplex { dim: 4 };
    for _ in 0..1000 {
        let y = set.sample(&mut rng);
        let x = set.sample(&mut rng);
        let diff: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a - b).collect();
        let xi = geom.bregman(&y, &x).unwrap();
        let lower = 0.5 * geom.sigma_d * NormKind::L1.eval(&diff).powi(2);
        assert!(xi >= lower - 1e-10 * lower.max(1.0), "{xi} vs {lower}");
    }
}

#[test]
fn prox_function_nonnegative_and_zero_at_center() {
    let mut rng = SplitMix64::new(8);
    let geom = ProxGeometry::euclidean(vec![0.1, -0.2, 0.3]);
    assert_eq!(geom.prox_value(&geom.center).unwrap(), 0.0);
    let set = FeasibleSet::symmetric_box(3, 2.0);
    for _ in 0..200 {
        assert!(geom.prox_value(&set.sample(&mut rng)).unwrap() >= 0.0);
    }
    let geom = ProxGeometry::entropy_simplex(6);
    assert!(geom.prox_value(&geom.center).unwrap().abs() < 1e-15);
    let set = FeasibleSet::Simplex { dim: 6 };
    for _ in 0..200 {
        assert!(geom.prox_value(&set.sample(&mut rng)).unwrap() >= -1e-12);
    }
}

/// Directional derivative of `<s,.> + beta d + w Psi` at `xs` toward `x`.
fn directional(
    geom: &ProxGeometry,
    psi: PsiKind,
    s: &[f64],
    beta: f64,
    w: f64,
    xs: &[f64],
    x: &[f64],
) -> f64 {
    let gd = geom.prox_grad(xs).unwrap();
    let mut v = 0.0;
    for i in 0..x.len() {
        let dir = x[i] - xs[i];
        v += (s[i] + beta * gd[i]) * dir;
        if let PsiKind::L1 { weight } = psi {
            v += w * weight
                * if xs[i] > 1e-12 {
                    dir
                } else if xs[i] < -1e-12 {
                    -dir
                } else {
                    dir.abs()
                };
        }
    }
    v
}

#[test]
fn canonical_solver_optimality_over_sets() {
    // first-order optimality toward 100 random feasible points per case
    let mut rng = SplitMix64::new(9);
    let cases: Vec<(ProxGeometry, FeasibleSet, PsiKind)> = vec![
        (
            ProxGeometry::euclidean(vec![0.0; 4]),
            FeasibleSet::symmetric_box(4, 1.0),
            PsiKind::Zero,
        ),
        (
            ProxGeometry::euclidean(vec![0.1; 4]),
            FeasibleSet::symmetric_box(4, 1.0),
            PsiKind::L1 { weight: 0.4 },
        ),
        (
            ProxGeometry::euclidean(vec![0.0; 4]),
            FeasibleSet::Ball {
                center: vec![0.2; 4],
                radius: 1.5,
            },
            PsiKind::Zero,
        ),
        (
            ProxGeometry::entropy_simplex(4),
            FeasibleSet::Simplex { dim: 4 },
            PsiKind::Zero,
        ),
    ];
    for (geom, set, psi) in &cases {
        for _ in 0..20 {
            let s = rng.normal_vec(4);
            let beta = rng.range(0.2, 4.0);
            let w = if matches!(psi, PsiKind::L1 { .. }) { 1.0 } else { 0.0 };
            let xs = solve_canonical(geom, set, *psi, &s, beta, w).unwrap();
            assert!(set.contains(&xs, 1e-7), "solution stays feasible");
            for _ in 0..100 {
                let x = set.sample(&mut rng);
                let dd = directional(geom, *psi, &s, beta, w, &xs, &x);
                assert!(dd >= -1e-7, "directional derivative {dd} at {xs:?}");
            }
        }
    }
}

#[test]
fn lmo_extremality_against_samples() {
    let mut rng = SplitMix64::new(10);
    let sets = [
        FeasibleSet::symmetric_box(5, 2.0),
        FeasibleSet::Simplex { dim: 5 },
        FeasibleSet::Ball {
            center: vec![0.3; 5],
            radius: 1.0,
        },
    ];
    for set in &sets {
        for _ in 0..20 {
            let s = rng.normal_vec(5);
            let v = lmo(set, &s).unwrap();
            assert!(set.contains(&v, MEMBERSHIP_TOL));
            let base = dot(&s, &v);
            for _ in 0..1000 {
                let x = set.sample(&mut rng);
                assert!(base <= dot(&s, &x) + 1e-9);
            }
        }
    }
}
