use nilrigid::dynamics::*;
use nilrigid::gallery::{torus_f2_matrices, Example};
use nilrigid::linalg::QMatrix;
use nilrigid::rigidity::{general_measure_verdict, Budgets, Certificate};
use proptest::prelude::*;

fn hyperbolic() -> FMatrix {
    vec![vec![2.0, 1.0], vec![1.0, 1.0]]
}

fn rotation(theta: f64) -> FMatrix {
    vec![vec![theta.cos(), -theta.sin()], vec![theta.sin(), theta.cos()]]
}

fn cfg(steps: usize) -> WalkConfig {
    WalkConfig { steps, seed: 42, burn_in: 100, start: Start::Random }
}

/// Lines at evenly spaced angles in `[0, pi)`.
fn uniform_lines(k: usize) -> EmpiricalMeasure {
    let pi = std::f64::consts::PI;
    EmpiricalMeasure::uniform(
        (0..k)
            .map(|i| {
                let t = (i as f64 + 0.5) * pi / k as f64;
                vec![t.cos(), t.sin()]
            })
            .collect(),
    )
}

fn binned_tv(a: &EmpiricalMeasure, b: &EmpiricalMeasure, res: usize) -> f64 {
    let (x, y) = (a.binned(res), b.binned(res));
    let keys: std::collections::BTreeSet<_> = x.keys().chain(y.keys()).collect();
    keys.into_iter().map(|k| (x.get(k).unwrap_or(&0.0) - y.get(k).unwrap_or(&0.0)).abs()).sum::<f64>() / 2.0
}

#[test]
fn hyperbolic_gap_matches_eigenvalue_ratio() {
    let l = lyapunov_gap_estimate(&[hyperbolic()], &cfg(100_000)).unwrap();
    // eigenvalues (3 +- sqrt 5)/2 with product 1
    let exact = 2.0 * ((3.0 + 5f64.sqrt()) / 2.0).ln();
    assert!((l.gap().unwrap() - exact).abs() < 0.05 * exact, "{l:?}");
    assert_eq!(l.steps, 100_000);
}

#[test]
fn rotation_gap_vanishes() {
    let l = lyapunov_gap_estimate(&[rotation(1.0)], &cfg(100_000)).unwrap();
    assert!(l.gap().unwrap().abs() < 0.01);
    assert!(l.lambda1.abs() < 1e-9);
}

#[test]
fn free_pair_gap_positive() {
    let l = lyapunov_gap_estimate(&to_f64_matrices(&torus_f2_matrices()), &cfg(100_000)).unwrap();
    assert!(l.gap().unwrap() > 0.5, "{l:?}");
}

#[test]
fn walks_are_deterministic() {
    let mats = to_f64_matrices(&torus_f2_matrices());
    let c = cfg(5_000);
    assert_eq!(random_product_walk(&mats, &c).unwrap(), random_product_walk(&mats, &c).unwrap());
    assert_eq!(lyapunov_gap_estimate(&mats, &c).unwrap(), lyapunov_gap_estimate(&mats, &c).unwrap());
    let other = WalkConfig { seed: 43, ..c.clone() };
    assert_ne!(random_product_walk(&mats, &c).unwrap(), random_product_walk(&mats, &other).unwrap());
}

#[test]
fn irrational_rotation_equidistributes() {
    let traj = random_product_walk(&[rotation(1.0)], &cfg(100_000)).unwrap();
    let m = cesaro_empirical_measure(&traj, 100).unwrap();
    assert!(binned_tv(&m, &uniform_lines(100_000), DEFAULT_RESOLUTION) < 0.05);
}

#[test]
fn hyperbolic_measure_concentrates_on_eigenline() {
    let traj = random_product_walk(&[hyperbolic()], &cfg(10_000)).unwrap();
    let m = cesaro_empirical_measure(&traj, 100).unwrap();
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    assert!(m.mass_near(&[phi, 1.0], 1e-3) >= 0.99);
    // the other free-pair generator moves the eigenline to a different cell
    let b = to_f64_matrices(&torus_f2_matrices()).remove(1);
    assert!(near_invariance_score(&m, &b, DEFAULT_RESOLUTION).unwrap() > 0.2);
}

#[test]
fn uniform_measure_is_rotation_invariant() {
    let m = uniform_lines(4096);
    let s = near_invariance_score(&m, &rotation(std::f64::consts::FRAC_PI_2), DEFAULT_RESOLUTION).unwrap();
    assert!(s < 0.02, "{s}");
}

#[test]
fn short_trajectory_rejected() {
    assert!(cesaro_empirical_measure(&[vec![1.0, 0.0]], 1).is_err());
    assert!(random_product_walk(&[hyperbolic(), vec![vec![1.0]]], &cfg(10)).is_err());
    let bad = WalkConfig { start: Start::Point(vec![1.0, 0.0, 0.0]), ..cfg(10) };
    assert!(random_product_walk(&[hyperbolic()], &bad).is_err());
}

#[test]
fn consistent_with_exact_engine() {
    let budgets = Budgets::default();
    let cases: Vec<(usize, Vec<QMatrix>)> = vec![
        (2, vec![QMatrix::from_i64(&[&[1, 1], &[0, 1]])]),
        (2, vec![QMatrix::from_i64(&[&[0, -1], &[1, 0]])]),
        (2, torus_f2_matrices()),
    ];
    for (n, mats) in cases {
        let v = nilrigid::rigidity::torus_verdict(n, mats.clone(), &budgets).unwrap();
        let f = to_f64_matrices(&mats);
        match v.certificate.unwrap() {
            Certificate::InvariantLine { point, .. } => {
                let m = EmpiricalMeasure::dirac(&point.to_f64());
                for g in &f {
                    assert_eq!(near_invariance_score(&m, g, DEFAULT_RESOLUTION).unwrap(), 0.0);
                }
            }
            Certificate::InvariantPDForm { .. } => {
                // the form is the identity here, so the uniform measure is invariant
                let m = uniform_lines(4096);
                for g in &f {
                    assert!(
                        near_invariance_score(&m, g, DEFAULT_RESOLUTION).unwrap() < 1.0 / DEFAULT_RESOLUTION as f64
                    );
                }
            }
            Certificate::ProximalIrreducible { .. } => {
                assert!(lyapunov_gap_estimate(&f, &cfg(20_000)).unwrap().gap().unwrap() > 0.0);
            }
            c => panic!("unexpected certificate {c:?}"),
        }
    }
    let gs = Example::TorusF2.build().unwrap();
    assert!(general_measure_verdict(&gs, &budgets).certificate.is_some());
}

#[test]
fn summary_json_shape() {
    let c = WalkConfig { steps: 2_000, ..cfg(0) };
    let (s, traj) = summarize(&torus_f2_matrices(), &c, DEFAULT_RESOLUTION).unwrap();
    let j = serde_json::to_value(&s).unwrap();
    assert_eq!(j["lyapunov"].as_array().unwrap().len(), 2);
    assert!(j["near_invariance"]["0"].is_number());
    assert!(j["near_invariance"]["1"].is_number());
    let csv = trajectory_csv(&traj);
    assert!(csv.starts_with("step,x0,x1\n0,"));
    assert_eq!(csv.lines().count(), 2_002);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn measures_are_normalized(seed in any::<u64>(), steps in 10usize..400, a in -3i64..4, b in -3i64..4) {
        let mats = vec![vec![vec![1.0, a as f64], vec![0.0, 1.0]], vec![vec![1.0, 0.0], vec![b as f64, 1.0]]];
        let c = WalkConfig { steps, seed, burn_in: 5, start: Start::Random };
        let traj = random_product_walk(&mats, &c).unwrap();
        prop_assert_eq!(traj.len(), steps + 1);
        for p in &traj {
            let n: f64 = p.iter().map(|x| x * x).sum();
            prop_assert!((n - 1.0).abs() < 1e-12);
        }
        let m = cesaro_empirical_measure(&traj, 5).unwrap();
        prop_assert!((m.total_weight() - 1.0).abs() < 1e-12);
        prop_assert!(m.weights.iter().all(|w| *w >= 0.0));
        let s = near_invariance_score(&m, &mats[0], 32).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&s));
    }
}
