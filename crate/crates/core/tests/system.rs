use std::sync::Arc;

use charblow_core::linalg::dot;
use charblow_core::poly::Polynomial;
use charblow_core::system::{Derivatives, PolySystem};
use charblow_core::{Error, SystemSpec};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn lin(c: f64, var: usize, n: usize) -> Polynomial {
    Polynomial::linear(c, var, n)
}

fn konst(c: f64, n: usize) -> Polynomial {
    Polynomial::constant(c, n)
}

fn add(a: Polynomial, b: Polynomial) -> Polynomial {
    Polynomial { terms: a.terms.into_iter().chain(b.terms).collect() }
}

/// A symmetric, strictly hyperbolic 3×3 system with a quadratic source.
fn three_by_three() -> SystemSpec {
    let n = 3;
    let a = vec![
        add(konst(-1.0, n), lin(1.0, 0, n)),
        konst(0.1, n),
        Polynomial::zero(),
        konst(0.1, n),
        add(lin(1.0, 1, n), lin(0.3, 0, n)),
        konst(0.1, n),
        Polynomial::zero(),
        konst(0.1, n),
        add(konst(1.0, n), lin(1.0, 2, n)),
    ];
    let g = vec![
        Polynomial::from_terms([(0.5, vec![2, 0, 0])]),
        Polynomial::from_terms([(-0.2, vec![1, 1, 0])]),
        Polynomial::from_terms([(0.1, vec![0, 0, 2])]),
    ];
    let model = PolySystem::new(n, a, g).unwrap();
    SystemSpec::new("sym3", Arc::new(model), 0.2).unwrap()
}

fn constant_system(g: Vec<Polynomial>) -> SystemSpec {
    let n = 2;
    let a = vec![konst(0.0, n), konst(1.0, n), konst(1.0, n), konst(0.0, n)];
    SystemSpec::new("const", Arc::new(PolySystem::new(n, a, g).unwrap()), 0.5).unwrap()
}

fn random_state(rng: &mut ChaCha8Rng, n: usize, radius: f64) -> Vec<f64> {
    loop {
        let u: Vec<f64> = (0..n).map(|_| rng.random_range(-radius..radius)).collect();
        if dot(&u, &u).sqrt() <= radius {
            return u;
        }
    }
}

fn systems() -> Vec<SystemSpec> {
    vec![
        SystemSpec::burgers(1.0, 0.5).unwrap(),
        SystemSpec::p_system(0.5, 0.5).unwrap(),
        three_by_three(),
    ]
}

#[test]
fn burgers_frame_and_coefficients() {
    let sys = SystemSpec::burgers(1.0, 0.5).unwrap();
    let f = sys.eigenframe(&[0.2]).unwrap();
    assert_eq!(f.lambdas, vec![0.2]);
    assert_eq!(f.left, vec![vec![-1.0]]);
    assert_eq!(f.right, vec![vec![-1.0]]);
    let c = sys.c_tensor(&[0.2]).unwrap();
    assert!((c[(0, 0, 0)] + 1.0).abs() < 1e-14);
    let g = sys.gamma_tensor(&[0.2]).unwrap();
    assert!((g[(0, 0, 0)] - 1.0).abs() < 1e-14);
}

#[test]
fn p_system_speeds_at_origin() {
    let sys = SystemSpec::p_system(0.5, 0.5).unwrap();
    let f = sys.eigenframe(&[0.0, 0.0]).unwrap();
    assert!((f.lambdas[0] + 1.0).abs() < 1e-14);
    assert!((f.lambdas[1] - 1.0).abs() < 1e-14);
}

#[test]
fn frames_are_biorthonormal_in_the_ball() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for sys in systems() {
        let n = sys.n();
        for _ in 0..100 {
            let u = random_state(&mut rng, n, sys.delta1());
            let f = sys.eigenframe(&u).unwrap();
            for i in 0..n {
                assert!((dot(&f.left[i], &f.left[i]).sqrt() - 1.0).abs() < 1e-10);
                for j in 0..n {
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((dot(&f.left[i], &f.right[j]) - want).abs() < 1e-10, "{}", sys.name());
                }
                if i + 1 < n {
                    assert!(f.lambdas[i] < f.lambdas[i + 1]);
                }
            }
        }
    }
}

#[test]
fn coincident_eigenvalues_lose_hyperbolicity() {
    let n = 2;
    let a = vec![konst(1.0, n), Polynomial::zero(), Polynomial::zero(), konst(1.0, n)];
    let g = vec![Polynomial::zero(), Polynomial::zero()];
    let model = PolySystem::new(n, a, g).unwrap();
    let sys = SystemSpec::new("degenerate", Arc::new(model), 0.5).unwrap();
    assert!(matches!(sys.eigenframe(&[0.0, 0.0]), Err(Error::HyperbolicityLost(_))));
    assert!(!sys.check_assumptions().strictly_hyperbolic);
    // complex pair
    let a = vec![Polynomial::zero(), konst(1.0, n), konst(-1.0, n), Polynomial::zero()];
    let g = vec![Polynomial::zero(), Polynomial::zero()];
    let model = PolySystem::new(n, a, g).unwrap();
    let sys = SystemSpec::new("elliptic", Arc::new(model), 0.5).unwrap();
    assert!(matches!(sys.c_tensor(&[0.1, 0.0]), Err(Error::HyperbolicityLost(_))));
}

#[test]
fn constant_jacobian_has_zero_interaction() {
    let sys = constant_system(vec![Polynomial::zero(), Polynomial::zero()]);
    let c = sys.c_tensor(&[0.1, -0.2]).unwrap();
    assert!(c.data.iter().all(|&v| v.abs() < 1e-12));
}

#[test]
fn analytic_and_finite_difference_tensors_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for sys in systems() {
        let fd = sys.clone().with_derivatives(Derivatives::FiniteDifference);
        for _ in 0..20 {
            let u = random_state(&mut rng, sys.n(), sys.delta1());
            let a = sys.coefficients(&u).unwrap();
            let b = fd.coefficients(&u).unwrap();
            let scale = a.c.data.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
            assert!(a.c.max_abs_diff(&b.c) <= 1e-6 * scale, "{}", sys.name());
            let gscale = a.gcoef.max_abs().max(1e-3);
            let gdiff = a.gcoef.data.iter().zip(&b.gcoef.data).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
            assert!(gdiff <= 1e-6 * gscale.max(1.0), "{}", sys.name());
        }
    }
}

#[test]
fn gamma_identities_at_random_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for sys in systems() {
        let n = sys.n();
        for _ in 0..100 {
            let u = random_state(&mut rng, n, sys.delta1());
            let t = sys.coefficients(&u).unwrap();
            let raw = sys.gamma_tensor_raw(&u).unwrap();
            for i in 0..n {
                assert!((t.gamma[(i, i, i)] + t.c[(i, i, i)]).abs() < 1e-14);
                assert!(t.gamma[(i, i, i)] > 0.0, "{} at {u:?}", sys.name());
                for j in 0..n {
                    if j != i {
                        assert!(t.gamma[(i, j, j)].abs() < 1e-12, "{}", sys.name());
                    }
                    assert!(t.big_gamma[(i, j, j)].abs() < 1e-12, "Γ_{i}{j}{j} in {}", sys.name());
                    for k in 0..n {
                        assert_eq!(t.gamma[(i, j, k)].to_bits(), t.gamma[(i, k, j)].to_bits());
                        assert!((raw[(i, j, k)] - raw[(i, k, j)]).abs() < 1e-12, "{}", sys.name());
                    }
                }
            }
        }
    }
}

#[test]
fn gamma_is_positive_for_burgers() {
    let sys = SystemSpec::burgers(1.0, 0.5).unwrap();
    let g = sys.gamma_tensor(&[0.0]).unwrap();
    assert_eq!(g[(0, 0, 0)], 1.0);
}

#[test]
fn source_tensor_examples() {
    for sys in systems() {
        let z = vec![0.0; sys.n()];
        assert!(sys.source_tensor(&z).unwrap().max_abs() < 1e-14, "{}", sys.name());
    }
    for k in [0.5, 1.0, -2.0] {
        let sys = SystemSpec::burgers(k, 0.5).unwrap();
        for u in [-0.3, 0.1, 0.4] {
            let g = sys.source_tensor(&[u]).unwrap();
            assert!((g[(0, 0)] - 2.0 * k * u).abs() < 1e-12);
        }
    }
    let sys = SystemSpec::p_system(0.0, 0.5).unwrap();
    assert!(sys.source_tensor(&[0.2, -0.1]).unwrap().max_abs() < 1e-14);
}

#[test]
fn assumption_report_examples() {
    assert!(SystemSpec::burgers(1.0, 0.5).unwrap().check_assumptions().all_pass());
    assert!(SystemSpec::p_system(0.5, 0.5).unwrap().check_assumptions().all_pass());

    let r = constant_system(vec![Polynomial::zero(), Polynomial::zero()]).check_assumptions();
    assert!(r.strictly_hyperbolic);
    assert!(!r.genuinely_nonlinear);
    assert!(r.source_vanishes);

    let r = constant_system(vec![lin(1.0, 0, 2), lin(1.0, 1, 2)]).check_assumptions();
    assert!(!r.source_vanishes);
    assert!((r.source_gradient_norm - 2f64.sqrt()).abs() < 1e-12);
}

#[test]
fn eigenvalue_gradient_converges_at_slope_two() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for sys in systems() {
        let n = sys.n();
        for _ in 0..5 {
            let u = random_state(&mut rng, n, 0.5 * sys.delta1());
            let dir: Vec<f64> = {
                let d = random_state(&mut rng, n, 1.0);
                let s = dot(&d, &d).sqrt();
                d.iter().map(|v| v / s).collect()
            };
            let f = sys.eigenframe(&u).unwrap();
            let c = sys.c_tensor(&u).unwrap();
            let hs = [1e-2, 1e-3, 1e-4, 1e-5];
            let mut errs = Vec::new();
            for &h in &hs {
                let du: Vec<f64> = dir.iter().map(|d| h * d).collect();
                let up: Vec<f64> = u.iter().zip(&du).map(|(a, b)| a + b).collect();
                let g = sys.eigenframe(&up).unwrap();
                let mut e = 0.0f64;
                for i in 0..n {
                    let lin: f64 = (0..n).map(|k| c[(i, i, k)] * dot(&f.left[k], &du)).sum();
                    e = e.max((g.lambdas[i] - f.lambdas[i] - lin).abs());
                }
                errs.push(e);
            }
            let lx: Vec<f64> = hs.iter().map(|h| h.ln()).collect();
            let ly: Vec<f64> = errs.iter().map(|e| e.max(1e-300).ln()).collect();
            // fit over the first three steps; the last is at the rounding floor for n = 1
            let slope = fit(&lx[..3], &ly[..3]);
            if errs[0] > 1e-13 {
                assert!((slope - 2.0).abs() < 0.2, "{} slope {slope} errs {errs:?}", sys.name());
            } else {
                // λ linear in u (Burgers): the first-order formula is exact
                assert!(errs.iter().all(|&e| e < 1e-12));
            }
        }
    }
}

fn fit(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

#[test]
fn scalar_specialization_is_the_characteristic_riccati() {
    // W' = γ₁₁₁ W² + g₁₁ W must read W² + 2kUW
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let k = rng.random_range(-2.0..2.0);
        let sys = SystemSpec::burgers(k, 0.5).unwrap();
        let u = rng.random_range(-0.5..0.5);
        let w = rng.random_range(-5.0..5.0);
        let t = sys.coefficients(&[u]).unwrap();
        let lhs = t.gamma[(0, 0, 0)] * w * w + t.gcoef[(0, 0)] * w;
        let rhs = w * w + 2.0 * k * u * w;
        assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs.abs()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn p_system_gamma_is_positive_in_the_ball(r in 0.0f64..0.5, th in 0.0f64..std::f64::consts::TAU) {
        let sys = SystemSpec::p_system(0.5, 0.5).unwrap();
        let u = [r * th.cos(), r * th.sin()];
        let g = sys.gamma_tensor(&u).unwrap();
        prop_assert!(g[(0, 0, 0)] > 0.0);
        prop_assert!(g[(1, 1, 1)] > 0.0);
    }
}
