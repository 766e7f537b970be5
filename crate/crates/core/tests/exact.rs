use charblow_core::exact::{
    classify_theorem2, integrate_scalar_characteristic, riccati_eval, riccati_tmax, riccati_tmax_bound, scalar_u,
    scalar_v, scalar_w, RiccatiParams, ScalarCharacteristic, Verdict,
};
use charblow_core::ode::{dopri5, OdeOptions, OdeStop};
use charblow_core::profile::{make_bump, make_witness, BSpline};
use charblow_core::{Error, Profile, WitnessSpec};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn riccati_ode(p: &RiccatiParams, t: f64) -> f64 {
    let (a, b) = (p.alpha, p.beta);
    let sol = dopri5(
        |_, y, d| d[0] = a * y[0] * y[0] - b * y[0],
        0.0,
        &[p.y0],
        t,
        OdeOptions { rtol: 1e-13, atol: 1e-15, ..OdeOptions::default() },
        |_, _| false,
    );
    assert_eq!(sol.stop, OdeStop::Completed);
    sol.last().1[0]
}

#[test]
fn riccati_eval_examples() {
    for (a, b, y0) in [(1.0, 1.0, 2.0), (0.3, 0.0, 0.7), (2.0, 5.0, 1.0)] {
        let p = RiccatiParams::new(a, b, y0).unwrap();
        assert_eq!(riccati_eval(&p, 0.0).unwrap(), y0);
    }
    let p = RiccatiParams::new(1.0, 1.0, 2.0).unwrap();
    let y = riccati_eval(&p, 0.5).unwrap();
    let oracle = riccati_ode(&p, 0.5);
    assert!((y - oracle).abs() <= 1e-10 * oracle, "{y} vs {oracle}");
    let p = RiccatiParams::new(1.0, 0.0, 1.0).unwrap();
    assert!((riccati_eval(&p, 0.5).unwrap() - 2.0).abs() < 1e-15);
}

#[test]
fn riccati_eval_past_lifespan_is_a_domain_error() {
    let p = RiccatiParams::new(1.0, 1.0, 2.0).unwrap();
    assert!(matches!(riccati_eval(&p, 0.7), Err(Error::Domain(_))));
    assert!(matches!(riccati_eval(&p, std::f64::consts::LN_2), Err(Error::Domain(_))));
    assert!(riccati_eval(&p, 0.69).is_ok());
}

#[test]
fn riccati_tmax_examples() {
    let p = RiccatiParams::new(1.0, 2.0, 1.0).unwrap();
    assert_eq!(riccati_tmax(&p), f64::INFINITY);
    let p = RiccatiParams::new(1.0, 1.0, 2.0).unwrap();
    assert!((riccati_tmax(&p) - std::f64::consts::LN_2).abs() < 1e-15);
    // the numeric solution runs away just before ln 2
    let sol = dopri5(
        |_, y, d| d[0] = y[0] * y[0] - y[0],
        0.0,
        &[2.0],
        1.0,
        OdeOptions::default(),
        |_, y| y[0] > 1e12,
    );
    let (t, _) = sol.last();
    assert!(sol.stop != OdeStop::Completed && (t - std::f64::consts::LN_2).abs() < 1e-6, "{t}");
    let p = RiccatiParams::new(1.0, 0.0, 1.0).unwrap();
    assert_eq!(riccati_tmax(&p), 1.0);
}

#[test]
fn riccati_params_are_validated() {
    assert!(RiccatiParams::new(0.0, 1.0, 1.0).is_err());
    assert!(RiccatiParams::new(1.0, -1.0, 1.0).is_err());
    assert!(RiccatiParams::new(1.0, 1.0, 0.0).is_err());
    assert!(RiccatiParams::new(f64::NAN, 1.0, 1.0).is_err());
}

#[test]
fn riccati_tmax_is_below_the_quadratic_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut checked = 0;
    for _ in 0..1000 {
        let a = rng.random_range(0.01..10.0);
        let y0 = rng.random_range(0.01..10.0);
        let b = rng.random_range(0.0..1.0) * a * y0;
        let p = RiccatiParams::new(a, b, y0).unwrap();
        if let Some(bound) = riccati_tmax_bound(&p) {
            assert!(riccati_tmax(&p) < bound);
            checked += 1;
        }
    }
    assert!(checked > 300);
}

#[test]
fn riccati_solution_satisfies_the_ode() {
    let p = RiccatiParams::new(1.3, 0.7, 1.1).unwrap();
    let t = 0.5 * riccati_tmax(&p);
    let resid = |h: f64| {
        let d = (riccati_eval(&p, t + h).unwrap() - riccati_eval(&p, t - h).unwrap()) / (2.0 * h);
        let y = riccati_eval(&p, t).unwrap();
        (d - (p.alpha * y * y - p.beta * y)).abs()
    };
    let hs = [1e-2, 5e-3, 2.5e-3];
    let r: Vec<f64> = hs.iter().map(|&h| resid(h)).collect();
    for w in r.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!((order - 2.0).abs() < 0.1, "{r:?}");
    }
}

#[test]
fn scalar_u_examples() {
    let c = ScalarCharacteristic::new(1.0, 0.0, 1.0);
    for t in [0.0, 1.0, 100.0] {
        assert_eq!(scalar_u(&c, t).unwrap(), 0.0);
    }
    let c = ScalarCharacteristic::new(1.0, -0.5, 1.0);
    assert!((scalar_u(&c, 2.0).unwrap() + 0.25).abs() < 1e-15);
    let sol = integrate_scalar_characteristic(&c, 0.0, 2.0, 1e12, OdeOptions::default());
    assert!((sol.last().1[1] + 0.25).abs() < 1e-12);
    let c = ScalarCharacteristic::new(1.0, 0.5, 1.0);
    assert!(scalar_u(&c, 1.999).is_ok());
    assert!(matches!(scalar_u(&c, 2.0), Err(Error::BlownUp { t }) if (t - 2.0).abs() < 1e-15));
}

#[test]
fn scalar_w_examples() {
    let c = ScalarCharacteristic::new(1.0, -0.5, 1.0);
    assert_eq!(c.a, 0.5);
    assert_eq!(scalar_w(&c, 0.0).unwrap(), 1.0);
    let w = scalar_w(&c, 1.0).unwrap();
    assert!((w - 4.0 / 3.0).abs() < 1e-15);
    let sol = integrate_scalar_characteristic(&c, 0.0, 1.0, 1e12, OdeOptions::default());
    assert!((sol.last().1[2] - 4.0 / 3.0).abs() < 1e-11);
    // W₀ = a: global decay
    let c = ScalarCharacteristic::new(1.0, -0.5, 0.5);
    for t in [0.5, 5.0, 50.0] {
        assert!((scalar_w(&c, t).unwrap() - 0.5 / (1.0 + 0.5 * t)).abs() < 1e-15);
    }
    let c = ScalarCharacteristic::new(1.0, -0.5, 1.0);
    assert!(matches!(scalar_w(&c, 2.0), Err(Error::BlownUp { .. })));
}

#[test]
fn scalar_w_matches_the_reciprocal_chain() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..200 {
        let k = rng.random_range(0.1..3.0);
        let u0z = rng.random_range(-1.0..1.0);
        let w0 = rng.random_range(0.1..5.0);
        let c = ScalarCharacteristic::new(k, u0z, w0);
        let life = c.gradient_lifespan().min(c.value_lifespan()).min(10.0);
        let t = rng.random_range(0.0..0.9) * life;
        let w = scalar_w(&c, t).unwrap();
        let v = scalar_v(&c, t);
        assert!((w * v - 1.0).abs() <= 1e-12, "w {w} v {v}");
    }
}

#[test]
fn classify_examples() {
    // closed-form data: u0z = -0.5, W0 = 1 → T_max = 2
    let c = ScalarCharacteristic::new(1.0, -0.5, 1.0);
    assert!((c.gradient_lifespan() - 2.0).abs() < 1e-15);
    let sol = integrate_scalar_characteristic(&c, 0.0, 3.0, 1e10, OdeOptions::default());
    let (t, _) = sol.last();
    assert!(sol.stop == OdeStop::Event && t < 2.0 && t > 1.999, "{t}");

    // mollified witness on [0,2], k = 1, δ = 0.2 ≤ 0.25
    let spec = WitnessSpec::sharp(0.0, 2.0, 0.2, 1.0, 0.05);
    let u0 = make_witness(spec).unwrap().mollified().unwrap();
    let r = classify_theorem2(1.0, &u0).unwrap();
    assert_eq!(r.verdict, Verdict::GlobalOnZ0, "{r:?}");
    assert!(r.a >= r.w0);
    let sol = integrate_scalar_characteristic(&r.characteristic(), r.z0, 50.0, 1e8, OdeOptions::default());
    assert_eq!(sol.stop, OdeStop::Completed);

    let z = Profile::zero(1, 0.0, 1.0).unwrap();
    assert!(matches!(classify_theorem2(1.0, &z), Err(Error::DegenerateInput(_))));
}

#[test]
fn positive_value_at_the_minimizer_is_u_blowup() {
    let u0 = make_bump(0.0, 1.0, 0.5).unwrap();
    let r = classify_theorem2(1.0, &u0).unwrap();
    assert!(r.u0z > 0.0);
    match r.verdict {
        Verdict::UBlowup { t_max, t_u } => {
            assert!(t_max < t_u);
            assert!((t_u - 1.0 / r.u0z).abs() < 1e-12);
        }
        v => panic!("{v:?}"),
    }
}

#[test]
fn short_support_never_classifies_global() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..200 {
        let n = rng.random_range(1..=6);
        let coeffs: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let s0 = rng.random_range(0.1..2.0);
        let lo = rng.random_range(-1.0..1.0);
        let u0 = Profile::spline(BSpline::uniform(lo, lo + s0, coeffs).unwrap());
        let k = rng.random_range(0.05..1.0) / s0;
        let r = classify_theorem2(k, &u0).unwrap();
        assert_ne!(r.verdict, Verdict::GlobalOnZ0, "{r:?}");
        assert!(r.a < r.w0);
    }
}

#[test]
fn long_support_admits_a_global_witness() {
    for (k, s0) in [(1.0, 2.0), (2.0, 1.0), (0.5, 5.0), (1.0, 1.5)] {
        let delta = (k * s0 - 1.0) / (4.0 * k);
        let spec = WitnessSpec::sharp(0.0, s0, delta.min(0.24 * s0), 1.0, 0.25 * delta.min(0.24 * s0));
        let u0 = make_witness(spec).unwrap().mollified().unwrap();
        let r = classify_theorem2(k, &u0).unwrap();
        assert_eq!(r.verdict, Verdict::GlobalOnZ0, "k {k} s0 {s0}: {r:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn closed_form_w_agrees_with_the_coupled_ode(
        k in 0.2f64..2.0, u0z in -1.0f64..0.0, w0 in 0.1f64..3.0, frac in 0.05f64..0.9,
    ) {
        let c = ScalarCharacteristic::new(k, u0z, w0);
        let t = frac * c.gradient_lifespan().min(20.0);
        let sol = integrate_scalar_characteristic(&c, 0.0, t, 1e12, OdeOptions::default());
        prop_assert_eq!(sol.stop, OdeStop::Completed);
        let y = sol.last().1;
        let u = scalar_u(&c, t).unwrap();
        let w = scalar_w(&c, t).unwrap();
        prop_assert!((y[1] - u).abs() <= 1e-9 * (1.0 + u.abs()));
        prop_assert!((y[2] - w).abs() <= 1e-9 * (1.0 + w.abs()));
    }
}
