use charblow_core::diagnostics::{blowup_report, distinguished_characteristic, monitor};
use charblow_core::exact::scalar_w;
use charblow_core::exact::ScalarCharacteristic;
use charblow_core::poly::PolyField;
use charblow_core::profile::{make_barlin, make_bump};
use charblow_core::solver::{solve, strips, Grid, SolveOptions, Status, Trajectory};
use charblow_core::theta::{stats, w_initial};
use charblow_core::{Error, Profile, SystemSpec};

fn run(sys: &SystemSpec, u0: &Profile, m: usize, t_end: f64, opts: SolveOptions) -> Trajectory {
    let (lo, hi) = u0.support();
    let grid = Grid::for_envelope(sys, lo, hi, t_end, m, 16.0).unwrap();
    solve(sys, u0, grid, t_end, opts).unwrap()
}

fn p_system_preset() -> (SystemSpec, Profile) {
    let sys = SystemSpec::p_system(0.5, 0.5).unwrap();
    let r2 = sys.anchor().unwrap().right[1].clone();
    let u0 = make_barlin(PolyField::linear(&r2), make_bump(0.0, 0.45, 8.0).unwrap(), 0.0625, 1.0).unwrap();
    (sys, u0)
}

#[test]
fn zero_field_monitors_vanish() {
    let sys = SystemSpec::p_system(0.5, 0.5).unwrap();
    let u0 = Profile::zero(2, -0.3, 0.3).unwrap();
    let traj = run(&sys, &u0, 256, 1.0, SolveOptions::default());
    let st = strips(&traj, &sys, -0.3, 0.3).unwrap();
    let mon = monitor(&traj, &sys, &st).unwrap();
    assert_eq!(mon.len(), traj.snapshots.len());
    for s in [&mon.w, &mon.v, &mon.u, &mon.g, &mon.j] {
        assert!(s.iter().all(|&v| v == 0.0));
    }
    assert!(mon.nondecreasing());
    assert!(matches!(distinguished_characteristic(&sys, &u0), Err(Error::NotApplicable(_))));
}

#[test]
fn scalar_gradient_monitor_matches_the_exact_envelope() {
    let k = 1.0;
    let sys = SystemSpec::burgers(k, 0.5).unwrap();
    let u0 = make_bump(0.0, 0.5, -0.3).unwrap();
    let traj = run(&sys, &u0, 2048, 3.0, SolveOptions::default());
    assert_eq!(traj.status, Status::BlowupDetected);
    let (lo, hi) = u0.support();
    let st = strips(&traj, &sys, lo, hi).unwrap();
    let mon = monitor(&traj, &sys, &st).unwrap();
    assert!(mon.nondecreasing());

    let feet: Vec<ScalarCharacteristic> = (1..4000)
        .map(|q| {
            let z = lo + (hi - lo) * q as f64 / 4000.0;
            ScalarCharacteristic::new(k, u0.scalar(z, 0), -u0.scalar(z, 1))
        })
        .collect();
    let t_star = feet.iter().map(|c| c.gradient_lifespan()).fold(f64::INFINITY, f64::min);
    let mut running = 0.0f64;
    let mut checked = 0;
    for (t, w) in mon.times.iter().zip(&mon.w) {
        if *t > 0.9 * t_star {
            break;
        }
        let exact = feet.iter().map(|c| scalar_w(c, *t).unwrap().abs()).fold(0.0, f64::max);
        running = running.max(exact);
        assert!((w - running).abs() <= 0.02 * running, "t = {t}: {w} vs {running}");
        checked += 1;
    }
    assert!(checked > 20);
}

#[test]
fn scalar_distinguished_foot_is_the_steepest_descent() {
    let sys = SystemSpec::burgers(1.0, 0.5).unwrap();
    let u0 = make_bump(0.2, 0.4, 0.3).unwrap();
    let (i, z) = distinguished_characteristic(&sys, &u0).unwrap();
    let e = u0.argmin_derivative().unwrap();
    assert_eq!(i, 0);
    assert!((z - e.x).abs() < 1e-6, "{z} vs {}", e.x);
}

#[test]
fn symmetric_twin_bumps_pick_the_left_foot() {
    let sys = SystemSpec::burgers(1.0, 0.5).unwrap();
    let b = make_bump(0.0, 0.3, 0.2).unwrap();
    let u0 = Profile::sum(vec![b.shifted(-0.5), b.shifted(0.5)]).unwrap();
    let (_, z) = distinguished_characteristic(&sys, &u0).unwrap();
    let e = b.argmin_derivative().unwrap();
    assert!((z - (e.x - 0.5)).abs() < 1e-6, "{z}");
    // mirrored data gives the mirrored feet, still the leftmost
    let m = Profile::sum(vec![b.shifted(0.5), b.shifted(-0.5)]).unwrap();
    let (_, z2) = distinguished_characteristic(&sys, &m).unwrap();
    assert!((z - z2).abs() < 1e-12);
}

#[test]
fn p_system_distinguished_slope_equals_w0plus() {
    let (sys, u0) = p_system_preset();
    let s = stats(&sys, &u0).unwrap();
    let (i, z) = distinguished_characteristic(&sys, &u0).unwrap();
    let w = w_initial(&sys, &u0, i, z).unwrap();
    assert!((w - s.w0plus).abs() <= 1e-8 * s.w0plus, "{w} vs {}", s.w0plus);
    // dense oracle
    let (lo, hi) = u0.support();
    let dense = (0..=200_000)
        .map(|q| {
            let x = lo + (hi - lo) * q as f64 / 200_000.0;
            (0..2).map(|f| w_initial(&sys, &u0, f, x).unwrap()).fold(f64::NEG_INFINITY, f64::max)
        })
        .fold(f64::NEG_INFINITY, f64::max);
    assert!(w >= dense * (1.0 - 1e-12));
}

#[test]
fn burgers_barlin_blows_up_inside_the_window() {
    let sys = SystemSpec::burgers(1.0, 0.5).unwrap();
    let u0 = make_barlin(PolyField::identity(), make_bump(0.0, 0.45, 8.0).unwrap(), 0.0625, 1.0).unwrap();
    let s = stats(&sys, &u0).unwrap();
    let traj = run(&sys, &u0, 2048, 2.0 / s.w0plus, SolveOptions::default());
    assert_eq!(traj.status, Status::BlowupDetected);
    let (lo, hi) = u0.support();
    let st = strips(&traj, &sys, lo, hi).unwrap();
    let mon = monitor(&traj, &sys, &st).unwrap();
    assert!(mon.nondecreasing());
    let r = blowup_report(&traj, &sys, &u0, &s, &st, Some(&mon)).unwrap();
    let tb = r.t_blow_measured.unwrap();
    assert!(tb > 0.0 && tb.is_finite());
    assert!(r.margin.unwrap() < 1.0);
    assert!(r.calw_t0_ok);
    assert!(r.monotone_after_t0);
    assert_eq!(r.riccati_lower_ok, Some(true));
}

#[test]
fn p_system_preset_report() {
    let (sys, u0) = p_system_preset();
    let s = stats(&sys, &u0).unwrap();
    let gamma = sys.gamma_tensor(&[0.0, 0.0]).unwrap()[(1, 1, 1)];
    let opts = SolveOptions { resolution_cells: 4.0, ..SolveOptions::default() };
    let traj = run(&sys, &u0, 2048, 2.0 / (gamma * s.w0plus), opts);
    assert_eq!(traj.status, Status::BlowupDetected);
    let (lo, hi) = u0.support();
    let st = strips(&traj, &sys, lo, hi).unwrap();
    let mon = monitor(&traj, &sys, &st).unwrap();
    assert!(mon.nondecreasing());
    let r = blowup_report(&traj, &sys, &u0, &s, &st, Some(&mon)).unwrap();
    assert!(r.t0_obs > 0.0 && r.t0_obs.is_finite());
    assert!(r.margin.unwrap() < 1.0);
    assert!(r.calw_t0_ok, "{:?}", r.calw_t0);
    assert!(r.monotone_after_t0);
    assert_eq!(r.riccati_lower_ok, Some(true));
    // off-strip gradients stay below the on-strip ones
    assert!(mon.v.last().unwrap() < mon.w.last().unwrap());
}
