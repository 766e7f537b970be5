use charblow::check::identity_suite;
use charblow::config::{set_path, ExperimentConfig, SweepConfig, SweepMode};
use charblow::experiment::{run, Experiment};
use charblow::output::{fmt_opt, pick_snapshots};
use charblow::presets;
use charblow::sweep::run_sweep;
use charblow::witness::{witness_table, DEFAULT_FRACTIONS};
use charblow::CliError;
use charblow_core::SystemSpec;
use serde_json::json;

#[test]
fn every_preset_round_trips_through_json() {
    for name in presets::experiment_names() {
        let c = presets::experiment(name).unwrap();
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(ExperimentConfig::from_json(&text).unwrap(), c, "{name}");
    }
}

#[test]
fn unknown_fields_are_rejected() {
    let mut v: serde_json::Value = serde_json::from_str(presets::experiment_json("zero").unwrap()).unwrap();
    v["grid"]["cells"] = json!(3);
    let err = ExperimentConfig::from_json(&v.to_string()).unwrap_err();
    assert!(matches!(err, CliError::Config(_)));
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn set_path_requires_existing_parents() {
    let mut v = json!({"data": {"eps": 0.5}});
    set_path(&mut v, "data.eps", json!(0.25)).unwrap();
    assert_eq!(v["data"]["eps"], 0.25);
    assert!(set_path(&mut v, "grid.m", json!(3)).is_err());
    assert!(set_path(&mut v, "data.eps.x", json!(3)).is_err());
}

#[test]
fn relative_end_time_needs_suitable_data() {
    let mut v: serde_json::Value = serde_json::from_str(presets::experiment_json("zero").unwrap()).unwrap();
    v["t_end"] = json!({"slope_units": 2.0});
    let exp = Experiment::new(ExperimentConfig::from_json(&v.to_string()).unwrap()).unwrap();
    assert!(matches!(run(&exp), Err(CliError::Config(_))));

    let mut v: serde_json::Value = serde_json::from_str(presets::experiment_json("theorem1-psystem").unwrap()).unwrap();
    v["t_end"] = json!({"lifespan_factor": 1.5});
    let exp = Experiment::new(ExperimentConfig::from_json(&v.to_string()).unwrap()).unwrap();
    assert!(matches!(run(&exp), Err(CliError::Config(_))));
}

#[test]
fn slope_units_scale_the_riccati_time() {
    let c = presets::experiment("theorem1-burgers").unwrap();
    let mut small = c.clone();
    small.grid.m = 256;
    let out = run(&Experiment::new(small).unwrap()).unwrap();
    let r = &out.report;
    let w0plus = r.stats.as_ref().unwrap().w0plus;
    // Burgers: γ = 1
    assert!((r.t_end.unwrap() - 2.0 / w0plus).abs() < 1e-12);
}

#[test]
fn snapshot_selection_is_even_and_keeps_the_ends() {
    assert_eq!(pick_snapshots(0, 5), Vec::<usize>::new());
    assert_eq!(pick_snapshots(3, 5), vec![0, 1, 2]);
    assert_eq!(pick_snapshots(10, 1), vec![9]);
    let p = pick_snapshots(101, 5);
    assert_eq!(p, vec![0, 25, 50, 75, 100]);
    let p = pick_snapshots(1000, 50);
    assert_eq!(p.len(), 50);
    assert_eq!((p[0], p[49]), (0, 999));
    assert!(p.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn missing_values_format_as_empty() {
    assert_eq!(fmt_opt(None), "");
    assert_eq!(fmt_opt(Some(f64::INFINITY)), "");
    assert_eq!(fmt_opt(Some(0.1)), "0.1");
}

#[test]
fn witness_raw_quotient_is_sharp() {
    let rows = witness_table(0.0, 2.0, 1.0, 0.25, &DEFAULT_FRACTIONS).unwrap();
    assert_eq!(rows.len(), 4);
    for r in &rows {
        assert!((r.raw_ratio - r.s0_minus_3delta).abs() < 1e-12, "{r:?}");
        assert!(r.mollified_ratio >= r.s0_minus_4delta, "{r:?}");
        assert!(r.mollified_ratio < 2.0);
    }
    assert!(witness_table(0.0, 1.0, 1.0, 0.25, &[0.3]).is_err());
}

#[test]
fn failing_sweep_values_are_recorded_per_row() {
    let cfg = SweepConfig {
        name: "mixed".into(),
        base: Some("theorem1-psystem".into()),
        template: None,
        set: Default::default(),
        parameter: "data.eps".into(),
        values: vec![0.125, -1.0, 0.0625],
        mode: SweepMode::Stats,
    };
    let out = run_sweep(&cfg).unwrap();
    assert_eq!(out.rows.iter().map(|r| r.value).collect::<Vec<_>>(), vec![0.125, -1.0, 0.0625]);
    assert!(out.rows[0].error.is_none() && out.rows[2].error.is_none());
    assert!(out.rows[1].error.is_some());
    assert!(out.rows[1].theta0.is_none());
    assert!(out.theta0_slope.is_some());
}

#[test]
fn scalar_sweep_flips_verdict_with_support_length() {
    let out = run_sweep(&presets::sweep("sweep-scalar-s0").unwrap()).unwrap();
    let verdicts: Vec<&str> = out.rows.iter().map(|r| r.verdict.as_deref().unwrap()).collect();
    assert_eq!(verdicts.first(), Some(&"BLOWUP"));
    assert_eq!(verdicts.last(), Some(&"GLOBAL-ON-Z0"));
    let flip = verdicts.iter().position(|v| *v == "GLOBAL-ON-Z0").unwrap();
    assert!(verdicts[flip..].iter().all(|v| *v == "GLOBAL-ON-Z0"), "{verdicts:?}");
}

#[test]
fn identity_suite_is_reproducible() {
    let sys = SystemSpec::p_system(0.5, 0.5).unwrap();
    let a = identity_suite(&sys, 30, 9).unwrap();
    let b = identity_suite(&sys, 30, 9).unwrap();
    assert_eq!(a, b);
    assert!(a.pass());
    let burgers = identity_suite(&SystemSpec::burgers(1.0, 0.5).unwrap(), 30, 9).unwrap();
    assert!(burgers.pass());
    assert_eq!(burgers.slope_exact_cases, 30);
}
