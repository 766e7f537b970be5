use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::info;

use charblow::check::identity_suite;
use charblow::config::{ExperimentConfig, SweepConfig, SystemRef};
use charblow::experiment::{run, Experiment};
use charblow::output::{print_table, write_json, write_outcome, write_table};
use charblow::sweep::run_sweep;
use charblow::witness::{witness_table, WitnessRow, DEFAULT_FRACTIONS};
use charblow::{presets, CliError, Result};

#[derive(Parser)]
#[command(name = "charblow", version, about = "Gradient blow-up experiments for 1D balance laws")]
struct Cli {
    /// Only print errors.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Source {
    /// JSON configuration file.
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Built-in configuration by name.
    #[arg(long)]
    preset: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write report.json, monitor.csv and snapshots.csv.
    Run {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// Override the number of grid cells.
        #[arg(long)]
        grid_m: Option<usize>,
    },
    /// Run a parameter sweep and write sweep.csv and summary.json.
    Sweep {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Check the coefficient-tensor identities at random states.
    Check {
        /// Named system, or take it from --config/--preset.
        #[arg(long, default_value = "p-system")]
        system: String,
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 100)]
        states: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write the report as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate the witness quotients for decreasing insets.
    Witness {
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        alpha0: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        beta0: f64,
        #[arg(long, default_value_t = 1.0)]
        slope_m: f64,
        /// Mollifier radius as a fraction of the inset.
        #[arg(long, default_value_t = 0.25)]
        eps_over_delta: f64,
        /// Write witness.csv here instead of printing.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the built-in presets.
    Presets,
}

fn experiment_config(source: &Source) -> Result<ExperimentConfig> {
    match (&source.config, &source.preset) {
        (Some(p), _) => ExperimentConfig::from_file(p),
        (None, Some(name)) => presets::experiment(name),
        (None, None) => Err(CliError::Config("need --config or --preset".into())),
    }
}

fn sweep_config(source: &Source) -> Result<SweepConfig> {
    match (&source.config, &source.preset) {
        (Some(p), _) => SweepConfig::from_file(p),
        (None, Some(name)) => presets::sweep(name),
        (None, None) => Err(CliError::Config("need --config or --preset".into())),
    }
}

fn cmd_run(source: &Source, out: &Path, seed: Option<u64>, grid_m: Option<usize>, quiet: bool) -> Result<()> {
    let mut cfg = experiment_config(source)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Some(m) = grid_m {
        cfg.grid.m = m;
    }
    let outputs = cfg.outputs;
    let exp = Experiment::new(cfg)?;
    info!("running '{}' on {}", exp.config.name, exp.system.name());
    let outcome = run(&exp)?;
    write_outcome(out, &outcome, &exp.system, outputs.monitor, outputs.snapshots, outputs.max_snapshots)?;
    let r = &outcome.report;
    if !quiet {
        let t = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.6}"));
        println!(
            "{}: {} t_final={:.6} t_blow={} T_pred={} margin={}{}",
            r.name,
            r.status,
            r.t_final,
            t(r.t_blow_measured),
            t(r.t_pred),
            t(r.margin),
            r.verdict.as_ref().map_or(String::new(), |v| format!(" verdict={v}")),
        );
    }
    match &r.error {
        Some(e) => Err(CliError::Numerical(e.clone())),
        None => Ok(()),
    }
}

fn cmd_sweep(source: &Source, out: &Path, quiet: bool) -> Result<()> {
    let cfg = sweep_config(source)?;
    let res = run_sweep(&cfg)?;
    std::fs::create_dir_all(out)?;
    write_table(&out.join("sweep.csv"), &res.header(cfg.column()), &res.table())?;
    write_json(&out.join("summary.json"), &res)?;
    if !quiet {
        let failed = res.rows.iter().filter(|r| r.error.is_some()).count();
        println!(
            "{}: {} rows, {failed} failed, theta0 slope {}",
            res.name,
            res.rows.len(),
            res.theta0_slope.map_or("-".to_string(), |s| format!("{s:.4}"))
        );
    }
    Ok(())
}

fn cmd_check(system: &str, source: &Source, states: usize, seed: u64, out: Option<&Path>, quiet: bool) -> Result<()> {
    let sys = if source.config.is_some() || source.preset.is_some() {
        experiment_config(source)?.system.build()?
    } else {
        SystemRef::Named(system.to_string()).build()?
    };
    let r = identity_suite(&sys, states, seed)?;
    if let Some(dir) = out {
        std::fs::create_dir_all(dir)?;
        write_json(&dir.join("check.json"), &r)?;
    }
    if !quiet {
        println!("{}", serde_json::to_string_pretty(&r)?);
    }
    if r.pass() {
        Ok(())
    } else {
        Err(CliError::Numerical(format!("identity check failed for {}", r.system)))
    }
}

fn run_cli(cli: Cli) -> Result<()> {
    let quiet = cli.quiet;
    match cli.command {
        Command::Run { source, out, seed, grid_m } => cmd_run(&source, &out, seed, grid_m, quiet),
        Command::Sweep { source, out } => cmd_sweep(&source, &out, quiet),
        Command::Check { system, source, states, seed, out } => {
            cmd_check(&system, &source, states, seed, out.as_deref(), quiet)
        }
        Command::Witness { alpha0, beta0, slope_m, eps_over_delta, out } => {
            let rows = witness_table(alpha0, beta0, slope_m, eps_over_delta, &DEFAULT_FRACTIONS)?;
            let table: Vec<Vec<String>> = rows.iter().map(WitnessRow::fields).collect();
            match out {
                Some(dir) => {
                    std::fs::create_dir_all(&dir)?;
                    write_table(&dir.join("witness.csv"), &WitnessRow::header(), &table)
                }
                None => print_table(&WitnessRow::header(), &table),
            }
        }
        Command::Presets => {
            for n in presets::experiment_names() {
                println!("{n}");
            }
            for n in presets::sweep_names() {
                println!("{n}");
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = if cli.quiet { "error" } else { "warn" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run_cli(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("charblow: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
