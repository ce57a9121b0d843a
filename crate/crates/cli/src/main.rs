use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use demonsim::bounds::{lhs_bound, lhv_chsh_bound};
use demonsim::harness::demo::run_demo;
use demonsim::harness::io::{self, read_heat_csv, SettingsFile};
use demonsim::harness::{emit_plot_data, execute, sweep_activation, ExperimentSpec, Scenario};
use demonsim::thermo::{detect_anomaly, kt_ln2, DetectorConfig, EnvironmentModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "demonsim", version, about = "Maxwell-demon cheats against steering and Bell tests, with Landauer accounting")]
struct Cli {
    /// Experiment (or, for `bounds`, settings) file in TOML.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the master seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Format of what is printed to stdout.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one experiment from `--config`.
    Run,
    /// Sweep the demon's activation probability.
    Sweep {
        /// Activation probabilities, strictly increasing.
        #[arg(long, value_delimiter = ',', default_value = "0,0.25,0.5,0.75,1")]
        p: Vec<f64>,
        #[arg(long, default_value_t = 1)]
        repetitions: u32,
    },
    /// Print the LHS bound of a settings file and the CHSH local bound.
    Bounds,
    /// Test a heat CSV for a demon's excess.
    Detect {
        #[arg(long)]
        heat: PathBuf,
        /// Background mean per run in joules (ignored with `--config`).
        #[arg(long)]
        mean: Option<f64>,
        /// Background std per run in joules; defaults to kT ln2 at 300 K.
        #[arg(long)]
        std: Option<f64>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        power: Option<f64>,
    },
    /// Run the canned acceptance suite and print a pass/fail table.
    DemoPaper,
}

fn load_spec(cli: &Cli) -> Result<ExperimentSpec> {
    let path = cli.config.as_deref().context("--config is required")?;
    let mut spec = ExperimentSpec::load(path)?;
    if let Some(seed) = cli.seed {
        spec.seed = seed;
    }
    spec.validate()?;
    Ok(spec)
}

fn out_dir(cli: &Cli, spec: Option<&ExperimentSpec>, fallback: &str) -> PathBuf {
    cli.out
        .clone()
        .or_else(|| spec.and_then(|s| s.output.dir.clone()))
        .unwrap_or_else(|| PathBuf::from(fallback))
}

fn print_json(value: &serde_json::Value) -> Result<()> {
    let mut stdout = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut stdout, value)?;
    writeln!(stdout)?;
    Ok(())
}

fn print_csv<T: Serialize>(rows: &[T]) -> Result<()> {
    std::io::stdout().lock().write_all(&io::to_csv_bytes(rows)?)?;
    Ok(())
}

fn run(cli: &Cli) -> Result<()> {
    let spec = load_spec(cli)?;
    let dir = out_dir(cli, Some(&spec), "out");
    let outcome = execute(&spec)?;
    outcome.write(&dir)?;
    let s = &outcome.summary;
    match cli.format {
        Format::Json => print_json(&serde_json::to_value(s)?),
        Format::Csv => print_csv(&[RunRow {
            scenario: s.scenario,
            n_runs: s.n_runs,
            value: s.estimate.value(),
            std_err: s.estimate.std_err(),
            classical_bound: s.classical_bound,
            exceeds_bound: s.exceeds_bound,
            active_runs: s.active_runs,
            ledger_j: s.ledger.joules(),
            ledger_kt_ln2: s.ledger_kt_ln2,
            detected: s.detector.map(|v| v.reject),
        }]),
    }
}

#[derive(Serialize)]
struct RunRow {
    scenario: Scenario,
    n_runs: u64,
    value: f64,
    std_err: f64,
    classical_bound: f64,
    exceeds_bound: bool,
    active_runs: usize,
    #[serde(rename = "ledger_J")]
    ledger_j: f64,
    #[serde(rename = "ledger_kTln2")]
    ledger_kt_ln2: f64,
    detected: Option<bool>,
}

fn sweep(cli: &Cli, p: &[f64], repetitions: u32) -> Result<()> {
    let spec = load_spec(cli)?;
    let dir = out_dir(cli, Some(&spec), "out");
    let result = sweep_activation(&spec, p, repetitions)?;
    io::ensure_dir(&dir)?;
    emit_plot_data(&result, &dir.join("sweep.csv"))?;
    io::write_json(&dir.join("sweep.json"), &result)?;
    match cli.format {
        Format::Json => print_json(&serde_json::to_value(&result)?),
        Format::Csv => print_csv(&result.rows),
    }
}

fn bounds(cli: &Cli) -> Result<()> {
    let path = cli.config.as_deref().context("--config <settings.toml> is required")?;
    let settings = SettingsFile::load(path)?;
    let lhs = lhs_bound(&settings)?;
    let lhv = lhv_chsh_bound();
    match cli.format {
        Format::Json => print_json(&json!({ "m": settings.len(), "lhs": lhs, "lhv_chsh": lhv })),
        Format::Csv => {
            println!("bound,m,value,enumerated");
            println!("lhs,{},{},{}", settings.len(), lhs.value, lhs.enumerated_count);
            println!("lhv_chsh,2,{},{}", lhv.value, lhv.enumerated_count);
            Ok(())
        }
    }
}

fn detect(
    cli: &Cli,
    heat: &Path,
    mean: Option<f64>,
    std: Option<f64>,
    alpha: Option<f64>,
    power: Option<f64>,
) -> Result<()> {
    let (env, mut cfg) = match &cli.config {
        Some(_) => {
            let spec = load_spec(cli)?;
            (spec.environment_model()?, spec.detector)
        }
        None => {
            let std = match std {
                Some(s) => s,
                None => kt_ln2(300.0)?,
            };
            (EnvironmentModel::new(mean.unwrap_or(0.0), std)?, DetectorConfig::default())
        }
    };
    cfg.alpha = alpha.unwrap_or(cfg.alpha);
    cfg.power = power.unwrap_or(cfg.power);
    let record: Vec<f64> = read_heat_csv(heat)?.iter().map(|r| r.joules).collect();
    let verdict = detect_anomaly(&record, &env, &cfg)?;
    match cli.format {
        Format::Json => print_json(&json!({ "environment": env, "detector": cfg, "verdict": verdict })),
        Format::Csv => print_csv(&[verdict]),
    }
}

fn demo_paper(cli: &Cli) -> Result<bool> {
    let seed = cli.seed.unwrap_or(0);
    let dir = out_dir(cli, None, "demo_out");
    let report = run_demo(seed)?;
    report.write(&dir)?;
    match cli.format {
        Format::Json => print_json(&serde_json::to_value(&report.criteria)?)?,
        Format::Csv => print_csv(&report.criteria)?,
    }
    for c in &report.criteria {
        eprintln!(
            "{:>2} {:<46} {}  observed {:.8e} target {:.8e}",
            c.id,
            c.name,
            if c.passed { "PASS" } else { "FAIL" },
            c.observed,
            c.target
        );
    }
    Ok(report.all_passed())
}

fn dispatch(cli: &Cli) -> Result<bool> {
    if let Some(n) = cli.threads {
        if n == 0 {
            bail!("--threads must be at least 1");
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    match &cli.command {
        Command::Run => run(cli)?,
        Command::Sweep { p, repetitions } => sweep(cli, p, *repetitions)?,
        Command::Bounds => bounds(cli)?,
        Command::Detect {
            heat,
            mean,
            std,
            alpha,
            power,
        } => detect(cli, heat, *mean, *std, *alpha, *power)?,
        Command::DemoPaper => return demo_paper(cli),
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("acceptance failed");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
