use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use mmsec::analysis::AnalysisSettings;
use mmsec::figure::{reproduce_figure, FigureOptions};
use mmsec::scenario::{load_scenario, preset, to_toml, ScenarioParams, FIGURE_NAMES, PRESET_NAMES};
use mmsec::sweep::{run_sweep, write_csv, Mode, SweepSpec};
use mmsec::Error;

/// Secrecy metrics for mmWave cellular networks.
#[derive(Parser)]
#[command(name = "mmsec", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep one parameter and compare analytical values with simulation.
    Sweep(SweepArgs),
    /// Regenerate every curve of a figure preset.
    Figure(FigureArgs),
    /// Print a preset scenario as TOML.
    Preset { name: String },
    /// List preset and figure names.
    List,
}

#[derive(Args)]
struct RunArgs {
    /// Monte Carlo trials per grid point.
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// analytical, simulation or both.
    #[arg(long)]
    mode: Option<Mode>,
    /// Absolute tolerance replacing the per-metric default.
    #[arg(long)]
    tolerance: Option<f64>,
}

#[derive(Args)]
struct SweepArgs {
    /// Scenario TOML file.
    #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
    scenario: Option<PathBuf>,
    /// Built-in scenario name.
    #[arg(long)]
    preset: Option<String>,
    /// Sweep TOML file; inline flags override its fields.
    #[arg(long)]
    sweep: Option<PathBuf>,
    /// Axis name: lambda_e, lambda_b, tc_db, te_db, phi, theta_b.
    #[arg(long)]
    axis: Option<String>,
    /// Comma-separated grid values.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    grid: Option<Vec<f64>>,
    /// Comma-separated metric names.
    #[arg(long, value_delimiter = ',')]
    metrics: Option<Vec<String>>,
    #[command(flatten)]
    run: RunArgs,
    /// CSV output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FigureArgs {
    name: String,
    #[command(flatten)]
    run: RunArgs,
    /// Reports go to `<out-dir>/<name>/`.
    #[arg(long, default_value = "reports")]
    out_dir: PathBuf,
}

enum Failure {
    Usage(String),
    Tolerance,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Tolerance) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("MMSEC_THREADS") else { return Ok(()) };
    let n: usize = v.parse().map_err(|_| format!("MMSEC_THREADS must be a positive integer, got `{v}`"))?;
    if n == 0 {
        return Err("MMSEC_THREADS must be at least 1".into());
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Sweep(a) => sweep(a),
        Command::Figure(a) => figure(a),
        Command::Preset { name } => {
            print!("{}", to_toml(&preset(&name)?)?);
            Ok(())
        }
        Command::List => {
            println!("presets: {}", PRESET_NAMES.join(", "));
            println!("figures: {}", FIGURE_NAMES.join(", "));
            Ok(())
        }
    }
}

fn scenario(a: &SweepArgs) -> Result<ScenarioParams, Failure> {
    match (&a.scenario, &a.preset) {
        (Some(path), _) => Ok(load_scenario(path)?),
        (None, Some(name)) => Ok(preset(name)?),
        (None, None) => Err(Failure::Usage("one of --scenario or --preset is required".into())),
    }
}

fn sweep_spec(a: &SweepArgs) -> Result<SweepSpec, Failure> {
    let mut spec = match &a.sweep {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            Some(SweepSpec::from_toml(&text)?)
        }
        None => None,
    };
    let axis = match (&a.axis, &spec) {
        (Some(s), _) => s.parse()?,
        (None, Some(s)) => s.axis,
        (None, None) => return Err(Failure::Usage("--axis is required without --sweep".into())),
    };
    let grid = match (&a.grid, &spec) {
        (Some(g), _) => g.clone(),
        (None, Some(s)) => s.grid.clone(),
        (None, None) => return Err(Failure::Usage("--grid is required without --sweep".into())),
    };
    let metrics = match (&a.metrics, &spec) {
        (Some(m), _) => m.iter().map(|m| m.parse()).collect::<Result<_, _>>()?,
        (None, Some(s)) => s.metrics.clone(),
        (None, None) => return Err(Failure::Usage("--metrics is required without --sweep".into())),
    };
    let base = spec.take();
    let out = SweepSpec {
        axis,
        grid,
        metrics,
        trials: a.run.trials.or(base.as_ref().map(|s| s.trials)).unwrap_or(100_000),
        seed: a.run.seed.or(base.as_ref().map(|s| s.seed)).unwrap_or(1),
        mode: a.run.mode.or(base.as_ref().map(|s| s.mode)).unwrap_or(Mode::Both),
        tolerance: a.run.tolerance.or(base.and_then(|s| s.tolerance)),
    };
    out.validate()?;
    Ok(out)
}

fn sweep(a: SweepArgs) -> Result<(), Failure> {
    let params = scenario(&a)?;
    let spec = sweep_spec(&a)?;
    let outcome = run_sweep(&params, &spec, &AnalysisSettings::default())?;
    // rows computed before a failure are written either way
    match &a.out {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).map_err(Error::from)?;
            }
            write_csv(std::io::BufWriter::new(fs::File::create(path).map_err(Error::from)?), &outcome.rows)?;
        }
        None => write_csv(std::io::stdout().lock(), &outcome.rows)?,
    }
    if let Some(f) = outcome.error {
        return Err(Failure::Usage(format!("grid point {} ({}={:e}): {}", f.index, spec.axis.name(), f.value, f.error)));
    }
    if outcome.passed() { Ok(()) } else { Err(Failure::Tolerance) }
}

fn figure(a: FigureArgs) -> Result<(), Failure> {
    let options = FigureOptions {
        trials: a.run.trials.unwrap_or(100_000),
        seed: a.run.seed.unwrap_or(1),
        mode: a.run.mode.unwrap_or(Mode::Both),
        tolerance: a.run.tolerance,
    };
    let report = reproduce_figure(&a.name, &options, &AnalysisSettings::default())?;
    let dir: &Path = &a.out_dir.join(&report.name);
    report.write(dir)?;
    let summary = report.summary();
    let _ = std::io::stdout().write_all(summary.as_bytes());
    if report.passed() { Ok(()) } else { Err(Failure::Tolerance) }
}
