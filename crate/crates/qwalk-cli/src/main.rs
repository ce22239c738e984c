//! `qwalk`: simulations, Cesàro averages, angle sweeps, and the
//! verification suite for one-defect quantum walks on the integer line.
//!
//! Exit codes: 0 success, 1 usage error, 2 precondition violation,
//! 3 verification failure. Failures print one machine-readable JSON
//! record to stderr.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use qwalk_cli::commands;
use qwalk_cli::config::{parse_file_config, ExperimentSpec, FileConfig, Format, Overrides};
use qwalk_cli::error::CliError;
use qwalk_cli::report::Table;

#[derive(Parser)]
#[command(
    name = "qwalk",
    version,
    about = "One-defect discrete-time quantum walks on the integer line"
)]
struct Cli {
    /// Key-value config file (TOML); command-line flags override its values.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve the walk n steps and emit the position distribution.
    Simulate(SimulateArgs),
    /// Cesàro-average the first T position measures.
    Timeavg(TimeavgArgs),
    /// Closed-form localization table over a defect-angle grid.
    Sweep(SweepArgs),
    /// Run the verification suite.
    Verify(VerifyArgs),
}

/// Coin selection: a defect angle (with the balanced bulk coin), an angle
/// pair for the bulk, or explicit matrix entries for either coin.
#[derive(Args, Clone, Default)]
struct CoinArgs {
    /// Defect coin angle, radians (degrees with --omega-degrees).
    #[arg(long, allow_negative_numbers = true, value_name = "ANGLE")]
    omega: Option<f64>,

    /// Interpret every angle-valued input as degrees.
    #[arg(long)]
    omega_degrees: bool,

    /// Explicit defect coin "a;b;c;d", entries "re,im"; replaces --omega.
    #[arg(long, value_name = "MATRIX", allow_hyphen_values = true, conflicts_with = "omega")]
    defect: Option<String>,

    /// Bulk coin angle pair (with --bulk-omega-tilde); default is the
    /// balanced coin.
    #[arg(long, allow_negative_numbers = true, value_name = "ANGLE")]
    bulk_omega: Option<f64>,

    /// Second angle of the bulk pair.
    #[arg(long, allow_negative_numbers = true, value_name = "ANGLE")]
    bulk_omega_tilde: Option<f64>,

    /// Explicit bulk coin "a;b;c;d"; replaces the bulk angle pair.
    #[arg(
        long,
        value_name = "MATRIX",
        allow_hyphen_values = true,
        conflicts_with_all = ["bulk_omega", "bulk_omega_tilde"]
    )]
    bulk: Option<String>,
}

/// Initial coin state; both amplitudes or neither (the default is the
/// origin-symmetric state).
#[derive(Args, Clone, Default)]
struct StateArgs {
    /// Amplitude on the left chirality, "re,im".
    #[arg(long, value_name = "COMPLEX", allow_hyphen_values = true)]
    alpha: Option<String>,

    /// Amplitude on the right chirality, "re,im".
    #[arg(long, value_name = "COMPLEX", allow_hyphen_values = true)]
    beta: Option<String>,
}

#[derive(Args, Clone, Default)]
struct OutputArgs {
    /// Output path; stdout when omitted.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Table encoding: csv (default) or json.
    #[arg(long, value_name = "FORMAT")]
    format: Option<String>,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    coin: CoinArgs,
    #[command(flatten)]
    state: StateArgs,
    #[command(flatten)]
    output: OutputArgs,

    /// Number of steps.
    #[arg(long, value_name = "N")]
    steps: Option<usize>,

    /// Keep only rows with |x| <= WINDOW.
    #[arg(long, value_name = "WINDOW")]
    window: Option<i64>,
}

#[derive(Args)]
struct TimeavgArgs {
    #[command(flatten)]
    coin: CoinArgs,
    #[command(flatten)]
    state: StateArgs,
    #[command(flatten)]
    output: OutputArgs,

    /// Averaging horizon T.
    #[arg(long = "T", visible_alias = "horizon", value_name = "T")]
    horizon: Option<usize>,

    /// Append closed-form limit and |difference| columns; the summary
    /// reports the largest difference.
    #[arg(long)]
    compare_theory: bool,

    /// Keep only rows with |x| <= WINDOW.
    #[arg(long, value_name = "WINDOW")]
    window: Option<i64>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    coin: CoinArgs,
    #[command(flatten)]
    state: StateArgs,
    #[command(flatten)]
    output: OutputArgs,

    /// Defect-angle grid "start:stop:count", endpoints included.
    #[arg(long, value_name = "GRID", allow_hyphen_values = true)]
    omega_grid: Option<String>,

    /// Which per-angle table to emit (available: localization).
    #[arg(long, value_name = "KIND")]
    report: Option<String>,

    /// Worker threads; defaults to the available parallelism.
    #[arg(long, value_name = "K")]
    threads: Option<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    output: OutputArgs,

    /// Run only criteria whose name contains this (or a bare number).
    #[arg(long, value_name = "NAME")]
    only: Option<String>,

    /// Emit the machine-readable JSON report instead of text.
    #[arg(long)]
    json: bool,
}

fn coin_overrides(coin: &CoinArgs, state: &StateArgs, output: &OutputArgs) -> Overrides {
    Overrides {
        omega: coin.omega,
        omega_degrees: coin.omega_degrees,
        defect: coin.defect.clone(),
        bulk_omega: coin.bulk_omega,
        bulk_omega_tilde: coin.bulk_omega_tilde,
        bulk: coin.bulk.clone(),
        alpha: state.alpha.clone(),
        beta: state.beta.clone(),
        out: output.out.clone(),
        format: output.format.clone(),
        ..Default::default()
    }
}

/// Writes a finished table to the spec's output path (or stdout) in the
/// spec's format.
fn write_table(spec: &ExperimentSpec, table: &Table) -> Result<(), CliError> {
    let broken = |e: std::io::Error| CliError::precondition("out", e.to_string());
    let emit = |w: &mut dyn Write| match spec.format {
        Format::Csv => table.write_csv(w),
        Format::Json => table.write_json(w),
    };
    match &spec.out {
        Some(path) => {
            let mut file = std::fs::File::create(path).map_err(broken)?;
            emit(&mut file).map_err(broken)?;
            file.flush().map_err(broken)
        }
        None => {
            let stdout = std::io::stdout();
            emit(&mut stdout.lock()).map_err(broken)
        }
    }
}

fn write_text(out: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    let broken = |e: std::io::Error| CliError::precondition("out", e.to_string());
    match out {
        Some(path) => std::fs::write(path, text).map_err(broken),
        None => {
            let stdout = std::io::stdout();
            stdout.lock().write_all(text.as_bytes()).map_err(broken)
        }
    }
}

fn load_file_config(path: Option<&PathBuf>) -> Result<FileConfig, CliError> {
    match path {
        None => Ok(FileConfig::default()),
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                CliError::parse("config", format!("cannot read {}: {e}", path.display()))
            })?;
            parse_file_config(&text).map_err(|e| CliError::parse("config", e))
        }
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let file = load_file_config(cli.config.as_ref())?;
    match cli.command {
        Command::Simulate(args) => {
            let mut flags = coin_overrides(&args.coin, &args.state, &args.output);
            flags.steps = args.steps;
            flags.window = args.window;
            let spec = ExperimentSpec::resolve("simulate", &file, flags)?;
            write_table(&spec, &commands::simulate(&spec)?)?;
            Ok(0)
        }
        Command::Timeavg(args) => {
            let mut flags = coin_overrides(&args.coin, &args.state, &args.output);
            flags.horizon = args.horizon;
            flags.window = args.window;
            flags.compare_theory = args.compare_theory;
            let spec = ExperimentSpec::resolve("timeavg", &file, flags)?;
            let outcome = commands::timeavg(&spec)?;
            write_table(&spec, &outcome.table)?;
            if let (Some(max), Some(_)) = (outcome.max_abs_diff, &spec.out) {
                println!("max |mu_bar - theory| = {max:.16e}");
            }
            Ok(0)
        }
        Command::Sweep(args) => {
            let mut flags = coin_overrides(&args.coin, &args.state, &args.output);
            flags.omega_grid = args.omega_grid;
            flags.report = args.report;
            flags.threads = args.threads;
            let spec = ExperimentSpec::resolve("sweep", &file, flags)?;
            write_table(&spec, &commands::sweep(&spec)?)?;
            Ok(0)
        }
        Command::Verify(args) => {
            let flags = Overrides {
                only: args.only,
                json: args.json,
                out: args.output.out.clone(),
                format: args.output.format.clone(),
                ..Default::default()
            };
            let spec = ExperimentSpec::resolve("verify", &file, flags)?;
            let summary = commands::verify(spec.only.as_deref())?;
            let text = if spec.json {
                let mut json = serde_json::to_string_pretty(&summary.records)
                    .expect("criterion records serialize");
                json.push('\n');
                json
            } else {
                commands::render_verify_text(&summary.records)
            };
            write_text(spec.out.as_ref(), &text)?;
            Ok(if summary.all_pass { 0 } else { 3 })
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version are not errors; everything else is a
            // usage failure.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("{}", err.machine_record());
            std::process::exit(err.exit_code());
        }
    }
}
