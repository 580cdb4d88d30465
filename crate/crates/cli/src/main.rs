//! `lfcurve`: fit, evaluate and test labor-force driven models of inflation
//! and unemployment from the command line.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.
//! Failures print one line `error[<kind>]: <message>` to standard error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lfcurve::{Error, ErrorKind};

#[derive(Debug, Parser)]
#[command(
    name = "lfcurve",
    version,
    about = "Labor-force driven models of inflation and unemployment"
)]
struct Cli {
    /// Directory for CSV (and SVG) artifacts.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Also write SVG charts into the output directory.
    #[arg(long, global = true)]
    svg: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Calibrate a model on measured data.
    Fit(FitArgs),
    /// Evaluate a registry model on a labor-force series.
    Predict(PredictArgs),
    /// Residual stationarity report for measured vs predicted.
    Diagnose(DiagnoseArgs),
    /// Re-evaluate a country's models on the data named in a manifest.
    Replicate(ReplicateArgs),
    /// Evaluate a model on a projected labor force.
    Project(ProjectArgs),
    /// List, export or import the model registry.
    Registry(RegistryArgs),
}

#[derive(Debug, Args)]
struct SeriesArgs {
    /// Labor-force levels (CSV `year,value`).
    #[arg(long)]
    lf: Option<PathBuf>,
    /// Unemployment rate as a fraction (CSV).
    #[arg(long)]
    ue: Option<PathBuf>,
    /// Inflation rate as a fraction (CSV).
    #[arg(long)]
    inflation: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct FitArgs {
    #[command(flatten)]
    series: SeriesArgs,
    /// Fitted quantity; defaults to inflation when --inflation is given.
    #[arg(long)]
    target: Option<String>,
    /// Add the unemployment term (inflation target only).
    #[arg(long)]
    generalized: bool,
    /// Labor-force lags to try, e.g. `0..12` or `3`.
    #[arg(long, default_value = "0..12")]
    lag_range: String,
    /// Unemployment lags to try for the generalized form.
    #[arg(long, default_value = "0")]
    ue_lag_range: String,
    /// Candidate break years, comma separated.
    #[arg(long = "break", value_delimiter = ',')]
    breaks: Vec<i32>,
    /// Centered moving-average window applied to the labor-force growth.
    #[arg(long)]
    smooth: Option<usize>,
    /// `cumulative-rms` or `dynamic-rms`.
    #[arg(long, default_value = "cumulative-rms")]
    objective: String,
    /// Restrict the evaluation years, e.g. `1965..2004`.
    #[arg(long)]
    eval_range: Option<String>,
    /// Accept fewer than 30 points.
    #[arg(long)]
    allow_short: bool,
    /// Pin the unemployment coefficient.
    #[arg(long, allow_hyphen_values = true)]
    pin_ue: Option<f64>,
}

#[derive(Debug, Args)]
struct ModelArgs {
    #[arg(long)]
    country: String,
    /// Model name within the country entry; defaults to the first canonical model.
    #[arg(long)]
    model: Option<String>,
    /// Registry table to use instead of the built-in registry.
    #[arg(long)]
    registry: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PredictArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    series: SeriesArgs,
}

#[derive(Debug, Args)]
struct DiagnoseArgs {
    /// Measured rate series (CSV).
    #[arg(long)]
    measured: Option<PathBuf>,
    /// Predicted rate series (CSV).
    #[arg(long)]
    predicted: Option<PathBuf>,
    /// Predict with a registry model instead of reading --predicted.
    #[arg(long)]
    country: Option<String>,
    #[arg(long)]
    model: Option<String>,
    #[command(flatten)]
    series: SeriesArgs,
    /// `pp` or `adf`.
    #[arg(long, default_value = "pp")]
    test: String,
    #[arg(long, default_value_t = 4)]
    max_lag: usize,
    /// `none`, `constant` or `trend`.
    #[arg(long, default_value = "constant")]
    deterministic: String,
    /// Run a Monte-Carlo size/power check of the test with this seed.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 1000)]
    replications: usize,
}

#[derive(Debug, Args)]
struct ReplicateArgs {
    country: String,
    /// Country manifest naming the data files.
    #[arg(long)]
    manifest: PathBuf,
    #[arg(long)]
    registry: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ProjectArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    series: SeriesArgs,
    /// Scenario name, e.g. the agency publishing the projection.
    #[arg(long, default_value = "scenario")]
    name: String,
    /// Last observed year; the projection must extend past it.
    #[arg(long)]
    history_end: Option<i32>,
}

#[derive(Debug, Args)]
struct RegistryArgs {
    /// Write the registry table to this file.
    #[arg(long)]
    export: Option<PathBuf>,
    /// Read and list a registry table instead of the built-in one.
    #[arg(long)]
    import: Option<PathBuf>,
}

fn kind_name(k: ErrorKind) -> &'static str {
    match k {
        ErrorKind::Usage => "usage",
        ErrorKind::Data => "data",
        ErrorKind::Numerical => "numerical",
    }
}

fn exit_code(k: ErrorKind) -> u8 {
    match k {
        ErrorKind::Usage => 1,
        ErrorKind::Data => 2,
        ErrorKind::Numerical => 3,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.kind().to_string();
            eprintln!("error[usage]: {msg}");
            eprint!("{}", e.render());
            return ExitCode::from(1);
        }
    };
    match commands::run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => report(&e),
    }
}

fn report(e: &Error) -> ExitCode {
    let kind = e.kind();
    let one_line = e.to_string().replace('\n', " ");
    eprintln!("error[{}]: {one_line}", kind_name(kind));
    ExitCode::from(exit_code(kind))
}
