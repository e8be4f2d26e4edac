use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use phisimpson::emit::{emit_run, emit_sweep, open_output, OutputFormat};
use phisimpson::run::{
    cmd_sweep, cmd_verify, parse_phi, RunConfig, RunError, Settings, SweepGrid, DEFAULT_Q_LIST,
};

/// Simpson error bounds on rotated segments, with identity and dominance checks.
#[derive(Debug, Parser)]
#[command(name = "phisimpson", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check one function on one interval.
    Verify(VerifyArgs),
    /// Run the cartesian product of expressions, intervals, angles and exponents.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
struct Common {
    /// Absolute tolerance of the quadrature oracle.
    #[arg(long, default_value_t = 1e-11)]
    oracle_tol: f64,
    /// Largest identity residual accepted.
    #[arg(long, default_value_t = 1e-8)]
    identity_tol: f64,
    /// Uniform samples used by the convexity certificate.
    #[arg(long, default_value_t = 1001)]
    samples: usize,
    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    format: OutputFormat,
    /// Output file; standard output when omitted.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

impl Common {
    fn settings(&self) -> Settings {
        Settings {
            oracle_tol: self.oracle_tol,
            identity_tol: self.identity_tol,
            cert_samples: self.samples,
            ..Settings::default()
        }
    }
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Expression in `x`, e.g. "exp(x) + x^2".
    #[arg(long = "f")]
    f: String,
    #[arg(long, allow_hyphen_values = true)]
    a: f64,
    #[arg(long, allow_hyphen_values = true)]
    b: f64,
    /// Radians in [0, pi/2]; also accepts pi/6, pi/4, pi/3, pi/2.
    #[arg(long, default_value = "0", value_parser = parse_phi)]
    phi: f64,
    /// Comma-separated exponents q >= 1.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    q: Option<Vec<f64>>,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Expression in `x`; repeat for several.
    #[arg(long = "f", required = true)]
    f: Vec<String>,
    /// Left endpoints, paired with every right endpoint.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    a: Vec<f64>,
    /// Right endpoints.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    b: Vec<f64>,
    /// Explicit `a:b` intervals; replaces the a × b product when given.
    #[arg(long = "interval", value_delimiter = ',', allow_hyphen_values = true, value_parser = parse_interval)]
    intervals: Vec<(f64, f64)>,
    #[arg(long, value_delimiter = ',', default_value = "0", value_parser = parse_phi)]
    phi: Vec<f64>,
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    q: Option<Vec<f64>>,
    #[command(flatten)]
    common: Common,
}

fn parse_interval(text: &str) -> Result<(f64, f64), String> {
    let (a, b) = text
        .split_once(':')
        .ok_or_else(|| format!("expected a:b, got `{text}`"))?;
    let a = a
        .trim()
        .parse()
        .map_err(|_| format!("bad left endpoint in `{text}`"))?;
    let b = b
        .trim()
        .parse()
        .map_err(|_| format!("bad right endpoint in `{text}`"))?;
    Ok((a, b))
}

fn q_list(q: Option<Vec<f64>>) -> Vec<f64> {
    q.unwrap_or_else(|| DEFAULT_Q_LIST.to_vec())
}

fn run(cli: Cli) -> Result<i32, RunError> {
    match cli.command {
        Command::Verify(args) => {
            let config = RunConfig {
                expression: args.f,
                a: args.a,
                b: args.b,
                phi: args.phi,
                q_list: q_list(args.q),
                settings: args.common.settings(),
            };
            let report = cmd_verify(&config)?;
            let mut out = open_output(args.common.output.as_deref())?;
            emit_run(&report, args.common.format, &mut out)?;
            out.flush()?;
            Ok(report.exit_code())
        }
        Command::Sweep(args) => {
            let intervals = if args.intervals.is_empty() {
                SweepGrid::interval_product(&args.a, &args.b)
            } else {
                args.intervals
            };
            let grid = SweepGrid {
                expressions: args.f,
                intervals,
                phis: args.phi,
                qs: q_list(args.q),
                settings: args.common.settings(),
            };
            let report = cmd_sweep(&grid)?;
            let mut out = open_output(args.common.output.as_deref())?;
            emit_sweep(&report, args.common.format, &mut out)?;
            out.flush()?;
            Ok(report.exit_code())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
