//! `invsqrt`: spectra, wavefunctions, verification and figure data for the
//! potential `V(x) = V0 / sqrt(x)` on the half-line.

mod commands;
mod table;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use invsqrt_core::{Error, PhysicalSystem};

use crate::table::Format;

/// Exit codes.
const EXIT_USAGE: u8 = 1;
const EXIT_VERIFY: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "invsqrt",
    version,
    about = "Exact solutions of the Schroedinger equation for V = V0/sqrt(x)"
)]
struct Cli {
    #[command(flatten)]
    system: SystemArgs,
    /// Output format (tables default to csv, reports to json).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Output file (a directory for `figures`); stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct SystemArgs {
    /// Coupling V0 (negative for bound states).
    #[arg(long, global = true, default_value_t = -1.0, allow_hyphen_values = true)]
    v0: f64,
    #[arg(long, global = true, default_value_t = 1.0)]
    mass: f64,
    #[arg(long, global = true, default_value_t = 1.0)]
    hbar: f64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Energy levels, one row per quantum number.
    Spectrum {
        #[arg(long, value_enum, default_value_t = SpectrumMode::Exact)]
        mode: SpectrumMode,
        /// Single quantum number.
        #[arg(long, conflicts_with = "n_range")]
        n: Option<u32>,
        /// Inclusive range such as `3..20`.
        #[arg(long, value_parser = parse_range)]
        n_range: Option<(u32, u32)>,
    },
    /// Samples of psi(x) on a uniform grid.
    Wavefunction {
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long, value_enum, default_value_t = WaveMode::Bound)]
        mode: WaveMode,
        #[arg(long, default_value_t = 40.0)]
        x_max: f64,
        #[arg(long, default_value_t = 2000)]
        points: usize,
        /// Normalise quasi-polynomial states (bound states always are).
        #[arg(long)]
        normalize: bool,
    },
    /// Run verification suites; exits 2 if any check misses its threshold.
    Verify {
        #[arg(value_enum, default_value_t = verify::Suite::All)]
        suite: verify::Suite,
    },
    /// Write figure data files into the `--out` directory.
    Figures {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=4))]
        figure: Option<u8>,
        #[arg(long, default_value_t = 40.0)]
        x_max: f64,
        #[arg(long, default_value_t = 2000)]
        points: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpectrumMode {
    Exact,
    Approx,
    Quasipoly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WaveMode {
    Bound,
    Quasipoly,
}

fn parse_range(s: &str) -> Result<(u32, u32), String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("expected START..END, got `{s}`"))?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let lo: u32 = a
        .trim()
        .parse()
        .map_err(|e| format!("bad range start `{a}`: {e}"))?;
    let hi: u32 = b
        .trim()
        .parse()
        .map_err(|e| format!("bad range end `{b}`: {e}"))?;
    if lo == 0 || hi < lo {
        return Err(format!(
            "range must satisfy 1 <= START <= END, got {lo}..{hi}"
        ));
    }
    Ok((lo, hi))
}

/// What went wrong, mapped onto an exit code.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Verification,
    Numeric(String),
}

/// Inputs are validated before any computation starts, so a library error
/// raised later (an underflowed energy, say) is a numerical failure.
impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Numeric(e.to_string())
    }
}

fn verdict(report: &verify::Report) -> Result<(), Failure> {
    if report.passed {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn needs_bound_states(command: &Command) -> bool {
    !matches!(
        command,
        Command::Verify {
            suite: verify::Suite::Heun | verify::Suite::Wronskian
        }
    )
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(format!("i/o: {e}"))
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let SystemArgs { v0, mass, hbar } = cli.system;
    let sys = PhysicalSystem::new(mass, hbar, v0).map_err(|e| Failure::Usage(e.to_string()))?;
    if needs_bound_states(&cli.command) && v0 >= 0.0 {
        return Err(Failure::Usage(format!(
            "bound states need V0 < 0, got --v0 {v0}"
        )));
    }
    let out = cli.out.as_deref();
    match cli.command {
        Command::Spectrum { mode, n, n_range } => {
            let (lo, hi) = match (n, n_range) {
                (Some(0), _) => return Err(Failure::Usage("--n must be at least 1".into())),
                (Some(n), _) => (n, n),
                (None, Some(r)) => r,
                (None, None) => (1, invsqrt_core::spectrum::DEFAULT_MAX_N),
            };
            let t = commands::spectrum(&sys, mode, lo, hi)?;
            table::emit(&t.render(cli.format.unwrap_or(Format::Csv))?, out)?;
        }
        Command::Wavefunction {
            n,
            mode,
            x_max,
            points,
            normalize,
        } => {
            if n == 0 {
                return Err(Failure::Usage("--n must be at least 1".into()));
            }
            check_grid(x_max, points)?;
            let t = commands::wavefunction(&sys, n, mode, x_max, points, normalize)?;
            table::emit(&t.render(cli.format.unwrap_or(Format::Csv))?, out)?;
        }
        Command::Verify { suite } => {
            let report = verify::run(&sys, suite)?;
            let bytes = match cli.format.unwrap_or(Format::Json) {
                Format::Json => {
                    let mut b = serde_json::to_vec_pretty(&report).map_err(std::io::Error::from)?;
                    b.push(b'\n');
                    b
                }
                Format::Csv => commands::report_table(&report).render(Format::Csv)?,
            };
            table::emit(&bytes, out)?;
            let failed = report.checks.iter().filter(|c| !c.pass).count();
            eprintln!("verify: {} checks, {failed} failed", report.checks.len());
            verdict(&report)?;
        }
        Command::Figures {
            figure,
            x_max,
            points,
        } => {
            check_grid(x_max, points)?;
            let dir = out.ok_or_else(|| Failure::Usage("figures needs --out DIR".into()))?;
            if figure == Some(2) {
                return Err(Failure::Usage(
                    "figure 2 is not produced; choose 1, 3 or 4".into(),
                ));
            }
            let format = cli.format.unwrap_or(Format::Csv);
            let figs = figure.map_or_else(|| vec![1, 3, 4], |f| vec![f]);
            for f in figs {
                for (stem, t) in commands::figure(&sys, f, x_max, points)? {
                    let path = dir.join(format!("{stem}.{}", format.extension()));
                    table::emit(&t.render(format)?, Some(&path))?;
                    eprintln!("wrote {}", path.display());
                }
            }
        }
    }
    Ok(())
}

fn check_grid(x_max: f64, points: usize) -> Result<(), Failure> {
    if !(x_max.is_finite() && x_max > 0.0) {
        return Err(Failure::Usage(format!(
            "--x-max must be positive, got {x_max}"
        )));
    }
    if points < 2 {
        return Err(Failure::Usage(format!(
            "--points must be at least 2, got {points}"
        )));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Verification) => ExitCode::from(EXIT_VERIFY),
        Err(Failure::Numeric(msg)) => {
            eprintln!("numerical failure: {msg}");
            ExitCode::from(EXIT_NUMERIC)
        }
    }
}
