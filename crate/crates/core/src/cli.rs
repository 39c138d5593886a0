//! `hopf-stab` command line.
//!
//! ```text
//! hopf-stab [--seed N] run <file> [--out DIR] [--gradient-mode MODE] [--backend fourier|fd] [--truncation K]
//! hopf-stab [--seed N] verify [--filter NAME] [--json]
//! ```
//!
//! Exit codes: 0 success, 1 input or solver error, 2 anomaly (a violated
//! bound, an uncharacterized equality or a failed verification criterion).

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::pipeline::{run_scenario, Overrides, RunOutput};
use crate::report::to_canonical_json;
use crate::scenario::load_scenario;
use crate::spectral::Backend;
use crate::submersion::GradientMode;
use crate::verify::{run_suite, DEFAULT_SEED};

/// Default output directory when `--out` is absent.
pub const OUT_DIR_ENV: &str = "HOPF_STAB_OUT_DIR";

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 1;
pub const EXIT_ANOMALY: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "hopf-stab",
    version,
    about = "First stability eigenvalue bounds for CMC surfaces"
)]
pub struct Cli {
    /// Seed for the randomized verification catalog.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a scenario file and write its report and data series.
    Run {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        gradient_mode: Option<ModeArg>,
        #[arg(long, value_enum)]
        backend: Option<BackendArg>,
        #[arg(long)]
        truncation: Option<usize>,
    },
    /// Run the built-in verification catalog.
    Verify {
        /// Only criteria whose name contains this string.
        #[arg(long)]
        filter: Option<String>,
        /// Print the outcomes as JSON instead of a table.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ModeArg {
    Intrinsic,
    Ambient,
}

impl From<ModeArg> for GradientMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Intrinsic => GradientMode::IntrinsicOnSurface,
            ModeArg::Ambient => GradientMode::Ambient,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum BackendArg {
    Fourier,
    Fd,
    Fourier2d,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Fourier => Backend::Fourier,
            BackendArg::Fd => Backend::FiniteDifference,
            BackendArg::Fourier2d => Backend::Fourier2d,
        }
    }
}

/// Files written by one run.
#[derive(Debug)]
pub struct Written {
    pub report: PathBuf,
    pub series: Vec<PathBuf>,
}

pub fn write_outputs(out: &RunOutput, dir: &Path) -> Result<Written> {
    std::fs::create_dir_all(dir)?;
    let stem = file_stem(&out.report.scenario);
    let report = dir.join(format!("{stem}.report.json"));
    std::fs::write(&report, to_canonical_json(&out.report)?)?;
    let mut series = Vec::new();
    for (name, csv) in &out.series {
        let path = dir.join(format!("{stem}.{name}.csv"));
        std::fs::write(&path, csv)?;
        series.push(path);
    }
    Ok(Written { report, series })
}

fn file_stem(name: &str) -> String {
    let s: String = name
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.') {
                c
            } else {
                '_'
            }
        })
        .collect();
    if s.is_empty() {
        "scenario".into()
    } else {
        s
    }
}

fn print_error(err: &mut impl Write, e: &Error) {
    match e {
        Error::Schema(problems) => {
            let _ = writeln!(err, "error: invalid scenario");
            for p in problems {
                let _ = writeln!(err, "  {p}");
            }
        }
        e => {
            let _ = writeln!(err, "error: {e}");
        }
    }
}

/// Parse `args` and execute, writing to the given streams. Returns the exit code.
pub fn run_with<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    match cli.command {
        Command::Run {
            file,
            out: dir,
            gradient_mode,
            backend,
            truncation,
        } => {
            let overrides = Overrides {
                gradient_mode: gradient_mode.map(Into::into),
                backend: backend.map(Into::into),
                truncation,
            };
            let dir = dir
                .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
                .unwrap_or_else(|| PathBuf::from("."));
            let result = load_scenario(&file)
                .map(|s| overrides.apply(&s))
                .and_then(|s| {
                    s.validate()?;
                    run_scenario(&s)
                })
                .and_then(|o| write_outputs(&o, &dir).map(|w| (o, w)));
            match result {
                Err(e) => {
                    print_error(err, &e);
                    EXIT_INPUT
                }
                Ok((o, w)) => {
                    let _ = writeln!(out, "{}", w.report.display());
                    for p in &w.series {
                        let _ = writeln!(out, "{}", p.display());
                    }
                    if o.is_anomalous() {
                        for a in &o.report.anomalies {
                            let _ = writeln!(err, "anomaly: {a}");
                        }
                        EXIT_ANOMALY
                    } else {
                        EXIT_OK
                    }
                }
            }
        }
        Command::Verify { filter, json } => {
            let outcomes = run_suite(filter.as_deref(), cli.seed);
            if outcomes.is_empty() {
                let _ = writeln!(
                    err,
                    "error: no criterion matches {:?}",
                    filter.unwrap_or_default()
                );
                return EXIT_INPUT;
            }
            if json {
                match to_canonical_json(&outcomes) {
                    Ok(s) => {
                        let _ = write!(out, "{s}");
                    }
                    Err(e) => {
                        print_error(err, &e);
                        return EXIT_INPUT;
                    }
                }
            } else {
                for o in &outcomes {
                    let _ = writeln!(out, "{}", o.line());
                }
            }
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            let _ = writeln!(out, "{} passed, {failed} failed", outcomes.len() - failed);
            if failed == 0 {
                EXIT_OK
            } else {
                EXIT_ANOMALY
            }
        }
    }
}
