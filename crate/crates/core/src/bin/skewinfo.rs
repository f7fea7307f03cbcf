use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use skewinfo::descriptors::{ChannelDescriptor, DescriptorError, StateDescriptor};
use skewinfo::mz_scan::{run_mz_scan, MzSpec};
use skewinfo::sweep::{run_sweep, write_csv, write_json, OutputFormat, SweepSpec};
use skewinfo::verify::run_verify;
use skewinfo::{measure, SkewParams};

#[derive(Parser)]
#[command(
    name = "skewinfo",
    version,
    about = "Skew information of quantum states under Kraus channels"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate I, J, V, W and both conservation identities at one point.
    Measure {
        /// State descriptor, inline JSON or a path to a JSON file.
        #[arg(long)]
        state: String,
        /// Channel descriptor, inline JSON or a path to a JSON file.
        #[arg(long)]
        channel: String,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a grid of parameters and write CSV or JSON.
    Sweep {
        /// Sweep spec, inline JSON or a path to a JSON file.
        #[arg(long)]
        grid: String,
        /// Overrides the spec's output path; stdout when neither is set.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides the spec's format.
        #[arg(long)]
        format: Option<OutputFormat>,
    },
    /// Run the seeded property suites and print a JSON report.
    Verify {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Scan the Mach-Zehnder measures over θ.
    Mz {
        /// Config, inline JSON or a path to a JSON file.
        #[arg(long)]
        config: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Verify,
    Parse(String),
    Invariant(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Self::Verify => 1,
            Self::Parse(_) => 2,
            Self::Invariant(_) => 3,
            Self::Io(_) => 4,
        }
    }
}

impl From<DescriptorError> for Failure {
    fn from(e: DescriptorError) -> Self {
        if e.is_parse() {
            Self::Parse(e.to_string())
        } else {
            Self::Invariant(e.to_string())
        }
    }
}

/// Inline JSON when the argument starts with `{`, otherwise a file path.
fn read_input(arg: &str, what: &str) -> Result<String, Failure> {
    if arg.trim_start().starts_with('{') {
        return Ok(arg.to_owned());
    }
    std::fs::read_to_string(arg).map_err(|e| Failure::Io(format!("{what}: cannot read {arg}: {e}")))
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        None => Box::new(io::stdout().lock()),
        Some(p) => {
            let file = File::create(p)
                .map_err(|e| Failure::Io(format!("cannot write {}: {e}", p.display())))?;
            Box::new(BufWriter::new(file))
        }
    })
}

fn write_json_value<T: Serialize>(value: &T, path: Option<&Path>) -> Result<(), Failure> {
    let mut out = open_output(path)?;
    serde_json::to_writer_pretty(&mut out, value)
        .map_err(io::Error::from)
        .and_then(|()| writeln!(out))
        .and_then(|()| out.flush())
        .map_err(|e| Failure::Io(e.to_string()))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Measure {
            state,
            channel,
            alpha,
            beta,
            out,
        } => {
            let rho = StateDescriptor::parse_str(&read_input(&state, "state")?)?.build()?;
            let ch = ChannelDescriptor::parse_str(&read_input(&channel, "channel")?)?.build()?;
            let p = SkewParams::new(alpha, beta)
                .map_err(|e| DescriptorError::invalid("alpha/beta", e))?;
            let report =
                measure(&rho, &ch, p).map_err(|e| DescriptorError::invalid("measure", e))?;
            write_json_value(&report, out.as_deref())
        }
        Command::Sweep { grid, out, format } => {
            let mut spec = SweepSpec::parse_str(&read_input(&grid, "grid")?)?;
            if out.is_some() {
                spec.output = out;
            }
            if let Some(f) = format {
                spec.format = f;
            }
            let rows = run_sweep(&spec)?;
            let mut sink = open_output(spec.output.as_deref())?;
            let written = match spec.format {
                OutputFormat::Csv => write_csv(&rows, &mut sink).map_err(|e| e.to_string()),
                OutputFormat::Json => write_json(&rows, &mut sink).map_err(|e| e.to_string()),
            };
            written
                .and_then(|()| sink.flush().map_err(|e| e.to_string()))
                .map_err(Failure::Io)
        }
        Command::Verify { seed, trials, out } => {
            let report =
                run_verify(seed, trials).map_err(|e| Failure::Parse(format!("trials: {e}")))?;
            write_json_value(&report, out.as_deref())?;
            for failed in report.failures() {
                eprintln!(
                    "FAIL {}/{}: max residual {:.3e} > {:.1e}",
                    failed.suite, failed.name, failed.max_residual, failed.tolerance
                );
            }
            if report.pass {
                Ok(())
            } else {
                Err(Failure::Verify)
            }
        }
        Command::Mz { config, out } => {
            let spec = MzSpec::parse_str(&read_input(&config, "config")?)?;
            write_json_value(&run_mz_scan(&spec)?, out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            match &failure {
                Failure::Verify => {}
                Failure::Parse(m) => eprintln!("parse error: {m}"),
                Failure::Invariant(m) => eprintln!("invalid input: {m}"),
                Failure::Io(m) => eprintln!("i/o error: {m}"),
            }
            ExitCode::from(failure.code())
        }
    }
}
