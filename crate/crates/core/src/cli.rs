//! Command-line front end: `run`, `verify` and `generate`.
//!
//! Exit codes: 0 success, 1 a check or bound failed, 2 usage or config error.

use std::ffi::OsString;
use std::io::{IsTerminal, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::adversaries::generate;
use crate::error::Error;
use crate::harness::{self, io, parse_adversary_spec, ExperimentConfig};
use crate::par::Execution;
use crate::verify::{self, Suite, VerifyOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "scalefree", version, about = "Scale-free online linear optimization experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one experiment and write its regret trace as CSV.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Overrides the config's loss scale factor.
        #[arg(long)]
        scale: Option<f64>,
        /// Trace destination; stdout when neither this nor `output` is set.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a randomized verification suite.
    Verify {
        #[arg(long, value_parser = parse_suite)]
        suite: Suite,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Run trials on the calling thread only.
        #[arg(long)]
        sequential: bool,
    },
    /// Write a loss file from an adversary spec such as
    /// `gaussian:dim=3;rounds=100;sigma=1;seed=7`.
    Generate {
        #[arg(long)]
        adversary: String,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    Suite::parse(s).ok_or_else(|| {
        let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
        format!("unknown suite `{s}` (expected one of {})", names.join(", "))
    })
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::Io(_) | Error::InvalidArgument(_) => EXIT_USAGE,
        _ => EXIT_FAILED,
    }
}

struct Marks {
    color: bool,
}

impl Marks {
    fn new() -> Self {
        Marks { color: std::env::var_os("NO_COLOR").is_none() && std::io::stderr().is_terminal() }
    }

    fn status(&self, ok: bool) -> String {
        match (ok, self.color) {
            (true, true) => "\x1b[32mPASS\x1b[0m".into(),
            (false, true) => "\x1b[31mFAIL\x1b[0m".into(),
            (true, false) => "PASS".into(),
            (false, false) => "FAIL".into(),
        }
    }
}

/// Runs the CLI on `args` (including the program name).
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    let marks = Marks::new();
    let result = match cli.command {
        Command::Run { config, seed, scale, out: out_path } => cmd_run(config, seed, scale, out_path, out, err, &marks),
        Command::Verify { suite, trials, seed, sequential } => {
            let exec = if sequential { Execution::Sequential } else { Execution::Parallel };
            let opts = VerifyOptions { trials: trials.unwrap_or_else(|| suite.default_trials()), seed, exec };
            cmd_verify(suite, &opts, out, &marks)
        }
        Command::Generate { adversary, out: path } => cmd_generate(&adversary, &path),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn cmd_run(
    config: PathBuf,
    seed: Option<u64>,
    scale: Option<f64>,
    out_path: Option<PathBuf>,
    out: &mut dyn Write,
    err: &mut dyn Write,
    marks: &Marks,
) -> crate::Result<i32> {
    let mut cfg = ExperimentConfig::from_file(&config)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Some(c) = scale {
        cfg.scale_factor = c;
    }
    if out_path.is_some() {
        cfg.output = out_path;
    }
    let res = harness::run_experiment(&cfg)?;
    match &cfg.output {
        Some(p) => io::write_trace_file(p, &res.trace, res.dim)?,
        None => io::write_trace(&mut *out, &res.trace, res.dim)?,
    }
    for r in &res.reports {
        writeln!(
            err,
            "{} {}: regret {} <= bound {} (slack {})",
            marks.status(r.passes()),
            r.name,
            io::fmt_f64(r.observed),
            io::fmt_f64(r.bound),
            io::fmt_f64(r.slack)
        )?;
    }
    Ok(if res.all_pass() { EXIT_OK } else { EXIT_FAILED })
}

fn cmd_verify(suite: Suite, opts: &VerifyOptions, out: &mut dyn Write, marks: &Marks) -> crate::Result<i32> {
    let report = verify::run_suite(suite, opts)?;
    for c in &report.checks {
        write!(out, "{} {}: {}/{}", marks.status(c.ok), c.name, c.passed, c.total)?;
        if !c.detail.is_empty() && (!c.ok || c.total == 1 || c.passed != c.total) {
            write!(out, " ({})", c.detail)?;
        }
        writeln!(out)?;
    }
    writeln!(out, "suite {}: {}", suite.name(), if report.ok() { "ok" } else { "FAILED" })?;
    Ok(if report.ok() { EXIT_OK } else { EXIT_FAILED })
}

fn cmd_generate(spec: &str, path: &std::path::Path) -> crate::Result<i32> {
    let spec = parse_adversary_spec(spec)?;
    let losses = generate(&spec)?;
    io::write_losses_file(path, &losses)?;
    Ok(EXIT_OK)
}
