//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on runtime or output failures, 2 on bad
//! arguments or configuration.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::config;
use crate::error::Error;
use crate::harness::{self, ExperimentConfig, PRESET_NAMES};
use crate::selftest;

/// Caps the number of worker threads used for trials.
pub const THREADS_ENV: &str = "WLKAF_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "wlkaf",
    version,
    about = "Widely linear kernel adaptive filtering experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a channel-equalization experiment.
    Equalize(RunArgs),
    /// Run the filtered random-process experiment.
    Process(RunArgs),
    /// Check the filter equivalences and print a pass/fail table.
    Selftest,
    /// Print the built-in preset names.
    ListPresets,
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Built-in preset name.
    #[arg(long, conflicts_with = "config", required_unless_present = "config")]
    preset: Option<String>,
    /// TOML config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory for `<name>.csv`.
    #[arg(long, default_value = "results")]
    out: PathBuf,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    samples: Option<usize>,
    /// SNR in dB (`inf` disables noise).
    #[arg(long)]
    snr: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Full-scale run (100 trials, long sequences).
    #[arg(long)]
    full: bool,
    /// Override a config key, e.g. `--set arm.0.mu=0.2`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

/// Prints to stdout, ignoring a closed pipe.
macro_rules! say {
    ($($arg:tt)*) => {{
        let _ = writeln!(std::io::stdout().lock(), $($arg)*);
    }};
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Runtime(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Runtime(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config { .. } | Error::InvalidInput(_) | Error::Shape { .. } => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Runtime(other.to_string()),
        }
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn parse_and_run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("error: {}", f.message());
            f.code()
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::ListPresets => {
            for name in PRESET_NAMES {
                let p = harness::preset(name).expect("listed preset exists");
                say!("{name}\t{}", p.scenario);
            }
            Ok(())
        }
        Command::Selftest => run_selftest(),
        Command::Equalize(args) => run_experiment(args, true),
        Command::Process(args) => run_experiment(args, false),
    }
}

fn run_selftest() -> Result<(), Failure> {
    let checks = selftest::run_all()?;
    say!(
        "{:<42} {:>6} {:>12} {:>9}  result",
        "check",
        "steps",
        "max dev",
        "tol"
    );
    let mut all = true;
    for c in &checks {
        all &= c.passed();
        say!(
            "{:<42} {:>6} {:>12.3e} {:>9.0e}  {}",
            c.name,
            c.steps,
            c.max_deviation,
            c.tolerance,
            if c.passed() { "pass" } else { "FAIL" }
        );
    }
    if all {
        Ok(())
    } else {
        Err(Failure::Runtime("self-test failed".into()))
    }
}

fn resolve_config(args: &RunArgs) -> Result<ExperimentConfig, Failure> {
    let mut cfg = match (&args.preset, &args.config) {
        (Some(name), None) => {
            let p = harness::preset(name).ok_or_else(|| {
                Failure::Usage(format!(
                    "unknown preset `{name}`; valid presets: {}",
                    PRESET_NAMES.join(", ")
                ))
            })?;
            if args.set.is_empty() {
                p
            } else {
                config::parse_config_unvalidated(&config::serialize_config(&p), &args.set)?
            }
        }
        (None, Some(path)) => config::load_config_unvalidated(path, &args.set)?,
        _ => {
            return Err(Failure::Usage(
                "give exactly one of --preset or --config".into(),
            ))
        }
    };
    if args.full {
        cfg.full_scale();
    }
    if let Some(t) = args.trials {
        cfg.trials = t;
    }
    if let Some(n) = args.samples {
        cfg.samples_per_trial = n;
    }
    if let Some(s) = args.snr {
        cfg.snr_db = s;
    }
    if let Some(s) = args.seed {
        cfg.base_seed = s;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn thread_cap() -> Result<Option<usize>, Failure> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .map(Some)
            .ok_or_else(|| {
                Failure::Usage(format!(
                    "{THREADS_ENV} must be a positive integer, got `{v}`"
                ))
            }),
        Err(_) => Ok(None),
    }
}

fn run_experiment(args: RunArgs, equalize: bool) -> Result<(), Failure> {
    let cfg = resolve_config(&args)?;
    if cfg.scenario.is_equalization() != equalize {
        return Err(Failure::Usage(format!(
            "scenario `{}` belongs to the `{}` subcommand",
            cfg.scenario,
            if equalize { "process" } else { "equalize" }
        )));
    }
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_cap()? {
        pool = pool.num_threads(n);
    }
    let pool = pool
        .build()
        .map_err(|e| Failure::Runtime(format!("thread pool: {e}")))?;
    let result = pool.install(|| harness::run_experiment(&cfg))?;
    let path = write_result(&args.out, &result)?;
    for (name, curve) in &result.curves {
        let ss = harness::steady_state_mse(curve, 0.2)?;
        say!("{name:<16} steady-state MSE {ss:>9.3} dB");
    }
    say!("wrote {}", path.display());
    Ok(())
}

fn write_result(dir: &Path, result: &harness::ExperimentResult) -> Result<PathBuf, Failure> {
    let unwritable =
        |e: std::io::Error| Failure::Runtime(format!("cannot write to {}: {e}", dir.display()));
    std::fs::create_dir_all(dir).map_err(unwritable)?;
    let path = dir.join(format!("{}.csv", result.name));
    let mut buf = Vec::new();
    result.write_csv(&mut buf).map_err(unwritable)?;
    std::fs::write(&path, buf).map_err(unwritable)?;
    Ok(path)
}
