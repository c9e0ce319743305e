//! The `sirdiv` command line.
//!
//! Exit status: 0 on success, 1 on usage, configuration or i/o errors, and
//! 2 when `compare` finds an estimate more than four standard errors from
//! its closed form.

mod eval;
mod figures;
mod manifest;
mod runs;
mod scenario;
mod table;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};

pub use eval::{cmd_eval, format_value, EvalOutput, QUANTITIES};
pub use figures::{cmd_fig, default_params, FigOptions};
pub use manifest::RunManifest;
pub use runs::SimSettings;
pub use scenario::{
    all_within_limit, comparison_csv, simulation_csv, Quantity, Row, Scenario, ScenarioOverrides,
    Z_LIMIT,
};
pub use table::{format_number, CurveTable};

use crate::mcsim::{write_realization_dump, Method, SimConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_STATISTICAL: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("line {line}, field `{field}`: {message}")]
    Parse {
        line: usize,
        field: String,
        message: String,
    },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Lib(#[from] crate::Error),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub(crate) fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "sirdiv",
    version,
    about = "Success probabilities of multi-antenna receivers in Poisson networks: closed forms, simulation and figure data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct SimFlags {
    /// Number of simulated network realizations.
    #[arg(long)]
    realizations: Option<usize>,
    /// Seed of the random streams.
    #[arg(long)]
    seed: Option<u64>,
    /// Largest tolerated probability shift from truncating the network.
    #[arg(long = "bias-budget")]
    bias_budget: Option<f64>,
    /// Estimator: conditioned (fading integrated out) or naive.
    #[arg(long)]
    method: Option<Method>,
    /// Worker threads. Results are identical for any value.
    #[arg(long)]
    workers: Option<usize>,
}

impl SimFlags {
    fn overrides(&self) -> ScenarioOverrides {
        ScenarioOverrides {
            realizations: self.realizations,
            seed: self.seed,
            bias_budget: self.bias_budget,
            method: self.method,
            workers: self.workers,
        }
    }

    fn settings(&self) -> SimSettings {
        let mut s = SimSettings::default();
        self.overrides().apply_to(&mut s);
        s
    }
}

impl ScenarioOverrides {
    fn apply_to(&self, s: &mut SimSettings) {
        if let Some(v) = self.realizations {
            s.realizations = v;
        }
        if let Some(v) = self.seed {
            s.seed = v;
        }
        if let Some(v) = self.bias_budget {
            s.bias_budget = v;
        }
        if let Some(v) = self.method {
            s.method = v;
        }
        s.workers = self.workers;
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a closed-form quantity, e.g. `eval joint_success_prob Δ=0.25 δ=0.5 n=2 θ=1`.
    /// One parameter may be a range `start:end:count`, which prints a table.
    Eval {
        /// Quantity name; `eval list` prints the available names.
        quantity: String,
        /// Parameters as key=value.
        params: Vec<String>,
        /// Write the result to a file (with a manifest) instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the data behind a figure (1 to 5) as CSV.
    Fig {
        figure: u8,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Append simulated estimates and their standard errors.
        #[arg(long)]
        sim: bool,
        /// Replace a figure parameter, as key=value.
        #[arg(long = "set")]
        set: Vec<String>,
        #[command(flatten)]
        flags: SimFlags,
    },
    /// Simulate the quantities of a scenario.
    Simulate {
        /// Scenario file with key = value lines.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Scenario entries given inline as key=value.
        entries: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write one CSV record per realization.
        #[arg(long)]
        dump: Option<PathBuf>,
        #[command(flatten)]
        flags: SimFlags,
    },
    /// Simulate a scenario and compare with the closed forms; exit status 2
    /// if any |z| exceeds 4.
    Compare {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        flags: SimFlags,
    },
    /// Re-run the command recorded in a manifest.
    Replay {
        manifest: PathBuf,
        /// Write to this path instead of the recorded one.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Runs the command line with the process's stdout and stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with_output(args, &mut stdout.lock(), &mut stderr.lock())
}

/// Runs the command line; `args` includes the program name.
pub fn run_with_output<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    let recorded: Vec<String> = args
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    match dispatch(cli.command, recorded, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn emit(
    text: &str,
    path: Option<&Path>,
    manifest: Option<RunManifest>,
    started: Instant,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    match path {
        Some(p) => {
            std::fs::write(p, text).map_err(|e| CliError::io(p, e))?;
            if let Some(mut m) = manifest {
                m.wall_clock_seconds = started.elapsed().as_secs_f64();
                m.write(p)?;
            }
        }
        None => {
            out.write_all(text.as_bytes())
                .map_err(|e| CliError::io(Path::new("<stdout>"), e))?;
        }
    }
    Ok(())
}

fn split_kv(items: &[String], what: &str) -> Result<Vec<(String, String)>, CliError> {
    items
        .iter()
        .map(|s| {
            s.split_once('=')
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                .ok_or_else(|| CliError::Usage(format!("{what} `{s}` is not of the form key=value")))
        })
        .collect()
}

fn dispatch(command: Command, recorded: Vec<String>, out: &mut dyn Write) -> Result<i32, CliError> {
    let started = Instant::now();
    match command {
        Command::Eval {
            quantity,
            params,
            out: path,
        } => {
            if quantity == "list" {
                let text: String = QUANTITIES
                    .iter()
                    .map(|(n, p)| format!("{n:34}{p}\n"))
                    .collect();
                emit(&text, None, None, started, out)?;
                return Ok(EXIT_OK);
            }
            let result = cmd_eval(&quantity, &params)?;
            let mut cfg = std::collections::BTreeMap::new();
            cfg.insert("quantity".to_string(), quantity.clone());
            cfg.insert("params".to_string(), params.join(" "));
            let manifest = RunManifest::new(recorded, cfg, None);
            emit(&result.render(), path.as_deref(), Some(manifest), started, out)?;
            Ok(EXIT_OK)
        }
        Command::Fig {
            figure,
            out: path,
            sim,
            set,
            flags,
        } => {
            let opts = FigOptions {
                figure,
                sim,
                settings: flags.settings(),
                overrides: split_kv(&set, "--set value")?,
            };
            let (table, resolved) = cmd_fig(&opts)?;
            let seed = sim.then_some(opts.settings.seed);
            let manifest = RunManifest::new(recorded, resolved, seed);
            emit(&table.to_csv(), path.as_deref(), Some(manifest), started, out)?;
            Ok(EXIT_OK)
        }
        Command::Simulate {
            config,
            entries,
            out: path,
            dump,
            flags,
        } => {
            let mut text = match &config {
                Some(p) => std::fs::read_to_string(p).map_err(|e| CliError::io(p, e))?,
                None => String::new(),
            };
            for (k, v) in split_kv(&entries, "scenario entry")? {
                text.push_str(&format!("\n{k} = {v}"));
            }
            let scenario = Scenario::parse(&text, &flags.overrides())?;
            let rows = scenario.simulate()?;
            let resolved = scenario.resolved();
            if let Some(d) = &dump {
                let cfg = dump_config(&scenario);
                let file = std::fs::File::create(d).map_err(|e| CliError::io(d, e))?;
                let mut w = std::io::BufWriter::new(file);
                write_realization_dump(&cfg, &mut w)?;
                w.flush().map_err(|e| CliError::io(d, e))?;
                let mut m = RunManifest::new(recorded.clone(), resolved.clone(), Some(scenario.settings.seed));
                m.wall_clock_seconds = started.elapsed().as_secs_f64();
                m.write(d)?;
            }
            let manifest = RunManifest::new(recorded, resolved, Some(scenario.settings.seed));
            emit(&simulation_csv(&rows), path.as_deref(), Some(manifest), started, out)?;
            Ok(EXIT_OK)
        }
        Command::Compare {
            config,
            out: path,
            flags,
        } => {
            let text = std::fs::read_to_string(&config).map_err(|e| CliError::io(&config, e))?;
            let scenario = Scenario::parse(&text, &flags.overrides())?;
            let rows = scenario.simulate()?;
            let manifest = RunManifest::new(recorded, scenario.resolved(), Some(scenario.settings.seed));
            emit(&comparison_csv(&rows), path.as_deref(), Some(manifest), started, out)?;
            Ok(if all_within_limit(&rows) {
                EXIT_OK
            } else {
                EXIT_STATISTICAL
            })
        }
        Command::Replay { manifest, out: path } => {
            let m = RunManifest::read(&manifest)?;
            if m.command_line.first().map(String::as_str) == Some("replay") {
                return Err(CliError::Usage("a manifest cannot record a replay".into()));
            }
            let args = match &path {
                Some(p) => m.command_with_output(p),
                None => m.command_line.clone(),
            };
            let cli = Cli::try_parse_from(std::iter::once("sirdiv".to_string()).chain(args.iter().cloned()))
                .map_err(|e| CliError::Usage(format!("recorded command line is invalid: {e}")))?;
            dispatch(cli.command, args, out)
        }
    }
}

fn dump_config(s: &Scenario) -> SimConfig {
    let n_ant = s.orders.iter().copied().max().unwrap_or(1);
    s.settings.config(s.model, n_ant, s.thetas.clone())
}
