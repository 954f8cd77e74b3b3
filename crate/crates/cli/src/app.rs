//! Argument parsing and dispatch.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::commands::{self, CliError};
use crate::config::{RunConfig, Settings};

#[derive(Debug, Parser)]
#[command(name = "thermoporo", version, about = "Four-field thermo-poroelasticity solver")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Error and rate table for a published preset or a custom schedule.
    Convergence(Common),
    /// Median wall time of each algorithm (defaults to the T7 configuration).
    Bench(Common),
    /// One simulation with VTK snapshots and a summary.
    Run(Common),
    /// Invariant suite with one status line per check.
    Validate,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// Flat `key = value` configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Published preset, T1 to T7.
    #[arg(long)]
    pub table: Option<String>,
    /// coupled, alg1, alg2, alg3, a comma list, split or all.
    #[arg(long)]
    pub algo: Option<String>,
    /// Output file (convergence, bench) or directory (run).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Threads for Algorithm 3.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Treat violated coefficient assumptions as errors.
    #[arg(long)]
    pub strict: bool,
    /// Extra `key=value` settings, applied last.
    pub overrides: Vec<String>,
}

impl Common {
    /// Preset, then file, then flags, then trailing overrides.
    pub fn settings(&self, default_table: Option<&str>) -> Result<Settings, CliError> {
        let mut s = Settings::default();
        if let Some(t) = default_table {
            s.set("table", t);
        }
        if let Some(path) = &self.config {
            s.0.extend(Settings::load(path)?.0);
        }
        if let Some(t) = &self.table {
            s.set("table", t.as_str());
        }
        if let Some(a) = &self.algo {
            s.set("algorithm", a.as_str());
        }
        if let Some(o) = &self.out {
            s.set("out", o.display().to_string());
        }
        if let Some(w) = self.workers {
            s.set("workers", w.to_string());
        }
        if self.strict {
            s.set("mode", "strict");
        }
        for o in &self.overrides {
            s.push_override(o)?;
        }
        Ok(s)
    }
}

fn bench_default_table(c: &Common) -> Result<Option<&'static str>, CliError> {
    // The timing preset applies unless another scenario is selected.
    let mut probe = c.clone();
    probe.table = None;
    let s = probe.settings(None)?;
    let other = s
        .0
        .iter()
        .any(|(k, v)| (k == "scenario" && !v.eq_ignore_ascii_case("example1")) || k == "table");
    Ok(if other { None } else { Some("T7") })
}

pub fn execute(cli: &Cli, progress: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Convergence(c) => {
            let cfg = RunConfig::resolve(&c.settings(None)?)?;
            commands::convergence(&cfg, progress).map(|_| ())
        }
        Command::Bench(c) => {
            let cfg = RunConfig::resolve(&c.settings(bench_default_table(c)?)?)?;
            commands::bench(&cfg, progress).map(|_| ())
        }
        Command::Run(c) => {
            let cfg = RunConfig::resolve(&c.settings(None)?)?;
            commands::run(&cfg, progress).map(|_| ())
        }
        Command::Validate => commands::validate(progress).map(|_| ()),
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(&cli, &mut std::io::stderr()) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
