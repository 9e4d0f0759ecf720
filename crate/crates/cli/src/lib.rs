//! Command-line harness for the minionlab experiments.
//!
//! Every verb returns a [`Report`]: a main artifact, optional side
//! artifacts, a one-line summary and a verdict.

pub mod args;
pub mod cache;
pub mod commands;
pub mod failure;
pub mod input;
pub mod output;

use std::path::PathBuf;

use minionlab_core::BiasParam;

pub use args::Cli;
pub use failure::{Failure, Outcome};
pub use output::{Artifact, Cell, Format, Table};

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub artifact: Artifact,
    pub extras: Vec<(PathBuf, Artifact)>,
    pub summary: String,
    /// `Some(reason)` when a check failed
    pub violation: Option<String>,
}

impl Report {
    pub fn new(artifact: impl Into<Artifact>, summary: impl Into<String>) -> Self {
        Self {
            artifact: artifact.into(),
            extras: Vec::new(),
            summary: summary.into(),
            violation: None,
        }
    }

    pub fn check(mut self, ok: bool, reason: impl FnOnce() -> String) -> Self {
        if !ok && self.violation.is_none() {
            self.violation = Some(reason());
        }
        self
    }

    pub fn with_extra(mut self, path: Option<PathBuf>, artifact: impl Into<Artifact>) -> Self {
        if let Some(path) = path {
            self.extras.push((path, artifact.into()));
        }
        self
    }
}

impl From<Table> for Artifact {
    fn from(t: Table) -> Self {
        Artifact::Table(t)
    }
}

impl args::Common {
    pub fn bias(&self) -> Outcome<BiasParam> {
        Ok(BiasParam::new(self.p.unwrap_or(0.5))?)
    }

    pub fn margin(&self) -> f64 {
        self.margin.unwrap_or(minionlab_core::ptf::DEFAULT_MARGIN)
    }

    pub fn trials_or(&self, default: usize) -> usize {
        self.trials.unwrap_or(default)
    }

    pub fn taus_or(&self, default: &[f64]) -> Vec<f64> {
        if self.tau.is_empty() {
            default.to_vec()
        } else {
            self.tau.clone()
        }
    }
}

/// Dispatch a parsed command line. The caller owns the thread pool.
pub fn run(cli: &Cli) -> Outcome<Report> {
    use args::Command;
    let c = &cli.common;
    match &cli.command {
        Command::Fourier(cmd) => commands::fourier::run(cmd, c),
        Command::Shapley(a) => commands::shapley::run(a, c),
        Command::Pullback(cmd) => commands::pullback::run(cmd, c),
        Command::Ptf(cmd) => commands::ptf::run(cmd, c),
        Command::Pcsp(cmd) => commands::pcsp::run(cmd, c),
        Command::Labelcover(cmd) => commands::labelcover::run(cmd, c),
    }
}

/// Write artifacts, print the summary and return the exit code.
pub fn execute(cli: &Cli) -> i32 {
    let report = match run(cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("minionlab: {e}");
            return e.exit_code();
        }
    };
    let c = &cli.common;
    let write = |path: &Option<PathBuf>, body: String| -> Outcome<()> {
        match path {
            Some(p) => std::fs::write(p, body).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
            None => {
                use std::io::Write;
                std::io::stdout().write_all(body.as_bytes()).map_err(Failure::from)
            }
        }
    };
    let written = write(&c.out, report.artifact.render(c.format))
        .and_then(|_| report.extras.iter().try_for_each(|(p, a)| write(&Some(p.clone()), a.render(c.format))));
    if let Err(e) = written {
        eprintln!("minionlab: {e}");
        return e.exit_code();
    }
    let line = match &report.violation {
        Some(v) => format!("{} [FAIL: {v}]", report.summary),
        None => report.summary.clone(),
    };
    if c.out.is_some() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
    match report.violation {
        Some(_) => failure::code::VERDICT,
        None => failure::code::OK,
    }
}
