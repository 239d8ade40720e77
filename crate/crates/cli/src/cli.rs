// Copyright 2026 The dampath Authors
// SPDX-License-Identifier: Apache-2.0

//! Argument parsing and dispatch. Flag values stay raw strings here so that
//! flags and config-file lines go through one parser with one set of
//! diagnostics.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::check::{failures, run_check};
use crate::config::{Command, RunConfig, Settings};
use crate::error::{CliError, CliResult};
use crate::runners::{run_compare, run_converge, run_evolve, run_kernel};
use crate::table::ResultTable;

#[derive(Debug, Parser)]
#[command(
    name = "dampath",
    version,
    about = "Path-integral propagator of the damped particle: kernels, convergence, packets, comparisons",
    after_help = "Defaults: kappa = 0.6, hbar = 1, v0 = 5, theta0 = 0.5. \
                  Settings may also come from --config FILE (key = value lines); flags override the file. \
                  Without --out, output goes to $DAMPATH_OUT_DIR/<command>.<ext> if set, else stdout.\n\
                  Exit status: 0 ok, 1 config error, 2 invariant failure, 3 numerical refusal."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandArg,

    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum CommandArg {
    /// Closed-form kernel over a (T, xa, xb) grid
    Kernel,
    /// Sliced kernel against the closed form for each N
    Converge,
    /// Packet observables over a T grid, optionally with the quadrature oracle
    Evolve,
    /// <x> and <v> of LG, KOCH, CK and DGST over a T grid
    Compare,
    /// Run every invariant at the standard parameters
    Check,
}

impl From<CommandArg> for Command {
    fn from(c: CommandArg) -> Self {
        match c {
            CommandArg::Kernel => Command::Kernel,
            CommandArg::Converge => Command::Converge,
            CommandArg::Evolve => Command::Evolve,
            CommandArg::Compare => Command::Compare,
            CommandArg::Check => Command::Check,
        }
    }
}

#[derive(Debug, Default, Args)]
pub struct Opts {
    /// Damping rate kappa >= 0 [default: 0.6]
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub kappa: Option<String>,
    /// Reduced Planck constant [default: 1]
    #[arg(long, global = true)]
    pub hbar: Option<String>,
    /// Initial carrier velocity [default: 5]
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub v0: Option<String>,
    /// Initial complex width, e.g. 0.5 or 0.5+0.1i [default: 0.5]
    #[arg(long, global = true)]
    pub theta0: Option<String>,
    /// Single duration
    #[arg(long = "T", global = true)]
    pub t: Option<String>,
    /// Durations as start:end:count
    #[arg(long = "T-grid", global = true)]
    pub t_grid: Option<String>,
    /// Initial endpoint, value or start:end:count [default: 0]
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub xa: Option<String>,
    /// Final endpoint, value or start:end:count [default: 1]
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub xb: Option<String>,
    /// Ascending slice counts, comma separated [default: 125,250,...,8000]
    #[arg(long = "N-list", global = true)]
    pub n_list: Option<String>,
    /// Methods for compare, comma separated (lg, kochan, ck, dgst) [default: all]
    #[arg(long, global = true)]
    pub method: Option<String>,
    /// Add quadrature-oracle columns to evolve
    #[arg(long, global = true)]
    pub oracle: bool,
    /// Oracle output samples [default: 2001]
    #[arg(long, global = true)]
    pub samples: Option<String>,
    /// Fixed oracle panel count instead of automatic sizing
    #[arg(long, global = true)]
    pub panels: Option<String>,
    /// csv or json [default: csv]
    #[arg(long, global = true)]
    pub format: Option<String>,
    /// Space-separated gnuplot variant of the csv output
    #[arg(long, global = true)]
    pub whitespace: bool,
    /// Output file
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// key = value settings file
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, hide = true)]
    pub inject: Option<String>,
}

impl Opts {
    pub fn settings(&self) -> CliResult<Settings> {
        let mut s = Settings::default();
        let pairs: [(&str, &Option<String>); 13] = [
            ("kappa", &self.kappa),
            ("hbar", &self.hbar),
            ("v0", &self.v0),
            ("theta0", &self.theta0),
            ("T", &self.t),
            ("T-grid", &self.t_grid),
            ("xa", &self.xa),
            ("xb", &self.xb),
            ("N-list", &self.n_list),
            ("method", &self.method),
            ("samples", &self.samples),
            ("panels", &self.panels),
            ("format", &self.format),
        ];
        for (k, v) in pairs {
            if let Some(v) = v {
                s.set(k, v.clone(), format!("--{k}"))?;
            }
        }
        if let Some(inject) = &self.inject {
            s.set("inject", inject.clone(), "--inject")?;
        }
        if let Some(out) = &self.out {
            s.set("out", out.display().to_string(), "--out")?;
        }
        if self.oracle {
            s.set("oracle", "true", "--oracle")?;
        }
        if self.whitespace {
            s.set("whitespace", "true", "--whitespace")?;
        }
        Ok(s)
    }
}

/// Resolves settings (file, then flags) into a [`RunConfig`].
pub fn resolve(cli: &Cli, out_dir: Option<PathBuf>) -> CliResult<RunConfig> {
    let file = match &cli.opts.config {
        Some(path) => Settings::from_file(path)?,
        None => Settings::default(),
    };
    let merged = file.merged(cli.opts.settings()?);
    RunConfig::resolve(cli.command.into(), &merged, out_dir)
}

pub fn run(cfg: &RunConfig) -> CliResult<ResultTable> {
    match cfg.command {
        Command::Kernel => run_kernel(cfg),
        Command::Converge => run_converge(cfg),
        Command::Evolve => run_evolve(cfg),
        Command::Compare => run_compare(cfg),
        Command::Check => run_check(cfg),
    }
}

/// Renders and writes the table; `Err(InvariantFailure)` after writing if
/// a `check` row failed.
pub fn emit(cfg: &RunConfig, table: &ResultTable) -> CliResult<()> {
    let bytes = table.render(cfg.output.format, cfg.output.whitespace)?;
    match &cfg.output.path {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir).map_err(|source| CliError::Io {
                    context: format!("creating {}", dir.display()),
                    source,
                })?;
            }
            std::fs::write(path, &bytes).map_err(|source| CliError::Io {
                context: format!("writing {}", path.display()),
                source,
            })?;
        }
        None => {
            use std::io::Write;
            std::io::stdout().write_all(&bytes).map_err(|source| CliError::Io {
                context: "writing stdout".into(),
                source,
            })?;
        }
    }
    if cfg.command == Command::Check {
        let failed = failures(table);
        if failed > 0 {
            return Err(CliError::InvariantFailure { failed });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clap_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn flags_parse_after_subcommand() {
        let cli = Cli::try_parse_from(["dampath", "kernel", "--kappa", "0", "--xa", "-1:1:3", "--T", "2"]).unwrap();
        let cfg = resolve(&cli, None).unwrap();
        assert_eq!(cfg.params.kappa, 0.0);
        assert_eq!(cfg.xa.values(), vec![-1.0, 0.0, 1.0]);
        assert_eq!(cfg.times.values(), vec![2.0]);
    }

    #[test]
    fn unknown_subcommand_is_rejected() {
        assert!(Cli::try_parse_from(["dampath", "plot"]).is_err());
    }
}
