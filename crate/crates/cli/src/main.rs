// Copyright 2026 The dampath Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use dampath_cli::cli::{emit, resolve, run, Cli};
use dampath_cli::config::OUT_DIR_ENV;
use dampath_cli::error::exit;
use dampath_cli::CliError;

fn main() -> ExitCode {
    // clap's own exit status for usage errors (2) would collide with ours
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::CONFIG } else { exit::SUCCESS });
        }
    };
    let started = Instant::now();
    let result = resolve(&cli, std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .and_then(|cfg| run(&cfg).and_then(|table| emit(&cfg, &table)));
    // wall time goes to stderr only, keeping the output files reproducible
    eprintln!("dampath: finished in {:.3} s", started.elapsed().as_secs_f64());
    match result {
        Ok(()) => ExitCode::from(exit::SUCCESS),
        Err(e) => report(e),
    }
}

fn report(e: CliError) -> ExitCode {
    eprintln!("dampath: {e}");
    if let Some(hint) = e.guidance() {
        eprintln!("  hint: {hint}");
    }
    ExitCode::from(e.exit_code())
}
