// Copyright 2026 The dampath Authors
// SPDX-License-Identifier: Apache-2.0

//! Runners and report writers behind the `dampath` binary.
// `!(x > 0.0)` is the NaN-rejecting form used for argument checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod check;
pub mod cli;
pub mod config;
pub mod error;
pub mod runners;
pub mod table;
pub mod tolerances;

pub use config::{Command, Format, RunConfig};
pub use error::{CliError, CliResult};
pub use table::{Cell, ResultTable};
