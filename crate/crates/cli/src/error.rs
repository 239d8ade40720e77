// Copyright 2026 The dampath Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Exit statuses of the `dampath` binary.
pub mod exit {
    pub const SUCCESS: u8 = 0;
    pub const CONFIG: u8 = 1;
    pub const INVARIANT: u8 = 2;
    pub const NUMERICAL: u8 = 3;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Core(#[from] dampath::Error),

    #[error("{failed} invariant(s) failed")]
    InvariantFailure { failed: usize },
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    pub fn exit_code(&self) -> u8 {
        use dampath::Error as E;
        match self {
            CliError::Config(_) | CliError::Io { .. } => exit::CONFIG,
            CliError::Core(E::InvalidParameter { .. } | E::ZeroFriction) => exit::CONFIG,
            CliError::Core(_) => exit::NUMERICAL,
            CliError::InvariantFailure { .. } => exit::INVARIANT,
        }
    }

    /// Extra hint printed under the message, if any.
    pub fn guidance(&self) -> Option<String> {
        match self {
            CliError::Core(dampath::Error::UnderResolved { suggested_panels, .. }) => Some(format!(
                "rerun with --panels {suggested_panels} (or drop --panels to size the grid automatically)"
            )),
            _ => None,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
