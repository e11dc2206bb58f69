// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.


//! Library half of the `onc` command-line tool.
//!
//! Each subcommand is a function from a resolved [`Config`] to an
//! [`Output`], so the binary only handles flags, files and exit codes.

pub mod commands;
pub mod config;
mod validate;

pub use commands::{cmd_fixtures, cmd_schedule, cmd_sweep, cmd_theory, cmd_validate, execute, header};
pub use config::Config;

/// Subcommand selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Schedule,
    Sweep,
    Theory,
    Validate,
    Fixtures,
}

impl Command {
    pub fn as_str(&self) -> &'static str {
        match self {
            Command::Schedule => "schedule",
            Command::Sweep => "sweep",
            Command::Theory => "theory",
            Command::Validate => "validate",
            Command::Fixtures => "fixtures",
        }
    }
}

/// Text produced by a command plus anything worth telling the user.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Output {
    pub text: String,
    pub warnings: Vec<String>,
    /// Set by `validate` when at least one check failed.
    pub failed: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("solver limit: {0}")]
    SolverLimit(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("{0}")]
    Other(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::SolverLimit(_) => 3,
            CliError::Validation(_) => 4,
            CliError::Other(_) | CliError::Io(_) => 1,
        }
    }
}

impl From<onc_core::Error> for CliError {
    fn from(e: onc_core::Error) -> Self {
        use onc_core::Error as E;
        match e {
            E::SolverLimit { .. } => {
                CliError::SolverLimit(format!("{e}; set `policy = gvs-ggc` to use the greedy solvers"))
            }
            E::InvalidConfiguration(_) | E::InvalidInput(_) | E::Parse { .. } | E::Unsupported(_) => {
                CliError::Config(e.to_string())
            }
            E::Degenerate { .. } | E::InsufficientData(_) => CliError::Other(e.to_string()),
        }
    }
}
