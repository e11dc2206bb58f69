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

use thiserror::Error;

/// Errors produced by the offloading library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An exact solver was asked to handle an instance above its size cap.
    #[error("{solver}: instance size {size} exceeds cap {cap}")]
    SolverLimit {
        solver: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    /// A closed form hit a degenerate point; `fallback` is the limiting value.
    #[error("degenerate input: {reason}")]
    Degenerate { reason: String, fallback: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
