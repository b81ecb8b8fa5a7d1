// Copyright 2026 The epr-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

use epr_core::Error as CoreError;
use thiserror::Error;

/// Process exit codes. Stable across releases.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const PARSE: i32 = 2;
    pub const INVARIANT: i32 = 3;
    pub const IMPOSSIBLE: i32 = 4;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("cannot access {path}: {message}")]
    Io { path: String, message: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invariant violation: {0}")]
    Invariant(String),
    #[error("impossible outcome: {0}")]
    Impossible(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => exit::USAGE,
            CliError::Parse(_) => exit::PARSE,
            CliError::Invariant(_) => exit::INVARIANT,
            CliError::Impossible(_) => exit::IMPOSSIBLE,
        }
    }

    pub(crate) fn io(path: &std::path::Path, err: std::io::Error) -> Self {
        CliError::Io { path: path.display().to_string(), message: err.to_string() }
    }

    /// Attach `context` (usually the offending field) to a core error.
    pub(crate) fn core(context: &str, err: CoreError) -> Self {
        let message = if context.is_empty() { err.to_string() } else { format!("{context}: {err}") };
        match err {
            CoreError::ImpossibleOutcome { .. } | CoreError::NotInSpectrum { .. } => CliError::Impossible(message),
            CoreError::InvalidShots => CliError::Usage(message),
            _ => CliError::Invariant(message),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(err: CoreError) -> Self {
        CliError::core("", err)
    }
}
