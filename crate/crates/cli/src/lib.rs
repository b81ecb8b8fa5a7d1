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

//! Command-line front end: scenario files in, JSON reports out.
//!
//! Exit codes: 0 success, 1 usage or unreadable file, 2 parse error,
//! 3 invariant violation, 4 request for an impossible outcome.

pub mod commands;
pub mod error;
pub mod files;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use error::{exit, CliError};
pub use files::{emit_json, RunReportFile, ScenarioFile};

#[derive(Debug, Parser)]
#[command(name = "epr", version, about = "Conditional predictions for two identical finite-level systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check scenario invariants and print a residual table.
    Verify { file: PathBuf },
    /// Run the full analysis and emit a JSON report.
    Analyze {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simulate the S-then-A1 measurement chain.
    Sample {
        file: PathBuf,
        #[arg(long)]
        shots: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Analyze the two-qubit Pauli scenario with the given amplitudes.
    DemoPauli {
        /// re,im pairs for (1,1), (1,-1), (-1,1), (-1,-1).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        amplitudes: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Predictions given S = sum and, optionally, A1 = a1.
    Predict {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        sum: f64,
        #[arg(long, allow_hyphen_values = true)]
        a1: Option<f64>,
    },
}

pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    use commands::*;
    match cli.command {
        Command::Verify { file } => cmd_verify(&file, stdout),
        Command::Analyze { file, out } => cmd_analyze(&file, out.as_deref(), stdout),
        Command::Sample { file, shots, seed, out } => cmd_sample(&file, shots, seed, out.as_deref(), stdout),
        Command::DemoPauli { amplitudes, out } => cmd_demo_pauli(&amplitudes, out.as_deref(), stdout),
        Command::Predict { file, sum, a1 } => cmd_predict(&file, sum, a1, stdout),
    }
}
