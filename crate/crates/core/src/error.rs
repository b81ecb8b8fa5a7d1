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

use thiserror::Error;

/// Errors raised by the measurement and prediction routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("matrix is not Hermitian (max |M - M^H| = {residual:e}, tolerance {tolerance:e})")]
    NotHermitian { residual: f64, tolerance: f64 },

    #[error("commutation constant alpha must be nonzero")]
    ZeroAlpha,

    #[error("Hermitian eigensolver failed to converge")]
    EigenSolver,

    #[error("state vector norm {norm:e} is below the minimum 1e-8")]
    ZeroNorm { norm: f64 },

    #[error("factor observable has a degenerate spectrum")]
    DegenerateSpectrum,

    #[error("spectrum must be strictly increasing")]
    UnsortedSpectrum,

    #[error("spectrum function has no value for eigenvalue {value}")]
    MissingFunctionValue { value: f64 },

    #[error("outcome has probability {probability:e}; cannot condition on it")]
    ImpossibleOutcome { probability: f64 },

    #[error("value {value} does not match any eigenvalue")]
    NotInSpectrum { value: f64 },

    #[error("index {index} out of range (length {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("invalid factor slot {0}; expected 1 or 2")]
    InvalidSlot(u8),

    #[error("matrix is not an orthogonal projector (residual {residual:e})")]
    NotProjector { residual: f64 },

    #[error("[A,B]/(i alpha) differs from C by {residual:e}")]
    CommutationMismatch { residual: f64 },

    #[error("state is not an eigenstate as required: {0}")]
    NotEigenstate(String),

    #[error("shot count must be at least 1")]
    InvalidShots,

    #[error("record does not belong to scenario: {0}")]
    ScenarioMismatch(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
}

pub type Result<T> = std::result::Result<T, Error>;
