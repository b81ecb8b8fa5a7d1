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

//! JSON scenario and report files.

use std::fs;
use std::path::Path;

use epr_core::lab::scenario::Scenario;
use epr_core::lab::{EmpiricalComparison, EprReport, ShotRecord};
use epr_core::linalg::{ComplexMatrix, C64};
use epr_core::{Error as CoreError, Observable, PureState};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Number, Value};

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

/// Significant digits kept for every floating-point number in emitted files.
pub const REPORT_DIGITS: usize = 15;

/// `[re, im]`.
pub type JsonComplex = [f64; 2];
/// Row-major nested rows.
pub type JsonMatrix = Vec<Vec<JsonComplex>>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub schema_version: u32,
    pub label: String,
    pub factor_dim: usize,
    pub matrix_a: JsonMatrix,
    pub matrix_b: JsonMatrix,
    pub alpha: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix_c: Option<JsonMatrix>,
    /// Amplitudes in lexicographic order of `(i, j)`.
    pub state: Vec<JsonComplex>,
}

fn to_complex(z: JsonComplex) -> C64 {
    C64::new(z[0], z[1])
}

pub fn matrix_to_json(m: &ComplexMatrix) -> JsonMatrix {
    m.to_rows().into_iter().map(|row| row.into_iter().map(|z| [z.re, z.im]).collect()).collect()
}

pub fn vector_to_json(v: &[C64]) -> Vec<JsonComplex> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

impl ScenarioFile {
    /// Strict JSON parse plus shape checks. Shape problems are parse errors;
    /// mathematical ones surface later in [`ScenarioFile::to_scenario`].
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let file: ScenarioFile = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
        if file.schema_version != SCHEMA_VERSION {
            return Err(CliError::Parse(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                file.schema_version
            )));
        }
        let n = file.factor_dim;
        if n == 0 {
            return Err(CliError::Parse("factor_dim must be positive".into()));
        }
        for (name, m) in file.matrices() {
            if m.len() != n || m.iter().any(|row| row.len() != n) {
                return Err(CliError::Parse(format!("{name} must be {n}x{n}")));
            }
        }
        if file.state.len() != n * n {
            return Err(CliError::Parse(format!("state must have {} amplitudes, found {}", n * n, file.state.len())));
        }
        Ok(file)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    /// `(field name, matrix)` for every matrix present.
    pub fn matrices(&self) -> Vec<(&'static str, &JsonMatrix)> {
        let mut out = vec![("matrix_a", &self.matrix_a), ("matrix_b", &self.matrix_b)];
        if let Some(c) = &self.matrix_c {
            out.push(("matrix_c", c));
        }
        out
    }

    pub fn matrix(&self, name: &str) -> Option<ComplexMatrix> {
        let rows = self.matrices().into_iter().find(|(n, _)| *n == name)?.1;
        let rows: Vec<Vec<C64>> = rows.iter().map(|r| r.iter().copied().map(to_complex).collect()).collect();
        ComplexMatrix::from_rows(&rows).ok()
    }

    pub fn amplitudes(&self) -> Vec<C64> {
        self.state.iter().copied().map(to_complex).collect()
    }

    fn observable(&self, name: &'static str) -> Result<Option<Observable>, CliError> {
        match self.matrix(name) {
            None => Ok(None),
            Some(m) => Observable::new(m).map(Some).map_err(|e| CliError::core(name, e)),
        }
    }

    /// Validate the invariants and build the scenario. Errors name the
    /// offending field.
    pub fn to_scenario(&self) -> Result<Scenario, CliError> {
        let a = self.observable("matrix_a")?.expect("matrix_a is required");
        let b = self.observable("matrix_b")?.expect("matrix_b is required");
        let c = self.observable("matrix_c")?;
        if !self.alpha.is_finite() || self.alpha == 0.0 {
            return Err(CliError::core("alpha", CoreError::ZeroAlpha));
        }
        let state = PureState::composite(self.amplitudes(), self.factor_dim).map_err(|e| CliError::core("state", e))?;
        Scenario::new(self.label.clone(), a, b, c, self.alpha, state).map_err(|e| {
            let field = match e {
                CoreError::CommutationMismatch { .. } => "matrix_c",
                CoreError::DegenerateSpectrum => "matrix_a",
                _ => "scenario",
            };
            CliError::core(field, e)
        })
    }

    /// Resolved inputs of a scenario: `matrix_c` always present and the
    /// state normalized.
    pub fn from_scenario(sc: &Scenario) -> Self {
        ScenarioFile {
            schema_version: SCHEMA_VERSION,
            label: sc.label().to_string(),
            factor_dim: sc.factor_dim(),
            matrix_a: matrix_to_json(sc.obs_a().matrix()),
            matrix_b: matrix_to_json(sc.obs_b().matrix()),
            alpha: sc.alpha(),
            matrix_c: Some(matrix_to_json(sc.obs_c().matrix())),
            state: vector_to_json(sc.initial_state().amplitudes()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleSection {
    pub record: ShotRecord,
    pub comparison: EmpiricalComparison,
}

/// Toolchain information. Kept apart from the computed payload.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    pub tool: String,
    pub version: String,
}

impl Default for Metadata {
    fn default() -> Self {
        Metadata { tool: env!("CARGO_PKG_NAME").to_string(), version: env!("CARGO_PKG_VERSION").to_string() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunReportFile {
    pub schema_version: u32,
    pub label: String,
    pub inputs: ScenarioFile,
    pub analysis: EprReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample: Option<SampleSection>,
    pub metadata: Metadata,
}

impl RunReportFile {
    pub fn new(sc: &Scenario, analysis: EprReport, sample: Option<SampleSection>) -> Self {
        RunReportFile {
            schema_version: SCHEMA_VERSION,
            label: sc.label().to_string(),
            inputs: ScenarioFile::from_scenario(sc),
            analysis,
            sample,
            metadata: Metadata::default(),
        }
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let report: RunReportFile = parse_json(text)?;
        if report.schema_version != SCHEMA_VERSION {
            return Err(CliError::Parse(format!("unsupported schema_version {}", report.schema_version)));
        }
        Ok(report)
    }
}

pub fn parse_json<T: DeserializeOwned>(text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
}

fn round_significant(x: f64) -> f64 {
    let r: f64 = format!("{:.*e}", REPORT_DIGITS - 1, x).parse().unwrap_or(x);
    if r == 0.0 { 0.0 } else { r }
}

fn round_numbers(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(r) = n.as_f64().map(round_significant).and_then(Number::from_f64) {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_numbers),
        Value::Object(map) => map.values_mut().for_each(round_numbers),
        _ => {}
    }
}

/// Pretty JSON with every float rounded to [`REPORT_DIGITS`] significant
/// digits. Integers (counts, seeds) are written exactly.
pub fn emit_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut tree = serde_json::to_value(value).map_err(|e| CliError::Invariant(format!("cannot serialize: {e}")))?;
    round_numbers(&mut tree);
    let mut text = serde_json::to_string_pretty(&tree).map_err(|e| CliError::Invariant(format!("cannot serialize: {e}")))?;
    text.push('\n');
    Ok(text)
}
