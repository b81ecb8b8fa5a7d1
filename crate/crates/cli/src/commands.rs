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

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use epr_core::conditional::{conditional_distribution, sequential_measure};
use epr_core::lab::scenario::{Scenario, COMMUTATION_TOL};
use epr_core::lab::{build_pauli_scenario, compare_empirical, run_epr_analysis, sample_chain};
use epr_core::linalg::{extract_c, C64, GROUPING_RTOL};
use epr_core::state::{verify_theorem1, MIN_NORM};
use epr_core::Observable;
use serde::Serialize;

use crate::error::CliError;
use crate::files::{emit_json, RunReportFile, SampleSection, ScenarioFile};

/// Relative bound on `tr C` and the diagonal of `C` in the eigenbasis of `A`, in units of `‖C‖_F`.
pub const THEOREM1_RTOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bound {
    AtMost,
    AtLeast,
}

/// One row of the `verify` table.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub bound: f64,
    pub kind: Bound,
}

impl Check {
    fn new(name: impl Into<String>, value: f64, kind: Bound, bound: f64) -> Self {
        Check { name: name.into(), value, bound, kind }
    }

    pub fn passed(&self) -> bool {
        match self.kind {
            Bound::AtMost => self.value <= self.bound,
            Bound::AtLeast => self.value >= self.bound,
        }
    }
}

pub fn render_checks(checks: &[Check]) -> String {
    let mut out = format!("{:<28} {:>12} {:>14}  status\n", "check", "value", "bound");
    for c in checks {
        let op = if c.kind == Bound::AtMost { "<=" } else { ">=" };
        let status = if c.passed() { "ok" } else { "FAIL" };
        let _ = writeln!(out, "{:<28} {:>12.3e} {:>2} {:>11.3e}  {status}", c.name, c.value, op, c.bound);
    }
    out
}

fn first_failure(checks: &[Check]) -> Option<&Check> {
    checks.iter().find(|c| !c.passed())
}

/// Evaluate the scenario invariants in order, stopping after the first one
/// that fails (later checks may depend on it).
pub fn scenario_checks(file: &ScenarioFile) -> Vec<Check> {
    let mut checks = Vec::new();
    macro_rules! push {
        ($check:expr) => {{
            let c = $check;
            let ok = c.passed();
            checks.push(c);
            if !ok {
                return checks;
            }
        }};
    }

    for (name, _) in file.matrices() {
        let m = file.matrix(name).expect("shape checked at parse time");
        push!(Check::new(format!("{name} hermiticity"), m.hermiticity_residual(), Bound::AtMost, m.hermiticity_tolerance()));
    }
    let norm = file.amplitudes().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    push!(Check::new("state norm", norm, Bound::AtLeast, MIN_NORM));
    push!(Check::new("alpha magnitude", file.alpha.abs(), Bound::AtLeast, f64::MIN_POSITIVE));

    let Ok(a) = Observable::new(file.matrix("matrix_a").unwrap()) else {
        push!(Check::new("matrix_a eigensolver", f64::INFINITY, Bound::AtMost, 0.0));
        return checks;
    };
    let Ok(b) = Observable::new(file.matrix("matrix_b").unwrap()) else {
        push!(Check::new("matrix_b eigensolver", f64::INFINITY, Bound::AtMost, 0.0));
        return checks;
    };
    let values = a.eigenvalues();
    let gap = values.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    let radius = values.iter().map(|x| x.abs()).fold(1.0, f64::max);
    let gap = if a.is_nondegenerate() { gap } else { 0.0 };
    push!(Check::new("matrix_a spectral gap", gap, Bound::AtLeast, GROUPING_RTOL * radius));

    let derived = extract_c(a.matrix(), b.matrix(), file.alpha).expect("inputs validated above");
    if let Some(c) = file.matrix("matrix_c") {
        push!(Check::new("matrix_c commutation", derived.max_abs_diff(&c), Bound::AtMost, COMMUTATION_TOL));
    }
    let t1 = verify_theorem1(&a, &b, file.alpha).expect("inputs validated above");
    let bound = THEOREM1_RTOL * t1.c_norm;
    push!(Check::new("C trace", t1.trace_residual, Bound::AtMost, bound));
    push!(Check::new("C diagonal in A basis", t1.max_diag_residual, Bound::AtMost, bound));
    checks
}

fn load_scenario(path: &Path) -> Result<Scenario, CliError> {
    let file = ScenarioFile::load(path)?;
    if let Some(c) = first_failure(&scenario_checks(&file)) {
        return Err(CliError::Invariant(format!("{} = {:e} violates bound {:e}", c.name, c.value, c.bound)));
    }
    file.to_scenario()
}

fn write_output(text: &str, out: Option<&Path>, stdout: &mut dyn Write) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::io(path, e)),
        None => stdout.write_all(text.as_bytes()).map_err(|e| CliError::io(Path::new("<stdout>"), e)),
    }
}

pub fn cmd_verify(path: &Path, stdout: &mut dyn Write) -> Result<(), CliError> {
    let file = ScenarioFile::load(path)?;
    let checks = scenario_checks(&file);
    let table = render_checks(&checks);
    stdout.write_all(table.as_bytes()).map_err(|e| CliError::io(Path::new("<stdout>"), e))?;
    if let Some(c) = first_failure(&checks) {
        return Err(CliError::Invariant(format!("{} = {:e} violates bound {:e}", c.name, c.value, c.bound)));
    }
    file.to_scenario().map(|_| ())
}

pub fn analyze_scenario(sc: &Scenario) -> Result<RunReportFile, CliError> {
    Ok(RunReportFile::new(sc, run_epr_analysis(sc)?, None))
}

pub fn cmd_analyze(path: &Path, out: Option<&Path>, stdout: &mut dyn Write) -> Result<(), CliError> {
    let report = analyze_scenario(&load_scenario(path)?)?;
    write_output(&emit_json(&report)?, out, stdout)
}

pub fn sample_scenario(sc: &Scenario, shots: u64, seed: u64) -> Result<RunReportFile, CliError> {
    let record = sample_chain(sc, shots, seed)?;
    let comparison = compare_empirical(&record, sc)?;
    Ok(RunReportFile::new(sc, run_epr_analysis(sc)?, Some(SampleSection { record, comparison })))
}

pub fn cmd_sample(path: &Path, shots: u64, seed: u64, out: Option<&Path>, stdout: &mut dyn Write) -> Result<(), CliError> {
    if shots == 0 {
        return Err(CliError::Usage("--shots must be at least 1".into()));
    }
    let report = sample_scenario(&load_scenario(path)?, shots, seed)?;
    write_output(&emit_json(&report)?, out, stdout)
}

pub fn cmd_demo_pauli(amplitudes: &[f64], out: Option<&Path>, stdout: &mut dyn Write) -> Result<(), CliError> {
    if amplitudes.len() != 8 {
        return Err(CliError::Usage(format!(
            "--amplitudes takes 8 numbers (re,im for 4 amplitudes), got {}",
            amplitudes.len()
        )));
    }
    let amps: [C64; 4] = std::array::from_fn(|i| C64::new(amplitudes[2 * i], amplitudes[2 * i + 1]));
    let sc = build_pauli_scenario(amps).map_err(|e| CliError::core("amplitudes", e))?;
    write_output(&emit_json(&analyze_scenario(&sc)?)?, out, stdout)
}

/// Conditional predictions for one requested outcome.
#[derive(Debug, Serialize)]
struct Prediction<'a> {
    label: &'a str,
    sum: &'a epr_core::lab::SumReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    chain: Option<&'a epr_core::lab::ChainReport>,
}

pub fn cmd_predict(path: &Path, sum: f64, a1: Option<f64>, stdout: &mut dyn Write) -> Result<(), CliError> {
    let sc = load_scenario(path)?;
    let sys = sc.system();
    // These calls fail with the precise reason when the request is impossible.
    let dist = conditional_distribution(sys, sc.initial_state(), sum)?;
    if let Some(a1) = a1 {
        sequential_measure(sys, sc.initial_state(), sum, a1)?;
    }
    let report = run_epr_analysis(&sc)?;
    let tol = sys.index().tol();
    let sum_report = report.sum_report(dist.given_sum, tol).expect("populated sum is analyzed");
    let chain = match a1 {
        Some(a1) => {
            let a1 = sys.factor().eigenvalues()[sys.match_factor(a1)?];
            Some(report.chain(dist.given_sum, a1, tol).expect("reachable chain is analyzed"))
        }
        None => None,
    };
    let text = emit_json(&Prediction { label: sc.label(), sum: sum_report, chain })?;
    write_output(&text, None, stdout)
}

/// Paths of the scenario files shipped with the crate.
pub fn bundled_scenarios() -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios");
    ["pauli_psi0.json", "pauli_uniform.json", "pauli_product.json"].iter().map(|f| dir.join(f)).collect()
}
