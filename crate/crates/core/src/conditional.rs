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

//! Prediction after measuring the conserved sum `S = A1 + A2`.
//!
//! Everything in this module goes through projectors: the state is collapsed
//! onto an eigenspace of `S` (and possibly of `A1`) and expectations are
//! taken in the post-measurement state. [`crate::oracle`] computes the same
//! quantities by classical conditioning of the joint distribution `q`, and
//! the two are compared in tests.

use serde::{Deserialize, Serialize};

use crate::composite::{JointSystem, Slot};
use crate::error::{Error, Result};
use crate::function::{PairFunction, SpectrumFunction};
use crate::linalg::{ComplexMatrix, C64};
use crate::observable::Observable;
use crate::state::{audit_uncertainty, mean_and_spread, outcome_probabilities, OutcomeDistribution, PureState, UncertaintyReport};

/// Distribution of `A1` given that `S` was observed to equal `given_sum`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionalDistribution {
    pub given_sum: f64,
    /// `(a_n, q(a_n, s - a_n) / p(s))` for every `a_n` with `χ(a_n, s)`.
    pub support: Vec<(f64, f64)>,
}

impl ConditionalDistribution {
    pub fn probability_of(&self, a: f64, tol: f64) -> f64 {
        self.support.iter().find(|(x, _)| (x - a).abs() <= tol).map_or(0.0, |o| o.1)
    }

    pub fn total(&self) -> f64 {
        self.support.iter().map(|o| o.1).sum()
    }
}

/// Mean and standard deviation of an observable in a state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PredictionSummary {
    pub mean: f64,
    pub stdev: f64,
}

impl PredictionSummary {
    pub fn in_state(state: &PureState, m: &ComplexMatrix) -> Result<Self> {
        let (mean, stdev) = mean_and_spread(state, m)?;
        Ok(PredictionSummary { mean, stdev })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionalEntry {
    pub sum: f64,
    pub probability: f64,
    /// `e(s_k)`.
    pub value: f64,
}

/// `e(s_k) = E[f(A1) | S = s_k]` on every sum value with nonzero probability.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionalExpectationTable {
    pub entries: Vec<ConditionalEntry>,
}

impl ConditionalExpectationTable {
    pub fn value_at(&self, s: f64, tol: f64) -> Option<f64> {
        self.entries.iter().find(|e| (e.sum - s).abs() <= tol).map(|e| e.value)
    }

    pub fn sums(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.sum).collect()
    }

    pub fn as_function(&self) -> SpectrumFunction {
        SpectrumFunction::from_pairs(self.entries.iter().map(|e| (e.sum, e.value)).collect())
    }

    /// Largest `|e(s) - other.e(s)|`; infinite if the populated sums differ.
    pub fn max_abs_diff(&self, other: &Self, tol: f64) -> f64 {
        if self.entries.len() != other.entries.len() {
            return f64::INFINITY;
        }
        self.entries
            .iter()
            .map(|e| other.value_at(e.sum, tol).map_or(f64::INFINITY, |v| (v - e.value).abs()))
            .fold(0.0, f64::max)
    }
}

/// Collapse onto `S = s_value`; returns `(k, Ψ_s, p(s))`.
fn collapse_on_sum(sys: &JointSystem, state: &PureState, s_value: f64) -> Result<(usize, PureState, f64)> {
    let k = sys.match_sum(s_value)?;
    let (post, p) = sys.condition_on_sum(state, k)?;
    Ok((k, post, p))
}

/// Distribution of `A1` in the post-measurement state `Ψ_s`.
pub fn conditional_distribution(sys: &JointSystem, state: &PureState, s_value: f64) -> Result<ConditionalDistribution> {
    let (k, post, _) = collapse_on_sum(sys, state, s_value)?;
    let dist = outcome_probabilities(&post, sys.a1())?;
    let idx = sys.index();
    let support = (0..idx.spectrum().len())
        .filter(|&n| idx.chi(n, k))
        .map(|n| dist.outcomes()[n])
        .collect();
    Ok(ConditionalDistribution { given_sum: idx.sums()[k], support })
}

/// Mean and spread of an arbitrary composite observable in `Ψ_s`.
pub fn predict_given_sum(sys: &JointSystem, state: &PureState, obs: &Observable, s_value: f64) -> Result<PredictionSummary> {
    let (_, post, _) = collapse_on_sum(sys, state, s_value)?;
    PredictionSummary::in_state(&post, obs.matrix())
}

/// Mean and spread of `f(A1)` in `Ψ_s`.
pub fn conditional_prediction(sys: &JointSystem, state: &PureState, f: &SpectrumFunction, s_value: f64) -> Result<PredictionSummary> {
    let (_, post, _) = collapse_on_sum(sys, state, s_value)?;
    PredictionSummary::in_state(&post, &sys.a1().function_matrix(f)?)
}

/// `m(A2) = s - m(A1)` and `Δ(A1) = Δ(A2)` in `Ψ_s`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Theorem2Report {
    pub sum: f64,
    pub a1: PredictionSummary,
    pub a2: PredictionSummary,
    /// `|m(A2) - (s - m(A1))|`.
    pub mean_identity_residual: f64,
    /// `|Δ(A1) - Δ(A2)|`.
    pub stdev_gap: f64,
}

impl Theorem2Report {
    pub fn holds(&self, tol: f64) -> bool {
        self.mean_identity_residual <= tol && self.stdev_gap <= tol
    }
}

pub fn verify_theorem2(sys: &JointSystem, state: &PureState, s_value: f64) -> Result<Theorem2Report> {
    let (k, post, _) = collapse_on_sum(sys, state, s_value)?;
    let s = sys.index().sums()[k];
    let a1 = PredictionSummary::in_state(&post, sys.a1().matrix())?;
    let a2 = PredictionSummary::in_state(&post, sys.a2().matrix())?;
    Ok(Theorem2Report {
        sum: s,
        a1,
        a2,
        mean_identity_residual: (a2.mean - (s - a1.mean)).abs(),
        stdev_gap: (a1.stdev - a2.stdev).abs(),
    })
}

/// Measure `S` and then `A1`, returning the final state `φ`, which is the
/// product eigenvector `|a1, s - a1⟩` up to a phase.
pub fn sequential_measure(sys: &JointSystem, state: &PureState, s_value: f64, a1_value: f64) -> Result<PureState> {
    let (_, post, _) = collapse_on_sum(sys, state, s_value)?;
    let n = sys.match_factor(a1_value)?;
    Ok(sys.condition_on_first(&post, n)?.0)
}

/// Prediction of `g(A2)` after the `S`-then-`A1` chain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertainPrediction {
    pub value: f64,
    pub stdev: f64,
    /// Distribution of `A2` in `φ`: a point mass at `s - a1`.
    pub delta_check: OutcomeDistribution,
}

/// Predict `g(A2)` in a state produced by [`sequential_measure`]. The value
/// equals `g(s - a1)` with zero spread.
pub fn certain_prediction(
    sys: &JointSystem,
    phi: &PureState,
    g: &SpectrumFunction,
    s_value: f64,
    a1_value: f64,
) -> Result<CertainPrediction> {
    let k = sys.match_sum(s_value)?;
    let n = sys.match_factor(a1_value)?;
    if !sys.index().chi(n, k) {
        return Err(Error::NotInSpectrum { value: s_value - a1_value });
    }
    for (projector, what) in [(sys.sum().observable().projector(k)?, "S"), (sys.a1().projector(n)?, "A1")] {
        let weight = phi.expectation(projector)?;
        if weight < 1.0 - 1e-10 {
            return Err(Error::NotEigenstate(format!("{what} weight {weight}")));
        }
    }
    let summary = PredictionSummary::in_state(phi, &sys.a2().function_matrix(g)?)?;
    Ok(CertainPrediction {
        value: summary.mean,
        stdev: summary.stdev,
        delta_check: outcome_probabilities(phi, sys.a2())?,
    })
}

/// Audit `(A2, B2, C2)` in a product eigenstate. `b` and `c` are the
/// factor-level observables.
pub fn epr_resolution_check(sys: &JointSystem, phi: &PureState, b: &Observable, c: &Observable) -> Result<UncertaintyReport> {
    let b2 = sys.lift(b, Slot::Second)?;
    let c2 = sys.lift(c, Slot::Second)?;
    audit_uncertainty(phi, sys.a2(), &b2, &c2)
}

/// `e(s_k) = ⟨Ψ_{s_k}|f(A1)|Ψ_{s_k}⟩` for every populated `s_k`.
pub fn quantum_conditional_expectation(sys: &JointSystem, state: &PureState, f: &SpectrumFunction) -> Result<ConditionalExpectationTable> {
    let fm = sys.a1().function_matrix(f)?;
    let mut entries = Vec::new();
    for k in 0..sys.index().len() {
        match sys.condition_on_sum(state, k) {
            Ok((post, p)) => entries.push(ConditionalEntry {
                sum: sys.index().sums()[k],
                probability: p,
                value: post.expectation(&fm)?,
            }),
            Err(Error::ImpossibleOutcome { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(ConditionalExpectationTable { entries })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TowerReport {
    /// `Σ_k G(s_k) e(s_k) p(s_k)`.
    pub lhs: f64,
    /// `Σ_{n,m} f(a_n) G(a_n + a_m) q(n, m)`.
    pub rhs: f64,
    pub residual: f64,
}

/// Compare `E[e(S) G(S)]` against `E[f(A1) G(S)]`.
pub fn verify_tower_property(sys: &JointSystem, state: &PureState, f: &SpectrumFunction, g: &SpectrumFunction) -> Result<TowerReport> {
    let tol = sys.index().tol();
    let table = quantum_conditional_expectation(sys, state, f)?;
    let lhs = table
        .entries
        .iter()
        .map(|e| Ok(g.require(e.sum, tol)? * e.value * e.probability))
        .sum::<Result<f64>>()?;

    let q = crate::composite::joint_distribution(state, sys.space())?;
    let idx = sys.index();
    let spectrum = idx.spectrum();
    let ftol = sys.factor().grouping_tol();
    let mut rhs = 0.0;
    for (n, &an) in spectrum.iter().enumerate() {
        let fa = f.require(an, ftol)?;
        for m in 0..spectrum.len() {
            let s = idx.sums()[idx.sum_index(n, m)];
            rhs += fa * g.require(s, tol)? * q.get(n, m);
        }
    }
    Ok(TowerReport { lhs, rhs, residual: (lhs - rhs).abs() })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ce2Report {
    /// `⟨φ|H(A1, S)|φ⟩`.
    pub predicted: f64,
    /// `H(a1, s)`.
    pub expected: f64,
    pub residual: f64,
}

/// Every `(a_n, s_k)` with `χ(a_n, s_k)`: the domain of a function `H(A1, S)`.
pub fn joint_domain(sys: &JointSystem) -> Vec<(f64, f64)> {
    let idx = sys.index();
    let mut out = Vec::new();
    for (n, &a) in idx.spectrum().iter().enumerate() {
        for (k, &s) in idx.sums().iter().enumerate() {
            if idx.chi(n, k) {
                out.push((a, s));
            }
        }
    }
    out
}

/// `H(A1, S) = Σ_{n,m} H(a_n, a_n + a_m) |a_n, a_m⟩⟨a_n, a_m|`.
pub fn pair_function_matrix(sys: &JointSystem, h: &PairFunction) -> Result<ComplexMatrix> {
    let idx = sys.index();
    let spectrum = idx.spectrum();
    let dim = sys.space().dim();
    let tol = idx.tol();
    let mut out = ComplexMatrix::zeros(dim, dim);
    for (n, &a) in spectrum.iter().enumerate() {
        for m in 0..spectrum.len() {
            let value = h.require(a, idx.sums()[idx.sum_index(n, m)], tol)?;
            let v = sys.space().product_vector(n, m);
            out = &out + &ComplexMatrix::outer(&v, &v).scale(C64::new(value, 0.0));
        }
    }
    Ok(out)
}

/// Predict `H(A1, S)` after observing `S = s`, `A1 = a1`; it must equal `H(a1, s)`.
pub fn verify_ce2(sys: &JointSystem, state: &PureState, h: &PairFunction, s_value: f64, a1_value: f64) -> Result<Ce2Report> {
    let phi = sequential_measure(sys, state, s_value, a1_value)?;
    let s = sys.index().sums()[sys.match_sum(s_value)?];
    let a1 = sys.factor().eigenvalues()[sys.match_factor(a1_value)?];
    let predicted = phi.expectation(&pair_function_matrix(sys, h)?)?;
    let expected = h.require(a1, s, sys.index().tol())?;
    Ok(Ce2Report { predicted, expected, residual: (predicted - expected).abs() })
}
