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

//! End-to-end analysis of a scenario: condition on every populated value of
//! the sum, predict the factor observables, audit the uncertainty relation,
//! then run the `S`-then-`A1` chain for every reachable `a1`.

use serde::{Deserialize, Serialize};

use crate::composite::{schmidt_rank, JointSystem, Slot, SCHMIDT_TOL, ZERO_PROBABILITY};
use crate::conditional::{
    certain_prediction, conditional_distribution, epr_resolution_check, sequential_measure, verify_theorem2,
    CertainPrediction, ConditionalDistribution, PredictionSummary, Theorem2Report,
};
use crate::error::{Error, Result};
use crate::function::SpectrumFunction;
use crate::lab::scenario::Scenario;
use crate::linalg::C64;
use crate::state::{audit_uncertainty, OutcomeDistribution, UncertaintyReport};

/// Predictions in the post-measurement state `Ψ_s`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SumReport {
    pub sum: f64,
    pub probability: f64,
    pub conditional: ConditionalDistribution,
    pub a1: PredictionSummary,
    pub a2: PredictionSummary,
    pub b1: PredictionSummary,
    pub b2: PredictionSummary,
    pub c1: PredictionSummary,
    pub c2: PredictionSummary,
    pub theorem2: Theorem2Report,
    /// `(A1, B1, C1)` in `Ψ_s`.
    pub audit_1: UncertaintyReport,
    /// `(A2, B2, C2)` in `Ψ_s`.
    pub audit_2: UncertaintyReport,
    pub schmidt_rank: usize,
}

/// Outcome of measuring `S = sum` and then `A1 = a1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainReport {
    pub sum: f64,
    pub a1: f64,
    /// `s - a1`, the value `A2` must take.
    pub a2: f64,
    /// `q(a1, s - a1) / p(s)`.
    pub conditional_probability: f64,
    /// Post-measurement state amplitudes in computational order.
    pub post_state: Vec<C64>,
    pub a2_prediction: CertainPrediction,
    /// `(A2, B2, C2)` in the post-measurement state.
    pub audit: UncertaintyReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EprReport {
    pub sum_spectrum: OutcomeDistribution,
    pub per_sum: Vec<SumReport>,
    pub chains: Vec<ChainReport>,
}

impl EprReport {
    pub fn all_audits_satisfied(&self) -> bool {
        self.per_sum.iter().all(|r| r.audit_1.satisfied && r.audit_2.satisfied)
            && self.chains.iter().all(|c| c.audit.satisfied)
    }

    pub fn max_theorem2_residual(&self) -> f64 {
        self.per_sum
            .iter()
            .map(|r| r.theorem2.mean_identity_residual.max(r.theorem2.stdev_gap))
            .fold(0.0, f64::max)
    }

    pub fn sum_report(&self, s: f64, tol: f64) -> Option<&SumReport> {
        self.per_sum.iter().find(|r| (r.sum - s).abs() <= tol)
    }

    pub fn chain(&self, s: f64, a1: f64, tol: f64) -> Option<&ChainReport> {
        self.chains.iter().find(|c| (c.sum - s).abs() <= tol && (c.a1 - a1).abs() <= tol)
    }
}

fn skip_impossible<T>(r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::ImpossibleOutcome { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

pub fn run_epr_analysis(sc: &Scenario) -> Result<EprReport> {
    let sys: &JointSystem = sc.system();
    let psi = sc.initial_state();
    let sum_spectrum = sys.sum_distribution(psi)?;
    let b1 = sys.lift(sc.obs_b(), Slot::First)?;
    let b2 = sys.lift(sc.obs_b(), Slot::Second)?;
    let c1 = sys.lift(sc.obs_c(), Slot::First)?;
    let c2 = sys.lift(sc.obs_c(), Slot::Second)?;
    let spectrum = sys.factor().eigenvalues();
    let identity = SpectrumFunction::identity(&spectrum);

    let mut per_sum = Vec::new();
    let mut chains = Vec::new();
    for k in 0..sys.index().len() {
        let Some((post, probability)) = skip_impossible(sys.condition_on_sum(psi, k))? else {
            continue;
        };
        let s = sys.index().sums()[k];
        let summary = |m: &crate::observable::Observable| PredictionSummary::in_state(&post, m.matrix());
        let conditional = conditional_distribution(sys, psi, s)?;
        per_sum.push(SumReport {
            sum: s,
            probability,
            a1: summary(sys.a1())?,
            a2: summary(sys.a2())?,
            b1: summary(&b1)?,
            b2: summary(&b2)?,
            c1: summary(&c1)?,
            c2: summary(&c2)?,
            theorem2: verify_theorem2(sys, psi, s)?,
            audit_1: audit_uncertainty(&post, sys.a1(), &b1, &c1)?,
            audit_2: audit_uncertainty(&post, sys.a2(), &b2, &c2)?,
            schmidt_rank: schmidt_rank(&post, sys.space(), SCHMIDT_TOL)?,
            conditional: conditional.clone(),
        });

        for &(a1, conditional_probability) in &conditional.support {
            if conditional_probability < ZERO_PROBABILITY {
                continue;
            }
            let Some(phi) = skip_impossible(sequential_measure(sys, psi, s, a1))? else {
                continue;
            };
            let a2_prediction = certain_prediction(sys, &phi, &identity, s, a1)?;
            let audit = epr_resolution_check(sys, &phi, sc.obs_b(), sc.obs_c())?;
            let n = sys.match_factor(a1)?;
            let a2 = spectrum[sys.index().partner(n, k).expect("a1 is in the support of s")];
            chains.push(ChainReport {
                sum: s,
                a1,
                a2,
                conditional_probability,
                post_state: phi.amplitudes().to_vec(),
                a2_prediction,
                audit,
            });
        }
    }
    Ok(EprReport { sum_spectrum, per_sum, chains })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::scenario::build_pauli_scenario;
    use crate::linalg::ZERO;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn pauli_psi0_report() {
        let sc = build_pauli_scenario([ZERO, c(0.8f64.sqrt()), c(0.2f64.sqrt()), ZERO]).unwrap();
        let r = run_epr_analysis(&sc).unwrap();
        assert_eq!(r.per_sum.len(), 1);
        let s0 = r.sum_report(0.0, 1e-9).unwrap();
        assert!((s0.probability - 1.0).abs() < 1e-14);
        assert!((s0.a1.mean - 0.6).abs() < 1e-14);
        assert!((s0.a1.stdev - 0.8).abs() < 1e-14);
        assert!((s0.a2.stdev - 0.8).abs() < 1e-14);
        for b in [s0.b1, s0.b2] {
            assert!(b.mean.abs() < 1e-14 && (b.stdev - 1.0).abs() < 1e-14);
        }
        assert!(s0.c1.mean.abs() < 1e-14 && s0.c2.mean.abs() < 1e-14);
        assert!((s0.audit_1.product() - 0.8).abs() < 1e-14 && s0.audit_1.rhs < 1e-14);
        assert_eq!(s0.schmidt_rank, 2);
        assert_eq!(r.chains.len(), 2);
        assert!(r.all_audits_satisfied());
    }

    #[test]
    fn uniform_report() {
        let sc = build_pauli_scenario([c(0.5); 4]).unwrap();
        let r = run_epr_analysis(&sc).unwrap();
        assert_eq!(r.per_sum.len(), 3);
        let s0 = r.sum_report(0.0, 1e-9).unwrap();
        assert!(s0.a1.mean.abs() < 1e-14 && (s0.a1.stdev - 1.0).abs() < 1e-14);
        let chain = r.chain(0.0, 1.0, 1e-9).unwrap();
        assert_eq!(chain.a2, -1.0);
        assert!((chain.a2_prediction.value + 1.0).abs() < 1e-14);
        assert!(chain.a2_prediction.stdev < 1e-14);
        assert!(chain.audit.rhs < 1e-14);
        assert_eq!(r.chains.len(), 4);
    }

    #[test]
    fn deterministic_report() {
        let sc = build_pauli_scenario([c(1.0), ZERO, ZERO, ZERO]).unwrap();
        let r = run_epr_analysis(&sc).unwrap();
        assert_eq!(r.per_sum.len(), 1);
        assert_eq!(r.per_sum[0].sum, 2.0);
        assert_eq!(r.chains.len(), 1);
        assert!((r.chains[0].a2_prediction.value - 1.0).abs() < 1e-14);
    }
}
