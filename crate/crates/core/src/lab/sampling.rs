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

//! Monte-Carlo simulation of the `S`-then-`A1` measurement chain.
//!
//! Shot `i` draws from its own ChaCha8 stream `i` under the record's seed,
//! so the counts do not depend on how shots are scheduled across threads.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::composite::ZERO_PROBABILITY;
use crate::error::{Error, Result};
use crate::lab::scenario::Scenario;
use crate::state::outcome_probabilities;

/// Significant digits used for outcome values inside path keys.
pub const KEY_DIGITS: usize = 12;

/// Counts of measurement paths `(s, a1, a2)` over a batch of shots.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShotRecord {
    pub seed: u64,
    pub shots: u64,
    pub counts: BTreeMap<String, u64>,
    pub empirical: BTreeMap<String, f64>,
}

/// Decimal rendering of `x` rounded to [`KEY_DIGITS`] significant digits.
pub fn format_value(x: f64) -> String {
    let rounded: f64 = format!("{:.*e}", KEY_DIGITS - 1, x).parse().unwrap_or(x);
    if rounded == 0.0 {
        "0".to_string()
    } else {
        format!("{rounded}")
    }
}

pub fn path_key(s: f64, a1: f64, a2: f64) -> String {
    format!("s={};a1={};a2={}", format_value(s), format_value(a1), format_value(a2))
}

/// Analytic probability of one measurement path.
#[derive(Clone, Debug, PartialEq)]
pub struct PathProbability {
    pub key: String,
    pub sum: f64,
    pub a1: f64,
    pub a2: f64,
    pub sum_probability: f64,
    pub conditional_probability: f64,
}

impl PathProbability {
    pub fn probability(&self) -> f64 {
        self.sum_probability * self.conditional_probability
    }
}

/// Every path with positive probability, in order of `(s, a1)`. Each stage
/// is computed by collapsing the state: first onto the `S`-eigenspace,
/// then reading off the `A1` distribution of the collapsed state.
pub fn analytic_paths(sc: &Scenario) -> Result<Vec<PathProbability>> {
    let sys = sc.system();
    let idx = sys.index();
    let spectrum = sys.factor().eigenvalues();
    let mut paths = Vec::new();
    for k in 0..idx.len() {
        let (post, p) = match sys.condition_on_sum(sc.initial_state(), k) {
            Ok(v) => v,
            Err(Error::ImpossibleOutcome { .. }) => continue,
            Err(e) => return Err(e),
        };
        let dist = outcome_probabilities(&post, sys.a1())?;
        for &(n, m) in idx.set(k) {
            let pc = dist.outcomes()[n].1;
            if pc < ZERO_PROBABILITY {
                continue;
            }
            let (s, a1, a2) = (idx.sums()[k], spectrum[n], spectrum[m]);
            paths.push(PathProbability {
                key: path_key(s, a1, a2),
                sum: s,
                a1,
                a2,
                sum_probability: p,
                conditional_probability: pc,
            });
        }
    }
    Ok(paths)
}

/// Inverse-CDF pick; the last candidate absorbs rounding slack.
fn pick(u: f64, weights: impl ExactSizeIterator<Item = f64>) -> usize {
    let last = weights.len() - 1;
    let mut acc = 0.0;
    for (i, w) in weights.enumerate() {
        acc += w;
        if u < acc {
            return i;
        }
    }
    last
}

struct Stage {
    sum_probability: f64,
    /// `(path index, conditional probability)`.
    branches: Vec<(usize, f64)>,
}

/// Simulate `shots` repetitions of measuring `S` and then `A1` on the
/// scenario's initial state.
pub fn sample_chain(sc: &Scenario, shots: u64, seed: u64) -> Result<ShotRecord> {
    if shots == 0 {
        return Err(Error::InvalidShots);
    }
    let paths = analytic_paths(sc)?;
    let mut stages: Vec<Stage> = Vec::new();
    for (i, p) in paths.iter().enumerate() {
        match stages.last_mut() {
            Some(st) if i > 0 && paths[i - 1].sum == p.sum => st.branches.push((i, p.conditional_probability)),
            _ => stages.push(Stage { sum_probability: p.sum_probability, branches: vec![(i, p.conditional_probability)] }),
        }
    }

    let base = ChaCha8Rng::seed_from_u64(seed);
    let tallies = (0..shots)
        .into_par_iter()
        .fold(
            || vec![0u64; paths.len()],
            |mut acc, shot| {
                let mut rng = base.clone();
                rng.set_stream(shot);
                let stage = &stages[pick(rng.random::<f64>(), stages.iter().map(|s| s.sum_probability))];
                let branch = pick(rng.random::<f64>(), stage.branches.iter().map(|b| b.1));
                acc[stage.branches[branch].0] += 1;
                acc
            },
        )
        .reduce(
            || vec![0u64; paths.len()],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );

    let mut counts = BTreeMap::new();
    let mut empirical = BTreeMap::new();
    for (p, &n) in paths.iter().zip(&tallies) {
        if n > 0 {
            counts.insert(p.key.clone(), n);
            empirical.insert(p.key.clone(), n as f64 / shots as f64);
        }
    }
    Ok(ShotRecord { seed, shots, counts, empirical })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutcomeComparison {
    pub key: String,
    pub analytic: f64,
    pub empirical: f64,
    pub deviation: f64,
    /// `3 sqrt(p (1 - p) / shots)`.
    pub bound: f64,
}

impl OutcomeComparison {
    fn new(key: String, analytic: f64, empirical: f64, shots: u64) -> Self {
        let bound = 3.0 * (analytic * (1.0 - analytic) / shots as f64).max(0.0).sqrt();
        OutcomeComparison { key, analytic, empirical, deviation: (empirical - analytic).abs(), bound }
    }

    pub fn within_bound(&self) -> bool {
        self.deviation <= self.bound + 1e-12
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmpiricalComparison {
    pub max_abs_deviation: f64,
    /// Every path frequency lies within its 3σ binomial bound.
    pub within_3sigma: bool,
    /// Every marginal frequency of `s` lies within its 3σ binomial bound.
    pub marginal_within_3sigma: bool,
    pub paths: Vec<OutcomeComparison>,
    pub sum_marginal: Vec<OutcomeComparison>,
}

/// Compare a record's frequencies against the analytic path probabilities.
pub fn compare_empirical(record: &ShotRecord, sc: &Scenario) -> Result<EmpiricalComparison> {
    if record.shots == 0 {
        return Err(Error::InvalidShots);
    }
    let paths = analytic_paths(sc)?;
    if let Some(unknown) = record.counts.keys().find(|k| !paths.iter().any(|p| &p.key == *k)) {
        return Err(Error::ScenarioMismatch(format!("path {unknown} is impossible in this scenario")));
    }
    if record.counts.values().sum::<u64>() != record.shots {
        return Err(Error::ScenarioMismatch("counts do not add up to the shot count".into()));
    }
    let freq = |key: &str| record.counts.get(key).map_or(0.0, |&n| n as f64 / record.shots as f64);

    let comparisons: Vec<OutcomeComparison> = paths
        .iter()
        .map(|p| OutcomeComparison::new(p.key.clone(), p.probability(), freq(&p.key), record.shots))
        .collect();

    let mut marginal: Vec<OutcomeComparison> = Vec::new();
    for p in &paths {
        let key = format!("s={}", format_value(p.sum));
        let f = freq(&p.key);
        match marginal.last_mut() {
            Some(m) if m.key == key => m.empirical += f,
            _ => marginal.push(OutcomeComparison { key, analytic: p.sum_probability, empirical: f, deviation: 0.0, bound: 0.0 }),
        }
    }
    let marginal: Vec<OutcomeComparison> = marginal
        .into_iter()
        .map(|m| OutcomeComparison::new(m.key, m.analytic, m.empirical, record.shots))
        .collect();

    Ok(EmpiricalComparison {
        max_abs_deviation: comparisons.iter().map(|c| c.deviation).fold(0.0, f64::max),
        within_3sigma: comparisons.iter().all(OutcomeComparison::within_bound),
        marginal_within_3sigma: marginal.iter().all(OutcomeComparison::within_bound),
        paths: comparisons,
        sum_marginal: marginal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::scenario::build_pauli_scenario;
    use crate::linalg::{C64, ZERO};

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn key_formatting() {
        assert_eq!(format_value(0.0), "0");
        assert_eq!(format_value(-0.0), "0");
        assert_eq!(format_value(-2.0), "-2");
        assert_eq!(format_value(0.1 + 0.2), "0.3");
        assert_eq!(format_value(1.0 + 1e-14), "1");
        assert_eq!(path_key(0.0, 1.0, -1.0), "s=0;a1=1;a2=-1");
    }

    #[test]
    fn zero_shots_rejected() {
        let sc = build_pauli_scenario([c(1.0), ZERO, ZERO, ZERO]).unwrap();
        assert_eq!(sample_chain(&sc, 0, 1).unwrap_err(), Error::InvalidShots);
    }

    #[test]
    fn single_shot_records_one_path() {
        let sc = build_pauli_scenario([c(0.5); 4]).unwrap();
        let r = sample_chain(&sc, 1, 99).unwrap();
        assert_eq!(r.counts.len(), 1);
        assert_eq!(r.counts.values().sum::<u64>(), 1);
    }

    #[test]
    fn deterministic_scenario() {
        let sc = build_pauli_scenario([c(1.0), ZERO, ZERO, ZERO]).unwrap();
        let r = sample_chain(&sc, 500, 3).unwrap();
        assert_eq!(r.counts.len(), 1);
        assert_eq!(r.counts["s=2;a1=1;a2=1"], 500);
        let cmp = compare_empirical(&r, &sc).unwrap();
        assert_eq!(cmp.max_abs_deviation, 0.0);
        assert!(cmp.within_3sigma && cmp.marginal_within_3sigma);
    }

    #[test]
    fn conditional_frequency_converges() {
        let sc = build_pauli_scenario([ZERO, c(0.8f64.sqrt()), c(0.2f64.sqrt()), ZERO]).unwrap();
        let r = sample_chain(&sc, 100_000, 2024).unwrap();
        let plus = r.empirical["s=0;a1=1;a2=-1"];
        assert!((plus - 0.8).abs() < 0.02, "{plus}");
    }

    #[test]
    fn reproducible_for_fixed_seed() {
        let sc = build_pauli_scenario([c(0.5); 4]).unwrap();
        assert_eq!(sample_chain(&sc, 4000, 5).unwrap(), sample_chain(&sc, 4000, 5).unwrap());
        assert_ne!(sample_chain(&sc, 4000, 5).unwrap().counts, sample_chain(&sc, 4000, 6).unwrap().counts);
    }

    #[test]
    fn mismatched_record_is_rejected() {
        let sc = build_pauli_scenario([c(1.0), ZERO, ZERO, ZERO]).unwrap();
        let other = build_pauli_scenario([c(0.5); 4]).unwrap();
        let r = sample_chain(&other, 200, 1).unwrap();
        assert!(matches!(compare_empirical(&r, &sc), Err(Error::ScenarioMismatch(_))));
    }
}
