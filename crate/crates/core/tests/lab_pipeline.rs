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

use epr_core::lab::scenario::Scenario;
use epr_core::lab::{build_pauli_scenario, compare_empirical, run_epr_analysis, sample_chain};
use epr_core::linalg::C64;
use epr_core::observable::Observable;
use epr_core::random::{random_hermitian, random_state};
use epr_core::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_scenario(seed: u64, n: usize) -> Scenario {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let a = Observable::new(random_hermitian(&mut r, n)).unwrap();
    let b = Observable::new(random_hermitian(&mut r, n)).unwrap();
    let psi = random_state(&mut r, &[n, n]);
    Scenario::generic(format!("random-{seed}"), a, b, psi).unwrap()
}

#[test]
fn analysis_on_random_scenarios() {
    for seed in 0..30u64 {
        let n = 2 + (seed as usize % 3);
        let sc = random_scenario(seed, n);
        let report = run_epr_analysis(&sc).unwrap();
        assert!(report.all_audits_satisfied(), "seed {seed}");
        assert!(report.max_theorem2_residual() <= 1e-10, "seed {seed}");
        let total: f64 = report.per_sum.iter().map(|r| r.probability).sum();
        assert!((total - 1.0).abs() < 1e-10);
        for chain in &report.chains {
            assert!((chain.a2_prediction.value - chain.a2).abs() < 1e-9);
            assert!(chain.a2_prediction.stdev < 1e-7);
            assert!(chain.audit.rhs <= 1e-10 * sc.obs_c().matrix().frobenius_norm().max(1.0));
        }
    }
}

#[test]
fn sampler_matches_analysis_on_random_scenario() {
    let sc = random_scenario(77, 3);
    let a = sample_chain(&sc, 20_000, 9).unwrap();
    assert_eq!(a, sample_chain(&sc, 20_000, 9).unwrap());
    let cmp = compare_empirical(&a, &sc).unwrap();
    assert!(cmp.max_abs_deviation < 0.02, "{}", cmp.max_abs_deviation);
    let analytic: f64 = cmp.paths.iter().map(|p| p.analytic).sum();
    assert!((analytic - 1.0).abs() < 1e-10);
}

#[test]
fn impossible_sum_is_reported() {
    let z = C64::new(0.0, 0.0);
    let sc = build_pauli_scenario([C64::new(1.0, 0.0), z, z, z]).unwrap();
    let err = epr_core::conditional::sequential_measure(sc.system(), sc.initial_state(), 0.0, 1.0).unwrap_err();
    assert!(matches!(err, Error::ImpossibleOutcome { .. }));
    let err = epr_core::conditional::sequential_measure(sc.system(), sc.initial_state(), 1.0, 1.0).unwrap_err();
    assert!(matches!(err, Error::NotInSpectrum { .. }));
}
