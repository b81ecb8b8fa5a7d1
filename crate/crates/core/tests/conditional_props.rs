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

//! Composite-system structure and conditional prediction, checked against
//! the brute-force classical oracle on random inputs.

use epr_core::composite::{decompose_by_sum, joint_distribution, sum_probabilities, JointSystem, Slot};
use epr_core::conditional::{
    conditional_distribution, joint_domain, quantum_conditional_expectation, sequential_measure, verify_ce2,
    verify_theorem2, verify_tower_property,
};
use epr_core::function::{PairFunction, SpectrumFunction};
use epr_core::linalg::{inner, norm, C64};
use epr_core::observable::Observable;
use epr_core::oracle::{oracle_conditional, oracle_conditional_distribution, oracle_joint};
use epr_core::random::{random_function, random_hermitian, random_state, random_with_spectrum};
use epr_core::state::{best_predictor, outcome_probabilities};
use epr_core::PureState;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Generic spectrum for odd seeds, equally spaced integers (many coincident
/// sums) for even seeds.
fn random_system(r: &mut ChaCha8Rng, n: usize, integer: bool) -> JointSystem {
    let m = if integer {
        let values: Vec<f64> = (0..n).map(|i| i as f64 - 1.0).collect();
        random_with_spectrum(r, &values)
    } else {
        random_hermitian(r, n)
    };
    JointSystem::new(&Observable::new(m).unwrap()).unwrap()
}

fn setup(seed: u64, n: usize) -> (ChaCha8Rng, JointSystem, PureState) {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let sys = random_system(&mut r, n, seed.is_multiple_of(2));
    let psi = random_state(&mut r, &[n, n]);
    (r, sys, psi)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn lifted_factors_commute_and_sum(seed in any::<u64>(), n in 2usize..5) {
        let (_, sys, _) = setup(seed, n);
        let (a1, a2) = (sys.a1().matrix(), sys.a2().matrix());
        let k = &a1.matmul(a2).unwrap() - &a2.matmul(a1).unwrap();
        prop_assert!(k.max_abs() < 1e-10);
        let s = sys.sum().observable().matrix();
        prop_assert!((&(a1 + a2) - s).max_abs() < 1e-10);
        prop_assert_eq!(sys.lifted(Slot::First).dim(), n * n);
    }

    #[test]
    fn sum_probability_routes_agree(seed in any::<u64>(), n in 2usize..5) {
        let (_, sys, psi) = setup(seed, n);
        let q = joint_distribution(&psi, sys.space()).unwrap();
        let oracle = oracle_joint(&psi, sys.factor()).unwrap();
        for (i, row) in oracle.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                prop_assert!((q.get(i, j) - v).abs() < 1e-10);
            }
        }
        let classical = sum_probabilities(&q, sys.index()).unwrap();
        let projector = sys.sum_distribution(&psi).unwrap();
        for (x, y) in classical.outcomes().iter().zip(projector.outcomes()) {
            prop_assert!((x.0 - y.0).abs() < 1e-12 && (x.1 - y.1).abs() < 1e-10);
        }
        // p(s_k) = tr(Π_k |Ψ⟩⟨Ψ|) = ⟨Ψ|Π_k|Ψ⟩.
        let s = sys.sum().observable();
        for (k, &(_, p)) in projector.outcomes().iter().enumerate() {
            let pk = s.projector(k).unwrap();
            let trace: C64 = (0..psi.dim())
                .map(|i| pk.row(i).iter().zip(psi.amplitudes()).map(|(x, y)| x * y).sum::<C64>() * psi.amplitudes()[i].conj())
                .sum();
            prop_assert!((trace.re - p).abs() < 1e-10 && trace.im.abs() < 1e-10);
        }
    }

    #[test]
    fn sum_projectors_are_orthogonal(seed in any::<u64>(), n in 2usize..5) {
        let (_, sys, _) = setup(seed, n);
        let s = sys.sum().observable();
        prop_assert_eq!(sys.index().degeneracies().iter().sum::<usize>(), n * n);
        for i in 0..s.spectrum().len() {
            for j in 0..s.spectrum().len() {
                let prod = s.projector(i).unwrap().matmul(s.projector(j).unwrap()).unwrap();
                let want = if i == j { s.projector(i).unwrap().max_abs_diff(&prod) } else { prod.max_abs() };
                prop_assert!(want < 1e-10);
            }
        }
    }

    #[test]
    fn decomposition_reconstructs(seed in any::<u64>(), n in 2usize..5) {
        let (_, sys, psi) = setup(seed, n);
        let s = sys.sum().observable();
        let branches = decompose_by_sum(&psi, s).unwrap();
        let mut acc = vec![C64::new(0.0, 0.0); psi.dim()];
        for b in &branches {
            let applied = b.state.apply(s.matrix()).unwrap();
            let residual: Vec<C64> = applied.iter().zip(b.state.amplitudes()).map(|(x, y)| x - y * b.eigenvalue).collect();
            prop_assert!(norm(&residual) < 1e-10 * (1.0 + b.eigenvalue.abs()));
            for (a, x) in acc.iter_mut().zip(b.state.amplitudes()) {
                *a += x * b.weight;
            }
        }
        let diff: Vec<C64> = acc.iter().zip(psi.amplitudes()).map(|(x, y)| x - y).collect();
        prop_assert!(norm(&diff) < 1e-10);
    }

    #[test]
    fn conditional_distribution_matches_oracle(seed in any::<u64>(), n in 2usize..5) {
        let (_, sys, psi) = setup(seed, n);
        for &(s, p) in sys.sum_distribution(&psi).unwrap().outcomes() {
            if p < 1e-12 {
                continue;
            }
            let got = conditional_distribution(&sys, &psi, s).unwrap();
            let want = oracle_conditional_distribution(&psi, sys.factor(), s).unwrap();
            prop_assert_eq!(got.support.len(), want.len());
            for (x, y) in got.support.iter().zip(&want) {
                prop_assert!((x.0 - y.0).abs() < 1e-9 && (x.1 - y.1).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn theorem2_every_populated_sum(seed in any::<u64>(), n in 2usize..5) {
        let (_, sys, psi) = setup(seed, n);
        for &(s, p) in sys.sum_distribution(&psi).unwrap().outcomes() {
            if p < 1e-12 {
                continue;
            }
            let report = verify_theorem2(&sys, &psi, s).unwrap();
            prop_assert!(report.holds(1e-10), "{:?}", report);
        }
    }

    #[test]
    fn tower_property_and_oracle(seed in any::<u64>(), n in 2usize..5, family in 0usize..3) {
        let (mut r, sys, psi) = setup(seed, n);
        let sums = sys.index().sums().to_vec();
        let f = random_function(&mut r, &sys.factor().eigenvalues());
        let g = match family {
            0 => SpectrumFunction::indicator(&sums, sums[r.random_range(0..sums.len())]),
            1 => {
                let (c0, c1, c2): (f64, f64, f64) = (r.random(), r.random(), r.random());
                SpectrumFunction::tabulate(&sums, |x| c0 + c1 * x + c2 * x * x)
            }
            _ => random_function(&mut r, &sums),
        };
        let tower = verify_tower_property(&sys, &psi, &f, &g).unwrap();
        prop_assert!(tower.residual <= 1e-10, "{:?}", tower);

        let quantum = quantum_conditional_expectation(&sys, &psi, &f).unwrap();
        let classical = oracle_conditional(&psi, sys.factor(), &f).unwrap();
        prop_assert_eq!(quantum.entries.len(), classical.entries.len());
        prop_assert!(quantum.max_abs_diff(&classical, 1e-9) <= 1e-10);

        // G = 1 recovers the unconditional prediction.
        let one = SpectrumFunction::constant(&sums, 1.0);
        let t = verify_tower_property(&sys, &psi, &f, &one).unwrap();
        let direct = best_predictor(&psi, sys.a1(), &f).unwrap();
        prop_assert!((t.lhs - direct).abs() < 1e-10);
    }

    #[test]
    fn ce2_after_sequential_measurement(seed in any::<u64>(), n in 2usize..4) {
        let (mut r, sys, psi) = setup(seed, n);
        let domain = joint_domain(&sys);
        let h = PairFunction::from_entries(domain.iter().map(|&k| (k, r.random_range(-2.0..2.0))).collect());
        for &(s, p) in sys.sum_distribution(&psi).unwrap().outcomes() {
            if p < 1e-12 {
                continue;
            }
            for &(a1, pc) in &conditional_distribution(&sys, &psi, s).unwrap().support {
                if pc < 1e-12 {
                    continue;
                }
                let report = verify_ce2(&sys, &psi, &h, s, a1).unwrap();
                prop_assert!(report.residual < 1e-10);
                let phi = sequential_measure(&sys, &psi, s, a1).unwrap();
                let a2 = outcome_probabilities(&phi, sys.a2()).unwrap();
                prop_assert!((a2.probability_of(s - a1, 1e-9) - 1.0).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn product_state_has_single_branch() {
    let mut r = ChaCha8Rng::seed_from_u64(5);
    let sys = random_system(&mut r, 3, false);
    let v0 = sys.factor().eigenvector(0).unwrap().to_vec();
    let v2 = sys.factor().eigenvector(2).unwrap().to_vec();
    let psi = PureState::product(&PureState::single(v0).unwrap(), &PureState::single(v2).unwrap());
    let branches = decompose_by_sum(&psi, sys.sum().observable()).unwrap();
    assert_eq!(branches.len(), 1);
    assert!((inner(branches[0].state.amplitudes(), psi.amplitudes()).norm() - 1.0).abs() < 1e-10);
}
