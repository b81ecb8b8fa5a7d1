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

//! Properties of the dense linear-algebra layer and single-system states.

use epr_core::function::SpectrumFunction;
use epr_core::linalg::{
    commutator, extract_c, spectral_decompose_default, tensor_product, ComplexMatrix, C64,
};
use epr_core::observable::Observable;
use epr_core::random::{random_function, random_hermitian, random_state, random_with_spectrum};
use epr_core::state::{audit_uncertainty, best_predictor, expectation_of_function, prediction_error, verify_theorem1};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reconstruction_and_completeness(seed in any::<u64>(), n in 1usize..7) {
        let h = random_hermitian(&mut rng(seed), n);
        let d = spectral_decompose_default(&h).unwrap();
        let scale = h.frobenius_norm().max(1.0);
        prop_assert!(d.reconstruct().max_abs_diff(&h) <= 1e-10 * scale);

        let mut sum = ComplexMatrix::zeros(n, n);
        for line in d.lines() {
            let p = line.projector();
            prop_assert!(p.matmul(p).unwrap().max_abs_diff(p) < 1e-10);
            sum = &sum + p;
        }
        prop_assert!(sum.max_abs_diff(&ComplexMatrix::identity(n)) < 1e-10);
        let values = d.eigenvalues();
        prop_assert!(values.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn degenerate_spectrum_is_grouped(seed in any::<u64>()) {
        let m = random_with_spectrum(&mut rng(seed), &[-1.0, 2.0, 2.0, 5.0]);
        let d = spectral_decompose_default(&m).unwrap();
        prop_assert_eq!(d.multiplicities(), vec![1, 2, 1]);
        prop_assert!((d.eigenvalues()[1] - 2.0).abs() < 1e-10);
    }

    #[test]
    fn mixed_product_rule(seed in any::<u64>(), n in 1usize..5, m in 1usize..5) {
        let mut r = rng(seed);
        let a = random_hermitian(&mut r, n);
        let b = random_hermitian(&mut r, m);
        let lhs = tensor_product(&a, &ComplexMatrix::identity(m))
            .matmul(&tensor_product(&ComplexMatrix::identity(n), &b))
            .unwrap();
        prop_assert!(lhs.max_abs_diff(&tensor_product(&a, &b)) < 1e-12);
    }

    #[test]
    fn theorem1_on_random_pairs(seed in any::<u64>(), n in 2usize..7, alpha in prop_oneof![Just(1.0), Just(2.0), 0.1f64..10.0]) {
        let mut r = rng(seed);
        let a = Observable::new(random_hermitian(&mut r, n)).unwrap();
        let b = Observable::new(random_hermitian(&mut r, n)).unwrap();
        let report = verify_theorem1(&a, &b, alpha).unwrap();
        prop_assert!(report.holds(1e-10), "{:?}", report);

        // Independent check in the eigenbasis of A.
        let c = extract_c(a.matrix(), b.matrix(), alpha).unwrap();
        let norm = c.frobenius_norm();
        prop_assert!(c.trace().norm() <= 1e-10 * norm.max(f64::MIN_POSITIVE));
        for k in 0..n {
            let v = a.eigenvector(k).unwrap();
            prop_assert!(c.expectation(v).unwrap().norm() <= 1e-10 * norm);
        }
    }

    #[test]
    fn best_predictor_routes_agree(seed in any::<u64>(), n in 1usize..7) {
        let mut r = rng(seed);
        let a = Observable::new(random_hermitian(&mut r, n)).unwrap();
        let psi = random_state(&mut r, &[n]);
        let f = random_function(&mut r, &a.eigenvalues());
        let spectral = best_predictor(&psi, &a, &f).unwrap();
        let matrix = expectation_of_function(&psi, &a, &f).unwrap();
        prop_assert!((spectral - matrix).abs() < 1e-10);
    }

    #[test]
    fn variance_identity(seed in any::<u64>(), n in 1usize..7) {
        let mut r = rng(seed);
        let a = Observable::new(random_hermitian(&mut r, n)).unwrap();
        let psi = random_state(&mut r, &[n]);
        let values = a.eigenvalues();
        let mean = psi.expectation(a.matrix()).unwrap();
        let second = best_predictor(&psi, &a, &SpectrumFunction::tabulate(&values, |x| x * x)).unwrap();
        let delta = prediction_error(&psi, &a).unwrap();
        let scale = 1.0 + values.iter().map(|x| x * x).fold(0.0, f64::max);
        prop_assert!((delta * delta - (second - mean * mean)).abs() < 1e-10 * scale);
    }

    #[test]
    fn uncertainty_relation_holds(seed in any::<u64>(), n in 2usize..6) {
        let mut r = rng(seed);
        let a = Observable::new(random_hermitian(&mut r, n)).unwrap();
        let b = Observable::new(random_hermitian(&mut r, n)).unwrap();
        let c = Observable::new(extract_c(a.matrix(), b.matrix(), 1.0).unwrap()).unwrap();
        let psi = random_state(&mut r, &[n]);
        let report = audit_uncertainty(&psi, &a, &b, &c).unwrap();
        prop_assert!(report.satisfied, "{:?}", report);
    }
}

#[test]
fn commutator_is_antihermitian() {
    let mut r = rng(11);
    let a = random_hermitian(&mut r, 4);
    let b = random_hermitian(&mut r, 4);
    let k = commutator(&a, &b).unwrap();
    assert!(k.max_abs_diff(&k.adjoint().scale(C64::new(-1.0, 0.0))) < 1e-12);
}

#[test]
fn eigenstate_has_no_uncertainty_floor() {
    let mut r = rng(12);
    let a = Observable::new(random_hermitian(&mut r, 4)).unwrap();
    let b = Observable::new(random_hermitian(&mut r, 4)).unwrap();
    let c = Observable::new(extract_c(a.matrix(), b.matrix(), 1.0).unwrap()).unwrap();
    for k in 0..4 {
        let psi = epr_core::PureState::single(a.eigenvector(k).unwrap().to_vec()).unwrap();
        let report = audit_uncertainty(&psi, &a, &b, &c).unwrap();
        assert!(report.delta_a < 1e-7);
        assert!(report.rhs < 1e-10 * c.matrix().frobenius_norm());
    }
}
