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

use crate::composite::JointSystem;
use crate::error::{Error, Result};
use crate::linalg::{extract_c, pauli, C64};
use crate::observable::Observable;
use crate::state::PureState;

/// Largest entry of `[A,B]/(iα) - C` accepted for a supplied `C`.
pub const COMMUTATION_TOL: f64 = 1e-8;

/// Default commutation constant for generic scenarios.
pub const DEFAULT_ALPHA: f64 = 1.0;

/// Commutation constant of the Pauli example, `[σz, σx] = 2iσy`.
pub const PAULI_ALPHA: f64 = 2.0;

/// Factor observables `A`, `B`, `C` with `[A,B] = iαC`, and an initial state
/// on the two-component space.
#[derive(Clone, Debug)]
pub struct Scenario {
    label: String,
    obs_a: Observable,
    obs_b: Observable,
    obs_c: Observable,
    alpha: f64,
    initial_state: PureState,
    system: JointSystem,
    commutation_residual: f64,
}

impl Scenario {
    /// Validate and assemble a scenario. When `c` is `None` it is derived
    /// as `[A,B]/(iα)`; otherwise it must agree with that within
    /// [`COMMUTATION_TOL`].
    pub fn new(
        label: impl Into<String>,
        a: Observable,
        b: Observable,
        c: Option<Observable>,
        alpha: f64,
        initial_state: PureState,
    ) -> Result<Self> {
        let n = a.dim();
        if b.dim() != n {
            return Err(Error::DimensionMismatch { context: "B vs A", expected: n, found: b.dim() });
        }
        let derived = extract_c(a.matrix(), b.matrix(), alpha)?;
        let (obs_c, commutation_residual) = match c {
            Some(c) => {
                let residual = derived.max_abs_diff(c.matrix());
                if residual > COMMUTATION_TOL {
                    return Err(Error::CommutationMismatch { residual });
                }
                (c, residual)
            }
            None => (Observable::new(derived)?, 0.0),
        };
        if initial_state.factor_dims() != [n, n] {
            return Err(Error::DimensionMismatch {
                context: "initial state vs two-factor space",
                expected: n * n,
                found: initial_state.dim(),
            });
        }
        let system = JointSystem::new(&a)?;
        Ok(Scenario {
            label: label.into(),
            obs_a: a,
            obs_b: b,
            obs_c,
            alpha,
            initial_state,
            system,
            commutation_residual,
        })
    }

    /// Scenario with `α = 1` and `C` derived from `A` and `B`.
    pub fn generic(label: impl Into<String>, a: Observable, b: Observable, initial_state: PureState) -> Result<Self> {
        Self::new(label, a, b, None, DEFAULT_ALPHA, initial_state)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn factor_dim(&self) -> usize {
        self.obs_a.dim()
    }

    pub fn obs_a(&self) -> &Observable {
        &self.obs_a
    }

    pub fn obs_b(&self) -> &Observable {
        &self.obs_b
    }

    pub fn obs_c(&self) -> &Observable {
        &self.obs_c
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn initial_state(&self) -> &PureState {
        &self.initial_state
    }

    pub fn system(&self) -> &JointSystem {
        &self.system
    }

    /// `max |[A,B]/(iα) - C|` measured at construction (zero when derived).
    pub fn commutation_residual(&self) -> f64 {
        self.commutation_residual
    }
}

/// Two qubits with `A = σz`, `B = σx`, `C = σy`, `α = 2`, and state
/// amplitudes given in the order `(1,1), (1,-1), (-1,1), (-1,-1)`.
pub fn build_pauli_scenario(amplitudes: [C64; 4]) -> Result<Scenario> {
    let state = PureState::composite(amplitudes.to_vec(), 2)?;
    Scenario::new(
        "pauli",
        Observable::new(pauli::z())?,
        Observable::new(pauli::x())?,
        Some(Observable::new(pauli::y())?),
        PAULI_ALPHA,
        state,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{ComplexMatrix, ZERO};

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn pauli_builder() {
        let sc = build_pauli_scenario([c(1.0), ZERO, ZERO, ZERO]).unwrap();
        assert_eq!(sc.alpha(), 2.0);
        assert_eq!(sc.factor_dim(), 2);
        assert!(sc.commutation_residual() < 1e-15);
        assert!(matches!(build_pauli_scenario([ZERO; 4]), Err(Error::ZeroNorm { .. })));
    }

    #[test]
    fn inconsistent_c_is_rejected() {
        let perturbed = &pauli::y() + &ComplexMatrix::from_real_diagonal(&[1e-3, -1e-3]);
        let err = Scenario::new(
            "bad",
            Observable::new(pauli::z()).unwrap(),
            Observable::new(pauli::x()).unwrap(),
            Some(Observable::new(perturbed).unwrap()),
            2.0,
            PureState::composite(vec![c(1.0); 4], 2).unwrap(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::CommutationMismatch { .. }));
    }

    #[test]
    fn generic_scenario_derives_c() {
        let sc = Scenario::generic(
            "g",
            Observable::new(pauli::z()).unwrap(),
            Observable::new(pauli::x()).unwrap(),
            PureState::composite(vec![c(1.0); 4], 2).unwrap(),
        )
        .unwrap();
        assert!(sc.obs_c().matrix().approx_eq(&pauli::y().scale(c(2.0)), 1e-15));
    }

    #[test]
    fn state_must_live_on_two_factors() {
        let err = Scenario::generic(
            "g",
            Observable::new(pauli::z()).unwrap(),
            Observable::new(pauli::x()).unwrap(),
            PureState::single(vec![c(1.0); 4]).unwrap(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }
}
