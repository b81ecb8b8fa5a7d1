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

//! Pure states, outcome distributions, best predictors and the
//! uncertainty-relation audit.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::SpectrumFunction;
use crate::linalg::{extract_c, inner, kron_vec, norm, ComplexMatrix, C64, ONE, ZERO};
use crate::observable::Observable;

/// Vectors with a norm below this are rejected instead of normalized.
pub const MIN_NORM: f64 = 1e-8;

/// Two states are the same ray when `|⟨ψ|φ⟩| >= 1 - PHASE_EQ_TOL`.
pub const PHASE_EQ_TOL: f64 = 1e-10;

/// Slack allowed when comparing the two sides of the uncertainty relation.
pub const UNCERTAINTY_SLACK: f64 = 1e-10;

/// A unit vector on a single or composite Hilbert space.
#[derive(Clone, Debug)]
pub struct PureState {
    amplitudes: Vec<C64>,
    factor_dims: Vec<usize>,
    scale: f64,
}

impl PureState {
    /// Normalize `amplitudes` and tag them with the factor structure.
    pub fn new(amplitudes: Vec<C64>, factor_dims: Vec<usize>) -> Result<Self> {
        let expected: usize = factor_dims.iter().product();
        if factor_dims.is_empty() || expected != amplitudes.len() {
            return Err(Error::DimensionMismatch {
                context: "state amplitudes vs factor dims",
                expected,
                found: amplitudes.len(),
            });
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidMatrix("non-finite state amplitude".into()));
        }
        let n = norm(&amplitudes);
        if n < MIN_NORM {
            return Err(Error::ZeroNorm { norm: n });
        }
        let scale = 1.0 / n;
        let amplitudes = amplitudes.into_iter().map(|z| z * scale).collect();
        Ok(PureState { amplitudes, factor_dims, scale })
    }

    /// A state on a single factor of dimension `amplitudes.len()`.
    pub fn single(amplitudes: Vec<C64>) -> Result<Self> {
        let n = amplitudes.len();
        Self::new(amplitudes, vec![n])
    }

    /// A state on `C^n ⊗ C^n`, amplitudes in lexicographic order (first factor slow).
    pub fn composite(amplitudes: Vec<C64>, n: usize) -> Result<Self> {
        Self::new(amplitudes, vec![n, n])
    }

    /// Computational basis vector `index`.
    pub fn basis(factor_dims: Vec<usize>, index: usize) -> Result<Self> {
        let dim: usize = factor_dims.iter().product();
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, len: dim });
        }
        let mut amplitudes = vec![ZERO; dim];
        amplitudes[index] = ONE;
        Self::new(amplitudes, factor_dims)
    }

    /// `a ⊗ b`.
    pub fn product(a: &PureState, b: &PureState) -> PureState {
        let mut factor_dims = a.factor_dims.clone();
        factor_dims.extend_from_slice(&b.factor_dims);
        PureState { amplitudes: kron_vec(&a.amplitudes, &b.amplitudes), factor_dims, scale: 1.0 }
    }

    pub(crate) fn from_normalized(amplitudes: Vec<C64>, factor_dims: Vec<usize>) -> Self {
        PureState { amplitudes, factor_dims, scale: 1.0 }
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn factor_dims(&self) -> &[usize] {
        &self.factor_dims
    }

    /// Factor applied during normalization (1 / input norm).
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// `⟨self|other⟩`.
    pub fn overlap(&self, other: &PureState) -> C64 {
        inner(&self.amplitudes, &other.amplitudes)
    }

    /// Equality up to a global phase.
    pub fn same_ray(&self, other: &PureState) -> bool {
        self.dim() == other.dim() && self.overlap(other).norm() >= 1.0 - PHASE_EQ_TOL
    }

    pub fn apply(&self, m: &ComplexMatrix) -> Result<Vec<C64>> {
        self.check_dim(m.cols(), "operator vs state")?;
        m.apply(&self.amplitudes)
    }

    /// `Re ⟨ψ|M|ψ⟩`.
    pub fn expectation(&self, m: &ComplexMatrix) -> Result<f64> {
        self.check_dim(m.cols(), "operator vs state")?;
        Ok(m.expectation(&self.amplitudes)?.re)
    }

    pub(crate) fn check_dim(&self, expected: usize, context: &'static str) -> Result<()> {
        if self.dim() != expected {
            return Err(Error::DimensionMismatch { context, expected, found: self.dim() });
        }
        Ok(())
    }
}

impl PartialEq for PureState {
    fn eq(&self, other: &Self) -> bool {
        self.factor_dims == other.factor_dims && self.same_ray(other)
    }
}

/// Probabilities of the distinct eigenvalues of an observable.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutcomeDistribution {
    outcomes: Vec<(f64, f64)>,
}

impl OutcomeDistribution {
    pub fn new(outcomes: Vec<(f64, f64)>) -> Result<Self> {
        if outcomes.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::InvalidDistribution("outcome values must be strictly increasing".into()));
        }
        if outcomes.iter().any(|&(_, p)| !(-1e-12..=1.0 + 1e-12).contains(&p)) {
            return Err(Error::InvalidDistribution("probability outside [0, 1]".into()));
        }
        let total: f64 = outcomes.iter().map(|o| o.1).sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidDistribution(format!("probabilities sum to {total}")));
        }
        Ok(OutcomeDistribution {
            outcomes: outcomes.into_iter().map(|(v, p)| (v, p.clamp(0.0, 1.0))).collect(),
        })
    }

    pub fn outcomes(&self) -> &[(f64, f64)] {
        &self.outcomes
    }

    pub fn values(&self) -> Vec<f64> {
        self.outcomes.iter().map(|o| o.0).collect()
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    /// Probability attached to `value`, zero if it is not an outcome.
    pub fn probability_of(&self, value: f64, tol: f64) -> f64 {
        self.outcomes
            .iter()
            .find(|(v, _)| (v - value).abs() <= tol)
            .map_or(0.0, |o| o.1)
    }

    pub fn total(&self) -> f64 {
        self.outcomes.iter().map(|o| o.1).sum()
    }

    pub fn mean(&self) -> f64 {
        self.outcomes.iter().map(|(v, p)| v * p).sum()
    }
}

/// Both sides of `Δ(A)·Δ(B) >= ½|⟨C⟩|` for one state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UncertaintyReport {
    pub delta_a: f64,
    pub delta_b: f64,
    pub rhs: f64,
    pub satisfied: bool,
}

impl UncertaintyReport {
    pub fn from_parts(delta_a: f64, delta_b: f64, rhs: f64) -> Self {
        let satisfied = delta_a * delta_b >= rhs - UNCERTAINTY_SLACK;
        UncertaintyReport { delta_a, delta_b, rhs, satisfied }
    }

    pub fn product(&self) -> f64 {
        self.delta_a * self.delta_b
    }
}

/// `p(λ_k) = ⟨Ψ|Π_k|Ψ⟩` for every eigenvalue of `obs`.
pub fn outcome_probabilities(state: &PureState, obs: &Observable) -> Result<OutcomeDistribution> {
    state.check_dim(obs.dim(), "outcome probabilities")?;
    let outcomes = obs
        .spectrum()
        .lines()
        .iter()
        .map(|l| Ok((l.eigenvalue(), state.expectation(l.projector())?.clamp(0.0, 1.0))))
        .collect::<Result<Vec<_>>>()?;
    OutcomeDistribution::new(outcomes)
}

/// Best predictor `Σ_n f(a_n) p_Ψ(a_n)`, evaluated over the spectrum.
pub fn best_predictor(state: &PureState, obs: &Observable, f: &SpectrumFunction) -> Result<f64> {
    let dist = outcome_probabilities(state, obs)?;
    let tol = obs.grouping_tol();
    dist.outcomes()
        .iter()
        .map(|&(a, p)| Ok(f.require(a, tol)? * p))
        .sum()
}

/// `⟨Ψ|f(A)|Ψ⟩` with `f(A)` assembled as a matrix; the second route to the
/// best predictor.
pub fn expectation_of_function(state: &PureState, obs: &Observable, f: &SpectrumFunction) -> Result<f64> {
    state.check_dim(obs.dim(), "expectation")?;
    state.expectation(&obs.function_matrix(f)?)
}

/// `Δ_Ψ(M) = ‖(M - ⟨M⟩)Ψ‖` for a Hermitian matrix `M`, with its mean.
pub(crate) fn mean_and_spread(state: &PureState, m: &ComplexMatrix) -> Result<(f64, f64)> {
    let mv = state.apply(m)?;
    let mean = inner(state.amplitudes(), &mv).re;
    let residual: Vec<C64> = mv.iter().zip(state.amplitudes()).map(|(x, psi)| x - psi * mean).collect();
    Ok((mean, norm(&residual)))
}

/// Prediction error `Δ_Ψ(A) = sqrt(⟨Ψ|(A - m)²|Ψ⟩)`.
pub fn prediction_error(state: &PureState, obs: &Observable) -> Result<f64> {
    state.check_dim(obs.dim(), "prediction error")?;
    Ok(mean_and_spread(state, obs.matrix())?.1)
}

/// Evaluate `Δ(A)`, `Δ(B)` and `½|⟨C⟩|` in `state`.
pub fn audit_uncertainty(state: &PureState, a: &Observable, b: &Observable, c: &Observable) -> Result<UncertaintyReport> {
    for o in [a, b, c] {
        state.check_dim(o.dim(), "uncertainty audit")?;
    }
    let delta_a = prediction_error(state, a)?;
    let delta_b = prediction_error(state, b)?;
    let rhs = 0.5 * c.matrix().expectation(state.amplitudes())?.norm();
    Ok(UncertaintyReport::from_parts(delta_a, delta_b, rhs))
}

/// Residuals of `tr C = 0` and `⟨φ_a|C|φ_a⟩ = 0` for `C = [A,B]/(iα)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Theorem1Report {
    pub trace_residual: f64,
    pub max_diag_residual: f64,
    /// Frobenius norm of `C`, the scale for the residuals.
    pub c_norm: f64,
    /// `A` had a repeated eigenvalue; the diagonal was taken in the
    /// eigenbasis returned by the solver.
    pub degenerate: bool,
}

impl Theorem1Report {
    /// Both residuals are at most `rtol * ‖C‖`.
    pub fn holds(&self, rtol: f64) -> bool {
        let bound = rtol * self.c_norm;
        self.trace_residual <= bound && self.max_diag_residual <= bound
    }
}

/// Check that `C = [A,B]/(iα)` is traceless with a vanishing diagonal in the
/// eigenbasis of `A`.
pub fn verify_theorem1(a: &Observable, b: &Observable, alpha: f64) -> Result<Theorem1Report> {
    let c = extract_c(a.matrix(), b.matrix(), alpha)?;
    let trace_residual = c.trace().norm();
    let mut max_diag_residual = 0.0f64;
    for line in a.spectrum().lines() {
        for phi in line.basis() {
            max_diag_residual = max_diag_residual.max(c.expectation(phi)?.norm());
        }
    }
    Ok(Theorem1Report {
        trace_residual,
        max_diag_residual,
        c_norm: c.frobenius_norm(),
        degenerate: !a.is_nondegenerate(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::pauli;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn obs(m: ComplexMatrix) -> Observable {
        Observable::new(m).unwrap()
    }

    #[test]
    fn constructor_normalizes_and_records_scale() {
        let s = PureState::single(vec![c(3.0), c(4.0)]).unwrap();
        assert!((norm(s.amplitudes()) - 1.0).abs() < 1e-15);
        assert!((s.scale() - 0.2).abs() < 1e-15);
        assert!(matches!(PureState::single(vec![c(1e-9), c(0.0)]), Err(Error::ZeroNorm { .. })));
        assert!(matches!(
            PureState::composite(vec![c(1.0); 3], 2),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn equality_ignores_global_phase() {
        let a = PureState::single(vec![c(0.6), c(0.8)]).unwrap();
        let b = PureState::single(vec![C64::new(0.0, 0.6), C64::new(0.0, 0.8)]).unwrap();
        let d = PureState::single(vec![c(0.8), c(0.6)]).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, d);
    }

    #[test]
    fn eigenstate_probabilities() {
        let up = PureState::single(vec![c(1.0), c(0.0)]).unwrap();
        let d = outcome_probabilities(&up, &obs(pauli::z())).unwrap();
        assert_eq!(d.outcomes(), &[(-1.0, 0.0), (1.0, 1.0)]);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let up = PureState::single(vec![c(1.0), c(0.0)]).unwrap();
        let big = obs(ComplexMatrix::identity(3));
        assert!(matches!(outcome_probabilities(&up, &big), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(prediction_error(&up, &big), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn best_predictor_examples() {
        let z = obs(pauli::z());
        let up = PureState::single(vec![c(1.0), c(0.0)]).unwrap();
        assert_eq!(best_predictor(&up, &z, &SpectrumFunction::identity(&[-1.0, 1.0])).unwrap(), 1.0);
        let s = PureState::single(vec![c(0.3), C64::new(0.1, -0.7)]).unwrap();
        let k = best_predictor(&s, &z, &SpectrumFunction::constant(&[-1.0, 1.0], 2.5)).unwrap();
        assert!((k - 2.5).abs() < 1e-14);
        let partial = SpectrumFunction::identity(&[1.0]);
        assert!(matches!(best_predictor(&s, &z, &partial), Err(Error::MissingFunctionValue { .. })));
    }

    #[test]
    fn prediction_error_examples() {
        let z = obs(pauli::z());
        let up = PureState::single(vec![c(1.0), c(0.0)]).unwrap();
        assert!(prediction_error(&up, &z).unwrap() < 1e-15);
        let plus = PureState::single(vec![c(1.0), c(1.0)]).unwrap();
        assert!((prediction_error(&plus, &z).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn audit_on_plus_state() {
        // (|0⟩+|1⟩)/√2 is an eigenstate of σx: Δσz = 1, Δσx = 0, ⟨σy⟩ = 0.
        let plus = PureState::single(vec![c(1.0), c(1.0)]).unwrap();
        let r = audit_uncertainty(&plus, &obs(pauli::z()), &obs(pauli::x()), &obs(pauli::y())).unwrap();
        assert!((r.delta_a - 1.0).abs() < 1e-14);
        assert!(r.delta_b < 1e-14);
        assert!(r.rhs < 1e-15);
        assert!(r.satisfied);
    }

    #[test]
    fn theorem1_on_pauli_and_identity() {
        let r = verify_theorem1(&obs(pauli::z()), &obs(pauli::x()), 2.0).unwrap();
        assert_eq!((r.trace_residual, r.max_diag_residual), (0.0, 0.0));
        assert!(r.holds(1e-10));
        assert!(!r.degenerate);
        let r = verify_theorem1(&obs(ComplexMatrix::identity(3)), &obs(ComplexMatrix::from_real_diagonal(&[1.0, 2.0, 3.0])), 1.0)
            .unwrap();
        assert_eq!(r.c_norm, 0.0);
        assert!(r.holds(1e-10));
        assert!(r.degenerate);
    }
}
