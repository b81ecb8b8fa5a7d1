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

//! Two identical factors `C^N ⊗ C^N`, observables lifted onto one factor,
//! the conserved sum `S = A⊗I + I⊗A` and projective measurement of it.
//!
//! The eigenspaces of `S` are read off the factor spectrum: the product
//! vector `|a_n, a_m⟩` has `S`-eigenvalue `a_n + a_m`, so the eigenspace of
//! `s_k` is spanned by the pairs on the anti-diagonal `a_n + a_m = s_k`. Both
//! `S` and the lifted observables are therefore given exact spectral
//! resolutions without calling an eigensolver on the product space.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{kron_vec, norm, singular_values, tensor_product, ComplexMatrix, SpectralDecomposition, SpectralLine, C64, ONE, ZERO};
use crate::observable::Observable;
use crate::state::{OutcomeDistribution, PureState};

/// Conditioning on an outcome with probability below this is an error.
pub const ZERO_PROBABILITY: f64 = 1e-12;

/// Default cutoff for counting Schmidt coefficients.
pub const SCHMIDT_TOL: f64 = 1e-10;

/// Which factor of the product space an operator acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Slot {
    First,
    Second,
}

impl TryFrom<u8> for Slot {
    type Error = Error;

    fn try_from(v: u8) -> Result<Self> {
        match v {
            1 => Ok(Slot::First),
            2 => Ok(Slot::Second),
            other => Err(Error::InvalidSlot(other)),
        }
    }
}

/// `C^N ⊗ C^N` with the product eigenbasis `|a_n(1), a_m(2)⟩` of a
/// nondegenerate factor observable `A`.
#[derive(Clone, Debug)]
pub struct CompositeSpace {
    factor: Observable,
    basis_labels: Vec<(f64, f64)>,
}

impl CompositeSpace {
    pub fn new(factor: &Observable) -> Result<Self> {
        if !factor.is_nondegenerate() {
            return Err(Error::DegenerateSpectrum);
        }
        let values = factor.eigenvalues();
        let basis_labels = values.iter().flat_map(|&a| values.iter().map(move |&b| (a, b))).collect();
        Ok(CompositeSpace { factor: factor.clone(), basis_labels })
    }

    pub fn factor(&self) -> &Observable {
        &self.factor
    }

    pub fn factor_dim(&self) -> usize {
        self.factor.dim()
    }

    pub fn dim(&self) -> usize {
        self.factor_dim() * self.factor_dim()
    }

    pub fn factor_dims(&self) -> Vec<usize> {
        vec![self.factor_dim(), self.factor_dim()]
    }

    /// `(a_n, a_m)` for every product basis vector, first factor slow.
    pub fn basis_labels(&self) -> &[(f64, f64)] {
        &self.basis_labels
    }

    /// Factor eigenvalues `a_1 < … < a_N`.
    pub fn spectrum(&self) -> Vec<f64> {
        self.factor.eigenvalues()
    }

    fn factor_vector(&self, n: usize) -> &[C64] {
        self.factor.eigenvector(n).expect("factor spectrum is nondegenerate")
    }

    /// `|a_n⟩ ⊗ |a_m⟩` in computational coordinates.
    pub fn product_vector(&self, n: usize, m: usize) -> Vec<C64> {
        kron_vec(self.factor_vector(n), self.factor_vector(m))
    }

    /// Coefficient matrix `c[n,m] = ⟨a_n, a_m|Ψ⟩`, computed as `U^H M conj(U)`
    /// where `M` is `Ψ` reshaped to `N×N` and `U` holds the factor eigenvectors
    /// as columns.
    pub fn coefficients(&self, state: &PureState) -> Result<ComplexMatrix> {
        state.check_dim(self.dim(), "composite state")?;
        let n = self.factor_dim();
        let reshaped = ComplexMatrix::new(n, n, state.amplitudes().to_vec())?;
        let mut u = Vec::with_capacity(n * n);
        for i in 0..n {
            for k in 0..n {
                u.push(self.factor_vector(k)[i]);
            }
        }
        let u = ComplexMatrix::new(n, n, u)?;
        let u_conj = ComplexMatrix::new(n, n, u.as_slice().iter().map(|z| z.conj()).collect())?;
        u.adjoint().matmul(&reshaped)?.matmul(&u_conj)
    }
}

/// Lift a factor observable to `A⊗I` (first slot) or `I⊗A` (second slot).
pub fn lift(obs: &Observable, slot: Slot, space: &CompositeSpace) -> Result<Observable> {
    let n = space.factor_dim();
    if obs.dim() != n {
        return Err(Error::DimensionMismatch { context: "lift", expected: n, found: obs.dim() });
    }
    let id = ComplexMatrix::identity(n);
    let matrix = match slot {
        Slot::First => tensor_product(obs.matrix(), &id),
        Slot::Second => tensor_product(&id, obs.matrix()),
    };
    let units: Vec<Vec<C64>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { ONE } else { ZERO }).collect())
        .collect();
    let lines = obs
        .spectrum()
        .lines()
        .iter()
        .map(|line| {
            let mut basis = Vec::with_capacity(line.multiplicity() * n);
            for v in line.basis() {
                for e in &units {
                    basis.push(match slot {
                        Slot::First => kron_vec(v, e),
                        Slot::Second => kron_vec(e, v),
                    });
                }
            }
            SpectralLine::from_basis(line.eigenvalue(), basis)
        })
        .collect();
    let spectrum = SpectralDecomposition::from_lines(lines, n * n, obs.grouping_tol());
    Ok(Observable::from_parts(matrix, spectrum))
}

/// The anti-diagonal sets `S(k) = {(n, m) : a_n + a_m = s_k}` of a
/// nondegenerate spectrum, with the distinct sums `s_1 < … < s_D`.
#[derive(Clone, Debug, PartialEq)]
pub struct AntiDiagonalIndex {
    spectrum: Vec<f64>,
    sums: Vec<f64>,
    sets: Vec<Vec<(usize, usize)>>,
    /// `sum_of[n * N + m]` is the `k` with `(n, m) ∈ S(k)`.
    sum_of: Vec<usize>,
    tol: f64,
}

/// Enumerate the anti-diagonals of `spectrum × spectrum`, merging pair sums
/// whose consecutive gaps are below `tol`.
pub fn anti_diagonals(spectrum: &[f64], tol: f64) -> Result<AntiDiagonalIndex> {
    if spectrum.is_empty() {
        return Err(Error::InvalidMatrix("empty spectrum".into()));
    }
    if spectrum.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::UnsortedSpectrum);
    }
    let n = spectrum.len();
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            pairs.push((spectrum[i] + spectrum[j], i, j));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let mut groups: Vec<Vec<(f64, usize, usize)>> = Vec::new();
    let mut last = f64::NEG_INFINITY;
    for p in pairs {
        match groups.last_mut() {
            Some(g) if p.0 - last < tol => g.push(p),
            _ => groups.push(vec![p]),
        }
        last = p.0;
    }

    let mut sum_of = vec![0; n * n];
    let mut sums = Vec::with_capacity(groups.len());
    let mut sets = Vec::with_capacity(groups.len());
    for (k, g) in groups.into_iter().enumerate() {
        sums.push(g.iter().map(|p| p.0).sum::<f64>() / g.len() as f64);
        let mut set: Vec<(usize, usize)> = g.iter().map(|&(_, i, j)| (i, j)).collect();
        set.sort_unstable();
        for &(i, j) in &set {
            sum_of[i * n + j] = k;
        }
        sets.push(set);
    }
    Ok(AntiDiagonalIndex { spectrum: spectrum.to_vec(), sums, sets, sum_of, tol })
}

impl AntiDiagonalIndex {
    pub fn spectrum(&self) -> &[f64] {
        &self.spectrum
    }

    /// Distinct sums `s_1 < … < s_D`.
    pub fn sums(&self) -> &[f64] {
        &self.sums
    }

    pub fn len(&self) -> usize {
        self.sums.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sums.is_empty()
    }

    /// Index pairs `(n, m)` on the `k`-th anti-diagonal, sorted by `n`.
    pub fn set(&self, k: usize) -> &[(usize, usize)] {
        &self.sets[k]
    }

    pub fn sets(&self) -> &[Vec<(usize, usize)>] {
        &self.sets
    }

    /// `C(k) = |S(k)|`.
    pub fn degeneracies(&self) -> Vec<usize> {
        self.sets.iter().map(Vec::len).collect()
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// `k` such that `(n, m) ∈ S(k)`.
    pub fn sum_index(&self, n: usize, m: usize) -> usize {
        self.sum_of[n * self.spectrum.len() + m]
    }

    /// The `m` with `(n, m) ∈ S(k)`, i.e. `a_m = s_k - a_n`.
    pub fn partner(&self, n: usize, k: usize) -> Option<usize> {
        self.sets[k].iter().find(|&&(i, _)| i == n).map(|&(_, j)| j)
    }

    /// Counting function `χ(a_n, s_k)`: does `s_k - a_n` lie in the spectrum.
    pub fn chi(&self, n: usize, k: usize) -> bool {
        self.partner(n, k).is_some()
    }

    /// Index of the sum matching `value` within the grouping tolerance.
    pub fn find_sum(&self, value: f64) -> Option<usize> {
        let tol = self.tol.max(f64::EPSILON);
        self.sums
            .iter()
            .enumerate()
            .map(|(k, s)| (k, (s - value).abs()))
            .filter(|&(_, d)| d <= tol)
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(k, _)| k)
    }
}

/// `S = A⊗I + I⊗A` with its anti-diagonal structure.
#[derive(Clone, Debug)]
pub struct SumObservable {
    observable: Observable,
    index: AntiDiagonalIndex,
}

impl SumObservable {
    pub fn observable(&self) -> &Observable {
        &self.observable
    }

    pub fn index(&self) -> &AntiDiagonalIndex {
        &self.index
    }
}

/// Build the sum observable on `space` from its factor observable. Each
/// eigenvalue `s_k` carries multiplicity `C(k)`.
pub fn sum_observable(space: &CompositeSpace) -> Result<SumObservable> {
    let a = space.factor();
    let index = anti_diagonals(&a.eigenvalues(), a.grouping_tol())?;
    let n = space.factor_dim();
    let id = ComplexMatrix::identity(n);
    let matrix = tensor_product(a.matrix(), &id).checked_add(&tensor_product(&id, a.matrix()))?;
    let lines = (0..index.len())
        .map(|k| {
            let basis = index.set(k).iter().map(|&(i, j)| space.product_vector(i, j)).collect();
            SpectralLine::from_basis(index.sums()[k], basis)
        })
        .collect();
    let spectrum = SpectralDecomposition::from_lines(lines, n * n, index.tol());
    Ok(SumObservable { observable: Observable::from_parts(matrix, spectrum), index })
}

/// The joint distribution `q[n,m] = |⟨a_n(1), a_m(2)|Ψ⟩|²` of `(A1, A2)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JointDistribution {
    n: usize,
    q: Vec<f64>,
}

impl JointDistribution {
    pub fn factor_dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, n: usize, m: usize) -> f64 {
        self.q[n * self.n + m]
    }

    pub fn total(&self) -> f64 {
        self.q.iter().sum()
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.q.chunks(self.n).map(<[f64]>::to_vec).collect()
    }
}

pub fn joint_distribution(state: &PureState, space: &CompositeSpace) -> Result<JointDistribution> {
    let coeffs = space.coefficients(state)?;
    Ok(JointDistribution {
        n: space.factor_dim(),
        q: coeffs.as_slice().iter().map(|z| z.norm_sqr()).collect(),
    })
}

/// `p(s_k) = Σ_{(n,m) ∈ S(k)} q[n,m]`.
pub fn sum_probabilities(q: &JointDistribution, idx: &AntiDiagonalIndex) -> Result<OutcomeDistribution> {
    if q.n != idx.spectrum().len() {
        return Err(Error::DimensionMismatch {
            context: "joint distribution vs anti-diagonal index",
            expected: idx.spectrum().len(),
            found: q.n,
        });
    }
    let outcomes = (0..idx.len())
        .map(|k| (idx.sums()[k], idx.set(k).iter().map(|&(n, m)| q.get(n, m)).sum()))
        .collect();
    OutcomeDistribution::new(outcomes)
}

/// `Π_k` of an observable; for a sum observable this is
/// `Σ_{(n,m) ∈ S(k)} |a_n,a_m⟩⟨a_n,a_m|`.
pub fn eigenspace_projector(s: &Observable, k: usize) -> Result<ComplexMatrix> {
    s.projector(k).cloned()
}

fn project(state: &PureState, projector: &ComplexMatrix) -> Result<(PureState, f64)> {
    let v = state.apply(projector)?;
    let len = norm(&v);
    let p = len * len;
    if p < ZERO_PROBABILITY {
        return Err(Error::ImpossibleOutcome { probability: p });
    }
    let amplitudes = v.into_iter().map(|z| z / len).collect();
    Ok((PureState::from_normalized(amplitudes, state.factor_dims().to_vec()), p))
}

/// Collapse `state` onto the range of `projector`: returns `(ΠΨ/√p, p)` with
/// `p = ⟨Ψ|Π|Ψ⟩`.
pub fn post_measurement_state(state: &PureState, projector: &ComplexMatrix) -> Result<(PureState, f64)> {
    if !projector.is_square() {
        return Err(Error::InvalidMatrix("projector must be square".into()));
    }
    state.check_dim(projector.rows(), "projector vs state")?;
    let scale = projector.max_abs().max(1.0);
    let residual = projector
        .hermiticity_residual()
        .max(projector.matmul(projector)?.max_abs_diff(projector));
    if residual > 1e-10 * scale {
        return Err(Error::NotProjector { residual });
    }
    project(state, projector)
}

/// One term `√p(s_k) · Ψ_{s_k}` of the decomposition along the eigenspaces of an observable.
#[derive(Clone, Debug)]
pub struct SumBranch {
    pub eigenvalue: f64,
    pub weight: f64,
    pub state: PureState,
}

/// Split `state` along the eigenspaces of `s`. Branches with probability below
/// [`ZERO_PROBABILITY`] are omitted; the others keep the phase of `Π_k Ψ` so
/// that `Σ_k weight_k · state_k` reproduces `state`.
pub fn decompose_by_sum(state: &PureState, s: &Observable) -> Result<Vec<SumBranch>> {
    state.check_dim(s.dim(), "decomposition")?;
    let mut branches = Vec::new();
    for line in s.spectrum().lines() {
        match project(state, line.projector()) {
            Ok((branch, p)) => branches.push(SumBranch { eigenvalue: line.eigenvalue(), weight: p.sqrt(), state: branch }),
            Err(Error::ImpossibleOutcome { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(branches)
}

/// Schmidt coefficients of a two-factor state, largest first.
pub fn schmidt_coefficients(state: &PureState, space: &CompositeSpace) -> Result<Vec<f64>> {
    state.check_dim(space.dim(), "Schmidt decomposition")?;
    let n = space.factor_dim();
    let reshaped = ComplexMatrix::new(n, n, state.amplitudes().to_vec())?;
    let mut sv = singular_values(&reshaped);
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}

/// Number of Schmidt coefficients above `tol`; at least 2 means entangled.
pub fn schmidt_rank(state: &PureState, space: &CompositeSpace, tol: f64) -> Result<usize> {
    Ok(schmidt_coefficients(state, space)?.into_iter().filter(|&s| s > tol).count())
}

/// The composite space, the lifted copies `A1`, `A2` and the sum `S` for one
/// factor observable.
#[derive(Clone, Debug)]
pub struct JointSystem {
    space: CompositeSpace,
    a1: Observable,
    a2: Observable,
    sum: SumObservable,
}

impl JointSystem {
    pub fn new(a: &Observable) -> Result<Self> {
        let space = CompositeSpace::new(a)?;
        let a1 = lift(a, Slot::First, &space)?;
        let a2 = lift(a, Slot::Second, &space)?;
        let sum = sum_observable(&space)?;
        Ok(JointSystem { space, a1, a2, sum })
    }

    pub fn space(&self) -> &CompositeSpace {
        &self.space
    }

    pub fn factor(&self) -> &Observable {
        self.space.factor()
    }

    pub fn a1(&self) -> &Observable {
        &self.a1
    }

    pub fn a2(&self) -> &Observable {
        &self.a2
    }

    pub fn lifted(&self, slot: Slot) -> &Observable {
        match slot {
            Slot::First => &self.a1,
            Slot::Second => &self.a2,
        }
    }

    pub fn sum(&self) -> &SumObservable {
        &self.sum
    }

    pub fn index(&self) -> &AntiDiagonalIndex {
        &self.sum.index
    }

    /// Lift an arbitrary factor observable (e.g. `B` or `C`) into this space.
    pub fn lift(&self, obs: &Observable, slot: Slot) -> Result<Observable> {
        lift(obs, slot, &self.space)
    }

    /// Index `k` of the sum eigenvalue matching `value`.
    pub fn match_sum(&self, value: f64) -> Result<usize> {
        self.index().find_sum(value).ok_or(Error::NotInSpectrum { value })
    }

    /// Index `n` of the factor eigenvalue matching `value`.
    pub fn match_factor(&self, value: f64) -> Result<usize> {
        self.factor().match_eigenvalue(value)
    }

    pub fn sum_distribution(&self, state: &PureState) -> Result<OutcomeDistribution> {
        sum_probabilities(&joint_distribution(state, &self.space)?, self.index())
    }

    /// `Ψ_{s_k} = Π_k Ψ / √p(s_k)` and `p(s_k)`.
    pub fn condition_on_sum(&self, state: &PureState, k: usize) -> Result<(PureState, f64)> {
        let projector = self.sum.observable.projector(k)?;
        project(state, projector)
    }

    /// Collapse onto `A1 = a_n`.
    pub(crate) fn condition_on_first(&self, state: &PureState, n: usize) -> Result<(PureState, f64)> {
        project(state, self.a1.projector(n)?)
    }
}
