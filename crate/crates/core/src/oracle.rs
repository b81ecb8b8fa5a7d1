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

//! Brute-force classical conditioning.
//!
//! Reads the joint distribution `q(n, m)` straight off the expansion
//! coefficients of the state and conditions on the pair sum by enumerating
//! all `N²` pairs. No projectors, no anti-diagonal index and no composite
//! observables are used, so these results serve as ground truth for
//! [`crate::conditional`].

use crate::composite::ZERO_PROBABILITY;
use crate::conditional::{ConditionalEntry, ConditionalExpectationTable};
use crate::error::{Error, Result};
use crate::function::SpectrumFunction;
use crate::linalg::C64;
use crate::observable::Observable;
use crate::state::PureState;

/// `q[n][m] = |Σ_{i,j} conj(φ_n[i]) conj(φ_m[j]) Ψ[i N + j]|²`.
pub fn oracle_joint(state: &PureState, a: &Observable) -> Result<Vec<Vec<f64>>> {
    let n = a.dim();
    if state.dim() != n * n {
        return Err(Error::DimensionMismatch { context: "oracle joint distribution", expected: n * n, found: state.dim() });
    }
    if !a.is_nondegenerate() {
        return Err(Error::DegenerateSpectrum);
    }
    let psi = state.amplitudes();
    let vecs: Vec<&[_]> = (0..n).map(|k| a.eigenvector(k).unwrap()).collect();
    let mut q = vec![vec![0.0; n]; n];
    for (row, u) in q.iter_mut().zip(&vecs) {
        for (cell, v) in row.iter_mut().zip(&vecs) {
            let mut coeff = C64::new(0.0, 0.0);
            for i in 0..n {
                for j in 0..n {
                    coeff += u[i].conj() * v[j].conj() * psi[i * n + j];
                }
            }
            *cell = coeff.norm_sqr();
        }
    }
    Ok(q)
}

struct Bucket {
    sum: f64,
    mass: f64,
    weighted: f64,
    /// `(a_n, q)` for pairs landing here.
    members: Vec<(f64, f64)>,
}

fn buckets(state: &PureState, a: &Observable, f: impl Fn(f64) -> Result<f64>) -> Result<Vec<Bucket>> {
    let q = oracle_joint(state, a)?;
    let values = a.eigenvalues();
    let tol = a.grouping_tol();
    let mut out: Vec<Bucket> = Vec::new();
    for (n, &an) in values.iter().enumerate() {
        let fa = f(an)?;
        for (m, &am) in values.iter().enumerate() {
            let s = an + am;
            let w = q[n][m];
            let bucket = match out.iter_mut().position(|b| (b.sum - s).abs() < tol) {
                Some(i) => &mut out[i],
                None => {
                    out.push(Bucket { sum: s, mass: 0.0, weighted: 0.0, members: Vec::new() });
                    out.last_mut().unwrap()
                }
            };
            bucket.mass += w;
            bucket.weighted += fa * w;
            bucket.members.push((an, w));
        }
    }
    out.sort_by(|x, y| x.sum.total_cmp(&y.sum));
    Ok(out)
}

/// `e(s) = Σ_{a_n + a_m = s} f(a_n) q(n, m) / Σ_{a_n + a_m = s} q(n, m)` for
/// every sum with nonzero mass.
pub fn oracle_conditional(state: &PureState, a: &Observable, f: &SpectrumFunction) -> Result<ConditionalExpectationTable> {
    let tol = a.grouping_tol();
    let entries = buckets(state, a, |x| f.require(x, tol))?
        .into_iter()
        .filter(|b| b.mass >= ZERO_PROBABILITY)
        .map(|b| ConditionalEntry { sum: b.sum, probability: b.mass, value: b.weighted / b.mass })
        .collect();
    Ok(ConditionalExpectationTable { entries })
}

/// `(a_n, q(a_n, s - a_n) / p(s))` for every pair on the anti-diagonal of `s`.
pub fn oracle_conditional_distribution(state: &PureState, a: &Observable, s_value: f64) -> Result<Vec<(f64, f64)>> {
    let tol = a.grouping_tol();
    let bucket = buckets(state, a, |_| Ok(0.0))?
        .into_iter()
        .find(|b| (b.sum - s_value).abs() <= tol)
        .ok_or(Error::NotInSpectrum { value: s_value })?;
    if bucket.mass < ZERO_PROBABILITY {
        return Err(Error::ImpossibleOutcome { probability: bucket.mass });
    }
    Ok(bucket.members.into_iter().map(|(an, w)| (an, w / bucket.mass)).collect())
}
