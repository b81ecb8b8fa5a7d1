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

//! Real functions on a finite spectrum, given as explicit tables.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A real-valued function tabulated over the eigenvalues of an observable.
///
/// Lookups match the argument against the table within a caller-supplied
/// tolerance, normally the grouping tolerance of the observable's spectrum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumFunction {
    table: Vec<(f64, f64)>,
}

impl SpectrumFunction {
    pub fn from_pairs(mut pairs: Vec<(f64, f64)>) -> Self {
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        SpectrumFunction { table: pairs }
    }

    pub fn tabulate(points: &[f64], f: impl Fn(f64) -> f64) -> Self {
        Self::from_pairs(points.iter().map(|&x| (x, f(x))).collect())
    }

    pub fn identity(points: &[f64]) -> Self {
        Self::tabulate(points, |x| x)
    }

    pub fn constant(points: &[f64], c: f64) -> Self {
        Self::tabulate(points, |_| c)
    }

    /// 1 at `target`, 0 elsewhere.
    pub fn indicator(points: &[f64], target: f64) -> Self {
        Self::tabulate(points, |x| if x == target { 1.0 } else { 0.0 })
    }

    pub fn entries(&self) -> &[(f64, f64)] {
        &self.table
    }

    pub fn value_at(&self, x: f64, tol: f64) -> Option<f64> {
        self.table
            .iter()
            .filter(|(p, _)| (p - x).abs() <= tol)
            .min_by(|a, b| (a.0 - x).abs().total_cmp(&(b.0 - x).abs()))
            .map(|&(_, v)| v)
    }

    pub fn require(&self, x: f64, tol: f64) -> Result<f64> {
        self.value_at(x, tol).ok_or(Error::MissingFunctionValue { value: x })
    }

    pub fn covers(&self, points: &[f64], tol: f64) -> bool {
        points.iter().all(|&x| self.value_at(x, tol).is_some())
    }
}

/// A real function of two spectral arguments, e.g. `H(a, s)` over pairs of
/// an `A`-eigenvalue and a sum eigenvalue.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairFunction {
    table: Vec<((f64, f64), f64)>,
}

impl PairFunction {
    pub fn from_entries(table: Vec<((f64, f64), f64)>) -> Self {
        PairFunction { table }
    }

    pub fn tabulate(pairs: &[(f64, f64)], f: impl Fn(f64, f64) -> f64) -> Self {
        PairFunction { table: pairs.iter().map(|&(a, s)| ((a, s), f(a, s))).collect() }
    }

    pub fn entries(&self) -> &[((f64, f64), f64)] {
        &self.table
    }

    pub fn value_at(&self, a: f64, s: f64, tol: f64) -> Option<f64> {
        self.table
            .iter()
            .find(|((x, y), _)| (x - a).abs() <= tol && (y - s).abs() <= tol)
            .map(|&(_, v)| v)
    }

    pub fn require(&self, a: f64, s: f64, tol: f64) -> Result<f64> {
        // Report the first argument; the pair is what failed to match.
        self.value_at(a, s, tol).ok_or(Error::MissingFunctionValue { value: a })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookup_within_tolerance() {
        let f = SpectrumFunction::tabulate(&[1.0, -1.0], |x| x * x + 1.0);
        assert_eq!(f.entries()[0].0, -1.0);
        assert_eq!(f.value_at(1.0 + 1e-12, 1e-9), Some(2.0));
        assert_eq!(f.value_at(0.5, 1e-9), None);
        assert!(matches!(f.require(0.5, 1e-9), Err(Error::MissingFunctionValue { .. })));
        assert!(f.covers(&[-1.0, 1.0], 0.0));
    }

    #[test]
    fn indicator_and_constant() {
        let g = SpectrumFunction::indicator(&[-2.0, 0.0, 2.0], 0.0);
        assert_eq!(g.value_at(0.0, 0.0), Some(1.0));
        assert_eq!(g.value_at(2.0, 0.0), Some(0.0));
        let c = SpectrumFunction::constant(&[3.0], 7.5);
        assert_eq!(c.value_at(3.0, 0.0), Some(7.5));
    }

    #[test]
    fn pair_lookup() {
        let h = PairFunction::tabulate(&[(1.0, 4.0), (2.0, 4.0)], |a, s| a + s);
        assert_eq!(h.value_at(1.0, 4.0, 1e-12), Some(5.0));
        assert_eq!(h.value_at(3.0, 4.0, 1e-12), None);
    }
}
