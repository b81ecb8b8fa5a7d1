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

use crate::error::{Error, Result};
use crate::function::SpectrumFunction;
use crate::linalg::{spectral_decompose, spectral_decompose_default, ComplexMatrix, SpectralDecomposition, C64};

/// A Hermitian matrix together with its spectral decomposition.
#[derive(Clone, Debug)]
pub struct Observable {
    matrix: ComplexMatrix,
    spectrum: SpectralDecomposition,
}

impl Observable {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let spectrum = spectral_decompose_default(&matrix)?;
        Ok(Observable { matrix, spectrum })
    }

    pub fn with_grouping_tol(matrix: ComplexMatrix, grouping_tol: f64) -> Result<Self> {
        let spectrum = spectral_decompose(&matrix, grouping_tol)?;
        Ok(Observable { matrix, spectrum })
    }

    /// Pairs a matrix with a spectral resolution built by the caller, for
    /// operators whose eigenspaces are known structurally.
    pub(crate) fn from_parts(matrix: ComplexMatrix, spectrum: SpectralDecomposition) -> Self {
        Observable { matrix, spectrum }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn spectrum(&self) -> &SpectralDecomposition {
        &self.spectrum
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.spectrum.eigenvalues()
    }

    pub fn grouping_tol(&self) -> f64 {
        self.spectrum.grouping_tol()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.spectrum.is_nondegenerate()
    }

    /// Eigenvector of the `k`-th eigenvalue; `None` if that eigenvalue is degenerate.
    pub fn eigenvector(&self, k: usize) -> Option<&[C64]> {
        let line = self.spectrum.lines().get(k)?;
        (line.multiplicity() == 1).then(|| line.basis()[0].as_slice())
    }

    pub fn projector(&self, k: usize) -> Result<&ComplexMatrix> {
        self.spectrum
            .lines()
            .get(k)
            .map(|l| l.projector())
            .ok_or(Error::IndexOutOfRange { index: k, len: self.spectrum.len() })
    }

    /// Index of the eigenvalue matching `value` within the grouping tolerance.
    pub fn match_eigenvalue(&self, value: f64) -> Result<usize> {
        self.spectrum.find(value).ok_or(Error::NotInSpectrum { value })
    }

    /// `f(A) = Σ_n f(a_n) Π_n`.
    pub fn function_matrix(&self, f: &SpectrumFunction) -> Result<ComplexMatrix> {
        let tol = self.grouping_tol();
        let mut out = ComplexMatrix::zeros(self.dim(), self.dim());
        for line in self.spectrum.lines() {
            let v = f.require(line.eigenvalue(), tol)?;
            out = &out + &line.projector().scale(C64::new(v, 0.0));
        }
        Ok(out)
    }
}
