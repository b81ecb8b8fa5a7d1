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

//! Random Hermitian matrices, states and spectrum functions for property
//! checks and synthetic scenarios.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::function::SpectrumFunction;
use crate::linalg::{spectral_decompose_default, ComplexMatrix, C64};
use crate::state::PureState;

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// `(G + G^H) / 2` for a matrix `G` of i.i.d. complex Gaussians.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let g = ComplexMatrix::new(n, n, (0..n * n).map(|_| gaussian(rng)).collect()).unwrap();
    (&g + &g.adjoint()).scale(C64::new(0.5, 0.0))
}

/// `U diag(values) U^H` for a random unitary `U`.
pub fn random_with_spectrum<R: Rng + ?Sized>(rng: &mut R, values: &[f64]) -> ComplexMatrix {
    let n = values.len();
    let eig = spectral_decompose_default(&random_hermitian(rng, n)).unwrap();
    let vectors: Vec<&Vec<C64>> = eig.lines().iter().flat_map(|l| l.basis()).collect();
    let mut out = ComplexMatrix::zeros(n, n);
    for (v, &x) in vectors.iter().zip(values) {
        out = &out + &ComplexMatrix::outer(v, v).scale(C64::new(x, 0.0));
    }
    // Symmetrize away rounding so the result is exactly Hermitian.
    (&out + &out.adjoint()).scale(C64::new(0.5, 0.0))
}

/// Haar-distributed pure state on the given factor structure.
pub fn random_state<R: Rng + ?Sized>(rng: &mut R, factor_dims: &[usize]) -> PureState {
    let dim: usize = factor_dims.iter().product();
    PureState::new((0..dim).map(|_| gaussian(rng)).collect(), factor_dims.to_vec()).unwrap()
}

/// Table with independent uniform values in `[-1, 1)`.
pub fn random_function<R: Rng + ?Sized>(rng: &mut R, points: &[f64]) -> SpectrumFunction {
    SpectrumFunction::from_pairs(points.iter().map(|&x| (x, rng.random_range(-1.0..1.0))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::is_hermitian;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_matrices_are_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        assert!(is_hermitian(&random_hermitian(&mut rng, 5), 0.0));
        let m = random_with_spectrum(&mut rng, &[0.0, 1.0, 2.0]);
        assert!(is_hermitian(&m, 0.0));
        let d = spectral_decompose_default(&m).unwrap();
        for (got, want) in d.eigenvalues().iter().zip([0.0, 1.0, 2.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }
}
