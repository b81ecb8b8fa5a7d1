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

//! Dense complex matrices, Kronecker products, commutators and Hermitian
//! spectral decomposition with degeneracy grouping.
//!
//! Matrices are stored row-major. Everything here is sized for the small
//! systems this crate deals with (dimension at most 64); no attempt is made
//! at blocking or sparsity.

use std::fmt;
use std::ops::{Add, Index, Mul, Sub};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Relative hermiticity tolerance, scaled by `max(1, ‖M‖_max)`.
pub const HERMITICITY_RTOL: f64 = 1e-10;

/// Relative degeneracy grouping tolerance, scaled by `max(1, spectral radius)`.
pub const GROUPING_RTOL: f64 = 1e-9;

/// Components smaller than this are skipped when fixing eigenvector phases.
const PHASE_PIVOT: f64 = 1e-8;

/// Dense complex matrix in row-major order.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidMatrix("dimensions must be positive".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::InvalidMatrix(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidMatrix("non-finite entry".into()));
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    /// Build from nested rows; every row must have the same length.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let ncols = rows.first().map(Vec::len).unwrap_or(0);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::InvalidMatrix("ragged rows".into()));
        }
        Self::new(rows.len(), ncols, rows.concat())
    }

    /// Build from nested rows of real numbers.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = C64::new(d, 0.0);
        }
        m
    }

    /// The rank-one operator `|u⟩⟨v|`.
    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        let mut data = Vec::with_capacity(u.len() * v.len());
        for ui in u {
            for vj in v {
                data.push(ui * vj.conj());
            }
        }
        ComplexMatrix { rows: u.len(), cols: v.len(), data }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<C64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn adjoint(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self[(i, j)].conj());
            }
        }
        ComplexMatrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, c: C64) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * c).collect(),
        }
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `max |self - other|` over entries; infinite when the shapes differ.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                context: "matrix product",
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self[(i, k)];
                if aik == ZERO {
                    continue;
                }
                let orow = other.row(k);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, b) in dst.iter_mut().zip(orow) {
                    *d += aik * b;
                }
            }
        }
        Ok(out)
    }

    fn zip_with(&self, other: &Self, context: &'static str, f: impl Fn(C64, C64) -> C64) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                context,
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        Ok(ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "matrix sum", |a, b| a + b)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "matrix difference", |a, b| a - b)
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                context: "matrix-vector product",
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// The quadratic form `⟨v|M|v⟩`.
    pub fn expectation(&self, v: &[C64]) -> Result<C64> {
        let mv = self.apply(v)?;
        Ok(inner(v, &mv))
    }

    /// `max |M - M^H|`; infinite for non-square input.
    pub fn hermiticity_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Default hermiticity tolerance: `1e-10 * max(1, ‖M‖_max)`.
    pub fn hermiticity_tolerance(&self) -> f64 {
        HERMITICITY_RTOL * self.max_abs().max(1.0)
    }

    fn to_nalgebra(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for z in self.row(i) {
                write!(f, "{:>+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

// Operator forms panic on shape mismatch; use the checked_* methods for
// fallible code paths.
impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.checked_add(rhs).expect("matrix shapes differ")
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.checked_sub(rhs).expect("matrix shapes differ")
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs).expect("inner dimensions differ")
    }
}

/// `⟨u|v⟩`, antilinear in the first argument.
pub fn inner(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

pub fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Kronecker product of two vectors, first factor as the slow index.
pub fn kron_vec(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}

/// Kronecker product `a ⊗ b` with `a` as the slow (block) index:
/// entry `(i1*rb + i2, j1*cb + j2)` is `a[i1,j1] * b[i2,j2]`.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    let mut data = vec![ZERO; rows * cols];
    for i1 in 0..a.rows {
        for j1 in 0..a.cols {
            let x = a[(i1, j1)];
            if x == ZERO {
                continue;
            }
            for i2 in 0..b.rows {
                let r = i1 * b.rows + i2;
                for j2 in 0..b.cols {
                    data[r * cols + j1 * b.cols + j2] = x * b[(i2, j2)];
                }
            }
        }
    }
    ComplexMatrix { rows, cols, data }
}

/// `AB - BA`.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !a.is_square() || !b.is_square() {
        return Err(Error::InvalidMatrix("commutator needs square matrices".into()));
    }
    if a.rows != b.rows {
        return Err(Error::DimensionMismatch {
            context: "commutator",
            expected: a.rows,
            found: b.rows,
        });
    }
    a.matmul(b)?.checked_sub(&b.matmul(a)?)
}

/// Recover `C` from `[A, B] = iαC`.
pub fn extract_c(a: &ComplexMatrix, b: &ComplexMatrix, alpha: f64) -> Result<ComplexMatrix> {
    if alpha == 0.0 || !alpha.is_finite() {
        return Err(Error::ZeroAlpha);
    }
    for m in [a, b] {
        let tolerance = m.hermiticity_tolerance();
        let residual = m.hermiticity_residual();
        if residual > tolerance {
            return Err(Error::NotHermitian { residual, tolerance });
        }
    }
    // 1/(iα) = -i/α
    Ok(commutator(a, b)?.scale(C64::new(0.0, -1.0 / alpha)))
}

/// `true` iff `‖M - M^H‖_max <= tol`. Non-square matrices are never Hermitian.
pub fn is_hermitian(m: &ComplexMatrix, tol: f64) -> bool {
    m.hermiticity_residual() <= tol
}

/// One eigenvalue of a Hermitian matrix together with its eigenspace.
#[derive(Clone, Debug)]
pub struct SpectralLine {
    eigenvalue: f64,
    projector: ComplexMatrix,
    basis: Vec<Vec<C64>>,
}

impl SpectralLine {
    /// Assemble a line from an orthonormal basis of the eigenspace.
    pub(crate) fn from_basis(eigenvalue: f64, basis: Vec<Vec<C64>>) -> Self {
        let dim = basis[0].len();
        let mut projector = ComplexMatrix::zeros(dim, dim);
        for v in &basis {
            for (i, vi) in v.iter().enumerate() {
                if *vi == ZERO {
                    continue;
                }
                for (j, vj) in v.iter().enumerate() {
                    projector.data[i * dim + j] += vi * vj.conj();
                }
            }
        }
        SpectralLine { eigenvalue, projector, basis }
    }

    pub fn eigenvalue(&self) -> f64 {
        self.eigenvalue
    }

    /// Dimension of the eigenspace.
    pub fn multiplicity(&self) -> usize {
        self.basis.len()
    }

    pub fn projector(&self) -> &ComplexMatrix {
        &self.projector
    }

    /// Orthonormal eigenvectors spanning the eigenspace (phase-fixed).
    pub fn basis(&self) -> &[Vec<C64>] {
        &self.basis
    }
}

/// Spectral resolution `H = Σ_k λ_k Π_k` with eigenvalues strictly increasing.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    lines: Vec<SpectralLine>,
    source_dim: usize,
    grouping_tol: f64,
}

impl SpectralDecomposition {
    pub(crate) fn from_lines(lines: Vec<SpectralLine>, source_dim: usize, grouping_tol: f64) -> Self {
        debug_assert!(lines.windows(2).all(|w| w[0].eigenvalue < w[1].eigenvalue));
        debug_assert_eq!(lines.iter().map(SpectralLine::multiplicity).sum::<usize>(), source_dim);
        SpectralDecomposition { lines, source_dim, grouping_tol }
    }

    pub fn lines(&self) -> &[SpectralLine] {
        &self.lines
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn grouping_tol(&self) -> f64 {
        self.grouping_tol
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.lines.iter().map(|l| l.eigenvalue).collect()
    }

    pub fn multiplicities(&self) -> Vec<usize> {
        self.lines.iter().map(SpectralLine::multiplicity).collect()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.lines.iter().all(|l| l.multiplicity() == 1)
    }

    /// Index of the line whose eigenvalue is within the grouping tolerance of `value`.
    pub fn find(&self, value: f64) -> Option<usize> {
        let tol = self.grouping_tol.max(f64::EPSILON);
        self.lines
            .iter()
            .enumerate()
            .map(|(k, l)| (k, (l.eigenvalue - value).abs()))
            .filter(|&(_, d)| d <= tol)
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(k, _)| k)
    }

    /// `Σ_k λ_k Π_k`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.lines.iter().fold(ComplexMatrix::zeros(self.source_dim, self.source_dim), |acc, l| {
            &acc + &l.projector.scale(C64::new(l.eigenvalue, 0.0))
        })
    }

    /// `Σ_k g(λ_k) Π_k`.
    pub fn apply_function(&self, g: impl Fn(f64) -> f64) -> ComplexMatrix {
        self.lines.iter().fold(ComplexMatrix::zeros(self.source_dim, self.source_dim), |acc, l| {
            &acc + &l.projector.scale(C64::new(g(l.eigenvalue), 0.0))
        })
    }
}

/// Decompose a Hermitian matrix, merging raw eigenvalues whose consecutive gaps
/// are below `grouping_tol`.
pub fn spectral_decompose(h: &ComplexMatrix, grouping_tol: f64) -> Result<SpectralDecomposition> {
    decompose(h, Some(grouping_tol))
}

/// As [`spectral_decompose`], with the grouping tolerance set to
/// `1e-9 * max(1, spectral radius)`.
pub fn spectral_decompose_default(h: &ComplexMatrix) -> Result<SpectralDecomposition> {
    decompose(h, None)
}

fn decompose(h: &ComplexMatrix, grouping_tol: Option<f64>) -> Result<SpectralDecomposition> {
    if !h.is_square() {
        return Err(Error::InvalidMatrix("spectral decomposition needs a square matrix".into()));
    }
    let tolerance = h.hermiticity_tolerance();
    let residual = h.hermiticity_residual();
    if residual > tolerance {
        return Err(Error::NotHermitian { residual, tolerance });
    }
    let n = h.rows;
    let sym = (&h.to_nalgebra() + h.to_nalgebra().adjoint()) * C64::new(0.5, 0.0);
    let eig = SymmetricEigen::try_new(sym, f64::EPSILON, 0).ok_or(Error::EigenSolver)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));

    let radius = eig.eigenvalues.iter().fold(0.0f64, |r, x| r.max(x.abs()));
    let tol = grouping_tol.unwrap_or(GROUPING_RTOL * radius.max(1.0));

    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut last = f64::NEG_INFINITY;
    for &i in &order {
        let value = eig.eigenvalues[i];
        match groups.last_mut() {
            Some(g) if value - last < tol => g.push(i),
            _ => groups.push(vec![i]),
        }
        last = value;
    }

    let lines = groups
        .into_iter()
        .map(|g| {
            let eigenvalue = g.iter().map(|&i| eig.eigenvalues[i]).sum::<f64>() / g.len() as f64;
            let basis = g
                .iter()
                .map(|&i| {
                    let mut v: Vec<C64> = eig.eigenvectors.column(i).iter().copied().collect();
                    fix_phase(&mut v);
                    v
                })
                .collect();
            SpectralLine::from_basis(eigenvalue, basis)
        })
        .collect();

    Ok(SpectralDecomposition::from_lines(lines, n, tol))
}

/// Rotate `v` so its first component of modulus above 1e-8 is real and positive.
pub fn fix_phase(v: &mut [C64]) {
    if let Some(pivot) = v.iter().find(|z| z.norm() > PHASE_PIVOT).copied() {
        let rot = pivot.conj() / pivot.norm();
        for z in v.iter_mut() {
            *z *= rot;
        }
    }
}

/// Singular values of a matrix, in no particular order.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    m.to_nalgebra().singular_values().iter().copied().collect()
}

/// The Pauli matrices σx, σy, σz.
pub mod pauli {
    use super::{ComplexMatrix, C64, I, ONE, ZERO};

    pub fn x() -> ComplexMatrix {
        ComplexMatrix::from_rows(&[vec![ZERO, ONE], vec![ONE, ZERO]]).unwrap()
    }

    pub fn y() -> ComplexMatrix {
        ComplexMatrix::from_rows(&[vec![ZERO, -I], vec![I, ZERO]]).unwrap()
    }

    pub fn z() -> ComplexMatrix {
        ComplexMatrix::from_rows(&[vec![ONE, ZERO], vec![ZERO, C64::new(-1.0, 0.0)]]).unwrap()
    }
}
