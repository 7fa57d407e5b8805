//! Dense complex matrices and the handful of kernels the rest of the crate
//! needs: products, tensor products, partial traces, a Hermitian eigensolver
//! and functions of Hermitian matrices.

mod eigen;
mod funcs;
mod json;
mod real;

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use eigen::{hermitian_eigen, hermitian_eigen_with, EigenDecomposition, EigenOptions};
pub use funcs::{expm_skew, herm_fn, herm_fn_with, MatrixFunction};
pub use json::MatrixJson;
pub use real::RealMatrix;

/// Default tolerance for Hermiticity pre-checks.
pub const HERMITIAN_TOL: f64 = 1e-10;

pub(crate) fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Square matrix of complex entries, stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

/// Which tensor factor of a bipartite system to keep or act on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from row-major data; `data.len()` must be a perfect square.
    pub fn from_vec(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                data.len()
            )));
        }
        Ok(Self { dim, data })
    }

    /// Builds a matrix from rows, rejecting ragged input.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {dim}",
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        Ok(Self { dim, data })
    }

    /// Builds a matrix from real rows. Panics on ragged input; intended for literals.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            assert_eq!(row.len(), dim, "ragged literal matrix");
            data.extend(row.iter().map(|&x| Complex64::new(x, 0.0)));
        }
        Self { dim, data }
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    pub fn diag_real(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        m
    }

    pub fn diag(values: &[Complex64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    /// |k⟩⟨l| in dimension `dim`.
    pub fn unit(dim: usize, k: usize, l: usize) -> Self {
        let mut m = Self::zeros(dim);
        m[(k, l)] = Complex64::new(1.0, 0.0);
        m
    }

    /// |ψ⟩⟨ψ| for a column vector ψ.
    pub fn outer(psi: &[Complex64]) -> Self {
        Self::from_fn(psi.len(), |i, j| psi[i] * psi[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        self.data
            .chunks(self.dim.max(1))
            .map(|r| r.to_vec())
            .collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.dim).map(|i| self[(i, i)]).collect()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "matmul dimension mismatch");
        let n = self.dim;
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let row = &rhs.data[k * n..(k + 1) * n];
                let dst = &mut out[i * n..(i + 1) * n];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Self { dim: n, data: out }
    }

    /// Tr(self · rhs) without forming the product.
    pub fn trace_of_product(&self, rhs: &Self) -> Complex64 {
        assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for k in 0..n {
                acc += self.data[i * n + k] * rhs.data[k * n + i];
            }
        }
        acc
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::identity(self.dim);
        for _ in 0..k {
            out = out.matmul(self);
        }
        out
    }

    pub fn commutator(&self, rhs: &Self) -> Self {
        &self.matmul(rhs) - &rhs.matmul(self)
    }

    pub fn anticommutator(&self, rhs: &Self) -> Self {
        &self.matmul(rhs) + &rhs.matmul(self)
    }

    /// Kronecker product; entry ((i·dimB+k), (j·dimB+l)) = A_ij · B_kl.
    pub fn kron(&self, rhs: &Self) -> Self {
        let (da, db) = (self.dim, rhs.dim);
        Self::from_fn(da * db, |r, c| {
            self[(r / db, c / db)] * rhs[(r % db, c % db)]
        })
    }

    /// Block-diagonal embedding `blockdiag(self, rhs)`.
    pub fn direct_sum(&self, rhs: &Self) -> Self {
        let n = self.dim + rhs.dim;
        let mut out = Self::zeros(n);
        out.set_block(0, 0, self);
        out.set_block(self.dim, self.dim, rhs);
        out
    }

    /// Copies `block` into `self` with its top-left corner at (row, col).
    pub fn set_block(&mut self, row: usize, col: usize, block: &Self) {
        for i in 0..block.dim {
            for j in 0..block.dim {
                self[(row + i, col + j)] = block[(i, j)];
            }
        }
    }

    /// Square sub-block of size `size` starting at (row, col).
    pub fn block(&self, row: usize, col: usize, size: usize) -> Self {
        Self::from_fn(size, |i, j| self[(row + i, col + j)])
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Max-norm distance ‖self − other‖_max.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.dim == other.dim && self.max_abs_diff(other) <= tol
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// ‖H − H*‖_max.
    pub fn hermitian_deviation(&self) -> f64 {
        let n = self.dim;
        let mut dev: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    /// ‖X + X*‖_max.
    pub fn anti_hermitian_deviation(&self) -> f64 {
        let n = self.dim;
        let mut dev: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self[(i, j)] + self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    pub fn check_hermitian(&self, tol: f64) -> Result<()> {
        let deviation = self.hermitian_deviation();
        if deviation > tol {
            Err(Error::NotHermitian { deviation })
        } else {
            Ok(())
        }
    }

    /// ‖U*U − I‖_max.
    pub fn unitarity_deviation(&self) -> f64 {
        self.adjoint()
            .matmul(self)
            .max_abs_diff(&Self::identity(self.dim))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_deviation() <= tol
    }

    /// Determinant by LU decomposition with partial pivoting.
    pub fn determinant(&self) -> Complex64 {
        let n = self.dim;
        let mut a = self.data.clone();
        let mut det = Complex64::new(1.0, 0.0);
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&x, &y| a[x * n + col].norm().total_cmp(&a[y * n + col].norm()))
                .unwrap_or(col);
            let p = a[pivot * n + col];
            if p.norm() == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            if pivot != col {
                for j in 0..n {
                    a.swap(pivot * n + j, col * n + j);
                }
                det = -det;
            }
            det *= p;
            for r in (col + 1)..n {
                let factor = a[r * n + col] / p;
                if factor.norm() == 0.0 {
                    continue;
                }
                for j in col..n {
                    let v = a[col * n + j];
                    a[r * n + j] -= factor * v;
                }
            }
        }
        det
    }

    /// Hermitian part (H + H*)/2, used to scrub round-off asymmetry.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.dim, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }

    /// Column `j` as a vector.
    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| (0..self.dim).map(|k| self[(i, k)] * v[k]).sum())
            .collect()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for row in self.data.chunks(self.dim.max(1)) {
            let cells: Vec<String> = row
                .iter()
                .map(|z| format!("{:+.6}{:+.6}i", z.re, z.im))
                .collect();
            writeln!(f, "  {}", cells.join("  "))?;
        }
        write!(f, "]")
    }
}

impl<'a> Add<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "add dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl<'a> Sub<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "sub dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl<'a> Mul<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        self.scale_real(-1.0)
    }
}

/// Pauli matrices σ₁, σ₂, σ₃ (index 1..=3); index 0 gives I₂.
pub fn pauli(i: usize) -> ComplexMatrix {
    let o = c64(0.0, 0.0);
    let one = c64(1.0, 0.0);
    let im = c64(0.0, 1.0);
    let rows = match i {
        0 => vec![vec![one, o], vec![o, one]],
        1 => vec![vec![o, one], vec![one, o]],
        2 => vec![vec![o, -im], vec![im, o]],
        3 => vec![vec![one, o], vec![o, -one]],
        _ => panic!("pauli index must be 0..=3, got {i}"),
    };
    ComplexMatrix::from_rows(&rows).expect("2x2 literal")
}

/// Partial trace of a `dim_a·dim_b` matrix, keeping subsystem `keep`.
pub fn partial_trace(
    rho: &ComplexMatrix,
    dim_a: usize,
    dim_b: usize,
    keep: Subsystem,
) -> Result<ComplexMatrix> {
    if rho.dim() != dim_a * dim_b {
        return Err(Error::DimensionMismatch(format!(
            "matrix is {0}x{0}, expected {1}x{1} for {dim_a}⊗{dim_b}",
            rho.dim(),
            dim_a * dim_b
        )));
    }
    let out = match keep {
        Subsystem::A => ComplexMatrix::from_fn(dim_a, |i, j| {
            (0..dim_b)
                .map(|k| rho[(i * dim_b + k, j * dim_b + k)])
                .sum()
        }),
        Subsystem::B => ComplexMatrix::from_fn(dim_b, |k, l| {
            (0..dim_a)
                .map(|i| rho[(i * dim_b + k, i * dim_b + l)])
                .sum()
        }),
    };
    Ok(out)
}

/// Partial transpose of a `dim_a·dim_b` matrix on the chosen factor.
pub fn partial_transpose(
    rho: &ComplexMatrix,
    dim_a: usize,
    dim_b: usize,
    side: Subsystem,
) -> Result<ComplexMatrix> {
    if rho.dim() != dim_a * dim_b {
        return Err(Error::DimensionMismatch(format!(
            "matrix is {0}x{0}, expected {1}x{1} for {dim_a}⊗{dim_b}",
            rho.dim(),
            dim_a * dim_b
        )));
    }
    Ok(ComplexMatrix::from_fn(dim_a * dim_b, |r, c| {
        let (i, k) = (r / dim_b, r % dim_b);
        let (j, l) = (c / dim_b, c % dim_b);
        match side {
            Subsystem::B => rho[(i * dim_b + l, j * dim_b + k)],
            Subsystem::A => rho[(j * dim_b + k, i * dim_b + l)],
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{random_density, random_hermitian, rng};

    #[test]
    fn kron_with_identity_is_block_diagonal() {
        let k = pauli(0).kron(&pauli(1));
        let expected = pauli(1).direct_sum(&pauli(1));
        assert!(k.approx_eq(&expected, 0.0));
    }

    #[test]
    fn kron_sigma_z_identity_is_diagonal() {
        let k = pauli(3).kron(&pauli(0));
        assert!(k.approx_eq(&ComplexMatrix::diag_real(&[1.0, 1.0, -1.0, -1.0]), 0.0));
    }

    #[test]
    fn kron_sigma1_sigma1_matches_hand_expansion() {
        // σ₁⊗σ₁ is the anti-diagonal of ones; it is the x-coefficient pattern of
        // the Werner expansion entries (1,4),(2,3),(3,2),(4,1).
        let k = pauli(1).kron(&pauli(1));
        let mut expected = ComplexMatrix::zeros(4);
        for i in 0..4 {
            expected[(i, 3 - i)] = c64(1.0, 0.0);
        }
        assert!(k.approx_eq(&expected, 0.0));
    }

    #[test]
    fn partial_trace_of_product_state() {
        let mut r = rng(3);
        let a = random_density(2, &mut r);
        let b = random_density(3, &mut r);
        let ab = a.kron(&b);
        let ra = partial_trace(&ab, 2, 3, Subsystem::A).unwrap();
        let rb = partial_trace(&ab, 2, 3, Subsystem::B).unwrap();
        assert!(ra.approx_eq(&a, 1e-15));
        assert!(rb.approx_eq(&b, 1e-15));
    }

    #[test]
    fn partial_trace_of_maximally_mixed() {
        let rho = ComplexMatrix::identity(4).scale_real(0.25);
        let rb = partial_trace(&rho, 2, 2, Subsystem::B).unwrap();
        assert!(rb.approx_eq(&ComplexMatrix::identity(2).scale_real(0.5), 0.0));
    }

    #[test]
    fn partial_trace_rejects_bad_dims() {
        let rho = ComplexMatrix::identity(5);
        assert!(matches!(
            partial_trace(&rho, 2, 2, Subsystem::A),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn partial_trace_scales_by_trace_of_other_factor() {
        let mut r = rng(17);
        for da in 1..=3 {
            for db in 1..=3 {
                let a = random_hermitian(da, &mut r);
                let b = random_hermitian(db, &mut r);
                let ra = partial_trace(&a.kron(&b), da, db, Subsystem::A).unwrap();
                let expected = a.scale(b.trace());
                assert!(ra.max_abs_diff(&expected) < 1e-14);
            }
        }
    }

    #[test]
    fn partial_transpose_is_involution_and_trace_preserving() {
        let mut r = rng(5);
        let rho = random_density(6, &mut r);
        for side in [Subsystem::A, Subsystem::B] {
            let pt = partial_transpose(&rho, 2, 3, side).unwrap();
            assert!((pt.trace() - rho.trace()).norm() < 1e-15);
            let back = partial_transpose(&pt, 2, 3, side).unwrap();
            assert!(back.approx_eq(&rho, 0.0));
        }
        // transposing both factors is the full transpose
        let both = partial_transpose(
            &partial_transpose(&rho, 2, 3, Subsystem::A).unwrap(),
            2,
            3,
            Subsystem::B,
        )
        .unwrap();
        assert!(both.approx_eq(&rho.transpose(), 0.0));
    }

    #[test]
    fn determinant_of_pauli_and_products() {
        assert!((pauli(1).determinant() - c64(-1.0, 0.0)).norm() < 1e-15);
        assert!((pauli(2).determinant() - c64(-1.0, 0.0)).norm() < 1e-15);
        let mut r = rng(9);
        let a = random_hermitian(4, &mut r);
        let b = random_hermitian(4, &mut r);
        let lhs = a.matmul(&b).determinant();
        let rhs = a.determinant() * b.determinant();
        assert!((lhs - rhs).norm() < 1e-10 * (1.0 + rhs.norm()));
    }

    #[test]
    fn from_rows_rejects_ragged() {
        let rows = vec![vec![c64(1.0, 0.0), c64(0.0, 0.0)], vec![c64(1.0, 0.0)]];
        assert!(ComplexMatrix::from_rows(&rows).is_err());
    }
}
