use num_complex::Complex64;

use super::eigen::{hermitian_eigen_with, EigenOptions};
use super::{ComplexMatrix, HERMITIAN_TOL};
use crate::error::{Error, Result};

/// Scalar functions that can be lifted to Hermitian matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixFunction {
    Sqrt,
    Cos,
    Sin,
    Exp,
}

impl MatrixFunction {
    fn apply(self, x: f64) -> f64 {
        match self {
            Self::Sqrt => x.max(0.0).sqrt(),
            Self::Cos => x.cos(),
            Self::Sin => x.sin(),
            Self::Exp => x.exp(),
        }
    }
}

/// f(H) through the spectral decomposition of H.
pub fn herm_fn(h: &ComplexMatrix, f: MatrixFunction) -> Result<ComplexMatrix> {
    herm_fn_with(h, f, HERMITIAN_TOL)
}

/// As [`herm_fn`], with an explicit tolerance for the Hermiticity and
/// (for `Sqrt`) positivity checks.
pub fn herm_fn_with(h: &ComplexMatrix, f: MatrixFunction, tol: f64) -> Result<ComplexMatrix> {
    let opts = EigenOptions {
        hermitian_tol: tol,
        ..Default::default()
    };
    let eig = hermitian_eigen_with(h, &opts)?;
    if f == MatrixFunction::Sqrt {
        let min = eig.min_eigenvalue();
        if min < -tol {
            return Err(Error::NegativeEigenvalue { value: min });
        }
    }
    Ok(eig.reassemble(|x| f.apply(x)).hermitian_part())
}

/// e^X for anti-Hermitian X. With H = iX Hermitian, e^X = V diag(e^{−iμ}) V*.
pub fn expm_skew(x: &ComplexMatrix) -> Result<ComplexMatrix> {
    let deviation = x.anti_hermitian_deviation();
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotAntiHermitian { deviation });
    }
    let h = x.scale(Complex64::new(0.0, 1.0)).hermitian_part();
    let eig = hermitian_eigen_with(&h, &EigenOptions::default())?;
    let phases: Vec<Complex64> = eig
        .eigenvalues
        .iter()
        .map(|&mu| Complex64::from_polar(1.0, -mu))
        .collect();
    Ok(eig.reassemble_complex(&phases))
}
