//! Cyclic complex Jacobi eigensolver for Hermitian matrices.

use num_complex::Complex64;

use super::{ComplexMatrix, HERMITIAN_TOL};
use crate::error::{Error, Result};

/// Tuning knobs for [`hermitian_eigen_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenOptions {
    /// Max-norm tolerance for the Hermiticity pre-check.
    pub hermitian_tol: f64,
    pub max_sweeps: usize,
    /// Off-diagonal Frobenius threshold, relative to ‖H‖_F.
    pub rel_threshold: f64,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self {
            hermitian_tol: HERMITIAN_TOL,
            max_sweeps: 100,
            rel_threshold: 1e-14,
        }
    }
}

/// Eigenvalues sorted descending with matching orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    /// V · diag(eigenvalues) · V*.
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.reassemble(|x| x)
    }

    /// V · diag(f(eigenvalues)) · V*.
    pub fn reassemble(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let mapped: Vec<Complex64> = self
            .eigenvalues
            .iter()
            .map(|&x| Complex64::new(f(x), 0.0))
            .collect();
        self.reassemble_complex(&mapped)
    }

    pub(crate) fn reassemble_complex(&self, values: &[Complex64]) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let n = v.dim();
        ComplexMatrix::from_fn(n, |i, j| {
            (0..n)
                .map(|k| v[(i, k)] * values[k] * v[(j, k)].conj())
                .sum()
        })
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }
}

/// Diagonalizes a Hermitian matrix with default options.
pub fn hermitian_eigen(h: &ComplexMatrix) -> Result<EigenDecomposition> {
    hermitian_eigen_with(h, &EigenOptions::default())
}

pub fn hermitian_eigen_with(h: &ComplexMatrix, opts: &EigenOptions) -> Result<EigenDecomposition> {
    h.check_hermitian(opts.hermitian_tol)?;
    let n = h.dim();
    let mut a = h.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let threshold = opts.rel_threshold * h.frobenius_norm();

    let mut converged = false;
    for _ in 0..opts.max_sweeps {
        if off_diagonal_norm(&a) <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged && off_diagonal_norm(&a) > threshold {
        return Err(Error::NoConvergence {
            sweeps: opts.max_sweeps,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[(y, y)].re.total_cmp(&a[(x, x)].re));
    let eigenvalues = order.iter().map(|&k| a[(k, k)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, |i, j| v[(i, order[j])]);
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Zeroes a_pq with the unitary rotation J (J_pp = c, J_pq = s·e^{iφ},
/// J_qp = −s·e^{−iφ}, J_qq = c), applying A ← J*AJ and V ← VJ.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let phase = apq / mag;
    let tau = (a[(q, q)].re - a[(p, p)].re) / (2.0 * mag);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let jpq = phase * s;
    let jqp = -phase.conj() * s;
    let n = a.dim();

    // A ← A J (columns p, q)
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c + akq * jqp;
        a[(k, q)] = akp * jpq + akq * c;
    }
    // A ← J* A (rows p, q)
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c + aqk * jqp.conj();
        a[(q, k)] = apk * jpq.conj() + aqk * c;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)].im = 0.0;
    a[(q, q)].im = 0.0;

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c + vkq * jqp;
        v[(k, q)] = vkp * jpq + vkq * c;
    }
}
