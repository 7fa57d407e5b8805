//! Bloch-vector parametrization ρ = I/n + ½ Σ λⱼ λ̂ⱼ and the positivity
//! test through the coefficients of det(x·I − ρ) = Σ (−1)ʲ aⱼ xⁿ⁻ʲ.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, HERMITIAN_TOL};
use crate::su_basis::{BasisOrdering, BasisSet};

/// Default tolerance for aⱼ ≥ −ε.
pub const DEFAULT_EPS: f64 = 1e-9;

/// Real coordinates of a (possibly non-physical) unit-trace Hermitian matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    pub n: usize,
    pub basis: BasisOrdering,
    pub components: Vec<f64>,
}

impl BlochVector {
    pub fn new(n: usize, basis: BasisOrdering, components: Vec<f64>) -> Result<Self> {
        if n < 2 || components.len() != n * n - 1 {
            return Err(Error::DimensionMismatch(format!(
                "a Bloch vector for n = {n} needs n²−1 components, got {}",
                components.len()
            )));
        }
        Ok(Self {
            n,
            basis,
            components,
        })
    }

    pub fn zeros(n: usize, basis: BasisOrdering) -> Self {
        Self {
            n,
            basis,
            components: vec![0.0; n * n - 1],
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.components.iter().map(|x| x * x).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a * b)
            .sum()
    }

    /// Radius of the pure-state sphere, √(2(n−1)/n).
    pub fn pure_radius(n: usize) -> f64 {
        (2.0 * (n as f64 - 1.0) / n as f64).sqrt()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("Bloch vector serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let v: Self = serde_json::from_str(s).map_err(|e| Error::Malformed(e.to_string()))?;
        Self::new(v.n, v.basis, v.components)
    }
}

/// a₀..aₙ of the characteristic polynomial (a₀ = 1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharCoeffs {
    pub a: Vec<f64>,
}

impl CharCoeffs {
    /// aⱼ for j ≥ 1 all at least −ε.
    pub fn all_nonnegative(&self, eps: f64) -> bool {
        self.a.iter().skip(1).all(|&x| x >= -eps)
    }

    pub fn get(&self, j: usize) -> f64 {
        self.a.get(j).copied().unwrap_or(0.0)
    }
}

/// Verdict of a positivity test together with the coefficients that decided it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Physicality {
    pub physical: bool,
    pub coeffs: CharCoeffs,
}

fn check_basis(v: &BlochVector, basis: &BasisSet) -> Result<()> {
    if v.n != basis.n() || v.basis != basis.ordering() || v.components.len() != basis.len() {
        return Err(Error::BasisMismatch(format!(
            "vector is (n = {}, {}), basis is (n = {}, {})",
            v.n,
            v.basis,
            basis.n(),
            basis.ordering()
        )));
    }
    Ok(())
}

/// ρ = I/n + ½ Σ λⱼ λ̂ⱼ. Positivity is not checked.
pub fn to_density(v: &BlochVector, basis: &BasisSet) -> Result<ComplexMatrix> {
    check_basis(v, basis)?;
    let n = v.n;
    let mut rho = basis.combine(&v.components)?;
    for i in 0..n {
        rho[(i, i)] += Complex64::new(1.0 / n as f64, 0.0);
    }
    Ok(rho)
}

/// λⱼ = Tr(ρ λ̂ⱼ).
pub fn from_density(rho: &ComplexMatrix, basis: &BasisSet) -> Result<BlochVector> {
    if rho.dim() != basis.n() {
        return Err(Error::NotDensityShape(format!(
            "matrix is {0}x{0}, basis has n = {1}",
            rho.dim(),
            basis.n()
        )));
    }
    let dev = rho.hermitian_deviation();
    if dev > HERMITIAN_TOL {
        return Err(Error::NotDensityShape(format!(
            "not Hermitian (deviation {dev:.3e})"
        )));
    }
    let tr = rho.trace();
    if (tr - Complex64::new(1.0, 0.0)).norm() > HERMITIAN_TOL {
        return Err(Error::NotDensityShape(format!("trace is {tr}, expected 1")));
    }
    let components = basis.expand(rho)?;
    BlochVector::new(basis.n(), basis.ordering(), components)
}

/// Pure qubit state cos ϑ|0⟩ + e^{iφ} sin ϑ|1⟩ as a projector.
pub fn pure_qubit(theta: f64, phi: f64) -> ComplexMatrix {
    let (s, c) = theta.sin_cos();
    let e = Complex64::from_polar(1.0, phi);
    ComplexMatrix::from_rows(&[
        vec![Complex64::new(c * c, 0.0), e.conj() * (c * s)],
        vec![e * (c * s), Complex64::new(s * s, 0.0)],
    ])
    .expect("2x2 literal")
}

/// (a ⊙ b)ₖ = Σ g_ijk aᵢ bⱼ.
pub fn star(a: &BlochVector, b: &BlochVector, basis: &BasisSet) -> Result<BlochVector> {
    check_basis(a, basis)?;
    check_basis(b, basis)?;
    let mut out = vec![0.0; basis.len()];
    for e in basis.g().expanded() {
        out[e.k] += e.value * a.components[e.i] * b.components[e.j];
    }
    BlochVector::new(a.n, a.basis, out)
}

/// a₁..a_jmax from the closed polynomial forms in |λ|², λ·(λ⊙λ) and |λ⊙λ|².
pub fn char_coeffs_closed(v: &BlochVector, basis: &BasisSet, jmax: usize) -> Result<CharCoeffs> {
    if jmax > 4 {
        return Err(Error::InvalidParams(format!(
            "closed forms exist only up to j = 4, got {jmax}"
        )));
    }
    check_basis(v, basis)?;
    let n = v.n as f64;
    let l2 = v.norm_sqr();
    let w = star(v, v, basis)?;
    let cubic = v.dot(&w);
    let w2 = w.norm_sqr();
    let all = [
        1.0,
        1.0,
        ((n - 1.0) / n - 0.5 * l2) / 2.0,
        ((n - 1.0) * (n - 2.0) / (n * n) - 3.0 * (n - 2.0) / (2.0 * n) * l2 + 0.5 * cubic) / 6.0,
        ((n - 1.0) * (n - 2.0) * (n - 3.0) / (n * n * n)
            - 3.0 * (n - 2.0) * (n - 3.0) / (n * n) * l2
            + 3.0 * (n - 2.0) / (4.0 * n) * l2 * l2
            + 2.0 * (n - 3.0) / n * cubic
            - 0.75 * w2)
            / 24.0,
    ];
    Ok(CharCoeffs {
        a: all[..=jmax].to_vec(),
    })
}

/// Position in the three-level basis of each generator in the conventional
/// Gell-Mann order (sym12, anti12, diag, sym13, anti13, sym23, anti23, diag8).
const GELLMANN_CONVENTIONAL: [usize; 8] = [0, 3, 6, 1, 4, 2, 5, 7];

/// a₃ for n = 3 from the expanded cubic polynomial with the su(3) constants
/// inserted by hand. Accepts the three-level basis or ggm(3), which coincide.
pub fn a3_explicit_su3(v: &BlochVector) -> Result<f64> {
    if v.n != 3 || !matches!(v.basis, BasisOrdering::Ggm | BasisOrdering::PaperGellMann3) {
        return Err(Error::BasisMismatch(format!(
            "explicit a₃ needs an n = 3 Gell-Mann vector, got (n = {}, {})",
            v.n, v.basis
        )));
    }
    let mut l = [0.0; 9];
    for (k, &src) in GELLMANN_CONVENTIONAL.iter().enumerate() {
        l[k + 1] = v.components[src];
    }
    let r3 = 3f64.sqrt();
    let norm2: f64 = l[1..].iter().map(|x| x * x).sum();
    let sq = |i: usize| l[i] * l[i];
    let body = 8.0 - 18.0 * norm2 + 27.0 * l[3] * (sq(4) + sq(5) - sq(6) - sq(7))
        - 6.0 * r3 * l[8].powi(3)
        + 9.0 * r3 * l[8] * (2.0 * (sq(1) + sq(2) + sq(3)) - (sq(4) + sq(5) + sq(6) + sq(7)))
        + 54.0
            * (l[1] * l[4] * l[6] + l[1] * l[5] * l[7] + l[2] * l[5] * l[6] - l[2] * l[4] * l[7]);
    Ok(body / 36.0 / 6.0)
}

/// Power sums Tr(ρᵐ) for m = 1..=kmax.
pub fn power_traces(rho: &ComplexMatrix, kmax: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(kmax);
    let mut p = rho.clone();
    for m in 1..=kmax {
        if m > 1 {
            p = p.matmul(rho);
        }
        out.push(p.trace().re);
    }
    out
}

/// Coefficients from power sums via k·aₖ = Σₘ (−1)^{m−1} a_{k−m} pₘ.
pub fn coeffs_from_power_traces(p: &[f64]) -> CharCoeffs {
    let mut a = vec![1.0];
    for k in 1..=p.len() {
        let mut acc = 0.0;
        for m in 1..=k {
            let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
            acc += sign * a[k - m] * p[m - 1];
        }
        a.push(acc / k as f64);
    }
    CharCoeffs { a }
}

/// All a₀..aₙ of a Hermitian matrix from its power traces.
pub fn char_coeffs_newton(rho: &ComplexMatrix) -> Result<CharCoeffs> {
    rho.check_hermitian(HERMITIAN_TOL)?;
    Ok(coeffs_from_power_traces(&power_traces(rho, rho.dim())))
}

/// aⱼ ≥ −ε for j = 1..n.
pub fn is_physical(rho: &ComplexMatrix, eps: f64) -> Result<Physicality> {
    let coeffs = char_coeffs_newton(rho)?;
    Ok(Physicality {
        physical: coeffs.all_nonnegative(eps),
        coeffs,
    })
}

pub fn is_physical_bloch(v: &BlochVector, basis: &BasisSet, eps: f64) -> Result<Physicality> {
    is_physical(&to_density(v, basis)?, eps)
}

/// Tr(ρᵏ) by matrix powers.
pub fn trace_invariant(rho: &ComplexMatrix, k: u32) -> f64 {
    rho.pow(k).trace().re
}

/// Tr(ρᵏ) from the Bloch vector; closed forms for k ≤ 4, matrix powers beyond.
pub fn trace_invariant_bloch(v: &BlochVector, basis: &BasisSet, k: u32) -> Result<f64> {
    check_basis(v, basis)?;
    if k == 0 {
        return Err(Error::InvalidParams(
            "trace invariant order must be ≥ 1".into(),
        ));
    }
    let n = v.n as f64;
    let l2 = v.norm_sqr();
    let value = match k {
        1 => 1.0,
        2 => 1.0 / n + 0.5 * l2,
        3 | 4 => {
            let w = star(v, v, basis)?;
            let cubic = v.dot(&w);
            if k == 3 {
                1.0 / (n * n) + 1.5 / n * l2 + 0.25 * cubic
            } else {
                1.0 / (n * n * n)
                    + 3.0 / (n * n) * l2
                    + cubic / n
                    + l2 * l2 / (4.0 * n)
                    + w.norm_sqr() / 8.0
            }
        }
        _ => trace_invariant(&to_density(v, basis)?, k),
    };
    Ok(value)
}
