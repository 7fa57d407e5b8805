//! Recursive Jarlskog factorization of SU(n) and the density-matrix
//! parametrization ρ = U* D(λ) U built on it.
//!
//! Level j (2 ≤ j ≤ n) carries an angle θⱼ ∈ [0, π/2] and a unit vector
//! zⱼ ∈ ℂ^{j−1}. The unitary is U = A₁·A₂···Aₙ with A₁ the diagonal phase
//! factor, so that Uₙ = (Uₙ₋₁ ⊕ 1)·Aₙ.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

/// Tolerance on ‖z‖ = 1, Σλ = 1 and Σα = 0.
pub const PARAM_TOL: f64 = 1e-12;

/// Largest deviation `canonicalize` repairs silently.
pub const CANONICAL_REPAIR_TOL: f64 = 1e-6;

/// Threshold below which θ (or s = sin θ) counts as zero during extraction.
const ANGLE_ZERO_TOL: f64 = 1e-14;

/// (θⱼ, zⱼ) for one level of the factorization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub theta: f64,
    pub z: Vec<Complex64>,
}

impl Level {
    pub fn identity(j: usize) -> Self {
        Self {
            theta: 0.0,
            z: unit_e1(j - 1),
        }
    }
}

/// Point of the parameter set: spectrum, one level per j = 2..n and
/// optional phases α₁..αₙ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JarlskogParams {
    pub n: usize,
    pub eigenvalues: Vec<f64>,
    pub levels: Vec<Level>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phases: Option<Vec<f64>>,
}

fn unit_e1(len: usize) -> Vec<Complex64> {
    let mut z = vec![Complex64::new(0.0, 0.0); len];
    if len > 0 {
        z[0] = Complex64::new(1.0, 0.0);
    }
    z
}

fn vec_norm(z: &[Complex64]) -> f64 {
    z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParams(msg.into())
}

impl JarlskogParams {
    /// θ = 0 at every level, no phases.
    pub fn diagonal(eigenvalues: Vec<f64>) -> Self {
        let n = eigenvalues.len();
        Self {
            n,
            eigenvalues,
            levels: (2..=n).map(Level::identity).collect(),
            phases: None,
        }
    }

    /// Level for index j (2 ≤ j ≤ n).
    pub fn level(&self, j: usize) -> &Level {
        &self.levels[j - 2]
    }

    /// Real parameters of the unitary part including the n phases: n².
    pub fn unitary_parameter_count(&self) -> usize {
        let per_level: usize = self.levels.iter().map(|l| 1 + (2 * l.z.len() - 1)).sum();
        self.n + per_level
    }

    /// Checks the unitary part: level count, θ range, unit z, Σα = 0.
    pub fn validate_unitary(&self) -> Result<()> {
        if self.n == 0 {
            return Err(invalid("n must be at least 1"));
        }
        if self.levels.len() != self.n - 1 {
            return Err(invalid(format!(
                "expected {} levels for n = {}, got {}",
                self.n - 1,
                self.n,
                self.levels.len()
            )));
        }
        for (k, level) in self.levels.iter().enumerate() {
            let j = k + 2;
            if level.z.len() != j - 1 {
                return Err(invalid(format!(
                    "level {j}: z has length {}, expected {}",
                    level.z.len(),
                    j - 1
                )));
            }
            if !(0.0..=FRAC_PI_2).contains(&level.theta) {
                return Err(invalid(format!(
                    "level {j}: theta = {} outside [0, π/2]",
                    level.theta
                )));
            }
            let norm = vec_norm(&level.z);
            if (norm - 1.0).abs() > PARAM_TOL {
                return Err(invalid(format!("level {j}: |z| = {norm}")));
            }
        }
        if let Some(phases) = &self.phases {
            if phases.len() != self.n {
                return Err(invalid(format!(
                    "expected {} phases, got {}",
                    self.n,
                    phases.len()
                )));
            }
            let sum: f64 = phases.iter().sum();
            if sum.abs() > PARAM_TOL {
                return Err(invalid(format!("phases sum to {sum}, not 0")));
            }
        }
        Ok(())
    }

    /// Full check: unitary part plus λ₁ ≥ … ≥ λₙ ≥ 0, Σλ = 1.
    pub fn validate(&self) -> Result<()> {
        self.validate_unitary()?;
        let ev = &self.eigenvalues;
        if ev.len() != self.n {
            return Err(invalid(format!(
                "expected {} eigenvalues, got {}",
                self.n,
                ev.len()
            )));
        }
        if ev.iter().any(|&x| x < -PARAM_TOL) {
            return Err(invalid("negative eigenvalue"));
        }
        if ev.windows(2).any(|w| w[1] > w[0] + PARAM_TOL) {
            return Err(invalid("eigenvalues must be sorted descending"));
        }
        let sum: f64 = ev.iter().sum();
        if (sum - 1.0).abs() > PARAM_TOL {
            return Err(invalid(format!("eigenvalues sum to {sum}, not 1")));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("params serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let p: Self = serde_json::from_str(s).map_err(|e| Error::Malformed(e.to_string()))?;
        p.validate()?;
        Ok(p)
    }
}

/// V = [[I − (1−c)|z⟩⟨z|, s|z⟩], [−s⟨z|, c]] of size j×j.
pub fn v_matrix(j: usize, theta: f64, z: &[Complex64]) -> Result<ComplexMatrix> {
    if j < 2 || z.len() != j - 1 {
        return Err(Error::DimensionMismatch(format!(
            "v_matrix of size {j} needs z of length {}, got {}",
            j.saturating_sub(1),
            z.len()
        )));
    }
    let norm = vec_norm(z);
    if (norm - 1.0).abs() > PARAM_TOL {
        return Err(Error::NotUnitVector { norm });
    }
    let (s, c) = theta.sin_cos();
    let last = j - 1;
    Ok(ComplexMatrix::from_fn(j, |r, col| {
        match (r == last, col == last) {
            (false, false) => {
                let delta = if r == col { 1.0 } else { 0.0 };
                Complex64::new(delta, 0.0) - z[r] * z[col].conj() * (1.0 - c)
            }
            (false, true) => z[r] * s,
            (true, false) => -z[col].conj() * s,
            (true, true) => Complex64::new(c, 0.0),
        }
    }))
}

/// A_{n,j} = V_j ⊕ I_{n−j}.
pub fn a_matrix(n: usize, j: usize, theta: f64, z: &[Complex64]) -> Result<ComplexMatrix> {
    if j < 2 || j > n {
        return Err(Error::IndexOutOfRange(format!(
            "Jarlskog index j = {j} outside 2..={n}"
        )));
    }
    let v = v_matrix(j, theta, z)?;
    if j == n {
        return Ok(v);
    }
    Ok(v.direct_sum(&ComplexMatrix::identity(n - j)))
}

/// diag(e^{iα₁}, …, e^{iαₙ}).
pub fn phase_matrix(alphas: &[f64]) -> ComplexMatrix {
    let d: Vec<Complex64> = alphas
        .iter()
        .map(|&a| Complex64::from_polar(1.0, a))
        .collect();
    ComplexMatrix::diag(&d)
}

/// A₂···Aₙ without the phase factor.
fn level_product(p: &JarlskogParams) -> Result<ComplexMatrix> {
    let mut u = ComplexMatrix::identity(p.n);
    for j in 2..=p.n {
        let level = p.level(j);
        u = u.matmul(&a_matrix(p.n, j, level.theta, &level.z)?);
    }
    Ok(u)
}

/// U = A₁·A₂···Aₙ ∈ SU(n).
pub fn su_from_params(p: &JarlskogParams) -> Result<ComplexMatrix> {
    p.validate_unitary()?;
    let u = level_product(p)?;
    Ok(match &p.phases {
        Some(alphas) => phase_matrix(alphas).matmul(&u),
        None => u,
    })
}

/// ρ = U* D(λ) U with U = A₂···Aₙ; the phases commute with D and drop out.
pub fn density_from_params(p: &JarlskogParams) -> Result<ComplexMatrix> {
    p.validate()?;
    let u = level_product(p)?;
    let d = ComplexMatrix::diag_real(&p.eigenvalues);
    Ok(u.adjoint().matmul(&d).matmul(&u).hermitian_part())
}

/// Aₙ* (ρ_low ⊕ λ_new) Aₙ with n = dim ρ_low + 1.
pub fn recursive_embed(
    rho_low: &ComplexMatrix,
    lambda_new: f64,
    theta: f64,
    z: &[Complex64],
) -> Result<ComplexMatrix> {
    let found = rho_low.trace().re;
    let expected = 1.0 - lambda_new;
    if (found - expected).abs() > PARAM_TOL {
        return Err(Error::TraceMismatch { expected, found });
    }
    let n = rho_low.dim() + 1;
    let a = v_matrix(n, theta, z)?;
    let block = rho_low.direct_sum(&ComplexMatrix::diag_real(&[lambda_new]));
    Ok(a.adjoint().matmul(&block).matmul(&a).hermitian_part())
}

/// Reads (θₙ, zₙ) off the last row of U and strips Aₙ, down to n = 1.
///
/// `u` must be a level product A₂···Aₙ: U_kk real and non-negative at every
/// stage. Anything else is reported as `NonCanonical`.
pub fn extract_levels(u: &ComplexMatrix, tol: f64) -> Result<Vec<Level>> {
    let n = u.dim();
    let mut levels = Vec::with_capacity(n.saturating_sub(1));
    let mut current = u.clone();
    for k in (2..=n).rev() {
        let last = k - 1;
        let corner = current[(last, last)];
        if corner.im.abs() > tol || corner.re < -tol {
            return Err(Error::NonCanonical(format!(
                "entry ({k},{k}) = {corner} is not a non-negative real"
            )));
        }
        let row: Vec<Complex64> = (0..last).map(|c| current[(last, c)]).collect();
        let s = vec_norm(&row);
        let c = corner.re.max(0.0);
        let theta = s.atan2(c);
        let z = if s < ANGLE_ZERO_TOL {
            unit_e1(last)
        } else {
            row.iter().map(|x| -x.conj() / s).collect()
        };
        let a = v_matrix(k, theta, &z)?;
        let stripped = current.matmul(&a.adjoint());
        for c in 0..last {
            if stripped[(last, c)].norm() > tol || stripped[(c, last)].norm() > tol {
                return Err(Error::NonCanonical(format!(
                    "matrix does not factor at level {k}"
                )));
            }
        }
        current = stripped.block(0, 0, last);
        levels.push(Level {
            theta: if s < ANGLE_ZERO_TOL { 0.0 } else { theta },
            z,
        });
    }
    if n > 0 && (current[(0, 0)] - Complex64::new(1.0, 0.0)).norm() > tol {
        return Err(Error::NonCanonical(format!(
            "residual phase {} after stripping all levels",
            current[(0, 0)]
        )));
    }
    levels.reverse();
    Ok(levels)
}

/// Clamps θ into [0, π/2] and renormalizes z when off by at most
/// `CANONICAL_REPAIR_TOL`; θ = 0 gets z = e₁.
pub fn canonicalize(p: &JarlskogParams) -> Result<JarlskogParams> {
    let mut out = p.clone();
    for (k, level) in out.levels.iter_mut().enumerate() {
        let j = k + 2;
        if level.theta < -CANONICAL_REPAIR_TOL || level.theta > FRAC_PI_2 + CANONICAL_REPAIR_TOL {
            return Err(invalid(format!(
                "level {j}: theta = {} outside [0, π/2]",
                level.theta
            )));
        }
        level.theta = level.theta.clamp(0.0, FRAC_PI_2);
        let norm = vec_norm(&level.z);
        if (norm - 1.0).abs() > CANONICAL_REPAIR_TOL {
            return Err(Error::NotUnitVector { norm });
        }
        for x in level.z.iter_mut() {
            *x /= norm;
        }
        if level.theta < ANGLE_ZERO_TOL {
            level.theta = 0.0;
            level.z = unit_e1(j - 1);
        }
    }
    Ok(out)
}

/// Seeded draw: λ uniform on the simplex (sorted), θ uniform on [0, π/2],
/// z a normalized complex Gaussian, α uniform on [−π, π) shifted to sum 0.
pub fn sample(n: usize, seed: u64) -> Result<JarlskogParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_with(n, &mut rng)
}

pub fn sample_with(n: usize, rng: &mut impl Rng) -> Result<JarlskogParams> {
    if n == 0 {
        return Err(invalid("n must be at least 1"));
    }
    let draws: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = draws.iter().sum();
    let mut eigenvalues: Vec<f64> = draws.iter().map(|x| x / total).collect();
    eigenvalues.sort_by(|a, b| b.total_cmp(a));

    let mut levels = Vec::with_capacity(n - 1);
    for j in 2..=n {
        let theta = rng.random_range(0.0..=FRAC_PI_2);
        let z: Vec<Complex64> = loop {
            let g: Vec<Complex64> = (0..j - 1)
                .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect();
            let norm = vec_norm(&g);
            if norm > 1e-12 {
                break g.into_iter().map(|x| x / norm).collect();
            }
        };
        levels.push(Level { theta, z });
    }

    let mut phases: Vec<f64> = (0..n)
        .map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI))
        .collect();
    let mean = phases.iter().sum::<f64>() / n as f64;
    for a in phases.iter_mut() {
        *a -= mean;
    }

    Ok(JarlskogParams {
        n,
        eigenvalues,
        levels,
        phases: Some(phases),
    })
}

/// Degeneracy pattern of a spectrum and the size of its SU(n) commutant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommutantStructure {
    /// (eigenvalue, multiplicity) in descending order.
    pub multiplicities: Vec<(f64, usize)>,
    pub block_sizes: Vec<usize>,
    /// Σ mⱼ² − 1.
    pub real_dimension: usize,
}

/// Groups eigenvalues whose neighbours differ by at most `tol`.
pub fn commutant_structure(eigenvalues: &[f64], tol: f64) -> CommutantStructure {
    let mut sorted = eigenvalues.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut clusters: Vec<Vec<f64>> = Vec::new();
    for x in sorted {
        match clusters.last_mut() {
            Some(cl) if (cl[cl.len() - 1] - x).abs() <= tol => cl.push(x),
            _ => clusters.push(vec![x]),
        }
    }
    let multiplicities: Vec<(f64, usize)> = clusters
        .iter()
        .map(|cl| (cl.iter().sum::<f64>() / cl.len() as f64, cl.len()))
        .collect();
    let block_sizes: Vec<usize> = multiplicities.iter().map(|&(_, m)| m).collect();
    let real_dimension = block_sizes
        .iter()
        .map(|m| m * m)
        .sum::<usize>()
        .saturating_sub(1);
    CommutantStructure {
        multiplicities,
        block_sizes,
        real_dimension,
    }
}
