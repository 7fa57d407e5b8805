//! Block Jarlskog parametrization of n⊗m density matrices and the 2⊗2 and
//! 2⊗m example families built from it.
//!
//! ρ is viewed as an n×n matrix of m×m blocks. Level j carries j−1 blocks
//! Z_{1,j}..Z_{j−1,j}; the local unitaries U_k rotate the eigenvalue
//! segments into the diagonal blocks Λ_k = U_k* D(λ segment) U_k.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::matrix::{expm_skew, herm_fn, hermitian_eigen, pauli, ComplexMatrix, MatrixFunction};

/// Tolerance on trace normalization and unitarity of the inputs.
pub const COMPOSITE_TOL: f64 = 1e-12;

/// Positivity slack for the blocks Λ_k.
pub const BLOCK_PSD_TOL: f64 = 1e-10;

/// Slack for the commutation assumptions of the Toeplitz/Hankel forms.
pub const COMMUTE_TOL: f64 = 1e-10;

/// Eigenvalues, local unitaries and level blocks of an n⊗m state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompositeParams {
    pub n: usize,
    pub m: usize,
    /// nm values; segment k feeds Λ_k.
    pub eigenvalues: Vec<f64>,
    pub local_unitaries: Vec<ComplexMatrix>,
    /// levels[j−2] holds Z_{1,j}..Z_{j−1,j}.
    pub levels: Vec<Vec<ComplexMatrix>>,
}

fn shape_err(msg: impl Into<String>) -> Error {
    Error::BlockShapeMismatch(msg.into())
}

fn check_levels(n: usize, m: usize, levels: &[Vec<ComplexMatrix>]) -> Result<()> {
    if levels.len() != n.saturating_sub(1) {
        return Err(shape_err(format!(
            "expected {} levels for n = {n}, got {}",
            n.saturating_sub(1),
            levels.len()
        )));
    }
    for (k, blocks) in levels.iter().enumerate() {
        let j = k + 2;
        if blocks.len() != j - 1 {
            return Err(shape_err(format!(
                "level {j} needs {} blocks, got {}",
                j - 1,
                blocks.len()
            )));
        }
        if let Some(b) = blocks.iter().find(|b| b.dim() != m) {
            return Err(shape_err(format!(
                "level {j} has a {0}x{0} block, expected {m}x{m}",
                b.dim()
            )));
        }
    }
    Ok(())
}

impl CompositeParams {
    pub fn validate(&self) -> Result<()> {
        let (n, m) = (self.n, self.m);
        if n == 0 || m == 0 {
            return Err(Error::InvalidParams("n and m must be positive".into()));
        }
        if self.eigenvalues.len() != n * m {
            return Err(Error::InvalidParams(format!(
                "expected {} eigenvalues, got {}",
                n * m,
                self.eigenvalues.len()
            )));
        }
        if self.eigenvalues.iter().any(|&x| x < -COMPOSITE_TOL) {
            return Err(Error::InvalidParams("negative eigenvalue".into()));
        }
        let sum: f64 = self.eigenvalues.iter().sum();
        if (sum - 1.0).abs() > COMPOSITE_TOL {
            return Err(Error::InvalidParams(format!("eigenvalues sum to {sum}")));
        }
        if self.local_unitaries.len() != n {
            return Err(Error::InvalidParams(format!(
                "expected {n} local unitaries, got {}",
                self.local_unitaries.len()
            )));
        }
        for (k, u) in self.local_unitaries.iter().enumerate() {
            if u.dim() != m {
                return Err(shape_err(format!("U_{} is {1}x{1}", k + 1, u.dim())));
            }
            let dev = u.unitarity_deviation();
            if dev > COMPOSITE_TOL {
                return Err(Error::InvalidParams(format!(
                    "U_{} deviates from unitarity by {dev:.3e}",
                    k + 1
                )));
            }
        }
        check_levels(n, m, &self.levels)
    }

    pub fn spectrum(&self) -> Result<BlockDiagonalSpectrum> {
        let blocks = self
            .local_unitaries
            .iter()
            .enumerate()
            .map(|(k, u)| {
                let d = ComplexMatrix::diag_real(&self.eigenvalues[k * self.m..(k + 1) * self.m]);
                u.adjoint().matmul(&d).matmul(u).hermitian_part()
            })
            .collect();
        BlockDiagonalSpectrum::new(blocks)
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

/// Positive diagonal blocks Λ₁..Λₙ with Σ Tr Λ_k = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockDiagonalSpectrum {
    blocks: Vec<ComplexMatrix>,
}

impl BlockDiagonalSpectrum {
    pub fn new(blocks: Vec<ComplexMatrix>) -> Result<Self> {
        let m = blocks
            .first()
            .map(|b| b.dim())
            .ok_or_else(|| shape_err("no blocks"))?;
        if blocks.iter().any(|b| b.dim() != m) {
            return Err(shape_err("diagonal blocks differ in size"));
        }
        let mut total = 0.0;
        for b in &blocks {
            b.check_hermitian(BLOCK_PSD_TOL)?;
            let min = hermitian_eigen(b)?.min_eigenvalue();
            if min < -BLOCK_PSD_TOL {
                return Err(Error::NegativeEigenvalue { value: min });
            }
            total += b.trace().re;
        }
        if (total - 1.0).abs() > COMPOSITE_TOL {
            return Err(Error::TraceMismatch {
                expected: 1.0,
                found: total,
            });
        }
        Ok(Self { blocks })
    }

    pub fn blocks(&self) -> &[ComplexMatrix] {
        &self.blocks
    }

    pub fn n(&self) -> usize {
        self.blocks.len()
    }

    pub fn m(&self) -> usize {
        self.blocks[0].dim()
    }

    /// D_n(Λ₁|…|Λₙ).
    pub fn to_matrix(&self) -> ComplexMatrix {
        let (n, m) = (self.n(), self.m());
        let mut out = ComplexMatrix::zeros(n * m);
        for (k, b) in self.blocks.iter().enumerate() {
            out.set_block(k * m, k * m, b);
        }
        out
    }
}

/// A^j = exp(X_j), X_j holding |Z_j⟩ in block column j and −⟨Z_j| in block row j.
pub fn block_a(n: usize, m: usize, j: usize, z_blocks: &[ComplexMatrix]) -> Result<ComplexMatrix> {
    if j < 2 || j > n {
        return Err(Error::IndexOutOfRange(format!(
            "block index j = {j} outside 2..={n}"
        )));
    }
    if z_blocks.len() != j - 1 {
        return Err(shape_err(format!(
            "level {j} needs {} blocks, got {}",
            j - 1,
            z_blocks.len()
        )));
    }
    if let Some(b) = z_blocks.iter().find(|b| b.dim() != m) {
        return Err(shape_err(format!(
            "{0}x{0} block, expected {m}x{m}",
            b.dim()
        )));
    }
    let mut x = ComplexMatrix::zeros(n * m);
    let col = (j - 1) * m;
    for (i, z) in z_blocks.iter().enumerate() {
        x.set_block(i * m, col, z);
        x.set_block(col, i * m, &(-&z.adjoint()));
    }
    expm_skew(&x)
}

/// Ξ_j = √(Σ Z*_{i,j} Z_{i,j}).
pub fn block_norm(z_blocks: &[ComplexMatrix]) -> Result<ComplexMatrix> {
    let m = z_blocks
        .first()
        .map(|b| b.dim())
        .ok_or_else(|| shape_err("no blocks"))?;
    let gram = z_blocks.iter().fold(ComplexMatrix::zeros(m), |acc, z| {
        &acc + &z.adjoint().matmul(z)
    });
    herm_fn(&gram.hermitian_part(), MatrixFunction::Sqrt)
}

/// A^{n*}···A^{2*} D A²···Aⁿ for given diagonal blocks.
pub fn density_from_blocks(
    spectrum: &BlockDiagonalSpectrum,
    levels: &[Vec<ComplexMatrix>],
) -> Result<ComplexMatrix> {
    let (n, m) = (spectrum.n(), spectrum.m());
    check_levels(n, m, levels)?;
    let mut p = ComplexMatrix::identity(n * m);
    for (k, blocks) in levels.iter().enumerate() {
        p = p.matmul(&block_a(n, m, k + 2, blocks)?);
    }
    Ok(p.adjoint()
        .matmul(&spectrum.to_matrix())
        .matmul(&p)
        .hermitian_part())
}

pub fn composite_density(p: &CompositeParams) -> Result<ComplexMatrix> {
    p.validate()?;
    density_from_blocks(&p.spectrum()?, &p.levels)
}

fn check_square(name: &str, a: &ComplexMatrix, m: usize) -> Result<()> {
    if a.dim() != m {
        return Err(shape_err(format!(
            "{name} is {0}x{0}, expected {m}x{m}",
            a.dim()
        )));
    }
    Ok(())
}

fn two_block(
    tl: &ComplexMatrix,
    tr: &ComplexMatrix,
    bl: &ComplexMatrix,
    br: &ComplexMatrix,
) -> ComplexMatrix {
    let m = tl.dim();
    let mut out = ComplexMatrix::zeros(2 * m);
    out.set_block(0, 0, tl);
    out.set_block(0, m, tr);
    out.set_block(m, 0, bl);
    out.set_block(m, m, br);
    out
}

/// C = cos Ξ, S = sin Ξ for positive Ξ.
fn cos_sin(xi: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let min = hermitian_eigen(xi)?.min_eigenvalue();
    if min < -BLOCK_PSD_TOL {
        return Err(Error::NegativeEigenvalue { value: min });
    }
    Ok((
        herm_fn(xi, MatrixFunction::Cos)?,
        herm_fn(xi, MatrixFunction::Sin)?,
    ))
}

/// 2⊗m state
/// (U* ⊕ I)·[[C Λ₁′ C + S Λ₂ S, S Λ₂ C − C Λ₁′ S], [C Λ₂ S − S Λ₁′ C, C Λ₂ C + S Λ₁′ S]]·(U ⊕ I)
/// with Λ₁′ = U* Λ₁ U, C = cos Ξ, S = sin Ξ.
pub fn two_m_density(
    u: &ComplexMatrix,
    lambda1: &ComplexMatrix,
    lambda2: &ComplexMatrix,
    xi: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    let m = u.dim();
    check_square("Lambda1", lambda1, m)?;
    check_square("Lambda2", lambda2, m)?;
    check_square("Xi", xi, m)?;
    let found = (lambda1.trace() + lambda2.trace()).re;
    if (found - 1.0).abs() > COMPOSITE_TOL {
        return Err(Error::TraceMismatch {
            expected: 1.0,
            found,
        });
    }
    let (c, s) = cos_sin(xi)?;
    let l1 = u.adjoint().matmul(lambda1).matmul(u);
    let l2 = lambda2;
    let tl = &c.matmul(&l1).matmul(&c) + &s.matmul(l2).matmul(&s);
    let tr = &s.matmul(l2).matmul(&c) - &c.matmul(&l1).matmul(&s);
    let bl = &c.matmul(l2).matmul(&s) - &s.matmul(&l1).matmul(&c);
    let br = &c.matmul(l2).matmul(&c) + &s.matmul(&l1).matmul(&s);
    let middle = two_block(&tl, &tr, &bl, &br);
    let left = u.adjoint().direct_sum(&ComplexMatrix::identity(m));
    let right = u.direct_sum(&ComplexMatrix::identity(m));
    Ok(left.matmul(&middle).matmul(&right).hermitian_part())
}

/// [[A, B], [B*, A]].
pub fn toeplitz_block(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    two_block(a, b, &b.adjoint(), a)
}

/// [[A₁, X], [X*, A₂]].
pub fn hankel_block(a1: &ComplexMatrix, x: &ComplexMatrix, a2: &ComplexMatrix) -> ComplexMatrix {
    two_block(a1, x, &x.adjoint(), a2)
}

fn require_commute(name: &str, a: &ComplexMatrix, b: &ComplexMatrix) -> Result<()> {
    let d = a.commutator(b).max_abs();
    if d > COMMUTE_TOL {
        return Err(Error::InvalidParams(format!(
            "{name} do not commute (deviation {d:.3e})"
        )));
    }
    Ok(())
}

/// Block Toeplitz state from Λ₁ = Λ₂ = Λ with [Λ, U] = 0 and U* A U = A:
/// [[A, U* B], [B* U, A]], A = CΛC + SΛS, B = SΛC − CΛS.
pub fn toeplitz_state(
    u: &ComplexMatrix,
    lambda: &ComplexMatrix,
    xi: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    let m = u.dim();
    check_square("Lambda", lambda, m)?;
    check_square("Xi", xi, m)?;
    let found = 2.0 * lambda.trace().re;
    if (found - 1.0).abs() > COMPOSITE_TOL {
        return Err(Error::TraceMismatch {
            expected: 1.0,
            found,
        });
    }
    require_commute("Lambda and U", lambda, u)?;
    let (c, s) = cos_sin(xi)?;
    let a = &c.matmul(lambda).matmul(&c) + &s.matmul(lambda).matmul(&s);
    let d = u.adjoint().matmul(&a).matmul(u).max_abs_diff(&a);
    if d > COMMUTE_TOL {
        return Err(Error::InvalidParams(format!(
            "U* A U differs from A by {d:.3e}"
        )));
    }
    let b = &s.matmul(lambda).matmul(&c) - &c.matmul(lambda).matmul(&s);
    Ok(toeplitz_block(&a, &u.adjoint().matmul(&b)))
}

/// Block Hankel state under [U*Λ₁U, Ξ] = 0, [Λ₂, Ξ] = 0, U B′ = B′ U:
/// [[U*(C²Λ₁′ + S²Λ₂)U, U*B′], [B′U, C²Λ₂ + S²Λ₁′]], B′ = SC(Λ₂ − Λ₁′).
pub fn hankel_state(
    u: &ComplexMatrix,
    lambda1: &ComplexMatrix,
    lambda2: &ComplexMatrix,
    xi: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    let m = u.dim();
    check_square("Lambda1", lambda1, m)?;
    check_square("Lambda2", lambda2, m)?;
    check_square("Xi", xi, m)?;
    let found = (lambda1.trace() + lambda2.trace()).re;
    if (found - 1.0).abs() > COMPOSITE_TOL {
        return Err(Error::TraceMismatch {
            expected: 1.0,
            found,
        });
    }
    let l1 = u.adjoint().matmul(lambda1).matmul(u);
    require_commute("U*Lambda1 U and Xi", &l1, xi)?;
    require_commute("Lambda2 and Xi", lambda2, xi)?;
    let (c, s) = cos_sin(xi)?;
    let (c2, s2) = (c.matmul(&c), s.matmul(&s));
    let b = s.matmul(&c).matmul(&(lambda2 - &l1));
    require_commute("U and B'", u, &b)?;
    let a1 = &c2.matmul(&l1) + &s2.matmul(lambda2);
    let a2 = &c2.matmul(lambda2) + &s2.matmul(&l1);
    Ok(hankel_block(
        &u.adjoint().matmul(&a1).matmul(u),
        &u.adjoint().matmul(&b),
        &a2,
    ))
}

/// Unitary from Gram-Schmidt on a complex Gaussian matrix.
pub fn random_unitary(m: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(m);
    while cols.len() < m {
        let mut v: Vec<Complex64> = (0..m)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        // two passes keep the columns orthogonal to rounding
        for _ in 0..2 {
            for c in &cols {
                let proj: Complex64 = c.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (x, y) in v.iter_mut().zip(c) {
                    *x -= proj * y;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            cols.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    ComplexMatrix::from_fn(m, |i, j| cols[j][i])
}

/// Seeded draw: eigenvalues uniform on the simplex (sorted descending),
/// Gram-Schmidt local unitaries, complex Gaussian level blocks.
pub fn sample_composite(n: usize, m: usize, seed: u64) -> Result<CompositeParams> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidParams("n and m must be positive".into()));
    }
    sample_composite_with(n, m, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn sample_composite_with(n: usize, m: usize, rng: &mut impl Rng) -> Result<CompositeParams> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidParams("n and m must be positive".into()));
    }
    let draws: Vec<f64> = (0..n * m).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = draws.iter().sum();
    let mut eigenvalues: Vec<f64> = draws.iter().map(|x| x / total).collect();
    eigenvalues.sort_by(|a, b| b.total_cmp(a));
    let local_unitaries = (0..n).map(|_| random_unitary(m, rng)).collect();
    let levels = (2..=n)
        .map(|j| {
            (0..j - 1)
                .map(|_| {
                    ComplexMatrix::from_fn(m, |_, _| {
                        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
                    })
                })
                .collect()
        })
        .collect();
    Ok(CompositeParams {
        n,
        m,
        eigenvalues,
        local_unitaries,
        levels,
    })
}

fn real4(rows: [[f64; 4]; 4]) -> ComplexMatrix {
    ComplexMatrix::from_fn(4, |i, j| Complex64::new(rows[i][j], 0.0))
}

/// |ψ_α⟩⟨ψ_α| with ψ_α = sin α |00⟩ + cos α |11⟩.
pub fn family_projector(alpha: f64) -> ComplexMatrix {
    let (s, c) = alpha.sin_cos();
    let zero = Complex64::new(0.0, 0.0);
    ComplexMatrix::outer(&[Complex64::new(s, 0.0), zero, zero, Complex64::new(c, 0.0)])
}

/// W_pt(−p) = ¼[[1+p, 0, 0, 2p], [0, 1−p, 0, 0], [0, 0, 1−p, 0], [2p, 0, 0, 1+p]].
pub fn family_werner_pt(p: f64) -> Result<ComplexMatrix> {
    if !(-1.0 / 3.0 - COMPOSITE_TOL..=1.0 + COMPOSITE_TOL).contains(&p) {
        return Err(Error::OutOfRange(format!("p = {p} outside [-1/3, 1]")));
    }
    Ok(real4([
        [1.0 + p, 0.0, 0.0, 2.0 * p],
        [0.0, 1.0 - p, 0.0, 0.0],
        [0.0, 0.0, 1.0 - p, 0.0],
        [2.0 * p, 0.0, 0.0, 1.0 + p],
    ])
    .scale_real(0.25))
}

/// I(p, α) = (1−p)/4 I₄ + p P(α).
pub fn family_two_param(p: f64, alpha: f64) -> Result<ComplexMatrix> {
    let rho = &ComplexMatrix::identity(4).scale_real((1.0 - p) / 4.0)
        + &family_projector(alpha).scale_real(p);
    let min = hermitian_eigen(&rho)?.min_eigenvalue();
    if min < -COMPOSITE_TOL {
        return Err(Error::NonPhysicalParameters(format!(
            "p = {p}, alpha = {alpha}: minimum eigenvalue {min:.3e}"
        )));
    }
    Ok(rho)
}

/// PPT threshold of I(p, α): 1/(1 + 2 sin 2α).
pub fn two_param_threshold(alpha: f64) -> f64 {
    1.0 / (1.0 + 2.0 * (2.0 * alpha).sin())
}

fn check_simplex(p: &[f64; 4]) -> Result<()> {
    if p.iter().any(|&x| x < -COMPOSITE_TOL) {
        return Err(Error::InvalidSimplex(format!("negative weight in {p:?}")));
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > COMPOSITE_TOL {
        return Err(Error::InvalidSimplex(format!("weights sum to {sum}")));
    }
    Ok(())
}

/// Five-parameter circulant family ρ(p; α, β). Off-diagonal entries are
/// (p₁−p₂) s_α c_α at (1,4) and (p₃−p₄) s_β c_β at (2,3).
pub fn family_five_param(p: [f64; 4], alpha: f64, beta: f64) -> Result<ComplexMatrix> {
    check_simplex(&p)?;
    for (name, angle) in [("alpha", alpha), ("beta", beta)] {
        if !(0.0..=FRAC_PI_2).contains(&angle) {
            return Err(Error::OutOfRange(format!(
                "{name} = {angle} outside [0, π/2]"
            )));
        }
    }
    let [p1, p2, p3, p4] = p;
    let (sa, ca) = alpha.sin_cos();
    let (sb, cb) = beta.sin_cos();
    let x = (p1 - p2) * sa * ca;
    let y = (p3 - p4) * sb * cb;
    Ok(real4([
        [p1 * ca * ca + p2 * sa * sa, 0.0, 0.0, x],
        [0.0, p3 * cb * cb + p4 * sb * sb, y, 0.0],
        [0.0, y, p3 * sb * sb + p4 * cb * cb, 0.0],
        [x, 0.0, 0.0, p1 * sa * sa + p2 * ca * ca],
    ]))
}

/// Bell-diagonal states, the α = β = π/4 slice of the five-parameter family.
pub fn family_bell_diag(p: [f64; 4]) -> Result<ComplexMatrix> {
    check_simplex(&p)?;
    let [p1, p2, p3, p4] = p;
    Ok(real4([
        [p1 + p2, 0.0, 0.0, p1 - p2],
        [0.0, p3 + p4, p3 - p4, 0.0],
        [0.0, p3 - p4, p3 + p4, 0.0],
        [p1 - p2, 0.0, 0.0, p1 + p2],
    ])
    .scale_real(0.5))
}

/// σ_x, the local unitary used by the 2⊗2 families.
pub fn sigma_x() -> ComplexMatrix {
    pauli(1)
}
