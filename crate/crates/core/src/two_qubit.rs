//! Two-qubit states in the SU(2)⊗SU(2) generator basis: reduced states,
//! partial transpose as a sign map on Bloch components, PPT tests and the
//! Werner family.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bloch::{self, BlochVector, DEFAULT_EPS};
use crate::error::{Error, Result};
use crate::matrix::{hermitian_eigen, partial_transpose, ComplexMatrix, Subsystem};
use crate::su_basis::{two_qubit_basis, BasisOrdering};

/// Tolerance on the minimum partial-transpose eigenvalue for PPT verdicts.
pub const PPT_EPS: f64 = 1e-9;

/// Components negated by transposing the second qubit (0-based).
const PT_FLIPPED: [usize; 4] = [4, 7, 10, 13];

/// λ₁..λ₁₅ of a two-qubit state, ρ = I/4 + ½ Σ λᵢ λ̂ᵢ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoQubitBloch(pub [f64; 15]);

impl TwoQubitBloch {
    pub fn from_slice(components: &[f64]) -> Result<Self> {
        let arr: [f64; 15] = components.try_into().map_err(|_| {
            Error::DimensionMismatch(format!(
                "two-qubit Bloch vector needs 15 components, got {}",
                components.len()
            ))
        })?;
        Ok(Self(arr))
    }

    pub fn components(&self) -> &[f64; 15] {
        &self.0
    }

    pub fn from_density(rho: &ComplexMatrix) -> Result<Self> {
        let v = bloch::from_density(rho, &two_qubit_basis())?;
        Self::from_slice(&v.components)
    }

    pub fn to_bloch_vector(&self) -> BlochVector {
        BlochVector {
            n: 4,
            basis: BasisOrdering::PauliTensor2q,
            components: self.0.to_vec(),
        }
    }

    pub fn to_density(&self) -> ComplexMatrix {
        bloch::to_density(&self.to_bloch_vector(), &two_qubit_basis())
            .expect("15 components always match the two-qubit basis")
    }

    /// Norms of the λ₁..₃ and λ₄..₆ parts.
    pub fn local_norms(&self) -> (f64, f64) {
        let norm = |s: &[f64]| s.iter().map(|x| x * x).sum::<f64>().sqrt();
        (norm(&self.0[0..3]), norm(&self.0[3..6]))
    }
}

/// Single-qubit Bloch vectors r_A, r_B with ρ_X = (I + r·σ)/2.
///
/// In terms of the two-qubit components r_A = √2 (λ₁, λ₂, λ₃) and
/// r_B = √2 (λ₄, λ₅, λ₆).
pub fn reduced_states(v: &TwoQubitBloch) -> Result<([f64; 3], [f64; 3])> {
    if !bloch::is_physical(&v.to_density(), DEFAULT_EPS)?.physical {
        return Err(Error::NonPhysical);
    }
    let s = std::f64::consts::SQRT_2;
    let c = &v.0;
    Ok((
        [s * c[0], s * c[1], s * c[2]],
        [s * c[3], s * c[4], s * c[5]],
    ))
}

/// Single-qubit density matrix (I + r·σ)/2.
pub fn qubit_density(r: &[f64; 3]) -> ComplexMatrix {
    let mut rho = ComplexMatrix::identity(2).scale_real(0.5);
    for (i, ri) in r.iter().enumerate() {
        rho = &rho + &crate::matrix::pauli(i + 1).scale_real(0.5 * ri);
    }
    rho
}

/// Transpose on the second qubit: negates λ₅, λ₈, λ₁₁, λ₁₄.
pub fn partial_transpose_bloch(v: &TwoQubitBloch) -> TwoQubitBloch {
    let mut out = *v;
    for &i in &PT_FLIPPED {
        out.0[i] = -out.0[i];
    }
    out
}

/// Transpose on the first qubit: negates λ₂ and λ₁₀..λ₁₂.
pub fn partial_transpose_bloch_first(v: &TwoQubitBloch) -> TwoQubitBloch {
    let mut out = *v;
    for i in [1, 9, 10, 11] {
        out.0[i] = -out.0[i];
    }
    out
}

/// W(x) = (1−x)/4 I₄ + x S.
pub fn werner(x: f64) -> ComplexMatrix {
    let mut w = ComplexMatrix::diag_real(&[1.0 - x, 1.0 + x, 1.0 + x, 1.0 - x]);
    w[(1, 2)] = Complex64::new(-2.0 * x, 0.0);
    w[(2, 1)] = Complex64::new(-2.0 * x, 0.0);
    w.scale_real(0.25)
}

/// W(x) with the second qubit transposed.
pub fn werner_pt(x: f64) -> ComplexMatrix {
    let mut w = ComplexMatrix::diag_real(&[1.0 - x, 1.0 + x, 1.0 + x, 1.0 - x]);
    w[(0, 3)] = Complex64::new(-2.0 * x, 0.0);
    w[(3, 0)] = Complex64::new(-2.0 * x, 0.0);
    w.scale_real(0.25)
}

/// Physical range of the Werner parameter.
pub const WERNER_PHYSICAL_RANGE: (f64, f64) = (-1.0 / 3.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Separability {
    Separable,
    Entangled,
}

/// Smallest eigenvalue of ρ with the second factor transposed.
pub fn min_pt_eigenvalue(rho: &ComplexMatrix, dim_a: usize, dim_b: usize) -> Result<f64> {
    let pt = partial_transpose(rho, dim_a, dim_b, Subsystem::B)?;
    Ok(hermitian_eigen(&pt)?.min_eigenvalue())
}

/// Partial transpose is positive within `eps`. Necessary for separability in
/// every dimension, sufficient only for 2⊗2 and 2⊗3.
pub fn ppt_positive(rho: &ComplexMatrix, dim_a: usize, dim_b: usize, eps: f64) -> Result<bool> {
    Ok(min_pt_eigenvalue(rho, dim_a, dim_b)? >= -eps)
}

pub fn ppt_separable(rho: &ComplexMatrix, dim_a: usize, dim_b: usize) -> Result<Separability> {
    ppt_separable_with(rho, dim_a, dim_b, PPT_EPS)
}

pub fn ppt_separable_with(
    rho: &ComplexMatrix,
    dim_a: usize,
    dim_b: usize,
    eps: f64,
) -> Result<Separability> {
    let supported = matches!((dim_a, dim_b), (2, 2) | (2, 3) | (3, 2));
    if !supported {
        return Err(Error::UnsupportedDims { dim_a, dim_b });
    }
    Ok(if ppt_positive(rho, dim_a, dim_b, eps)? {
        Separability::Separable
    } else {
        Separability::Entangled
    })
}

/// Point in [lo, hi] where `pred` changes value, to within `tol`.
///
/// Requires pred(lo) != pred(hi).
pub fn bisect_boundary(
    mut pred: impl FnMut(f64) -> bool,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<f64> {
    let (mut lo, mut hi) = (lo, hi);
    let at_lo = pred(lo);
    if at_lo == pred(hi) {
        return Err(Error::InvalidParams(format!(
            "predicate has the same value at {lo} and {hi}"
        )));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if pred(mid) == at_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{partial_trace, pauli};
    use crate::testutil::{random_density, rng};
    use proptest::prelude::*;

    const BISECT_EPS: f64 = 1e-12;

    fn werner_oracle(x: f64) -> ComplexMatrix {
        // 1/4 I − x/4 Σ σᵢ⊗σᵢ
        let mut m = ComplexMatrix::identity(4).scale_real(0.25);
        for i in 1..=3 {
            m = &m - &pauli(i).kron(&pauli(i)).scale_real(x / 4.0);
        }
        m
    }

    #[test]
    fn werner_matches_pauli_expansion() {
        for x in [-1.0 / 3.0, 0.0, 0.3, 1.0] {
            assert!(werner(x).max_abs_diff(&werner_oracle(x)) < 1e-15);
        }
    }

    #[test]
    fn werner_pt_matches_pauli_expansion() {
        for x in [-0.5, 0.2, 1.0] {
            let mut m = ComplexMatrix::identity(4).scale_real(0.25);
            for (i, sign) in [(1, 1.0), (2, -1.0), (3, 1.0)] {
                m = &m - &pauli(i).kron(&pauli(i)).scale_real(sign * x / 4.0);
            }
            assert!(werner_pt(x).max_abs_diff(&m) < 1e-15);
        }
    }

    #[test]
    fn werner_zero_is_maximally_mixed() {
        assert!(werner(0.0).approx_eq(&ComplexMatrix::identity(4).scale_real(0.25), 0.0));
    }

    #[test]
    fn werner_one_is_singlet_projector() {
        let w = werner(1.0);
        let mut eig = hermitian_eigen(&w).unwrap().eigenvalues;
        eig.sort_by(|a, b| b.partial_cmp(a).unwrap());
        for (e, want) in eig.iter().zip([1.0, 0.0, 0.0, 0.0]) {
            assert!((e - want).abs() < 1e-12);
        }
        let mut s = ComplexMatrix::zeros(4);
        s[(1, 1)] = Complex64::new(0.5, 0.0);
        s[(2, 2)] = Complex64::new(0.5, 0.0);
        s[(1, 2)] = Complex64::new(-0.5, 0.0);
        s[(2, 1)] = Complex64::new(-0.5, 0.0);
        assert!(w.max_abs_diff(&s) < 1e-15);
    }

    #[test]
    fn werner_bloch_components() {
        let x = 0.7;
        let v = TwoQubitBloch::from_density(&werner(x)).unwrap();
        let want = -x / 2f64.sqrt();
        for (i, c) in v.0.iter().enumerate() {
            let expected = if [6, 10, 14].contains(&i) { want } else { 0.0 };
            assert!((c - expected).abs() < 1e-14, "component {}", i + 1);
        }
    }

    #[test]
    fn werner_pt_flips_lambda11() {
        let x = 0.4;
        let v = TwoQubitBloch::from_density(&werner(x)).unwrap();
        let pt = partial_transpose_bloch(&v);
        assert!((pt.0[10] - x / 2f64.sqrt()).abs() < 1e-14);
        let direct = TwoQubitBloch::from_density(&werner_pt(x)).unwrap();
        for (a, b) in pt.0.iter().zip(direct.0.iter()) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn werner_char_coeffs_match_polynomials() {
        let basis = two_qubit_basis();
        for k in 0..50 {
            let x = -1.0 + 2.0 * k as f64 / 49.0;
            let v = TwoQubitBloch::from_density(&werner(x))
                .unwrap()
                .to_bloch_vector();
            let a = bloch::char_coeffs_closed(&v, &basis, 4).unwrap();
            let want = [
                1.0,
                0.75 * (1.0 - x * x) / 2.0,
                0.375 * (1.0 - 3.0 * x * x + 2.0 * x.powi(3)) / 6.0,
                3.0 / 32.0 * (1.0 - 6.0 * x * x + 8.0 * x.powi(3) - 3.0 * x.powi(4)) / 24.0,
            ];
            for j in 0..4 {
                assert!(
                    (a.get(j + 1) - want[j]).abs() < 1e-12,
                    "x = {x}, a{}",
                    j + 1
                );
            }

            let vpt = partial_transpose_bloch(&TwoQubitBloch::from_density(&werner(x)).unwrap())
                .to_bloch_vector();
            let apt = bloch::char_coeffs_closed(&vpt, &basis, 4).unwrap();
            let a3 = 0.375 * (1.0 - 3.0 * x * x - 2.0 * x.powi(3)) / 6.0;
            let a4 = 3.0 / 32.0 * (1.0 - 6.0 * x * x - 8.0 * x.powi(3) - 3.0 * x.powi(4)) / 24.0;
            assert!((apt.get(3) - a3).abs() < 1e-12);
            assert!((apt.get(4) - a4).abs() < 1e-12);
        }
    }

    #[test]
    fn werner_pt_a4_vanishes_at_one_third() {
        let a = bloch::char_coeffs_newton(&werner_pt(1.0 / 3.0)).unwrap();
        assert!(a.get(4).abs() < 1e-15);
    }

    #[test]
    fn werner_physical_range() {
        let phys = |x: f64| {
            bloch::is_physical(&werner(x), DEFAULT_EPS)
                .unwrap()
                .physical
        };
        assert!(phys(-1.0 / 3.0) && phys(0.0) && phys(1.0));
        assert!(!phys(-0.34) && !phys(1.01));
        let strict = |x: f64| bloch::is_physical(&werner(x), BISECT_EPS).unwrap().physical;
        let lower = bisect_boundary(strict, -1.0, 0.0, 1e-12).unwrap();
        assert!((lower + 1.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn werner_separability_verdicts() {
        for x in [-1.0 / 3.0, 0.0, 0.2, 1.0 / 3.0] {
            assert_eq!(
                ppt_separable(&werner(x), 2, 2).unwrap(),
                Separability::Separable
            );
        }
        for x in [0.34, 0.5, 1.0] {
            assert_eq!(
                ppt_separable(&werner(x), 2, 2).unwrap(),
                Separability::Entangled
            );
        }
    }

    #[test]
    fn werner_ppt_threshold_by_bisection() {
        let sep = |x: f64| ppt_positive(&werner(x), 2, 2, BISECT_EPS).unwrap();
        let t = bisect_boundary(sep, 0.0, 1.0, 1e-12).unwrap();
        assert!((t - 1.0 / 3.0).abs() < 1e-9, "threshold {t}");
    }

    #[test]
    fn two_param_threshold_by_bisection() {
        for alpha in [
            std::f64::consts::PI / 12.0,
            std::f64::consts::PI / 8.0,
            std::f64::consts::PI / 6.0,
        ] {
            let (s, c) = alpha.sin_cos();
            let psi = [
                Complex64::new(s, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(c, 0.0),
            ];
            let proj = ComplexMatrix::outer(&psi);
            let state = |p: f64| {
                &ComplexMatrix::identity(4).scale_real((1.0 - p) / 4.0) + &proj.scale_real(p)
            };
            let sep = |p: f64| ppt_positive(&state(p), 2, 2, BISECT_EPS).unwrap();
            let t = bisect_boundary(sep, 0.0, 1.0, 1e-12).unwrap();
            let want = 1.0 / (1.0 + 2.0 * (2.0 * alpha).sin());
            assert!((t - want).abs() < 1e-9, "alpha {alpha}: {t} vs {want}");
        }
    }

    #[test]
    fn unsupported_dims_are_refused() {
        let rho = ComplexMatrix::identity(9).scale_real(1.0 / 9.0);
        assert_eq!(
            ppt_separable(&rho, 3, 3),
            Err(Error::UnsupportedDims { dim_a: 3, dim_b: 3 })
        );
        assert!(ppt_positive(&rho, 3, 3, PPT_EPS).unwrap());
    }

    #[test]
    fn two_by_three_product_is_separable() {
        let mut r = rng(5);
        let rho = random_density(2, &mut r).kron(&random_density(3, &mut r));
        assert_eq!(ppt_separable(&rho, 2, 3).unwrap(), Separability::Separable);
    }

    #[test]
    fn werner_reductions_are_maximally_mixed() {
        let v = TwoQubitBloch::from_density(&werner(0.8)).unwrap();
        let (a, b) = reduced_states(&v).unwrap();
        assert!(a.iter().chain(b.iter()).all(|c| c.abs() < 1e-14));
    }

    #[test]
    fn product_reductions_recover_factors() {
        let ra = [0.3, -0.2, 0.5];
        let rb = [-0.6, 0.1, 0.2];
        let rho = qubit_density(&ra).kron(&qubit_density(&rb));
        let v = TwoQubitBloch::from_density(&rho).unwrap();
        let (a, b) = reduced_states(&v).unwrap();
        for i in 0..3 {
            assert!((a[i] - ra[i]).abs() < 1e-14);
            assert!((b[i] - rb[i]).abs() < 1e-14);
        }
        assert_eq!(ppt_separable(&rho, 2, 2).unwrap(), Separability::Separable);
    }

    #[test]
    fn maximally_entangled_reductions() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let psi = [h, 0.0, 0.0, h].map(|x| Complex64::new(x, 0.0));
        let v = TwoQubitBloch::from_density(&ComplexMatrix::outer(&psi)).unwrap();
        let (a, b) = reduced_states(&v).unwrap();
        assert!(a.iter().chain(b.iter()).all(|c| c.abs() < 1e-14));
    }

    #[test]
    fn nonphysical_reduction_is_rejected() {
        let mut c = [0.0; 15];
        c[0] = 1.0;
        assert_eq!(reduced_states(&TwoQubitBloch(c)), Err(Error::NonPhysical));
    }

    #[test]
    fn wrong_length_is_rejected() {
        assert!(matches!(
            TwoQubitBloch::from_slice(&[0.0; 8]),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn bloch_and_matrix_partial_transpose_agree() {
        let mut r = rng(11);
        for _ in 0..1000 {
            let rho = random_density(4, &mut r);
            let v = TwoQubitBloch::from_density(&rho).unwrap();
            let via_bloch = partial_transpose_bloch(&v).to_density();
            let via_matrix = partial_transpose(&rho, 2, 2, Subsystem::B).unwrap();
            assert!(via_bloch.max_abs_diff(&via_matrix) < 1e-12);
            let first = partial_transpose_bloch_first(&v).to_density();
            let first_m = partial_transpose(&rho, 2, 2, Subsystem::A).unwrap();
            assert!(first.max_abs_diff(&first_m) < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn partial_transpose_is_involution(c in prop::array::uniform15(-1.0f64..1.0)) {
            let v = TwoQubitBloch(c);
            prop_assert_eq!(partial_transpose_bloch(&partial_transpose_bloch(&v)), v);
        }

        #[test]
        fn reductions_agree_with_partial_trace(seed in 0u64..10_000) {
            let rho = random_density(4, &mut rng(seed));
            let v = TwoQubitBloch::from_density(&rho).unwrap();
            let (a, b) = reduced_states(&v).unwrap();
            let ta = partial_trace(&rho, 2, 2, Subsystem::A).unwrap();
            let tb = partial_trace(&rho, 2, 2, Subsystem::B).unwrap();
            prop_assert!(qubit_density(&a).max_abs_diff(&ta) < 1e-12);
            prop_assert!(qubit_density(&b).max_abs_diff(&tb) < 1e-12);
            let norm = |r: &[f64; 3]| r.iter().map(|x| x * x).sum::<f64>().sqrt();
            prop_assert!(norm(&a) <= 1.0 + 1e-9 && norm(&b) <= 1.0 + 1e-9);
            let (na, nb) = v.local_norms();
            prop_assert!(na <= std::f64::consts::FRAC_1_SQRT_2 + 1e-9);
            prop_assert!(nb <= std::f64::consts::FRAC_1_SQRT_2 + 1e-9);
        }
    }
}
