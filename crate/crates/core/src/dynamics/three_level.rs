//! Three-level atom driven by two lasers at exact two-photon resonance.
//!
//! Ĥ = −[[0, aΩ₀, 0], [aΩ₀, Δ, bΩ₀], [0, bΩ₀, 0]] in the Gell-Mann ordering
//! (sym12, sym13, sym23, anti12, anti13, anti23, diag, diag8).

use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{integrate, HamiltonianBloch, Integrator, Trajectory};
use crate::bloch::BlochVector;
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, RealMatrix};
use crate::su_basis::{paper_gellmann3, BasisOrdering, BasisSet};

fn gellmann3() -> &'static BasisSet {
    static BASIS: OnceLock<BasisSet> = OnceLock::new();
    BASIS.get_or_init(paper_gellmann3)
}

/// Common time dependence Ω₀(t) of both Rabi frequencies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RabiProfile {
    Constant {
        value: f64,
    },
    Sine {
        amplitude: f64,
        frequency: f64,
        phase: f64,
    },
}

impl RabiProfile {
    /// Ω₀(t) = sin t.
    pub fn unit_sine() -> Self {
        Self::Sine {
            amplitude: 1.0,
            frequency: 1.0,
            phase: 0.0,
        }
    }

    pub fn at(&self, t: f64) -> f64 {
        match *self {
            Self::Constant { value } => value,
            Self::Sine {
                amplitude,
                frequency,
                phase,
            } => amplitude * (frequency * t + phase).sin(),
        }
    }
}

/// Rabi amplitude ratios a, b ≥ 0, detuning Δ and profile Ω₀(t); ħ = 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThreeLevelModel {
    a: f64,
    b: f64,
    delta: f64,
    omega0: RabiProfile,
}

impl ThreeLevelModel {
    pub fn new(a: f64, b: f64, delta: f64, omega0: RabiProfile) -> Result<Self> {
        if !(a >= 0.0 && b >= 0.0) || !delta.is_finite() {
            return Err(Error::InvalidParams(format!(
                "need a ≥ 0, b ≥ 0 and finite Δ, got a = {a}, b = {b}, Δ = {delta}"
            )));
        }
        Ok(Self {
            a,
            b,
            delta,
            omega0,
        })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn omega0(&self) -> RabiProfile {
        self.omega0
    }

    /// ε(t) = Ω₀(t)·√(a² + b²).
    pub fn epsilon(&self, t: f64) -> f64 {
        self.omega0.at(t) * self.a.hypot(self.b)
    }

    /// Bloch form of Ĥ(t): h₀ = −Δ, h₁ = −2aΩ₀, h₃ = −2bΩ₀, h₇ = Δ, h₈ = −Δ/√3.
    pub fn hamiltonian_bloch(&self, t: f64) -> HamiltonianBloch {
        let w = self.omega0.at(t);
        let mut h = vec![0.0; 8];
        h[0] = -2.0 * self.a * w;
        h[2] = -2.0 * self.b * w;
        h[6] = self.delta;
        h[7] = -self.delta / 3f64.sqrt();
        HamiltonianBloch {
            n: 3,
            h0: -self.delta,
            h,
        }
    }
}

/// Ĥ(t) with Ω₁₂ = 2aΩ₀(t), Ω₂₃ = 2bΩ₀(t).
pub fn three_level_hamiltonian(m: &ThreeLevelModel, t: f64) -> ComplexMatrix {
    let w = m.omega0.at(t);
    let r = |x: f64| Complex64::new(x, 0.0);
    let (o12, o23) = (2.0 * m.a * w, 2.0 * m.b * w);
    ComplexMatrix::from_rows(&[
        vec![r(0.0), r(-o12 / 2.0), r(0.0)],
        vec![r(-o12 / 2.0), r(-m.delta), r(-o23 / 2.0)],
        vec![r(0.0), r(-o23 / 2.0), r(0.0)],
    ])
    .expect("3x3 literal")
}

/// V(t) with dλ/dt = V·λ, assembled as V_ik = Σⱼ f_ijk hⱼ(t).
pub fn coupling_matrix(m: &ThreeLevelModel, t: f64) -> RealMatrix {
    let basis = gellmann3();
    let h = m.hamiltonian_bloch(t).h;
    let mut v = RealMatrix::zeros(8, 8);
    for e in basis.f().expanded() {
        v[(e.i, e.k)] += e.value * h[e.j];
    }
    v
}

/// The constant orthogonal matrix B whose rows span the invariant blocks
/// (rows 1–3, 4–7 and 8) of V.
pub fn basis_change_b(a: f64, b: f64) -> Result<RealMatrix> {
    if a == 0.0 && b == 0.0 {
        return Err(Error::DegenerateAmplitudes);
    }
    let s = a * a + b * b;
    let r = s.sqrt();
    let r3 = 3f64.sqrt();
    let rows: [[f64; 8]; 8] = [
        [a / r, 0.0, b / r, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, a / r, 0.0, -b / r, 0.0, 0.0],
        [
            0.0,
            a * b / s,
            0.0,
            0.0,
            0.0,
            0.0,
            (2.0 * a * a + b * b) / (2.0 * s),
            -r3 * b * b / (2.0 * s),
        ],
        [0.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0],
        [b / r, 0.0, -a / r, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, -b / r, 0.0, -a / r, 0.0, 0.0],
        [
            0.0,
            (b * b - a * a) / s,
            0.0,
            0.0,
            0.0,
            0.0,
            a * b / s,
            r3 * a * b / s,
        ],
        [
            0.0,
            -r3 * a * b / s,
            0.0,
            0.0,
            0.0,
            0.0,
            r3 * b * b / (2.0 * s),
            (b * b - 2.0 * a * a) / (2.0 * s),
        ],
    ];
    let refs: Vec<&[f64]> = rows.iter().map(|r| r.as_slice()).collect();
    Ok(RealMatrix::from_rows(&refs))
}

/// Blocks of B·V·Bᵀ and the largest entry outside them.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockDecomposition {
    pub v3: RealMatrix,
    pub v4: RealMatrix,
    pub v1: RealMatrix,
    pub residual: f64,
}

const BLOCKS: [std::ops::Range<usize>; 3] = [0..3, 3..7, 7..8];

pub fn block_decompose(m: &ThreeLevelModel, t: f64) -> Result<BlockDecomposition> {
    let b = basis_change_b(m.a, m.b)?;
    let vp = b.matmul(&coupling_matrix(m, t)).matmul(&b.transpose());
    let block_of = |i: usize| {
        BLOCKS
            .iter()
            .position(|r| r.contains(&i))
            .expect("index in a block")
    };
    let mut residual: f64 = 0.0;
    for i in 0..8 {
        for j in 0..8 {
            if block_of(i) != block_of(j) {
                residual = residual.max(vp[(i, j)].abs());
            }
        }
    }
    let pick = |r: &std::ops::Range<usize>| {
        let idx: Vec<usize> = r.clone().collect();
        vp.select(&idx, &idx)
    };
    Ok(BlockDecomposition {
        v3: pick(&BLOCKS[0]),
        v4: pick(&BLOCKS[1]),
        v1: pick(&BLOCKS[2]),
        residual,
    })
}

/// (|Λ₃|, |Λ₄|, |Λ₁|) of λ′ = B·λ.
pub fn block_lengths(b: &RealMatrix, components: &[f64]) -> [f64; 3] {
    let lp = b.mul_vec(components);
    BLOCKS.map(|r| lp[r].iter().map(|x| x * x).sum::<f64>().sqrt())
}

/// (−2√3·ab·λ₂ + √3·b²·λ₇ − (2a² − b²)·λ₈)² / (a² + b²)², which equals 4|Λ₁|².
pub fn lambda1_invariant(v: &BlochVector, a: f64, b: f64) -> Result<f64> {
    if v.n != 3 || v.basis != BasisOrdering::PaperGellMann3 {
        return Err(Error::BasisMismatch(format!(
            "expected a three-level Gell-Mann vector, got (n = {}, {})",
            v.n, v.basis
        )));
    }
    if a == 0.0 && b == 0.0 {
        return Err(Error::DegenerateAmplitudes);
    }
    let l = &v.components;
    let r3 = 3f64.sqrt();
    let x = -2.0 * r3 * a * b * l[1] + r3 * b * b * l[6] - (2.0 * a * a - b * b) * l[7];
    Ok(x * x / (a * a + b * b).powi(2))
}

/// Integrates the model and records block lengths at each sample.
pub fn integrate_three_level(
    m: &ThreeLevelModel,
    v0: &BlochVector,
    duration: f64,
    dt: f64,
) -> Result<Trajectory> {
    let mut traj = integrate(
        v0,
        |t| m.hamiltonian_bloch(t),
        gellmann3(),
        duration,
        dt,
        Integrator::Rk4,
    )?;
    if m.a != 0.0 || m.b != 0.0 {
        let b = basis_change_b(m.a, m.b)?;
        for (d, s) in traj.diagnostics.iter_mut().zip(&traj.states) {
            d.block_lengths = Some(block_lengths(&b, &s.components));
        }
    }
    traj.model = Some(*m);
    Ok(traj)
}

/// Per-sample (|Λ₃|, |Λ₄|, |Λ₁|) for a trajectory of this model.
pub fn conserved_lengths(traj: &Trajectory, m: &ThreeLevelModel) -> Result<Vec<[f64; 3]>> {
    if traj.n != 3 || traj.basis != BasisOrdering::PaperGellMann3 {
        return Err(Error::ModelMismatch(format!(
            "trajectory is (n = {}, {}), expected the three-level Gell-Mann basis",
            traj.n, traj.basis
        )));
    }
    match traj.model {
        Some(tm) if tm.a == m.a && tm.b == m.b => {}
        Some(tm) => {
            return Err(Error::ModelMismatch(format!(
                "trajectory was generated with (a, b) = ({}, {}), not ({}, {})",
                tm.a, tm.b, m.a, m.b
            )))
        }
        None => {
            return Err(Error::ModelMismatch(
                "trajectory was not generated by the three-level model".into(),
            ))
        }
    }
    let b = basis_change_b(m.a, m.b)?;
    Ok(traj
        .states
        .iter()
        .map(|s| block_lengths(&b, &s.components))
        .collect())
}
