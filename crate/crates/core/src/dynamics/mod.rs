//! Liouville dynamics in Bloch coordinates: dλᵢ/dt = Σ f_ijk hⱼ λₖ.

mod three_level;

use serde::{Deserialize, Serialize};

use crate::bloch::{is_physical, to_density, BlochVector, DEFAULT_EPS};
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::su_basis::{BasisOrdering, BasisSet};

pub use three_level::{
    basis_change_b, block_decompose, block_lengths, conserved_lengths, coupling_matrix,
    integrate_three_level, lambda1_invariant, three_level_hamiltonian, BlockDecomposition,
    RabiProfile, ThreeLevelModel,
};

/// Largest tolerated change of |λ| before a run is declared unstable.
pub const MAX_NORM_DRIFT: f64 = 1e-4;

/// Ĥ = (h₀/n)·I + ½ Σ hⱼ λ̂ⱼ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianBloch {
    pub n: usize,
    pub h0: f64,
    pub h: Vec<f64>,
}

impl HamiltonianBloch {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            h0: 0.0,
            h: vec![0.0; n * n - 1],
        }
    }

    /// h₀ = Tr Ĥ, hⱼ = Tr(Ĥ λ̂ⱼ).
    pub fn from_matrix(h: &ComplexMatrix, basis: &BasisSet) -> Result<Self> {
        h.check_hermitian(crate::matrix::HERMITIAN_TOL)?;
        Ok(Self {
            n: basis.n(),
            h0: h.trace().re,
            h: basis.expand(h)?,
        })
    }

    pub fn to_matrix(&self, basis: &BasisSet) -> Result<ComplexMatrix> {
        if self.n != basis.n() {
            return Err(Error::BasisMismatch(format!(
                "Hamiltonian has n = {}, basis has n = {}",
                self.n,
                basis.n()
            )));
        }
        let mut m = basis.combine(&self.h)?;
        for i in 0..self.n {
            m[(i, i)] += self.h0 / self.n as f64;
        }
        Ok(m)
    }
}

/// dλ/dt for the given Hamiltonian.
pub fn bloch_rhs(h: &HamiltonianBloch, v: &BlochVector, basis: &BasisSet) -> Result<Vec<f64>> {
    if h.n != basis.n()
        || v.n != basis.n()
        || v.basis != basis.ordering()
        || h.h.len() != basis.len()
    {
        return Err(Error::BasisMismatch(format!(
            "Hamiltonian (n = {}), vector (n = {}, {}) and basis (n = {}, {}) disagree",
            h.n,
            v.n,
            v.basis,
            basis.n(),
            basis.ordering()
        )));
    }
    Ok(rhs_raw(&h.h, &v.components, basis))
}

fn rhs_raw(h: &[f64], v: &[f64], basis: &BasisSet) -> Vec<f64> {
    let mut out = vec![0.0; v.len()];
    for e in basis.f().expanded() {
        out[e.i] += e.value * h[e.j] * v[e.k];
    }
    out
}

/// Time-stepping scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Integrator {
    #[default]
    #[serde(rename = "rk4")]
    Rk4,
}

/// Quantities recorded at each sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleDiagnostics {
    /// Tr(ρᵏ) for k = 1..n.
    pub trace_invariants: Vec<f64>,
    pub norm: f64,
    /// (|Λ₃|, |Λ₄|, |Λ₁|) for three-level runs.
    pub block_lengths: Option<[f64; 3]>,
}

/// Sampled solution of the Liouville equation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub n: usize,
    pub basis: BasisOrdering,
    pub times: Vec<f64>,
    pub states: Vec<BlochVector>,
    pub diagnostics: Vec<SampleDiagnostics>,
    /// Set when produced by [`integrate_three_level`].
    pub model: Option<ThreeLevelModel>,
}

fn diagnostics(v: &BlochVector, basis: &BasisSet) -> Result<SampleDiagnostics> {
    let rho = to_density(v, basis)?;
    let mut p = rho.clone();
    let mut trace_invariants = Vec::with_capacity(v.n);
    for k in 1..=v.n {
        if k > 1 {
            p = p.matmul(&rho);
        }
        trace_invariants.push(p.trace().re);
    }
    Ok(SampleDiagnostics {
        trace_invariants,
        norm: v.norm(),
        block_lengths: None,
    })
}

/// Integrates from `v0` over `[0, duration]` with `steps = ⌈duration/dt⌉`
/// equal steps of size duration/steps ≤ dt. Every step is sampled.
pub fn integrate<F>(
    v0: &BlochVector,
    hamiltonian: F,
    basis: &BasisSet,
    duration: f64,
    dt: f64,
    method: Integrator,
) -> Result<Trajectory>
where
    F: Fn(f64) -> HamiltonianBloch,
{
    if !(duration >= 0.0 && duration.is_finite()) || !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidParams(format!(
            "need duration ≥ 0 and dt > 0, got duration = {duration}, dt = {dt}"
        )));
    }
    if v0.n != basis.n() || v0.basis != basis.ordering() {
        return Err(Error::BasisMismatch(format!(
            "initial vector is (n = {}, {}), basis is (n = {}, {})",
            v0.n,
            v0.basis,
            basis.n(),
            basis.ordering()
        )));
    }
    if !is_physical(&to_density(v0, basis)?, DEFAULT_EPS)?.physical {
        return Err(Error::NonPhysicalInitialState);
    }
    let steps = (duration / dt - 1e-9).ceil().max(0.0) as usize;
    let step = if steps == 0 {
        0.0
    } else {
        duration / steps as f64
    };
    let norm0 = v0.norm();

    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    let mut diags = Vec::with_capacity(steps + 1);
    times.push(0.0);
    states.push(v0.clone());
    diags.push(diagnostics(v0, basis)?);

    let mut y = v0.components.clone();
    for s in 0..steps {
        let t = s as f64 * step;
        let check = |h: &HamiltonianBloch| -> Result<()> {
            if h.n != basis.n() || h.h.len() != basis.len() {
                return Err(Error::BasisMismatch(format!(
                    "Hamiltonian at t = {t} has n = {}, basis has n = {}",
                    h.n,
                    basis.n()
                )));
            }
            Ok(())
        };
        y = match method {
            Integrator::Rk4 => {
                let h1 = hamiltonian(t);
                let hm = hamiltonian(t + 0.5 * step);
                let h2 = hamiltonian(t + step);
                check(&h1)?;
                check(&hm)?;
                check(&h2)?;
                rk4_step(&y, &h1.h, &hm.h, &h2.h, step, basis)
            }
        };
        let v = BlochVector::new(v0.n, v0.basis, y.clone())?;
        let drift = (v.norm() - norm0).abs();
        if drift > MAX_NORM_DRIFT || !drift.is_finite() {
            return Err(Error::StepTooLarge { drift });
        }
        times.push(if s + 1 == steps {
            duration
        } else {
            (s + 1) as f64 * step
        });
        diags.push(diagnostics(&v, basis)?);
        states.push(v);
    }
    Ok(Trajectory {
        n: v0.n,
        basis: v0.basis,
        times,
        states,
        diagnostics: diags,
        model: None,
    })
}

fn rk4_step(y: &[f64], h1: &[f64], hm: &[f64], h2: &[f64], dt: f64, basis: &BasisSet) -> Vec<f64> {
    let axpy = |a: &[f64], k: &[f64], s: f64| -> Vec<f64> {
        a.iter().zip(k).map(|(x, d)| x + s * d).collect()
    };
    let k1 = rhs_raw(h1, y, basis);
    let k2 = rhs_raw(hm, &axpy(y, &k1, 0.5 * dt), basis);
    let k3 = rhs_raw(hm, &axpy(y, &k2, 0.5 * dt), basis);
    let k4 = rhs_raw(h2, &axpy(y, &k3, dt), basis);
    (0..y.len())
        .map(|i| y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect()
}

#[derive(Serialize)]
struct SampleRow<'a> {
    t: f64,
    components: &'a [f64],
    tr_rho2: f64,
    tr_rho3: Option<f64>,
    #[serde(rename = "Lambda3", skip_serializing_if = "Option::is_none")]
    lambda3: Option<f64>,
    #[serde(rename = "Lambda4", skip_serializing_if = "Option::is_none")]
    lambda4: Option<f64>,
    #[serde(rename = "Lambda1", skip_serializing_if = "Option::is_none")]
    lambda1: Option<f64>,
}

#[derive(Serialize)]
struct TrajectoryJson<'a> {
    n: usize,
    basis: BasisOrdering,
    samples: Vec<SampleRow<'a>>,
}

impl Trajectory {
    fn rows(&self) -> Vec<SampleRow<'_>> {
        self.times
            .iter()
            .zip(&self.states)
            .zip(&self.diagnostics)
            .map(|((&t, v), d)| SampleRow {
                t,
                components: &v.components,
                tr_rho2: d.trace_invariants.get(1).copied().unwrap_or(1.0),
                tr_rho3: d.trace_invariants.get(2).copied(),
                lambda3: d.block_lengths.map(|b| b[0]),
                lambda4: d.block_lengths.map(|b| b[1]),
                lambda1: d.block_lengths.map(|b| b[2]),
            })
            .collect()
    }

    /// Columns t, l1..l(n²−1), tr_rho2, tr_rho3 and, for three-level runs,
    /// Lambda3, Lambda4, Lambda1.
    pub fn to_csv(&self) -> String {
        let with_blocks = self.diagnostics.iter().any(|d| d.block_lengths.is_some());
        let mut header = vec!["t".to_string()];
        header.extend((1..self.n * self.n).map(|i| format!("l{i}")));
        header.push("tr_rho2".into());
        header.push("tr_rho3".into());
        if with_blocks {
            header.extend(["Lambda3", "Lambda4", "Lambda1"].map(String::from));
        }
        let mut out = header.join(",");
        out.push('\n');
        for row in self.rows() {
            let mut cells = vec![format!("{:.12e}", row.t)];
            cells.extend(row.components.iter().map(|x| format!("{x:.12e}")));
            cells.push(format!("{:.12e}", row.tr_rho2));
            cells.push(row.tr_rho3.map_or(String::new(), |x| format!("{x:.12e}")));
            if with_blocks {
                for x in [row.lambda3, row.lambda4, row.lambda1] {
                    cells.push(x.map_or(String::new(), |x| format!("{x:.12e}")));
                }
            }
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// Same fields as the CSV export, one object per sample.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&TrajectoryJson {
            n: self.n,
            basis: self.basis,
            samples: self.rows(),
        })
        .expect("trajectory serializes")
    }

    /// Largest spread of Tr(ρᵏ) over the run, for each k.
    pub fn invariant_drift(&self) -> Vec<f64> {
        let Some(first) = self.diagnostics.first() else {
            return Vec::new();
        };
        (0..first.trace_invariants.len())
            .map(|k| {
                self.diagnostics
                    .iter()
                    .map(|d| (d.trace_invariants[k] - first.trace_invariants[k]).abs())
                    .fold(0.0, f64::max)
            })
            .collect()
    }
}
