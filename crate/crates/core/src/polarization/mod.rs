//! Polarization (spherical tensor) operators T_LM of an n-level system and
//! the complex Bloch vector in that basis.
//!
//! T_LM = √((2L+1)/(2s+1)) Σ_{k,l} ⟨s m_l; L M | s m_k⟩ |k⟩⟨l| with
//! s = (n−1)/2 and m_k = s, s−1, …, −s.

mod cg;

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock, RwLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bloch::{char_coeffs_newton, Physicality};
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

pub use cg::{clebsch_gordan, HalfInteger};

/// Tolerance on λ_LM = (−1)^M conj(λ_{L,−M}).
pub const CONJUGATION_TOL: f64 = 1e-10;

fn sign_of(m: i64) -> f64 {
    if m.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Flat position of (L, M) when L runs from 0.
fn flat_index(l: usize, m: i64) -> usize {
    l * l + (m + l as i64) as usize
}

/// T_LM for L = 0..n−1, M = −L..L.
#[derive(Debug, Clone)]
pub struct PolarizationBasis {
    n: usize,
    operators: Vec<ComplexMatrix>,
}

impl PolarizationBasis {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Spin s = (n−1)/2.
    pub fn spin(&self) -> HalfInteger {
        HalfInteger::from_doubled(self.n as i64 - 1)
    }

    pub fn get(&self, l: usize, m: i64) -> Option<&ComplexMatrix> {
        if l >= self.n || m.unsigned_abs() as usize > l {
            return None;
        }
        self.operators.get(flat_index(l, m))
    }

    /// (L, M, T_LM) in order L = 0.., M = −L..L.
    pub fn iter(&self) -> impl Iterator<Item = (usize, i64, &ComplexMatrix)> {
        (0..self.n)
            .flat_map(|l| (-(l as i64)..=l as i64).map(move |m| (l, m)))
            .zip(&self.operators)
            .map(|((l, m), t)| (l, m, t))
    }
}

/// Builds the operators from Clebsch-Gordan coefficients.
pub fn polarization_ops(n: usize) -> Result<PolarizationBasis> {
    if n < 2 {
        return Err(Error::InvalidParams(format!(
            "polarization operators need n ≥ 2, got {n}"
        )));
    }
    let s = HalfInteger::from_doubled(n as i64 - 1);
    // m_k doubled: n−1, n−3, …, −(n−1)
    let m_of = |k: usize| HalfInteger::from_doubled(n as i64 - 1 - 2 * k as i64);
    let mut operators = Vec::with_capacity(n * n);
    for l in 0..n {
        let scale = ((2 * l + 1) as f64 / n as f64).sqrt();
        for m in -(l as i64)..=(l as i64) {
            let big_l = HalfInteger::from_int(l as i64);
            let big_m = HalfInteger::from_int(m);
            let mut t = ComplexMatrix::zeros(n);
            for k in 0..n {
                for col in 0..n {
                    let c = clebsch_gordan(s, m_of(col), big_l, big_m, s, m_of(k))?;
                    if c != 0.0 {
                        t[(k, col)] = Complex64::new(scale * c, 0.0);
                    }
                }
            }
            operators.push(t);
        }
    }
    Ok(PolarizationBasis { n, operators })
}

/// Shared, lazily built basis for `n`.
pub fn cached_polarization_ops(n: usize) -> Result<Arc<PolarizationBasis>> {
    static CACHE: OnceLock<RwLock<HashMap<usize, Arc<PolarizationBasis>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(b) = cache.read().expect("cache lock").get(&n) {
        return Ok(Arc::clone(b));
    }
    let built = Arc::new(polarization_ops(n)?);
    cache
        .write()
        .expect("cache lock")
        .entry(n)
        .or_insert_with(|| Arc::clone(&built));
    Ok(built)
}

/// Complex components λ_LM for L = 1..n−1, M = −L..L.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarizationBloch {
    n: usize,
    components: Vec<Complex64>,
}

impl PolarizationBloch {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            components: vec![Complex64::new(0.0, 0.0); n * n - 1],
        }
    }

    /// Components in order (1,−1), (1,0), (1,1), (2,−2), …
    pub fn from_components(n: usize, components: Vec<Complex64>) -> Result<Self> {
        if n < 2 || components.len() != n * n - 1 {
            return Err(Error::DimensionMismatch(format!(
                "n = {n} needs n²−1 polarization components, got {}",
                components.len()
            )));
        }
        Ok(Self { n, components })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn components(&self) -> &[Complex64] {
        &self.components
    }

    pub fn get(&self, l: usize, m: i64) -> Option<Complex64> {
        if l == 0 || l >= self.n || m.unsigned_abs() as usize > l {
            return None;
        }
        Some(self.components[flat_index(l, m) - 1])
    }

    pub fn set(&mut self, l: usize, m: i64, value: Complex64) -> Result<()> {
        if l == 0 || l >= self.n || m.unsigned_abs() as usize > l {
            return Err(Error::IndexOutOfRange(format!(
                "(L, M) = ({l}, {m}) for n = {}",
                self.n
            )));
        }
        self.components[flat_index(l, m) - 1] = value;
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, i64, Complex64)> + '_ {
        (1..self.n)
            .flat_map(|l| (-(l as i64)..=l as i64).map(move |m| (l, m)))
            .zip(&self.components)
            .map(|((l, m), &c)| (l, m, c))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.components.iter().map(|c| c.norm_sqr()).sum()
    }

    /// max |λ_LM − (−1)^M conj(λ_{L,−M})|.
    pub fn conjugation_deviation(&self) -> f64 {
        self.iter()
            .map(|(l, m, c)| {
                let partner = self.get(l, -m).expect("partner index in range");
                (c - partner.conj() * sign_of(m)).norm()
            })
            .fold(0.0, f64::max)
    }

    fn check_conjugation(&self) -> Result<()> {
        let deviation = self.conjugation_deviation();
        if deviation > CONJUGATION_TOL {
            return Err(Error::HermiticityViolation { deviation });
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&PolarizationJson::from(self)).expect("serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: PolarizationJson =
            serde_json::from_str(s).map_err(|e| Error::Malformed(e.to_string()))?;
        Self::try_from(j)
    }
}

/// `{"n": n, "components": {"L,M": [re, im], ...}}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolarizationJson {
    pub n: usize,
    pub components: BTreeMap<String, [f64; 2]>,
}

impl From<&PolarizationBloch> for PolarizationJson {
    fn from(v: &PolarizationBloch) -> Self {
        Self {
            n: v.n,
            components: v
                .iter()
                .map(|(l, m, c)| (format!("{l},{m}"), [c.re, c.im]))
                .collect(),
        }
    }
}

impl TryFrom<PolarizationJson> for PolarizationBloch {
    type Error = Error;

    fn try_from(j: PolarizationJson) -> Result<Self> {
        if j.n < 2 {
            return Err(Error::Malformed(format!("n = {} is below 2", j.n)));
        }
        let mut v = Self::zeros(j.n);
        for (key, [re, im]) in &j.components {
            let (l, m) = key
                .split_once(',')
                .and_then(|(l, m)| {
                    Some((
                        l.trim().parse::<usize>().ok()?,
                        m.trim().parse::<i64>().ok()?,
                    ))
                })
                .ok_or_else(|| Error::Malformed(format!("bad component key {key:?}")))?;
            v.set(l, m, Complex64::new(*re, *im))?;
        }
        Ok(v)
    }
}

/// λ_LM = Tr(T†_LM ρ) for L ≥ 1.
pub fn po_from_density(rho: &ComplexMatrix) -> Result<PolarizationBloch> {
    let basis = cached_polarization_ops(rho.dim())?;
    let components = basis
        .iter()
        .filter(|(l, _, _)| *l > 0)
        .map(|(_, _, t)| t.adjoint().trace_of_product(rho))
        .collect();
    let v = PolarizationBloch::from_components(rho.dim(), components)?;
    v.check_conjugation()?;
    Ok(v)
}

/// ρ = I/n + Σ λ_LM T_LM.
pub fn po_to_density(v: &PolarizationBloch) -> Result<ComplexMatrix> {
    v.check_conjugation()?;
    let basis = cached_polarization_ops(v.n)?;
    let mut rho = ComplexMatrix::identity(v.n).scale_real(1.0 / v.n as f64);
    for (l, m, c) in v.iter() {
        if c.norm() != 0.0 {
            let t = basis.get(l, m).expect("operator exists");
            rho = &rho + &t.scale(c);
        }
    }
    Ok(rho)
}

/// Positivity through the characteristic coefficients of the reconstructed ρ.
pub fn po_physicality(v: &PolarizationBloch, eps: f64) -> Result<Physicality> {
    let rho = po_to_density(v)?.hermitian_part();
    let coeffs = char_coeffs_newton(&rho)?;
    Ok(Physicality {
        physical: coeffs.all_nonnegative(eps),
        coeffs,
    })
}

/// Two-level state with λ₁₁ = α + iβ, λ₁,₋₁ = −(α − iβ) and λ₁₀ = γ.
pub fn po_qubit(alpha: f64, beta: f64, gamma: f64) -> PolarizationBloch {
    let mut v = PolarizationBloch::zeros(2);
    v.set(1, 1, Complex64::new(alpha, beta)).expect("in range");
    v.set(1, -1, -Complex64::new(alpha, -beta))
        .expect("in range");
    v.set(1, 0, Complex64::new(gamma, 0.0)).expect("in range");
    v
}
