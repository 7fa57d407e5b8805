//! Generator bases of su(n) and their structure constants.
//!
//! Generators are Hermitian, traceless and normalized to Tr(λ̂ᵢλ̂ⱼ) = 2δᵢⱼ.
//! Structure constants are always computed from traces:
//! f_ijk = Tr([λ̂ᵢ,λ̂ⱼ]λ̂ₖ)/4i and g_ijk = Tr({λ̂ᵢ,λ̂ⱼ}λ̂ₖ)/4.
//! Indices are 0-based in the API and 1-based in JSON.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{c64, pauli, ComplexMatrix, MatrixJson};

/// Sparse entries with magnitude below this are dropped.
pub const STRUCTURE_DROP_TOL: f64 = 1e-13;
const BASIS_TOL: f64 = 1e-10;

/// Names a fixed generator list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BasisOrdering {
    #[serde(rename = "ggm")]
    Ggm,
    #[serde(rename = "paper-gellmann3")]
    PaperGellMann3,
    #[serde(rename = "pauli-tensor-2q")]
    PauliTensor2q,
}

impl BasisOrdering {
    pub fn tag(self) -> &'static str {
        match self {
            Self::Ggm => "ggm",
            Self::PaperGellMann3 => "paper-gellmann3",
            Self::PauliTensor2q => "pauli-tensor-2q",
        }
    }
}

impl fmt::Display for BasisOrdering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for BasisOrdering {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ggm" => Ok(Self::Ggm),
            "paper-gellmann3" => Ok(Self::PaperGellMann3),
            "pauli-tensor-2q" => Ok(Self::PauliTensor2q),
            other => Err(Error::Malformed(format!(
                "unknown basis ordering {other:?}"
            ))),
        }
    }
}

/// Whether a 3-tensor is totally symmetric or totally antisymmetric.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    Symmetric,
    Antisymmetric,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TensorEntry {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub value: f64,
}

/// Sparse real 3-tensor stored as canonical i ≤ j ≤ k entries, with the
/// full permutation expansion kept alongside for contractions.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureTensor {
    symmetry: Symmetry,
    canonical: Vec<TensorEntry>,
    expanded: Vec<TensorEntry>,
}

impl StructureTensor {
    fn new(symmetry: Symmetry, mut canonical: Vec<TensorEntry>) -> Self {
        canonical.sort_by_key(|e| (e.i, e.j, e.k));
        let mut expanded = Vec::new();
        for e in &canonical {
            let idx = [e.i, e.j, e.k];
            let mut seen: Vec<[usize; 3]> = Vec::with_capacity(6);
            for (perm, parity) in PERMUTATIONS {
                let p = [idx[perm[0]], idx[perm[1]], idx[perm[2]]];
                if seen.contains(&p) {
                    continue;
                }
                seen.push(p);
                let sign = match symmetry {
                    Symmetry::Symmetric => 1.0,
                    Symmetry::Antisymmetric => parity,
                };
                expanded.push(TensorEntry {
                    i: p[0],
                    j: p[1],
                    k: p[2],
                    value: sign * e.value,
                });
            }
        }
        expanded.sort_by_key(|e| (e.i, e.j, e.k));
        Self {
            symmetry,
            canonical,
            expanded,
        }
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    /// Nonzero entries with i ≤ j ≤ k, sorted.
    pub fn canonical(&self) -> &[TensorEntry] {
        &self.canonical
    }

    /// Every nonzero entry including all index permutations, sorted.
    pub fn expanded(&self) -> &[TensorEntry] {
        &self.expanded
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.expanded
            .binary_search_by_key(&(i, j, k), |e| (e.i, e.j, e.k))
            .map(|pos| self.expanded[pos].value)
            .unwrap_or(0.0)
    }
}

const PERMUTATIONS: [([usize; 3], f64); 6] = [
    ([0, 1, 2], 1.0),
    ([1, 2, 0], 1.0),
    ([2, 0, 1], 1.0),
    ([1, 0, 2], -1.0),
    ([0, 2, 1], -1.0),
    ([2, 1, 0], -1.0),
];

/// A complete orthogonal generator set of su(n) with its structure constants.
#[derive(Debug, Clone)]
pub struct BasisSet {
    n: usize,
    ordering: BasisOrdering,
    generators: Vec<ComplexMatrix>,
    f: StructureTensor,
    g: StructureTensor,
}

impl BasisSet {
    /// Validates `generators` and computes their structure constants.
    pub fn new(ordering: BasisOrdering, generators: Vec<ComplexMatrix>) -> Result<Self> {
        let n = generators.first().map_or(0, |m| m.dim());
        if n < 2 || generators.len() != n * n - 1 {
            return Err(Error::BasisInvalid(format!(
                "expected n²−1 generators of size n ≥ 2, got {} of size {n}",
                generators.len()
            )));
        }
        let (f, g) = structure_constants(&generators)?;
        Ok(Self {
            n,
            ordering,
            generators,
            f,
            g,
        })
    }

    /// Builds the named basis for `n` levels.
    pub fn for_ordering(ordering: BasisOrdering, n: usize) -> Result<Self> {
        match (ordering, n) {
            (BasisOrdering::Ggm, n) if n >= 2 => Ok(ggm_basis(n)),
            (BasisOrdering::PaperGellMann3, 3) => Ok(paper_gellmann3()),
            (BasisOrdering::PauliTensor2q, 4) => Ok(two_qubit_basis()),
            (o, n) => Err(Error::BasisMismatch(format!(
                "ordering {o} is not defined for n = {n}"
            ))),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ordering(&self) -> BasisOrdering {
        self.ordering
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[ComplexMatrix] {
        &self.generators
    }

    pub fn generator(&self, i: usize) -> &ComplexMatrix {
        &self.generators[i]
    }

    pub fn f(&self) -> &StructureTensor {
        &self.f
    }

    pub fn g(&self) -> &StructureTensor {
        &self.g
    }

    /// Coefficients c with H − (Tr H/n)·I = ½ Σ cⱼ λ̂ⱼ, i.e. cⱼ = Tr(H λ̂ⱼ).
    pub fn expand(&self, h: &ComplexMatrix) -> Result<Vec<f64>> {
        if h.dim() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {0}x{0}, basis has n = {1}",
                h.dim(),
                self.n
            )));
        }
        Ok(self
            .generators
            .iter()
            .map(|l| h.trace_of_product(l).re)
            .collect())
    }

    /// ½ Σ cⱼ λ̂ⱼ.
    pub fn combine(&self, coeffs: &[f64]) -> Result<ComplexMatrix> {
        if coeffs.len() != self.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for a basis of {} generators",
                coeffs.len(),
                self.len()
            )));
        }
        let mut out = ComplexMatrix::zeros(self.n);
        for (c, l) in coeffs.iter().zip(&self.generators) {
            if *c != 0.0 {
                out = &out + &l.scale_real(0.5 * c);
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&BasisSetJson::from(self)).expect("basis serializes")
    }

    /// Parses the JSON form; structure constants are recomputed from the
    /// generators and must agree with the stored ones.
    pub fn from_json(s: &str) -> Result<Self> {
        let j: BasisSetJson =
            serde_json::from_str(s).map_err(|e| Error::Malformed(e.to_string()))?;
        let generators = j
            .generators
            .into_iter()
            .map(ComplexMatrix::try_from)
            .collect::<Result<Vec<_>>>()?;
        let basis = Self::new(j.ordering, generators)?;
        if basis.n != j.n {
            return Err(Error::BasisInvalid(format!(
                "declared n = {} but generators are {}x{}",
                j.n, basis.n, basis.n
            )));
        }
        for (stored, computed) in [(&j.f, &basis.f), (&j.g, &basis.g)] {
            for &[i, jj, k, v] in stored {
                let (i, jj, k) = (i as usize, jj as usize, k as usize);
                if i == 0 || jj == 0 || k == 0 {
                    return Err(Error::Malformed("structure indices are 1-based".into()));
                }
                if (computed.get(i - 1, jj - 1, k - 1) - v).abs() > 1e-10 {
                    return Err(Error::BasisInvalid(format!(
                        "stored structure constant ({i},{jj},{k}) = {v} disagrees with the generators"
                    )));
                }
            }
        }
        Ok(basis)
    }
}

#[derive(Serialize, Deserialize)]
struct BasisSetJson {
    n: usize,
    ordering: BasisOrdering,
    generators: Vec<MatrixJson>,
    f: Vec<[f64; 4]>,
    g: Vec<[f64; 4]>,
}

impl From<&BasisSet> for BasisSetJson {
    fn from(b: &BasisSet) -> Self {
        let triplets = |t: &StructureTensor| {
            t.canonical()
                .iter()
                .map(|e| {
                    [
                        (e.i + 1) as f64,
                        (e.j + 1) as f64,
                        (e.k + 1) as f64,
                        e.value,
                    ]
                })
                .collect()
        };
        Self {
            n: b.n,
            ordering: b.ordering,
            generators: b.generators.iter().map(MatrixJson::from).collect(),
            f: triplets(&b.f),
            g: triplets(&b.g),
        }
    }
}

/// Generalized Gell-Mann basis: symmetric pairs (j<k, lexicographic), then
/// antisymmetric pairs in the same order, then diagonals l = 1..n−1.
pub fn ggm_basis(n: usize) -> BasisSet {
    assert!(n >= 2, "ggm_basis needs n ≥ 2");
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|j| ((j + 1)..n).map(move |k| (j, k)))
        .collect();
    let mut gens = Vec::with_capacity(n * n - 1);
    for &(j, k) in &pairs {
        gens.push(&ComplexMatrix::unit(n, j, k) + &ComplexMatrix::unit(n, k, j));
    }
    for &(j, k) in &pairs {
        let mut m = ComplexMatrix::zeros(n);
        m[(j, k)] = c64(0.0, -1.0);
        m[(k, j)] = c64(0.0, 1.0);
        gens.push(m);
    }
    for l in 1..n {
        let scale = (2.0 / (l * (l + 1)) as f64).sqrt();
        let mut d = vec![0.0; n];
        for x in d.iter_mut().take(l) {
            *x = scale;
        }
        d[l] = -(l as f64) * scale;
        gens.push(ComplexMatrix::diag_real(&d));
    }
    BasisSet::new(BasisOrdering::Ggm, gens).expect("generalized Gell-Mann matrices form a basis")
}

/// The eight Gell-Mann matrices in the three-level-dynamics ordering:
/// symmetric (12, 13, 23), antisymmetric (12, 13, 23), then the two diagonals.
pub fn paper_gellmann3() -> BasisSet {
    let o = c64(0.0, 0.0);
    let l = c64(1.0, 0.0);
    let i = c64(0.0, 1.0);
    let r3 = 1.0 / 3f64.sqrt();
    let m = |rows: [[Complex64; 3]; 3]| {
        ComplexMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
            .expect("3x3 literal")
    };
    let gens = vec![
        m([[o, l, o], [l, o, o], [o, o, o]]),
        m([[o, o, l], [o, o, o], [l, o, o]]),
        m([[o, o, o], [o, o, l], [o, l, o]]),
        m([[o, -i, o], [i, o, o], [o, o, o]]),
        m([[o, o, -i], [o, o, o], [i, o, o]]),
        m([[o, o, o], [o, o, -i], [o, i, o]]),
        ComplexMatrix::diag_real(&[1.0, -1.0, 0.0]),
        ComplexMatrix::diag_real(&[r3, r3, -2.0 * r3]),
    ];
    BasisSet::new(BasisOrdering::PaperGellMann3, gens).expect("Gell-Mann matrices form a basis")
}

/// SU(2)⊗SU(2) basis, all scaled by 1/√2: σᵢ⊗I (1–3), I⊗σᵢ (4–6),
/// σ₁⊗σⱼ (7–9), σ₂⊗σⱼ (10–12), σ₃⊗σⱼ (13–15).
pub fn two_qubit_basis() -> BasisSet {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let id = pauli(0);
    let mut gens = Vec::with_capacity(15);
    for a in 1..=3 {
        gens.push(pauli(a).kron(&id).scale_real(s));
    }
    for a in 1..=3 {
        gens.push(id.kron(&pauli(a)).scale_real(s));
    }
    for a in 1..=3 {
        for b in 1..=3 {
            gens.push(pauli(a).kron(&pauli(b)).scale_real(s));
        }
    }
    BasisSet::new(BasisOrdering::PauliTensor2q, gens).expect("Pauli products form a basis")
}

/// Checks generator invariants and computes (f, g).
///
/// With t = Tr(λ̂ᵢλ̂ⱼλ̂ₖ), Hermiticity gives Tr(λ̂ⱼλ̂ᵢλ̂ₖ) = t̄, so
/// f_ijk = Im(t)/2 and g_ijk = Re(t)/2.
pub fn structure_constants(
    generators: &[ComplexMatrix],
) -> Result<(StructureTensor, StructureTensor)> {
    validate_generators(generators)?;
    let m = generators.len();
    let mut f = Vec::new();
    let mut g = Vec::new();
    for i in 0..m {
        for j in i..m {
            let prod = generators[i].matmul(&generators[j]);
            for k in j..m {
                let t = prod.trace_of_product(&generators[k]);
                let fv = t.im / 2.0;
                let gv = t.re / 2.0;
                if fv.abs() >= STRUCTURE_DROP_TOL && i < j && j < k {
                    f.push(TensorEntry { i, j, k, value: fv });
                }
                if gv.abs() >= STRUCTURE_DROP_TOL {
                    g.push(TensorEntry { i, j, k, value: gv });
                }
            }
        }
    }
    Ok((
        StructureTensor::new(Symmetry::Antisymmetric, f),
        StructureTensor::new(Symmetry::Symmetric, g),
    ))
}

fn validate_generators(generators: &[ComplexMatrix]) -> Result<()> {
    let n = generators.first().map_or(0, |m| m.dim());
    for (idx, l) in generators.iter().enumerate() {
        if l.dim() != n {
            return Err(Error::BasisInvalid(format!(
                "generator {} has a different size",
                idx + 1
            )));
        }
        if !l.is_hermitian(BASIS_TOL) {
            return Err(Error::BasisInvalid(format!(
                "generator {} is not Hermitian",
                idx + 1
            )));
        }
        if l.trace().norm() > BASIS_TOL {
            return Err(Error::BasisInvalid(format!(
                "generator {} is not traceless",
                idx + 1
            )));
        }
    }
    for i in 0..generators.len() {
        for j in i..generators.len() {
            let t = generators[i].trace_of_product(&generators[j]);
            let expected = if i == j { 2.0 } else { 0.0 };
            if (t - c64(expected, 0.0)).norm() > BASIS_TOL {
                return Err(Error::BasisInvalid(format!(
                    "Tr(λ{}λ{}) = {t}, expected {expected}",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    Ok(())
}

/// Index map `perm` with `to[perm[i]] == from[i]`. Both bases must contain
/// the same generators up to order.
pub fn basis_permutation(from: &BasisSet, to: &BasisSet) -> Result<Vec<usize>> {
    if from.n != to.n {
        return Err(Error::BasisMismatch(format!(
            "bases have n = {} and n = {}",
            from.n, to.n
        )));
    }
    from.generators
        .iter()
        .enumerate()
        .map(|(i, a)| {
            to.generators
                .iter()
                .position(|b| a.approx_eq(b, 1e-12))
                .ok_or_else(|| {
                    Error::BasisMismatch(format!(
                        "generator {} of {} has no counterpart in {}",
                        i + 1,
                        from.ordering,
                        to.ordering
                    ))
                })
        })
        .collect()
}

/// Re-indexes components: out[perm[i]] = components[i].
pub fn permute_components(components: &[f64], perm: &[usize]) -> Vec<f64> {
    let mut out = vec![0.0; components.len()];
    for (i, &p) in perm.iter().enumerate() {
        out[p] = components[i];
    }
    out
}
