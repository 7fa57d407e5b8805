//! Reading states and parameters from files. Anything unreadable or
//! malformed is a usage error.

use std::path::Path;

use qdm_core::bloch::{to_density, BlochVector};
use qdm_core::dynamics::RabiProfile;
use qdm_core::su_basis::{BasisOrdering, BasisSet};
use qdm_core::ComplexMatrix;

use crate::{CliError, StateInput};

pub fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn usage(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Usage(format!("{}: {e}", path.display()))
}

pub fn read_matrix(path: &Path) -> Result<ComplexMatrix, CliError> {
    ComplexMatrix::from_json(&read_file(path)?).map_err(|e| usage(path, e))
}

/// Bloch vector file: the full object, or a bare component array combined
/// with `n` and `basis`.
pub fn read_bloch(
    path: &Path,
    n: Option<usize>,
    basis: BasisOrdering,
) -> Result<BlochVector, CliError> {
    let text = read_file(path)?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| usage(path, e))?;
    if value.is_array() {
        let components: Vec<f64> = serde_json::from_value(value).map_err(|e| usage(path, e))?;
        let n = match n {
            Some(n) => n,
            None => {
                infer_n(components.len()).ok_or_else(|| usage(path, "cannot infer n; pass --n"))?
            }
        };
        BlochVector::new(n, basis, components).map_err(|e| usage(path, e))
    } else {
        BlochVector::from_json(&text).map_err(|e| usage(path, e))
    }
}

/// n with n² − 1 = len.
fn infer_n(len: usize) -> Option<usize> {
    let n = ((len + 1) as f64).sqrt().round() as usize;
    (n * n == len + 1 && n >= 2).then_some(n)
}

pub fn basis_for(v: &BlochVector) -> Result<BasisSet, CliError> {
    BasisSet::for_ordering(v.basis, v.n).map_err(|e| CliError::Usage(e.to_string()))
}

/// Density matrix from either source, plus the Bloch vector when given.
pub fn read_state(
    input: &StateInput,
) -> Result<(ComplexMatrix, Option<(BlochVector, BasisSet)>), CliError> {
    if let Some(path) = &input.source.matrix {
        return Ok((read_matrix(path)?, None));
    }
    let path = input
        .source
        .vec
        .as_ref()
        .ok_or_else(|| CliError::Usage("one of --vec or --matrix is required".into()))?;
    let v = read_bloch(path, input.n, input.basis.into())?;
    let basis = basis_for(&v)?;
    let rho = to_density(&v, &basis).map_err(|e| usage(path, e))?;
    Ok((rho, Some((v, basis))))
}

/// Parses the Ω₀ expression.
pub fn parse_omega0(expr: &str) -> Result<RabiProfile, CliError> {
    let bad = || CliError::Usage(format!("cannot parse --omega0 {expr:?}"));
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad());
    if let Ok(value) = expr.trim().parse::<f64>() {
        return Ok(RabiProfile::Constant { value });
    }
    let parts: Vec<&str> = expr.split(':').collect();
    match parts.as_slice() {
        ["const", v] => Ok(RabiProfile::Constant { value: num(v)? }),
        ["sin"] => Ok(RabiProfile::unit_sine()),
        ["sin", amp, freq] => Ok(RabiProfile::Sine {
            amplitude: num(amp)?,
            frequency: num(freq)?,
            phase: 0.0,
        }),
        ["sin", amp, freq, phase] => Ok(RabiProfile::Sine {
            amplitude: num(amp)?,
            frequency: num(freq)?,
            phase: num(phase)?,
        }),
        _ => Err(bad()),
    }
}

/// Comma-separated list of floats.
pub fn parse_list(flag: &str, s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("--{flag}: cannot parse {x:?}")))
        })
        .collect()
}
