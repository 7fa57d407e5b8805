//! Subcommand handlers. Each returns the JSON payload printed on success.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use qdm_core::bloch::{char_coeffs_newton, from_density, is_physical, power_traces, BlochVector};
use qdm_core::composite::{
    composite_density, family_bell_diag, family_five_param, family_projector, family_two_param,
    family_werner_pt, sample_composite_with,
};
use qdm_core::dynamics::{integrate_three_level, ThreeLevelModel};
use qdm_core::jarlskog::{density_from_params, sample_with, su_from_params, JarlskogParams};
use qdm_core::matrix::hermitian_eigen;
use qdm_core::su_basis::{BasisOrdering, BasisSet};
use qdm_core::two_qubit::{ppt_separable_with, werner, Separability, WERNER_PHYSICAL_RANGE};
use qdm_core::{ComplexMatrix, Error};

use crate::input::{parse_list, parse_omega0, read_bloch, read_file, read_state};
use crate::{
    BasisArgs, Cli, CliError, Command, FamilyArgs, FamilyKind, JarlskogAction, SampleArgs,
    SimulateArgs, StateInput,
};

type CmdResult = Result<Value, CliError>;

pub fn run(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Check(input) => check(input, cli.eps),
        Command::Simulate(args) => simulate(args, cli),
        Command::Sample(args) => sample(args, cli.seed),
        Command::Family(args) => family(args, cli.eps),
        Command::Basis(args) => basis(args),
        Command::Jarlskog {
            action: JarlskogAction::Build { params },
        } => {
            let text = read_file(params)?;
            let p = JarlskogParams::from_json(&text).map_err(|e| match e {
                Error::Malformed(msg) => CliError::Usage(format!("{}: {msg}", params.display())),
                other => CliError::Domain(other),
            })?;
            Ok(json!({
                "unitary": su_from_params(&p)?,
                "density": density_from_params(&p)?,
            }))
        }
        Command::Invariants(input) => invariants(input),
    }
}

fn min_eigenvalue(rho: &ComplexMatrix) -> Result<f64, CliError> {
    Ok(hermitian_eigen(rho)?.min_eigenvalue())
}

fn check(input: &StateInput, eps: f64) -> CmdResult {
    let (rho, _) = read_state(input)?;
    let verdict = is_physical(&rho, eps)?;
    Ok(json!({
        "physical": verdict.physical,
        "coeffs": verdict.coeffs.a,
        "min_eig": min_eigenvalue(&rho)?,
    }))
}

fn invariants(input: &StateInput) -> CmdResult {
    let (rho, bloch) = read_state(input)?;
    rho.check_hermitian(qdm_core::matrix::HERMITIAN_TOL)?;
    let n = rho.dim();
    let mut payload = json!({
        "n": n,
        "trace_invariants": power_traces(&rho, n),
        "coeffs": char_coeffs_newton(&rho)?.a,
    });
    if let Some((v, _)) = bloch {
        payload["bloch_norm"] = json!(v.norm());
    }
    Ok(payload)
}

fn gellmann3() -> Result<BasisSet, CliError> {
    Ok(BasisSet::for_ordering(BasisOrdering::PaperGellMann3, 3)?)
}

/// Initial vector in the three-level Gell-Mann basis; other bases are
/// converted through the density matrix.
fn initial_state(args: &SimulateArgs, basis: &BasisSet) -> Result<BlochVector, CliError> {
    let Some(path) = &args.init else {
        return Ok(from_density(
            &ComplexMatrix::diag_real(&[1.0, 0.0, 0.0]),
            basis,
        )?);
    };
    let v = read_bloch(path, Some(3), BasisOrdering::PaperGellMann3)?;
    if v.basis == BasisOrdering::PaperGellMann3 {
        return Ok(v);
    }
    let own = BasisSet::for_ordering(v.basis, v.n).map_err(|e| CliError::Usage(e.to_string()))?;
    let rho = qdm_core::bloch::to_density(&v, &own)?;
    if rho.dim() != 3 {
        return Err(CliError::Usage(format!(
            "{}: initial state must be three-level, got n = {}",
            path.display(),
            v.n
        )));
    }
    Ok(from_density(&rho, basis)?)
}

fn simulate(args: &SimulateArgs, cli: &Cli) -> CmdResult {
    let omega0 = parse_omega0(&args.omega0)?;
    let model = ThreeLevelModel::new(args.a, args.b, args.delta, omega0)?;
    let basis = gellmann3()?;
    let v0 = initial_state(args, &basis)?;
    let traj = integrate_three_level(&model, &v0, args.t, args.dt)?;

    if let Some(path) = &cli.out {
        std::fs::write(path, traj.to_csv())
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
    }

    let lengths: Vec<[f64; 3]> = traj
        .diagnostics
        .iter()
        .filter_map(|d| d.block_lengths)
        .collect();
    let length_drift = lengths.first().map(|first| {
        let mut drift = [0.0f64; 3];
        for l in &lengths {
            for k in 0..3 {
                drift[k] = drift[k].max((l[k] - first[k]).abs());
            }
        }
        json!({ "Lambda3": drift[0], "Lambda4": drift[1], "Lambda1": drift[2] })
    });
    Ok(json!({
        "model": "three-level",
        "samples": traj.times.len(),
        "t_final": traj.times.last().copied().unwrap_or(0.0),
        "max_length_drift": length_drift,
        "max_trace_invariant_drift": traj.invariant_drift(),
        "csv": cli.out.as_ref().map(|p| p.display().to_string()),
    }))
}

fn parse_pair(s: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Usage(format!("--composite expects n,m, got {s:?}"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    Ok((
        a.trim().parse().map_err(|_| bad())?,
        b.trim().parse().map_err(|_| bad())?,
    ))
}

fn sample(args: &SampleArgs, seed: u64) -> CmdResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut states = Vec::with_capacity(args.count);
    if let Some(spec) = &args.composite {
        let (n, m) = parse_pair(spec)?;
        for _ in 0..args.count {
            let params = sample_composite_with(n, m, &mut rng)?;
            let matrix = composite_density(&params)?;
            states.push(json!({ "n": n, "m": m, "params": params, "matrix": matrix }));
        }
        return Ok(json!({ "kind": "composite", "n": n, "m": m, "seed": seed, "states": states }));
    }
    for _ in 0..args.count {
        let params = sample_with(args.n, &mut rng)?;
        let matrix = density_from_params(&params)?;
        states.push(json!({ "params": params, "matrix": matrix }));
    }
    Ok(json!({ "kind": "jarlskog", "n": args.n, "seed": seed, "states": states }))
}

fn require(name: &str, v: Option<f64>) -> Result<f64, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("--{name} is required for this family")))
}

fn weights(args: &FamilyArgs) -> Result<[f64; 4], CliError> {
    let raw = args
        .weights
        .as_deref()
        .ok_or_else(|| CliError::Usage("--weights p1,p2,p3,p4 is required".into()))?;
    let list = parse_list("weights", raw)?;
    list.try_into()
        .map_err(|_| CliError::Usage("--weights needs exactly four values".into()))
}

fn family(args: &FamilyArgs, eps: f64) -> CmdResult {
    let (name, matrix) = match args.kind {
        FamilyKind::Werner => {
            let x = require("x", args.x)?;
            let (lo, hi) = WERNER_PHYSICAL_RANGE;
            if !(lo..=hi).contains(&x) {
                return Err(Error::OutOfRange(format!("x = {x} outside [-1/3, 1]")).into());
            }
            ("werner", werner(x))
        }
        FamilyKind::WernerPt => ("werner-pt", family_werner_pt(require("p", args.p)?)?),
        FamilyKind::Projector => ("projector", family_projector(require("alpha", args.alpha)?)),
        FamilyKind::TwoParam => (
            "two-param",
            family_two_param(require("p", args.p)?, require("alpha", args.alpha)?)?,
        ),
        FamilyKind::FiveParam => (
            "five-param",
            family_five_param(
                weights(args)?,
                require("alpha", args.alpha)?,
                require("beta", args.beta)?,
            )?,
        ),
        FamilyKind::BellDiag => ("bell-diag", family_bell_diag(weights(args)?)?),
    };
    let mut payload = json!({ "family": name, "matrix": matrix });
    if args.ppt {
        let verdict = ppt_separable_with(&matrix, 2, 2, eps)?;
        payload["separable"] = json!(verdict == Separability::Separable);
        payload["verdict"] = json!(verdict);
    }
    Ok(payload)
}

fn basis(args: &BasisArgs) -> CmdResult {
    let set = BasisSet::for_ordering(args.ordering.into(), args.n)?;
    Ok(serde_json::from_str(&set.to_json()).expect("basis JSON parses"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composite_pair() {
        assert_eq!(parse_pair("2,3").unwrap(), (2, 3));
        assert_eq!(parse_pair(" 2 , 2 ").unwrap(), (2, 2));
        assert!(parse_pair("2").is_err());
        assert!(parse_pair("a,2").is_err());
    }
}
