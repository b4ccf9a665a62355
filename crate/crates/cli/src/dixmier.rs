use std::path::Path;

use qgrowth_core::fourier::{FiniteQG, ModelKind, QElement};
use qgrowth_core::linalg::identity;
use qgrowth_core::ring::load_ring;
use qgrowth_core::starreg::{
    calculus_representation_check, element_growth_exponent_with, log_grid, norm_domination_check,
    random_self_adjoint, BanachAlgebra, BumpFunction, ExpLimits, FiniteAlgebra, GroupDualAlgebra,
    StarRep,
};
use qgrowth_core::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::args::{Dixmier, RunConfig};
use crate::commands::{load_model, pretty};
use crate::{CliError, Outcome};

fn read_element(path: &Path, alg: &dyn BanachAlgebra) -> Result<QElement, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let value: Value = serde_json::from_str(&text).map_err(Error::from)?;
    Ok(QElement::from_json_with(
        &value,
        &path.display().to_string(),
        |s| alg.parse_irrep(s),
    )?)
}

fn grid(lo: f64, hi: f64, steps: usize, linear: bool) -> Result<Vec<f64>, CliError> {
    if !(lo > 0.0 && hi > lo) || steps < 2 {
        return Err(CliError::Spec(format!(
            "λ grid needs 0 < lambda-min < lambda-max and at least 2 steps, got [{lo}, {hi}] in {steps}"
        )));
    }
    Ok(if linear {
        (0..steps)
            .map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64)
            .collect()
    } else {
        log_grid(lo, hi, steps)
    })
}

fn parse_bump(text: &str) -> Result<BumpFunction, CliError> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Spec(format!("cannot parse bump support `{text}`")))?;
    match parts.as_slice() {
        [a, b] => Ok(BumpFunction::bump(*a, *b)?),
        _ => Err(CliError::Spec(format!(
            "bump support must be `a,b`, got `{text}`"
        ))),
    }
}

fn samples(cfg: &RunConfig, qg: &FiniteQG, count: usize) -> Result<Vec<QElement>, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    (0..count)
        .map(|_| Ok(random_self_adjoint(qg, &mut rng)?))
        .collect()
}

pub fn run(cfg: &RunConfig, experiment: &Dixmier) -> Result<Outcome, CliError> {
    match experiment {
        Dixmier::GrowthExponent {
            ring,
            group,
            element,
            lambda_min,
            lambda_max,
            lambda_steps,
            linear,
        } => {
            let lambdas = grid(*lambda_min, *lambda_max, *lambda_steps, *linear)?;
            let eps = cfg.tol.unwrap_or(1e-10);
            let mut limits = ExpLimits::default();
            if let Some(cap) = cfg.cap {
                limits.support_cap = cap;
            }
            let (growth, name) = match (ring, group) {
                (Some(r), _) => {
                    let alg = GroupDualAlgebra::new(load_ring(r)?)?;
                    let f = read_element(element, &alg)?;
                    (
                        element_growth_exponent_with(&alg, &f, &lambdas, eps, limits)?,
                        alg.name(),
                    )
                }
                (None, Some(g)) => {
                    let qg = load_model(g)?;
                    let alg = FiniteAlgebra(&qg);
                    let f = read_element(element, &alg)?;
                    (
                        element_growth_exponent_with(&alg, &f, &lambdas, eps, limits)?,
                        alg.name(),
                    )
                }
                (None, None) => {
                    return Err(CliError::Spec("one of --ring, --group is required".into()))
                }
            };
            let points: Vec<Value> = growth
                .points
                .iter()
                .map(|(l, n, t)| json!([l, n, t]))
                .collect();
            Ok(Outcome::ok(pretty(&json!({
                "algebra": name,
                "gamma": growth.gamma,
                "uncertainty": growth.uncertainty,
                "points": points,
            }))))
        }
        Dixmier::Calculus {
            group,
            element,
            samples: count,
            bump,
        } => {
            let qg = load_model(group)?;
            let phi = parse_bump(bump)?;
            let tol = cfg.tol.unwrap_or(1e-6);
            let fs = match element {
                Some(p) => vec![read_element(p, &FiniteAlgebra(&qg))?],
                None => samples(cfg, &qg, *count)?,
            };
            let pi = StarRep::regular(&qg)?;
            let mut checks = Vec::with_capacity(fs.len());
            for f in &fs {
                checks.push(calculus_representation_check(
                    &qg,
                    &phi,
                    f,
                    &pi,
                    tol * 1e-2,
                )?);
            }
            let worst = checks.iter().map(|c| c.residual).fold(0.0, f64::max);
            let passed = worst < tol;
            Ok(Outcome::new(
                if passed { 0 } else { 1 },
                pretty(&json!({
                    "model": qg.name(),
                    "bump": phi.support(),
                    "tol": tol,
                    "checks": checks,
                    "max_residual": worst,
                    "passed": passed,
                })),
            ))
        }
        Dixmier::Domination {
            group,
            samples: count,
            points,
        } => {
            let qg = load_model(group)?;
            let pi = StarRep::regular(&qg)?;
            let rho = match (qg.kind(), points) {
                (ModelKind::Commutative, Some(names)) => {
                    let idx: Vec<usize> = names
                        .split(',')
                        .map(|n| {
                            qg.group().position(n.trim()).ok_or_else(|| {
                                CliError::Spec(format!("unknown group element `{n}`"))
                            })
                        })
                        .collect::<Result<_, _>>()?;
                    StarRep::evaluation(&qg, &idx)?
                }
                (ModelKind::Commutative, None) => {
                    StarRep::evaluation(&qg, &[qg.group().identity()])?
                }
                (ModelKind::Cocommutative, None) => {
                    let trivial = vec![identity(1); qg.group().order()];
                    StarRep::from_group(&qg, &trivial)?
                }
                (ModelKind::Cocommutative, Some(_)) => {
                    return Err(CliError::Spec("--points needs a commutative model".into()))
                }
            };
            let fs = samples(cfg, &qg, *count)?;
            let rep = norm_domination_check(&qg, &pi, &rho, &fs)?;
            Ok(Outcome::new(
                if rep.passed { 0 } else { 1 },
                pretty(&json!({ "model": qg.name(), "report": rep })),
            ))
        }
    }
}
