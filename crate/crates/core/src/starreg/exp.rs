use num_complex::Complex64;
use serde::Serialize;

use super::algebra::{self_adjoint_defect, BanachAlgebra};
use crate::error::{Error, Result};
use crate::fourier::QElement;
use crate::growth::linear_fit;
use crate::linalg::trace_norm;

/// Hard cap on Taylor terms.
pub const DEFAULT_TERM_CAP: usize = 10_000;
/// Hard cap on the support of intermediate results. Products cost
/// `|supp a|·|supp b|`, so this also bounds the work per squaring.
pub const DEFAULT_SUPPORT_CAP: usize = 20_000;

/// How a computed exponential was truncated.
#[derive(Clone, Debug, Serialize)]
pub struct ExpTruncation {
    /// Taylor order `K` of the scaled series.
    pub order: usize,
    /// Number of squarings `s`; the series is evaluated at `λ / 2^s`.
    pub squarings: u32,
    /// `Σ_{k>K} θ^k / k!` with `θ = |λ|·‖f‖₁ / 2^s`.
    pub series_tail: f64,
    /// Bound on the ℓ¹ distance to the true exponential, including the
    /// growth of the series tail through the squarings and pruned mass.
    pub tail_bound: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct ExpLimits {
    pub term_cap: usize,
    pub support_cap: usize,
}

impl Default for ExpLimits {
    fn default() -> Self {
        ExpLimits {
            term_cap: DEFAULT_TERM_CAP,
            support_cap: DEFAULT_SUPPORT_CAP,
        }
    }
}

/// Upper bound for `Σ_{k>K} θ^k / k!` when `θ < K + 2`.
fn series_tail(theta: f64, k: usize) -> f64 {
    let mut term = 1.0;
    for j in 1..=k + 1 {
        term *= theta / j as f64;
    }
    term / (1.0 - theta / (k + 2) as f64)
}

fn prune(alg: &dyn BanachAlgebra, a: QElement, tol: f64) -> (QElement, f64) {
    let (keep, drop): (Vec<_>, Vec<_>) =
        a.blocks.into_iter().partition(|(_, b)| trace_norm(b) > tol);
    let dropped = QElement::from_blocks(drop);
    (QElement::from_blocks(keep), alg.norm(&dropped))
}

/// `e^{iλf}` by scaling and squaring: a Taylor series at `λ / 2^s`, with
/// `|λ|·‖f‖₁ / 2^s ≤ 1/2`, squared `s` times. The returned bound on the
/// ℓ¹ error is below `eps`.
pub fn banach_exp(
    alg: &dyn BanachAlgebra,
    f: &QElement,
    lambda: f64,
    eps: f64,
) -> Result<(QElement, ExpTruncation)> {
    banach_exp_with(alg, f, lambda, eps, ExpLimits::default())
}

pub fn banach_exp_with(
    alg: &dyn BanachAlgebra,
    f: &QElement,
    lambda: f64,
    eps: f64,
    limits: ExpLimits,
) -> Result<(QElement, ExpTruncation)> {
    if !(eps > 0.0) || !lambda.is_finite() {
        return Err(Error::Precondition(
            "banach_exp needs eps > 0 and finite λ".into(),
        ));
    }
    let theta0 = lambda.abs() * alg.norm(f);
    if theta0 == 0.0 {
        let t = ExpTruncation {
            order: 0,
            squarings: 0,
            series_tail: 0.0,
            tail_bound: 0.0,
        };
        return Ok((alg.unit(), t));
    }
    let mut squarings = 0u32;
    while theta0 / 2f64.powi(squarings as i32) > 0.5 {
        squarings += 1;
    }
    let scale = 2f64.powi(squarings as i32);
    let theta = theta0 / scale;
    let g = f.scale(Complex64::new(0.0, lambda / scale));
    let mut target = eps * 1e-6;
    loop {
        let mut order = 0;
        while series_tail(theta, order) >= target {
            order += 1;
            if order > limits.term_cap {
                return Err(Error::TruncationCap {
                    needed: order,
                    cap: limits.term_cap,
                });
            }
        }
        let tail = series_tail(theta, order);
        let mut term = alg.unit();
        let mut x = alg.unit();
        for k in 1..=order {
            term = alg
                .multiply(&term, &g)?
                .scale(Complex64::new(1.0 / k as f64, 0.0));
            x = x.add(&term);
        }
        let prune_tol = target * 1e-4;
        let mut bound = tail;
        for _ in 0..squarings {
            if x.blocks.len() > limits.support_cap {
                return Err(Error::TruncationCap {
                    needed: x.blocks.len(),
                    cap: limits.support_cap,
                });
            }
            let nx = alg.norm(&x);
            let (y, dropped) = prune(alg, alg.multiply(&x, &x)?, prune_tol);
            bound = bound * (2.0 * nx + bound) + dropped;
            if y.blocks.len() > limits.support_cap {
                return Err(Error::TruncationCap {
                    needed: y.blocks.len(),
                    cap: limits.support_cap,
                });
            }
            x = y;
        }
        if bound < eps {
            let t = ExpTruncation {
                order,
                squarings,
                series_tail: tail,
                tail_bound: bound,
            };
            return Ok((x, t));
        }
        if target < 1e-280 {
            return Err(Error::TruncationCap {
                needed: order,
                cap: limits.term_cap,
            });
        }
        target *= 1e-4;
    }
}

/// Measured growth of `λ ↦ ‖e^{iλf}‖₁`.
#[derive(Clone, Debug, Serialize)]
pub struct ElementGrowth {
    pub gamma: f64,
    pub uncertainty: f64,
    pub intercept: f64,
    /// `(λ, ‖e^{iλf}‖₁, tail bound)`.
    pub points: Vec<(f64, f64, f64)>,
}

/// Least-squares slope of `ln ‖e^{iλf}‖₁` against `ln λ` over `lambdas`.
pub fn element_growth_exponent(
    alg: &dyn BanachAlgebra,
    f: &QElement,
    lambdas: &[f64],
    eps: f64,
) -> Result<ElementGrowth> {
    element_growth_exponent_with(alg, f, lambdas, eps, ExpLimits::default())
}

pub fn element_growth_exponent_with(
    alg: &dyn BanachAlgebra,
    f: &QElement,
    lambdas: &[f64],
    eps: f64,
    limits: ExpLimits,
) -> Result<ElementGrowth> {
    let defect = self_adjoint_defect(alg, f)?;
    if defect > 1e-12 * alg.norm(f).max(1.0) {
        return Err(Error::Precondition(format!(
            "f is not self-adjoint (defect {defect:e})"
        )));
    }
    if lambdas.len() < 8 {
        return Err(Error::Precondition(
            "the λ grid needs at least 8 points".into(),
        ));
    }
    if lambdas[0] <= 0.0 || lambdas.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Precondition(
            "the λ grid must be positive and increasing".into(),
        ));
    }
    let mut points = Vec::with_capacity(lambdas.len());
    for &lambda in lambdas {
        match banach_exp_with(alg, f, lambda, eps, limits) {
            Ok((e, t)) => points.push((lambda, alg.norm(&e), t.tail_bound)),
            Err(err) if err.is_resource_cap() => {
                return Err(Error::LambdaTooLarge {
                    lambda,
                    feasible: points.last().map(|p: &(f64, f64, f64)| p.0),
                })
            }
            Err(err) => return Err(err),
        }
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let fit = linear_fit(&xs, &ys);
    let rel = points.iter().map(|p| p.2 / p.1).fold(0.0, f64::max);
    let span = xs[xs.len() - 1] - xs[0];
    Ok(ElementGrowth {
        gamma: fit.slope,
        uncertainty: fit.stderr + 2.0 * rel / span,
        intercept: fit.intercept,
        points,
    })
}

/// A geometric grid of `steps` points from `lo` to `hi`.
pub fn log_grid(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    if steps == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..steps)
        .map(|i| (a + (b - a) * i as f64 / (steps - 1) as f64).exp())
        .collect()
}
