use serde::Serialize;
use serde_json::json;

use super::fit::linear_fit;
use super::sequence::GrowthSequence;
use crate::error::{Error, Result};

/// Growth type read off a finite sequence.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "type", content = "value", rename_all = "snake_case")]
pub enum Classification {
    Polynomial(f64),
    /// Neither a stable exponential rate nor a clean power law at this length.
    Subexponential,
    Exponential(f64),
}

impl Classification {
    pub fn tag(&self) -> &'static str {
        match self {
            Classification::Polynomial(_) => "polynomial",
            Classification::Subexponential => "subexponential",
            Classification::Exponential(_) => "exponential",
        }
    }
}

/// Thresholds for [`classify_with`].
#[derive(Clone, Copy, Debug)]
pub struct ClassifyParams {
    pub eps_rate: f64,
    pub fit_tol: f64,
    /// Largest relative disagreement of the two half-window log-rates that
    /// still counts as a stable exponential rate.
    pub spread_tol: f64,
    pub window: f64,
    pub min_len: usize,
}

impl Default for ClassifyParams {
    fn default() -> Self {
        ClassifyParams {
            eps_rate: 0.01,
            fit_tol: 0.05,
            spread_tol: 0.05,
            window: 0.5,
            min_len: 32,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthReport {
    pub classification: Classification,
    /// Log-log slope over the window.
    pub gamma: f64,
    /// `exp` of the slope of `ln b` against `n` over the window.
    pub rate: f64,
    pub stderr: f64,
    /// RMS residual per point of the log-log fit.
    pub residual: f64,
    /// Relative disagreement of the log-rates on the two window halves.
    pub rate_spread: f64,
    /// `b(u, n_max)^{1/n_max}`.
    pub r_tail: f64,
    pub window: (usize, usize),
}

impl GrowthReport {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "classification": self.classification.tag(),
            "gamma": self.gamma,
            "rate": self.rate,
            "stderr": self.stderr,
            "residual": self.residual,
            "rate_spread": self.rate_spread,
            "r_tail": self.r_tail,
            "window": [self.window.0, self.window.1],
        })
    }
}

/// Diagnostics of a growth-exponent fit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FitDiagnostics {
    pub stderr: f64,
    pub residual: f64,
    pub window: (usize, usize),
    pub points: usize,
}

fn window_start(n_max: usize, window: f64) -> usize {
    (((1.0 - window) * n_max as f64).ceil() as usize).max(1)
}

/// Least-squares slope of `ln b` against `ln n` over the last `window`
/// fraction of indices.
pub fn gk_fit(seq: &GrowthSequence, window: f64) -> Result<(f64, FitDiagnostics)> {
    fit_from(seq, window_start(seq.n_max(), window))
}

fn fit_from(seq: &GrowthSequence, n0: usize) -> Result<(f64, FitDiagnostics)> {
    let n_max = seq.n_max();
    let points = (n_max + 1).saturating_sub(n0);
    if points < 8 {
        return Err(Error::DegenerateWindow(points));
    }
    let ln = seq.ln_values();
    let xs: Vec<f64> = (n0..=n_max).map(|n| (n as f64).ln()).collect();
    let fit = linear_fit(&xs, &ln[n0..=n_max]);
    Ok((
        fit.slope,
        FitDiagnostics {
            stderr: fit.stderr,
            residual: fit.rms,
            window: (n0, n_max),
            points,
        },
    ))
}

pub fn classify(seq: &GrowthSequence) -> Result<GrowthReport> {
    classify_with(seq, &ClassifyParams::default())
}

/// Tags a sequence as exponential when the tail log-rate exceeds
/// `ln(1 + eps_rate)` consistently on both halves of the window, as
/// polynomial when the log-log fit is clean, and subexponential otherwise.
pub fn classify_with(seq: &GrowthSequence, p: &ClassifyParams) -> Result<GrowthReport> {
    let n_max = seq.n_max();
    if n_max < p.min_len {
        return Err(Error::SequenceTooShort {
            needed: p.min_len,
            have: n_max,
        });
    }
    let ln = seq.ln_values();
    // Short sequences (free groups are only enumerable to n ≈ 13) widen the
    // window to the 8 points a fit needs.
    let n0 = window_start(n_max, p.window)
        .min(n_max.saturating_sub(7))
        .max(1);
    let ns: Vec<f64> = (n0..=n_max).map(|n| n as f64).collect();
    let tail = &ln[n0..=n_max];
    let lin = linear_fit(&ns, tail);
    let mid = ns.len() / 2;
    let s1 = linear_fit(&ns[..=mid], &tail[..=mid]).slope;
    let s2 = linear_fit(&ns[mid..], &tail[mid..]).slope;
    let spread = (s1 - s2).abs() / s1.abs().max(s2.abs()).max(f64::MIN_POSITIVE);
    let rate = lin.slope.exp();
    let (gamma, diag) = fit_from(seq, n0)?;
    let classification = if rate > 1.0 + p.eps_rate && spread < p.spread_tol {
        Classification::Exponential(rate)
    } else if diag.residual < p.fit_tol {
        Classification::Polynomial(gamma)
    } else {
        Classification::Subexponential
    };
    Ok(GrowthReport {
        classification,
        gamma,
        rate,
        stderr: diag.stderr,
        residual: diag.residual,
        rate_spread: spread,
        r_tail: (ln[n_max] / n_max as f64).exp(),
        window: (n0, n_max),
    })
}

/// Parameters of [`strict_growth_constants_with`].
#[derive(Clone, Copy, Debug)]
pub struct StrictParams {
    /// Tail range `[n_lo, n_hi]`; defaults to the upper half of the sequence.
    pub range: Option<(usize, usize)>,
    pub stability_bound: f64,
    /// Largest tolerated slope of `ln(b/n^γ)` against `ln n` on the tail.
    pub drift_tol: f64,
}

impl Default for StrictParams {
    fn default() -> Self {
        StrictParams {
            range: None,
            stability_bound: 1e3,
            drift_tol: 0.25,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StrictGrowth {
    pub c: f64,
    pub d_const: f64,
    pub ratio: f64,
    pub drift: f64,
    pub range: (usize, usize),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StrictGrowthFailure {
    pub reason: String,
    pub constants: Option<StrictGrowth>,
}

pub fn strict_growth_constants(
    seq: &GrowthSequence,
    gamma: f64,
) -> std::result::Result<StrictGrowth, StrictGrowthFailure> {
    strict_growth_constants_with(seq, gamma, &StrictParams::default())
}

/// Bounds `c ≤ b(u,n)/n^γ ≤ D` over the tail. A bounded ratio over a finite
/// range is not evidence by itself, so a persistent trend of the normalized
/// sequence (its log-log slope) also counts as failure.
pub fn strict_growth_constants_with(
    seq: &GrowthSequence,
    gamma: f64,
    p: &StrictParams,
) -> std::result::Result<StrictGrowth, StrictGrowthFailure> {
    let fail = |reason: String, constants| StrictGrowthFailure { reason, constants };
    if gamma.is_nan() || gamma <= 0.0 {
        return Err(fail(format!("gamma must be positive, got {gamma}"), None));
    }
    let n_max = seq.n_max();
    let (lo, hi) = p.range.unwrap_or(((n_max / 2).max(1), n_max));
    let lo = lo.max(1);
    if hi > n_max || hi < lo + 1 {
        return Err(fail(
            format!("range [{lo}, {hi}] not inside [1, {n_max}]"),
            None,
        ));
    }
    let ln = seq.ln_values();
    let xs: Vec<f64> = (lo..=hi).map(|n| (n as f64).ln()).collect();
    let ys: Vec<f64> = (lo..=hi).zip(&xs).map(|(n, x)| ln[n] - gamma * x).collect();
    let c = ys.iter().copied().fold(f64::INFINITY, f64::min).exp();
    let d_const = ys.iter().copied().fold(f64::NEG_INFINITY, f64::max).exp();
    let drift = linear_fit(&xs, &ys).slope;
    let found = StrictGrowth {
        c,
        d_const,
        ratio: d_const / c,
        drift,
        range: (lo, hi),
    };
    if !(c > 0.0 && d_const.is_finite()) {
        return Err(fail("constants degenerate".into(), Some(found)));
    }
    if found.ratio >= p.stability_bound {
        return Err(fail(
            format!("D/c = {:.3e} exceeds stability bound", found.ratio),
            Some(found),
        ));
    }
    if drift.abs() > p.drift_tol {
        return Err(fail(
            format!("b/n^γ drifts like n^{drift:.3} on the tail"),
            Some(found),
        ));
    }
    Ok(found)
}
