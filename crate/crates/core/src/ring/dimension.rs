use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use super::{big_to_f64, FusionRing, IrrepId, RepVector};
use crate::error::{Error, Result};
use crate::growth::{
    ball_with_cap, classify, growth_sequence_with_cap, Classification, DEFAULT_CAP,
};

const KAC_REL_TOL: f64 = 1e-12;
const MULT_REL_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DimensionKind {
    Vector,
    Quantum,
    Custom,
}

impl DimensionKind {
    pub fn name(&self) -> &'static str {
        match self {
            DimensionKind::Vector => "vector",
            DimensionKind::Quantum => "quantum",
            DimensionKind::Custom => "custom",
        }
    }
}

/// A positive function on irreducibles: vector dimension, quantum dimension,
/// or an explicit table.
#[derive(Clone, Debug)]
pub struct DimensionFunction {
    kind: DimensionKind,
    table: Option<Arc<HashMap<IrrepId, f64>>>,
}

impl DimensionFunction {
    pub fn vector() -> Self {
        DimensionFunction {
            kind: DimensionKind::Vector,
            table: None,
        }
    }

    pub fn quantum() -> Self {
        DimensionFunction {
            kind: DimensionKind::Quantum,
            table: None,
        }
    }

    pub fn custom(table: HashMap<IrrepId, f64>) -> Self {
        DimensionFunction {
            kind: DimensionKind::Custom,
            table: Some(Arc::new(table)),
        }
    }

    pub fn kind(&self) -> DimensionKind {
        self.kind
    }

    pub fn value(&self, ring: &dyn FusionRing, id: &IrrepId) -> Result<f64> {
        match &self.table {
            None if self.kind == DimensionKind::Vector => Ok(big_to_f64(&ring.dim(id))),
            None => Ok(ring.qdim(id)),
            Some(t) => t.get(id).copied().ok_or_else(|| {
                Error::Precondition(format!("custom dimension table has no entry for {id}"))
            }),
        }
    }
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs())
}

/// First irreducible in the ball whose quantum and vector dimensions differ,
/// as `(id, dim, qdim)`.
pub fn kac_witness(
    ring: &dyn FusionRing,
    gens: &RepVector,
    n: usize,
) -> Result<Option<(IrrepId, f64, f64)>> {
    let b = ball_with_cap(ring, gens, n, DEFAULT_CAP)?;
    for level in b.levels() {
        for v in level {
            let (d, q) = (big_to_f64(&ring.dim(v)), ring.qdim(v));
            if !rel_close(d, q, KAC_REL_TOL) {
                return Ok(Some((v.clone(), d, q)));
            }
        }
    }
    Ok(None)
}

/// True iff `qdim(v) = dim(v)` on the ball of radius `n` around `gens`.
pub fn is_kac(ring: &dyn FusionRing, gens: &RepVector, n: usize) -> Result<bool> {
    Ok(kac_witness(ring, gens, n)?.is_none())
}

#[derive(Clone, Debug, Serialize)]
pub struct DominanceReport {
    pub passed: bool,
    pub checked: usize,
    /// Smallest `d′(v) − d(v)` over the ball, with where it occurs.
    pub min_margin: f64,
    pub min_margin_at: Option<String>,
    pub violation: Option<String>,
    /// Set when `d′` is not multiplicative on the ball; dominance is then
    /// not evaluated.
    pub multiplicativity_failure: Option<String>,
}

/// Checks `d′(v) − d(v) ≥ 0` on the ball of radius `n_max`, after confirming
/// that `d` grows subexponentially there and that `d′` is a dimension
/// function on the ball.
pub fn dominance_check(
    ring: &dyn FusionRing,
    d: &DimensionFunction,
    d_prime: &DimensionFunction,
    u: &RepVector,
    n_max: usize,
) -> Result<DominanceReport> {
    let seq = growth_sequence_with_cap(ring, u, d, n_max.max(32), DEFAULT_CAP)?;
    let report = classify(&seq)?;
    if let Classification::Exponential(rate) = report.classification {
        return Err(Error::Precondition(format!(
            "d is not subexponential on this ball (rate {rate:.4})"
        )));
    }
    let b = ball_with_cap(ring, u, n_max, DEFAULT_CAP)?;
    if let Some(w) = multiplicativity_failure(ring, d_prime, u, &b)? {
        return Ok(DominanceReport {
            passed: false,
            checked: 0,
            min_margin: f64::NAN,
            min_margin_at: None,
            violation: None,
            multiplicativity_failure: Some(w),
        });
    }
    let mut rep = DominanceReport {
        passed: true,
        checked: 0,
        min_margin: f64::INFINITY,
        min_margin_at: None,
        violation: None,
        multiplicativity_failure: None,
    };
    for level in b.levels() {
        for v in level {
            let (x, y) = (d.value(ring, v)?, d_prime.value(ring, v)?);
            let margin = y - x;
            rep.checked += 1;
            if margin < rep.min_margin {
                rep.min_margin = margin;
                rep.min_margin_at = Some(v.to_string());
            }
            if y < x * (1.0 - KAC_REL_TOL) && rep.violation.is_none() {
                rep.passed = false;
                rep.violation = Some(format!("{v}: d = {x}, d′ = {y}"));
            }
        }
    }
    Ok(rep)
}

/// `d′(ι) = 1`, positivity and `Σ_w N_{vc}^w d′(w) = d′(v) d′(c)` for `v`
/// in the ball and `c` in the support of `u`, as long as the fusion stays in
/// the ball.
fn multiplicativity_failure(
    ring: &dyn FusionRing,
    d: &DimensionFunction,
    u: &RepVector,
    b: &crate::growth::Ball,
) -> Result<Option<String>> {
    let unit = ring.unit();
    let at_unit = d.value(ring, &unit)?;
    if !rel_close(at_unit, 1.0, MULT_REL_TOL) {
        return Ok(Some(format!("value at {unit} is {at_unit}, not 1")));
    }
    for v in b.entries.keys() {
        let x = d.value(ring, v)?;
        if !(x > 0.0) {
            return Ok(Some(format!("value at {v} is {x}")));
        }
    }
    for v in b.entries.keys() {
        for c in u.support() {
            let p = ring.fuse_raw(v, c);
            if p.support().any(|w| !b.contains(w)) {
                continue;
            }
            let mut lhs = 0.0;
            for (w, m) in p.iter() {
                lhs += big_to_f64(m) * d.value(ring, w)?;
            }
            let rhs = d.value(ring, v)? * d.value(ring, c)?;
            if !rel_close(lhs, rhs, MULT_REL_TOL) {
                return Ok(Some(format!(
                    "({v}, {c}): Σ N d′(w) = {lhs} but d′({v})·d′({c}) = {rhs}"
                )));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{SpinKind, SpinRing};

    fn u1() -> RepVector {
        RepVector::singleton(IrrepId::Index(1))
    }

    #[test]
    fn kac_detection() {
        assert!(is_kac(&SpinRing::new(SpinKind::Su2), &u1(), 30).unwrap());
        assert!(is_kac(&SpinRing::new(SpinKind::Ao(3)), &u1(), 30).unwrap());
        let q = SpinRing::new(SpinKind::Su2q(0.5));
        let (id, d, qd) = kac_witness(&q, &u1(), 1).unwrap().unwrap();
        assert_eq!(id, IrrepId::Index(1));
        assert_eq!(d, 2.0);
        assert!((qd - 2.5).abs() <= 1e-12);
    }

    #[test]
    fn quantum_dominates_vector() {
        let r = SpinRing::new(SpinKind::Su2q(0.5));
        let rep = dominance_check(
            &r,
            &DimensionFunction::vector(),
            &DimensionFunction::quantum(),
            &u1(),
            50,
        )
        .unwrap();
        assert!(rep.passed, "{rep:?}");
        assert_eq!(rep.checked, 51);
        assert_eq!(rep.min_margin, 0.0);
    }

    #[test]
    fn self_dominance_has_zero_margin() {
        let r = SpinRing::new(SpinKind::Su2);
        let d = DimensionFunction::vector();
        let rep = dominance_check(&r, &d, &d, &u1(), 40).unwrap();
        assert!(rep.passed);
        assert_eq!(rep.min_margin, 0.0);
    }

    #[test]
    fn table_below_vector_dimension_is_not_multiplicative() {
        let r = SpinRing::new(SpinKind::Su2);
        let table: HashMap<IrrepId, f64> = (0..=5u32)
            .map(|n| (IrrepId::Index(n), if n == 1 { 1.5 } else { (n + 1) as f64 }))
            .collect();
        let rep = dominance_check(
            &r,
            &DimensionFunction::vector(),
            &DimensionFunction::custom(table),
            &u1(),
            5,
        )
        .unwrap();
        assert!(!rep.passed);
        assert!(rep.multiplicativity_failure.is_some());
    }

    #[test]
    fn exponential_d_fails_precondition() {
        let r = SpinRing::new(SpinKind::Ao(3));
        let d = DimensionFunction::vector();
        assert!(matches!(
            dominance_check(&r, &d, &d, &u1(), 40),
            Err(Error::Precondition(_))
        ));
    }
}
