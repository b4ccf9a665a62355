use num_bigint::BigUint;
use serde::Serialize;

use super::ball::DEFAULT_CAP;
use crate::error::{Error, Result};
use crate::ring::{big_ln, check_support, conjugate, rep_dim, tensor_raw, FusionRing, RepVector};

/// Iterates `acc ↦ acc ⊗ u`, calling `visit(k, acc)` for `k = 0..=k_max`.
fn powers(
    ring: &dyn FusionRing,
    u: &RepVector,
    k_max: usize,
    cap: usize,
    mut visit: impl FnMut(usize, &RepVector),
) -> Result<()> {
    check_support(ring, u)?;
    let mut acc = RepVector::singleton(ring.unit());
    visit(0, &acc);
    for k in 1..=k_max {
        acc = tensor_raw(ring, &acc, u);
        if acc.len() > cap {
            return Err(Error::CapExceeded { cap });
        }
        visit(k, &acc);
    }
    Ok(())
}

/// Multiplicity of the unit in `u^{⊗k}`, tracking full multiplicities.
pub fn trivial_multiplicity(ring: &dyn FusionRing, u: &RepVector, k: usize) -> Result<BigUint> {
    let unit = ring.unit();
    let mut out = BigUint::default();
    powers(ring, u, k, DEFAULT_CAP, |j, acc| {
        if j == k {
            out = acc.get(&unit);
        }
    })?;
    Ok(out)
}

/// The sequence `m_{2k}^{1/2k}` with its running maximum.
#[derive(Clone, Debug, Serialize)]
pub struct CoamenabilityWitness {
    /// `m_{2k}` for `k = 1..=k_max`, as decimal strings.
    pub multiplicities: Vec<String>,
    pub roots: Vec<f64>,
    pub running_max: Vec<f64>,
    pub dim_u: f64,
    /// `dim(u)` minus the final running maximum.
    pub distance: f64,
}

pub fn coamenability_witness(
    ring: &dyn FusionRing,
    u: &RepVector,
    k_max: usize,
) -> Result<CoamenabilityWitness> {
    if k_max < 1 {
        return Err(Error::Precondition("k_max must be at least 1".into()));
    }
    check_support(ring, u)?;
    if conjugate(ring, u)?.support().ne(u.support()) {
        return Err(Error::Precondition(format!(
            "generator {u} is not self-conjugate"
        )));
    }
    let unit = ring.unit();
    let mut mults = Vec::with_capacity(k_max);
    powers(ring, u, 2 * k_max, DEFAULT_CAP, |j, acc| {
        if j > 0 && j % 2 == 0 {
            mults.push(acc.get(&unit));
        }
    })?;
    let roots: Vec<f64> = mults
        .iter()
        .enumerate()
        .map(|(i, m)| {
            if m == &BigUint::default() {
                0.0
            } else {
                (big_ln(m) / (2 * (i + 1)) as f64).exp()
            }
        })
        .collect();
    let running_max: Vec<f64> = roots
        .iter()
        .scan(0f64, |best, &r| {
            *best = best.max(r);
            Some(*best)
        })
        .collect();
    let dim_u = crate::ring::big_to_f64(&rep_dim(ring, u));
    Ok(CoamenabilityWitness {
        multiplicities: mults.iter().map(|m| m.to_string()).collect(),
        distance: dim_u - running_max.last().copied().unwrap_or(0.0),
        roots,
        running_max,
        dim_u,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{IrrepId, SpinKind, SpinRing, TorusRing};

    #[test]
    fn su2_catalan() {
        let r = SpinRing::new(SpinKind::Su2);
        let u = RepVector::singleton(IrrepId::Index(1));
        let got: Vec<u32> = (0..=6)
            .map(|k| trivial_multiplicity(&r, &u, k).unwrap().try_into().unwrap())
            .collect();
        assert_eq!(got, [1, 0, 1, 0, 2, 0, 5]);
    }

    #[test]
    fn circle_returns() {
        let r = TorusRing::new(1);
        let u = RepVector::from_pairs([(IrrepId::point(&[1]), 1), (IrrepId::point(&[-1]), 1)]);
        assert_eq!(
            trivial_multiplicity(&r, &u, 2).unwrap(),
            BigUint::from(2u32)
        );
        let w = coamenability_witness(&r, &u, 30).unwrap();
        assert_eq!(w.multiplicities[2], "20");
        assert!(w.running_max.windows(2).all(|p| p[0] <= p[1]));
        assert!(w.distance > 0.0 && w.distance < 0.1);
    }

    #[test]
    fn unit_generator_is_constant_one() {
        let r = SpinRing::new(SpinKind::Su2);
        let u = RepVector::singleton(IrrepId::Index(0));
        let w = coamenability_witness(&r, &u, 5).unwrap();
        assert!(w.roots.iter().all(|&x| x == 1.0));
    }

    #[test]
    fn one_sided_generator_is_rejected() {
        let r = TorusRing::new(1);
        let u = RepVector::singleton(IrrepId::point(&[1]));
        assert!(matches!(
            coamenability_witness(&r, &u, 3),
            Err(Error::Precondition(_))
        ));
    }
}
