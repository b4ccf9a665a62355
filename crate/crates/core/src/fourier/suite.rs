use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::element::EllOneElement;
use super::intertwiner::{convolve, convolve_in_bases, rotated_bases};
use super::model::{FiniteQG, ModelKind};
use super::ops::{
    bullet, ell_one_norm, ell_one_star, fourier_transform, haar, haar_group_average,
    inverse_fourier, l1_norm, multiply, orthogonality_residual, plancherel_residual,
    random_element, semisimplicity_margin, star,
};
use crate::error::{Error, Result};
use crate::ring::IrrepId;

/// Worst residuals of the Fourier identities over a seeded random sample.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub model: String,
    pub samples: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub morphism: f64,
    pub inversion: f64,
    pub isometry: f64,
    pub plancherel: f64,
    pub orthogonality: f64,
    pub basis_independence: f64,
    pub involution: f64,
    pub star_involutive: f64,
    pub star_bullet: f64,
    pub haar_crosscheck: f64,
    /// Largest `‖ab‖₁ / (‖a‖₁‖b‖₁)`; at most 1 in a Banach algebra.
    pub submultiplicativity: f64,
    /// Smallest singular value of `a ↦ π(a)`; positive iff faithful.
    pub semisimplicity: f64,
    pub passed: bool,
}

impl SuiteReport {
    pub fn residuals(&self) -> [(&'static str, f64); 10] {
        [
            ("morphism", self.morphism),
            ("inversion", self.inversion),
            ("isometry", self.isometry),
            ("plancherel", self.plancherel),
            ("orthogonality", self.orthogonality),
            ("basis_independence", self.basis_independence),
            ("involution", self.involution),
            ("star_involutive", self.star_involutive),
            ("star_bullet", self.star_bullet),
            ("haar_crosscheck", self.haar_crosscheck),
        ]
    }
}

/// Runs every identity on `samples` random elements drawn from `seed`.
pub fn verify(qg: &FiniteQG, samples: usize, seed: u64, tol: f64) -> Result<SuiteReport> {
    if samples < 2 {
        return Err(Error::Precondition(
            "the suite needs at least two samples".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let elems: Vec<_> = (0..samples).map(|_| random_element(qg, &mut rng)).collect();
    let bases = rotated_bases(qg, &mut rng)?;
    let rotated = |w: &IrrepId, u: &IrrepId, up: &IrrepId| {
        bases
            .get(&(w.clone(), u.clone(), up.clone()))
            .cloned()
            .ok_or_else(|| Error::Precondition("missing rotated basis".into()))
    };

    let mut r = SuiteReport {
        model: qg.name().to_string(),
        samples,
        seed,
        tolerance: tol,
        morphism: 0.0,
        inversion: 0.0,
        isometry: 0.0,
        plancherel: 0.0,
        orthogonality: 0.0,
        basis_independence: 0.0,
        involution: 0.0,
        star_involutive: 0.0,
        star_bullet: 0.0,
        haar_crosscheck: 0.0,
        submultiplicativity: 0.0,
        semisimplicity: semisimplicity_margin(qg)?,
        passed: false,
    };
    for u in qg.irreps() {
        for v in qg.irreps() {
            r.orthogonality = r
                .orthogonality
                .max(orthogonality_residual(qg, &u.id, &v.id)?);
        }
    }
    let transforms: Vec<EllOneElement> = elems
        .iter()
        .map(|a| fourier_transform(qg, a))
        .collect::<Result<_>>()?;
    for (k, a) in elems.iter().enumerate() {
        let b = &elems[(k + 1) % samples];
        let (fa, fb) = (&transforms[k], &transforms[(k + 1) % samples]);
        let ab = multiply(qg, a, b)?;
        let conv = convolve(qg, fa, fb)?;
        r.morphism = r.morphism.max(fourier_transform(qg, &ab)?.distance(&conv));
        r.basis_independence = r
            .basis_independence
            .max(convolve_in_bases(qg, fa, fb, &rotated)?.distance(&conv));
        r.inversion = r.inversion.max(inverse_fourier(qg, fa)?.distance(a));
        r.isometry = r.isometry.max((ell_one_norm(qg, fa)? - l1_norm(a)).abs());
        r.plancherel = r.plancherel.max(plancherel_residual(qg, a)?);
        let sa = star(qg, a)?;
        r.involution = r
            .involution
            .max(fourier_transform(qg, &sa)?.distance(&ell_one_star(qg, fa)?));
        r.star_involutive = r.star_involutive.max(star(qg, &sa)?.distance(a));
        r.star_bullet = r.star_bullet.max(bullet(qg, a)?.distance(&sa));
        if qg.kind() == ModelKind::Commutative {
            r.haar_crosscheck = r
                .haar_crosscheck
                .max((haar(qg, a) - haar_group_average(qg, a)?).norm());
        }
        r.submultiplicativity = r
            .submultiplicativity
            .max(l1_norm(&ab) / (l1_norm(a) * l1_norm(b)));
    }
    r.passed = r.residuals().iter().all(|(_, x)| *x < tol)
        && r.submultiplicativity <= 1.0 + tol
        && r.semisimplicity > tol;
    Ok(r)
}
