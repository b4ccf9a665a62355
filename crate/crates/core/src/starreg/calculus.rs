use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::algebra::{self_adjoint_defect, BanachAlgebra, FiniteAlgebra};
use super::bump::{gauss_legendre, BumpFunction, PanelHats, NODES_PER_PANEL};
use super::exp::banach_exp;
use crate::error::{Error, Result};
use crate::fourier::{self, FiniteQG, ModelKind, QElement};
use crate::linalg::{c, hermitian_apply, max_abs, null_space, operator_norm, CMat};
use crate::ring::IrrepId;

/// Largest `λ` the outer integral may reach before giving up.
pub const LAMBDA_CAP: f64 = 1e4;
/// Length of the run of negligible panels that ends the outer integral.
const QUIET_RUN: f64 = 16.0;
/// Panels between fresh exponentials; in between, `E(λ + h) = E(λ)·E(h)`.
const REANCHOR: usize = 64;
const MAX_REFINEMENTS: usize = 6;

/// `φ{f}` together with its decomposition in the unitization.
#[derive(Clone, Debug)]
pub struct CalculusResult {
    pub element: QElement,
    /// `(1/2π) ∫ φ̂(λ) dλ = φ(0)`, the unit component.
    pub unit_coefficient: Complex64,
    /// `element − unit_coefficient·1`, the part lying in the ideal.
    pub nonunital: QElement,
    /// The outer integral ran over `[−cutoff, cutoff]`.
    pub cutoff: f64,
    pub nodes_per_unit: usize,
    /// Norm of the change at the last refinement.
    pub change: f64,
}

struct Pass {
    sum: QElement,
    unit: Complex64,
    cutoff: f64,
}

/// One pass of the outer integral with panels of width `h`. Panel `n`
/// covers `[nh, (n+1)h]` on the right and `[−(n+1)h, −nh]` on the left;
/// since `φ` is real, `φ̂` on the left is the conjugate of the right.
fn integrate(
    alg: &dyn BanachAlgebra,
    phi: &BumpFunction,
    f: &QElement,
    h: f64,
    eps: f64,
) -> Result<Pass> {
    let rule = gauss_legendre(NODES_PER_PANEL);
    let m = rule.len();
    let exp_eps = eps * 1e-3;
    // Coefficients this small cannot move the result by more than eps/10.
    let prune = eps * 1e-9;
    let offsets: Vec<f64> = rule.iter().map(|(t, _)| 0.5 * h * (t + 1.0)).collect();
    let at_offsets: Vec<QElement> = offsets
        .iter()
        .map(|&o| banach_exp(alg, f, o, exp_eps).map(|x| x.0.pruned(prune)))
        .collect::<Result<_>>()?;
    let steps = [
        banach_exp(alg, f, h, exp_eps)?.0.pruned(prune),
        banach_exp(alg, f, -h, exp_eps)?.0.pruned(prune),
    ];
    let mut hats = PanelHats::new(phi, offsets, h);
    let mut sum = QElement::zero();
    let mut unit = c(0.0, 0.0);
    let mut anchors = [QElement::zero(), QElement::zero()];
    let mut quiet = [0.0f64; 2];
    let mut n = 0usize;
    while quiet.iter().any(|q| *q < QUIET_RUN) {
        let right_start = n as f64 * h;
        if right_start > LAMBDA_CAP {
            return Err(Error::Quadrature {
                target: eps,
                achieved: f64::NAN,
            });
        }
        let right = hats.at(right_start);
        for side in 0..2 {
            if quiet[side] >= QUIET_RUN {
                continue;
            }
            let lambda0 = if side == 0 {
                right_start
            } else {
                -right_start - h
            };
            anchors[side] = if n % REANCHOR == 0 {
                banach_exp(alg, f, lambda0, exp_eps)?.0.pruned(prune)
            } else {
                alg.multiply(&anchors[side], &steps[side])?.pruned(prune)
            };
            let mut panel_max: f64 = 0.0;
            for j in 0..m {
                let hat = if side == 0 {
                    right[j]
                } else {
                    right[m - 1 - j].conj()
                };
                let e = alg.multiply(&anchors[side], &at_offsets[j])?;
                let weight = 0.5 * h * rule[j].1;
                panel_max = panel_max.max(hat.norm() * alg.norm(&e));
                let z = hat * weight;
                for (id, b) in &e.blocks {
                    sum.accumulate(id, &(b * z));
                }
                unit += hat * weight;
            }
            if panel_max < eps / 10.0 {
                quiet[side] += h;
            } else {
                quiet[side] = 0.0;
            }
        }
        n += 1;
    }
    let scale = c(1.0 / (2.0 * PI), 0.0);
    Ok(Pass {
        sum: sum.scale(scale),
        unit: unit * scale,
        cutoff: n as f64 * h,
    })
}

/// `φ{f} = (1/2π) ∫ e^{iλf} φ̂(λ) dλ` by composite Gauss–Legendre quadrature,
/// starting at 16 nodes per unit of `λ` and doubling until the result moves
/// by less than `eps/10`.
pub fn functional_calculus(
    alg: &dyn BanachAlgebra,
    phi: &BumpFunction,
    f: &QElement,
    eps: f64,
) -> Result<CalculusResult> {
    let defect = self_adjoint_defect(alg, f)?;
    if defect > 1e-12 * alg.norm(f).max(1.0) {
        return Err(Error::Precondition(format!(
            "f is not self-adjoint (defect {defect:e})"
        )));
    }
    let mut h = 1.0;
    let mut prev = integrate(alg, phi, f, h, eps)?;
    let mut change = f64::INFINITY;
    for _ in 0..MAX_REFINEMENTS {
        h /= 2.0;
        let next = integrate(alg, phi, f, h, eps)?;
        change = alg.norm(&next.sum.sub(&prev.sum));
        prev = next;
        if change < eps / 10.0 {
            let unit = alg.unit();
            let nonunital = prev.sum.sub(&unit.scale(prev.unit));
            return Ok(CalculusResult {
                element: prev.sum,
                unit_coefficient: prev.unit,
                nonunital,
                cutoff: prev.cutoff,
                nodes_per_unit: (NODES_PER_PANEL as f64 / h) as usize,
                change,
            });
        }
    }
    Err(Error::Quadrature {
        target: eps / 10.0,
        achieved: change,
    })
}

/// A *-representation of a finite model, given by the images of the matrix
/// units `u_ij` and extended linearly.
#[derive(Clone, Debug)]
pub struct StarRep {
    pub dim: usize,
    images: BTreeMap<(IrrepId, usize, usize), CMat>,
}

fn unit_element(id: &IrrepId, d: usize, i: usize, j: usize) -> QElement {
    let mut m = CMat::zeros(d, d);
    m[(i, j)] = c(1.0, 0.0);
    QElement::single(id.clone(), m)
}

impl StarRep {
    pub fn from_fn(
        qg: &FiniteQG,
        dim: usize,
        image: impl Fn(&QElement) -> Result<CMat>,
    ) -> Result<Self> {
        let mut images = BTreeMap::new();
        for v in qg.irreps() {
            for i in 0..v.dim {
                for j in 0..v.dim {
                    let m = image(&unit_element(&v.id, v.dim, i, j))?;
                    if m.nrows() != dim || m.ncols() != dim {
                        return Err(Error::Precondition(
                            "representation image has the wrong size".into(),
                        ));
                    }
                    images.insert((v.id.clone(), i, j), m);
                }
            }
        }
        Ok(StarRep { dim, images })
    }

    /// The left regular representation on `L²(𝔾)`.
    pub fn regular(qg: &FiniteQG) -> Result<Self> {
        Self::from_fn(qg, qg.group().order(), |a| {
            fourier::regular_representation(qg, a)
        })
    }

    /// Evaluation at the listed group elements of `C(G)`, as a diagonal.
    pub fn evaluation(qg: &FiniteQG, points: &[usize]) -> Result<Self> {
        if qg.kind() != ModelKind::Commutative {
            return Err(Error::Precondition(
                "evaluation needs the commutative model".into(),
            ));
        }
        Self::from_fn(qg, points.len(), |a| {
            let f = fourier::evaluate(qg, a)?;
            Ok(CMat::from_diagonal(&nalgebra::DVector::from_iterator(
                points.len(),
                points.iter().map(|&g| f[g]),
            )))
        })
    }

    /// `u_g ↦ U(g)` for a unitary representation `U` of the group of a
    /// cocommutative model.
    pub fn from_group(qg: &FiniteQG, matrices: &[CMat]) -> Result<Self> {
        if qg.kind() != ModelKind::Cocommutative || matrices.len() != qg.group().order() {
            return Err(Error::Precondition(
                "one matrix per element of the group expected".into(),
            ));
        }
        let dim = matrices[0].nrows();
        Self::from_fn(qg, dim, |a| {
            let (g, z) = a.blocks.iter().next().unwrap();
            Ok(&matrices[qg.position(g).unwrap()] * z[(0, 0)])
        })
    }

    pub fn direct_sum(&self, other: &StarRep) -> StarRep {
        let dim = self.dim + other.dim;
        let images = self
            .images
            .iter()
            .map(|(k, a)| {
                let b = &other.images[k];
                let mut m = CMat::zeros(dim, dim);
                m.view_mut((0, 0), (self.dim, self.dim)).copy_from(a);
                m.view_mut((self.dim, self.dim), (other.dim, other.dim))
                    .copy_from(b);
                (k.clone(), m)
            })
            .collect();
        StarRep { dim, images }
    }

    pub fn apply(&self, a: &QElement) -> Result<CMat> {
        let mut out = CMat::zeros(self.dim, self.dim);
        for (id, lam) in &a.blocks {
            for i in 0..lam.nrows() {
                for j in 0..lam.ncols() {
                    let img = self
                        .images
                        .get(&(id.clone(), i, j))
                        .ok_or_else(|| Error::UnknownIrrep(id.to_string()))?;
                    out += img * lam[(i, j)];
                }
            }
        }
        Ok(out)
    }

    /// Largest violation of `π(ab) = π(a)π(b)` and `π(a*) = π(a)*` over
    /// matrix units.
    pub fn residual(&self, qg: &FiniteQG) -> Result<f64> {
        let units: Vec<QElement> = self
            .images
            .keys()
            .map(|(id, i, j)| unit_element(id, qg.irrep(id).unwrap().dim, *i, *j))
            .collect();
        let mut worst: f64 = 0.0;
        for a in &units {
            let pa = self.apply(a)?;
            worst = worst.max(max_abs(
                &(self.apply(&fourier::star(qg, a)?)? - pa.adjoint()),
            ));
            for b in &units {
                let lhs = self.apply(&fourier::multiply(qg, a, b)?)?;
                worst = worst.max(max_abs(&(lhs - &pa * self.apply(b)?)));
            }
        }
        Ok(worst)
    }

    pub fn check(&self, qg: &FiniteQG) -> Result<f64> {
        let r = self.residual(qg)?;
        if r > 1e-9 {
            return Err(Error::NotStarRepresentation(r));
        }
        Ok(r)
    }

    /// Orthonormal basis (in matrix-unit coordinates) of `ker π`.
    pub fn kernel(&self, qg: &FiniteQG) -> Vec<QElement> {
        let keys: Vec<_> = self.images.keys().cloned().collect();
        let n2 = self.dim * self.dim;
        let mut stack = CMat::zeros(n2.max(1), keys.len());
        for (k, key) in keys.iter().enumerate() {
            stack
                .column_mut(k)
                .rows_mut(0, n2)
                .copy_from_slice(self.images[key].as_slice());
        }
        null_space(&stack, 1e-9)
            .into_iter()
            .map(|v| {
                let mut out = QElement::zero();
                for ((id, i, j), z) in keys.iter().zip(v.iter()) {
                    let d = qg.irrep(id).unwrap().dim;
                    out.accumulate(id, &(unit_element(id, d, *i, *j).blocks[id].clone() * *z));
                }
                out
            })
            .collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CalculusCheck {
    /// `‖π(φ{f}) − φ(π(f))‖` in operator norm.
    pub residual: f64,
    pub rep_residual: f64,
    pub unit_coefficient: [f64; 2],
    pub phi_at_zero: f64,
    /// `‖φ(π(f))‖`.
    pub spectral_norm: f64,
    pub cutoff: f64,
}

/// Compares `π(φ{f})` with the spectral calculus `φ(π(f))`.
pub fn calculus_representation_check(
    qg: &FiniteQG,
    phi: &BumpFunction,
    f: &QElement,
    pi: &StarRep,
    eps: f64,
) -> Result<CalculusCheck> {
    let rep_residual = pi.check(qg)?;
    let alg = FiniteAlgebra(qg);
    let calc = functional_calculus(&alg, phi, f, eps)?;
    let pf = pi.apply(f)?;
    let pf = (&pf + pf.adjoint()) * c(0.5, 0.0);
    let spectral = hermitian_apply(&pf, |x| c(phi.eval(x), 0.0));
    let lhs = pi.apply(&calc.element)?;
    Ok(CalculusCheck {
        residual: operator_norm(&(lhs - &spectral)),
        rep_residual,
        unit_coefficient: [calc.unit_coefficient.re, calc.unit_coefficient.im],
        phi_at_zero: phi.eval(0.0),
        spectral_norm: operator_norm(&spectral),
        cutoff: calc.cutoff,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DominationReport {
    pub passed: bool,
    pub kernel_dim: usize,
    /// `‖π(f)‖ − ‖ρ(f)‖` per sample.
    pub margins: Vec<f64>,
    pub min_margin: f64,
}

/// Checks `‖ρ(f)‖ ≤ ‖π(f)‖` on self-adjoint samples after verifying
/// `ker π ⊆ ker ρ`.
pub fn norm_domination_check(
    qg: &FiniteQG,
    pi: &StarRep,
    rho: &StarRep,
    fs: &[QElement],
) -> Result<DominationReport> {
    pi.check(qg)?;
    rho.check(qg)?;
    let kernel = pi.kernel(qg);
    for k in &kernel {
        let r = operator_norm(&rho.apply(k)?);
        if r > 1e-8 {
            return Err(Error::Precondition(format!(
                "ker π ⊄ ker ρ: ‖ρ(k)‖ = {r:.3e} for k = {}",
                k.to_json()
            )));
        }
    }
    let mut margins = Vec::with_capacity(fs.len());
    for f in fs {
        let d = fourier::star(qg, f)?.distance(f);
        if d > 1e-12 {
            return Err(Error::Precondition(format!(
                "sample is not self-adjoint (defect {d:e})"
            )));
        }
        margins.push(operator_norm(&pi.apply(f)?) - operator_norm(&rho.apply(f)?));
    }
    let min_margin = margins.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(DominationReport {
        passed: margins.iter().all(|m| *m >= -1e-10),
        kernel_dim: kernel.len(),
        margins,
        min_margin,
    })
}

/// A random self-adjoint element `(a + a*)/2` of a finite model.
pub fn random_self_adjoint(qg: &FiniteQG, rng: &mut impl rand::Rng) -> Result<QElement> {
    let a = fourier::random_element(qg, rng);
    Ok(a.add(&fourier::star(qg, &a)?).scale(c(0.5, 0.0)))
}
