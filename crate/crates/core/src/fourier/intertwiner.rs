use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;

use super::element::EllOneElement;
use super::model::{FiniteQG, ModelKind};
use crate::error::{Error, Result};
use crate::linalg::{c, identity, kron, max_abs, null_space, random_unitary, CMat};
use crate::ring::IrrepId;

const NULL_CUTOFF: f64 = 1e-9;
const RESIDUAL_TOL: f64 = 1e-10;

/// Orthonormal isometries `S_i : H_w → H_u ⊗ H_u′` intertwining `w` into
/// `u ⊗ u′`, with `S_i* S_j = δ_ij I`.
#[derive(Clone, Debug)]
pub struct IntertwinerBasis {
    pub target: IrrepId,
    pub left: IrrepId,
    pub right: IrrepId,
    pub isometries: Vec<CMat>,
}

impl IntertwinerBasis {
    /// The same intertwiner space in the basis `S_j ↦ Σ_i U_ij S_i`.
    pub fn rotated(&self, u: &CMat) -> IntertwinerBasis {
        let isometries = (0..self.isometries.len())
            .map(|j| {
                let mut s = self.isometries[0].map(|_| c(0.0, 0.0));
                for (i, si) in self.isometries.iter().enumerate() {
                    s += si * u[(i, j)];
                }
                s
            })
            .collect();
        IntertwinerBasis {
            isometries,
            ..self.clone()
        }
    }
}

/// All `X` with `a(g)·X = X·b(g)` for every `g`, orthonormal for
/// `⟨X, Y⟩ = Tr(X*Y) / dim b`.
pub(crate) fn solve_intertwiners(a: &[CMat], b: &[CMat]) -> Vec<CMat> {
    let (m, n) = (a[0].nrows(), b[0].nrows());
    let rows = m * n;
    let mut sys = CMat::zeros(rows * a.len(), rows);
    for (k, (ag, bg)) in a.iter().zip(b).enumerate() {
        // vec(AX) = (I ⊗ A) vec X and vec(XB) = (Bᵀ ⊗ I) vec X, column-major.
        let block = kron(&identity(n), ag) - kron(&bg.transpose(), &identity(m));
        sys.view_mut((k * rows, 0), (rows, rows)).copy_from(&block);
    }
    let mut out: Vec<CMat> = Vec::new();
    for v in null_space(&sys, NULL_CUTOFF) {
        let mut x = CMat::from_column_slice(m, n, v.as_slice());
        for y in &out {
            let p = (y.adjoint() * &x).trace() / n as f64;
            x -= y * p;
        }
        let norm = ((x.adjoint() * &x).trace().re / n as f64).sqrt();
        if norm > NULL_CUTOFF {
            out.push(x / c(norm, 0.0));
        }
    }
    out
}

fn triple_name(qg: &FiniteQG, w: usize, u: usize, up: usize) -> String {
    let ids = qg.irreps();
    format!("{} ⊂ {} ⊗ {}", ids[w].id, ids[u].id, ids[up].id)
}

fn compute_basis(qg: &FiniteQG, w: usize, u: usize, up: usize) -> Result<IntertwinerBasis> {
    let ids = qg.irreps();
    let expect = qg.multiplicity(u, up, w);
    if qg.kind() == ModelKind::Cocommutative {
        // Every irreducible is a character; the product is a single one.
        return Ok(IntertwinerBasis {
            target: ids[w].id.clone(),
            left: ids[u].id.clone(),
            right: ids[up].id.clone(),
            isometries: vec![identity(1); expect],
        });
    }
    let n = qg.group().order();
    let tensor: Vec<CMat> = (0..n)
        .map(|g| kron(&ids[u].matrices[g], &ids[up].matrices[g]))
        .collect();
    let sols = solve_intertwiners(&tensor, &ids[w].matrices);
    let err = |reason: String| Error::Intertwiner {
        triple: triple_name(qg, w, u, up),
        reason,
    };
    if sols.len() != expect {
        return Err(err(format!(
            "found {} independent intertwiners, character multiplicity is {expect}",
            sols.len()
        )));
    }
    for s in &sols {
        // Schur: S*S is scalar, and the normalization makes it the identity.
        let dev = max_abs(&(s.adjoint() * s - identity(ids[w].dim)));
        let res = (0..n)
            .map(|g| max_abs(&(&tensor[g] * s - s * &ids[w].matrices[g])))
            .fold(dev, f64::max);
        if res > RESIDUAL_TOL {
            return Err(err(format!("residual {res:.3e}")));
        }
    }
    Ok(IntertwinerBasis {
        target: ids[w].id.clone(),
        left: ids[u].id.clone(),
        right: ids[up].id.clone(),
        isometries: sols,
    })
}

/// Orthonormal intertwiner basis for `w ⊂ u ⊗ u′`, memoized per model.
pub fn intertwiner_basis(
    qg: &FiniteQG,
    w: &IrrepId,
    u: &IrrepId,
    up: &IrrepId,
) -> Result<Arc<IntertwinerBasis>> {
    let key = (qg.checked(w)?, qg.checked(u)?, qg.checked(up)?);
    if let Some(b) = qg.intertwiners.read().unwrap().get(&key) {
        return Ok(b.clone());
    }
    let basis = Arc::new(compute_basis(qg, key.0, key.1, key.2)?);
    qg.intertwiners.write().unwrap().insert(key, basis.clone());
    Ok(basis)
}

/// Convolution on `ℓ¹(Ĝ)` using the memoized intertwiner bases.
pub fn convolve(qg: &FiniteQG, a: &EllOneElement, b: &EllOneElement) -> Result<EllOneElement> {
    convolve_in_bases(qg, a, b, &|w, u, up| intertwiner_basis(qg, w, u, up))
}

/// Convolution with caller-supplied intertwiner bases:
/// `(A ⋆ B)_w = Σ_{u,u′} Σ_i (qdim u · qdim u′ / qdim w) S_i*(A_u ⊗ B_u′)S_i`.
pub fn convolve_in_bases(
    qg: &FiniteQG,
    a: &EllOneElement,
    b: &EllOneElement,
    bases: &dyn Fn(&IrrepId, &IrrepId, &IrrepId) -> Result<Arc<IntertwinerBasis>>,
) -> Result<EllOneElement> {
    let mut out = EllOneElement::zero();
    for (u, au) in &a.blocks {
        let ui = qg.checked(u)?;
        for (up, bu) in &b.blocks {
            let upi = qg.checked(up)?;
            let ab = kron(au, bu);
            for (wi, w) in qg.irreps().iter().enumerate() {
                if qg.multiplicity(ui, upi, wi) == 0 {
                    continue;
                }
                let basis = bases(&w.id, u, up)?;
                let weight = (qg.irreps()[ui].dim * qg.irreps()[upi].dim) as f64 / w.dim as f64;
                let mut block = CMat::zeros(w.dim, w.dim);
                for s in &basis.isometries {
                    block += s.adjoint() * &ab * s;
                }
                out.accumulate(&w.id, &(block * Complex64::from(weight)));
            }
        }
    }
    Ok(out)
}

/// Every intertwiner basis of the model rotated by an independent Haar
/// unitary on its multiplicity space.
pub fn rotated_bases(
    qg: &FiniteQG,
    rng: &mut impl Rng,
) -> Result<std::collections::HashMap<(IrrepId, IrrepId, IrrepId), Arc<IntertwinerBasis>>> {
    let mut out = std::collections::HashMap::new();
    let ids = qg.irreps();
    for w in 0..ids.len() {
        for u in 0..ids.len() {
            for up in 0..ids.len() {
                let k = qg.multiplicity(u, up, w);
                if k == 0 {
                    continue;
                }
                let b = intertwiner_basis(qg, &ids[w].id, &ids[u].id, &ids[up].id)?;
                let rot = b.rotated(&random_unitary(rng, k));
                out.insert(
                    (ids[w].id.clone(), ids[u].id.clone(), ids[up].id.clone()),
                    Arc::new(rot),
                );
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn std_tensor_std_decomposes() {
        let qg = FiniteQG::s3();
        let std = IrrepId::label("std");
        let mut total = 0;
        for w in ["triv", "sgn", "std"] {
            let w = IrrepId::label(w);
            let b = intertwiner_basis(&qg, &w, &std, &std).unwrap();
            assert_eq!(b.isometries.len(), 1);
            total += qg.irrep(&w).unwrap().dim;
        }
        assert_eq!(total, 4);
    }

    #[test]
    fn isometries_have_orthogonal_ranges() {
        let qg = FiniteQG::s3();
        let std = IrrepId::label("std");
        let parts: Vec<CMat> = ["triv", "sgn", "std"]
            .iter()
            .map(|w| {
                intertwiner_basis(&qg, &IrrepId::label(w), &std, &std)
                    .unwrap()
                    .isometries[0]
                    .clone()
            })
            .collect();
        // Σ S S* is the identity on ℂ² ⊗ ℂ².
        let mut sum = CMat::zeros(4, 4);
        for s in &parts {
            sum += s * s.adjoint();
        }
        assert!(max_abs(&(sum - identity(4))) < 1e-10);
    }

    #[test]
    fn memoized() {
        let qg = FiniteQG::cyclic(3);
        let (a, b) = (IrrepId::label("chi1"), IrrepId::label("chi2"));
        let w = IrrepId::label("chi0");
        let x = intertwiner_basis(&qg, &w, &a, &b).unwrap();
        let y = intertwiner_basis(&qg, &w, &a, &b).unwrap();
        assert!(Arc::ptr_eq(&x, &y));
        assert!(intertwiner_basis(&qg, &a, &a, &b)
            .unwrap()
            .isometries
            .is_empty());
    }
}
