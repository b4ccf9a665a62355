use num_complex::Complex64;
use rand::Rng;

use super::element::{EllOneElement, QElement};
use super::model::{FiniteQG, ModelKind};
use crate::error::{Error, Result};
use crate::linalg::{c, hermitian_apply, identity, random_matrix, trace_norm, CMat};
use crate::ring::{FusionRing, IrrepId, IrrepModularData};

/// Block shapes and modular data of the coefficient algebra `Pol(𝔾)`.
pub trait CoefficientSpace {
    fn unit_id(&self) -> IrrepId;
    fn block_dim(&self, id: &IrrepId) -> Option<usize>;
    fn qdim_of(&self, id: &IrrepId) -> f64;
    fn modular(&self, id: &IrrepId) -> Result<IrrepModularData>;
}

impl CoefficientSpace for FiniteQG {
    fn unit_id(&self) -> IrrepId {
        self.unit().clone()
    }

    fn block_dim(&self, id: &IrrepId) -> Option<usize> {
        self.irrep(id).map(|v| v.dim)
    }

    fn qdim_of(&self, id: &IrrepId) -> f64 {
        self.irrep(id).map_or(0.0, |v| v.dim as f64)
    }

    fn modular(&self, id: &IrrepId) -> Result<IrrepModularData> {
        let v = self
            .irrep(id)
            .ok_or_else(|| Error::UnknownIrrep(id.to_string()))?;
        Ok(IrrepModularData {
            id: id.clone(),
            f: identity(v.dim),
            j: self.conj_map(id).unwrap().clone(),
            conj: self.conj_of(id).unwrap().clone(),
        })
    }
}

/// Coefficients of a fusion ring whose irreducibles carry modular data.
pub struct RingCoefficients<'a>(pub &'a dyn FusionRing);

impl CoefficientSpace for RingCoefficients<'_> {
    fn unit_id(&self) -> IrrepId {
        self.0.unit()
    }

    fn block_dim(&self, id: &IrrepId) -> Option<usize> {
        if !self.0.contains(id) {
            return None;
        }
        self.0.small_dim(id).and_then(|d| usize::try_from(d).ok())
    }

    fn qdim_of(&self, id: &IrrepId) -> f64 {
        self.0.qdim(id)
    }

    fn modular(&self, id: &IrrepId) -> Result<IrrepModularData> {
        self.0
            .modular_data(id)
            .ok_or_else(|| Error::MissingModularData(id.to_string()))
    }
}

fn checked_blocks<'a>(
    space: &dyn CoefficientSpace,
    blocks: impl Iterator<Item = (&'a IrrepId, &'a CMat)>,
) -> Result<()> {
    for (id, m) in blocks {
        let d = space
            .block_dim(id)
            .ok_or_else(|| Error::UnknownIrrep(id.to_string()))?;
        if m.nrows() != d || m.ncols() != d {
            return Err(Error::Precondition(format!(
                "block at {id} is {}×{}, expected {d}×{d}",
                m.nrows(),
                m.ncols()
            )));
        }
    }
    Ok(())
}

fn conj(m: &CMat) -> CMat {
    m.map(|z| z.conj())
}

fn inverse_f(f: &CMat) -> CMat {
    hermitian_apply(f, |x| c(1.0 / x, 0.0))
}

/// `h(a)`: the coefficient of the trivial representation.
pub fn haar(space: &dyn CoefficientSpace, a: &QElement) -> Complex64 {
    a.block(&space.unit_id()).map_or(c(0.0, 0.0), |m| m[(0, 0)])
}

/// The involution of `Pol(𝔾)`. With `J(ξ) = M ξ̄`, block `Λ` at `v` goes to
/// `P̄ Λ̄ Qᵀ` at `v̄`, `P = M·conj(F^{1/2})`, `Q = M·conj(F^{-1/2})`.
pub fn star(space: &dyn CoefficientSpace, a: &QElement) -> Result<QElement> {
    checked_blocks(space, a.blocks.iter())?;
    let mut out = QElement::zero();
    for (v, lam) in &a.blocks {
        let md = space.modular(v)?;
        let p = &md.j * conj(&hermitian_apply(&md.f, |x| c(x.sqrt(), 0.0)));
        let q = &md.j * conj(&hermitian_apply(&md.f, |x| c(1.0 / x.sqrt(), 0.0)));
        out.accumulate(&md.conj, &(conj(&p) * conj(lam) * q.transpose()));
    }
    Ok(out)
}

/// The bounded involution `u_ij ↦ conj(v̄)` with `F` omitted: `M̄ Λ̄ Mᵀ` at `v̄`.
pub fn bullet(space: &dyn CoefficientSpace, a: &QElement) -> Result<QElement> {
    checked_blocks(space, a.blocks.iter())?;
    let mut out = QElement::zero();
    for (v, lam) in &a.blocks {
        let md = space.modular(v)?;
        out.accumulate(&md.conj, &(conj(&md.j) * conj(lam) * md.j.transpose()));
    }
    Ok(out)
}

/// `‖a‖₁ = Σ_v ‖Λ_vᵀ‖_tr`, the norm of `a` in the Fourier algebra.
pub fn l1_norm(a: &QElement) -> f64 {
    a.blocks.values().map(trace_norm).sum()
}

/// `â(v) = Λ_vᵀ F_v / qdim v`.
pub fn fourier_transform(space: &dyn CoefficientSpace, a: &QElement) -> Result<EllOneElement> {
    checked_blocks(space, a.blocks.iter())?;
    let mut out = EllOneElement::zero();
    for (v, lam) in &a.blocks {
        let md = space.modular(v)?;
        out.accumulate(v, &(lam.transpose() * &md.f / c(space.qdim_of(v), 0.0)));
    }
    Ok(out)
}

/// Inverse of [`fourier_transform`]: `Λ_v = qdim v · (A_v F_v⁻¹)ᵀ`.
pub fn inverse_fourier(space: &dyn CoefficientSpace, a: &EllOneElement) -> Result<QElement> {
    checked_blocks(space, a.blocks.iter())?;
    let mut out = QElement::zero();
    for (v, m) in &a.blocks {
        let md = space.modular(v)?;
        out.accumulate(
            v,
            &((m * inverse_f(&md.f)).transpose() * c(space.qdim_of(v), 0.0)),
        );
    }
    Ok(out)
}

/// The weighted trace-class norm `Σ_v qdim v · ‖A_v F_v⁻¹‖_tr` on `ℓ¹(𝔾̂)`.
pub fn ell_one_norm(space: &dyn CoefficientSpace, a: &EllOneElement) -> Result<f64> {
    checked_blocks(space, a.blocks.iter())?;
    let mut total = 0.0;
    for (v, m) in &a.blocks {
        let md = space.modular(v)?;
        total += space.qdim_of(v) * trace_norm(&(m * inverse_f(&md.f)));
    }
    Ok(total)
}

/// The involution of `ℓ¹(𝔾̂)` transported from `Pol(𝔾)`:
/// `A^♯` at `v̄` is `Q Ā Q* F_v̄` with `Q = M·conj(F_v^{-1/2})`.
pub fn ell_one_star(space: &dyn CoefficientSpace, a: &EllOneElement) -> Result<EllOneElement> {
    checked_blocks(space, a.blocks.iter())?;
    let mut out = EllOneElement::zero();
    for (v, m) in &a.blocks {
        let md = space.modular(v)?;
        let q = &md.j * conj(&hermitian_apply(&md.f, |x| c(1.0 / x.sqrt(), 0.0)));
        let fbar = space.modular(&md.conj)?.f;
        out.accumulate(&md.conj, &(&q * conj(m) * q.adjoint() * fbar));
    }
    Ok(out)
}

/// Plancherel weight `Σ_v qdim v · Tr(F_v⁻¹ A_v* A_v)`; equals `h(a*a)`
/// for `A = â`.
pub fn plancherel_weight(space: &dyn CoefficientSpace, a: &EllOneElement) -> Result<f64> {
    checked_blocks(space, a.blocks.iter())?;
    let mut total = 0.0;
    for (v, m) in &a.blocks {
        let md = space.modular(v)?;
        total += space.qdim_of(v) * (inverse_f(&md.f) * m.adjoint() * m).trace().re;
    }
    Ok(total)
}

/// A random element with a block on every irreducible of the model.
pub fn random_element(qg: &FiniteQG, rng: &mut impl Rng) -> QElement {
    QElement::from_blocks(
        qg.irreps()
            .iter()
            .map(|v| (v.id.clone(), random_matrix(rng, v.dim, v.dim))),
    )
}

/// Values `a(g)` of an element of `C(G)`.
pub fn evaluate(qg: &FiniteQG, a: &QElement) -> Result<Vec<Complex64>> {
    if qg.kind() != ModelKind::Commutative {
        return Err(Error::Precondition(
            "evaluation needs the commutative model".into(),
        ));
    }
    checked_blocks(qg, a.blocks.iter())?;
    let n = qg.group().order();
    let mut out = vec![c(0.0, 0.0); n];
    for (v, lam) in &a.blocks {
        let irrep = qg.irrep(v).unwrap();
        for (g, val) in out.iter_mut().enumerate() {
            let m = &irrep.matrices[g];
            let mut acc = c(0.0, 0.0);
            for j in 0..irrep.dim {
                for i in 0..irrep.dim {
                    acc += lam[(i, j)] * m[(i, j)];
                }
            }
            *val += acc;
        }
    }
    Ok(out)
}

/// Coefficients of a function on `G` via `λ_ij = (d/|G|) Σ_g conj(v(g)_ij) f(g)`.
pub fn from_function(qg: &FiniteQG, f: &[Complex64]) -> Result<QElement> {
    if qg.kind() != ModelKind::Commutative || f.len() != qg.group().order() {
        return Err(Error::Precondition("function on the group expected".into()));
    }
    let n = f.len() as f64;
    Ok(QElement::from_blocks(qg.irreps().iter().map(|v| {
        let scale = v.dim as f64 / n;
        let lam = CMat::from_fn(v.dim, v.dim, |i, j| {
            f.iter()
                .zip(&v.matrices)
                .map(|(fg, m)| m[(i, j)].conj() * fg)
                .sum::<Complex64>()
                * scale
        });
        (v.id.clone(), lam)
    })))
}

/// Product in `Pol(𝔾)`: pointwise for `C(G)`, convolution for `ℂΓ`.
pub fn multiply(qg: &FiniteQG, a: &QElement, b: &QElement) -> Result<QElement> {
    match qg.kind() {
        ModelKind::Commutative => {
            let fa = evaluate(qg, a)?;
            let fb = evaluate(qg, b)?;
            let prod: Vec<Complex64> = fa.iter().zip(&fb).map(|(x, y)| x * y).collect();
            from_function(qg, &prod)
        }
        ModelKind::Cocommutative => {
            checked_blocks(qg, a.blocks.iter().chain(b.blocks.iter()))?;
            let group = qg.group();
            let mut out = QElement::zero();
            for (g, x) in &a.blocks {
                for (h, y) in &b.blocks {
                    let gi = qg.position(g).unwrap();
                    let hi = qg.position(h).unwrap();
                    let id = &qg.irreps()[group.mul(gi, hi)].id;
                    out.accumulate(id, &(x * y));
                }
            }
            Ok(out)
        }
    }
}

/// `|G|⁻¹ Σ_g a(g)`, an independent evaluation of the Haar state on `C(G)`.
pub fn haar_group_average(qg: &FiniteQG, a: &QElement) -> Result<Complex64> {
    let f = evaluate(qg, a)?;
    Ok(f.iter().sum::<Complex64>() / f.len() as f64)
}

/// Largest deviation, over all matrix units of `u` and `v`, from
/// `h(v_kl* u_ij) = δ_uv δ_ik δ_jl / d` and `h(u_ij v_kl*) = δ_uv δ_ik δ_jl / d`.
pub fn orthogonality_residual(qg: &FiniteQG, u: &IrrepId, v: &IrrepId) -> Result<f64> {
    qg.checked(u)?;
    qg.checked(v)?;
    let units = matrix_units(qg);
    let of = |id: &IrrepId| units.iter().filter(|x| &x.0 == id).collect::<Vec<_>>();
    let mut worst: f64 = 0.0;
    for x in of(v) {
        let sx = star(qg, &x.4)?;
        for y in of(u) {
            let expect = if x.0 == y.0 && x.1 == y.1 && x.2 == y.2 {
                1.0 / x.3 as f64
            } else {
                0.0
            };
            let left = haar(qg, &multiply(qg, &sx, &y.4)?);
            let right = haar(qg, &multiply(qg, &y.4, &sx)?);
            worst = worst
                .max((left - expect).norm())
                .max((right - expect).norm());
        }
    }
    Ok(worst)
}

/// `|h(a*a) − Σ qdim·Tr(F⁻¹ â*â)|`.
pub fn plancherel_residual(qg: &FiniteQG, a: &QElement) -> Result<f64> {
    let lhs = haar(qg, &multiply(qg, &star(qg, a)?, a)?);
    let rhs = plancherel_weight(qg, &fourier_transform(qg, a)?)?;
    Ok((lhs - rhs).norm())
}

/// Matrix units `(v, i, j, dim, u_ij)` in canonical order.
fn matrix_units(qg: &FiniteQG) -> Vec<(IrrepId, usize, usize, usize, QElement)> {
    let mut out = Vec::new();
    for v in qg.irreps() {
        for i in 0..v.dim {
            for j in 0..v.dim {
                let mut m = CMat::zeros(v.dim, v.dim);
                m[(i, j)] = c(1.0, 0.0);
                out.push((v.id.clone(), i, j, v.dim, QElement::single(v.id.clone(), m)));
            }
        }
    }
    out
}

/// Left regular representation `π(a)` on `L²(𝔾)` in the orthonormal basis
/// `√d · u_ij`.
pub fn regular_representation(qg: &FiniteQG, a: &QElement) -> Result<CMat> {
    let units = matrix_units(qg);
    let n = units.len();
    let mut pi = CMat::zeros(n, n);
    for (col, y) in units.iter().enumerate() {
        let ey = y.4.scale(c((y.3 as f64).sqrt(), 0.0));
        let prod = multiply(qg, a, &ey)?;
        for (row, x) in units.iter().enumerate() {
            if let Some(m) = prod.block(&x.0) {
                pi[(row, col)] = m[(x.1, x.2)] / (x.3 as f64).sqrt();
            }
        }
    }
    Ok(pi)
}

/// Smallest singular value of `a ↦ π(a)` over the matrix-unit basis.
/// Positive exactly when the regular representation is faithful, which on
/// a finite-dimensional C*-algebra witnesses semisimplicity.
pub fn semisimplicity_margin(qg: &FiniteQG) -> Result<f64> {
    let units = matrix_units(qg);
    let n = units.len();
    let mut stack = CMat::zeros(n * n, n);
    for (k, x) in units.iter().enumerate() {
        let pi = regular_representation(qg, &x.4)?;
        stack.column_mut(k).copy_from_slice(pi.as_slice());
    }
    let sv = stack.singular_values();
    Ok(sv.iter().copied().fold(f64::INFINITY, f64::min))
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::fourier::convolve;
    use crate::ring::{SpinKind, SpinRing};

    #[test]
    fn delta_at_identity_of_z2() {
        let qg = FiniteQG::cyclic(2);
        let a = EllOneElement::from_blocks([
            (
                IrrepId::label("chi0"),
                CMat::from_element(1, 1, c(0.5, 0.0)),
            ),
            (
                IrrepId::label("chi1"),
                CMat::from_element(1, 1, c(0.5, 0.0)),
            ),
        ]);
        let f = evaluate(&qg, &inverse_fourier(&qg, &a).unwrap()).unwrap();
        assert!((f[0] - 1.0).norm() < 1e-12 && f[1].norm() < 1e-12);
        assert!((ell_one_norm(&qg, &a).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn star_on_c_of_g_is_complex_conjugation() {
        let qg = FiniteQG::s3();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = random_element(&qg, &mut rng);
        let fa = evaluate(&qg, &a).unwrap();
        let fs = evaluate(&qg, &star(&qg, &a).unwrap()).unwrap();
        for (x, y) in fa.iter().zip(&fs) {
            assert!((x.conj() - y).norm() < 1e-12);
        }
    }

    #[test]
    fn group_algebra_star_inverts() {
        let qg = FiniteQG::cocommutative("s3", crate::ring::FiniteGroup::symmetric3());
        let g = IrrepId::label("(012)");
        let a = QElement::single(g, CMat::from_element(1, 1, c(1.0, 2.0)));
        let s = star(&qg, &a).unwrap();
        let m = s.block(&IrrepId::label("(021)")).unwrap();
        assert!((m[(0, 0)] - c(1.0, -2.0)).norm() < 1e-15);
    }

    #[test]
    fn transform_is_a_morphism_and_isometry() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for qg in [FiniteQG::s3(), FiniteQG::cyclic(5)] {
            for _ in 0..5 {
                let a = random_element(&qg, &mut rng);
                let b = random_element(&qg, &mut rng);
                let lhs = fourier_transform(&qg, &multiply(&qg, &a, &b).unwrap()).unwrap();
                let fa = fourier_transform(&qg, &a).unwrap();
                let fb = fourier_transform(&qg, &b).unwrap();
                let rhs = convolve(&qg, &fa, &fb).unwrap();
                assert!(lhs.distance(&rhs) < 1e-10);
                assert!((ell_one_norm(&qg, &fa).unwrap() - l1_norm(&a)).abs() < 1e-10);
                let back = inverse_fourier(&qg, &fa).unwrap();
                assert!(back.distance(&a) < 1e-12);
                assert!(plancherel_residual(&qg, &a).unwrap() < 1e-10);
            }
        }
    }

    #[test]
    fn orthogonality_holds_in_both_models() {
        let s3 = FiniteQG::s3();
        let std = IrrepId::label("std");
        assert!(orthogonality_residual(&s3, &std, &std).unwrap() < 1e-12);
        assert!(orthogonality_residual(&s3, &std, &IrrepId::label("sgn")).unwrap() < 1e-12);
        let z3 = FiniteQG::cyclic(3);
        let (a, b) = (IrrepId::label("chi1"), IrrepId::label("chi2"));
        assert!(orthogonality_residual(&z3, &a, &b).unwrap() < 1e-14);
        let qg = FiniteQG::cocommutative("s3", crate::ring::FiniteGroup::symmetric3());
        let g = IrrepId::label("(01)");
        assert!(orthogonality_residual(&qg, &g, &g).unwrap() < 1e-12);
    }

    #[test]
    fn regular_representation_is_faithful() {
        assert!(semisimplicity_margin(&FiniteQG::s3()).unwrap() > 0.5);
        let qg = FiniteQG::s3();
        let pi = regular_representation(
            &qg,
            &QElement::single(
                IrrepId::label("triv"),
                CMat::from_element(1, 1, c(1.0, 0.0)),
            ),
        )
        .unwrap();
        assert!(crate::linalg::max_abs(&(pi - identity(6))) < 1e-12);
    }

    #[test]
    fn su2q_star_is_an_involution_and_bullet_is_isometric() {
        let ring = SpinRing::new(SpinKind::Su2q(0.6));
        let space = RingCoefficients(&ring);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = QElement::from_blocks((0..4).map(|n| {
            (
                IrrepId::Index(n),
                random_matrix(&mut rng, n as usize + 1, n as usize + 1),
            )
        }));
        let back = star(&space, &star(&space, &a).unwrap()).unwrap();
        assert!(back.distance(&a) < 1e-12);
        let b = bullet(&space, &a).unwrap();
        assert!((l1_norm(&b) - l1_norm(&a)).abs() < 1e-12);
        assert!(bullet(&space, &b).unwrap().distance(&a) < 1e-12);
        let so3 = SpinRing::new(SpinKind::So3);
        assert!(matches!(
            star(
                &RingCoefficients(&so3),
                &QElement::single(IrrepId::Index(1), identity(3))
            ),
            Err(Error::MissingModularData(_))
        ));
    }
}
