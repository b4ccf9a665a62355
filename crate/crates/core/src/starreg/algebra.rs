use num_complex::Complex64;
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::fourier::{self, FiniteQG, QElement};
use crate::linalg::{c, trace_norm, CMat};
use crate::ring::{IrrepId, Ring};

/// A Banach *-algebra of coefficients with the Fourier-algebra norm.
pub trait BanachAlgebra: Send + Sync {
    fn name(&self) -> String;
    fn unit(&self) -> QElement;
    fn multiply(&self, a: &QElement, b: &QElement) -> Result<QElement>;
    fn star(&self, a: &QElement) -> Result<QElement>;

    fn norm(&self, a: &QElement) -> f64 {
        a.blocks.values().map(trace_norm).sum()
    }

    /// Coefficient of the unit element.
    fn unit_coefficient(&self, a: &QElement) -> Complex64 {
        let unit = self.unit();
        let (id, _) = unit.blocks.iter().next().unwrap();
        a.block(id).map_or(c(0.0, 0.0), |m| m[(0, 0)])
    }

    /// Parses an irreducible label of this algebra.
    fn parse_irrep(&self, label: &str) -> Result<IrrepId>;
}

/// `A(G)` of a finite model, with the product of the coefficient algebra.
pub struct FiniteAlgebra<'a>(pub &'a FiniteQG);

impl BanachAlgebra for FiniteAlgebra<'_> {
    fn name(&self) -> String {
        self.0.name().to_string()
    }

    fn unit(&self) -> QElement {
        QElement::single(self.0.unit().clone(), CMat::from_element(1, 1, c(1.0, 0.0)))
    }

    fn multiply(&self, a: &QElement, b: &QElement) -> Result<QElement> {
        fourier::multiply(self.0, a, b)
    }

    fn star(&self, a: &QElement) -> Result<QElement> {
        fourier::star(self.0, a)
    }

    fn parse_irrep(&self, label: &str) -> Result<IrrepId> {
        let id = IrrepId::label(label);
        self.0
            .position(&id)
            .map(|_| id)
            .ok_or_else(|| Error::UnknownIrrep(label.into()))
    }
}

/// `ℓ¹(Γ)` for a ring whose irreducibles are all one-dimensional and fuse to
/// a single irreducible, i.e. the dual of a discrete group `Γ`. Blocks are
/// `1×1`.
pub struct GroupDualAlgebra {
    ring: Ring,
}

impl GroupDualAlgebra {
    pub fn new(ring: Ring) -> Result<Self> {
        let sample = ring.enumerate(64);
        for u in &sample {
            if ring.small_dim(u) != Some(1) {
                return Err(Error::Precondition(format!(
                    "{} is not the dual of a group: {u} is not one-dimensional",
                    ring.spec()
                )));
            }
        }
        Ok(GroupDualAlgebra { ring })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    fn packed(&self, a: &QElement) -> Option<Vec<(u128, Complex64)>> {
        a.blocks
            .iter()
            .map(|(id, m)| self.ring.pack(id).map(|k| (k, m[(0, 0)])))
            .collect()
    }

    fn multiply_packed(&self, a: &[(u128, Complex64)], b: &[(u128, Complex64)]) -> QElement {
        let mut acc: FxHashMap<u128, Complex64> = FxHashMap::default();
        acc.reserve(a.len() + b.len());
        let mut buf = Vec::with_capacity(1);
        for &(g, x) in a {
            for &(h, y) in b {
                buf.clear();
                self.ring.fuse_support_packed(g, h, &mut buf);
                *acc.entry(buf[0]).or_default() += x * y;
            }
        }
        scalars_to_element(acc.into_iter().map(|(k, z)| (self.ring.unpack(k), z)))
    }

    fn check(&self, a: &QElement) -> Result<()> {
        for (id, m) in &a.blocks {
            if !self.ring.contains(id) {
                return Err(Error::UnknownIrrep(id.to_string()));
            }
            if m.nrows() != 1 || m.ncols() != 1 || self.ring.small_dim(id) != Some(1) {
                return Err(Error::Precondition(format!("block at {id} must be 1×1")));
            }
        }
        Ok(())
    }
}

impl BanachAlgebra for GroupDualAlgebra {
    fn name(&self) -> String {
        self.ring.spec()
    }

    fn unit(&self) -> QElement {
        QElement::single(self.ring.unit(), CMat::from_element(1, 1, c(1.0, 0.0)))
    }

    fn multiply(&self, a: &QElement, b: &QElement) -> Result<QElement> {
        self.check(a)?;
        self.check(b)?;
        if let (Some(pa), Some(pb)) = (self.packed(a), self.packed(b)) {
            return Ok(self.multiply_packed(&pa, &pb));
        }
        let mut acc: FxHashMap<IrrepId, Complex64> = FxHashMap::default();
        let mut buf = Vec::new();
        for (g, x) in &a.blocks {
            for (h, y) in &b.blocks {
                buf.clear();
                self.ring.fuse_support_into(g, h, &mut buf);
                match buf.as_slice() {
                    [gh] if self.ring.small_dim(gh) == Some(1) => {
                        *acc.entry(gh.clone()).or_default() += x[(0, 0)] * y[(0, 0)];
                    }
                    _ => {
                        return Err(Error::Precondition(format!(
                            "{g} ⊗ {h} is not a single one-dimensional irreducible"
                        )))
                    }
                }
            }
        }
        Ok(scalars_to_element(acc))
    }

    fn star(&self, a: &QElement) -> Result<QElement> {
        self.check(a)?;
        Ok(QElement::from_blocks(
            a.blocks
                .iter()
                .map(|(g, x)| (self.ring.conj(g), x.map(|z| z.conj()))),
        ))
    }

    fn norm(&self, a: &QElement) -> f64 {
        a.blocks.values().map(|m| m[(0, 0)].norm()).sum()
    }

    fn parse_irrep(&self, label: &str) -> Result<IrrepId> {
        self.ring.parse_irrep(label)
    }
}

fn scalars_to_element(acc: impl IntoIterator<Item = (IrrepId, Complex64)>) -> QElement {
    QElement::from_blocks(
        acc.into_iter()
            .map(|(id, z)| (id, CMat::from_element(1, 1, z))),
    )
}

/// Largest entry of `a* − a`.
pub fn self_adjoint_defect(alg: &dyn BanachAlgebra, a: &QElement) -> Result<f64> {
    Ok(alg.star(a)?.distance(a))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::ring::{SpinKind, SpinRing, TorusRing};

    fn delta(p: &[i64], z: f64) -> QElement {
        QElement::single(IrrepId::point(p), CMat::from_element(1, 1, c(z, 0.0)))
    }

    #[test]
    fn integer_lattice_convolution() {
        let alg = GroupDualAlgebra::new(Arc::new(TorusRing::new(1))).unwrap();
        let f = delta(&[1], 1.0).add(&delta(&[-1], 1.0));
        let f2 = alg.multiply(&f, &f).unwrap();
        assert_eq!(
            f2.block(&IrrepId::point(&[0])).unwrap()[(0, 0)],
            c(2.0, 0.0)
        );
        assert_eq!(
            f2.block(&IrrepId::point(&[2])).unwrap()[(0, 0)],
            c(1.0, 0.0)
        );
        assert_eq!(alg.norm(&f2), 4.0);
        assert_eq!(self_adjoint_defect(&alg, &f).unwrap(), 0.0);
    }

    #[test]
    fn su2_is_not_a_group_dual() {
        assert!(GroupDualAlgebra::new(Arc::new(SpinRing::new(SpinKind::Su2))).is_err());
    }

    #[test]
    fn finite_unit_is_neutral() {
        let qg = FiniteQG::s3();
        let alg = FiniteAlgebra(&qg);
        let a = QElement::single(IrrepId::label("std"), CMat::from_element(2, 2, c(0.5, 1.0)));
        assert!(alg.multiply(&alg.unit(), &a).unwrap().distance(&a) < 1e-12);
        assert!((alg.norm(&alg.unit()) - 1.0).abs() < 1e-15);
    }
}
