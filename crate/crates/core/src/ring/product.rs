use num_bigint::BigUint;

use super::{split_pair, FusionRing, IrrepId, RepVector, Ring};
use crate::error::{Error, Result};

/// Representation ring of a direct product `G × H`.
pub struct ProductRing {
    left: Ring,
    right: Ring,
}

/// Irreducibles are pairs, fusion is componentwise and dimensions multiply.
pub fn product_ring(left: Ring, right: Ring) -> ProductRing {
    ProductRing { left, right }
}

impl ProductRing {
    pub fn factors(&self) -> (&Ring, &Ring) {
        (&self.left, &self.right)
    }
}

impl FusionRing for ProductRing {
    fn spec(&self) -> String {
        format!("product:{}+{}", self.left.spec(), self.right.spec())
    }

    fn unit(&self) -> IrrepId {
        IrrepId::pair(self.left.unit(), self.right.unit())
    }

    fn contains(&self, id: &IrrepId) -> bool {
        id.as_pair()
            .is_some_and(|(a, b)| self.left.contains(a) && self.right.contains(b))
    }

    fn dim(&self, id: &IrrepId) -> BigUint {
        let (a, b) = id.as_pair().unwrap();
        self.left.dim(a) * self.right.dim(b)
    }

    fn small_dim(&self, id: &IrrepId) -> Option<u64> {
        let (a, b) = id.as_pair().unwrap();
        self.left
            .small_dim(a)?
            .checked_mul(self.right.small_dim(b)?)
    }

    fn qdim(&self, id: &IrrepId) -> f64 {
        let (a, b) = id.as_pair().unwrap();
        self.left.qdim(a) * self.right.qdim(b)
    }

    fn conj(&self, id: &IrrepId) -> IrrepId {
        let (a, b) = id.as_pair().unwrap();
        IrrepId::pair(self.left.conj(a), self.right.conj(b))
    }

    fn fuse_raw(&self, u: &IrrepId, v: &IrrepId) -> RepVector {
        let (ua, ub) = u.as_pair().unwrap();
        let (va, vb) = v.as_pair().unwrap();
        let left = self.left.fuse_raw(ua, va);
        let right = self.right.fuse_raw(ub, vb);
        let mut out = RepVector::new();
        for (a, ma) in left.iter() {
            for (b, mb) in right.iter() {
                out.add(IrrepId::pair(a.clone(), b.clone()), ma * mb);
            }
        }
        out
    }

    fn fuse_support_into(&self, u: &IrrepId, v: &IrrepId, out: &mut Vec<IrrepId>) {
        let (ua, ub) = u.as_pair().unwrap();
        let (va, vb) = v.as_pair().unwrap();
        let mut left = Vec::new();
        let mut right = Vec::new();
        self.left.fuse_support_into(ua, va, &mut left);
        self.right.fuse_support_into(ub, vb, &mut right);
        for a in &left {
            for b in &right {
                out.push(IrrepId::pair(a.clone(), b.clone()));
            }
        }
    }

    /// Pairs ordered by the sum of their canonical positions, then by the
    /// left position.
    fn enumerate(&self, limit: usize) -> Vec<IrrepId> {
        let left = self.left.enumerate(limit);
        let right = self.right.enumerate(limit);
        let mut out = Vec::new();
        'diag: for s in 0..(left.len() + right.len()) {
            for i in 0..=s {
                let j = s - i;
                if i < left.len() && j < right.len() {
                    out.push(IrrepId::pair(left[i].clone(), right[j].clone()));
                    if out.len() == limit {
                        break 'diag;
                    }
                }
            }
        }
        out
    }

    fn size(&self) -> Option<usize> {
        Some(self.left.size()? * self.right.size()?)
    }

    fn parse_irrep(&self, label: &str) -> Result<IrrepId> {
        let (a, b) = split_pair(label).ok_or_else(|| Error::BadIrrepLabel(label.to_string()))?;
        Ok(IrrepId::pair(
            self.left.parse_irrep(a)?,
            self.right.parse_irrep(b)?,
        ))
    }
}
