//! Fusion rings of compact quantum groups.
//!
//! A [`FusionRing`] exposes the representation ring `R(G)⁺`: irreducible
//! labels, the unit, conjugation, fusion multiplicities and the two
//! dimension functions. Infinite families are generator based: irreducibles
//! are normal forms that materialize on demand, so rings never hold a full
//! table of their irreducibles.

mod dimension;
mod families;
pub(crate) mod file;
mod id;
mod product;
mod registry;
mod repvector;
mod subring;
mod validate;

use std::sync::Arc;

use nalgebra::DMatrix;
use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};

pub use dimension::{
    dominance_check, is_kac, kac_witness, DimensionFunction, DimensionKind, DominanceReport,
};
pub use families::{FreeRing, HeisenbergRing, SpinKind, SpinRing, TorusRing};
pub use file::{write_json, FileRing, FiniteGroup, GroupDualRing};
pub use id::IrrepId;
pub use product::{product_ring, ProductRing};
pub use registry::{load_ring, parse_generator};
pub use repvector::RepVector;
pub use subring::{subring_generated, Subring};
pub use validate::{validate_ring, ValidationReport, Violation, ViolationKind};

pub(crate) use id::{parse_point, split_pair, split_top_level};

/// Shared handle to an immutable ring.
pub type Ring = Arc<dyn FusionRing>;

/// Dimension data of one irreducible.
#[derive(Clone, Debug, PartialEq)]
pub struct IrrepData {
    pub id: IrrepId,
    pub dim: BigUint,
    pub qdim: f64,
    pub conj: IrrepId,
}

/// Modular data `F_u` and the antiunitary part `J_u` of the conjugation map.
///
/// `j` stores the unitary `M` with `J(ξ) = M·ξ̄`, mapping `H_u` to `H_ū`.
#[derive(Clone, Debug)]
pub struct IrrepModularData {
    pub id: IrrepId,
    pub f: DMatrix<Complex64>,
    pub j: DMatrix<Complex64>,
    pub conj: IrrepId,
}

/// The representation ring of a compact quantum group.
///
/// Methods taking an [`IrrepId`] assume membership; the checked entry points
/// are the free functions [`fuse`], [`tensor`], [`conjugate`] and
/// [`irrep_data`].
pub trait FusionRing: Send + Sync {
    /// Registry string that reproduces this ring.
    fn spec(&self) -> String;

    fn unit(&self) -> IrrepId;

    fn contains(&self, id: &IrrepId) -> bool;

    fn dim(&self, id: &IrrepId) -> BigUint;

    /// Vector dimension when it fits in 64 bits.
    fn small_dim(&self, id: &IrrepId) -> Option<u64> {
        self.dim(id).to_u64()
    }

    fn qdim(&self, id: &IrrepId) -> f64;

    fn conj(&self, id: &IrrepId) -> IrrepId;

    /// Decomposition of `u ⊗ v` with multiplicities.
    fn fuse_raw(&self, u: &IrrepId, v: &IrrepId) -> RepVector;

    /// Appends the support of `u ⊗ v` to `out`.
    fn fuse_support_into(&self, u: &IrrepId, v: &IrrepId, out: &mut Vec<IrrepId>) {
        out.extend(self.fuse_raw(u, v).support().cloned());
    }

    /// The first `limit` irreducibles in canonical order.
    fn enumerate(&self, limit: usize) -> Vec<IrrepId>;

    /// Number of irreducibles, `None` for infinite rings.
    fn size(&self) -> Option<usize>;

    fn parse_irrep(&self, label: &str) -> Result<IrrepId>;

    fn modular_data(&self, _id: &IrrepId) -> Option<IrrepModularData> {
        None
    }

    /// Injective fixed-width encoding used by enumeration hot loops. Rings
    /// that return `Some` for the unit must encode every product of encoded
    /// irreducibles as well.
    fn pack(&self, _id: &IrrepId) -> Option<u128> {
        None
    }

    fn unpack(&self, _key: u128) -> IrrepId {
        unimplemented!("ring has no packed encoding")
    }

    /// True when `fuse_support_packed(u, v)` is the single key
    /// `u + v − pack(unit)` in `u128` arithmetic, so that fusing with a fixed
    /// irreducible is an order-preserving translation of keys.
    fn packed_translation(&self) -> bool {
        false
    }

    fn small_dim_packed(&self, key: u128) -> Option<u64> {
        self.small_dim(&self.unpack(key))
    }

    fn fuse_support_packed(&self, u: u128, v: u128, out: &mut Vec<u128>) {
        let mut ids = Vec::new();
        self.fuse_support_into(&self.unpack(u), &self.unpack(v), &mut ids);
        out.extend(
            ids.iter()
                .map(|w| self.pack(w).expect("packable fusion output")),
        );
    }
}

const LANE_OFFSET: i64 = 1 << 31;

/// Packs up to four signed coordinates into offset-binary 32-bit lanes, so
/// key order is lexicographic order on reversed coordinates.
pub(crate) fn pack_lanes(xs: &[i64]) -> Option<u128> {
    if xs.len() > 4 {
        return None;
    }
    let mut key = 0u128;
    for (i, &x) in xs.iter().enumerate() {
        let lane = u32::try_from(x.checked_add(LANE_OFFSET)?).ok()?;
        key |= (lane as u128) << (32 * i);
    }
    Some(key)
}

pub(crate) fn unpack_lane(key: u128, i: usize) -> i64 {
    (key >> (32 * i)) as u32 as i64 - LANE_OFFSET
}

fn check(ring: &dyn FusionRing, id: &IrrepId) -> Result<()> {
    if ring.contains(id) {
        Ok(())
    } else {
        Err(Error::UnknownIrrep(id.to_string()))
    }
}

pub fn irrep_data(ring: &dyn FusionRing, id: &IrrepId) -> Result<IrrepData> {
    check(ring, id)?;
    Ok(IrrepData {
        id: id.clone(),
        dim: ring.dim(id),
        qdim: ring.qdim(id),
        conj: ring.conj(id),
    })
}

/// Decomposes `u ⊗ v` into irreducibles.
pub fn fuse(ring: &dyn FusionRing, u: &IrrepId, v: &IrrepId) -> Result<RepVector> {
    check(ring, u)?;
    check(ring, v)?;
    Ok(ring.fuse_raw(u, v))
}

/// Bilinear extension of [`fuse`].
pub fn tensor(ring: &dyn FusionRing, a: &RepVector, b: &RepVector) -> Result<RepVector> {
    for id in a.support().chain(b.support()) {
        check(ring, id)?;
    }
    Ok(tensor_raw(ring, a, b))
}

pub(crate) fn tensor_raw(ring: &dyn FusionRing, a: &RepVector, b: &RepVector) -> RepVector {
    let mut out = RepVector::new();
    for (u, mu) in a.iter() {
        for (v, mv) in b.iter() {
            let prod = mu * mv;
            out.add_scaled(&ring.fuse_raw(u, v), &prod);
        }
    }
    out
}

/// Applies conjugation componentwise.
pub fn conjugate(ring: &dyn FusionRing, a: &RepVector) -> Result<RepVector> {
    for id in a.support() {
        check(ring, id)?;
    }
    Ok(a.iter().map(|(id, m)| (ring.conj(id), m.clone())).collect())
}

/// Checks that every component of `a` belongs to `ring`.
pub fn check_support(ring: &dyn FusionRing, a: &RepVector) -> Result<()> {
    a.support().try_for_each(|id| check(ring, id))
}

/// Vector dimension of a representation, `Σ m_v dim(v)`.
pub fn rep_dim(ring: &dyn FusionRing, a: &RepVector) -> BigUint {
    a.iter().map(|(id, m)| m * ring.dim(id)).sum()
}

/// Lossy conversion used for logarithms of huge dimensions.
pub(crate) fn big_to_f64(x: &BigUint) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

/// Natural logarithm of a big integer without overflowing through `f64`.
pub fn big_ln(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits < 1000 {
        return big_to_f64(x).ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap_or(f64::INFINITY);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}
