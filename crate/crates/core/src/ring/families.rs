//! Builtin infinite families: SU(2)-type fusion rules, torus duals, free-group
//! duals and the dual of the integer Heisenberg group.

use std::sync::RwLock;

use nalgebra::DMatrix;
use num_bigint::BigUint;
use num_complex::Complex64;
use smallvec::SmallVec;

use super::{
    big_to_f64, pack_lanes, parse_point, unpack_lane, FusionRing, IrrepId, IrrepModularData,
    RepVector,
};
use crate::error::{Error, Result};

/// Which member of the SU(2)-type family a [`SpinRing`] models.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SpinKind {
    /// `SU(2)`: Clebsch–Gordan fusion, `dim(u_n) = n + 1`.
    Su2,
    /// `SO(3)`: integer spins `l`, `dim = 2l + 1`.
    So3,
    /// `SU_q(2)` for `0 < q < 1`: SU(2) fusion and vector dims, quantum dims `[n+1]_q`.
    Su2q(f64),
    /// `A_o(F)` with `F` of order `n`: SU(2) fusion, dims from the
    /// recursion `d_{k+1} = n·d_k − d_{k−1}`, Kac normalization `qdim = dim`.
    Ao(u32),
}

/// Rings whose irreducibles are indexed by `u_0, u_1, …`.
pub struct SpinRing {
    kind: SpinKind,
    dims: RwLock<Vec<BigUint>>,
    qdims: RwLock<Vec<f64>>,
}

impl SpinRing {
    pub fn new(kind: SpinKind) -> Self {
        SpinRing {
            kind,
            dims: RwLock::new(vec![BigUint::from(1u32)]),
            qdims: RwLock::new(vec![1.0]),
        }
    }

    pub fn kind(&self) -> SpinKind {
        self.kind
    }

    fn ao_dim(&self, n: usize, order: u32) -> BigUint {
        if let Some(d) = self.dims.read().unwrap().get(n) {
            return d.clone();
        }
        let mut table = self.dims.write().unwrap();
        while table.len() <= n {
            let k = table.len();
            let next = if k == 1 {
                BigUint::from(order)
            } else {
                &table[k - 1] * order - &table[k - 2]
            };
            table.push(next);
        }
        table[n].clone()
    }

    /// `[n+1]_q` through `qdim(u₁)·qdim(u_n) = qdim(u_{n−1}) + qdim(u_{n+1})`.
    fn quantum_integer(&self, n: usize, q: f64) -> f64 {
        if let Some(d) = self.qdims.read().unwrap().get(n) {
            return *d;
        }
        let two = q + 1.0 / q;
        let mut table = self.qdims.write().unwrap();
        while table.len() <= n {
            let k = table.len();
            let next = if k == 1 {
                two
            } else {
                two * table[k - 1] - table[k - 2]
            };
            table.push(next);
        }
        table[n]
    }

    fn index(id: &IrrepId) -> usize {
        id.as_index().expect("spin ring label") as usize
    }
}

impl FusionRing for SpinRing {
    fn spec(&self) -> String {
        match self.kind {
            SpinKind::Su2 => "su2".into(),
            SpinKind::So3 => "so3".into(),
            SpinKind::Su2q(q) => format!("su2q:q={q}"),
            SpinKind::Ao(n) => format!("ao:n={n}"),
        }
    }

    fn unit(&self) -> IrrepId {
        IrrepId::Index(0)
    }

    fn contains(&self, id: &IrrepId) -> bool {
        matches!(id, IrrepId::Index(_))
    }

    fn dim(&self, id: &IrrepId) -> BigUint {
        let n = Self::index(id);
        match self.kind {
            SpinKind::Su2 | SpinKind::Su2q(_) => BigUint::from(n + 1),
            SpinKind::So3 => BigUint::from(2 * n + 1),
            SpinKind::Ao(order) => self.ao_dim(n, order),
        }
    }

    fn small_dim(&self, id: &IrrepId) -> Option<u64> {
        let n = Self::index(id) as u64;
        match self.kind {
            SpinKind::Su2 | SpinKind::Su2q(_) => Some(n + 1),
            SpinKind::So3 => Some(2 * n + 1),
            SpinKind::Ao(_) => num_traits::ToPrimitive::to_u64(&self.dim(id)),
        }
    }

    fn qdim(&self, id: &IrrepId) -> f64 {
        let n = Self::index(id);
        match self.kind {
            SpinKind::Su2 => (n + 1) as f64,
            SpinKind::So3 => (2 * n + 1) as f64,
            SpinKind::Su2q(q) => self.quantum_integer(n, q),
            SpinKind::Ao(_) => big_to_f64(&self.dim(id)),
        }
    }

    fn conj(&self, id: &IrrepId) -> IrrepId {
        id.clone()
    }

    fn fuse_raw(&self, u: &IrrepId, v: &IrrepId) -> RepVector {
        let mut out = Vec::new();
        self.fuse_support_into(u, v, &mut out);
        RepVector::from_pairs(out.into_iter().map(|id| (id, 1)))
    }

    fn fuse_support_into(&self, u: &IrrepId, v: &IrrepId, out: &mut Vec<IrrepId>) {
        let (a, b) = (Self::index(u) as u32, Self::index(v) as u32);
        let step = if self.kind == SpinKind::So3 { 1 } else { 2 };
        let mut c = a.abs_diff(b);
        while c <= a + b {
            out.push(IrrepId::Index(c));
            c += step;
        }
    }

    fn enumerate(&self, limit: usize) -> Vec<IrrepId> {
        (0..limit as u32).map(IrrepId::Index).collect()
    }

    fn size(&self) -> Option<usize> {
        None
    }

    fn parse_irrep(&self, label: &str) -> Result<IrrepId> {
        let t = label.trim();
        let digits = t.strip_prefix('u').unwrap_or(t);
        digits
            .parse::<u32>()
            .map(IrrepId::Index)
            .map_err(|_| Error::BadIrrepLabel(label.to_string()))
    }

    fn modular_data(&self, id: &IrrepId) -> Option<IrrepModularData> {
        let q = match self.kind {
            SpinKind::Su2 => 1.0,
            SpinKind::Su2q(q) => q,
            _ => return None,
        };
        let n = Self::index(id);
        let d = n + 1;
        // Weight basis: F = diag(q^{n}, q^{n-2}, …, q^{-n}) so that Tr F = Tr F⁻¹ = [n+1]_q.
        let f = DMatrix::from_fn(d, d, |r, c| {
            if r == c {
                Complex64::new(q.powi(n as i32 - 2 * r as i32), 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        // J e_i = (−1)^i e_{n−i}: the standard real/quaternionic structure.
        let j = DMatrix::from_fn(d, d, |r, c| {
            if r + c == n {
                Complex64::new(if c % 2 == 0 { 1.0 } else { -1.0 }, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        Some(IrrepModularData {
            id: id.clone(),
            f,
            j,
            conj: id.clone(),
        })
    }
}

/// Dual of `ℤ^d`: irreducibles are lattice points, fusion is addition.
pub struct TorusRing {
    d: usize,
}

impl TorusRing {
    pub fn new(d: usize) -> Self {
        TorusRing { d }
    }

    pub fn rank(&self) -> usize {
        self.d
    }
}

/// Lattice points with `Σ|x_i| = r`, lexicographically ordered.
fn l1_shell(d: usize, r: i64, prefix: &mut Vec<i64>, out: &mut Vec<IrrepId>) {
    if d == 1 {
        let mut last = vec![-r, r];
        last.dedup();
        for x in last {
            prefix.push(x);
            out.push(IrrepId::point(prefix));
            prefix.pop();
        }
        return;
    }
    for x in -r..=r {
        prefix.push(x);
        l1_shell(d - 1, r - x.abs(), prefix, out);
        prefix.pop();
    }
}

impl FusionRing for TorusRing {
    fn spec(&self) -> String {
        format!("torus:d={}", self.d)
    }

    fn unit(&self) -> IrrepId {
        IrrepId::Point(SmallVec::from_elem(0, self.d))
    }

    fn contains(&self, id: &IrrepId) -> bool {
        id.as_point().is_some_and(|p| p.len() == self.d)
    }

    fn dim(&self, _id: &IrrepId) -> BigUint {
        BigUint::from(1u32)
    }

    fn small_dim(&self, _id: &IrrepId) -> Option<u64> {
        Some(1)
    }

    fn qdim(&self, _id: &IrrepId) -> f64 {
        1.0
    }

    fn conj(&self, id: &IrrepId) -> IrrepId {
        IrrepId::Point(id.as_point().unwrap().iter().map(|x| -x).collect())
    }

    fn fuse_raw(&self, u: &IrrepId, v: &IrrepId) -> RepVector {
        let mut out = Vec::with_capacity(1);
        self.fuse_support_into(u, v, &mut out);
        RepVector::from_pairs(out.into_iter().map(|id| (id, 1)))
    }

    fn fuse_support_into(&self, u: &IrrepId, v: &IrrepId, out: &mut Vec<IrrepId>) {
        let (a, b) = (u.as_point().unwrap(), v.as_point().unwrap());
        out.push(IrrepId::Point(
            a.iter().zip(b).map(|(x, y)| x + y).collect(),
        ));
    }

    fn pack(&self, id: &IrrepId) -> Option<u128> {
        pack_lanes(id.as_point()?)
    }

    fn unpack(&self, key: u128) -> IrrepId {
        IrrepId::Point((0..self.d).map(|i| unpack_lane(key, i)).collect())
    }

    fn packed_translation(&self) -> bool {
        true
    }

    fn small_dim_packed(&self, _key: u128) -> Option<u64> {
        Some(1)
    }

    fn fuse_support_packed(&self, u: u128, v: u128, out: &mut Vec<u128>) {
        let sum: SmallVec<[i64; 4]> = (0..self.d)
            .map(|i| unpack_lane(u, i) + unpack_lane(v, i))
            .collect();
        out.push(pack_lanes(&sum).expect("lattice coordinate exceeds 32 bits"));
    }

    fn enumerate(&self, limit: usize) -> Vec<IrrepId> {
        let mut out = Vec::new();
        let mut r = 0;
        while out.len() < limit {
            l1_shell(self.d, r, &mut Vec::new(), &mut out);
            r += 1;
        }
        out.truncate(limit);
        out
    }

    fn size(&self) -> Option<usize> {
        None
    }

    fn parse_irrep(&self, label: &str) -> Result<IrrepId> {
        match parse_point(label) {
            Some(p) if p.len() == self.d => Ok(IrrepId::point(&p)),
            _ => Err(Error::BadIrrepLabel(label.to_string())),
        }
    }
}

/// Dual of the free group `F_k`: irreducibles are reduced words.
pub struct FreeRing {
    k: u8,
}

impl FreeRing {
    pub fn new(k: u8) -> Self {
        FreeRing { k }
    }

    fn reduce_push(w: &mut SmallVec<[u8; 16]>, code: u8) {
        if w.last() == Some(&(code ^ 1)) {
            w.pop();
        } else {
            w.push(code);
        }
    }
}

impl FusionRing for FreeRing {
    fn spec(&self) -> String {
        format!("free:k={}", self.k)
    }

    fn unit(&self) -> IrrepId {
        IrrepId::Word(SmallVec::new())
    }

    fn contains(&self, id: &IrrepId) -> bool {
        id.as_word().is_some_and(|w| {
            w.iter().all(|&c| c < 2 * self.k) && w.windows(2).all(|p| p[0] != p[1] ^ 1)
        })
    }

    fn dim(&self, _id: &IrrepId) -> BigUint {
        BigUint::from(1u32)
    }

    fn small_dim(&self, _id: &IrrepId) -> Option<u64> {
        Some(1)
    }

    fn qdim(&self, _id: &IrrepId) -> f64 {
        1.0
    }

    fn conj(&self, id: &IrrepId) -> IrrepId {
        IrrepId::Word(id.as_word().unwrap().iter().rev().map(|c| c ^ 1).collect())
    }

    fn fuse_raw(&self, u: &IrrepId, v: &IrrepId) -> RepVector {
        let mut out = Vec::with_capacity(1);
        self.fuse_support_into(u, v, &mut out);
        RepVector::from_pairs(out.into_iter().map(|id| (id, 1)))
    }

    fn fuse_support_into(&self, u: &IrrepId, v: &IrrepId, out: &mut Vec<IrrepId>) {
        let mut w: SmallVec<[u8; 16]> = SmallVec::from_slice(u.as_word().unwrap());
        for &c in v.as_word().unwrap() {
            Self::reduce_push(&mut w, c);
        }
        out.push(IrrepId::Word(w));
    }

    /// Shortlex order with letters `a < A < b < B < …`.
    fn enumerate(&self, limit: usize) -> Vec<IrrepId> {
        let mut out = vec![self.unit()];
        let mut level: Vec<SmallVec<[u8; 16]>> = vec![SmallVec::new()];
        while out.len() < limit {
            let mut next = Vec::new();
            for w in &level {
                for c in 0..2 * self.k {
                    if w.last() != Some(&(c ^ 1)) {
                        let mut x = w.clone();
                        x.push(c);
                        next.push(x);
                    }
                }
            }
            out.extend(next.iter().cloned().map(IrrepId::Word));
            level = next;
        }
        out.truncate(limit);
        out
    }

    fn size(&self) -> Option<usize> {
        None
    }

    fn parse_irrep(&self, label: &str) -> Result<IrrepId> {
        let t = label.trim();
        if t.is_empty() || t == "1" {
            return Ok(self.unit());
        }
        let mut w: SmallVec<[u8; 16]> = SmallVec::new();
        for ch in t.chars() {
            let code = if ch.is_ascii_lowercase() {
                2 * (ch as u8 - b'a')
            } else if ch.is_ascii_uppercase() {
                2 * (ch as u8 - b'A') + 1
            } else {
                return Err(Error::BadIrrepLabel(label.to_string()));
            };
            if code >= 2 * self.k {
                return Err(Error::BadIrrepLabel(label.to_string()));
            }
            Self::reduce_push(&mut w, code);
        }
        Ok(IrrepId::Word(w))
    }
}

/// Dual of the integer Heisenberg group with normal form `(a, b, c)` and law
/// `(a,b,c)(a′,b′,c′) = (a+a′, b+b′, c+c′+ab′)`.
pub struct HeisenbergRing;

impl FusionRing for HeisenbergRing {
    fn spec(&self) -> String {
        "heisenberg".into()
    }

    fn unit(&self) -> IrrepId {
        IrrepId::point(&[0, 0, 0])
    }

    fn contains(&self, id: &IrrepId) -> bool {
        id.as_point().is_some_and(|p| p.len() == 3)
    }

    fn dim(&self, _id: &IrrepId) -> BigUint {
        BigUint::from(1u32)
    }

    fn small_dim(&self, _id: &IrrepId) -> Option<u64> {
        Some(1)
    }

    fn qdim(&self, _id: &IrrepId) -> f64 {
        1.0
    }

    fn conj(&self, id: &IrrepId) -> IrrepId {
        let p = id.as_point().unwrap();
        IrrepId::point(&[-p[0], -p[1], p[0] * p[1] - p[2]])
    }

    fn fuse_raw(&self, u: &IrrepId, v: &IrrepId) -> RepVector {
        let mut out = Vec::with_capacity(1);
        self.fuse_support_into(u, v, &mut out);
        RepVector::from_pairs(out.into_iter().map(|id| (id, 1)))
    }

    fn fuse_support_into(&self, u: &IrrepId, v: &IrrepId, out: &mut Vec<IrrepId>) {
        let (x, y) = (u.as_point().unwrap(), v.as_point().unwrap());
        out.push(IrrepId::point(&[
            x[0] + y[0],
            x[1] + y[1],
            x[2] + y[2] + x[0] * y[1],
        ]));
    }

    fn pack(&self, id: &IrrepId) -> Option<u128> {
        pack_lanes(id.as_point()?)
    }

    fn unpack(&self, key: u128) -> IrrepId {
        IrrepId::point(&[
            unpack_lane(key, 0),
            unpack_lane(key, 1),
            unpack_lane(key, 2),
        ])
    }

    fn small_dim_packed(&self, _key: u128) -> Option<u64> {
        Some(1)
    }

    fn fuse_support_packed(&self, u: u128, v: u128, out: &mut Vec<u128>) {
        let x = [unpack_lane(u, 0), unpack_lane(u, 1), unpack_lane(u, 2)];
        let y = [unpack_lane(v, 0), unpack_lane(v, 1), unpack_lane(v, 2)];
        let z = [x[0] + y[0], x[1] + y[1], x[2] + y[2] + x[0] * y[1]];
        out.push(pack_lanes(&z).expect("Heisenberg coordinate exceeds 32 bits"));
    }

    fn enumerate(&self, limit: usize) -> Vec<IrrepId> {
        let mut out = vec![self.unit()];
        let mut r: i64 = 1;
        while out.len() < limit {
            for a in -r..=r {
                for b in -r..=r {
                    for c in -r..=r {
                        if a.abs().max(b.abs()).max(c.abs()) == r {
                            out.push(IrrepId::point(&[a, b, c]));
                        }
                    }
                }
            }
            r += 1;
        }
        out.truncate(limit);
        out
    }

    fn size(&self) -> Option<usize> {
        None
    }

    fn parse_irrep(&self, label: &str) -> Result<IrrepId> {
        match parse_point(label) {
            Some(p) if p.len() == 3 => Ok(IrrepId::point(&p)),
            _ => Err(Error::BadIrrepLabel(label.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{conjugate, fuse, tensor};

    fn ids(v: &RepVector) -> Vec<String> {
        v.iter().map(|(id, m)| format!("{id}:{m}")).collect()
    }

    #[test]
    fn su2_clebsch_gordan() {
        let r = SpinRing::new(SpinKind::Su2);
        let out = fuse(&r, &IrrepId::Index(1), &IrrepId::Index(1)).unwrap();
        assert_eq!(ids(&out), ["u0:1", "u2:1"]);
        let out = fuse(&r, &IrrepId::Index(2), &IrrepId::Index(3)).unwrap();
        assert_eq!(ids(&out), ["u1:1", "u3:1", "u5:1"]);
    }

    #[test]
    fn su2_tensor_is_bilinear() {
        let r = SpinRing::new(SpinKind::Su2);
        let a = RepVector::from_pairs([(IrrepId::Index(1), 2)]);
        let b = RepVector::from_pairs([(IrrepId::Index(1), 1)]);
        assert_eq!(ids(&tensor(&r, &a, &b).unwrap()), ["u0:2", "u2:2"]);
        let unit = RepVector::singleton(r.unit());
        assert_eq!(tensor(&r, &a, &unit).unwrap(), a);
    }

    #[test]
    fn su2_irreps_are_self_conjugate() {
        let r = SpinRing::new(SpinKind::Su2);
        let a = RepVector::singleton(IrrepId::Index(3));
        assert_eq!(conjugate(&r, &a).unwrap(), a);
        let prod = fuse(&r, &IrrepId::Index(3), &IrrepId::Index(3)).unwrap();
        assert_eq!(prod.get(&r.unit()), BigUint::from(1u32));
    }

    #[test]
    fn ao_dimensions_follow_chebyshev_recursion() {
        let r = SpinRing::new(SpinKind::Ao(3));
        let dims: Vec<u64> = (0..6)
            .map(|n| r.small_dim(&IrrepId::Index(n)).unwrap())
            .collect();
        assert_eq!(dims, [1, 3, 8, 21, 55, 144]);
        assert_eq!(r.qdim(&IrrepId::Index(4)), 55.0);
        // ao:n=2 reproduces the SU(2) dimensions.
        let r2 = SpinRing::new(SpinKind::Ao(2));
        assert_eq!(r2.small_dim(&IrrepId::Index(9)), Some(10));
    }

    #[test]
    fn su2q_quantum_integers() {
        let q = 0.5;
        let r = SpinRing::new(SpinKind::Su2q(q));
        assert!((r.qdim(&IrrepId::Index(1)) - 2.5).abs() < 1e-15);
        for n in 0..60u32 {
            let closed = (q.powi(n as i32 + 1) - q.powi(-(n as i32) - 1)) / (q - 1.0 / q);
            let got = r.qdim(&IrrepId::Index(n));
            assert!(
                (got - closed).abs() <= 1e-12 * closed,
                "n={n}: {got} vs {closed}"
            );
        }
        let md = r.modular_data(&IrrepId::Index(4)).unwrap();
        let tr: f64 = (0..5).map(|i| md.f[(i, i)].re).sum();
        let tr_inv: f64 = (0..5).map(|i| 1.0 / md.f[(i, i)].re).sum();
        assert!((tr - r.qdim(&IrrepId::Index(4))).abs() < 1e-12);
        assert!((tr - tr_inv).abs() < 1e-12);
    }

    #[test]
    fn torus_group_law_and_conjugation() {
        let r = TorusRing::new(2);
        let out = fuse(&r, &IrrepId::point(&[1, 0]), &IrrepId::point(&[0, 1])).unwrap();
        assert_eq!(ids(&out), ["(1,1):1"]);
        let r1 = TorusRing::new(1);
        let a = RepVector::singleton(IrrepId::point(&[5]));
        let c = conjugate(&r1, &a).unwrap();
        assert_eq!(ids(&c), ["(-5):1"]);
        assert_eq!(conjugate(&r1, &c).unwrap(), a);
        assert_eq!(r.enumerate(5).len(), 5);
        assert_eq!(r.enumerate(1)[0], r.unit());
    }

    #[test]
    fn free_words_concatenate_and_reduce() {
        let r = FreeRing::new(2);
        let a = RepVector::from_pairs([
            (r.parse_irrep("a").unwrap(), 1),
            (r.parse_irrep("A").unwrap(), 1),
        ]);
        let b = RepVector::singleton(r.parse_irrep("b").unwrap());
        let mut got = ids(&tensor(&r, &a, &b).unwrap());
        got.sort();
        assert_eq!(got, ["Ab:1", "ab:1"]);
        let w = r.parse_irrep("aB").unwrap();
        let back = fuse(&r, &w, &r.conj(&w)).unwrap();
        assert_eq!(ids(&back), ["1:1"]);
        // shortlex: 1, a, A, b, B, aa, ab, aB, ...
        let first: Vec<String> = r.enumerate(8).iter().map(|x| x.to_string()).collect();
        assert_eq!(first, ["1", "a", "A", "b", "B", "aa", "ab", "aB"]);
    }

    #[test]
    fn heisenberg_inverse_and_commutator() {
        let r = HeisenbergRing;
        let x = IrrepId::point(&[1, 0, 0]);
        let y = IrrepId::point(&[0, 1, 0]);
        let g = IrrepId::point(&[2, -3, 5]);
        let back = fuse(&r, &g, &r.conj(&g)).unwrap();
        assert_eq!(ids(&back), ["(0,0,0):1"]);
        let back = fuse(&r, &r.conj(&g), &g).unwrap();
        assert_eq!(ids(&back), ["(0,0,0):1"]);
        // [x, y] = x y x⁻¹ y⁻¹ = (0, 0, 1)
        let xy = r.fuse_raw(&x, &y).support().next().unwrap().clone();
        let xyx = r
            .fuse_raw(&xy, &r.conj(&x))
            .support()
            .next()
            .unwrap()
            .clone();
        let comm = r
            .fuse_raw(&xyx, &r.conj(&y))
            .support()
            .next()
            .unwrap()
            .clone();
        assert_eq!(comm, IrrepId::point(&[0, 0, 1]));
    }
}
