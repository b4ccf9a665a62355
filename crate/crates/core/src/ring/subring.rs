use std::sync::RwLock;

use num_bigint::BigUint;
use rustc_hash::FxHashSet;

use super::{check_support, FusionRing, IrrepId, IrrepModularData, RepVector, Ring};
use crate::error::{Error, Result};

struct Explored {
    seen: FxHashSet<IrrepId>,
    order: Vec<IrrepId>,
    frontier: Vec<IrrepId>,
}

impl Explored {
    fn exhausted(&self) -> bool {
        self.frontier.is_empty()
    }
}

/// The fusion subring generated by a set of irreducibles.
///
/// Members are discovered level by level from the unit by fusing with the
/// generating set and its conjugates. When that closure terminates within
/// the enumeration cap the subring is finite; otherwise it stays lazily
/// generated and membership is decided by exploring at most `cap`
/// irreducibles.
pub struct Subring {
    parent: Ring,
    gens: Vec<IrrepId>,
    cap: usize,
    explored: RwLock<Explored>,
}

/// Smallest collection of irreducibles containing the unit and `s`, closed
/// under conjugation and fusion.
pub fn subring_generated(ring: Ring, s: &[IrrepId], cap: usize) -> Result<Subring> {
    if s.is_empty() {
        return Err(Error::Precondition(
            "generating set must be nonempty".into(),
        ));
    }
    let mut gens = RepVector::new();
    for id in s {
        gens.add(id.clone(), BigUint::from(1u32));
        gens.add(ring.conj(id), BigUint::from(1u32));
    }
    check_support(ring.as_ref(), &gens)?;
    let unit = ring.unit();
    let mut seen = FxHashSet::default();
    seen.insert(unit.clone());
    let sub = Subring {
        gens: gens.support().cloned().collect(),
        cap,
        explored: RwLock::new(Explored {
            seen,
            order: vec![unit.clone()],
            frontier: vec![unit],
        }),
        parent: ring,
    };
    sub.explore_until(|e| e.order.len() > cap);
    let e = sub.explored.read().unwrap();
    if !e.exhausted() && sub.parent.size().is_some() {
        return Err(Error::CapExceeded { cap });
    }
    drop(e);
    Ok(sub)
}

impl Subring {
    pub fn parent(&self) -> &Ring {
        &self.parent
    }

    /// True when the closure terminated, i.e. the subring is finite.
    pub fn is_closed(&self) -> bool {
        self.explored.read().unwrap().exhausted()
    }

    fn explore_until(&self, stop: impl Fn(&Explored) -> bool) {
        let mut e = self.explored.write().unwrap();
        let mut buf = Vec::new();
        while !e.exhausted() && !stop(&e) {
            let frontier = std::mem::take(&mut e.frontier);
            let mut next = Vec::new();
            for v in &frontier {
                for g in &self.gens {
                    buf.clear();
                    self.parent.fuse_support_into(v, g, &mut buf);
                    for w in buf.drain(..) {
                        if e.seen.insert(w.clone()) {
                            next.push(w);
                        }
                    }
                }
            }
            next.sort();
            e.order.extend(next.iter().cloned());
            e.frontier = next;
        }
    }
}

impl FusionRing for Subring {
    fn spec(&self) -> String {
        let gens: Vec<String> = self.gens.iter().map(|g| g.to_string()).collect();
        format!("subring:{}@{}", self.parent.spec(), gens.join(","))
    }

    fn unit(&self) -> IrrepId {
        self.parent.unit()
    }

    fn contains(&self, id: &IrrepId) -> bool {
        if !self.parent.contains(id) {
            return false;
        }
        if self.explored.read().unwrap().seen.contains(id) {
            return true;
        }
        self.explore_until(|e| e.seen.contains(id) || e.order.len() > self.cap);
        self.explored.read().unwrap().seen.contains(id)
    }

    fn dim(&self, id: &IrrepId) -> BigUint {
        self.parent.dim(id)
    }

    fn small_dim(&self, id: &IrrepId) -> Option<u64> {
        self.parent.small_dim(id)
    }

    fn qdim(&self, id: &IrrepId) -> f64 {
        self.parent.qdim(id)
    }

    fn conj(&self, id: &IrrepId) -> IrrepId {
        self.parent.conj(id)
    }

    fn fuse_raw(&self, u: &IrrepId, v: &IrrepId) -> RepVector {
        self.parent.fuse_raw(u, v)
    }

    fn fuse_support_into(&self, u: &IrrepId, v: &IrrepId, out: &mut Vec<IrrepId>) {
        self.parent.fuse_support_into(u, v, out)
    }

    /// Discovery order: by first level, then canonical label order.
    fn enumerate(&self, limit: usize) -> Vec<IrrepId> {
        self.explore_until(|e| e.order.len() >= limit);
        let e = self.explored.read().unwrap();
        e.order.iter().take(limit).cloned().collect()
    }

    fn size(&self) -> Option<usize> {
        let e = self.explored.read().unwrap();
        e.exhausted().then_some(e.order.len())
    }

    fn parse_irrep(&self, label: &str) -> Result<IrrepId> {
        let id = self.parent.parse_irrep(label)?;
        if self.contains(&id) {
            Ok(id)
        } else {
            Err(Error::UnknownIrrep(label.to_string()))
        }
    }

    fn modular_data(&self, id: &IrrepId) -> Option<IrrepModularData> {
        self.parent.modular_data(id)
    }
}
