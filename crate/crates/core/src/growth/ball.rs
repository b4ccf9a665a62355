use std::collections::BTreeMap;
use std::hash::Hash;

use rustc_hash::FxHashSet;

use crate::error::{Error, Result};
use crate::ring::{check_support, conjugate, FusionRing, IrrepId, RepVector};

/// Default bound on the number of irreducibles held during enumeration.
pub const DEFAULT_CAP: usize = 10_000_000;

/// Irreducibles of `u^{⊗k}`, `k ≤ n`, keyed by first appearance.
#[derive(Clone, Debug)]
pub struct Ball {
    pub generator: RepVector,
    pub radius: usize,
    pub entries: BTreeMap<IrrepId, usize>,
    levels: Vec<Vec<IrrepId>>,
}

impl Ball {
    /// Members first appearing in `u^{⊗k}`, in canonical order.
    pub fn level(&self, k: usize) -> &[IrrepId] {
        self.levels.get(k).map_or(&[], |l| l.as_slice())
    }

    pub fn levels(&self) -> &[Vec<IrrepId>] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, id: &IrrepId) -> bool {
        self.entries.contains_key(id)
    }

    pub fn first_power(&self, id: &IrrepId) -> Option<usize> {
        self.entries.get(id).copied()
    }
}

/// Level-by-level breadth-first walk of a fusion graph over keys `K`.
///
/// When the generating support is closed under conjugation the graph is
/// undirected, so a new level only has to be compared with the two previous
/// ones and older levels are dropped.
pub(crate) struct LevelWalker<K, F> {
    fuse: F,
    gens: Vec<K>,
    streaming: bool,
    older: FxHashSet<K>,
    current: FxHashSet<K>,
    frontier: Vec<K>,
    held: usize,
    cap: usize,
    buf: Vec<K>,
}

impl<K, F> LevelWalker<K, F>
where
    K: Hash + Eq + Clone,
    F: FnMut(&K, &K, &mut Vec<K>),
{
    pub(crate) fn new(unit: K, gens: Vec<K>, streaming: bool, cap: usize, fuse: F) -> Self {
        let mut current = FxHashSet::default();
        current.insert(unit.clone());
        LevelWalker {
            fuse,
            gens,
            streaming,
            older: FxHashSet::default(),
            current,
            frontier: vec![unit],
            held: 1,
            cap,
            buf: Vec::new(),
        }
    }

    /// Members of the most recent level, in discovery order.
    pub(crate) fn frontier(&self) -> &[K] {
        &self.frontier
    }

    /// Advances one level; returns the new frontier (possibly empty).
    pub(crate) fn advance(&mut self) -> Result<&[K]> {
        let mut fresh: FxHashSet<K> = FxHashSet::default();
        let mut next = Vec::new();
        for v in &self.frontier {
            for g in &self.gens {
                self.buf.clear();
                (self.fuse)(v, g, &mut self.buf);
                for w in self.buf.drain(..) {
                    if self.current.contains(&w) || self.older.contains(&w) {
                        continue;
                    }
                    if fresh.insert(w.clone()) {
                        next.push(w);
                    }
                }
            }
            if self.held + fresh.len() > self.cap {
                return Err(Error::CapExceeded { cap: self.cap });
            }
        }
        if self.streaming {
            self.older = std::mem::replace(&mut self.current, fresh);
            self.held = self.older.len() + self.current.len();
        } else {
            self.current.extend(fresh);
            self.held = self.current.len();
        }
        self.frontier = next;
        Ok(&self.frontier)
    }
}

/// Support of `u` and whether it is closed under conjugation.
pub(crate) fn generator_support(
    ring: &dyn FusionRing,
    u: &RepVector,
) -> Result<(Vec<IrrepId>, bool)> {
    check_support(ring, u)?;
    let symmetric = conjugate(ring, u)?.support().eq(u.support());
    Ok((u.support().cloned().collect(), symmetric))
}

/// Breadth-first ball of radius `n` around the unit in the fusion graph of
/// `u`. Exceeding `cap` stored irreducibles is an error.
pub fn ball_with_cap(ring: &dyn FusionRing, u: &RepVector, n: usize, cap: usize) -> Result<Ball> {
    let (gens, _) = generator_support(ring, u)?;
    let mut walker = LevelWalker::new(ring.unit(), gens, false, cap, |a, b, out| {
        ring.fuse_support_into(a, b, out)
    });
    let mut entries = BTreeMap::new();
    let mut levels = Vec::with_capacity(n + 1);
    let mut level0 = walker.frontier().to_vec();
    level0.sort();
    entries.insert(level0[0].clone(), 0);
    levels.push(level0);
    for k in 1..=n {
        let mut level = walker.advance()?.to_vec();
        if level.is_empty() {
            levels.resize(n + 1, Vec::new());
            break;
        }
        level.sort();
        for id in &level {
            entries.insert(id.clone(), k);
        }
        levels.push(level);
    }
    Ok(Ball {
        generator: u.clone(),
        radius: n,
        entries,
        levels,
    })
}

pub fn ball(ring: &dyn FusionRing, u: &RepVector, n: usize) -> Result<Ball> {
    ball_with_cap(ring, u, n, DEFAULT_CAP)
}
