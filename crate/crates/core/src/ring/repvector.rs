use std::collections::btree_map;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;

use super::id::IrrepId;

/// A finite nonnegative-integer combination of irreducibles.
///
/// Zero multiplicities are never stored.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct RepVector {
    entries: BTreeMap<IrrepId, BigUint>,
}

impl RepVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(id: IrrepId) -> Self {
        let mut v = Self::new();
        v.add(id, BigUint::from(1u32));
        v
    }

    pub fn from_pairs<I>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (IrrepId, u64)>,
    {
        let mut v = Self::new();
        for (id, m) in pairs {
            v.add(id, BigUint::from(m));
        }
        v
    }

    pub fn add(&mut self, id: IrrepId, mult: BigUint) {
        if mult.is_zero() {
            return;
        }
        match self.entries.entry(id) {
            btree_map::Entry::Occupied(mut e) => *e.get_mut() += mult,
            btree_map::Entry::Vacant(e) => {
                e.insert(mult);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &RepVector, factor: &BigUint) {
        if factor.is_zero() {
            return;
        }
        for (id, m) in other.iter() {
            self.add(id.clone(), m * factor);
        }
    }

    pub fn get(&self, id: &IrrepId) -> BigUint {
        self.entries.get(id).cloned().unwrap_or_default()
    }

    pub fn contains(&self, id: &IrrepId) -> bool {
        self.entries.contains_key(id)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&IrrepId, &BigUint)> {
        self.entries.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &IrrepId> {
        self.entries.keys()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Multiplies every multiplicity by `factor`.
    pub fn scaled(&self, factor: u64) -> RepVector {
        let f = BigUint::from(factor);
        let mut out = RepVector::new();
        out.add_scaled(self, &f);
        out
    }
}

impl FromIterator<(IrrepId, BigUint)> for RepVector {
    fn from_iter<T: IntoIterator<Item = (IrrepId, BigUint)>>(iter: T) -> Self {
        let mut v = RepVector::new();
        for (id, m) in iter {
            v.add(id, m);
        }
        v
    }
}

impl fmt::Display for RepVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (id, m)) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{id}:{m}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for RepVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
