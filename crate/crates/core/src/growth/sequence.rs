use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;

use super::ball::{generator_support, LevelWalker, DEFAULT_CAP};
use crate::error::{Error, Result};
use crate::ring::{big_ln, DimensionFunction, DimensionKind, FusionRing, IrrepId, RepVector};

/// One term `b(u, n)`: exact for the vector dimension, a float otherwise.
#[derive(Clone, Debug, PartialEq)]
pub enum GrowthValue {
    Exact(BigUint),
    Real(f64),
}

impl GrowthValue {
    pub fn ln(&self) -> f64 {
        match self {
            GrowthValue::Exact(b) => big_ln(b),
            GrowthValue::Real(x) => x.ln(),
        }
    }

    pub fn as_exact(&self) -> Option<&BigUint> {
        match self {
            GrowthValue::Exact(b) => Some(b),
            GrowthValue::Real(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            GrowthValue::Exact(b) => crate::ring::big_to_f64(b),
            GrowthValue::Real(x) => *x,
        }
    }
}

impl fmt::Display for GrowthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GrowthValue::Exact(b) => write!(f, "{b}"),
            GrowthValue::Real(x) => write!(f, "{x:e}"),
        }
    }
}

/// `b(u, n)` for `n = 0, …, n_max` under one dimension function.
#[derive(Clone, Debug)]
pub struct GrowthSequence {
    pub ring: String,
    pub generator: RepVector,
    pub dimfn: DimensionKind,
    pub values: Vec<GrowthValue>,
}

impl GrowthSequence {
    pub fn n_max(&self) -> usize {
        self.values.len() - 1
    }

    pub fn ln_values(&self) -> Vec<f64> {
        self.values.iter().map(GrowthValue::ln).collect()
    }

    /// Table with header `n,b`, one row per `n`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,b\n");
        for (n, b) in self.values.iter().enumerate() {
            out.push_str(&format!("{n},{b}\n"));
        }
        out
    }
}

/// Growth sequence with the default enumeration cap.
pub fn growth_sequence(
    ring: &dyn FusionRing,
    u: &RepVector,
    d: &DimensionFunction,
    n_max: usize,
) -> Result<GrowthSequence> {
    growth_sequence_with_cap(ring, u, d, n_max, DEFAULT_CAP)
}

/// `b(u, n) = Σ d(v)²` over the ball of radius `n`, accumulated level by
/// level. For the vector dimension the sums are exact integers.
pub fn growth_sequence_with_cap(
    ring: &dyn FusionRing,
    u: &RepVector,
    d: &DimensionFunction,
    n_max: usize,
    cap: usize,
) -> Result<GrowthSequence> {
    let (gens, symmetric) = generator_support(ring, u)?;
    let packed: Option<Vec<u128>> = gens.iter().map(|g| ring.pack(g)).collect();
    let values = match (ring.pack(&ring.unit()), packed) {
        (Some(unit), Some(gens)) if symmetric && ring.packed_translation() => {
            let deltas: Vec<u128> = gens.iter().map(|g| g.wrapping_sub(unit)).collect();
            let walker = TranslationWalker::new(unit, deltas, cap);
            accumulate_translation(walker, n_max, |level| {
                let ids: Vec<IrrepId>;
                if d.kind() == DimensionKind::Vector {
                    let small: Option<Vec<u64>> =
                        level.iter().map(|k| ring.small_dim_packed(*k)).collect();
                    if let Some(dims) = small {
                        return Ok(LevelSum::Exact(sum_of_squares(dims.into_iter())));
                    }
                }
                ids = level.iter().map(|k| ring.unpack(*k)).collect();
                level_sum(ring, d, &ids)
            })?
        }
        (Some(unit), Some(gens)) => {
            let walker = LevelWalker::new(unit, gens, symmetric, cap, |a, b, out| {
                ring.fuse_support_packed(*a, *b, out)
            });
            accumulate(walker, n_max, |level| {
                if d.kind() == DimensionKind::Vector {
                    let small: Option<Vec<u64>> =
                        level.iter().map(|k| ring.small_dim_packed(*k)).collect();
                    if let Some(dims) = small {
                        return Ok(LevelSum::Exact(sum_of_squares(dims.into_iter())));
                    }
                }
                let ids: Vec<IrrepId> = level.iter().map(|k| ring.unpack(*k)).collect();
                level_sum(ring, d, &ids)
            })?
        }
        _ => {
            let walker = LevelWalker::new(ring.unit(), gens, symmetric, cap, |a, b, out| {
                ring.fuse_support_into(a, b, out)
            });
            accumulate(walker, n_max, |level| level_sum(ring, d, level))?
        }
    };
    Ok(GrowthSequence {
        ring: ring.spec(),
        generator: u.clone(),
        dimfn: d.kind(),
        values,
    })
}

/// Streaming walk for rings whose packed fusion is a translation of keys:
/// levels are sorted vectors and each step is a merge.
struct TranslationWalker {
    deltas: Vec<u128>,
    older: Vec<u128>,
    current: Vec<u128>,
    cap: usize,
}

impl TranslationWalker {
    fn new(unit: u128, deltas: Vec<u128>, cap: usize) -> Self {
        TranslationWalker {
            deltas,
            older: Vec::new(),
            current: vec![unit],
            cap,
        }
    }

    fn advance(&mut self) -> Result<&[u128]> {
        let mut cand = Vec::with_capacity(self.current.len() * self.deltas.len());
        for &d in &self.deltas {
            cand.extend(self.current.iter().map(|k| k.wrapping_add(d)));
        }
        // One sorted run per generator; the stable sort merges runs.
        cand.sort();
        cand.dedup();
        let (mut i, mut j) = (0, 0);
        let (cur, old) = (&self.current, &self.older);
        cand.retain(|k| {
            while i < cur.len() && cur[i] < *k {
                i += 1;
            }
            while j < old.len() && old[j] < *k {
                j += 1;
            }
            cur.get(i) != Some(k) && old.get(j) != Some(k)
        });
        if cand.len() + self.current.len() > self.cap {
            return Err(Error::CapExceeded { cap: self.cap });
        }
        self.older = std::mem::replace(&mut self.current, cand);
        Ok(&self.current)
    }
}

fn accumulate_translation(
    mut walker: TranslationWalker,
    n_max: usize,
    mut sum: impl FnMut(&[u128]) -> Result<LevelSum>,
) -> Result<Vec<GrowthValue>> {
    let mut values = Vec::with_capacity(n_max + 1);
    let mut total = Total::default();
    for n in 0..=n_max {
        let level = if n == 0 {
            walker.current.clone()
        } else {
            walker.advance()?.to_vec()
        };
        values.push(total.add(sum(&level)?));
    }
    Ok(values)
}

#[derive(Default)]
struct Total {
    exact: BigUint,
    real: f64,
}

impl Total {
    fn add(&mut self, s: LevelSum) -> GrowthValue {
        match s {
            LevelSum::Exact(s) => {
                self.exact += s;
                GrowthValue::Exact(self.exact.clone())
            }
            LevelSum::Real(s) => {
                self.real += s;
                GrowthValue::Real(self.real)
            }
        }
    }
}

enum LevelSum {
    Exact(BigUint),
    Real(f64),
}

fn accumulate<K, F>(
    mut walker: LevelWalker<K, F>,
    n_max: usize,
    mut sum: impl FnMut(&[K]) -> Result<LevelSum>,
) -> Result<Vec<GrowthValue>>
where
    K: std::hash::Hash + Eq + Clone,
    F: FnMut(&K, &K, &mut Vec<K>),
{
    let mut values = Vec::with_capacity(n_max + 1);
    let mut total = Total::default();
    for n in 0..=n_max {
        let level = if n == 0 {
            walker.frontier()
        } else {
            walker.advance()?
        };
        values.push(total.add(sum(level)?));
    }
    Ok(values)
}

fn level_sum(ring: &dyn FusionRing, d: &DimensionFunction, level: &[IrrepId]) -> Result<LevelSum> {
    if d.kind() == DimensionKind::Vector {
        return Ok(LevelSum::Exact(level_sum_exact(ring, level)));
    }
    let mut s = 0.0;
    for v in level {
        let x = d.value(ring, v)?;
        s += x * x;
    }
    Ok(LevelSum::Real(s))
}

fn level_sum_exact(ring: &dyn FusionRing, level: &[IrrepId]) -> BigUint {
    let mut big = BigUint::zero();
    let small = sum_of_squares(level.iter().filter_map(|v| match ring.small_dim(v) {
        Some(x) => Some(x),
        None => {
            let x = ring.dim(v);
            big += &x * &x;
            None
        }
    }));
    big + small
}

fn sum_of_squares(xs: impl Iterator<Item = u64>) -> BigUint {
    let mut small: u128 = 0;
    let mut big = BigUint::zero();
    for x in xs {
        let sq = (x as u128) * (x as u128);
        match small.checked_add(sq) {
            Some(s) => small = s,
            None => {
                big += small;
                small = sq;
            }
        }
    }
    big + small
}
