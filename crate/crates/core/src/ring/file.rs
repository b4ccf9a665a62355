//! File-backed rings: explicit fusion tables and duals of finite groups.

use std::collections::HashMap;
use std::path::Path;
use std::sync::Arc;

use num_bigint::BigUint;
use serde::Deserialize;

use super::{FusionRing, IrrepId, RepVector};
use crate::error::{Error, Result};

#[derive(Deserialize)]
struct IrrepEntry {
    id: String,
    dim: u64,
    qdim: Option<f64>,
    conj: String,
}

#[derive(Deserialize)]
struct FusionEntry {
    left: String,
    right: String,
    out: HashMap<String, u64>,
}

#[derive(Deserialize)]
struct RingFile {
    unit: String,
    irreps: Vec<IrrepEntry>,
    fusion: Vec<FusionEntry>,
}

pub(crate) fn read_text(path: &str) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_string(),
        source,
    })
}

/// A finite ring given by an explicit, total fusion table.
///
/// Construction checks only the shape of the table; use
/// [`validate_ring`](super::validate_ring) (or [`load_ring`](super::load_ring),
/// which validates) for the algebraic invariants.
pub struct FileRing {
    spec: String,
    labels: Vec<IrrepId>,
    index: HashMap<IrrepId, usize>,
    unit: usize,
    dims: Vec<BigUint>,
    qdims: Vec<f64>,
    conj: Vec<usize>,
    fusion: Vec<Vec<RepVector>>,
}

impl FileRing {
    pub fn load(path: &str) -> Result<Self> {
        let text = read_text(path)?;
        Self::from_json_str(&text, path)
    }

    pub fn from_json_str(text: &str, origin: &str) -> Result<Self> {
        let file: RingFile =
            serde_json::from_str(text).map_err(|e| Error::malformed(origin, e.to_string()))?;
        let labels: Vec<IrrepId> = file.irreps.iter().map(|e| IrrepId::label(&e.id)).collect();
        let mut index = HashMap::new();
        for (i, id) in labels.iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(Error::malformed(origin, format!("duplicate irrep `{id}`")));
            }
        }
        let lookup = |s: &str| {
            index
                .get(&IrrepId::label(s))
                .copied()
                .ok_or_else(|| Error::malformed(origin, format!("unknown irrep `{s}`")))
        };
        let unit = lookup(&file.unit)?;
        let mut dims = Vec::new();
        let mut qdims = Vec::new();
        let mut conj = Vec::new();
        for e in &file.irreps {
            if e.dim == 0 {
                return Err(Error::malformed(
                    origin,
                    format!("irrep `{}` has dim 0", e.id),
                ));
            }
            let qd = e.qdim.unwrap_or(e.dim as f64);
            if !(qd.is_finite() && qd > 0.0) {
                return Err(Error::malformed(
                    origin,
                    format!("irrep `{}` has bad qdim", e.id),
                ));
            }
            dims.push(BigUint::from(e.dim));
            qdims.push(qd);
            conj.push(lookup(&e.conj)?);
        }
        let n = labels.len();
        let mut table: Vec<Vec<Option<RepVector>>> = vec![vec![None; n]; n];
        for f in &file.fusion {
            let (l, r) = (lookup(&f.left)?, lookup(&f.right)?);
            let mut out = RepVector::new();
            for (k, &m) in &f.out {
                out.add(labels[lookup(k)?].clone(), BigUint::from(m));
            }
            if table[l][r].replace(out).is_some() {
                return Err(Error::malformed(
                    origin,
                    format!("duplicate fusion entry {} ⊗ {}", f.left, f.right),
                ));
            }
        }
        let mut fusion = Vec::with_capacity(n);
        for (i, row) in table.into_iter().enumerate() {
            let mut full = Vec::with_capacity(n);
            for (j, cell) in row.into_iter().enumerate() {
                full.push(cell.ok_or_else(|| {
                    Error::malformed(
                        origin,
                        format!("missing fusion entry {} ⊗ {}", labels[i], labels[j]),
                    )
                })?);
            }
            fusion.push(full);
        }
        Ok(FileRing {
            spec: format!("file:{origin}"),
            labels,
            index,
            unit,
            dims,
            qdims,
            conj,
            fusion,
        })
    }

    fn idx(&self, id: &IrrepId) -> usize {
        self.index[id]
    }
}

impl FusionRing for FileRing {
    fn spec(&self) -> String {
        self.spec.clone()
    }

    fn unit(&self) -> IrrepId {
        self.labels[self.unit].clone()
    }

    fn contains(&self, id: &IrrepId) -> bool {
        self.index.contains_key(id)
    }

    fn dim(&self, id: &IrrepId) -> BigUint {
        self.dims[self.idx(id)].clone()
    }

    fn qdim(&self, id: &IrrepId) -> f64 {
        self.qdims[self.idx(id)]
    }

    fn conj(&self, id: &IrrepId) -> IrrepId {
        self.labels[self.conj[self.idx(id)]].clone()
    }

    fn fuse_raw(&self, u: &IrrepId, v: &IrrepId) -> RepVector {
        self.fusion[self.idx(u)][self.idx(v)].clone()
    }

    fn enumerate(&self, limit: usize) -> Vec<IrrepId> {
        self.labels.iter().take(limit).cloned().collect()
    }

    fn size(&self) -> Option<usize> {
        Some(self.labels.len())
    }

    fn parse_irrep(&self, label: &str) -> Result<IrrepId> {
        let id = IrrepId::label(label.trim());
        if self.contains(&id) {
            Ok(id)
        } else {
            Err(Error::UnknownIrrep(label.to_string()))
        }
    }
}

#[derive(Deserialize)]
struct GroupFile {
    elements: Vec<String>,
    mult_table: Vec<Vec<usize>>,
}

/// Images `[σ(0), σ(1), σ(2)]` of the elements of [`FiniteGroup::symmetric3`].
pub(crate) const S3_PERMUTATIONS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [1, 0, 2],
    [0, 2, 1],
    [2, 1, 0],
    [1, 2, 0],
    [2, 0, 1],
];

/// A finite group given by its multiplication table,
/// `table[i][j] = index of g_i·g_j`.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    elements: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Checks closure, associativity, identity and inverses.
    pub fn new(elements: Vec<String>, table: Vec<Vec<usize>>) -> std::result::Result<Self, String> {
        let n = elements.len();
        if n == 0 {
            return Err("empty group".into());
        }
        if table.len() != n || table.iter().any(|row| row.len() != n) {
            return Err(format!("multiplication table must be {n}×{n}"));
        }
        if table.iter().flatten().any(|&k| k >= n) {
            return Err("table entry out of range".into());
        }
        let mut seen = std::collections::HashSet::new();
        if !elements.iter().all(|e| seen.insert(e)) {
            return Err("duplicate element name".into());
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or("no identity element")?;
        let mut inverse = Vec::with_capacity(n);
        for g in 0..n {
            let inv = (0..n)
                .find(|&h| table[g][h] == identity && table[h][g] == identity)
                .ok_or_else(|| format!("element {} has no inverse", elements[g]))?;
            inverse.push(inv);
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(format!(
                            "not associative at ({}, {}, {})",
                            elements[a], elements[b], elements[c]
                        ));
                    }
                }
            }
        }
        Ok(FiniteGroup {
            elements,
            table,
            identity,
            inverse,
        })
    }

    pub fn from_json_value(value: &serde_json::Value, origin: &str) -> Result<Self> {
        let file: GroupFile = serde_json::from_value(value.clone())
            .map_err(|e| Error::malformed(origin, e.to_string()))?;
        FiniteGroup::new(file.elements, file.mult_table).map_err(|e| Error::malformed(origin, e))
    }

    pub fn load(path: &str) -> Result<Self> {
        let text = read_text(path)?;
        let value: serde_json::Value =
            serde_json::from_str(&text).map_err(|e| Error::malformed(path, e.to_string()))?;
        Self::from_json_value(&value, path)
    }

    /// `ℤ/n` with elements `0, …, n−1`.
    pub fn cyclic(n: usize) -> Self {
        let elements = (0..n).map(|k| k.to_string()).collect();
        let table = (0..n)
            .map(|i| (0..n).map(|j| (i + j) % n).collect())
            .collect();
        FiniteGroup::new(elements, table).expect("cyclic group")
    }

    /// `S₃` as permutations of `{0,1,2}` in the order
    /// `e, (01), (12), (02), (012), (021)`; composition `(στ)(x) = σ(τ(x))`.
    pub fn symmetric3() -> Self {
        let perms = S3_PERMUTATIONS;
        let names = ["e", "(01)", "(12)", "(02)", "(012)", "(021)"];
        let find = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        let table = perms
            .iter()
            .map(|s| {
                perms
                    .iter()
                    .map(|t| find([s[t[0]], s[t[1]], s[t[2]]]))
                    .collect()
            })
            .collect();
        FiniteGroup::new(names.iter().map(|s| s.to_string()).collect(), table).expect("S3")
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == name)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({ "elements": self.elements, "mult_table": self.table })
    }
}

/// Dual of a finite group: irreducibles are group elements, all of dimension 1.
pub struct GroupDualRing {
    spec: String,
    group: Arc<FiniteGroup>,
    index: HashMap<IrrepId, usize>,
    labels: Vec<IrrepId>,
}

impl GroupDualRing {
    pub fn new(group: FiniteGroup, spec: String) -> Self {
        let labels: Vec<IrrepId> = group.elements().iter().map(|e| IrrepId::label(e)).collect();
        let index = labels
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, l)| (l, i))
            .collect();
        GroupDualRing {
            spec,
            group: Arc::new(group),
            index,
            labels,
        }
    }

    pub fn load(path: &str) -> Result<Self> {
        Ok(Self::new(
            FiniteGroup::load(path)?,
            format!("group-dual:file={path}"),
        ))
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    /// Index of an element label in the group.
    pub fn element_index(&self, id: &IrrepId) -> Option<usize> {
        self.index.get(id).copied()
    }
}

impl FusionRing for GroupDualRing {
    fn spec(&self) -> String {
        self.spec.clone()
    }

    fn unit(&self) -> IrrepId {
        self.labels[self.group.identity()].clone()
    }

    fn contains(&self, id: &IrrepId) -> bool {
        self.index.contains_key(id)
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
        self.labels[self.group.inv(self.index[id])].clone()
    }

    fn fuse_raw(&self, u: &IrrepId, v: &IrrepId) -> RepVector {
        RepVector::singleton(self.labels[self.group.mul(self.index[u], self.index[v])].clone())
    }

    fn fuse_support_into(&self, u: &IrrepId, v: &IrrepId, out: &mut Vec<IrrepId>) {
        out.push(self.labels[self.group.mul(self.index[u], self.index[v])].clone());
    }

    fn enumerate(&self, limit: usize) -> Vec<IrrepId> {
        self.labels.iter().take(limit).cloned().collect()
    }

    fn size(&self) -> Option<usize> {
        Some(self.labels.len())
    }

    fn parse_irrep(&self, label: &str) -> Result<IrrepId> {
        let id = IrrepId::label(label.trim());
        if self.contains(&id) {
            Ok(id)
        } else {
            Err(Error::UnknownIrrep(label.to_string()))
        }
    }
}

/// Writes `value` as pretty JSON; shared by the data exporters.
pub fn write_json(path: &Path, value: &serde_json::Value) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    std::fs::write(path, text + "\n").map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}
