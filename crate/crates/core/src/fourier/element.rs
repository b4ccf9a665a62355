use std::collections::BTreeMap;

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{max_abs, CMat};
use crate::ring::IrrepId;

macro_rules! block_element {
    ($name:ident) => {
        impl $name {
            pub fn zero() -> Self {
                $name {
                    blocks: BTreeMap::new(),
                }
            }

            pub fn single(id: IrrepId, block: CMat) -> Self {
                let mut blocks = BTreeMap::new();
                blocks.insert(id, block);
                $name { blocks }
            }

            pub fn from_blocks(blocks: impl IntoIterator<Item = (IrrepId, CMat)>) -> Self {
                $name {
                    blocks: blocks.into_iter().collect(),
                }
            }

            pub fn block(&self, id: &IrrepId) -> Option<&CMat> {
                self.blocks.get(id)
            }

            pub fn support(&self) -> impl Iterator<Item = &IrrepId> {
                self.blocks.keys()
            }

            /// Adds `block` into the block at `id`.
            pub fn accumulate(&mut self, id: &IrrepId, block: &CMat) {
                match self.blocks.get_mut(id) {
                    Some(b) => *b += block,
                    None => {
                        self.blocks.insert(id.clone(), block.clone());
                    }
                }
            }

            pub fn add(&self, other: &Self) -> Self {
                let mut out = self.clone();
                for (id, b) in &other.blocks {
                    out.accumulate(id, b);
                }
                out
            }

            pub fn sub(&self, other: &Self) -> Self {
                self.add(&other.scale(Complex64::new(-1.0, 0.0)))
            }

            pub fn scale(&self, s: Complex64) -> Self {
                $name {
                    blocks: self
                        .blocks
                        .iter()
                        .map(|(id, b)| (id.clone(), b * s))
                        .collect(),
                }
            }

            /// Largest entry modulus over all blocks.
            pub fn max_abs(&self) -> f64 {
                self.blocks.values().map(max_abs).fold(0.0, f64::max)
            }

            /// `max_abs` of the difference.
            pub fn distance(&self, other: &Self) -> f64 {
                self.sub(other).max_abs()
            }

            /// Drops blocks whose entries are all below `tol`.
            pub fn pruned(mut self, tol: f64) -> Self {
                self.blocks.retain(|_, b| max_abs(b) > tol);
                self
            }

            pub fn to_json(&self) -> Value {
                blocks_to_json(&self.blocks)
            }

            pub fn from_json(value: &Value, origin: &str) -> Result<Self> {
                Self::from_json_with(value, origin, |s| Ok(IrrepId::label(s)))
            }

            /// Parses block keys with `parse` instead of as plain labels.
            pub fn from_json_with(
                value: &Value,
                origin: &str,
                parse: impl Fn(&str) -> Result<IrrepId>,
            ) -> Result<Self> {
                Ok($name {
                    blocks: blocks_from_json(value, origin, parse)?,
                })
            }
        }
    };
}

/// An element `Σ_v Σ_{ij} λ^v_{ij} v_{ij}` of the coefficient algebra,
/// stored as the blocks `Λ_v`.
#[derive(Clone, Debug, PartialEq)]
pub struct QElement {
    pub blocks: BTreeMap<IrrepId, CMat>,
}

/// A finitely supported element of `ℓ¹` of the dual, stored as blocks `A_v`.
#[derive(Clone, Debug, PartialEq)]
pub struct EllOneElement {
    pub blocks: BTreeMap<IrrepId, CMat>,
}

block_element!(QElement);
block_element!(EllOneElement);

fn complex_to_json(z: &Complex64) -> Value {
    json!([z.re, z.im])
}

fn matrix_to_json(m: &CMat) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|r| {
                Value::Array(
                    (0..m.ncols())
                        .map(|c| complex_to_json(&m[(r, c)]))
                        .collect(),
                )
            })
            .collect(),
    )
}

fn blocks_to_json(blocks: &BTreeMap<IrrepId, CMat>) -> Value {
    let map = blocks
        .iter()
        .map(|(id, b)| (id.to_string(), matrix_to_json(b)))
        .collect::<serde_json::Map<_, _>>();
    json!({ "blocks": map })
}

/// Parses a square matrix of `[re, im]` pairs.
pub(crate) fn matrix_from_json(value: &Value, origin: &str) -> Result<CMat> {
    let bad = |why: &str| Error::malformed(origin, why.to_string());
    let rows = value
        .as_array()
        .ok_or_else(|| bad("matrix must be an array of rows"))?;
    let n = rows.len();
    let mut m = CMat::zeros(n, n);
    for (r, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| bad("matrix row must be an array"))?;
        if row.len() != n {
            return Err(bad("matrix must be square"));
        }
        for (c, z) in row.iter().enumerate() {
            let pair = z.as_array().filter(|p| p.len() == 2);
            let pair = pair.ok_or_else(|| bad("complex entries are [re, im] pairs"))?;
            let re = pair[0].as_f64().ok_or_else(|| bad("non-numeric entry"))?;
            let im = pair[1].as_f64().ok_or_else(|| bad("non-numeric entry"))?;
            m[(r, c)] = Complex64::new(re, im);
        }
    }
    Ok(m)
}

fn blocks_from_json(
    value: &Value,
    origin: &str,
    parse: impl Fn(&str) -> Result<IrrepId>,
) -> Result<BTreeMap<IrrepId, CMat>> {
    let map = value
        .get("blocks")
        .and_then(Value::as_object)
        .ok_or_else(|| Error::malformed(origin, "expected an object with a `blocks` map"))?;
    map.iter()
        .map(|(k, v)| Ok((parse(k)?, matrix_from_json(v, origin)?)))
        .collect()
}

pub(crate) fn matrix_json(m: &CMat) -> Value {
    matrix_to_json(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    #[test]
    fn json_round_trip() {
        let m = CMat::from_row_slice(
            2,
            2,
            &[c(1.0, 0.5), c(0.0, -1.0), c(2.0, 0.0), c(0.25, 0.0)],
        );
        let a = QElement::single(IrrepId::label("std"), m);
        let back = QElement::from_json(&a.to_json(), "test").unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn rejects_bad_entries() {
        let v = json!({"blocks": {"x": [[1.0]]}});
        assert!(QElement::from_json(&v, "t").is_err());
    }

    #[test]
    fn arithmetic() {
        let id = IrrepId::label("a");
        let a = QElement::single(id.clone(), CMat::from_element(1, 1, c(1.0, 1.0)));
        let b = a.scale(c(2.0, 0.0));
        assert!((a.add(&a).distance(&b)) < 1e-15);
        assert!(b.sub(&b).max_abs() == 0.0);
    }
}
