use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, RwLock};

use num_complex::Complex64;
use serde::Deserialize;
use serde_json::{json, Value};

use super::element::{matrix_from_json, matrix_json};
use super::intertwiner::{solve_intertwiners, IntertwinerBasis};
use crate::error::{Error, Result};
use crate::linalg::{c, identity, max_abs, CMat};
use crate::ring::file::{read_text, S3_PERMUTATIONS};
use crate::ring::{FiniteGroup, IrrepId};

const UNITARY_TOL: f64 = 1e-12;
const CHAR_TOL: f64 = 1e-9;

/// Which concrete realization of a finite quantum group.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    /// `C(G)`: irreducibles are unitary matrix representations of `G`.
    Commutative,
    /// `C*(Γ)`: irreducibles are the group elements, all one-dimensional.
    Cocommutative,
}

/// One irreducible with its matrices `u(g)`, indexed like the group elements.
#[derive(Clone, Debug)]
pub struct MatrixIrrep {
    pub id: IrrepId,
    pub dim: usize,
    pub matrices: Vec<CMat>,
}

pub(crate) type TripleKey = (usize, usize, usize);

/// A finite quantum group in one of the two concrete models.
pub struct FiniteQG {
    name: String,
    group: FiniteGroup,
    kind: ModelKind,
    irreps: Vec<MatrixIrrep>,
    index: HashMap<IrrepId, usize>,
    unit: usize,
    conj: Vec<usize>,
    /// Unitary `M_v` with `v̄(g) = M_v·conj(v(g))·M_v*`.
    conj_map: Vec<CMat>,
    /// Fusion multiplicities from characters, `[u][u′][w]`.
    fusion: Vec<Vec<Vec<usize>>>,
    pub(crate) intertwiners: RwLock<HashMap<TripleKey, Arc<IntertwinerBasis>>>,
}

#[derive(Deserialize)]
struct IrrepFile {
    id: String,
    dim: usize,
    matrices: HashMap<String, Value>,
}

#[derive(Deserialize)]
struct ModelFile {
    #[serde(default)]
    model: Option<String>,
    #[serde(default)]
    irreps: Vec<IrrepFile>,
}

fn character(m: &[CMat]) -> Vec<Complex64> {
    m.iter().map(|x| x.trace()).collect()
}

impl FiniteQG {
    /// Commutative model from explicit irreducible matrices. Checks
    /// unitarity, multiplicativity, irreducibility, inequivalence and
    /// completeness (`Σ dim² = |G|`).
    pub fn commutative(name: &str, group: FiniteGroup, irreps: Vec<MatrixIrrep>) -> Result<Self> {
        let bad = |why: String| Error::malformed(name, why);
        let n = group.order();
        for v in &irreps {
            if v.matrices.len() != n {
                return Err(bad(format!("irrep {} needs one matrix per element", v.id)));
            }
            for (g, m) in v.matrices.iter().enumerate() {
                if m.nrows() != v.dim || m.ncols() != v.dim {
                    return Err(bad(format!(
                        "irrep {} has a matrix of the wrong size",
                        v.id
                    )));
                }
                if max_abs(&(m.adjoint() * m - identity(v.dim))) > UNITARY_TOL {
                    return Err(bad(format!(
                        "{}({}) is not unitary",
                        v.id,
                        group.elements()[g]
                    )));
                }
            }
            for a in 0..n {
                for b in 0..n {
                    let lhs = &v.matrices[group.mul(a, b)];
                    if max_abs(&(lhs - &v.matrices[a] * &v.matrices[b])) > UNITARY_TOL {
                        return Err(bad(format!(
                            "{} is not multiplicative at ({}, {})",
                            v.id,
                            group.elements()[a],
                            group.elements()[b]
                        )));
                    }
                }
            }
        }
        let chars: Vec<Vec<Complex64>> = irreps.iter().map(|v| character(&v.matrices)).collect();
        let pair = |x: &[Complex64], y: &[Complex64]| -> Complex64 {
            x.iter()
                .zip(y)
                .map(|(a, b)| a * b.conj())
                .sum::<Complex64>()
                / n as f64
        };
        for (i, x) in chars.iter().enumerate() {
            for (j, y) in chars.iter().enumerate() {
                let expect = if i == j { 1.0 } else { 0.0 };
                if (pair(x, y) - expect).norm() > CHAR_TOL {
                    return Err(bad(format!(
                        "irreps {} and {} violate character orthogonality (reducible or equivalent)",
                        irreps[i].id, irreps[j].id
                    )));
                }
            }
        }
        if irreps.iter().map(|v| v.dim * v.dim).sum::<usize>() != n {
            return Err(bad("Σ dim² differs from the group order".into()));
        }
        let unit = irreps
            .iter()
            .position(|v| {
                v.dim == 1
                    && v.matrices
                        .iter()
                        .all(|m| (m[(0, 0)] - 1.0).norm() < CHAR_TOL)
            })
            .ok_or_else(|| bad("no trivial representation".into()))?;
        let mut conj = Vec::new();
        let mut conj_map = Vec::new();
        for (i, x) in chars.iter().enumerate() {
            let xbar: Vec<Complex64> = x.iter().map(|z| z.conj()).collect();
            let j = chars
                .iter()
                .position(|y| (pair(y, &xbar) - 1.0).norm() < CHAR_TOL)
                .ok_or_else(|| bad(format!("conjugate of {} is missing", irreps[i].id)))?;
            let conj_mats: Vec<CMat> = irreps[i]
                .matrices
                .iter()
                .map(|m| m.map(|z| z.conj()))
                .collect();
            let sols = solve_intertwiners(&irreps[j].matrices, &conj_mats);
            let m = sols
                .into_iter()
                .next()
                .ok_or_else(|| bad("conjugation map not found".into()))?;
            let scale = (m.adjoint() * &m).trace().re / irreps[i].dim as f64;
            conj.push(j);
            conj_map.push(m / c(scale.sqrt(), 0.0));
        }
        let k = irreps.len();
        let mut fusion = vec![vec![vec![0; k]; k]; k];
        for u in 0..k {
            for up in 0..k {
                let prod: Vec<Complex64> = chars[u]
                    .iter()
                    .zip(&chars[up])
                    .map(|(a, b)| a * b)
                    .collect();
                for w in 0..k {
                    fusion[u][up][w] = pair(&prod, &chars[w]).re.round() as usize;
                }
            }
        }
        let index = irreps
            .iter()
            .enumerate()
            .map(|(i, v)| (v.id.clone(), i))
            .collect();
        Ok(FiniteQG {
            name: name.to_string(),
            group,
            kind: ModelKind::Commutative,
            irreps,
            index,
            unit,
            conj,
            conj_map,
            fusion,
            intertwiners: RwLock::new(HashMap::new()),
        })
    }

    /// Cocommutative model: the group algebra of `group`.
    pub fn cocommutative(name: &str, group: FiniteGroup) -> Self {
        let n = group.order();
        let one = CMat::from_element(1, 1, c(1.0, 0.0));
        let irreps: Vec<MatrixIrrep> = group
            .elements()
            .iter()
            .map(|e| MatrixIrrep {
                id: IrrepId::label(e),
                dim: 1,
                matrices: vec![one.clone(); n],
            })
            .collect();
        let index = irreps
            .iter()
            .enumerate()
            .map(|(i, v)| (v.id.clone(), i))
            .collect();
        let mut fusion = vec![vec![vec![0; n]; n]; n];
        for (g, row) in fusion.iter_mut().enumerate() {
            for (h, out) in row.iter_mut().enumerate() {
                out[group.mul(g, h)] = 1;
            }
        }
        FiniteQG {
            name: name.to_string(),
            unit: group.identity(),
            conj: (0..n).map(|g| group.inv(g)).collect(),
            conj_map: vec![one; n],
            group,
            kind: ModelKind::Cocommutative,
            irreps,
            index,
            fusion,
            intertwiners: RwLock::new(HashMap::new()),
        }
    }

    /// `C(S₃)` with the trivial, sign and two-dimensional standard irreps.
    pub fn s3() -> Self {
        let group = FiniteGroup::symmetric3();
        let s2 = 2f64.sqrt();
        let s6 = 6f64.sqrt();
        // Orthonormal basis of the sum-zero plane in ℂ³.
        let basis = [[1.0 / s2, -1.0 / s2, 0.0], [1.0 / s6, 1.0 / s6, -2.0 / s6]];
        let mut triv = Vec::new();
        let mut sgn = Vec::new();
        let mut std = Vec::new();
        for p in S3_PERMUTATIONS {
            let inversions = (0..3)
                .flat_map(|i| (i + 1..3).map(move |j| (i, j)))
                .filter(|&(i, j)| p[i] > p[j])
                .count();
            triv.push(CMat::from_element(1, 1, c(1.0, 0.0)));
            sgn.push(CMat::from_element(
                1,
                1,
                c(if inversions % 2 == 0 { 1.0 } else { -1.0 }, 0.0),
            ));
            // ⟨b_r, P_σ b_s⟩ with (P_σ x)_{σ(k)} = x_k.
            std.push(CMat::from_fn(2, 2, |r, s| {
                c((0..3).map(|k| basis[r][p[k]] * basis[s][k]).sum(), 0.0)
            }));
        }
        let irreps = vec![
            MatrixIrrep {
                id: IrrepId::label("triv"),
                dim: 1,
                matrices: triv,
            },
            MatrixIrrep {
                id: IrrepId::label("sgn"),
                dim: 1,
                matrices: sgn,
            },
            MatrixIrrep {
                id: IrrepId::label("std"),
                dim: 2,
                matrices: std,
            },
        ];
        FiniteQG::commutative("s3", group, irreps).expect("S3 model")
    }

    /// `C(ℤ/n)` with characters `chi<k>(j) = e^{2πijk/n}`.
    pub fn cyclic(n: usize) -> Self {
        let group = FiniteGroup::cyclic(n);
        let irreps = (0..n)
            .map(|k| MatrixIrrep {
                id: IrrepId::label(&format!("chi{k}")),
                dim: 1,
                matrices: (0..n)
                    .map(|j| {
                        let t = 2.0 * PI * ((j * k) % n) as f64 / n as f64;
                        CMat::from_element(1, 1, c(t.cos(), t.sin()))
                    })
                    .collect(),
            })
            .collect();
        FiniteQG::commutative(&format!("z{n}"), group, irreps).expect("cyclic model")
    }

    /// Reads a finite-group representation file. Without `irreps` (or with
    /// `"model": "cocommutative"`) the group algebra is built instead.
    pub fn load(path: &str) -> Result<Self> {
        let text = read_text(path)?;
        Self::from_json_str(&text, path)
    }

    pub fn from_json_str(text: &str, origin: &str) -> Result<Self> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| Error::malformed(origin, e.to_string()))?;
        let group = FiniteGroup::from_json_value(&value, origin)?;
        let file: ModelFile =
            serde_json::from_value(value).map_err(|e| Error::malformed(origin, e.to_string()))?;
        let cocommutative = match file.model.as_deref() {
            None => file.irreps.is_empty(),
            Some("cocommutative") => true,
            Some("commutative") => false,
            Some(other) => {
                return Err(Error::malformed(origin, format!("unknown model `{other}`")))
            }
        };
        if cocommutative {
            return Ok(Self::cocommutative(origin, group));
        }
        let mut irreps = Vec::new();
        for f in file.irreps {
            let mut matrices = Vec::with_capacity(group.order());
            for e in group.elements() {
                let m = f.matrices.get(e).ok_or_else(|| {
                    Error::malformed(origin, format!("irrep {} has no matrix for {e}", f.id))
                })?;
                let m = matrix_from_json(m, origin)?;
                if m.nrows() != f.dim {
                    return Err(Error::malformed(
                        origin,
                        format!("irrep {} declares dim {}", f.id, f.dim),
                    ));
                }
                matrices.push(m);
            }
            irreps.push(MatrixIrrep {
                id: IrrepId::label(&f.id),
                dim: f.dim,
                matrices,
            });
        }
        Self::commutative(origin, group, irreps)
    }

    pub fn to_json(&self) -> Value {
        let mut v = self.group.to_json_value();
        match self.kind {
            ModelKind::Cocommutative => {
                v["model"] = json!("cocommutative");
            }
            ModelKind::Commutative => {
                let irreps: Vec<Value> = self
                    .irreps
                    .iter()
                    .map(|u| {
                        let mats: serde_json::Map<String, Value> = self
                            .group
                            .elements()
                            .iter()
                            .zip(&u.matrices)
                            .map(|(e, m)| (e.clone(), matrix_json(m)))
                            .collect();
                        json!({ "id": u.id.to_string(), "dim": u.dim, "matrices": mats })
                    })
                    .collect();
                v["irreps"] = Value::Array(irreps);
            }
        }
        v
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn irreps(&self) -> &[MatrixIrrep] {
        &self.irreps
    }

    pub fn unit(&self) -> &IrrepId {
        &self.irreps[self.unit].id
    }

    pub fn position(&self, id: &IrrepId) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub(crate) fn checked(&self, id: &IrrepId) -> Result<usize> {
        self.position(id)
            .ok_or_else(|| Error::UnknownIrrep(id.to_string()))
    }

    pub fn irrep(&self, id: &IrrepId) -> Option<&MatrixIrrep> {
        self.position(id).map(|i| &self.irreps[i])
    }

    pub fn conj_of(&self, id: &IrrepId) -> Option<&IrrepId> {
        self.position(id).map(|i| &self.irreps[self.conj[i]].id)
    }

    pub fn conj_map(&self, id: &IrrepId) -> Option<&CMat> {
        self.position(id).map(|i| &self.conj_map[i])
    }

    /// `N_{uu′}^w` from characters.
    pub fn multiplicity(&self, u: usize, up: usize, w: usize) -> usize {
        self.fusion[u][up][w]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s3_is_a_valid_model() {
        let qg = FiniteQG::s3();
        let std = qg.position(&IrrepId::label("std")).unwrap();
        let triv = qg.position(&IrrepId::label("triv")).unwrap();
        let sgn = qg.position(&IrrepId::label("sgn")).unwrap();
        assert_eq!(qg.unit(), &IrrepId::label("triv"));
        assert_eq!(qg.multiplicity(std, std, triv), 1);
        assert_eq!(qg.multiplicity(std, std, sgn), 1);
        assert_eq!(qg.multiplicity(std, std, std), 1);
        assert_eq!(qg.multiplicity(sgn, std, std), 1);
    }

    #[test]
    fn conjugation_maps_are_unitary_and_intertwine() {
        for qg in [FiniteQG::s3(), FiniteQG::cyclic(4)] {
            for (i, v) in qg.irreps().iter().enumerate() {
                let m = &qg.conj_map[i];
                let w = &qg.irreps()[qg.conj[i]];
                assert!(max_abs(&(m.adjoint() * m - identity(v.dim))) < 1e-12);
                for g in 0..qg.group().order() {
                    let lhs = &w.matrices[g];
                    let rhs = m * v.matrices[g].map(|z| z.conj()) * m.adjoint();
                    assert!(max_abs(&(lhs - rhs)) < 1e-12);
                }
            }
        }
    }

    #[test]
    fn cyclic_conjugates() {
        let qg = FiniteQG::cyclic(4);
        assert_eq!(
            qg.conj_of(&IrrepId::label("chi1")),
            Some(&IrrepId::label("chi3"))
        );
        assert_eq!(
            qg.conj_of(&IrrepId::label("chi2")),
            Some(&IrrepId::label("chi2"))
        );
    }

    #[test]
    fn json_round_trip_and_rejections() {
        let qg = FiniteQG::s3();
        let text = qg.to_json().to_string();
        let back = FiniteQG::from_json_str(&text, "s3.json").unwrap();
        assert_eq!(back.irreps().len(), 3);
        // Doubling the trivial irrep breaks completeness and orthogonality.
        let mut v = qg.to_json();
        let extra = v["irreps"][0].clone();
        v["irreps"].as_array_mut().unwrap().push(extra);
        assert!(FiniteQG::from_json_str(&v.to_string(), "bad").is_err());
        // A non-unitary matrix.
        let mut v = qg.to_json();
        v["irreps"][1]["matrices"]["(01)"] = json!([[[2.0, 0.0]]]);
        assert!(FiniteQG::from_json_str(&v.to_string(), "bad").is_err());
    }

    #[test]
    fn group_without_irreps_is_cocommutative() {
        let text = FiniteGroup::cyclic(3).to_json_value().to_string();
        let qg = FiniteQG::from_json_str(&text, "z3").unwrap();
        assert_eq!(qg.kind(), ModelKind::Cocommutative);
        assert_eq!(qg.conj_of(&IrrepId::label("1")), Some(&IrrepId::label("2")));
    }
}
