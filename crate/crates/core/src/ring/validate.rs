use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{big_to_f64, tensor_raw, FusionRing, IrrepId, RepVector};

const QDIM_REL_TOL: f64 = 1e-12;

/// Which ring invariant a [`Violation`] breaks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    UnitData,
    UnitLaw,
    Conjugation,
    QdimBelowDim,
    Frobenius,
    Associativity,
    DimMultiplicativity,
    QdimMultiplicativity,
    ForeignIrrep,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub witness: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}: {}", self.kind, self.witness)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub ring: String,
    pub sampled: usize,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }
}

fn rel_close(a: f64, b: f64) -> bool {
    (a - b).abs() <= QDIM_REL_TOL * a.abs().max(b.abs()).max(1.0)
}

struct Checker<'a> {
    ring: &'a dyn FusionRing,
    cache: HashMap<(IrrepId, IrrepId), RepVector>,
    violations: Vec<Violation>,
}

impl Checker<'_> {
    fn fuse(&mut self, u: &IrrepId, v: &IrrepId) -> RepVector {
        let key = (u.clone(), v.clone());
        if let Some(r) = self.cache.get(&key) {
            return r.clone();
        }
        let r = self.ring.fuse_raw(u, v);
        self.cache.insert(key, r.clone());
        r
    }

    fn report(&mut self, kind: ViolationKind, witness: String) {
        self.violations.push(Violation { kind, witness });
    }
}

/// Checks the fusion-ring axioms on the first `sample_budget` irreducibles
/// in canonical order. Violations are returned as data.
pub fn validate_ring(ring: &dyn FusionRing, sample_budget: usize) -> ValidationReport {
    let sample = ring.enumerate(sample_budget);
    let unit = ring.unit();
    let mut c = Checker {
        ring,
        cache: HashMap::new(),
        violations: Vec::new(),
    };

    if !ring.dim(&unit).is_one() || !rel_close(ring.qdim(&unit), 1.0) || ring.conj(&unit) != unit {
        c.report(ViolationKind::UnitData, format!("unit {unit}"));
    }

    for u in &sample {
        let ub = ring.conj(u);
        if !ring.contains(&ub) || ring.conj(&ub) != *u {
            c.report(
                ViolationKind::Conjugation,
                format!("conj is not an involution at {u}"),
            );
            continue;
        }
        if ring.dim(&ub) != ring.dim(u) || !rel_close(ring.qdim(&ub), ring.qdim(u)) {
            c.report(
                ViolationKind::Conjugation,
                format!("dims of {u} and {ub} differ"),
            );
        }
        if ring.qdim(u) < big_to_f64(&ring.dim(u)) * (1.0 - QDIM_REL_TOL) {
            c.report(ViolationKind::QdimBelowDim, format!("{u}"));
        }
        let single = RepVector::singleton(u.clone());
        if c.fuse(&unit, u) != single || c.fuse(u, &unit) != single {
            c.report(ViolationKind::UnitLaw, format!("{unit} ⊗ {u}"));
        }
    }

    for u in &sample {
        let ub = ring.conj(u);
        for v in &sample {
            let vb = ring.conj(v);
            let p = c.fuse(u, v);
            if let Some(w) = p.support().find(|w| !ring.contains(w)) {
                c.report(
                    ViolationKind::ForeignIrrep,
                    format!("{u} ⊗ {v} contains {w}"),
                );
                continue;
            }
            let expect_unit = if *v == ub {
                BigUint::one()
            } else {
                BigUint::zero()
            };
            if p.get(&unit) != expect_unit {
                c.report(
                    ViolationKind::Frobenius,
                    format!("({u}, {v}): N^ι = {} but conj({u}) = {ub}", p.get(&unit)),
                );
            }
            let mut targets: Vec<IrrepId> = p.support().cloned().collect();
            targets.extend(sample.iter().cloned());
            targets.sort();
            targets.dedup();
            for w in &targets {
                let n1 = p.get(w);
                let n2 = c.fuse(&ub, w).get(v);
                let n3 = c.fuse(w, &vb).get(u);
                if n1 != n2 || n1 != n3 {
                    c.report(
                        ViolationKind::Frobenius,
                        format!("({u}, {v}) → {w}: N = {n1}, {n2}, {n3}"),
                    );
                }
            }
            let dim_sum: BigUint = p.iter().map(|(w, m)| m * ring.dim(w)).sum();
            if dim_sum != ring.dim(u) * ring.dim(v) {
                c.report(ViolationKind::DimMultiplicativity, format!("({u}, {v})"));
            }
            let qsum: f64 = p.iter().map(|(w, m)| big_to_f64(m) * ring.qdim(w)).sum();
            if !rel_close(qsum, ring.qdim(u) * ring.qdim(v)) {
                c.report(ViolationKind::QdimMultiplicativity, format!("({u}, {v})"));
            }
        }
    }

    for u in &sample {
        for v in &sample {
            let uv = c.fuse(u, v);
            for w in &sample {
                let vw = c.fuse(v, w);
                let left = tensor_raw(ring, &uv, &RepVector::singleton(w.clone()));
                let right = tensor_raw(ring, &RepVector::singleton(u.clone()), &vw);
                if left != right {
                    c.report(ViolationKind::Associativity, format!("({u}, {v}, {w})"));
                }
            }
        }
    }

    ValidationReport {
        ring: ring.spec(),
        sampled: sample.len(),
        violations: c.violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{FileRing, FreeRing, HeisenbergRing, SpinKind, SpinRing, TorusRing};

    fn z3_text(conj_of_1: &str, fusion_11: &str, dim2: u64) -> String {
        format!(
            r#"{{
            "unit": "0",
            "irreps": [ {{"id": "0", "dim": 1, "conj": "0"}},
                        {{"id": "1", "dim": 1, "conj": "{conj_of_1}"}},
                        {{"id": "2", "dim": {dim2}, "conj": "{conj_of_2}"}} ],
            "fusion": [
              {{"left": "0", "right": "0", "out": {{"0": 1}}}},
              {{"left": "0", "right": "1", "out": {{"1": 1}}}},
              {{"left": "0", "right": "2", "out": {{"2": 1}}}},
              {{"left": "1", "right": "0", "out": {{"1": 1}}}},
              {{"left": "2", "right": "0", "out": {{"2": 1}}}},
              {{"left": "1", "right": "1", "out": {fusion_11}}},
              {{"left": "1", "right": "2", "out": {{"0": 1}}}},
              {{"left": "2", "right": "1", "out": {{"0": 1}}}},
              {{"left": "2", "right": "2", "out": {{"1": 1}}}}
            ] }}"#,
            conj_of_2 = if conj_of_1 == "2" { "1" } else { "2" },
        )
    }

    #[test]
    fn builtins_pass() {
        let rings: Vec<Box<dyn FusionRing>> = vec![
            Box::new(SpinRing::new(SpinKind::Su2)),
            Box::new(SpinRing::new(SpinKind::So3)),
            Box::new(SpinRing::new(SpinKind::Su2q(0.5))),
            Box::new(SpinRing::new(SpinKind::Ao(3))),
            Box::new(TorusRing::new(2)),
            Box::new(FreeRing::new(2)),
            Box::new(HeisenbergRing),
        ];
        for r in &rings {
            let rep = validate_ring(r.as_ref(), 20);
            assert!(rep.is_ok(), "{}: {:?}", r.spec(), rep.violations);
            assert_eq!(rep.sampled, 20);
        }
    }

    #[test]
    fn correct_z3_table_passes() {
        let r = FileRing::from_json_str(&z3_text("2", r#"{"2": 1}"#, 1), "z3").unwrap();
        assert!(validate_ring(&r, 3).is_ok());
    }

    #[test]
    fn unit_in_wrong_product_is_a_frobenius_violation() {
        // 1 ⊗ 1 contains the unit although conj(1) = 2.
        let r = FileRing::from_json_str(&z3_text("2", r#"{"0": 1}"#, 1), "z3").unwrap();
        let rep = validate_ring(&r, 3);
        assert!(rep.has(ViolationKind::Frobenius));
        assert!(rep
            .violations
            .iter()
            .any(|v| v.kind == ViolationKind::Frobenius && v.witness.starts_with("(1, 1)")));
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let r = FileRing::from_json_str(&z3_text("2", r#"{"2": 1}"#, 2), "z3").unwrap();
        let rep = validate_ring(&r, 3);
        assert!(rep.has(ViolationKind::DimMultiplicativity));
    }
}
