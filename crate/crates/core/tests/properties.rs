//! Property suites for rings, growth sequences, the Fourier transform and
//! Banach-algebra exponentials. All runs use a fixed proptest seed.

use std::collections::HashSet;
use std::sync::Arc;

use num_bigint::BigUint;
use proptest::prelude::*;
use proptest::test_runner::RngSeed;
use qgrowth_core::fourier::{self, FiniteQG, QElement};
use qgrowth_core::growth::{
    ball, classify, classify_with, gk_fit, growth_sequence, ClassifyParams,
};
use qgrowth_core::linalg::{c, CMat};
use qgrowth_core::ring::{load_ring, subring_generated, TorusRing};
use qgrowth_core::starreg::{
    banach_exp, element_growth_exponent, log_grid, random_self_adjoint, BanachAlgebra,
    FiniteAlgebra, GroupDualAlgebra,
};
use qgrowth_core::{fuse, tensor, DimensionFunction, FusionRing, IrrepId, RepVector, Ring};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x5eed_2024;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        rng_seed: RngSeed::Fixed(SEED),
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

const RINGS: [&str; 9] = [
    "su2",
    "so3",
    "su2q:q=0.5",
    "ao:n=3",
    "torus:d=2",
    "free:k=2",
    "heisenberg",
    "product:su2+torus:d=1",
    "group-dual:s3",
];

fn ring(i: usize) -> Ring {
    load_ring(RINGS[i]).unwrap()
}

fn single(id: &IrrepId) -> RepVector {
    RepVector::singleton(id.clone())
}

fn rel_close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs())
}

proptest! {
    #![proptest_config(config(256))]

    #[test]
    fn fusion_identities(r in 0..RINGS.len(), i in 0usize..20, j in 0usize..20, k in 0usize..20) {
        let ring = ring(r);
        let first = ring.enumerate(20);
        let (u, v, w) = (&first[i % first.len()], &first[j % first.len()], &first[k % first.len()]);
        let uv = fuse(ring.as_ref(), u, v).unwrap();

        // Frobenius reciprocity.
        let n = uv.get(w);
        prop_assert_eq!(&n, &fuse(ring.as_ref(), &ring.conj(u), w).unwrap().get(v));
        prop_assert_eq!(&n, &fuse(ring.as_ref(), w, &ring.conj(v)).unwrap().get(u));

        // Associativity.
        let left = tensor(ring.as_ref(), &uv, &single(w)).unwrap();
        let right = tensor(ring.as_ref(), &single(u), &fuse(ring.as_ref(), v, w).unwrap()).unwrap();
        prop_assert_eq!(left, right);

        // Dimensions are multiplicative: exactly for dim, to 1e-12 for qdim.
        let dims: BigUint = uv.iter().map(|(x, m)| m * ring.dim(x)).sum();
        prop_assert_eq!(dims, ring.dim(u) * ring.dim(v));
        let qdims: f64 = uv.iter().map(|(x, m)| m.to_string().parse::<f64>().unwrap() * ring.qdim(x)).sum();
        prop_assert!(rel_close(qdims, ring.qdim(u) * ring.qdim(v)));

        // Conjugation is an involution and u ⊗ ū contains the unit once.
        prop_assert_eq!(&ring.conj(&ring.conj(u)), u);
        let uu = fuse(ring.as_ref(), u, &ring.conj(u)).unwrap();
        prop_assert_eq!(uu.get(&ring.unit()), BigUint::from(1u32));
    }

    #[test]
    fn subrings_are_closed(which in 0usize..3, i in 0usize..40, j in 0usize..40) {
        let (parent, gens): (&str, Vec<IrrepId>) = match which {
            0 => ("su2", vec![IrrepId::Index(2)]),
            1 => ("torus:d=2", vec![IrrepId::point(&[2, 1]), IrrepId::point(&[0, 3])]),
            _ => ("group-dual:s3", vec![IrrepId::label("(012)")]),
        };
        let sub = subring_generated(load_ring(parent).unwrap(), &gens, 100_000).unwrap();
        let members = sub.enumerate(40);
        let (u, v) = (&members[i % members.len()], &members[j % members.len()]);
        for w in fuse(&sub, u, v).unwrap().support() {
            prop_assert!(sub.contains(w), "{} ⊗ {} ∋ {}", u, v, w);
        }
    }

    #[test]
    fn growth_is_monotone(r in 0..RINGS.len(), picks in proptest::collection::vec((0usize..6, 1u32..4), 1..3)) {
        let ring = ring(r);
        let first = ring.enumerate(6);
        let mut u = RepVector::new();
        for (i, m) in picks {
            let id = &first[1 + i % (first.len() - 1)];
            u.add(id.clone(), BigUint::from(m));
        }
        let n = if RINGS[r].starts_with("free") || RINGS[r] == "heisenberg" { 5 } else { 12 };
        for d in [DimensionFunction::vector(), DimensionFunction::quantum()] {
            let s = growth_sequence(ring.as_ref(), &u, &d, n).unwrap();
            for k in 0..n {
                prop_assert!(s.values[k].to_f64() <= s.values[k + 1].to_f64(), "{} at n={}", u, k);
            }
        }
    }

    #[test]
    fn group_dual_balls_are_word_balls(order in 2usize..13, mask in 1u32..4096, n in 0usize..8) {
        let spec = format!("group-dual:cyclic={order}");
        let ring = load_ring(&spec).unwrap();
        check_word_balls(&ring, mask, n)?;
        check_word_balls(&load_ring("group-dual:s3").unwrap(), mask, n)?;
    }

    #[test]
    fn classification_ignores_multiplicity_scaling(r in 0usize..5, factor in 2u32..4) {
        let (spec, generator, n, min_len) = [
            ("su2", "u1", 120, 32),
            ("torus:d=2", "(1,0),(-1,0),(0,1),(0,-1)", 120, 32),
            ("so3", "u2", 120, 32),
            ("ao:n=3", "u1", 80, 32),
            ("free:k=2", "a,A,b,B", 9, 9),
        ][r];
        let ring = load_ring(spec).unwrap();
        let u = qgrowth_core::ring::parse_generator(ring.as_ref(), generator).unwrap();
        let mut scaled = RepVector::new();
        for (id, m) in u.iter() {
            scaled.add(id.clone(), m * factor);
        }
        let p = ClassifyParams { min_len, ..ClassifyParams::default() };
        let d = DimensionFunction::vector();
        let a = classify_with(&growth_sequence(ring.as_ref(), &u, &d, n).unwrap(), &p).unwrap();
        let b = classify_with(&growth_sequence(ring.as_ref(), &scaled, &d, n).unwrap(), &p).unwrap();
        prop_assert_eq!(a.classification.tag(), b.classification.tag());
    }
}

/// Compares `b(u, n)` for the generator picked by `mask` with a BFS over
/// the multiplication table.
fn check_word_balls(ring: &Ring, mask: u32, n: usize) -> Result<(), TestCaseError> {
    let elements = ring.enumerate(usize::MAX);
    let mut u = RepVector::new();
    for (i, e) in elements.iter().enumerate() {
        if mask >> (i % 12) & 1 == 1 {
            u.add(e.clone(), BigUint::from(1u32));
        }
    }
    let s = growth_sequence(ring.as_ref(), &u, &DimensionFunction::vector(), n).unwrap();
    let gens: Vec<&IrrepId> = u.support().collect();
    let mut seen: HashSet<IrrepId> = HashSet::from([ring.unit()]);
    let mut frontier = vec![ring.unit()];
    for k in 0..=n {
        prop_assert_eq!(
            s.values[k].as_exact().cloned(),
            Some(BigUint::from(seen.len()))
        );
        let mut next = Vec::new();
        for x in &frontier {
            for g in &gens {
                for y in fuse(ring.as_ref(), x, g).unwrap().support() {
                    if seen.insert(y.clone()) {
                        next.push(y.clone());
                    }
                }
            }
        }
        frontier = next;
    }
    Ok(())
}

#[test]
fn su2_balls_are_initial_segments() {
    let su2 = load_ring("su2").unwrap();
    let u1 = single(&IrrepId::Index(1));
    let b = ball(su2.as_ref(), &u1, 100).unwrap();
    for n in 0..=100u32 {
        let members: Vec<u32> = b.levels()[..=n as usize]
            .iter()
            .flatten()
            .map(|id| id.as_index().unwrap())
            .collect();
        let mut sorted = members.clone();
        sorted.sort();
        assert_eq!(sorted, (0..=n).collect::<Vec<_>>(), "n = {n}");
    }
}

#[test]
fn subring_growth_does_not_exceed_parent() {
    let su2 = load_ring("su2").unwrap();
    let d = DimensionFunction::vector();
    // The u₂-ball of radius n sits inside the u₁-ball of radius 2n, so the
    // parent is fitted over the matching range.
    let parent = growth_sequence(su2.as_ref(), &single(&IrrepId::Index(1)), &d, 400).unwrap();
    let sub = subring_generated(su2.clone(), &[IrrepId::Index(2)], 100_000).unwrap();
    let child = growth_sequence(&sub, &single(&IrrepId::Index(2)), &d, 200).unwrap();
    let (g_parent, fp) = gk_fit(&parent, 0.5).unwrap();
    let (g_child, fc) = gk_fit(&child, 0.5).unwrap();
    assert!(
        g_child <= g_parent + fp.stderr + fc.stderr,
        "{g_child} ± {} vs {g_parent} ± {}",
        fc.stderr,
        fp.stderr
    );
    assert!((g_child - 3.0).abs() < 0.1 && (g_parent - 3.0).abs() < 0.1);
    assert_eq!(classify(&child).unwrap().classification.tag(), "polynomial");
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn fourier_suite_holds_for_any_seed(seed in any::<u64>(), which in 0usize..4) {
        let qg = match which {
            0 => FiniteQG::s3(),
            1 => FiniteQG::cyclic(4),
            2 => FiniteQG::cyclic(5),
            _ => FiniteQG::cocommutative("s3-dual", FiniteQG::s3().group().clone()),
        };
        let rep = fourier::verify(&qg, 8, seed, 1e-10).unwrap();
        prop_assert!(rep.passed, "{:?}", rep.residuals());
    }

    #[test]
    fn star_and_bullet_are_involutions(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for qg in [FiniteQG::s3(), FiniteQG::cyclic(6)] {
            let a = fourier::random_element(&qg, &mut rng);
            let s = fourier::star(&qg, &a).unwrap();
            prop_assert!(fourier::star(&qg, &s).unwrap().distance(&a) < 1e-12);
            let b = fourier::bullet(&qg, &a).unwrap();
            prop_assert!(fourier::bullet(&qg, &b).unwrap().distance(&a) < 1e-12);
            prop_assert_eq!(s, b);
        }
    }

    #[test]
    fn exponentials_form_a_one_parameter_group(seed in any::<u64>(), l in -2.0f64..2.0, m in -2.0f64..2.0) {
        let qg = FiniteQG::s3();
        let alg = FiniteAlgebra(&qg);
        let f = random_self_adjoint(&qg, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let eps = 1e-11;
        let (el, tl) = banach_exp(&alg, &f, l, eps).unwrap();
        let (em, tm) = banach_exp(&alg, &f, m, eps).unwrap();
        let (elm, tlm) = banach_exp(&alg, &f, l + m, eps).unwrap();
        let slack = tl.tail_bound * alg.norm(&em) + tm.tail_bound * alg.norm(&el) + tl.tail_bound * tm.tail_bound + tlm.tail_bound;
        let gap = alg.norm(&alg.multiply(&el, &em).unwrap().sub(&elm));
        prop_assert!(gap <= slack + 1e-12, "{gap} > {slack}");

        // star(e^{iλf}) = e^{-iλf} for self-adjoint f.
        let (eneg, tneg) = banach_exp(&alg, &f, -l, eps).unwrap();
        let gap = alg.norm(&alg.star(&el).unwrap().sub(&eneg));
        prop_assert!(gap <= tl.tail_bound + tneg.tail_bound + 1e-12);
    }

    #[test]
    fn circle_exponentials_compose(l in 0.1f64..12.0, m in 0.1f64..12.0) {
        let alg = GroupDualAlgebra::new(Arc::new(TorusRing::new(1))).unwrap();
        let f = cos_element(1);
        let eps = 1e-10;
        let (el, tl) = banach_exp(&alg, &f, l, eps).unwrap();
        let (em, tm) = banach_exp(&alg, &f, m, eps).unwrap();
        let (elm, tlm) = banach_exp(&alg, &f, l + m, eps).unwrap();
        let slack = tl.tail_bound * alg.norm(&em) + tm.tail_bound * alg.norm(&el) + tl.tail_bound * tm.tail_bound + tlm.tail_bound;
        let gap = alg.norm(&alg.multiply(&el, &em).unwrap().sub(&elm));
        prop_assert!(gap <= slack + 1e-12, "{gap} > {slack}");
    }
}

fn cos_element(d: usize) -> QElement {
    let one = CMat::from_element(1, 1, c(1.0, 0.0));
    QElement::from_blocks((0..d).flat_map(|axis| {
        let one = one.clone();
        [1i64, -1].into_iter().map(move |s| {
            let mut p = vec![0i64; d];
            p[axis] = s;
            (IrrepId::point(&p), one.clone())
        })
    }))
}

#[test]
fn lattice_exponent_is_stable_under_grid_refinement() {
    for d in [1usize, 2] {
        let alg = GroupDualAlgebra::new(Arc::new(TorusRing::new(d))).unwrap();
        let (lo, hi) = if d == 1 { (5.0, 100.0) } else { (2.0, 10.0) };
        let coarse =
            element_growth_exponent(&alg, &cos_element(d), &log_grid(lo, hi, 8), 1e-8).unwrap();
        let fine =
            element_growth_exponent(&alg, &cos_element(d), &log_grid(lo, hi, 15), 1e-8).unwrap();
        assert!(
            (coarse.gamma - fine.gamma).abs() <= 0.1,
            "d={d}: {} vs {}",
            coarse.gamma,
            fine.gamma
        );
    }
}
