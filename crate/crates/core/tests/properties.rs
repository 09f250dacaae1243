use std::collections::BTreeSet;

use proptest::prelude::*;
use serde_json::json;

use irrdiv_core::analysis::{
    is_complete_digraph, is_complete_undirected, is_connected_undirected, is_tournament,
    DigraphPredicates,
};
use irrdiv_core::complexes::{
    build_directed_graph, build_undirected_graph, complex_of, declared_complex, declared_graph,
    skeleton1_equals_graph, ComputedOracle,
};
use irrdiv_core::declared::{corpus, declared_divides, load_declared};
use irrdiv_core::factorize::{
    factorization_representatives, factorizations, irreducible_divisors, is_irreducible,
};
use irrdiv_core::rings::{
    are_associates, canonical_rep, divides, gauge_u64, is_unit, nonunit_reps_up_to, unit_inverse,
};
use irrdiv_core::tau::{
    build_tau_graphs, is_tau_irreducible, single_vertex_iff_tau_irreducible,
    tau_factorization_representatives, tau_factorizations, tau_related, BoundRelation,
};
use irrdiv_core::{
    DivisorGraph, Integers, Lipschitz, Quadratic, QuatPoly, Quaternion, QuaternionPoly,
    RationalInt, Ring, TauRelation,
};

fn quaternion(r: i64) -> impl Strategy<Value = Quaternion> {
    [-r..=r, -r..=r, -r..=r, -r..=r].prop_map(|[a, b, c, d]| Quaternion::new(a, b, c, d))
}

/// Nonunits of bounded gauge, so factorization stays cheap.
fn small_lipschitz(max_gauge: u64) -> impl Strategy<Value = Quaternion> {
    let r = Lipschitz::new();
    quaternion(6).prop_filter("nonzero nonunit of small gauge", move |q| {
        let g = gauge_u64(&r, q).unwrap();
        (2..=max_gauge).contains(&g)
    })
}

fn quat_poly() -> impl Strategy<Value = QuaternionPoly> {
    prop::collection::vec(quaternion(9), 0..=5).prop_map(QuaternionPoly::new)
}

#[test]
fn quaternion_basis_table() {
    let r = Lipschitz::new();
    let q = |s: &str| r.parse(s).unwrap();
    let basis = ["1", "i", "j", "k"];
    let table = [
        ["1", "i", "j", "k"],
        ["i", "-1", "k", "-j"],
        ["j", "-k", "-1", "i"],
        ["k", "j", "-i", "-1"],
    ];
    for (a, row) in basis.iter().zip(table) {
        for (b, want) in basis.iter().zip(row) {
            assert_eq!(r.mul(&q(a), &q(b)), q(want), "{a}·{b}");
        }
    }
}

#[test]
fn unit_groups_are_closed() {
    fn check<R: Ring>(r: &R) {
        let units = r.units();
        for u in &units {
            let inv = unit_inverse(r, u).expect("inverse");
            assert!(units.contains(&inv));
            for v in &units {
                assert!(units.contains(&r.mul(u, v)), "{u}·{v}");
            }
        }
    }
    check(&Lipschitz::new());
    check(&Quadratic::new(5).unwrap());
    check(&Quadratic::new(1).unwrap());
    check(&Integers);
    check(&QuatPoly);
    assert_eq!(Integers.units().len(), 2);
    assert_eq!(Lipschitz::new().units().len(), 8);
}

#[test]
fn association_is_an_equivalence() {
    let r = Lipschitz::new();
    let base = nonunit_reps_up_to(&r, 6).unwrap();
    let units = r.units();
    // 50 elements spread over a few orbits, so transitivity has real chains.
    let sample: Vec<Quaternion> = base
        .iter()
        .take(10)
        .flat_map(|x| units.iter().take(5).map(move |u| (u.clone(), x.clone())))
        .map(|(u, x)| r.mul(&u, &x))
        .collect();
    assert_eq!(sample.len(), 50);
    for a in &sample {
        assert!(are_associates(&r, a, a));
        for b in &sample {
            let ab = are_associates(&r, a, b);
            assert_eq!(ab, are_associates(&r, b, a));
            if ab {
                for c in &sample {
                    if are_associates(&r, b, c) {
                        assert!(are_associates(&r, a, c), "{a} ~ {b} ~ {c}");
                    }
                }
            }
        }
    }
}

#[test]
fn divisibility_gauge_filter_is_exact_up_to_16() {
    let r = Lipschitz::new();
    let all: Vec<Quaternion> = (1..=16)
        .flat_map(|n| r.elements_of_gauge(n).unwrap().to_vec())
        .collect();
    let reps = nonunit_reps_up_to(&r, 16).unwrap();
    for x in &reps {
        let gx = gauge_u64(&r, x).unwrap();
        // Unfiltered: every element, including those whose gauge cannot divide.
        let unfiltered: BTreeSet<Quaternion> = all
            .iter()
            .filter(|a| r.right_quotient(a, x).is_some())
            .cloned()
            .collect();
        let filtered: BTreeSet<Quaternion> = all
            .iter()
            .filter(|a| gx % gauge_u64(&r, a).unwrap() == 0)
            .filter(|a| r.right_quotient(a, x).is_some())
            .cloned()
            .collect();
        assert_eq!(unfiltered, filtered, "{x}");
    }
}

#[test]
fn irreducible_divisors_are_the_atoms_of_factorizations() {
    let r = Lipschitz::new();
    for x in nonunit_reps_up_to(&r, 16).unwrap() {
        let from_classes: BTreeSet<Quaternion> = factorizations(&r, &x)
            .unwrap()
            .into_iter()
            .flat_map(|c| c.atoms)
            .collect();
        let direct: BTreeSet<Quaternion> =
            irreducible_divisors(&r, &x).unwrap().into_iter().collect();
        assert_eq!(from_classes, direct, "{x}");
    }
}

fn declared_from_computed(r: &Lipschitz, x: &Quaternion) -> irrdiv_core::DeclaredSystem {
    let classes = factorizations(r, x).unwrap();
    let atoms: BTreeSet<String> = classes
        .iter()
        .flat_map(|c| c.atoms.iter().map(ToString::to_string))
        .collect();
    let doc = json!({
        "ring_label": "lipschitz",
        "atoms": atoms.iter().map(|a| json!({ "label": a })).collect::<Vec<_>>(),
        "target": x.to_string(),
        "factorizations": classes
            .iter()
            .map(|c| c.atoms.iter().map(ToString::to_string).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    });
    load_declared(&doc.to_string()).unwrap()
}

#[test]
fn declared_and_computed_oracles_agree_on_quaternions() {
    let r = Lipschitz::new();
    for s in ["1+i+j+k", "2i+2k"] {
        let x = r.parse(s).unwrap();
        let sys = declared_from_computed(&r, &x);
        for directed in [true, false] {
            let computed = if directed {
                build_directed_graph(&r, &x).unwrap()
            } else {
                build_undirected_graph(&r, &x).unwrap()
            };
            assert!(
                declared_graph(&sys, directed).unwrap().same_as(&computed),
                "{s} {directed}"
            );
        }
        assert!(
            declared_complex(&sys)
                .unwrap()
                .same_as(&complex_of(&r, &x).unwrap()),
            "{s}"
        );
    }
}

#[test]
fn declared_divisibility_is_monotone() {
    for (name, sys) in corpus::all().unwrap() {
        for f in &sys.factorizations {
            for i in 0..f.len() {
                for j in i + 1..=f.len() {
                    let sub: Vec<&str> = f[i..j].iter().map(String::as_str).collect();
                    assert!(declared_divides(&sub, &sys).unwrap(), "{name}: {sub:?}");
                }
            }
        }
    }
}

#[test]
fn commutative_digraphs_are_symmetric() {
    let z5 = Quadratic::new(5).unwrap();
    for x in nonunit_reps_up_to(&z5, 81).unwrap() {
        let g = build_directed_graph(&z5, &x).unwrap();
        for &(a, b) in &g.edges {
            assert!(g.has_edge(b, a), "{x}");
        }
        assert_eq!(is_tournament(&g), is_complete_digraph(&g), "{x}");
    }
    for n in 2..=300u32 {
        let g = build_directed_graph(&Integers, &RationalInt::new(n)).unwrap();
        assert_eq!(is_tournament(&g), is_complete_digraph(&g), "{n}");
    }
}

fn check_graph_invariants(r: &Lipschitz, x: &Quaternion) -> Result<(), TestCaseError> {
    let d = build_directed_graph(r, x).unwrap();
    let u = build_undirected_graph(r, x).unwrap();
    prop_assert!(DigraphPredicates::of(&d).chain_holds());
    prop_assert!(!is_complete_undirected(&u) || is_connected_undirected(&u));
    let verts: Vec<Quaternion> = d.vertices.iter().map(|v| r.parse(v).unwrap()).collect();
    for a in 0..verts.len() {
        for b in 0..verts.len() {
            if a == b {
                continue;
            }
            let ab = divides(r, &r.mul(&verts[a], &verts[b]), x).unwrap();
            let ba = divides(r, &r.mul(&verts[b], &verts[a]), x).unwrap();
            prop_assert_eq!(d.has_edge(a, b), ab);
            prop_assert_eq!(u.has_edge(a, b), ab || ba);
        }
    }
    // Loops count the largest power of any associate of the vertex.
    for (v, y) in verts.iter().enumerate() {
        let mut best = 0u32;
        for u in r.units() {
            for w in r.units() {
                let z = r.mul(&r.mul(&u, y), &w);
                let mut n = 0u32;
                let mut p = r.one();
                loop {
                    p = r.mul(&p, &z);
                    if !divides(r, &p, x).unwrap() {
                        break;
                    }
                    n += 1;
                }
                best = best.max(n);
            }
        }
        let n = best;
        prop_assert_eq!(d.loops[v], n.saturating_sub(1));
        prop_assert_eq!(u.loops[v], n.saturating_sub(1));
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 256,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn lipschitz_gauge_is_multiplicative(a in quaternion(1000), b in quaternion(1000)) {
        let r = Lipschitz::new();
        prop_assert_eq!(r.gauge(&r.mul(&a, &b)), r.gauge(&a) * r.gauge(&b));
        prop_assert_eq!(r.gauge(&a) == 0u32.into(), a.is_zero());
    }

    #[test]
    fn quadratic_gauge_is_multiplicative(a in -999i64..999, b in -999i64..999, c in -999i64..999, d in -999i64..999) {
        let r = Quadratic::new(5).unwrap();
        let (x, y) = (r.elem(a, b), r.elem(c, d));
        prop_assert_eq!(r.gauge(&r.mul(&x, &y)), r.gauge(&x) * r.gauge(&y));
        prop_assert_eq!(r.mul(&x, &y), r.mul(&y, &x));
    }

    #[test]
    fn integer_gauge_is_absolute_value(a in -99999i64..99999, b in -99999i64..99999) {
        let (x, y) = (RationalInt::new(a), RationalInt::new(b));
        prop_assert_eq!(Integers.gauge(&x), a.unsigned_abs().into());
        prop_assert_eq!(Integers.gauge(&Integers.mul(&x, &y)), Integers.gauge(&x) * Integers.gauge(&y));
    }

    #[test]
    fn quat_poly_gauge_is_multiplicative(f in quat_poly(), g in quat_poly()) {
        let p = QuatPoly;
        prop_assert_eq!(p.gauge(&p.mul(&f, &g)), p.gauge(&f) * p.gauge(&g));
    }

    #[test]
    fn multiplication_is_associative_and_distributive(a in quaternion(50), b in quaternion(50), c in quaternion(50)) {
        let r = Lipschitz::new();
        prop_assert_eq!(r.mul(&r.mul(&a, &b), &c), r.mul(&a, &r.mul(&b, &c)));
        prop_assert_eq!(r.mul(&a, &r.add(&b, &c)), r.add(&r.mul(&a, &b), &r.mul(&a, &c)));
        prop_assert_eq!(r.mul(&r.add(&a, &b), &c), r.add(&r.mul(&a, &c), &r.mul(&b, &c)));
    }

    #[test]
    fn quat_poly_is_associative(f in quat_poly(), g in quat_poly(), h in quat_poly()) {
        let p = QuatPoly;
        prop_assert_eq!(p.mul(&p.mul(&f, &g), &h), p.mul(&f, &p.mul(&g, &h)));
    }

    #[test]
    fn parse_round_trips(a in quaternion(99), f in quat_poly()) {
        let r = Lipschitz::new();
        prop_assert_eq!(r.parse(&a.to_string()).unwrap(), a);
        prop_assert_eq!(QuatPoly.parse(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn divisibility_implies_gauge_divisibility(a in quaternion(5), c in quaternion(5), u in 0usize..8, v in 0usize..8) {
        let r = Lipschitz::new();
        prop_assume!(!a.is_zero() && !c.is_zero());
        let units = r.units();
        let b = r.mul(&r.mul(&units[u], &r.mul(&a, &c)), &units[v]);
        prop_assert!(divides(&r, &a, &b).unwrap());
        prop_assert_eq!(gauge_u64(&r, &b).unwrap() % gauge_u64(&r, &a).unwrap(), 0);
    }

    #[test]
    fn canonical_rep_is_orbit_invariant(a in quaternion(9), u in 0usize..8, v in 0usize..8) {
        let r = Lipschitz::new();
        prop_assume!(!a.is_zero());
        let units = r.units();
        let b = r.mul(&r.mul(&units[u], &a), &units[v]);
        prop_assert_eq!(canonical_rep(&r, &a), canonical_rep(&r, &b));
        prop_assert!(are_associates(&r, &a, &b));
    }

    #[test]
    fn factorizations_multiply_back(x in small_lipschitz(48)) {
        let r = Lipschitz::new();
        let reps = factorization_representatives(&r, &x).unwrap();
        prop_assert!(!reps.is_empty());
        for (class, f) in &reps {
            prop_assert!(f.multiplies_back(&r));
            prop_assert!(is_unit(&r, &f.unit_prefix));
            let product: u64 = f.atoms.iter().map(|a| gauge_u64(&r, a).unwrap()).product();
            prop_assert_eq!(product, gauge_u64(&r, &x).unwrap());
            for (a, c) in f.atoms.iter().zip(&class.atoms) {
                prop_assert!(is_irreducible(&r, a).unwrap());
                prop_assert_eq!(&canonical_rep(&r, a), c);
            }
        }
    }

    #[test]
    fn graphs_reverify_against_divisibility(x in small_lipschitz(64)) {
        check_graph_invariants(&Lipschitz::new(), &x)?;
    }

    #[test]
    fn skeleton_matches_graph(x in small_lipschitz(64)) {
        let r = Lipschitz::new();
        prop_assert!(skeleton1_equals_graph(&ComputedOracle::new(&r, &x).unwrap()).unwrap());
        let s = complex_of(&r, &x).unwrap();
        let faces = s.face_sets();
        prop_assert!(faces.contains(&Vec::new()));
        for v in &s.vertices {
            prop_assert!(faces.contains(&vec![v.clone()]));
        }
    }

    #[test]
    fn vertex_sets_grow_under_products(a in small_lipschitz(12), b in small_lipschitz(12)) {
        let r = Lipschitz::new();
        let vs = |x: &Quaternion| -> BTreeSet<String> {
            complex_of(&r, x).unwrap().vertices.into_iter().collect()
        };
        let ab = vs(&r.mul(&a, &b));
        prop_assert!(vs(&a).is_subset(&ab));
        prop_assert!(vs(&b).is_subset(&ab));
    }

    #[test]
    fn full_relation_specializes(x in small_lipschitz(48)) {
        let r = Lipschitz::new();
        let full = TauRelation::Full;
        prop_assert_eq!(is_tau_irreducible(&r, &x, &full).unwrap(), is_irreducible(&r, &x).unwrap());
        let g = build_tau_graphs(&r, &x, &full).unwrap();
        prop_assert!(g.directed.same_as(&build_directed_graph(&r, &x).unwrap()));
        prop_assert!(g.undirected.same_as(&build_undirected_graph(&r, &x).unwrap()));
    }

    #[test]
    fn empty_relation_gives_a_point(x in small_lipschitz(64)) {
        let g = build_tau_graphs(&Lipschitz::new(), &x, &TauRelation::Empty).unwrap();
        prop_assert!(g.is_single_loopless_vertex());
    }

    #[test]
    fn tau_factorizations_are_pairwise_related(x in small_lipschitz(48), rel in prop::sample::select(vec!["gauge-eq", "subset:irreducible", "full"])) {
        let r = Lipschitz::new();
        let rel = TauRelation::parse_spec(rel).unwrap();
        let bound = BoundRelation::new(&r, &rel).unwrap();
        let classes = tau_factorizations(&r, &x, &rel).unwrap();
        let reps = tau_factorization_representatives(&r, &x, &rel).unwrap();
        prop_assert_eq!(classes.len(), reps.len());
        for (_, f) in reps {
            prop_assert!(f.multiplies_back(&r));
            prop_assert!(bound.pairwise(&f.factors).unwrap());
        }
        prop_assert!(single_vertex_iff_tau_irreducible(&r, &x, &rel).unwrap().agrees());
    }

    #[test]
    fn relations_are_symmetric(a in small_lipschitz(40), b in small_lipschitz(40), rel in prop::sample::select(vec!["gauge-eq", "subset:irreducible", "subset:prime-bounded:8"])) {
        let r = Lipschitz::new();
        let rel = TauRelation::parse_spec(rel).unwrap();
        prop_assert_eq!(tau_related(&r, &rel, &a, &b).unwrap(), tau_related(&r, &rel, &b, &a).unwrap());
    }

    #[test]
    fn graph_serialization_round_trips(x in small_lipschitz(64), directed in any::<bool>()) {
        let r = Lipschitz::new();
        let g = if directed {
            build_directed_graph(&r, &x).unwrap()
        } else {
            build_undirected_graph(&r, &x).unwrap()
        };
        prop_assert_eq!(&DivisorGraph::from_dot(&g.to_dot()).unwrap(), &g);
        prop_assert_eq!(&DivisorGraph::from_json(&g.to_json()).unwrap(), &g);
    }
}
