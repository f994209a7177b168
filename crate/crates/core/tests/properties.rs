use homcover::orbits::{aut_order, equivalent_sequences, h_n, is_homogeneous};
use homcover::subgroup::{closure, quotient_group, structure_predicates};
use homcover::*;
use proptest::prelude::*;
use proptest::sample::select;

const SMALL: [&str; 14] = [
    "C1", "C2", "C6", "C2^2", "C2xC4", "C3^2", "S3", "D4", "Q8", "D5", "A4", "C2xS3", "pq(3,7)", "S4",
];

fn group(name: &str) -> FiniteGroup {
    build(name).unwrap()
}

fn atom() -> impl Strategy<Value = GroupSpec> {
    prop_oneof![
        (1u64..40).prop_map(GroupSpec::Cyclic),
        (1u64..6).prop_map(GroupSpec::Symmetric),
        (1u64..6).prop_map(GroupSpec::Alternating),
        (1u64..12).prop_map(GroupSpec::Dihedral),
        Just(GroupSpec::Quaternion),
        select(vec![(2u64, 3u64), (2, 5), (3, 7), (5, 11)]).prop_map(|(p, q)| GroupSpec::PQ { p, q }),
        perm_spec(),
    ]
}

fn perm_spec() -> impl Strategy<Value = GroupSpec> {
    let generator = (Just((1u32..=6).collect::<Vec<_>>()).prop_shuffle(), 0usize..3).prop_map(|(pts, k)| {
        pts.chunks(3).take(k).map(|c| c.to_vec()).filter(|c| c.len() > 1).collect::<Vec<_>>()
    });
    prop::collection::vec(generator, 1..3).prop_map(GroupSpec::Perm)
}

fn spec() -> impl Strategy<Value = GroupSpec> {
    atom().prop_recursive(3, 12, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..4).prop_map(GroupSpec::Product),
            (inner, 1u32..4).prop_map(|(b, m)| GroupSpec::Power(Box::new(b), m)),
        ]
    })
}

/// A random generating sequence of `g` of length `n`.
fn generating(g: &FiniteGroup, n: usize, seed: &[u32]) -> Option<Vec<Element>> {
    let t: Vec<Element> = seed.iter().take(n).map(|&x| Element(x % g.order() as u32)).collect();
    is_generating(g, &t).then_some(t)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn spec_printer_round_trips(s in spec()) {
        let text = s.to_string();
        prop_assert_eq!(parse_spec(&text).unwrap(), s);
    }

    #[test]
    fn table_spec_round_trips(path in "[a-z/_.]{1,12}") {
        let s = GroupSpec::Table(path);
        prop_assert_eq!(parse_spec(&s.to_string()).unwrap(), s);
    }

    #[test]
    fn closures_obey_lagrange(name in select(SMALL.to_vec()), picks in prop::collection::vec(0u32..1000, 0..4)) {
        let g = group(name);
        let gens: Vec<Element> = picks.iter().map(|&x| Element(x % g.order() as u32)).collect();
        let h = closure(&g, &gens);
        prop_assert_eq!(g.order() % h.order(), 0);
        for &a in h.elements() {
            for &b in &gens {
                prop_assert!(h.contains(g.multiply(a, b)));
            }
        }
    }

    #[test]
    fn cover_closures_obey_lagrange(picks in prop::collection::vec(0u32..108, 0..3)) {
        let c = build_cover(&group("S3"), 2, &Limits::default()).unwrap();
        let gens: Vec<Element> = picks.into_iter().map(Element).collect();
        prop_assert_eq!(c.order() % closure(&c.cover, &gens).order(), 0);
    }

    #[test]
    fn equivalence_is_an_equivalence(
        name in select(vec!["S3", "C2^2", "D4", "C6", "Q8"]),
        seeds in prop::collection::vec(prop::collection::vec(0u32..1000, 2), 3),
    ) {
        let g = group(name);
        let ts: Vec<Vec<Element>> = seeds.iter().filter_map(|s| generating(&g, 2, s)).collect();
        prop_assume!(ts.len() == 3);
        let eq = |i: usize, j: usize| equivalent_sequences(&g, &ts[i], &ts[j]);
        prop_assert!(eq(0, 0));
        prop_assert_eq!(eq(0, 1), eq(1, 0));
        if eq(0, 1) && eq(1, 2) {
            prop_assert!(eq(0, 2));
        }
        // Second route: an automorphism extends the entrywise map.
        let auto = extend_hom(&g, &g, &ts[0], &ts[1]).unwrap().is_some_and(|f| f.is_isomorphism());
        prop_assert_eq!(eq(0, 1), auto);
    }

    #[test]
    fn extend_to_self_is_identity(name in select(SMALL.to_vec()), seed in prop::collection::vec(0u32..1000, 3)) {
        let g = group(name);
        let Some(s) = generating(&g, 3, &seed) else { return Ok(()) };
        let f = extend_hom(&g, &g, &s, &s).unwrap().unwrap();
        prop_assert!(g.elements().all(|x| f.apply(x) == x));
    }

    #[test]
    fn lifts_satisfy_gaschutz(name in select(vec!["S3", "D4", "A4", "C2xC4", "Q8", "C2xS3"]), pick in 0usize..100, seed in prop::collection::vec(0u32..1000, 3)) {
        let g = group(name);
        let lattice = subgroup_lattice(&g, &Limits::default()).unwrap();
        let normals = lattice.normal_subgroups();
        let (_, f) = quotient_group(&g, normals[pick % normals.len()]).unwrap();
        let n = rank(&g).max(1);
        let Some(s) = generating(f.codomain(), n, &seed) else { return Ok(()) };
        let t = lift_gaschutz(&f, &s).unwrap();
        prop_assert!(is_generating(&g, &t));
        for (a, b) in t.iter().zip(&s) {
            prop_assert_eq!(f.apply(*a), *b);
        }
    }
}

#[test]
fn group_axioms_hold() {
    for name in SMALL.iter().chain(&["D12", "C2^2xC3^2", "A5", "Q8xC3"]) {
        let g = group(name);
        assert_eq!(g.identity(), Element(0));
        for a in g.elements() {
            assert_eq!(g.multiply(a, g.invert(a)), Element(0), "{name}");
            assert_eq!(g.multiply(Element(0), a), a);
        }
        if g.order() <= 64 {
            for a in g.elements() {
                for b in g.elements() {
                    let ab = g.multiply(a, b);
                    for c in g.elements() {
                        assert_eq!(g.multiply(ab, c), g.multiply(a, g.multiply(b, c)), "{name}");
                    }
                }
            }
        }
    }
}

#[test]
fn quotient_maps_are_surjective() {
    for name in ["S3", "D4", "A4", "S4", "Q8", "C2xC6"] {
        let g = group(name);
        let lattice = subgroup_lattice(&g, &Limits::default()).unwrap();
        for n in lattice.normal_subgroups() {
            let (q, f) = quotient_group(&g, n).unwrap();
            assert_eq!(q.order() * n.order(), g.order());
            assert!(f.is_surjective());
            assert_eq!(f.graph_order(), g.order());
            assert_eq!(f.kernel().elements(), n.elements());
        }
    }
}

#[test]
fn composition_applies_pointwise() {
    let g = group("S4");
    let lattice = subgroup_lattice(&g, &Limits::default()).unwrap();
    let v4 = lattice.normal_subgroups().into_iter().find(|n| n.order() == 4).unwrap().clone();
    let (s3, f) = quotient_group(&g, &v4).unwrap();
    let a3 = lattice_normal(&s3, 3);
    let (c2, h) = quotient_group(&s3, &a3).unwrap();
    let composed = f.then(&h).unwrap();
    assert!(composed.codomain().ptr_eq(&c2));
    for x in g.elements() {
        assert_eq!(composed.apply(x), h.apply(f.apply(x)));
    }
    assert!(h.then(&f).is_err());
}

fn lattice_normal(g: &FiniteGroup, order: usize) -> subgroup::Subgroup {
    let lattice = subgroup_lattice(g, &Limits::default()).unwrap();
    lattice.normal_subgroups().into_iter().find(|n| n.order() == order).unwrap().clone()
}

#[test]
fn isomorphism_search_is_symmetric() {
    let corpus = ["C6", "C2xC3", "S3", "D3", "pq(2,3)", "C2^2", "C4", "D4", "Q8", "C2xC4", "C8", "D6", "C2xS3", "A4", "D12"];
    for a in corpus {
        for b in corpus {
            let (g, h) = (group(a), group(b));
            let forward = find_isomorphism(&g, &h);
            assert_eq!(forward.is_some(), find_isomorphism(&h, &g).is_some(), "{a} {b}");
            if let Some(f) = forward {
                assert!(f.is_isomorphism());
                assert_eq!(structure_predicates(&g), structure_predicates(&h));
            }
        }
    }
}

#[test]
fn counts_are_monotone_and_enumerations_generate() {
    let limits = Limits::default();
    for name in SMALL {
        let g = group(name);
        let r = rank(&g).max(1);
        let counts: Vec<u128> = (r..r + 3).map(|n| count_gamma(&g, n).unwrap()).collect();
        assert!(counts.windows(2).all(|w| w[0] <= w[1]), "{name}: {counts:?}");
        if g.order() <= 24 {
            let all: Vec<_> = enumerate_gamma(&g, r, &limits).unwrap().collect();
            assert_eq!(all.len() as u128, counts[0]);
            assert!(all.iter().all(|t| is_generating(&g, t)));
            assert!(all.windows(2).all(|w| w[0] < w[1]));
        }
    }
}

#[test]
fn orbit_counts_multiply_out() {
    for name in SMALL {
        let g = group(name);
        let r = rank(&g).max(1);
        for n in r..r + 2 {
            let h = h_n(&g, n).unwrap();
            assert_eq!(h * aut_order(&g), count_gamma(&g, n).unwrap(), "{name} {n}");
            if is_homogeneous(&g, n) {
                assert_eq!(rank(&g), if g.order() == 1 { 0 } else { n }, "{name} {n}");
            }
        }
    }
}

#[test]
fn covers_of_homogeneous_groups_are_themselves() {
    let limits = Limits::default();
    for (name, n) in [("C2^2", 2), ("C3^2", 2), ("C2^3", 3), ("Q8", 2), ("C2", 1), ("C5", 1)] {
        let g = group(name);
        assert!(is_homogeneous(&g, n), "{name}");
        let c = build_cover(&g, n, &limits).unwrap();
        let table = c.cover.to_table_backend(&limits).unwrap();
        assert!(find_isomorphism(&table, &g).is_some(), "{name}");
    }
}

#[test]
fn covers_are_idempotent() {
    let limits = Limits::default();
    for (name, n) in [("C2", 2), ("C6", 2), ("S3", 2), ("C2xC4", 2)] {
        let c = build_cover(&group(name), n, &limits).unwrap();
        let first = c.cover.to_table_backend(&limits).unwrap();
        let again = build_cover(&first, n, &limits).unwrap();
        assert_eq!(again.h(), 1, "{name}");
        let second = again.cover.to_table_backend(&limits).unwrap();
        assert!(find_isomorphism(&second, &first).is_some(), "{name}");
    }
}

#[test]
fn subdirect_products_of_cover_copies_are_the_cover() {
    // Two inequivalent generating pairs of H(2, C2) span a copy of the cover.
    let limits = Limits::default();
    let c = build_cover(&group("C2"), 2, &limits).unwrap();
    let cover = c.cover.to_table_backend(&limits).unwrap();
    let d = orbit_decompose(&cover, 2, &limits).unwrap();
    assert_eq!(d.h_n, 1);
    let reps: Vec<Vec<Element>> = enumerate_gamma(&cover, 2, &limits).unwrap().take(3).collect();
    let gens: Vec<Vec<Element>> = (0..2).map(|j| reps.iter().map(|t| t[j]).collect()).collect();
    let sub = FiniteGroup::product_subgroup(vec![cover.clone(); 3], &gens, "sub".into(), &limits).unwrap();
    let sub = sub.to_table_backend(&limits).unwrap();
    assert!(find_isomorphism(&sub, &cover).is_some());
}

#[test]
fn projections_of_covers_are_onto() {
    let limits = Limits::default();
    for (name, n) in [("S3", 2), ("D4", 2), ("C6", 2), ("A4", 2), ("C2^2", 3)] {
        let c = build_cover(&group(name), n, &limits).unwrap();
        assert!(c.projections().iter().all(|f| f.is_surjective()), "{name}");
        assert_eq!(c.coordinate_projection(0).unwrap_err().name(), "IndexOutOfRange");
    }
}
