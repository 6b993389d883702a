mod common;

use std::collections::HashSet;

use bisubmod::bisubfn::{gen_strict_example, translate};
use bisubmod::oracle::{brute_adjacent, brute_vertices, check_closed, lex_argmax};
use bisubmod::poset::{
    build_poset, classify_family, closure_allow_cycles, hasse, ideals, is_signed_poset,
    transitive_closure,
};
use bisubmod::search::{
    adjacency_certificate, capacity_generic, eligible_arcs, enumerate_all, reverse_arc_list,
    selfloop_orthant_values, Route, Step,
};
use bisubmod::tight::{compute_xstar, is_member};
use bisubmod::{BisubFunction, RationalVector};
use common::{corpus, pt, quadrilateral, record};
use proptest::prelude::*;

#[test]
fn matches_oracle_on_corpus() {
    for (name, f) in corpus(4) {
        let visited = enumerate_all(&f).unwrap();
        let distinct: HashSet<_> = visited.iter().cloned().collect();
        assert_eq!(distinct.len(), visited.len(), "{name}: repeated vertex");
        let oracle = brute_vertices(&f);
        assert_eq!(distinct.len(), oracle.len(), "{name}");
        assert!(oracle.iter().all(|x| distinct.contains(x)), "{name}");
        assert_eq!(visited[0], compute_xstar(&f).coords, "{name}");
    }
}

#[test]
fn structure_invariants_at_every_vertex() {
    for (name, f) in corpus(3) {
        for x in brute_vertices(&f).iter() {
            let s = build_poset(&f, x).unwrap();
            assert!(check_closed(s.family.members()), "{name} {x}");
            assert_eq!(ideals(&s.graph).members, s.family.members(), "{name} {x}");
            assert_eq!(ideals(&s.rules).members, s.family.members(), "{name} {x}");
            assert_eq!(is_signed_poset(&s.graph), Ok(()), "{name} {x}");
            assert_eq!(
                transitive_closure(&s.hasse.graph).unwrap(),
                s.graph,
                "{name} {x}"
            );
            assert_eq!(hasse(&s.hasse.graph).unwrap(), s.hasse, "{name} {x}");
            for a in s.hasse.arcs() {
                let mut fewer = s.hasse.graph.clone();
                fewer.remove(a);
                assert_ne!(
                    closure_allow_cycles(&fewer),
                    s.graph,
                    "{name} {x}: {a} is redundant"
                );
            }
        }
    }
}

#[test]
fn capacities_agree_with_constraint_scan() {
    for (name, f) in corpus(4) {
        let rec = record(&f, true, false);
        for c in &rec.capacities {
            assert_eq!(Some(&c.value), c.generic.as_ref(), "{name} {}", c.arc);
            if let Some((a, b)) = &c.symmetric {
                assert_eq!(a, b, "{name} {}", c.arc);
            }
        }
    }
}

#[test]
fn reverse_candidates_are_vertices() {
    for (name, f) in corpus(3) {
        let rec = record(&f, false, false);
        for step in &rec.steps {
            if let Step::Reverse {
                candidate,
                capacity,
                ..
            } = step
            {
                if *capacity != bisubmod::signed_set::integer(0) {
                    assert!(is_member(&f, candidate), "{name} {candidate}");
                    let s = build_poset(&f, candidate).unwrap();
                    assert!(classify_family(&s.family).unwrap().is_vertex_family());
                }
            }
        }
    }
}

#[test]
fn root_is_the_only_vertex_without_eligible_arcs() {
    for (name, f) in corpus(4) {
        let oracle = brute_vertices(&f);
        let root = lex_argmax(&oracle).unwrap().coords;
        assert_eq!(root, compute_xstar(&f).coords, "{name}");
        for x in oracle.iter() {
            let h = build_poset(&f, x).unwrap().hasse;
            assert_eq!(eligible_arcs(&h).is_empty(), *x == root, "{name} {x}");
            if *x == root {
                assert_eq!(
                    reverse_arc_list(&h).is_empty(),
                    oracle.len() == 1,
                    "{name} {x}"
                );
            }
        }
    }
}

#[test]
fn tree_edges_carry_adjacency_certificates() {
    for (name, f) in corpus(3) {
        let rec = record(&f, false, false);
        for step in &rec.steps {
            if let Step::Reverse {
                candidate,
                accepted: true,
                arc,
                capacity,
            } = step
            {
                let parent = candidate.step(&arc.negated().boundary(candidate.len()), capacity);
                assert!(
                    adjacency_certificate(&f, &parent, candidate)
                        .unwrap()
                        .is_some(),
                    "{name}"
                );
                assert!(brute_adjacent(&f, &parent, candidate).unwrap(), "{name}");
            }
        }
    }
}

#[test]
fn certificates_agree_with_rank_test_on_all_pairs() {
    for f in [
        gen_strict_example(2).unwrap(),
        gen_strict_example(3).unwrap(),
        quadrilateral(),
    ] {
        let v: Vec<RationalVector> = brute_vertices(&f).iter().cloned().collect();
        for (k, x) in v.iter().enumerate() {
            for y in &v[k + 1..] {
                assert_eq!(
                    adjacency_certificate(&f, x, y).unwrap().is_some(),
                    brute_adjacent(&f, x, y).unwrap(),
                    "{x} / {y}"
                );
            }
        }
    }
}

#[test]
fn translation_moves_every_vertex() {
    let f = gen_strict_example(3).unwrap();
    let v = RationalVector::parse("1/2 -3 7/3").unwrap();
    let moved: HashSet<RationalVector> = enumerate_all(&translate(&f, &v).unwrap())
        .unwrap()
        .into_iter()
        .collect();
    let expected: HashSet<RationalVector> =
        enumerate_all(&f).unwrap().iter().map(|x| x + &v).collect();
    assert_eq!(moved, expected);
}

#[test]
fn state_does_not_grow_with_output() {
    let per_n: Vec<f64> = (2..=4)
        .map(|n| {
            let rec = record(&gen_strict_example(n).unwrap(), false, false);
            rec.max_words as f64 / (n * n) as f64
        })
        .collect();
    assert!(per_n.iter().all(|&c| c < 8.0), "{per_n:?}");
}

#[test]
fn quadrilateral_traversal() {
    let f = quadrilateral();
    let rec = record(&f, true, false);
    let order: Vec<RationalVector> = rec.visits.iter().map(|v| v.0.clone()).collect();
    assert_eq!(order, [pt(&[2, 2]), pt(&[2, 0]), pt(&[1, -1]), pt(&[0, 0])]);
    let trace: Vec<String> = rec.steps.iter().map(|s| s.to_string()).collect();
    assert_eq!(
        trace,
        [
            "init 2 2",
            "RS -2(2)",
            "RT -2(2) -> 2 0 accepted",
            "RS -1-2",
            "RT -1-2 -> 1 -1 accepted",
            "RS exhausted",
            "FT 1+2 -> 2 0",
            "RS exhausted",
            "FT +2(2) -> 2 2",
            "RS -1-2",
            "RT -1-2 -> 0 0 accepted",
            "RS 1-2",
            "RT 1-2 -> 1 -1 rejected",
            "RS exhausted",
            "FT 1+2 -> 2 2",
            "RS exhausted",
            "stop",
        ]
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn selfloop_value_is_independent_of_orthant(seed in any::<u64>(), n in 2usize..=3) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let f = bisubmod::bisubfn::gen_random(n, &mut rng).unwrap();
        for x in brute_vertices(&f).iter() {
            let h = build_poset(&f, x).unwrap().hasse;
            for a in h.arcs().filter(|a| a.is_selfloop()) {
                let values = selfloop_orthant_values(&f, x, a.lo_sign(), a.lo());
                let generic = capacity_generic(&f, x, &a.boundary(n)).unwrap();
                for (orthant, c) in values {
                    prop_assert_eq!(&c, &generic, "{} at {} via {}", a, x, orthant);
                }
            }
        }
    }

    #[test]
    fn random_instances_enumerate_like_the_oracle(seed in any::<u64>(), n in 1usize..=3) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let f = bisubmod::bisubfn::gen_random(n, &mut rng).unwrap();
        let got: HashSet<_> = enumerate_all(&f).unwrap().into_iter().collect();
        let want: HashSet<_> = brute_vertices(&f).iter().cloned().collect();
        prop_assert_eq!(got, want);
        prop_assert_eq!(f.ground().size(), n);
    }
}

#[test]
fn fallback_routes_are_rare_but_covered() {
    let mut routes = HashSet::new();
    for (_, f) in corpus(4) {
        for c in record(&f, true, false).capacities {
            routes.insert(format!("{:?}", c.route));
        }
    }
    assert!(routes.contains(&format!("{:?}", Route::Selfloop)));
    assert!(routes.contains(&format!("{:?}", Route::Pair)));
    assert!(routes.contains(&format!("{:?}", Route::Generic)));
}
