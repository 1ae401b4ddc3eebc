mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{all_trees, has_reversing_automorphism, isomorphism_signs, scramble};
use jdc_core::notation::parse_diagram;
use jdc_core::spaces::{generate_graphs, generate_trees, numeric_alphabet};
use jdc_core::{canonicalize, Diagram, Element, LabelMode};

fn tree_strategy() -> impl Strategy<Value = Diagram> {
    let leaf = (1u32..=3).prop_map(|l| format!("{l}"));
    let tree = leaf.prop_recursive(3, 8, 2, |inner| (inner.clone(), inner).prop_map(|(a, b)| format!("[{a},{b}]")));
    (tree, 1u32..=3).prop_filter_map(
        "trees need a node",
        |(t, r)| {
            if t.starts_with('[') {
                parse_diagram(&format!("{t}@{r}")).ok()
            } else {
                None
            }
        },
    )
}

fn graph_pool() -> Vec<Diagram> {
    let mut out = Vec::new();
    for n in 2..=3 {
        for k in generate_graphs(n, &numeric_alphabet(2)).unwrap() {
            if !k.representative().is_tree() {
                out.push(k.representative().clone());
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn scrambled_copies_share_a_key(d in tree_strategy(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = scramble(&d, &mut rng);
        let (k1, s1) = canonicalize(&d).unwrap();
        let (k2, s2) = canonicalize(&e).unwrap();
        prop_assert_eq!(&k1, &k2);
        if !k1.is_two_torsion() {
            prop_assert_eq!(s1, s2);
        }
    }

    #[test]
    fn canonical_sign_matches_isomorphism(d in tree_strategy()) {
        let (k, s) = canonicalize(&d).unwrap();
        let signs = isomorphism_signs(&d, k.representative());
        prop_assert!(!signs.is_empty());
        prop_assert_eq!(k.is_two_torsion(), signs.contains(&1) && signs.contains(&-1));
        if !k.is_two_torsion() {
            prop_assert!(signs.iter().all(|&x| x == s.to_i64()));
        }
    }

    #[test]
    fn canonicalization_is_idempotent(d in tree_strategy()) {
        let (k, _) = canonicalize(&d).unwrap();
        let (k2, s2) = canonicalize(k.representative()).unwrap();
        prop_assert_eq!(&k, &k2);
        if !k.is_two_torsion() {
            prop_assert_eq!(s2.to_i64(), 1);
        }
    }

    #[test]
    fn vertex_flip_negates(d in tree_strategy(), v in 0usize..8) {
        let v = v % d.trivalent().len();
        let flipped = d.reverse_vertex(v);
        prop_assert_eq!(Element::from_diagram(&flipped).unwrap(), Element::from_diagram(&d).unwrap().neg());
    }
}

#[test]
fn graphs_scramble_and_flip() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for d in graph_pool() {
        let (k, s) = canonicalize(&d).unwrap();
        let (k2, s2) = canonicalize(&scramble(&d, &mut rng)).unwrap();
        assert_eq!(k, k2);
        let signs = isomorphism_signs(&d, k.representative());
        assert_eq!(k.is_two_torsion(), signs.contains(&1) && signs.contains(&-1));
        if !k.is_two_torsion() {
            assert_eq!(s, s2);
            assert!(signs.iter().all(|&x| x == s.to_i64()));
        }
    }
}

/// Distinct keys in a generated basis are never isomorphic, and every
/// labeled tree lands in the basis.
#[test]
fn tree_generation_is_complete_and_reduced() {
    for (n, l, mode) in [
        (1, 3, LabelMode::RepeatsAllowed),
        (2, 3, LabelMode::RepeatsAllowed),
        (3, 2, LabelMode::RepeatsAllowed),
        (3, 4, LabelMode::Distinct),
        (4, 5, LabelMode::Distinct),
    ] {
        let alphabet = numeric_alphabet(l);
        let basis = generate_trees(n, &alphabet, mode).unwrap();
        let keys: BTreeSet<_> = basis.iter().cloned().collect();
        assert_eq!(keys.len(), basis.len());
        for (i, a) in basis.iter().enumerate() {
            assert_eq!(a.is_two_torsion(), has_reversing_automorphism(a.representative()));
            for b in &basis[i + 1..] {
                assert!(isomorphism_signs(a.representative(), b.representative()).is_empty());
            }
        }
        let distinct = mode == LabelMode::Distinct;
        for d in all_trees(n, &alphabet, distinct) {
            let (k, _) = canonicalize(&d).unwrap();
            assert!(keys.contains(&k), "{n} {l}: missing class");
        }
    }
}

/// Exhaustive AS law: reversing any single vertex of any generator of
/// degree at most 4 negates it.
#[test]
fn as_law_exhaustive_through_degree_four() {
    let mut reps = Vec::new();
    for n in 1..=4 {
        reps.extend(generate_trees(n, &numeric_alphabet(3), LabelMode::RepeatsAllowed).unwrap());
    }
    for n in 2..=4 {
        reps.extend(generate_graphs(n, &numeric_alphabet(2)).unwrap());
    }
    assert!(reps.len() > 100);
    for k in &reps {
        let d = k.representative();
        let (_, s) = canonicalize(d).unwrap();
        for v in 0..d.trivalent().len() {
            let (k2, s2) = canonicalize(&d.reverse_vertex(v)).unwrap();
            assert_eq!(&k2, k);
            if !k.is_two_torsion() {
                assert_eq!(s2, -s);
            }
        }
    }
}

#[test]
fn y112_has_a_reversing_automorphism() {
    let d = parse_diagram("[1,1]@2").unwrap();
    assert!(has_reversing_automorphism(&d));
    assert!(canonicalize(&d).unwrap().0.is_two_torsion());
    let d = parse_diagram("[1,2]@3").unwrap();
    assert!(!has_reversing_automorphism(&d));
}
