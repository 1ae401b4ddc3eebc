use std::collections::BTreeMap;

use num_bigint::BigInt;

use jdc_core::grope::{
    add_linking_trivial_row, matching_bracket, psi_capped, psi_uncapped, psi_uncapped_graded, symplectic_transform, LabeledTree,
    LeafTarget, SymplecticGenerator, TreeLeaf,
};
use jdc_core::notation::parse_bracket;
use jdc_core::samples::*;
use jdc_core::skeleton::pull_off;
use jdc_core::spaces::{numeric_alphabet, reduce_ihx};
use jdc_core::tower::{intersection_forest, push_in, tau_hat, tau_hat_total, theorem1_witness};
use jdc_core::witness::{builtin_witness, expected_capped_element, genihx_graph_expected, WitnessKind};
use jdc_core::*;

fn l(s: &str) -> Label {
    Label::new(s).unwrap()
}

/// `sign * tree@root` as an element.
fn tree_element(terms: &[(i64, &str)]) -> Element {
    let mut e = Element::zero();
    for (c, text) in terms {
        let (t, root) = text.rsplit_once('@').unwrap();
        let d = Diagram::from_rooted(&parse_bracket(t).unwrap(), l(root));
        e.add_diagram(&d, &BigInt::from(*c)).unwrap();
    }
    e
}

#[test]
fn pull_off_of_single_trees() {
    let mut r = rng(21);
    for _ in 0..30 {
        let g = random_capped_encoding(&mut r, 4);
        let psi = psi_capped(&g).unwrap();
        for (k, c) in psi.terms() {
            let t = k.to_attached_tree();
            let mut expected = Element::zero();
            expected.add_diagram(t.tree(), c).unwrap();
            let single = AttachedElement::from_term(k.clone(), c.clone());
            assert_eq!(pull_off(&single, g.skeleton()).unwrap(), expected);
        }
    }
}

#[test]
fn pull_off_is_additive() {
    let mut r = rng(22);
    for _ in 0..20 {
        let g = random_capped_encoding(&mut r, 4);
        let h = random_capped_encoding(&mut r, 4);
        if g.skeleton() != h.skeleton() {
            continue;
        }
        let (a, b) = (psi_capped(&g).unwrap(), psi_capped(&h).unwrap());
        let s = g.skeleton();
        assert_eq!(pull_off(&a.add(&b), s).unwrap(), pull_off(&a, s).unwrap().add(&pull_off(&b, s).unwrap()));
    }
}

#[test]
fn theorem1_forest_by_hand() {
    let t = theorem1_witness();
    let forest = intersection_forest(&t, 3).unwrap();
    assert_eq!(forest.len(), 3);
    let mut by_hand = Element::zero();
    for (s, d) in &forest {
        by_hand.add_diagram(d, &BigInt::from(s.to_i64())).unwrap();
    }
    assert_eq!(tau_hat(&t, 3).unwrap(), by_hand);
    assert_eq!(by_hand, tree_element(&[(1, "[[1,2],3]@4"), (-1, "[1,[2,3]]@4"), (1, "[[3,1],2]@4")]));
    assert!(!by_hand.is_zero());
    assert!(reduce_ihx(&by_hand).unwrap().is_zero());
}

#[test]
fn ihx_witnesses_of_higher_degree() {
    for n in 3..=6 {
        let g = builtin_witness(WitnessKind::TheoremIhxn(n)).unwrap();
        let psi = psi_capped(&g).unwrap();
        let tail: Vec<String> = (4..=n).map(|i| i.to_string()).collect();
        let tail: Vec<&str> = tail.iter().map(String::as_str).collect();
        let root = (n + 1).to_string();
        assert_eq!(psi, expected_capped_element(["1", "2", "3"], &tail, &root, g.skeleton()).unwrap());
        let pulled = pull_off(&psi, g.skeleton()).unwrap();
        assert!(!pulled.is_zero());
        assert!(reduce_ihx(&pulled).unwrap().is_zero());
        assert_eq!(pulled, tau_hat(&push_in(&g).unwrap(), n).unwrap());
    }
    assert!(builtin_witness(WitnessKind::TheoremIhxn(2)).is_err());
}

#[test]
fn theorem3_witness() {
    let g = builtin_witness(WitnessKind::Theorem3).unwrap();
    let psi = psi_capped(&g).unwrap();
    assert_eq!(psi, expected_capped_element(["5", "2", "4"], &[], "1", g.skeleton()).unwrap());
    let pulled = pull_off(&psi, g.skeleton()).unwrap();
    assert_eq!(pulled, tree_element(&[(1, "[[5,2],4]@1"), (-1, "[5,[2,4]]@1"), (1, "[[4,5],2]@1")]));
    assert!(reduce_ihx(&pulled).unwrap().is_zero());
}

/// The three graphs of the graph witness drawn by hand: glue the `a` and
/// `d` legs of the I, H and X trees.
#[test]
fn graph_witness_by_hand() {
    let glue = |t: &str| {
        let d = Diagram::from_rooted(&parse_bracket(t).unwrap(), l("3"));
        let h = |x: &str| d.univalent().iter().find(|(_, y)| y.as_str() == x).unwrap().0;
        d.glue_leaves(h("a"), h("d")).unwrap().unwrap()
    };
    let mut e = Element::zero();
    for (c, t) in [(1, "[[[a,1],2],d]"), (-1, "[[a,[1,2]],d]"), (1, "[[[2,a],1],d]")] {
        e.add_diagram(&glue(t), &BigInt::from(c)).unwrap();
    }
    assert_eq!(genihx_graph_expected().unwrap(), e);
    let g = builtin_witness(WitnessKind::TheoremGenIhxGraph).unwrap();
    let psi = psi_uncapped(&g).unwrap();
    assert_eq!(psi, e);
    assert!(psi.keys().all(|k| k.grope_degree() == 4 && k.representative().first_betti() == 1));
    assert!(reduce_ihx(&psi).unwrap().is_zero());
}

#[test]
fn push_in_square_commutes() {
    let mut r = rng(23);
    for _ in 0..60 {
        let g = random_capped_encoding(&mut r, 4);
        let lhs = pull_off(&psi_capped(&g).unwrap(), g.skeleton()).unwrap();
        assert_eq!(lhs, tau_hat_total(&push_in(&g).unwrap()).unwrap());
    }
}

#[test]
fn ihx_triples_vanish_mod_ihx() {
    let mut r = rng(24);
    for _ in 0..20 {
        let mut t = random_tower(&mut r, 3, 4);
        let before = tau_hat(&t, 3).unwrap();
        for p in random_ihx_triple(&mut r, &numeric_alphabet(4)) {
            t.push_point(p).unwrap();
        }
        let delta = tau_hat(&t, 3).unwrap().sub(&before);
        assert!(reduce_ihx(&delta).unwrap().is_zero());
    }
}

#[test]
fn matched_outputs_have_grope_degree_n() {
    let mut r = rng(25);
    let mut glued = 0;
    for i in 0..60 {
        let n = 2 + i % 4;
        let g = random_matched_encoding(&mut r, n);
        let e = psi_uncapped_graded(&g, n).unwrap();
        for k in e.keys() {
            assert_eq!(k.grope_degree(), n);
            glued += k.representative().first_betti();
        }
        assert!(matches!(psi_uncapped_graded(&g, n + 1), Err(Error::ClassViolation { .. })));
    }
    assert!(glued > 0);
}

#[test]
fn sibling_gluing_is_zero() {
    let leaf = |tip: &str, target: LeafTarget| RootedTree::leaf(TreeLeaf { tip: l(tip), target });
    let tree = RootedTree::node(
        RootedTree::node(leaf("T1", LeafTarget::Tip(l("T2"))), leaf("T2", LeafTarget::Tip(l("T1")))),
        leaf("T3", LeafTarget::Component(l("1"))),
    );
    let mut links = LinkTable::new();
    links.set_tip(&l("T1"), &l("T2"), 1);
    let t = LabeledTree { tree, root: l("2"), coefficient: BigInt::from(1) };
    assert!(matching_bracket(&t, &links).unwrap().is_zero());
}

#[test]
fn symplectic_free_part_is_invariant() {
    let mut r = rng(26);
    let mut torsion_changes = 0;
    for _ in 0..60 {
        let (g, stage) = random_symplectic_case(&mut r);
        let base = psi_uncapped(&g).unwrap();
        for gen in SymplecticGenerator::all(stage.pairs.len()) {
            let moved = psi_uncapped(&symplectic_transform(&g, &stage, gen).unwrap()).unwrap();
            assert_eq!(moved.free_part(), base.free_part(), "{gen:?}");
            let diff = moved.sub(&base);
            assert!(diff.keys().all(|k| k.is_two_torsion()));
            torsion_changes += usize::from(!diff.is_zero());
        }
    }
    // families 1 and 2 add [x,x] brackets when a stage tip links a strand oddly
    assert!(torsion_changes > 0);
}

#[test]
fn symplectic_moves_keep_the_trees() {
    let mut r = rng(27);
    for _ in 0..30 {
        let (g, stage) = random_symplectic_case(&mut r);
        for gen in SymplecticGenerator::all(stage.pairs.len()) {
            let h = symplectic_transform(&g, &stage, gen).unwrap();
            assert_eq!(h.components(), g.components());
        }
    }
}

#[test]
fn linking_trivial_rows_leave_psi_unchanged() {
    let mut r = rng(28);
    let mut used = 0;
    for i in 0..80 {
        let g = if i % 2 == 0 { random_symplectic_case(&mut r).0 } else { random_matched_encoding(&mut r, 4) };
        let base = psi_uncapped(&g).unwrap();
        if let Some((tip, row)) = random_trivial_row(&mut r, &g) {
            for k in [-2, 1, 3] {
                assert_eq!(psi_uncapped(&add_linking_trivial_row(&g, &tip, &row, k).unwrap()).unwrap(), base);
            }
            used += 1;
        }
    }
    assert!(used > 10);
}

#[test]
fn invalid_rows_are_rejected() {
    let (g, stage) = random_symplectic_case(&mut rng(29));
    let (alpha, _) = &stage.pairs[0];
    assert!(add_linking_trivial_row(&g, alpha, &Default::default(), 1).is_err());
    let tip = g.components()[0].branches[0].tree.leaves().into_iter().find(|t| !stage.pairs.iter().any(|(a, b)| a == *t || b == *t));
    if let Some(tip) = tip {
        let row = jdc_core::grope::LinkRow { comps: BTreeMap::from([(l("1"), 1)]), ..Default::default() };
        assert!(add_linking_trivial_row(&g, tip, &row, 1).is_err());
    }
}
