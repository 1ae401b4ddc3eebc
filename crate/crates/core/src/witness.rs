//! Built-in grope witnesses whose images are IHX relators.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::diagram::{Diagram, HalfEdge, Label, Sign};
use crate::element::{AttachedElement, Element};
use crate::error::{Error, Result};
use crate::grope::{Branch, CapIntersection, GropeEncoding, GropeTree, LinkTable, TipId};
use crate::limits::check_degree;
use crate::skeleton::{AttachedTree, Skeleton};
use crate::spaces::ihx_relator;
use crate::tree::RootedTree;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessKind {
    Construction41,
    Theorem3,
    TheoremIhxn(usize),
    TheoremGenIhxGraph,
}

pub fn builtin_witness(kind: WitnessKind) -> Result<GropeEncoding> {
    match kind {
        WitnessKind::Construction41 => Ok(capped_ihx(&["1", "2", "3"], "4", &[], 4)),
        WitnessKind::Theorem3 => Ok(capped_ihx(&["5", "2", "4"], "1", &[], 5)),
        WitnessKind::TheoremIhxn(n) => theorem_ihxn(n),
        WitnessKind::TheoremGenIhxGraph => Ok(genihx_graph()),
    }
}

type Shape = fn(RootedTree<TipId>, RootedTree<TipId>, RootedTree<TipId>) -> RootedTree<TipId>;

/// The three stage shapes `[[A,B],C]`, `[A,[B,C]]`, `[[C,A],B]` with signs.
const IHX_SHAPES: [(Shape, Sign); 3] = [
    (|a, b, c| RootedTree::node(RootedTree::node(a, b), c), Sign::Plus),
    (|a, b, c| RootedTree::node(a, RootedTree::node(b, c)), Sign::Minus),
    (|a, b, c| RootedTree::node(RootedTree::node(c, a), b), Sign::Plus),
];

/// Three branches on `root`, one per IHX term, each capped so that its
/// leaves hit `abc` and then `tail` in order, one intersection per cap.
fn capped_ihx(abc: &[&str; 3], root: &str, tail: &[String], strands: usize) -> GropeEncoding {
    let mut caps = BTreeMap::new();
    let mut next = 1;
    let mut fresh = |strand: &str, caps: &mut BTreeMap<TipId, Vec<CapIntersection>>| {
        let t = Label::raw(format!("T{next}"));
        next += 1;
        caps.insert(t.clone(), vec![CapIntersection { component: Label::raw(strand), site: 1, sign: Sign::Plus }]);
        RootedTree::leaf(t)
    };
    let mut branches = Vec::new();
    for (shape, sign) in IHX_SHAPES {
        let [a, b, c] = abc.map(|s| fresh(s, &mut caps));
        let mut tree = shape(a, b, c);
        for s in tail {
            tree = RootedTree::node(tree, fresh(s, &mut caps));
        }
        branches.push(Branch { tree, sign });
    }
    let comp = GropeTree { root: Label::raw(root), root_site: 0, branches };
    GropeEncoding::new(Skeleton::segments(strands), vec![comp], LinkTable::new(), true, caps).expect("witness is well formed")
}

/// Degree `n` comb trees on strands `1..=n+1` with the IHX move at the
/// innermost edge; root on strand `n+1`.
fn theorem_ihxn(n: usize) -> Result<GropeEncoding> {
    if n < 3 {
        return Err(Error::Grope("an IHX witness needs degree at least 3".into()));
    }
    check_degree(n)?;
    let tail: Vec<String> = (4..=n).map(|i| i.to_string()).collect();
    let root = (n + 1).to_string();
    Ok(capped_ihx(&["1", "2", "3"], &root, &tail, n + 1))
}

/// The attached trees `t_I`, `t_H`, `t_X` of an IHX witness, in order.
pub fn expected_capped_terms(abc: [&str; 3], tail: &[&str]) -> [RootedTree<Label>; 3] {
    let l = |s: &str| RootedTree::leaf(Label::raw(s));
    IHX_SHAPES.map(|(shape, _)| {
        let mut t = shape(l(abc[0]), l(abc[1]), l(abc[2]));
        for s in tail {
            t = RootedTree::node(t, l(s));
        }
        t
    })
}

/// `t_I - t_H + t_X` attached with one leg per strand, root on `root`.
pub fn expected_capped_element(abc: [&str; 3], tail: &[&str], root: &str, skel: &Skeleton) -> Result<AttachedElement> {
    let mut e = AttachedElement::zero();
    for (t, c) in expected_capped_terms(abc, tail).iter().zip([1i64, -1, 1]) {
        let d = Diagram::from_rooted(t, Label::raw(root));
        let mut positions = vec![1; d.univalent().len()];
        *positions.last_mut().expect("root") = 0;
        let a = AttachedTree::new(d, positions)?;
        e = e.add(&AttachedElement::from_attached(&a, skel)?.scalar_mul(&BigInt::from(c)));
    }
    Ok(e)
}

/// Grope degree 4 witness for the graph IHX relation: the I-tree is
/// `[[[A,B],C],D]` rooted on strand 3 with `A` and `D` cut open and Hopf
/// linked, `B` on strand 1 and `C` on strand 2.
fn genihx_graph() -> GropeEncoding {
    let mut links = LinkTable::new();
    let mut branches = Vec::new();
    let mut next = 1;
    for (shape, sign) in IHX_SHAPES {
        let mut tip = || {
            let t = Label::raw(format!("T{next}"));
            next += 1;
            t
        };
        let (a, b, c, d) = (tip(), tip(), tip(), tip());
        links.set_tip(&a, &d, 1);
        links.set_comp(&b, &Label::from(1), 1);
        links.set_comp(&c, &Label::from(2), 1);
        let l = |t: &TipId| RootedTree::leaf(t.clone());
        let tree = RootedTree::node(shape(l(&a), l(&b), l(&c)), l(&d));
        branches.push(Branch { tree, sign });
    }
    let comp = GropeTree { root: Label::from(3), root_site: 0, branches };
    GropeEncoding::new(Skeleton::segments(3), vec![comp], links, false, BTreeMap::new()).expect("witness is well formed")
}

/// `D_I` for the graph witness, built directly from its picture, together
/// with the internal edge where the IHX move happens.
pub fn genihx_graph_diagram() -> (Diagram, [HalfEdge; 2]) {
    let l = |s: &str| RootedTree::leaf(Label::raw(s));
    let t = RootedTree::node(RootedTree::node(RootedTree::node(l("a"), l("1")), l("2")), l("d"));
    let d = Diagram::from_rooted(&t, Label::from(3));
    let half = |name: &str| d.univalent().iter().find(|(_, x)| x.as_str() == name).map(|(h, _)| *h).expect("leaf");
    let g = d.glue_leaves(half("a"), half("d")).expect("leaves").expect("no loop");
    // vertex 0 is [a,1], vertex 1 is [[a,1],2]
    let edge = [g.trivalent()[0][2], g.trivalent()[1][0]];
    (g, edge)
}

/// `D_I - D_H + D_X` computed from the graph itself.
pub fn genihx_graph_expected() -> Result<Element> {
    let (d, edge) = genihx_graph_diagram();
    ihx_relator(&d, edge)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grope::{psi_capped, psi_uncapped};

    #[test]
    fn construction_41_is_ihx() {
        let g = builtin_witness(WitnessKind::Construction41).unwrap();
        let e = psi_capped(&g).unwrap();
        assert_eq!(e, expected_capped_element(["1", "2", "3"], &[], "4", g.skeleton()).unwrap());
        assert_eq!(e.len(), 3);
    }

    #[test]
    fn ihxn_has_comb_shape() {
        let g = builtin_witness(WitnessKind::TheoremIhxn(5)).unwrap();
        let e = psi_capped(&g).unwrap();
        assert_eq!(e, expected_capped_element(["1", "2", "3"], &["4", "5"], "6", g.skeleton()).unwrap());
        assert!(builtin_witness(WitnessKind::TheoremIhxn(2)).is_err());
    }

    #[test]
    fn genihx_graph_image() {
        let g = builtin_witness(WitnessKind::TheoremGenIhxGraph).unwrap();
        let e = psi_uncapped(&g).unwrap();
        assert_eq!(e, genihx_graph_expected().unwrap());
        assert!(e.keys().all(|k| k.grope_degree() == 4 && k.representative().first_betti() == 1));
    }
}
