//! Skeletons, trees attached at ordered sites, and the pull-off map.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

use crate::canonical::{canonicalize, CanonicalDiagram, Parity};
use crate::diagram::{Diagram, Label, Sign};
use crate::element::{AttachedElement, Element, Generator};
use crate::error::{Error, Result};
use crate::spaces::{ihx_terms, internal_edges, RelationSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ComponentKind {
    Segment,
    Circle,
}

/// Directed circles and segments, in a fixed order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Skeleton {
    components: Vec<(Label, ComponentKind)>,
}

impl Skeleton {
    pub fn new(components: Vec<(Label, ComponentKind)>) -> Result<Skeleton> {
        if components.is_empty() {
            return Err(Error::Skeleton("a skeleton needs at least one component".into()));
        }
        let mut names: Vec<&Label> = components.iter().map(|(n, _)| n).collect();
        names.sort();
        if names.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Skeleton("component names must be unique".into()));
        }
        Ok(Skeleton { components })
    }

    /// Segments named `1..=l`.
    pub fn segments(l: usize) -> Skeleton {
        Skeleton { components: (1..=l as u32).map(|i| (Label::from(i), ComponentKind::Segment)).collect() }
    }

    pub fn components(&self) -> &[(Label, ComponentKind)] {
        &self.components
    }

    pub fn kind_of(&self, name: &Label) -> Option<ComponentKind> {
        self.components.iter().find(|(n, _)| n == name).map(|(_, k)| *k)
    }

    pub fn names(&self) -> Vec<Label> {
        self.components.iter().map(|(n, _)| n.clone()).collect()
    }
}

/// A tree whose univalent vertices sit at sites of skeleton components.
///
/// `positions[i]` is the site of `tree.univalent()[i]`; the label of that
/// univalent vertex is the component name. Only the order of sites along a
/// component matters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttachedTree {
    tree: Diagram,
    positions: Vec<i64>,
}

impl AttachedTree {
    pub fn new(tree: Diagram, positions: Vec<i64>) -> Result<AttachedTree> {
        if positions.len() != tree.univalent().len() {
            return Err(Error::Skeleton("one position per univalent vertex is required".into()));
        }
        if !tree.is_tree() {
            return Err(Error::Skeleton("attached generators must be trees".into()));
        }
        let mut seen: BTreeMap<(&Label, i64), ()> = BTreeMap::new();
        for ((_, l), p) in tree.univalent().iter().zip(&positions) {
            if seen.insert((l, *p), ()).is_some() {
                return Err(Error::Skeleton(format!("two legs at site {p} of component {l}")));
            }
        }
        Ok(AttachedTree { tree, positions })
    }

    pub fn tree(&self) -> &Diagram {
        &self.tree
    }

    pub fn positions(&self) -> &[i64] {
        &self.positions
    }

    pub fn sign(&self) -> Sign {
        self.tree.sign()
    }

    pub fn with_sign(self, sign: Sign) -> AttachedTree {
        AttachedTree { tree: self.tree.with_sign(sign), positions: self.positions }
    }

    /// Legs grouped per component, each list sorted by site.
    fn ranks(&self) -> Vec<(Label, usize, usize)> {
        let mut per: BTreeMap<&Label, Vec<i64>> = BTreeMap::new();
        for ((_, l), p) in self.tree.univalent().iter().zip(&self.positions) {
            per.entry(l).or_default().push(*p);
        }
        for v in per.values_mut() {
            v.sort();
        }
        self.tree
            .univalent()
            .iter()
            .zip(&self.positions)
            .map(|((_, l), p)| {
                let sites = &per[l];
                (l.clone(), sites.binary_search(p).expect("present"), sites.len())
            })
            .collect()
    }
}

/// AS class of an attached tree: a canonical diagram whose labels carry the
/// attachment rank, `name@rank`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CanonicalAttached(CanonicalDiagram);

impl CanonicalAttached {
    pub fn inner(&self) -> &CanonicalDiagram {
        &self.0
    }

    /// The orbit representative as an attached tree with sites `0..k`.
    pub fn to_attached_tree(&self) -> AttachedTree {
        from_ranked(self.0.representative())
    }

    pub fn vassiliev_degree(&self) -> usize {
        self.0.vassiliev_degree()
    }
}

impl PartialOrd for CanonicalAttached {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CanonicalAttached {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0)
    }
}

impl fmt::Debug for CanonicalAttached {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalAttached({})", self.describe())
    }
}

impl Generator for CanonicalAttached {
    fn is_two_torsion(&self) -> bool {
        self.0.is_two_torsion()
    }

    fn describe(&self) -> String {
        crate::notation::format_diagram(self.0.representative())
    }
}

fn ranked_label(comp: &Label, rank: usize) -> Label {
    Label::raw(format!("{comp}@{rank}"))
}

fn split_ranked(l: &Label) -> (Label, i64) {
    let (c, r) = l.as_str().rsplit_once('@').expect("ranked label");
    (Label::raw(c), r.parse().expect("rank"))
}

fn from_ranked(d: &Diagram) -> AttachedTree {
    let positions = d.univalent().iter().map(|(_, l)| split_ranked(l).1).collect();
    let tree = d.relabel(|l| split_ranked(l).0);
    AttachedTree { tree, positions }
}

/// Canonical key of an attached tree. Sites are replaced by their rank along
/// the component; on circles every basepoint rotation is tried and the least
/// key wins.
pub fn canonicalize_attached(t: &AttachedTree, skel: &Skeleton) -> Result<(CanonicalAttached, Sign)> {
    let ranks = t.ranks();
    let mut circles: Vec<(Label, usize)> = Vec::new();
    for (l, _, k) in &ranks {
        match skel.kind_of(l) {
            None => return Err(Error::Skeleton(format!("component {l} is not in the skeleton"))),
            Some(ComponentKind::Circle) => {
                if !circles.iter().any(|(c, _)| c == l) {
                    circles.push((l.clone(), *k));
                }
            }
            Some(ComponentKind::Segment) => {}
        }
    }
    let mut shift = vec![0usize; circles.len()];
    let mut best: Option<(CanonicalDiagram, Sign, bool)> = None;
    loop {
        let mut leg = 0;
        let d = t.tree.relabel(|l| {
            let (_, r, k) = &ranks[leg];
            leg += 1;
            let r = match circles.iter().position(|(c, _)| c == l) {
                Some(ci) => (r + shift[ci]) % k,
                None => *r,
            };
            ranked_label(l, r)
        });
        let (key, sign) = canonicalize(&d)?;
        best = Some(match best {
            None => (key, sign, false),
            Some((bk, bs, tor)) => match key.cmp(&bk) {
                Ordering::Less => (key, sign, false),
                Ordering::Equal => (bk, bs, tor || bs != sign),
                Ordering::Greater => (bk, bs, tor),
            },
        });
        // next rotation vector
        let mut i = 0;
        while i < shift.len() {
            shift[i] += 1;
            if shift[i] < circles[i].1 {
                break;
            }
            shift[i] = 0;
            i += 1;
        }
        if i == shift.len() {
            break;
        }
    }
    let (key, sign, rotation_torsion) = best.expect("one rotation at least");
    let key = if rotation_torsion && key.parity() == Parity::Free { key.into_two_torsion() } else { key };
    Ok((CanonicalAttached(key), sign))
}

impl AttachedElement {
    pub fn from_attached(t: &AttachedTree, skel: &Skeleton) -> Result<AttachedElement> {
        let (k, s) = canonicalize_attached(t, skel)?;
        Ok(AttachedElement::from_term(k, s.to_i64()))
    }
}

/// Forget the sites and keep component names as labels.
pub fn pull_off(e: &AttachedElement, skel: &Skeleton) -> Result<Element> {
    let mut out = Element::zero();
    for (k, c) in e.terms() {
        let t = k.to_attached_tree();
        for (_, l) in t.tree().univalent() {
            if skel.kind_of(l).is_none() {
                return Err(Error::Skeleton(format!("component {l} is not in the skeleton")));
            }
        }
        out.add_diagram(t.tree(), c)?;
    }
    Ok(out)
}

/// IHX relators among attached trees, with every site held fixed.
pub fn attached_ihx_relations(basis: &[CanonicalAttached], skel: &Skeleton) -> Result<RelationSet<CanonicalAttached>> {
    let mut rows = Vec::new();
    for k in basis {
        let rep = k.inner().representative();
        for e in internal_edges(rep) {
            let mut row = AttachedElement::zero();
            for (term, coeff) in ihx_terms(rep, e)?.iter().zip([1i64, -1, 1]) {
                if let Some(d) = term {
                    let (key, s) = canonicalize_attached(&from_ranked(d), skel)?;
                    row.add_term(key, BigInt::from(coeff * s.to_i64()));
                }
            }
            rows.push(row);
        }
    }
    Ok(RelationSet::new(basis, rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::label;
    use crate::notation::parse_rooted_tree;

    fn attached(bracket: &str, root: &str, positions: Vec<i64>) -> AttachedTree {
        let d = Diagram::from_rooted(&parse_rooted_tree(bracket).unwrap(), label(root));
        AttachedTree::new(d, positions).unwrap()
    }

    #[test]
    fn reversal_negates() {
        let skel = Skeleton::segments(3);
        let t = attached("[1,2]", "3", vec![5, 7, 1]);
        let r = AttachedTree::new(t.tree().reverse_vertex(0), t.positions().to_vec()).unwrap();
        let (k1, s1) = canonicalize_attached(&t, &skel).unwrap();
        let (k2, s2) = canonicalize_attached(&r, &skel).unwrap();
        assert_eq!(k1, k2);
        assert_eq!(s1, -s2);
    }

    #[test]
    fn leg_order_matters() {
        let skel = Skeleton::segments(2);
        let a = attached("[1,1]", "2", vec![0, 1, 0]);
        let b = attached("[1,1]", "2", vec![1, 0, 0]);
        let (ka, sa) = canonicalize_attached(&a, &skel).unwrap();
        let (kb, sb) = canonicalize_attached(&b, &skel).unwrap();
        // the same unordered tree, reached by swapping the legs at the vertex
        assert_eq!(ka, kb);
        assert_eq!(sa, -sb);
        assert!(!ka.is_two_torsion());
        // with two legs on strand 1 hanging from different vertices the order is visible
        let c = attached("[[1,2],1]", "2", vec![0, 0, 1, 1]);
        let d = attached("[[1,2],1]", "2", vec![1, 0, 0, 1]);
        assert_ne!(canonicalize_attached(&c, &skel).unwrap().0, canonicalize_attached(&d, &skel).unwrap().0);
    }

    #[test]
    fn pull_off_forgets_order() {
        let skel = Skeleton::segments(2);
        let c = attached("[[1,2],1]", "2", vec![0, 0, 1, 1]);
        let d = attached("[[1,2],1]", "2", vec![1, 0, 0, 1]);
        let ec = AttachedElement::from_attached(&c, &skel).unwrap();
        let ed = AttachedElement::from_attached(&d, &skel).unwrap();
        assert_ne!(ec, ed);
        assert_eq!(pull_off(&ec, &skel).unwrap(), pull_off(&ed, &skel).unwrap());
        assert!(pull_off(&AttachedElement::zero(), &skel).unwrap().is_zero());
    }

    #[test]
    fn duplicate_sites_rejected() {
        let d = Diagram::from_rooted(&parse_rooted_tree("[1,1]").unwrap(), label("2"));
        assert!(AttachedTree::new(d, vec![3, 3, 0]).is_err());
    }

    #[test]
    fn circle_rotation() {
        let skel = Skeleton::new(vec![(label("c"), ComponentKind::Circle), (label("s"), ComponentKind::Segment)]).unwrap();
        let a = attached("[[c,s],c]", "c", vec![0, 0, 1, 2]);
        let b = attached("[[c,s],c]", "c", vec![1, 0, 2, 0]);
        assert_eq!(canonicalize_attached(&a, &skel).unwrap(), canonicalize_attached(&b, &skel).unwrap());
        assert!(canonicalize_attached(&a, &Skeleton::segments(1)).is_err());
    }
}
