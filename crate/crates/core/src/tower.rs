//! Combinatorial Whitney towers: bracket-labeled disks, signed unpaired
//! intersection points and their trees.

use std::collections::BTreeSet;

use crate::diagram::{Diagram, GeometricForest, Label, Sign};
use crate::element::Element;
use crate::error::{Error, Result};
use crate::grope::GropeEncoding;
use crate::tree::RootedTree;

/// A base surface `i` or a Whitney disk `(I,J)`.
pub type Bracket = RootedTree<Label>;

/// Order of a surface: 0 for base surfaces, `order(I)+order(J)+1` for disks.
pub fn bracket_order(b: &Bracket) -> usize {
    b.internal_count()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnpairedPoint {
    pub between: (Bracket, Bracket),
    pub sign: Sign,
}

impl UnpairedPoint {
    pub fn new(a: Bracket, b: Bracket, sign: Sign) -> UnpairedPoint {
        UnpairedPoint { between: (a, b), sign }
    }

    pub fn order(&self) -> usize {
        bracket_order(&self.between.0) + bracket_order(&self.between.1) + 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerEncoding {
    labels: Vec<Label>,
    disks: BTreeSet<Bracket>,
    points: Vec<UnpairedPoint>,
}

impl TowerEncoding {
    pub fn new(labels: Vec<Label>, disks: BTreeSet<Bracket>, points: Vec<UnpairedPoint>) -> Result<TowerEncoding> {
        let t = TowerEncoding { labels, disks, points };
        t.validate()?;
        Ok(t)
    }

    /// Base surfaces `1..=l`.
    pub fn with_count(l: usize, disks: BTreeSet<Bracket>, points: Vec<UnpairedPoint>) -> Result<TowerEncoding> {
        Self::new(crate::spaces::numeric_alphabet(l), disks, points)
    }

    fn validate(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        if !self.labels.iter().all(|l| seen.insert(l)) {
            return Err(Error::Tower("base labels must be distinct".into()));
        }
        for d in &self.disks {
            if d.is_leaf() {
                return Err(Error::Tower(format!("disk {d} is a base surface")));
            }
            self.check_surface(d, true)?;
        }
        for p in &self.points {
            self.check_surface(&p.between.0, false)?;
            self.check_surface(&p.between.1, false)?;
        }
        Ok(())
    }

    fn check_surface(&self, b: &Bracket, is_disk: bool) -> Result<()> {
        for l in b.leaves() {
            if !self.labels.contains(l) {
                return Err(Error::Tower(format!("unknown base surface {l}")));
            }
        }
        for s in b.subtrees() {
            let own = is_disk && std::ptr::eq(s, b);
            if !s.is_leaf() && !own && !self.disks.contains(s) {
                return Err(Error::Tower(format!("Whitney disk {s} is missing")));
            }
        }
        Ok(())
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn disks(&self) -> &BTreeSet<Bracket> {
        &self.disks
    }

    pub fn points(&self) -> &[UnpairedPoint] {
        &self.points
    }

    /// One less than the least point order; `None` for a clean tower.
    pub fn order(&self) -> Option<usize> {
        self.points.iter().map(|p| p.order() - 1).min()
    }

    /// Add a point together with any Whitney disks it needs.
    pub fn push_point(&mut self, p: UnpairedPoint) -> Result<()> {
        for b in [&p.between.0, &p.between.1] {
            for s in b.subtrees() {
                if !s.is_leaf() {
                    self.disks.insert(s.clone());
                }
            }
        }
        self.points.push(p);
        self.validate()
    }
}

/// The tree of an unpaired point: the rooted trees of both surfaces joined
/// at their roots. A disk `(A,B)` is a vertex with cyclic order `(A, B, up)`.
pub fn tree_of_point(p: &UnpairedPoint) -> (Sign, Diagram) {
    let d = Diagram::join_rooted(&p.between.0, &p.between.1, |l| l.clone());
    (p.sign, d)
}

/// All order-`n` point trees, term by term.
pub fn intersection_forest(t: &TowerEncoding, n: usize) -> Result<GeometricForest> {
    t.points
        .iter()
        .map(|p| {
            if p.order() != n {
                return Err(Error::MixedOrder { expected: n, found: p.order() });
            }
            Ok(tree_of_point(p))
        })
        .collect()
}

/// The intersection forest summed in the AS group.
pub fn tau_hat(t: &TowerEncoding, n: usize) -> Result<Element> {
    Element::from_forest(&intersection_forest(t, n)?)
}

/// Sum of the point trees of every order, each in its own degree.
pub fn tau_hat_total(t: &TowerEncoding) -> Result<Element> {
    let forest: GeometricForest = t.points.iter().map(tree_of_point).collect();
    Element::from_forest(&forest)
}

/// The three points realizing `I - H + X` with `I = [[a,b],c]` against `d`.
pub fn ihx_points(a: &Bracket, b: &Bracket, c: &Bracket, d: &Bracket) -> [UnpairedPoint; 3] {
    let n = |x: &Bracket, y: &Bracket| RootedTree::node(x.clone(), y.clone());
    [
        UnpairedPoint::new(d.clone(), n(&n(a, b), c), Sign::Plus),
        UnpairedPoint::new(d.clone(), n(a, &n(b, c)), Sign::Minus),
        UnpairedPoint::new(d.clone(), n(&n(c, a), b), Sign::Plus),
    ]
}

/// Push a capped grope into the ball and surger it to a tower: every branch
/// with its single cap intersections becomes one unpaired point between
/// the root surface and the bracket of the capped tips.
pub fn push_in(g: &GropeEncoding) -> Result<TowerEncoding> {
    if !g.capped() {
        return Err(Error::Tower("push-in needs a capped grope".into()));
    }
    let mut tower = TowerEncoding::new(g.skeleton().names(), BTreeSet::new(), Vec::new())?;
    for comp in g.components() {
        for branch in &comp.branches {
            let mut sign = branch.sign;
            let tree = branch.tree.try_map(&mut |tip: &Label| {
                let cap = g.cap(tip)?;
                if cap.len() != 1 {
                    return Err(Error::Tower(format!("cap of {tip} has {} intersections; split it first", cap.len())));
                }
                sign = sign * cap[0].sign;
                Ok(cap[0].component.clone())
            })?;
            tower.push_point(UnpairedPoint::new(RootedTree::leaf(comp.root.clone()), tree, sign))?;
        }
    }
    Ok(tower)
}

/// The order 2 tower on four base surfaces with three order 3 points whose
/// trees are `+I`, `-H`, `+X`.
pub fn theorem1_witness() -> TowerEncoding {
    let l = |s: u32| RootedTree::leaf(Label::from(s));
    let n = RootedTree::node;
    let disks: BTreeSet<Bracket> =
        [n(l(3), l(4)), n(l(2), l(4)), n(l(4), l(1)), n(l(2), n(l(3), l(4))), n(l(3), n(l(4), l(1))), n(l(1), n(l(2), l(4)))]
            .into_iter()
            .collect();
    let points = vec![
        UnpairedPoint::new(l(1), n(l(2), n(l(3), l(4))), Sign::Plus),
        UnpairedPoint::new(l(2), n(l(3), n(l(4), l(1))), Sign::Minus),
        UnpairedPoint::new(l(3), n(l(1), n(l(2), l(4))), Sign::Plus),
    ];
    TowerEncoding::with_count(4, disks, points).expect("witness is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::parse_bracket;

    fn b(s: &str) -> Bracket {
        parse_bracket(s).unwrap()
    }

    #[test]
    fn orders() {
        assert_eq!(bracket_order(&b("(2,(3,4))")), 2);
        let w = theorem1_witness();
        assert_eq!(w.order(), Some(2));
        assert!(w.points().iter().all(|p| p.order() == 3));
    }

    #[test]
    fn strut_point() {
        let (s, d) = tree_of_point(&UnpairedPoint::new(b("1"), b("2"), Sign::Minus));
        assert_eq!(s, Sign::Minus);
        assert_eq!(d.vassiliev_degree(), 1);
    }

    #[test]
    fn missing_disk_rejected() {
        let p = UnpairedPoint::new(b("1"), b("(2,(3,4))"), Sign::Plus);
        assert!(TowerEncoding::with_count(4, BTreeSet::new(), vec![p.clone()]).is_err());
        let mut t = TowerEncoding::with_count(4, BTreeSet::new(), vec![]).unwrap();
        t.push_point(p).unwrap();
        assert_eq!(t.disks().len(), 2);
    }

    #[test]
    fn mixed_orders() {
        let mut t = theorem1_witness();
        t.push_point(UnpairedPoint::new(b("1"), b("2"), Sign::Plus)).unwrap();
        assert!(matches!(intersection_forest(&t, 3), Err(Error::MixedOrder { expected: 3, found: 1 })));
    }

    #[test]
    fn clean_tower() {
        let t = TowerEncoding::with_count(3, BTreeSet::new(), vec![]).unwrap();
        assert_eq!(t.order(), None);
        assert!(intersection_forest(&t, 2).unwrap().is_empty());
        assert!(tau_hat(&t, 2).unwrap().is_zero());
    }
}
