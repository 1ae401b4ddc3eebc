//! Combinatorial grope cobordisms and their images in the diagram groups.
//!
//! Every component is kept in genus one normal form: a list of branches,
//! each a rooted binary tree whose internal nodes are genus one stages and
//! whose leaves are tips. A node `[A,B]` is oriented `(A, B, up)`; any other
//! orientation is folded into the branch sign.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::diagram::{Diagram, Label, Sign};
use crate::element::{AttachedElement, Element};
use crate::error::{Error, Result};
use crate::skeleton::{canonicalize_attached, AttachedTree, Skeleton};
use crate::tree::RootedTree;

pub type TipId = Label;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Branch {
    pub tree: RootedTree<TipId>,
    pub sign: Sign,
}

/// One grope component: its boundary meets skeleton component `root` at
/// `root_site`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GropeTree {
    pub root: Label,
    pub root_site: i64,
    pub branches: Vec<Branch>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum GropeClass {
    Finite(usize),
    /// Genus zero: class `n` for every `n`.
    Unbounded,
}

impl fmt::Display for GropeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GropeClass::Finite(n) => write!(f, "{n}"),
            GropeClass::Unbounded => f.write_str("inf"),
        }
    }
}

/// Least Vassiliev degree over the branch trees (root included).
pub fn grope_class(g: &GropeTree) -> GropeClass {
    g.branches.iter().map(|b| b.tree.leaf_count()).min().map_or(GropeClass::Unbounded, GropeClass::Finite)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CapIntersection {
    pub component: Label,
    pub site: i64,
    pub sign: Sign,
}

pub type CapData = Vec<CapIntersection>;

/// Linking numbers of tips with each other and with skeleton components.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LinkTable {
    tips: BTreeMap<(TipId, TipId), i64>,
    comps: BTreeMap<(TipId, Label), i64>,
}

fn ordered(a: &TipId, b: &TipId) -> (TipId, TipId) {
    if a <= b {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    }
}

impl LinkTable {
    pub fn new() -> LinkTable {
        LinkTable::default()
    }

    pub fn tip(&self, a: &TipId, b: &TipId) -> i64 {
        if a == b {
            return 0;
        }
        self.tips.get(&ordered(a, b)).copied().unwrap_or(0)
    }

    pub fn comp(&self, t: &TipId, x: &Label) -> i64 {
        self.comps.get(&(t.clone(), x.clone())).copied().unwrap_or(0)
    }

    pub fn set_tip(&mut self, a: &TipId, b: &TipId, v: i64) {
        if a == b {
            return;
        }
        let k = ordered(a, b);
        if v == 0 {
            self.tips.remove(&k);
        } else {
            self.tips.insert(k, v);
        }
    }

    pub fn set_comp(&mut self, t: &TipId, x: &Label, v: i64) {
        let k = (t.clone(), x.clone());
        if v == 0 {
            self.comps.remove(&k);
        } else {
            self.comps.insert(k, v);
        }
    }

    pub fn add_tip(&mut self, a: &TipId, b: &TipId, v: i64) {
        self.set_tip(a, b, self.tip(a, b) + v);
    }

    pub fn add_comp(&mut self, t: &TipId, x: &Label, v: i64) {
        self.set_comp(t, x, self.comp(t, x) + v);
    }

    /// Nonzero tip-tip entries, each unordered pair once.
    pub fn tip_entries(&self) -> impl Iterator<Item = (&TipId, &TipId, i64)> {
        self.tips.iter().map(|((a, b), v)| (a, b, *v))
    }

    pub fn comp_entries(&self) -> impl Iterator<Item = (&TipId, &Label, i64)> {
        self.comps.iter().map(|((t, x), v)| (t, x, *v))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GropeEncoding {
    skeleton: Skeleton,
    components: Vec<GropeTree>,
    links: LinkTable,
    capped: bool,
    caps: BTreeMap<TipId, CapData>,
}

impl GropeEncoding {
    pub fn new(
        skeleton: Skeleton,
        components: Vec<GropeTree>,
        links: LinkTable,
        capped: bool,
        caps: BTreeMap<TipId, CapData>,
    ) -> Result<GropeEncoding> {
        let g = GropeEncoding { skeleton, components, links, capped, caps };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<()> {
        let known = |x: &Label| self.skeleton.kind_of(x).is_some();
        let mut tips = BTreeSet::new();
        for c in &self.components {
            if !known(&c.root) {
                return Err(Error::Grope(format!("root component {} is not in the skeleton", c.root)));
            }
            for b in &c.branches {
                if b.tree.is_leaf() {
                    return Err(Error::Grope("a branch needs at least one stage".into()));
                }
                for t in b.tree.leaves() {
                    if !tips.insert(t.clone()) {
                        return Err(Error::Grope(format!("tip {t} occurs twice")));
                    }
                }
            }
        }
        for (a, b, _) in self.links.tip_entries() {
            if !tips.contains(a) || !tips.contains(b) {
                return Err(Error::Grope(format!("link entry {a}-{b} names an unknown tip")));
            }
        }
        for (t, x, _) in self.links.comp_entries() {
            if !tips.contains(t) || !known(x) {
                return Err(Error::Grope(format!("link entry {t}-{x} names an unknown tip or component")));
            }
        }
        for (t, cap) in &self.caps {
            if !tips.contains(t) {
                return Err(Error::Grope(format!("cap on unknown tip {t}")));
            }
            if let Some(i) = cap.iter().find(|i| !known(&i.component)) {
                return Err(Error::Grope(format!("cap of {t} meets unknown component {}", i.component)));
            }
        }
        if self.capped {
            if let Some(t) = tips.iter().find(|t| self.caps.get(*t).is_none_or(|c| c.is_empty())) {
                return Err(Error::Grope(format!("tip {t} has no cap")));
            }
        }
        Ok(())
    }

    pub fn skeleton(&self) -> &Skeleton {
        &self.skeleton
    }

    pub fn components(&self) -> &[GropeTree] {
        &self.components
    }

    pub fn links(&self) -> &LinkTable {
        &self.links
    }

    pub fn capped(&self) -> bool {
        self.capped
    }

    pub fn caps(&self) -> &BTreeMap<TipId, CapData> {
        &self.caps
    }

    pub fn cap(&self, tip: &TipId) -> Result<&CapData> {
        self.caps.get(tip).filter(|c| !c.is_empty()).ok_or_else(|| Error::Grope(format!("tip {tip} has no cap")))
    }

    pub fn class(&self) -> GropeClass {
        self.components.iter().map(grope_class).min().unwrap_or(GropeClass::Unbounded)
    }

    pub fn with_links(&self, links: LinkTable) -> Result<GropeEncoding> {
        GropeEncoding::new(self.skeleton.clone(), self.components.clone(), links, self.capped, self.caps.clone())
    }

    pub fn with_components(&self, components: Vec<GropeTree>) -> Result<GropeEncoding> {
        GropeEncoding::new(self.skeleton.clone(), components, self.links.clone(), self.capped, self.caps.clone())
    }

    /// Forget the caps, keeping only the linking they induce: a tip links a
    /// component by the signed count of its cap intersections.
    pub fn uncapped_from_caps(&self) -> GropeEncoding {
        let mut links = LinkTable::new();
        for (t, cap) in &self.caps {
            for i in cap {
                links.add_comp(t, &i.component, i.sign.to_i64());
            }
        }
        GropeEncoding { skeleton: self.skeleton.clone(), components: self.components.clone(), links, capped: false, caps: BTreeMap::new() }
    }
}

/// The attached-tree sum: every branch, every choice of one intersection
/// per cap, signed by the branch sign times the chosen intersection signs.
pub fn psi_capped(g: &GropeEncoding) -> Result<AttachedElement> {
    if !g.capped() {
        return Err(Error::Grope("psi_capped needs a capped encoding".into()));
    }
    let mut out = AttachedElement::zero();
    for comp in g.components() {
        for branch in &comp.branches {
            let tips = branch.tree.leaves();
            let caps: Vec<&CapData> = tips.iter().map(|t| g.cap(t)).collect::<Result<_>>()?;
            let mut choice = vec![0usize; tips.len()];
            loop {
                let mut sign = branch.sign;
                let mut positions = Vec::with_capacity(tips.len() + 1);
                let mut k = 0;
                let tree = Diagram::from_rooted_with(
                    &branch.tree,
                    |_| {
                        let hit = &caps[k][choice[k]];
                        k += 1;
                        sign = sign * hit.sign;
                        positions.push(hit.site);
                        hit.component.clone()
                    },
                    comp.root.clone(),
                );
                positions.push(comp.root_site);
                let t = AttachedTree::new(tree.with_sign(sign), positions)?;
                let (key, s) = canonicalize_attached(&t, g.skeleton())?;
                out.add_term(key, BigInt::from(s.to_i64()));
                if !advance(&mut choice, |i| caps[i].len()) {
                    break;
                }
            }
        }
    }
    Ok(out)
}

/// Odometer step over mixed radices; false once every choice was visited.
fn advance(choice: &mut [usize], radix: impl Fn(usize) -> usize) -> bool {
    for (i, c) in choice.iter_mut().enumerate() {
        *c += 1;
        if *c < radix(i) {
            return true;
        }
        *c = 0;
    }
    false
}

/// What a leaf `L_i` of a labeled tree points at.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum LeafTarget {
    Component(Label),
    Tip(TipId),
}

impl fmt::Display for LeafTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LeafTarget::Component(x) => write!(f, "{x}"),
            LeafTarget::Tip(t) => write!(f, "{t}"),
        }
    }
}

/// A leaf `(L_i, target)`: the tip the leaf stands for and its label.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct TreeLeaf {
    pub tip: TipId,
    pub target: LeafTarget,
}

impl fmt::Display for TreeLeaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.tip, self.target)
    }
}

/// One term of the multilinear expansion of a branch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledTree {
    pub tree: RootedTree<TreeLeaf>,
    pub root: Label,
    pub coefficient: BigInt,
}

impl fmt::Display for LabeledTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}@{}", self.coefficient, self.tree, self.root)
    }
}

/// Expand every leaf over the components and the non-dual tips of its own
/// tree that it links. The coefficient carries the branch sign and the
/// component linking numbers; tip-tip weights are applied when matching.
pub fn bracket_expand(g: &GropeTree, links: &LinkTable, skel: &Skeleton) -> Vec<LabeledTree> {
    let mut out = Vec::new();
    for branch in &g.branches {
        let tips: Vec<&TipId> = branch.tree.leaves();
        let options: Vec<Vec<(LeafTarget, i64)>> = tips
            .iter()
            .map(|&ti| {
                let mut opts: Vec<(LeafTarget, i64)> = skel
                    .components()
                    .iter()
                    .map(|(x, _)| (LeafTarget::Component(x.clone()), links.comp(ti, x)))
                    .filter(|(_, v)| *v != 0)
                    .collect();
                for &tj in &tips {
                    if tj != ti && !branch.tree.are_siblings(ti, tj) && links.tip(ti, tj) != 0 {
                        opts.push((LeafTarget::Tip(tj.clone()), 1));
                    }
                }
                opts
            })
            .collect();
        if options.iter().any(|o| o.is_empty()) {
            continue;
        }
        let mut choice = vec![0usize; tips.len()];
        loop {
            let mut coefficient = BigInt::from(branch.sign.to_i64());
            let mut k = 0;
            let tree = branch.tree.map(&mut |tip: &TipId| {
                let (target, w) = &options[k][choice[k]];
                k += 1;
                coefficient *= *w;
                TreeLeaf { tip: tip.clone(), target: target.clone() }
            });
            out.push(LabeledTree { tree, root: g.root.clone(), coefficient });
            if !advance(&mut choice, |i| options[i].len()) {
                break;
            }
        }
    }
    out
}

/// Sum over matchings of the tip-labeled leaves. A leaf `(L_i, T_j)` can
/// only pair with the leaf `(L_j, T_i)`, so there is at most one matching.
/// Matched pairs are glued into edges of weight `lk(T_i, T_j)`.
pub fn matching_bracket(t: &LabeledTree, links: &LinkTable) -> Result<Element> {
    let leaves = t.tree.leaves();
    let mut pairs = Vec::new();
    let mut coefficient = t.coefficient.clone();
    for (i, leaf) in leaves.iter().enumerate() {
        let LeafTarget::Tip(tj) = &leaf.target else { continue };
        let mate = leaves.iter().position(|m| &m.tip == tj && m.target == LeafTarget::Tip(leaf.tip.clone()));
        match mate {
            None => return Ok(Element::zero()),
            Some(k) if i < k => {
                coefficient *= links.tip(&leaf.tip, tj);
                pairs.push((i, k));
            }
            Some(_) => {}
        }
    }
    if coefficient.is_zero() {
        return Ok(Element::zero());
    }
    let mut d = Diagram::from_rooted_with(
        &t.tree,
        |leaf| match &leaf.target {
            LeafTarget::Component(x) => x.clone(),
            LeafTarget::Tip(_) => Label::raw(format!("~{}", leaf.tip)),
        },
        t.root.clone(),
    );
    let halves: Vec<_> = d.univalent().iter().map(|(h, _)| *h).collect();
    for (i, k) in pairs {
        match d.glue_leaves(halves[i], halves[k])? {
            Some(next) => d = next,
            None => return Ok(Element::zero()),
        }
    }
    let mut e = Element::zero();
    e.add_diagram(&d, &coefficient)?;
    Ok(e)
}

/// The uncapped map: matchings of the multilinear expansion of every branch.
pub fn psi_uncapped(g: &GropeEncoding) -> Result<Element> {
    let mut out = Element::zero();
    for comp in g.components() {
        for t in bracket_expand(comp, g.links(), g.skeleton()) {
            out = out.add(&matching_bracket(&t, g.links())?);
        }
    }
    Ok(out)
}

/// [`psi_uncapped`] for an encoding that must have class at least `n`.
pub fn psi_uncapped_graded(g: &GropeEncoding, n: usize) -> Result<Element> {
    if let GropeClass::Finite(class) = g.class() {
        if class < n {
            return Err(Error::ClassViolation { class, degree: n });
        }
    }
    psi_uncapped(g)
}

/// A top stage of genus `m` in normal form: `m` dual tip pairs
/// `(alpha_i, beta_i)`, each the two leaves of one node, in `m` branches of
/// one component that agree away from the stage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopStage {
    pub pairs: Vec<(TipId, TipId)>,
}

/// A basis curve and its image as `(source, coefficient)` pairs.
type CurveImage = (usize, Vec<(usize, i64)>);

/// Generators of `Sp(2m, Z)` acting on a top stage basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymplecticGenerator {
    Identity,
    /// `alpha_i -> alpha_i + beta_i`
    AlphaPlusBeta(usize),
    /// `beta_i -> alpha_i + beta_i`
    BetaPlusAlpha(usize),
    /// `alpha_i -> alpha_i + alpha_j`, `beta_j -> beta_j - beta_i`
    AlphaAlpha(usize, usize),
    /// `alpha_i -> alpha_i + beta_j`, `alpha_j -> alpha_j + beta_i`
    AlphaBeta(usize, usize),
    /// `beta_i -> beta_i + alpha_j`, `beta_j -> beta_j + alpha_i`
    BetaAlpha(usize, usize),
    /// `beta_i -> beta_i + beta_j`, `alpha_j -> alpha_j - alpha_i`
    BetaBeta(usize, usize),
}

impl SymplecticGenerator {
    /// All generators for genus `m`.
    pub fn all(m: usize) -> Vec<SymplecticGenerator> {
        use SymplecticGenerator::*;
        let mut out = vec![Identity];
        for i in 0..m {
            out.push(AlphaPlusBeta(i));
            out.push(BetaPlusAlpha(i));
            for j in (0..m).filter(|&j| j != i) {
                out.extend([AlphaAlpha(i, j), AlphaBeta(i, j), BetaAlpha(i, j), BetaBeta(i, j)]);
            }
        }
        out
    }

    /// `(target, [(source, coefficient)])` with `0..m` the alphas and
    /// `m..2m` the betas; untouched basis curves are omitted.
    fn action(self, m: usize) -> Result<Vec<CurveImage>> {
        use SymplecticGenerator::*;
        let (a, b) = (|i: usize| i, |i: usize| m + i);
        let check = |i: usize, j: Option<usize>| {
            if i >= m || j.is_some_and(|j| j >= m || j == i) {
                Err(Error::Grope(format!("invalid symplectic indices for genus {m}")))
            } else {
                Ok(())
            }
        };
        Ok(match self {
            Identity => vec![],
            AlphaPlusBeta(i) => {
                check(i, None)?;
                vec![(a(i), vec![(a(i), 1), (b(i), 1)])]
            }
            BetaPlusAlpha(i) => {
                check(i, None)?;
                vec![(b(i), vec![(a(i), 1), (b(i), 1)])]
            }
            AlphaAlpha(i, j) => {
                check(i, Some(j))?;
                vec![(a(i), vec![(a(i), 1), (a(j), 1)]), (b(j), vec![(b(j), 1), (b(i), -1)])]
            }
            AlphaBeta(i, j) => {
                check(i, Some(j))?;
                vec![(a(i), vec![(a(i), 1), (b(j), 1)]), (a(j), vec![(a(j), 1), (b(i), 1)])]
            }
            BetaAlpha(i, j) => {
                check(i, Some(j))?;
                vec![(b(i), vec![(b(i), 1), (a(j), 1)]), (b(j), vec![(b(j), 1), (a(i), 1)])]
            }
            BetaBeta(i, j) => {
                check(i, Some(j))?;
                vec![(b(i), vec![(b(i), 1), (b(j), 1)]), (a(j), vec![(a(j), 1), (a(i), -1)])]
            }
        })
    }
}

/// Path of every leaf: `false` for left, `true` for right.
fn leaf_paths(t: &RootedTree<TipId>) -> Vec<(Vec<bool>, TipId)> {
    fn go(t: &RootedTree<TipId>, path: &mut Vec<bool>, out: &mut Vec<(Vec<bool>, TipId)>) {
        match t {
            RootedTree::Leaf(l) => out.push((path.clone(), l.clone())),
            RootedTree::Node(a, b) => {
                path.push(false);
                go(a, path, out);
                path.pop();
                path.push(true);
                go(b, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(t, &mut Vec::new(), &mut out);
    out
}

fn shape(t: &RootedTree<TipId>) -> RootedTree<()> {
    t.map(&mut |_| ())
}

struct StageLayout {
    component: usize,
    /// Branch of pair `i`.
    branches: Vec<usize>,
    /// Paths of the non-stage leaves, shared by all branches of the stage.
    others: Vec<Vec<bool>>,
}

fn stage_layout(g: &GropeEncoding, stage: &TopStage) -> Result<StageLayout> {
    let bad = |m: String| Error::Grope(format!("invalid top stage: {m}"));
    if stage.pairs.is_empty() {
        return Err(bad("no pairs".into()));
    }
    let mut component = None;
    let mut branches = Vec::new();
    let mut slot: Option<Vec<bool>> = None;
    for (alpha, beta) in &stage.pairs {
        let found = g
            .components()
            .iter()
            .enumerate()
            .find_map(|(ci, c)| c.branches.iter().position(|b| b.tree.are_siblings(alpha, beta)).map(|bi| (ci, bi)));
        let Some((ci, bi)) = found else {
            return Err(bad(format!("{alpha} and {beta} are not dual tips")));
        };
        if component.is_some_and(|c| c != ci) || branches.contains(&bi) {
            return Err(bad("pairs must lie in distinct branches of one component".into()));
        }
        component = Some(ci);
        branches.push(bi);
        let paths = leaf_paths(&g.components()[ci].branches[bi].tree);
        let alpha_path = paths.iter().find(|(_, t)| t == alpha).map(|(p, _)| p.clone()).expect("leaf");
        if alpha_path.last() != Some(&false) {
            return Err(bad(format!("{alpha} must be the left tip of its stage")));
        }
        let parent = alpha_path[..alpha_path.len() - 1].to_vec();
        if slot.as_ref().is_some_and(|s| *s != parent) {
            return Err(bad("stage sits at different places in its branches".into()));
        }
        slot = Some(parent);
    }
    let ci = component.expect("nonempty");
    let trees: Vec<&RootedTree<TipId>> = branches.iter().map(|&bi| &g.components()[ci].branches[bi].tree).collect();
    if trees.iter().any(|t| shape(t) != shape(trees[0])) {
        return Err(bad("branches of one stage must have the same shape".into()));
    }
    let slot = slot.expect("nonempty");
    let others =
        leaf_paths(trees[0]).into_iter().map(|(p, _)| p).filter(|p| !(p.len() == slot.len() + 1 && p.starts_with(&slot))).collect();
    Ok(StageLayout { component: ci, branches, others })
}

/// Change the symplectic basis of a top stage. Linking rows of the stage
/// tips against the components and the other tips of their own branch are
/// transformed linearly; the branches of a stage correspond leaf by leaf.
pub fn symplectic_transform(g: &GropeEncoding, stage: &TopStage, gen: SymplecticGenerator) -> Result<GropeEncoding> {
    let layout = stage_layout(g, stage)?;
    let m = stage.pairs.len();
    let comp = &g.components()[layout.component];
    let tip_at = |bi: usize, path: &[bool]| -> TipId {
        leaf_paths(&comp.branches[layout.branches[bi]].tree).into_iter().find(|(p, _)| p == path).map(|(_, t)| t).expect("same shape")
    };
    let basis: Vec<(usize, &TipId)> = (0..m).map(|i| (i, &stage.pairs[i].0)).chain((0..m).map(|i| (i, &stage.pairs[i].1))).collect();
    let names = g.skeleton().names();
    // row of basis curve `s`: components first, then the shared leaf paths
    let row = |s: usize| -> Vec<i64> {
        let (bi, t) = basis[s];
        names.iter().map(|x| g.links().comp(t, x)).chain(layout.others.iter().map(|p| g.links().tip(t, &tip_at(bi, p)))).collect()
    };
    let mut links = g.links().clone();
    for (target, sources) in gen.action(m)? {
        let mut new = vec![0i64; names.len() + layout.others.len()];
        for (s, c) in sources {
            for (x, v) in new.iter_mut().zip(row(s)) {
                *x += c * v;
            }
        }
        let (bi, t) = basis[target];
        for (x, v) in names.iter().zip(&new) {
            links.set_comp(t, x, *v);
        }
        for (p, v) in layout.others.iter().zip(&new[names.len()..]) {
            links.set_tip(t, &tip_at(bi, p), *v);
        }
    }
    g.with_links(links)
}

/// Linking numbers of one tip curve.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LinkRow {
    pub comps: BTreeMap<Label, i64>,
    pub tips: BTreeMap<TipId, i64>,
}

/// Change a non-top-stage tip by `k` times a curve that links every
/// component and every other tip of its own tree trivially.
pub fn add_linking_trivial_row(g: &GropeEncoding, tip: &TipId, row: &LinkRow, k: i64) -> Result<GropeEncoding> {
    let tree = g
        .components()
        .iter()
        .flat_map(|c| &c.branches)
        .map(|b| &b.tree)
        .find(|t| t.contains_leaf(tip))
        .ok_or_else(|| Error::Grope(format!("unknown tip {tip}")))?;
    let top = tree.leaves().into_iter().any(|o| tree.are_siblings(tip, o));
    if top {
        return Err(Error::Grope(format!("{tip} lies on a top stage")));
    }
    if row.comps.values().any(|v| *v != 0) || row.tips.iter().any(|(t, v)| *v != 0 && tree.contains_leaf(t)) {
        return Err(Error::Grope("row is not linking-trivial".into()));
    }
    let mut links = g.links().clone();
    for (t, v) in &row.tips {
        links.add_tip(tip, t, k * v);
    }
    g.with_links(links)
}
