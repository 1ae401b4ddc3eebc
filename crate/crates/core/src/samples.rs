//! Seeded random encodings for property checks and benchmarks.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diagram::{Label, Sign};
use crate::grope::{Branch, CapIntersection, GropeEncoding, GropeTree, LinkRow, LinkTable, TipId, TopStage};
use crate::skeleton::Skeleton;
use crate::spaces::numeric_alphabet;
use crate::tower::{ihx_points, Bracket, TowerEncoding, UnpairedPoint};
use crate::tree::RootedTree;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn sign(rng: &mut impl Rng) -> Sign {
    if rng.gen_bool(0.5) {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

fn small(rng: &mut impl Rng) -> i64 {
    [0, 0, 1, -1, 2, -2][rng.gen_range(0..6)]
}

/// Uniformly split binary tree shape with `leaves` leaves.
pub fn random_shape(rng: &mut impl Rng, leaves: usize) -> RootedTree<()> {
    if leaves == 1 {
        return RootedTree::leaf(());
    }
    let left = rng.gen_range(1..leaves);
    RootedTree::node(random_shape(rng, left), random_shape(rng, leaves - left))
}

/// Fill the leaves of a shape left to right.
fn fill<L>(shape: &RootedTree<()>, next: &mut impl FnMut() -> L) -> RootedTree<L> {
    shape.map(&mut |_| next())
}

struct TipNames(usize);

impl TipNames {
    fn fresh(&mut self) -> TipId {
        self.0 += 1;
        Label::raw(format!("T{}", self.0))
    }
}

/// A capped encoding with one intersection per cap and class at most
/// `max_class`, on 2 to 5 segments.
pub fn random_capped_encoding(rng: &mut impl Rng, max_class: usize) -> GropeEncoding {
    let l = rng.gen_range(2..=5);
    let labels = numeric_alphabet(l);
    let mut names = TipNames(0);
    let mut caps = BTreeMap::new();
    let mut components = Vec::new();
    let mut sites: Vec<i64> = (1..=200).collect();
    sites.shuffle(rng);
    for _ in 0..rng.gen_range(1..=2) {
        let root = labels.choose(rng).expect("nonempty").clone();
        let root_site = sites.pop().expect("enough sites");
        let mut branches = Vec::new();
        for _ in 0..rng.gen_range(1..=3) {
            let leaves = rng.gen_range(2..=max_class.max(2));
            let shape = random_shape(rng, leaves);
            let tree = fill(&shape, &mut || names.fresh());
            for t in tree.leaves() {
                let hit = CapIntersection {
                    component: labels.choose(rng).expect("nonempty").clone(),
                    site: sites.pop().expect("enough sites"),
                    sign: sign(rng),
                };
                caps.insert(t.clone(), vec![hit]);
            }
            branches.push(Branch { tree, sign: sign(rng) });
        }
        components.push(GropeTree { root, root_site, branches });
    }
    GropeEncoding::new(Skeleton::segments(l), components, LinkTable::new(), true, caps).expect("well formed")
}

/// An uncapped encoding with a top stage of genus 1 to 3 in normal form.
///
/// The stage sits at the same leaf of `m` copies of one branch shape; the
/// other tips of the copies carry identical linking data, while the stage
/// tips link the components and the rest of their own copy at random.
pub fn random_symplectic_case(rng: &mut impl Rng) -> (GropeEncoding, TopStage) {
    let l = rng.gen_range(2..=4);
    let labels = numeric_alphabet(l);
    let m = rng.gen_range(1..=3);
    let class = rng.gen_range(2..=4);
    let base = random_shape(rng, class - 1);
    let slot = rng.gen_range(0..class - 1);
    let others: Vec<usize> = (0..class - 1).filter(|&i| i != slot).collect();
    let shared_comp: Vec<Vec<i64>> = others.iter().map(|_| labels.iter().map(|_| small(rng)).collect()).collect();
    let shared_tip: Vec<Vec<i64>> = others.iter().map(|_| others.iter().map(|_| small(rng)).collect()).collect();
    let branch_sign = sign(rng);
    let root = labels.choose(rng).expect("nonempty").clone();
    let mut names = TipNames(0);
    let mut links = LinkTable::new();
    let mut branches = Vec::new();
    let mut pairs = Vec::new();
    for _ in 0..m {
        let (alpha, beta) = (names.fresh(), names.fresh());
        let tips: Vec<TipId> = others.iter().map(|_| names.fresh()).collect();
        let mut k = 0;
        let tree = base.map(&mut |_| {
            let i = k;
            k += 1;
            i
        });
        let tree = replace_leaves(&tree, &mut |i| {
            if *i == slot {
                RootedTree::node(RootedTree::leaf(alpha.clone()), RootedTree::leaf(beta.clone()))
            } else {
                RootedTree::leaf(tips[others.iter().position(|o| o == i).expect("other")].clone())
            }
        });
        for (a, t) in tips.iter().enumerate() {
            for (x, v) in labels.iter().zip(&shared_comp[a]) {
                links.set_comp(t, x, *v);
            }
            for (b, u) in tips.iter().enumerate().filter(|(b, _)| *b > a) {
                if !tree.are_siblings(t, u) {
                    links.set_tip(t, u, shared_tip[a][b]);
                }
            }
        }
        for s in [&alpha, &beta] {
            for x in &labels {
                links.set_comp(s, x, small(rng));
            }
            for t in &tips {
                links.set_tip(s, t, small(rng));
            }
        }
        branches.push(Branch { tree, sign: branch_sign });
        pairs.push((alpha, beta));
    }
    let comp = GropeTree { root, root_site: 0, branches };
    let g = GropeEncoding::new(Skeleton::segments(l), vec![comp], links, false, BTreeMap::new()).expect("well formed");
    (g, TopStage { pairs })
}

fn replace_leaves<L, M>(t: &RootedTree<L>, f: &mut impl FnMut(&L) -> RootedTree<M>) -> RootedTree<M> {
    match t {
        RootedTree::Leaf(l) => f(l),
        RootedTree::Node(a, b) => {
            let a = replace_leaves(a, f);
            let b = replace_leaves(b, f);
            RootedTree::node(a, b)
        }
    }
}

/// Tips whose dual is a higher stage, with a random linking-trivial row:
/// nonzero entries only against tips of other branches.
pub fn random_trivial_row(rng: &mut impl Rng, g: &GropeEncoding) -> Option<(TipId, LinkRow)> {
    let trees: Vec<&RootedTree<TipId>> = g.components().iter().flat_map(|c| &c.branches).map(|b| &b.tree).collect();
    let mut candidates = Vec::new();
    for t in &trees {
        for tip in t.leaves() {
            if !t.leaves().into_iter().any(|o| t.are_siblings(tip, o)) {
                candidates.push((tip.clone(), *t));
            }
        }
    }
    let (tip, own) = candidates.choose(rng)?.clone();
    let mut row = LinkRow::default();
    for t in &trees {
        for other in t.leaves() {
            if !own.contains_leaf(other) && rng.gen_bool(0.5) {
                row.tips.insert(other.clone(), rng.gen_range(-3..=3));
            }
        }
    }
    Some((tip, row))
}

/// Uncapped class `n` encoding where some non-dual tips are Hopf linked in
/// pairs and the rest link skeleton components.
pub fn random_matched_encoding(rng: &mut impl Rng, n: usize) -> GropeEncoding {
    let l = rng.gen_range(1..=3);
    let labels = numeric_alphabet(l);
    let mut names = TipNames(0);
    let mut links = LinkTable::new();
    let mut branches = Vec::new();
    for _ in 0..rng.gen_range(1..=2) {
        let shape = random_shape(rng, n);
        let tree = fill(&shape, &mut || names.fresh());
        let mut tips: Vec<TipId> = tree.leaves().into_iter().cloned().collect();
        tips.shuffle(rng);
        let mut free = Vec::new();
        while let Some(a) = tips.pop() {
            let mate = tips.iter().position(|b| !tree.are_siblings(&a, b));
            match mate {
                Some(i) if rng.gen_bool(0.7) => {
                    let b = tips.remove(i);
                    links.set_tip(&a, &b, [1, -1, 2][rng.gen_range(0..3)]);
                }
                _ => free.push(a),
            }
        }
        for t in free {
            for x in &labels {
                if rng.gen_bool(0.6) {
                    links.set_comp(&t, x, [1, -1, 2][rng.gen_range(0..3)]);
                }
            }
        }
        branches.push(Branch { tree, sign: sign(rng) });
    }
    let root = labels.choose(rng).expect("nonempty").clone();
    let comp = GropeTree { root, root_site: 0, branches };
    GropeEncoding::new(Skeleton::segments(l), vec![comp], links, false, BTreeMap::new()).expect("well formed")
}

/// Random bracket with `leaves` base surfaces drawn from `labels`.
pub fn random_bracket(rng: &mut impl Rng, leaves: usize, labels: &[Label]) -> Bracket {
    let shape = random_shape(rng, leaves);
    let mut pick = || labels.choose(rng).expect("nonempty").clone();
    fill(&shape, &mut pick)
}

/// A tower with 1 to 4 unpaired points, all of order `order`.
pub fn random_tower(rng: &mut impl Rng, order: usize, l: usize) -> TowerEncoding {
    let labels = numeric_alphabet(l);
    let mut t = TowerEncoding::new(labels.clone(), Default::default(), vec![]).expect("empty tower");
    for _ in 0..rng.gen_range(1..=4) {
        // order + 1 base surfaces in total, split between the two sides
        let left = rng.gen_range(1..=order);
        let a = random_bracket(rng, left, &labels);
        let b = random_bracket(rng, order + 1 - left, &labels);
        let s = sign(rng);
        t.push_point(UnpairedPoint::new(a, b, s)).expect("valid point");
    }
    t
}

/// A random order 3 IHX triple of points on base surfaces from `labels`.
pub fn random_ihx_triple(rng: &mut impl Rng, labels: &[Label]) -> [UnpairedPoint; 3] {
    let mut leaf = || RootedTree::leaf(labels.choose(rng).expect("nonempty").clone());
    let (a, b, c, d) = (leaf(), leaf(), leaf(), leaf());
    ihx_points(&a, &b, &c, &d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let a = random_capped_encoding(&mut rng(7), 4);
        let b = random_capped_encoding(&mut rng(7), 4);
        assert_eq!(a, b);
    }

    #[test]
    fn symplectic_cases_validate() {
        let mut r = rng(3);
        for _ in 0..20 {
            let (g, stage) = random_symplectic_case(&mut r);
            for gen in crate::grope::SymplecticGenerator::all(stage.pairs.len()) {
                crate::grope::symplectic_transform(&g, &stage, gen).unwrap();
            }
        }
    }

    #[test]
    fn towers_have_one_order() {
        let mut r = rng(11);
        for _ in 0..20 {
            let t = random_tower(&mut r, 3, 4);
            assert!(t.points().iter().all(|p| p.order() == 3));
        }
    }
}
