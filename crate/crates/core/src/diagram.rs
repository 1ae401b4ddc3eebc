//! Vertex-oriented unitrivalent diagrams.
//!
//! A diagram is stored as half-edges: every trivalent vertex is an ordered
//! triple of half-edge ids (the order is the cyclic orientation, up to
//! rotation), every univalent vertex is one half-edge with a label, and
//! edges pair half-edges.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Mul, Neg};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tree::RootedTree;

pub type HalfEdge = u32;

/// Label of a univalent vertex: a skeleton component, a strand number, or a
/// tip name. User-facing labels match `[A-Za-z0-9_]+`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Label(String);

impl Label {
    pub fn new(s: impl Into<String>) -> Result<Self> {
        let s = s.into();
        if is_label_text(&s) {
            Ok(Label(s))
        } else {
            Err(Error::Structure(format!("invalid label {s:?}")))
        }
    }

    /// Internal labels (e.g. `x@3` for attachment ranks) skip validation.
    pub(crate) fn raw(s: impl Into<String>) -> Self {
        Label(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

pub(crate) fn is_label_text(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl TryFrom<String> for Label {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        Label::new(s)
    }
}

impl From<Label> for String {
    fn from(l: Label) -> String {
        l.0
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<u32> for Label {
    fn from(n: u32) -> Self {
        Label(n.to_string())
    }
}

/// Convenience for tests and built-in data: panics on invalid text.
pub fn label(s: &str) -> Label {
    Label::new(s).expect("valid label")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_i64(v: i64) -> Result<Sign> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            _ => Err(Error::Format(format!("sign must be +1 or -1, got {v}"))),
        }
    }

    pub fn to_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_parity(odd: bool) -> Sign {
        if odd {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagram {
    trivalent: Vec<[HalfEdge; 3]>,
    univalent: Vec<(HalfEdge, Label)>,
    edges: Vec<[HalfEdge; 2]>,
    sign: Sign,
}

/// Signed disjoint union of diagrams, kept term by term without cancellation.
pub type GeometricForest = Vec<(Sign, Diagram)>;

/// Dense re-indexing of a diagram used by the algorithms.
///
/// Vertices `0..t` are trivalent (in input order), `t..t+u` univalent.
/// Half-edges are renumbered `0..h`.
#[derive(Debug, Clone)]
pub(crate) struct Topology {
    pub n_tri: usize,
    pub labels: Vec<Option<Label>>,
    pub halves: Vec<Vec<usize>>,
    pub owner: Vec<(usize, usize)>,
    pub partner: Vec<usize>,
}

impl Topology {
    pub fn vertex_count(&self) -> usize {
        self.halves.len()
    }

    /// Half-edge following `h` in the cyclic order of its vertex.
    pub fn next(&self, h: usize) -> usize {
        let (v, s) = self.owner[h];
        let hs = &self.halves[v];
        hs[(s + 1) % hs.len()]
    }

    pub fn neighbor(&self, h: usize) -> usize {
        self.owner[self.partner[h]].0
    }
}

impl Diagram {
    pub fn new(trivalent: Vec<[HalfEdge; 3]>, univalent: Vec<(HalfEdge, Label)>, edges: Vec<[HalfEdge; 2]>, sign: Sign) -> Result<Diagram> {
        let d = Diagram { trivalent, univalent, edges, sign };
        d.validate()?;
        Ok(d)
    }

    fn validate(&self) -> Result<()> {
        if self.univalent.is_empty() {
            return Err(Error::Structure("a diagram needs at least one univalent vertex".into()));
        }
        let mut owner: BTreeMap<HalfEdge, usize> = BTreeMap::new();
        let vertex_halves = self.trivalent.iter().map(|t| t.to_vec()).chain(self.univalent.iter().map(|(h, _)| vec![*h]));
        for (v, hs) in vertex_halves.enumerate() {
            for h in hs {
                if owner.insert(h, v).is_some() {
                    return Err(Error::Structure(format!("half-edge {h} occurs in two vertex records")));
                }
            }
        }
        let mut seen = BTreeSet::new();
        for &[a, b] in &self.edges {
            if a == b {
                return Err(Error::Structure(format!("edge joins half-edge {a} to itself")));
            }
            for h in [a, b] {
                if !owner.contains_key(&h) {
                    return Err(Error::Structure(format!("half-edge {h} has no vertex")));
                }
                if !seen.insert(h) {
                    return Err(Error::Structure(format!("half-edge {h} occurs in two edges")));
                }
            }
            if owner[&a] == owner[&b] {
                return Err(Error::Structure(format!("edge {a}-{b} is a loop at one vertex")));
            }
        }
        if seen.len() != owner.len() {
            let missing = owner.keys().find(|h| !seen.contains(h)).copied().unwrap_or_default();
            return Err(Error::Structure(format!("half-edge {missing} is not in any edge")));
        }
        let topo = self.topology();
        if !is_connected(&topo) {
            return Err(Error::Disconnected);
        }
        Ok(())
    }

    pub(crate) fn topology(&self) -> Topology {
        let mut ids: Vec<HalfEdge> = Vec::new();
        let mut index: BTreeMap<HalfEdge, usize> = BTreeMap::new();
        let mut halves = Vec::new();
        let mut labels = Vec::new();
        let mut owner = Vec::new();
        let mut add = |h: HalfEdge, v: usize, s: usize, ids: &mut Vec<HalfEdge>| {
            index.insert(h, ids.len());
            ids.push(h);
            owner.push((v, s));
            ids.len() - 1
        };
        for (v, t) in self.trivalent.iter().enumerate() {
            let hs: Vec<usize> = t.iter().enumerate().map(|(s, &h)| add(h, v, s, &mut ids)).collect();
            halves.push(hs);
            labels.push(None);
        }
        let n_tri = self.trivalent.len();
        for (i, (h, l)) in self.univalent.iter().enumerate() {
            let c = add(*h, n_tri + i, 0, &mut ids);
            halves.push(vec![c]);
            labels.push(Some(l.clone()));
        }
        let mut partner = vec![usize::MAX; ids.len()];
        for &[a, b] in &self.edges {
            let (a, b) = (index[&a], index[&b]);
            partner[a] = b;
            partner[b] = a;
        }
        Topology { n_tri, labels, halves, owner, partner }
    }

    pub fn trivalent(&self) -> &[[HalfEdge; 3]] {
        &self.trivalent
    }

    pub fn univalent(&self) -> &[(HalfEdge, Label)] {
        &self.univalent
    }

    pub fn edges(&self) -> &[[HalfEdge; 2]] {
        &self.edges
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn with_sign(mut self, sign: Sign) -> Diagram {
        self.sign = sign;
        self
    }

    pub fn vertex_count(&self) -> usize {
        self.trivalent.len() + self.univalent.len()
    }

    /// Half the number of vertices.
    pub fn vassiliev_degree(&self) -> usize {
        self.vertex_count() / 2
    }

    pub fn first_betti(&self) -> usize {
        // connected by construction, so E - V + 1 >= 0
        self.edges.len() + 1 - self.vertex_count()
    }

    pub fn grope_degree(&self) -> usize {
        self.vassiliev_degree() + self.first_betti()
    }

    pub fn is_tree(&self) -> bool {
        self.first_betti() == 0
    }

    /// Sorted multiset of univalent labels.
    pub fn label_multiset(&self) -> Vec<Label> {
        let mut ls: Vec<Label> = self.univalent.iter().map(|(_, l)| l.clone()).collect();
        ls.sort();
        ls
    }

    pub fn partner(&self, h: HalfEdge) -> Option<HalfEdge> {
        self.edges.iter().find_map(|&[a, b]| {
            if a == h {
                Some(b)
            } else if b == h {
                Some(a)
            } else {
                None
            }
        })
    }

    /// Reverse the cyclic order at trivalent vertex `v`.
    pub fn reverse_vertex(&self, v: usize) -> Diagram {
        let mut d = self.clone();
        d.trivalent[v].swap(1, 2);
        d
    }

    pub fn relabel<F: FnMut(&Label) -> Label>(&self, mut f: F) -> Diagram {
        let mut d = self.clone();
        for (_, l) in d.univalent.iter_mut() {
            *l = f(l);
        }
        d
    }

    pub fn max_half_edge(&self) -> HalfEdge {
        self.trivalent.iter().flatten().copied().chain(self.univalent.iter().map(|(h, _)| *h)).max().unwrap_or(0)
    }

    /// Two univalent labeled ends joined by one edge.
    pub fn strut(a: Label, b: Label) -> Diagram {
        Diagram { trivalent: vec![], univalent: vec![(0, a), (1, b)], edges: vec![[0, 1]], sign: Sign::Plus }
    }

    /// The tree of `tree` with an extra root leg labeled `root`.
    ///
    /// Univalent vertices are listed leaves first (left to right), root last.
    pub fn from_rooted(tree: &RootedTree<Label>, root: Label) -> Diagram {
        Self::from_rooted_with(tree, |l| l.clone(), root)
    }

    pub fn from_rooted_with<L, F: FnMut(&L) -> Label>(tree: &RootedTree<L>, mut leaf: F, root: Label) -> Diagram {
        let mut b = Builder::default();
        let up = b.grow(tree, &mut leaf);
        let r = b.fresh();
        b.univalent.push((r, root));
        b.edges.push([up, r]);
        b.finish()
    }

    /// Two rooted trees joined by an edge between their roots.
    pub fn join_rooted<L, F: FnMut(&L) -> Label>(left: &RootedTree<L>, right: &RootedTree<L>, mut leaf: F) -> Diagram {
        let mut b = Builder::default();
        let a = b.grow(left, &mut leaf);
        let c = b.grow(right, &mut leaf);
        b.edges.push([a, c]);
        b.finish()
    }

    /// Glue two univalent vertices: both are deleted and their neighbors
    /// joined by one edge. Returns `None` when this creates a loop at one
    /// vertex (zero by AS) or a vertexless circle.
    pub fn glue_leaves(&self, h1: HalfEdge, h2: HalfEdge) -> Result<Option<Diagram>> {
        let is_leaf = |h| self.univalent.iter().any(|(x, _)| *x == h);
        if h1 == h2 || !is_leaf(h1) || !is_leaf(h2) {
            return Err(Error::Structure(format!("cannot glue half-edges {h1} and {h2}")));
        }
        let n1 = self.partner(h1).expect("validated");
        let n2 = self.partner(h2).expect("validated");
        if n1 == h2 {
            return Ok(None);
        }
        let v1 = self.trivalent.iter().position(|t| t.contains(&n1));
        let v2 = self.trivalent.iter().position(|t| t.contains(&n2));
        if v1.is_some() && v1 == v2 {
            return Ok(None);
        }
        let univalent = self.univalent.iter().filter(|(h, _)| *h != h1 && *h != h2).cloned().collect();
        let mut edges: Vec<[HalfEdge; 2]> = self.edges.iter().filter(|e| !e.contains(&h1) && !e.contains(&h2)).copied().collect();
        edges.push([n1, n2]);
        Diagram::new(self.trivalent.clone(), univalent, edges, self.sign).map(Some)
    }
}

#[derive(Default)]
struct Builder {
    next: HalfEdge,
    trivalent: Vec<[HalfEdge; 3]>,
    univalent: Vec<(HalfEdge, Label)>,
    edges: Vec<[HalfEdge; 2]>,
}

impl Builder {
    fn fresh(&mut self) -> HalfEdge {
        self.next += 1;
        self.next - 1
    }

    /// Build the subtree and return its dangling up half-edge.
    fn grow<L, F: FnMut(&L) -> Label>(&mut self, t: &RootedTree<L>, leaf: &mut F) -> HalfEdge {
        match t {
            RootedTree::Leaf(l) => {
                let h = self.fresh();
                self.univalent.push((h, leaf(l)));
                h
            }
            RootedTree::Node(a, b) => {
                let ha = self.grow(a, leaf);
                let hb = self.grow(b, leaf);
                let (x, y, z) = (self.fresh(), self.fresh(), self.fresh());
                self.trivalent.push([x, y, z]);
                self.edges.push([ha, x]);
                self.edges.push([hb, y]);
                z
            }
        }
    }

    fn finish(self) -> Diagram {
        Diagram { trivalent: self.trivalent, univalent: self.univalent, edges: self.edges, sign: Sign::Plus }
    }
}

fn is_connected(t: &Topology) -> bool {
    let n = t.vertex_count();
    if n == 0 {
        return true;
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &h in &t.halves[v] {
            let w = t.neighbor(h);
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.into_iter().all(|s| s)
}
