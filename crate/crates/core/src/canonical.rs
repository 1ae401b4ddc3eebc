//! AS canonical forms.
//!
//! A diagram is traversed breadth first from a univalent vertex. Each
//! trivalent vertex, when first reached through half-edge `p`, lists its
//! half-edges as `(p, next(p), next(next(p)))` or, at the cost of one
//! orientation reversal, `(p, next(next(p)), next(p))`. The traversal emits a
//! code: for each vertex in discovery order its type (or label rank),
//! followed by `(neighbor number, partner slot)` for each of its slots. The
//! canonical key is the least code over all univalent starts and all
//! orientation choices; it is found by branch-and-bound on code prefixes.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::diagram::{Diagram, HalfEdge, Label, Sign, Topology};
use crate::error::Result;
use crate::limits::check_degree;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Free,
    TwoTorsion,
}

/// An AS orbit: its deterministic key, parity, and orbit representative.
///
/// The representative has vertex orientations given by the canonical
/// traversal, so it canonicalizes to itself with sign `+1`.
#[derive(Clone)]
pub struct CanonicalDiagram {
    key: Arc<[u8]>,
    parity: Parity,
    rep: Arc<Diagram>,
}

impl CanonicalDiagram {
    pub fn key(&self) -> &[u8] {
        &self.key
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn is_two_torsion(&self) -> bool {
        self.parity == Parity::TwoTorsion
    }

    pub fn representative(&self) -> &Diagram {
        &self.rep
    }

    pub fn vassiliev_degree(&self) -> usize {
        self.rep.vassiliev_degree()
    }

    pub fn grope_degree(&self) -> usize {
        self.rep.grope_degree()
    }

    /// Same orbit key with parity forced to two-torsion; used when an
    /// extra symmetry (such as a skeleton rotation) reverses orientation.
    pub(crate) fn into_two_torsion(self) -> CanonicalDiagram {
        CanonicalDiagram { parity: Parity::TwoTorsion, ..self }
    }

    pub fn hex_key(&self) -> String {
        self.key.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl PartialEq for CanonicalDiagram {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}

impl Eq for CanonicalDiagram {}

impl PartialOrd for CanonicalDiagram {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CanonicalDiagram {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key.cmp(&other.key)
    }
}

impl std::hash::Hash for CanonicalDiagram {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.key.hash(state)
    }
}

impl fmt::Debug for CanonicalDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalDiagram({}, {:?})", crate::notation::format_diagram(&self.rep), self.parity)
    }
}

/// Canonicalize `d` under label-preserving isomorphism and AS.
///
/// Returns the orbit and `d.sign() * (-1)^reversals`, where `reversals` is
/// the number of vertex orientations flipped to reach the representative.
/// For two-torsion orbits the sign is still reported but carries no
/// information.
pub fn canonicalize(d: &Diagram) -> Result<(CanonicalDiagram, Sign)> {
    check_degree(d.vassiliev_degree())?;
    let topo = d.topology();
    let mut labels: Vec<Label> = topo.labels.iter().flatten().cloned().collect();
    labels.sort();
    labels.dedup();
    let ranks: Vec<u32> = topo
        .labels
        .iter()
        .map(|l| match l {
            Some(l) => 1 + labels.binary_search(l).expect("present") as u32,
            None => 0,
        })
        .collect();

    let search = Search { topo: &topo, ranks: &ranks };
    let mut best: Option<Best> = None;
    for start in topo.n_tri..topo.vertex_count() {
        let st = State::start(&topo, start);
        search.run(st, &mut best);
    }
    let best = best.expect("at least one univalent vertex");
    let rep = rebuild(&topo, &best, &ranks, &labels)?;
    let key = encode_key(&labels, &best.code);
    let parity = if best.torsion { Parity::TwoTorsion } else { Parity::Free };
    let sign = d.sign() * Sign::from_parity(best.flips % 2 == 1);
    Ok((CanonicalDiagram { key: key.into(), parity, rep: Arc::new(rep) }, sign))
}

#[derive(Clone)]
struct State {
    number: Vec<Option<u32>>,
    order: Vec<usize>,
    local: Vec<Vec<usize>>,
    flips: u32,
    code: Vec<u32>,
    cursor: usize,
    slot: usize,
}

impl State {
    fn start(topo: &Topology, v: usize) -> State {
        let mut number = vec![None; topo.vertex_count()];
        number[v] = Some(0);
        State {
            number,
            order: vec![v],
            local: vec![topo.halves[v].clone()],
            flips: 0,
            code: Vec::with_capacity(4 * topo.vertex_count()),
            cursor: 0,
            slot: 0,
        }
    }
}

struct Best {
    code: Vec<u32>,
    flips: u32,
    torsion: bool,
    order: Vec<usize>,
    local: Vec<Vec<usize>>,
}

struct Search<'a> {
    topo: &'a Topology,
    ranks: &'a [u32],
}

impl Search<'_> {
    /// False when the current prefix is already worse than the best code.
    fn promising(st: &State, best: &Option<Best>) -> bool {
        match best {
            None => true,
            Some(b) => {
                let n = st.code.len().min(b.code.len());
                st.code[..n] <= b.code[..n]
            }
        }
    }

    fn run(&self, mut st: State, best: &mut Option<Best>) {
        let topo = self.topo;
        loop {
            if st.cursor == st.order.len() {
                self.offer(st, best);
                return;
            }
            let v = st.order[st.cursor];
            if st.slot == 0 {
                st.code.push(self.ranks[v]);
                if !Self::promising(&st, best) {
                    return;
                }
            }
            let arity = topo.halves[v].len();
            if st.slot == arity {
                st.cursor += 1;
                st.slot = 0;
                continue;
            }
            let h = st.local[st.cursor][st.slot];
            st.slot += 1;
            let p = topo.partner[h];
            let w = topo.owner[p].0;
            match st.number[w] {
                Some(nw) => {
                    let pos = st.local[nw as usize].iter().position(|&x| x == p).expect("slot");
                    st.code.push(nw * 4 + pos as u32);
                }
                None => {
                    let nw = st.order.len() as u32;
                    st.number[w] = Some(nw);
                    st.order.push(w);
                    st.code.push(nw * 4);
                    if topo.halves[w].len() == 1 {
                        st.local.push(vec![p]);
                    } else {
                        let a = topo.next(p);
                        let b = topo.next(a);
                        let mut alt = st.clone();
                        alt.local.push(vec![p, b, a]);
                        alt.flips += 1;
                        st.local.push(vec![p, a, b]);
                        if Self::promising(&alt, best) {
                            self.run(alt, best);
                        }
                    }
                }
            }
            if !Self::promising(&st, best) {
                return;
            }
        }
    }

    fn offer(&self, st: State, best: &mut Option<Best>) {
        match best {
            Some(b) => match st.code.cmp(&b.code) {
                Ordering::Less => *best = Some(Best::from(st)),
                Ordering::Equal => {
                    if (st.flips ^ b.flips) & 1 == 1 {
                        b.torsion = true;
                    }
                }
                Ordering::Greater => {}
            },
            None => *best = Some(Best::from(st)),
        }
    }
}

impl From<State> for Best {
    fn from(st: State) -> Best {
        Best { code: st.code, flips: st.flips, torsion: false, order: st.order, local: st.local }
    }
}

/// Rebuild the representative from the winning traversal: vertex number `i`
/// owns half-edges `3i, 3i+1, 3i+2` in its local order.
fn rebuild(topo: &Topology, best: &Best, ranks: &[u32], labels: &[Label]) -> Result<Diagram> {
    let mut number = vec![0usize; topo.vertex_count()];
    for (i, &v) in best.order.iter().enumerate() {
        number[v] = i;
    }
    let id = |h: usize| -> HalfEdge {
        let (v, _) = topo.owner[h];
        let i = number[v];
        let pos = best.local[i].iter().position(|&x| x == h).expect("slot");
        (3 * i + pos) as HalfEdge
    };
    let mut trivalent = Vec::new();
    let mut univalent = Vec::new();
    let mut edges = Vec::new();
    for (i, &v) in best.order.iter().enumerate() {
        let base = (3 * i) as HalfEdge;
        if topo.halves[v].len() == 3 {
            trivalent.push([base, base + 1, base + 2]);
        } else {
            let l = labels[(ranks[v] - 1) as usize].clone();
            univalent.push((base, l));
        }
        for &h in &best.local[i] {
            let a = id(h);
            let b = id(topo.partner[h]);
            if a < b {
                edges.push([a, b]);
            }
        }
    }
    Diagram::new(trivalent, univalent, edges, Sign::Plus)
}

fn encode_key(labels: &[Label], code: &[u32]) -> Vec<u8> {
    let mut key = Vec::new();
    for l in labels {
        key.extend_from_slice(l.as_str().as_bytes());
        key.push(0);
    }
    key.push(0xff);
    for c in code {
        key.extend_from_slice(&c.to_be_bytes());
    }
    key
}
