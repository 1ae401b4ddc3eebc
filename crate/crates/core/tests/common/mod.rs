//! Independent oracles shared by the integration tests. None of them call
//! the canonicalizer or the integer linear algebra of the library.

#![allow(dead_code)]

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use jdc_core::{Diagram, Generator, HalfEdge, Label, LinearCombination, RootedTree, Sign};

/// Dense view of a diagram: half-edges `0..h`, their vertex and slot.
struct Dense {
    /// `(vertex, slot)` per half-edge.
    owner: Vec<(usize, usize)>,
    partner: Vec<usize>,
    /// Half-edges of each vertex in cyclic order.
    halves: Vec<Vec<usize>>,
    /// `Some(label)` for univalent vertices.
    labels: Vec<Option<Label>>,
    sign: i64,
}

fn dense(d: &Diagram) -> Dense {
    let mut index = BTreeMap::new();
    let mut owner = Vec::new();
    let mut halves = Vec::new();
    let mut labels = Vec::new();
    for t in d.trivalent() {
        let v = halves.len();
        let hs: Vec<usize> = t
            .iter()
            .enumerate()
            .map(|(s, h)| {
                index.insert(*h, owner.len());
                owner.push((v, s));
                owner.len() - 1
            })
            .collect();
        halves.push(hs);
        labels.push(None);
    }
    for (h, l) in d.univalent() {
        let v = halves.len();
        index.insert(*h, owner.len());
        owner.push((v, 0));
        halves.push(vec![owner.len() - 1]);
        labels.push(Some(l.clone()));
    }
    let mut partner = vec![usize::MAX; owner.len()];
    for [a, b] in d.edges() {
        partner[index[a]] = index[b];
        partner[index[b]] = index[a];
    }
    Dense { owner, partner, halves, labels, sign: d.sign().to_i64() }
}

#[derive(Clone)]
struct State {
    map: Vec<Option<usize>>,
    inv: Vec<Option<usize>>,
    orient: Vec<Option<i64>>,
}

fn search(a: &Dense, b: &Dense, mut st: State, mut queue: Vec<(usize, usize)>, out: &mut Vec<i64>) {
    while let Some((h, g)) = queue.pop() {
        if st.map[h] == Some(g) {
            continue;
        }
        if st.map[h].is_some() || st.inv[g].is_some() {
            return;
        }
        let (va, sa) = a.owner[h];
        let (vb, sb) = b.owner[g];
        if a.labels[va] != b.labels[vb] || a.halves[va].len() != b.halves[vb].len() {
            return;
        }
        st.map[h] = Some(g);
        st.inv[g] = Some(h);
        queue.push((a.partner[h], b.partner[g]));
        if a.halves[va].len() == 3 && st.orient[va].is_none() {
            for o in [1i64, -1] {
                let mut next = st.clone();
                next.orient[va] = Some(o);
                let mut q = queue.clone();
                for k in 1..3i64 {
                    let from = a.halves[va][(sa + k as usize) % 3];
                    let to = b.halves[vb][((sb as i64 + o * k).rem_euclid(3)) as usize];
                    q.push((from, to));
                }
                search(a, b, next, q, out);
            }
            return;
        }
    }
    if st.map.iter().all(Option::is_some) {
        let p: i64 = st.orient.iter().flatten().product();
        out.push(p * a.sign * b.sign);
    }
}

/// Signs `s` of every isomorphism with `a = s * b` as oriented diagrams,
/// by exhaustive search over half-edge maps.
pub fn isomorphism_signs(a: &Diagram, b: &Diagram) -> Vec<i64> {
    let (da, db) = (dense(a), dense(b));
    if da.owner.len() != db.owner.len() || da.halves.len() != db.halves.len() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let st = State { map: vec![None; da.owner.len()], inv: vec![None; db.owner.len()], orient: vec![None; da.halves.len()] };
    for g in 0..db.owner.len() {
        search(&da, &db, st.clone(), vec![(0, g)], &mut out);
    }
    out
}

/// True when some automorphism reverses the orientation.
pub fn has_reversing_automorphism(d: &Diagram) -> bool {
    isomorphism_signs(d, d).contains(&-1)
}

/// The same diagram with fresh half-edge ids, shuffled records and rotated
/// vertex triples.
pub fn scramble(d: &Diagram, rng: &mut impl Rng) -> Diagram {
    let max = d.max_half_edge();
    let mut ids: Vec<HalfEdge> = (0..=max + 20).collect();
    ids.shuffle(rng);
    let f = |h: HalfEdge| ids[h as usize];
    let mut tri: Vec<[HalfEdge; 3]> = d
        .trivalent()
        .iter()
        .map(|t| {
            let r = rng.gen_range(0..3);
            [f(t[r]), f(t[(r + 1) % 3]), f(t[(r + 2) % 3])]
        })
        .collect();
    tri.shuffle(rng);
    let mut uni: Vec<(HalfEdge, Label)> = d.univalent().iter().map(|(h, l)| (f(*h), l.clone())).collect();
    uni.shuffle(rng);
    let mut edges: Vec<[HalfEdge; 2]> =
        d.edges().iter().map(|[a, b]| if rng.gen_bool(0.5) { [f(*a), f(*b)] } else { [f(*b), f(*a)] }).collect();
    edges.shuffle(rng);
    Diagram::new(tri, uni, edges, d.sign()).expect("scrambled diagram is valid")
}

/// All rooted binary tree shapes with `n` leaves.
pub fn shapes(n: usize) -> Vec<RootedTree<()>> {
    if n == 1 {
        return vec![RootedTree::leaf(())];
    }
    let mut out = Vec::new();
    for k in 1..n {
        for l in shapes(k) {
            for r in shapes(n - k) {
                out.push(RootedTree::node(l.clone(), r.clone()));
            }
        }
    }
    out
}

/// Every labeled tree with `n + 1` univalent vertices, rooted at its last
/// leg: all shapes times all label words.
pub fn all_trees(n: usize, alphabet: &[Label], distinct: bool) -> Vec<Diagram> {
    let legs = n + 1;
    let mut words: Vec<Vec<Label>> = vec![vec![]];
    for _ in 0..legs {
        let mut next = Vec::new();
        for w in &words {
            for l in alphabet.iter().filter(|l| !distinct || !w.contains(l)) {
                let mut w = w.clone();
                w.push(l.clone());
                next.push(w);
            }
        }
        words = next;
    }
    let mut out = Vec::new();
    for s in shapes(n) {
        for w in &words {
            let mut k = 0;
            let t = s.map(&mut |_| {
                k += 1;
                w[k - 1].clone()
            });
            out.push(Diagram::from_rooted(&t, w[n].clone()));
        }
    }
    out
}

/// Rank over Q by dense Gaussian elimination.
pub fn rational_rank(rows: &[Vec<BigRational>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, p);
        let pivot = m[rank][c].clone();
        for r in 0..m.len() {
            if r != rank && !m[r][c].is_zero() {
                let f = m[r][c].clone() / pivot.clone();
                let pivot_row = m[rank].clone();
                for (x, p) in m[r][c..].iter_mut().zip(&pivot_row[c..]) {
                    *x -= p.clone() * f.clone();
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Dense rational rows of linear combinations over `basis`, plus one unit
/// row for each two-torsion key (those die over Q).
pub fn dense_rows<K: Generator>(basis: &[K], rows: &[LinearCombination<K>]) -> Vec<Vec<BigRational>> {
    let index: BTreeMap<&K, usize> = basis.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let mut out: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| {
            let mut v = vec![BigRational::zero(); basis.len()];
            for (k, c) in r.terms() {
                v[index[k]] = BigRational::from_integer(c.clone());
            }
            v
        })
        .collect();
    for (i, k) in basis.iter().enumerate() {
        if k.is_two_torsion() {
            let mut v = vec![BigRational::zero(); basis.len()];
            v[i] = BigRational::one();
            out.push(v);
        }
    }
    out
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

pub fn sign_of(s: Sign) -> i64 {
    s.to_i64()
}
