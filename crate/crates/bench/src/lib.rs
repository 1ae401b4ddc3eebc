//! Fixed inputs for the benchmarks.

use jdc_core::samples::{random_capped_encoding, random_symplectic_case, rng};
use jdc_core::spaces::numeric_alphabet;
use jdc_core::{Diagram, GropeEncoding, Label, RootedTree};

/// Left comb `[[..[1,2],..],k-1]` rooted at `k`.
pub fn comb(k: usize) -> Diagram {
    let labels = numeric_alphabet(k);
    let mut t = RootedTree::leaf(labels[0].clone());
    for l in &labels[1..k - 1] {
        t = RootedTree::node(t, RootedTree::leaf(l.clone()));
    }
    Diagram::from_rooted(&t, labels[k - 1].clone())
}

pub fn alphabet(k: usize) -> Vec<Label> {
    numeric_alphabet(k)
}

pub fn capped_encodings(count: usize) -> Vec<GropeEncoding> {
    let mut r = rng(1);
    (0..count).map(|_| random_capped_encoding(&mut r, 4)).collect()
}

pub fn uncapped_encodings(count: usize) -> Vec<GropeEncoding> {
    let mut r = rng(2);
    (0..count).map(|_| random_symplectic_case(&mut r).0).collect()
}
