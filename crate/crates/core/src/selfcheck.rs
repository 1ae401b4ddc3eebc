//! Built-in verifications run by `jdc selfcheck`.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::canonical::{canonicalize, CanonicalDiagram};
use crate::diagram::{Diagram, Label, Sign};
use crate::element::Element;
use crate::error::Result;
use crate::grope::psi_capped;
use crate::notation::parse_diagram;
use crate::samples::{random_capped_encoding, rng};
use crate::skeleton::pull_off;
use crate::spaces::{compute_space, numeric_alphabet, reduce_ihx, Grading, LabelMode};
use crate::tower::{intersection_forest, push_in, tau_hat, tau_hat_total, theorem1_witness};
use crate::witness::{builtin_witness, expected_capped_element, genihx_graph_expected, WitnessKind};

#[derive(Debug, Clone)]
pub struct CheckItem {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn item(name: &'static str, r: Result<(bool, String)>) -> CheckItem {
    match r {
        Ok((passed, detail)) => CheckItem { name, passed, detail },
        Err(e) => CheckItem { name, passed: false, detail: format!("error: {e}") },
    }
}

/// `+I`, `-H`, `+X` on labels 1..4 rooted at 4.
pub fn fig2_terms() -> [(Sign, Diagram); 3] {
    let d = |s: &str| parse_diagram(s).expect("static");
    [(Sign::Plus, d("[[1,2],3]@4")), (Sign::Minus, d("[1,[2,3]]@4")), (Sign::Plus, d("[[3,1],2]@4"))]
}

/// Forest terms as a multiset of (canonical key, canonical sign).
pub fn forest_multiset(f: &[(Sign, Diagram)]) -> Result<BTreeMap<(CanonicalDiagram, i64), usize>> {
    let mut m = BTreeMap::new();
    for (s, d) in f {
        let (k, c) = canonicalize(d)?;
        *m.entry((k, (*s * c).to_i64())).or_insert(0) += 1;
    }
    Ok(m)
}

fn theorem1() -> Result<(bool, String)> {
    let t = theorem1_witness();
    let forest = intersection_forest(&t, 3)?;
    let same = forest_multiset(&forest)? == forest_multiset(&fig2_terms())?;
    let tau = tau_hat(&t, 3)?;
    let reduced = reduce_ihx(&tau)?;
    let ok = t.points().len() == 3 && same && !tau.is_zero() && reduced.is_zero();
    Ok((ok, format!("points={} forest_matches={same} tau_terms={} reduced_zero={}", t.points().len(), tau.len(), reduced.is_zero())))
}

fn construction41() -> Result<(bool, String)> {
    let g = builtin_witness(WitnessKind::Construction41)?;
    let psi = psi_capped(&g)?;
    let expected = expected_capped_element(["1", "2", "3"], &[], "4", g.skeleton())?;
    let pulled = pull_off(&psi, g.skeleton())?;
    let tau = tau_hat(&theorem1_witness(), 3)?;
    let ok = psi == expected && pulled == tau;
    Ok((ok, format!("psi_is_ihx={} pull_off_is_tau={}", psi == expected, pulled == tau)))
}

fn commutativity() -> Result<(bool, String)> {
    let mut r = rng(0x5eed);
    let mut cases = vec![builtin_witness(WitnessKind::Construction41)?, builtin_witness(WitnessKind::Theorem3)?];
    cases.extend((0..25).map(|_| random_capped_encoding(&mut r, 4)));
    let mut bad = 0;
    for g in &cases {
        let lhs = pull_off(&psi_capped(g)?, g.skeleton())?;
        let tower = push_in(g)?;
        let rhs = tau_hat_total(&tower)?;
        if lhs != rhs {
            bad += 1;
        }
    }
    Ok((bad == 0, format!("{} encodings, {bad} mismatches", cases.len())))
}

fn rank_table() -> Result<(bool, String)> {
    let mut got = Vec::new();
    for k in 3..=5 {
        let (_, _, rep) = compute_space(k - 1, &numeric_alphabet(k), LabelMode::Distinct, Grading::Vassiliev, true)?;
        got.push(rep.rank);
    }
    Ok((got == [1, 2, 6], format!("ranks {got:?} for k=3,4,5")))
}

fn struts() -> Result<(bool, String)> {
    let mut got = Vec::new();
    for l in 1..=4 {
        let (_, _, rep) = compute_space(1, &numeric_alphabet(l), LabelMode::RepeatsAllowed, Grading::Vassiliev, true)?;
        got.push(rep.rank);
    }
    Ok((got == [1, 3, 6, 10], format!("ranks {got:?} for l=1..4")))
}

fn torsion() -> Result<(bool, String)> {
    let labels = [Label::from(1), Label::from(2)];
    let (basis, _, rep) = compute_space(2, &labels, LabelMode::RepeatsAllowed, Grading::Vassiliev, false)?;
    let y112 = Element::from_diagram(&parse_diagram("[1,1]@2")?)?;
    let flagged = y112.keys().all(|k| k.is_two_torsion() && basis.contains(k));
    let ok = flagged && rep.torsion.contains(&BigInt::from(2));
    Ok((ok, format!("torsion {:?}, Y(1,1,2) two-torsion={flagged}", rep.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>())))
}

fn genihx() -> Result<(bool, String)> {
    let g = builtin_witness(WitnessKind::TheoremGenIhxGraph)?;
    let psi = crate::grope::psi_uncapped(&g)?;
    let ok = psi == genihx_graph_expected()? && reduce_ihx(&psi)?.is_zero();
    Ok((ok, format!("terms={}", psi.len())))
}

pub fn run() -> Vec<CheckItem> {
    vec![
        item("theorem1-witness", theorem1()),
        item("construction-4.1", construction41()),
        item("push-in-square", commutativity()),
        item("tree-rank-table", rank_table()),
        item("strut-count", struts()),
        item("two-torsion", torsion()),
        item("graph-ihx-witness", genihx()),
    ]
}
