//! JSON interchange for diagrams, elements, towers and grope encodings.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize, Serializer};
use serde_json::{json, Value};

use crate::diagram::{Diagram, HalfEdge, Label, Sign};
use crate::element::{AttachedElement, Element, Generator};
use crate::error::{Error, Result};
use crate::grope::{Branch, CapIntersection, GropeEncoding, GropeTree, LinkTable};
use crate::notation::{format_attached, format_diagram, parse_attached, parse_bracket, parse_diagram};
use crate::skeleton::{canonicalize_attached, ComponentKind, Skeleton};
use crate::tower::{TowerEncoding, UnpairedPoint};

fn format_err(e: impl std::fmt::Display) -> Error {
    Error::Format(e.to_string())
}

/// A JSON number when it fits in `i64`, a decimal string otherwise.
pub fn bigint_to_json(c: &BigInt) -> Value {
    match c.to_i64() {
        Some(v) => json!(v),
        None => json!(c.to_string()),
    }
}

pub fn bigint_from_json(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n.as_i64().map(BigInt::from).ok_or_else(|| format_err(format!("{n} is not an integer"))),
        Value::String(s) => s.parse().map_err(|_| format_err(format!("{s:?} is not an integer"))),
        other => Err(format_err(format!("{other} is not an integer"))),
    }
}

pub(crate) fn ser_bigints<S: Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(bigint_to_json))
}

fn sign_from_json(v: i64) -> Result<Sign> {
    Sign::from_i64(v).map_err(|_| format_err(format!("sign must be +1 or -1, got {v}")))
}

fn label(s: &str) -> Result<Label> {
    Label::new(s)
}

#[derive(Serialize, Deserialize)]
struct UnivalentDto {
    half: HalfEdge,
    label: String,
}

#[derive(Serialize, Deserialize)]
struct DiagramDto {
    trivalent: Vec<[HalfEdge; 3]>,
    univalent: Vec<UnivalentDto>,
    edges: Vec<[HalfEdge; 2]>,
    #[serde(default = "plus")]
    sign: i64,
}

fn plus() -> i64 {
    1
}

pub fn diagram_to_json(d: &Diagram) -> Value {
    let dto = DiagramDto {
        trivalent: d.trivalent().to_vec(),
        univalent: d.univalent().iter().map(|(h, l)| UnivalentDto { half: *h, label: l.to_string() }).collect(),
        edges: d.edges().to_vec(),
        sign: d.sign().to_i64(),
    };
    serde_json::to_value(dto).expect("plain data")
}

/// A diagram object, or a `tree@root` string.
pub fn diagram_from_json(v: &Value) -> Result<Diagram> {
    if let Value::String(s) = v {
        return parse_diagram(s);
    }
    let dto: DiagramDto = serde_json::from_value(v.clone()).map_err(format_err)?;
    let univalent = dto.univalent.iter().map(|u| Ok((u.half, label(&u.label)?))).collect::<Result<_>>()?;
    Diagram::new(dto.trivalent, univalent, dto.edges, sign_from_json(dto.sign)?)
}

/// `{"terms": [{"diagram", "coefficient", "mod2"}]}`; trees use the
/// shorthand, graphs the full diagram object.
pub fn element_to_json(e: &Element) -> Value {
    let terms: Vec<Value> = e
        .terms()
        .map(|(k, c)| {
            let rep = k.representative();
            let diagram = if rep.is_tree() { json!(format_diagram(rep)) } else { diagram_to_json(rep) };
            json!({"diagram": diagram, "coefficient": bigint_to_json(c), "mod2": k.is_two_torsion()})
        })
        .collect();
    json!({ "terms": terms })
}

pub fn element_from_json(v: &Value) -> Result<Element> {
    let terms = v.get("terms").and_then(Value::as_array).ok_or_else(|| format_err("expected an object with a terms array"))?;
    let mut e = Element::zero();
    for t in terms {
        let d = diagram_from_json(t.get("diagram").ok_or_else(|| format_err("term without diagram"))?)?;
        let c = match t.get("coefficient") {
            Some(c) => bigint_from_json(c)?,
            None => BigInt::from(1),
        };
        e.add_diagram(&d, &c)?;
    }
    Ok(e)
}

#[derive(Serialize, Deserialize, Clone)]
#[serde(untagged)]
enum SkeletonDto {
    /// Segments `1..=l`.
    Count(usize),
    List(Vec<ComponentDto>),
}

#[derive(Serialize, Deserialize, Clone)]
struct ComponentDto {
    name: String,
    kind: KindDto,
}

#[derive(Serialize, Deserialize, Clone, Copy)]
#[serde(rename_all = "lowercase")]
enum KindDto {
    Segment,
    Circle,
}

fn skeleton_to_dto(s: &Skeleton) -> SkeletonDto {
    if *s == Skeleton::segments(s.components().len()) {
        return SkeletonDto::Count(s.components().len());
    }
    SkeletonDto::List(
        s.components()
            .iter()
            .map(|(n, k)| ComponentDto {
                name: n.to_string(),
                kind: match k {
                    ComponentKind::Segment => KindDto::Segment,
                    ComponentKind::Circle => KindDto::Circle,
                },
            })
            .collect(),
    )
}

fn skeleton_from_dto(d: &SkeletonDto) -> Result<Skeleton> {
    match d {
        SkeletonDto::Count(l) => Ok(Skeleton::segments(*l)),
        SkeletonDto::List(v) => Skeleton::new(
            v.iter()
                .map(|c| {
                    let kind = match c.kind {
                        KindDto::Segment => ComponentKind::Segment,
                        KindDto::Circle => ComponentKind::Circle,
                    };
                    Ok((label(&c.name)?, kind))
                })
                .collect::<Result<_>>()?,
        ),
    }
}

pub fn skeleton_to_json(s: &Skeleton) -> Value {
    serde_json::to_value(skeleton_to_dto(s)).expect("plain data")
}

pub fn skeleton_from_json(v: &Value) -> Result<Skeleton> {
    skeleton_from_dto(&serde_json::from_value(v.clone()).map_err(format_err)?)
}

/// `{"skeleton", "terms": [{"atree", "coefficient", "mod2"}]}`.
pub fn attached_element_to_json(e: &AttachedElement, skel: &Skeleton) -> Result<Value> {
    let terms = e
        .terms()
        .map(|(k, c)| {
            Ok(json!({
                "atree": format_attached(skel, &k.to_attached_tree())?,
                "coefficient": bigint_to_json(c),
                "mod2": k.is_two_torsion(),
            }))
        })
        .collect::<Result<Vec<Value>>>()?;
    Ok(json!({"skeleton": skeleton_to_json(skel), "terms": terms}))
}

pub fn attached_element_from_json(v: &Value) -> Result<(Skeleton, AttachedElement)> {
    let terms = v.get("terms").and_then(Value::as_array).ok_or_else(|| format_err("expected an object with a terms array"))?;
    let mut skel = v.get("skeleton").map(skeleton_from_json).transpose()?;
    let mut parsed = Vec::new();
    for t in terms {
        let text = t.get("atree").and_then(Value::as_str).ok_or_else(|| format_err("term without atree"))?;
        let (s, tree) = parse_attached(text)?;
        match &skel {
            Some(k) if *k != s => return Err(format_err("terms use different skeletons")),
            Some(_) => {}
            None => skel = Some(s),
        }
        let c = match t.get("coefficient") {
            Some(c) => bigint_from_json(c)?,
            None => BigInt::from(1),
        };
        parsed.push((tree, c));
    }
    let skel = skel.ok_or_else(|| format_err("no skeleton given"))?;
    let mut e = AttachedElement::zero();
    for (tree, c) in parsed {
        let (k, s) = canonicalize_attached(&tree, &skel)?;
        e.add_term(k, c * s.to_i64());
    }
    Ok((skel, e))
}

#[derive(Serialize, Deserialize)]
struct PointDto {
    a: String,
    b: String,
    sign: i64,
}

#[derive(Serialize, Deserialize)]
struct TowerDto {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    l: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
    #[serde(default)]
    disks: Vec<String>,
    #[serde(default)]
    points: Vec<PointDto>,
}

pub fn tower_to_json(t: &TowerEncoding) -> Value {
    let l = t.labels().len();
    let numeric = t.labels() == crate::spaces::numeric_alphabet(l).as_slice();
    let dto = TowerDto {
        l: numeric.then_some(l),
        labels: (!numeric).then(|| t.labels().iter().map(|x| x.to_string()).collect()),
        disks: t.disks().iter().map(|d| d.render('(', ')')).collect(),
        points: t
            .points()
            .iter()
            .map(|p| PointDto { a: p.between.0.render('(', ')'), b: p.between.1.render('(', ')'), sign: p.sign.to_i64() })
            .collect(),
    };
    serde_json::to_value(dto).expect("plain data")
}

pub fn tower_from_json(v: &Value) -> Result<TowerEncoding> {
    let dto: TowerDto = serde_json::from_value(v.clone()).map_err(format_err)?;
    let labels = match (&dto.labels, dto.l) {
        (Some(ls), _) => ls.iter().map(|s| label(s)).collect::<Result<Vec<_>>>()?,
        (None, Some(l)) => crate::spaces::numeric_alphabet(l),
        (None, None) => return Err(format_err("a tower needs `l` or `labels`")),
    };
    let disks: BTreeSet<_> = dto.disks.iter().map(|s| parse_bracket(s)).collect::<Result<_>>()?;
    let points = dto
        .points
        .iter()
        .map(|p| Ok(UnpairedPoint::new(parse_bracket(&p.a)?, parse_bracket(&p.b)?, sign_from_json(p.sign)?)))
        .collect::<Result<Vec<_>>>()?;
    TowerEncoding::new(labels, disks, points)
}

#[derive(Serialize, Deserialize)]
struct GropeComponentDto {
    root: String,
    #[serde(default)]
    root_site: i64,
    branches: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    signs: Option<Vec<i64>>,
}

#[derive(Serialize, Deserialize, Default)]
struct LinksDto {
    #[serde(default)]
    tips: Vec<(String, String, i64)>,
    #[serde(default)]
    comps: Vec<(String, String, i64)>,
}

#[derive(Serialize, Deserialize)]
struct GropeDto {
    skeleton: SkeletonDto,
    components: Vec<GropeComponentDto>,
    #[serde(default)]
    links: LinksDto,
    #[serde(default)]
    capped: bool,
    #[serde(default)]
    caps: BTreeMap<String, Vec<(String, i64, i64)>>,
}

pub fn grope_to_json(g: &GropeEncoding) -> Value {
    let dto = GropeDto {
        skeleton: skeleton_to_dto(g.skeleton()),
        components: g
            .components()
            .iter()
            .map(|c| GropeComponentDto {
                root: c.root.to_string(),
                root_site: c.root_site,
                branches: c.branches.iter().map(|b| b.tree.to_string()).collect(),
                signs: c.branches.iter().any(|b| b.sign == Sign::Minus).then(|| c.branches.iter().map(|b| b.sign.to_i64()).collect()),
            })
            .collect(),
        links: LinksDto {
            tips: g.links().tip_entries().map(|(a, b, v)| (a.to_string(), b.to_string(), v)).collect(),
            comps: g.links().comp_entries().map(|(t, x, v)| (t.to_string(), x.to_string(), v)).collect(),
        },
        capped: g.capped(),
        caps: g
            .caps()
            .iter()
            .map(|(t, cap)| (t.to_string(), cap.iter().map(|i| (i.component.to_string(), i.site, i.sign.to_i64())).collect()))
            .collect(),
    };
    serde_json::to_value(dto).expect("plain data")
}

pub fn grope_from_json(v: &Value) -> Result<GropeEncoding> {
    let dto: GropeDto = serde_json::from_value(v.clone()).map_err(format_err)?;
    let skeleton = skeleton_from_dto(&dto.skeleton)?;
    let mut components = Vec::new();
    for c in &dto.components {
        let signs = match &c.signs {
            Some(s) if s.len() != c.branches.len() => return Err(format_err("one sign per branch is required")),
            Some(s) => s.iter().map(|&x| sign_from_json(x)).collect::<Result<Vec<_>>>()?,
            None => vec![Sign::Plus; c.branches.len()],
        };
        let branches =
            c.branches.iter().zip(signs).map(|(b, sign)| Ok(Branch { tree: parse_bracket(b)?, sign })).collect::<Result<Vec<_>>>()?;
        components.push(GropeTree { root: label(&c.root)?, root_site: c.root_site, branches });
    }
    let mut links = LinkTable::new();
    for (a, b, v) in &dto.links.tips {
        links.add_tip(&label(a)?, &label(b)?, *v);
    }
    for (t, x, v) in &dto.links.comps {
        links.add_comp(&label(t)?, &label(x)?, *v);
    }
    let mut caps = BTreeMap::new();
    for (t, list) in &dto.caps {
        let cap = list
            .iter()
            .map(|(x, site, sign)| Ok(CapIntersection { component: label(x)?, site: *site, sign: sign_from_json(*sign)? }))
            .collect::<Result<Vec<_>>>()?;
        caps.insert(label(t)?, cap);
    }
    GropeEncoding::new(skeleton, components, links, dto.capped, caps)
}

/// Parse JSON text.
pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(format_err)
}

/// Comma-separated listing of generators: `index,diagram,mod2`.
pub fn generators_csv<K: Generator>(keys: &[K]) -> String {
    let mut s = String::from("index,diagram,mod2\n");
    for (i, k) in keys.iter().enumerate() {
        s.push_str(&format!("{i},\"{}\",{}\n", k.describe().replace('"', "\"\""), k.is_two_torsion()));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tower::theorem1_witness;
    use crate::witness::{builtin_witness, WitnessKind};

    #[test]
    fn diagram_json_round_trip() {
        let d = crate::diagram::tests::theta_like();
        assert_eq!(diagram_from_json(&diagram_to_json(&d)).unwrap(), d);
        assert!(diagram_from_json(&json!({"trivalent": [], "univalent": [], "edges": []})).is_err());
    }

    #[test]
    fn tower_json_round_trip() {
        let t = theorem1_witness();
        let v = tower_to_json(&t);
        assert_eq!(v["l"], json!(4));
        assert_eq!(tower_from_json(&v).unwrap(), t);
    }

    #[test]
    fn grope_json_round_trip() {
        for k in [WitnessKind::Construction41, WitnessKind::TheoremGenIhxGraph] {
            let g = builtin_witness(k).unwrap();
            assert_eq!(grope_from_json(&grope_to_json(&g)).unwrap(), g);
        }
    }

    #[test]
    fn element_json_round_trip() {
        let mut e = Element::from_diagram(&parse_diagram("[[1,2],3]@4").unwrap()).unwrap();
        e = e.add(&Element::from_diagram(&crate::diagram::tests::theta_like()).unwrap().scalar_mul(&BigInt::from(-3)));
        assert_eq!(element_from_json(&element_to_json(&e)).unwrap(), e);
        let big = BigInt::from(i64::MAX) * 10;
        assert_eq!(bigint_from_json(&bigint_to_json(&big)).unwrap(), big);
    }
}
