//! Text notation: brackets, the `tree@root` diagram shorthand and the
//! attached-tree line format.
//!
//! ```text
//! expr  := label | '[' expr ',' expr ']' | '(' expr ',' expr ')'
//! label := [A-Za-z0-9_]+
//! ```
//!
//! Whitespace between tokens is ignored. A diagram shorthand is an optional
//! sign followed by `expr '@' label`; the attached form is
//!
//! ```text
//! atree sign=+1 skel=(s:1,s:2,s:3,s:4) tree=[[1@a,2@b],3@c]@4@d sites: 1:(a) 2:(b) 3:(c) 4:(d)
//! ```
//!
//! where every leaf is `component@site` and each `sites` entry lists the
//! sites of one component in order along it.

use std::collections::BTreeMap;

use crate::diagram::{is_label_text, Diagram, Label, Sign};
use crate::error::{Error, Result};
use crate::skeleton::{AttachedTree, ComponentKind, Skeleton};
use crate::tree::RootedTree;

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser { text, pos: 0 }
    }

    fn error(&self, message: impl Into<String>) -> Error {
        let before = &self.text[..self.pos];
        let line = before.matches('\n').count() + 1;
        let column = before.rfind('\n').map_or(before.chars().count(), |i| before[i + 1..].chars().count()) + 1;
        Error::Syntax { offset: self.pos, line, column, message: message.into() }
    }

    fn skip_ws(&mut self) {
        let rest = &self.text[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            let msg = match self.peek() {
                Some(f) => format!("expected '{c}', found '{f}'"),
                None => format!("expected '{c}', found end of input"),
            };
            Err(self.error(msg))
        }
    }

    fn label_text(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let rest = &self.text[self.pos..];
        let len = rest.find(|c: char| !(c.is_ascii_alphanumeric() || c == '_')).unwrap_or(rest.len());
        if len == 0 {
            return Err(self.error(match rest.chars().next() {
                Some(f) => format!("expected a label, found '{f}'"),
                None => "expected a label, found end of input".to_string(),
            }));
        }
        self.pos += len;
        Ok(&rest[..len])
    }

    fn label(&mut self) -> Result<Label> {
        Ok(Label::raw(self.label_text()?))
    }

    fn keyword(&mut self, word: &str) -> Result<()> {
        let at = self.pos;
        match self.label_text() {
            Ok(w) if w == word => Ok(()),
            _ => {
                self.pos = at;
                self.skip_ws();
                Err(self.error(format!("expected '{word}'")))
            }
        }
    }

    fn tree<L>(&mut self, leaf: &mut impl FnMut(&mut Self) -> Result<L>) -> Result<RootedTree<L>> {
        let close = match self.peek() {
            Some('[') => ']',
            Some('(') => ')',
            _ => return leaf(self).map(RootedTree::leaf),
        };
        self.pos += 1;
        let a = self.tree(leaf)?;
        self.expect(',')?;
        let b = self.tree(leaf)?;
        self.expect(close)?;
        Ok(RootedTree::node(a, b))
    }

    fn sign(&mut self) -> Result<Sign> {
        let s = if self.eat('-') {
            Sign::Minus
        } else {
            self.eat('+');
            Sign::Plus
        };
        Ok(s)
    }

    fn finish(&mut self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(c) => Err(self.error(format!("unexpected '{c}'"))),
        }
    }
}

/// Parse a bracket or rooted tree such as `[[1,2],3]` or `(2,(3,4))`.
pub fn parse_bracket(text: &str) -> Result<RootedTree<Label>> {
    let mut p = Parser::new(text);
    if p.peek().is_none() {
        return Err(p.error("empty input"));
    }
    let t = p.tree(&mut |p| p.label())?;
    p.finish()?;
    Ok(t)
}

/// Same grammar as [`parse_bracket`].
pub fn parse_rooted_tree(text: &str) -> Result<RootedTree<Label>> {
    parse_bracket(text)
}

/// Parse `[-+]? expr '@' root` into a tree diagram.
pub fn parse_diagram(text: &str) -> Result<Diagram> {
    let mut p = Parser::new(text);
    let sign = p.sign()?;
    let t = p.tree(&mut |p| p.label())?;
    p.expect('@')?;
    let root = p.label()?;
    p.finish()?;
    Ok(Diagram::from_rooted(&t, root).with_sign(sign))
}

/// The tree hanging off univalent vertex `root` as a rooted tree over
/// univalent indices, or `None` if `d` has a cycle.
pub(crate) fn rooted_view(d: &Diagram, root: usize) -> Option<RootedTree<usize>> {
    if !d.is_tree() {
        return None;
    }
    let mut at: BTreeMap<u32, (Option<usize>, usize)> = BTreeMap::new();
    for (i, t) in d.trivalent().iter().enumerate() {
        for (s, h) in t.iter().enumerate() {
            at.insert(*h, (Some(i), s));
        }
    }
    for (i, (h, _)) in d.univalent().iter().enumerate() {
        at.insert(*h, (None, i));
    }
    // `h` points away from the part already rendered
    fn grow(d: &Diagram, at: &BTreeMap<u32, (Option<usize>, usize)>, h: u32) -> RootedTree<usize> {
        let q = d.partner(h).expect("validated");
        match at[&q] {
            (None, i) => RootedTree::leaf(i),
            (Some(v), s) => {
                let t = d.trivalent()[v];
                RootedTree::node(grow(d, at, t[(s + 1) % 3]), grow(d, at, t[(s + 2) % 3]))
            }
        }
    }
    let h = d.univalent()[root].0;
    Some(grow(d, &at, h))
}

/// Shorthand for a diagram: `[-]expr@root` for trees, compact JSON for
/// graphs. The root is the last univalent vertex with the largest label.
pub fn format_diagram(d: &Diagram) -> String {
    let u = d.univalent();
    let root = (0..u.len()).max_by(|&a, &b| u[a].1.cmp(&u[b].1)).expect("univalent");
    let Some(view) = rooted_view(d, root) else {
        return crate::io::diagram_to_json(d).to_string();
    };
    let body = view.map(&mut |i: &usize| u[*i].1.clone());
    let sign = if d.sign() == Sign::Minus { "-" } else { "" };
    format!("{sign}{body}@{}", u[root].1)
}

fn site_name(k: usize) -> String {
    let c = (b'a' + (k % 26) as u8) as char;
    if k < 26 {
        c.to_string()
    } else {
        format!("{c}{}", k / 26)
    }
}

/// Parse the attached-tree line format.
pub fn parse_attached(text: &str) -> Result<(Skeleton, AttachedTree)> {
    let mut p = Parser::new(text);
    p.keyword("atree")?;
    p.keyword("sign")?;
    p.expect('=')?;
    let at = p.pos;
    let sign = p.sign()?;
    if p.label_text()? != "1" {
        p.pos = at;
        return Err(p.error("sign must be +1 or -1"));
    }
    p.keyword("skel")?;
    p.expect('=')?;
    p.expect('(')?;
    let mut comps = Vec::new();
    loop {
        let at = p.pos;
        let kind = match p.label_text()? {
            "s" => ComponentKind::Segment,
            "c" => ComponentKind::Circle,
            _ => {
                p.pos = at;
                p.skip_ws();
                return Err(p.error("component kind must be 's' or 'c'"));
            }
        };
        p.expect(':')?;
        comps.push((p.label()?, kind));
        if !p.eat(',') {
            break;
        }
    }
    p.expect(')')?;
    let skel = Skeleton::new(comps)?;
    p.keyword("tree")?;
    p.expect('=')?;
    let tree = p.tree(&mut |p| {
        let c = p.label()?;
        p.expect('@')?;
        Ok((c, p.label()?))
    })?;
    p.expect('@')?;
    let root = (p.label()?, {
        p.expect('@')?;
        p.label()?
    });
    p.keyword("sites")?;
    p.expect(':')?;
    let mut order: BTreeMap<Label, Vec<Label>> = BTreeMap::new();
    while p.peek().is_some() {
        let c = p.label()?;
        p.expect(':')?;
        p.expect('(')?;
        let mut sites = vec![p.label()?];
        while p.eat(',') {
            sites.push(p.label()?);
        }
        p.expect(')')?;
        if order.insert(c.clone(), sites).is_some() {
            return Err(p.error(format!("sites of {c} listed twice")));
        }
    }
    let legs: Vec<(Label, Label)> = tree.leaves().into_iter().cloned().chain([root]).collect();
    let mut positions = Vec::new();
    for (c, s) in &legs {
        let pos = order.get(c).and_then(|v| v.iter().position(|x| x == s));
        match pos {
            Some(i) => positions.push(i as i64),
            None => return Err(Error::Format(format!("site {s} is not listed on component {c}"))),
        }
    }
    let d = Diagram::from_rooted_with(&tree, |(c, _)| c.clone(), legs.last().expect("root").0.clone()).with_sign(sign);
    Ok((skel, AttachedTree::new(d, positions)?))
}

/// Print an attached tree; the root is its last univalent vertex.
pub fn format_attached(skel: &Skeleton, t: &AttachedTree) -> Result<String> {
    let d = t.tree();
    let u = d.univalent();
    let root = u.len() - 1;
    let view = rooted_view(d, root).ok_or_else(|| Error::Format("attached generators are trees".into()))?;
    // sites are named in order of appearance so printing is stable
    let mut name = vec![0; u.len()];
    for (k, &i) in view.leaves().into_iter().chain([&root]).enumerate() {
        name[i] = k;
    }
    let leg = |i: usize| format!("{}@{}", u[i].1, site_name(name[i]));
    let body = view.map(&mut |i: &usize| leg(*i));
    let kinds: Vec<String> =
        skel.components().iter().map(|(n, k)| format!("{}:{n}", if *k == ComponentKind::Segment { "s" } else { "c" })).collect();
    let mut sites = String::new();
    for (n, _) in skel.components() {
        let mut on: Vec<(i64, usize)> = (0..u.len()).filter(|&i| &u[i].1 == n).map(|i| (t.positions()[i], i)).collect();
        if on.is_empty() {
            continue;
        }
        on.sort();
        let names: Vec<String> = on.iter().map(|(_, i)| site_name(name[*i])).collect();
        sites.push_str(&format!(" {n}:({})", names.join(",")));
    }
    Ok(format!("atree sign={} skel=({}) tree={body}@{} sites:{sites}", d.sign(), kinds.join(","), leg(root)))
}

/// True when `s` is a valid label.
pub fn is_label(s: &str) -> bool {
    is_label_text(s)
}
