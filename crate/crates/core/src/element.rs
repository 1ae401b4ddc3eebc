use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::canonical::{canonicalize, CanonicalDiagram};
use crate::diagram::{Diagram, Sign};
use crate::error::Result;
use crate::skeleton::CanonicalAttached;

/// A basis key of a diagram group.
pub trait Generator: Ord + Clone + fmt::Debug {
    /// Keys whose orbit has an orientation-reversing automorphism; their
    /// coefficients live in Z/2.
    fn is_two_torsion(&self) -> bool;

    /// Short human-readable form used in reports.
    fn describe(&self) -> String;
}

impl Generator for CanonicalDiagram {
    fn is_two_torsion(&self) -> bool {
        CanonicalDiagram::is_two_torsion(self)
    }

    fn describe(&self) -> String {
        crate::notation::format_diagram(self.representative())
    }
}

/// Finite integer combination of basis keys. Zero coefficients are never
/// stored and two-torsion keys keep their coefficient reduced to `{1}`.
#[derive(Clone, PartialEq, Eq)]
pub struct LinearCombination<K: Generator> {
    terms: BTreeMap<K, BigInt>,
}

pub type Element = LinearCombination<CanonicalDiagram>;
pub type AttachedElement = LinearCombination<CanonicalAttached>;

impl<K: Generator> Default for LinearCombination<K> {
    fn default() -> Self {
        LinearCombination { terms: BTreeMap::new() }
    }
}

fn normalize<K: Generator>(k: &K, c: BigInt) -> BigInt {
    if k.is_two_torsion() {
        c.mod_floor(&BigInt::from(2))
    } else {
        c
    }
}

impl<K: Generator> LinearCombination<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_term(key: K, coefficient: impl Into<BigInt>) -> Self {
        let mut e = Self::zero();
        e.add_term(key, coefficient.into());
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, key: &K) -> BigInt {
        self.terms.get(key).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&K, &BigInt)> {
        self.terms.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.terms.keys()
    }

    pub fn add_term(&mut self, key: K, coefficient: BigInt) {
        if coefficient.is_zero() {
            return;
        }
        let slot = self.terms.entry(key.clone()).or_default();
        *slot += coefficient;
        let value = normalize(&key, std::mem::take(slot));
        if value.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, value);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scalar_mul(&BigInt::from(-1)))
    }

    pub fn scalar_mul(&self, k: &BigInt) -> Self {
        let mut out = Self::zero();
        for (key, c) in &self.terms {
            out.add_term(key.clone(), c * k);
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scalar_mul(&BigInt::from(-1))
    }

    /// Restriction to keys that are not two-torsion.
    pub fn free_part(&self) -> Self {
        LinearCombination { terms: self.terms.iter().filter(|(k, _)| !k.is_two_torsion()).map(|(k, c)| (k.clone(), c.clone())).collect() }
    }

    /// Copy whose first free coefficient is positive.
    pub(crate) fn with_positive_lead(&self) -> Self {
        match self.terms.iter().find(|(k, _)| !k.is_two_torsion()) {
            Some((_, c)) if c.is_negative() => self.neg(),
            _ => self.clone(),
        }
    }
}

impl<K: Generator> FromIterator<(K, BigInt)> for LinearCombination<K> {
    fn from_iter<I: IntoIterator<Item = (K, BigInt)>>(iter: I) -> Self {
        let mut e = Self::zero();
        for (k, c) in iter {
            e.add_term(k, c);
        }
        e
    }
}

impl Element {
    /// The canonical image of a single signed diagram.
    pub fn from_diagram(d: &Diagram) -> Result<Element> {
        let (k, s) = canonicalize(d)?;
        Ok(Element::from_term(k, s.to_i64()))
    }

    pub fn add_diagram(&mut self, d: &Diagram, coefficient: &BigInt) -> Result<()> {
        let (k, s) = canonicalize(d)?;
        self.add_term(k, coefficient * s.to_i64());
        Ok(())
    }

    /// Sum a signed forest (cancellation allowed).
    pub fn from_forest(forest: &[(Sign, Diagram)]) -> Result<Element> {
        let mut e = Element::zero();
        for (s, d) in forest {
            e.add_diagram(d, &BigInt::from(s.to_i64()))?;
        }
        Ok(e)
    }
}

impl<K: Generator> fmt::Display for LinearCombination<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            let c = if c.is_negative() { c.to_string() } else { format!("+{c}") };
            write!(f, "{c} {}", k.describe())?;
            if k.is_two_torsion() {
                f.write_str(" (mod 2)")?;
            }
        }
        Ok(())
    }
}

impl<K: Generator> fmt::Debug for LinearCombination<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter().map(|(k, c)| (k.describe(), c.to_string()))).finish()
    }
}
