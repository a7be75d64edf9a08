//! Output monoids.
//!
//! A [`Monoid`] is a validated presentation ([`MonoidSpec`]) together with the
//! operations the minimizer and the learner need: product, left-gcd, left
//! division, invertibility and rank. Elements are kept in canonical form so
//! that equality in the monoid is payload equality.
//!
//! Five instances are shipped: free monoids, trace monoids (free monoids
//! where designated generator pairs commute), free commutative monoids,
//! `(ℕ, 0, +)` and cyclic groups `ℤ/nℤ`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

/// Separator between generators in the textual form of words.
pub const SEPARATOR: char = '·';
/// Textual form of the unit of word-like monoids.
pub const EPSILON: &str = "ε";
/// Textual form of the undefined value.
pub const BOTTOM: &str = "⊥";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MonoidKind {
    Free,
    Trace,
    Commutative,
    NatAdd,
    CyclicGroup,
}

impl fmt::Display for MonoidKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MonoidKind::Free => "free",
            MonoidKind::Trace => "trace",
            MonoidKind::Commutative => "commutative",
            MonoidKind::NatAdd => "nat-add",
            MonoidKind::CyclicGroup => "cyclic-group",
        })
    }
}

/// Presentation of an output monoid, as found in machine files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonoidSpec {
    pub kind: MonoidKind,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub generators: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub commutations: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<u64>,
}

/// Canonical value of an output monoid.
///
/// `Word` is used by free and trace monoids (generator indices, in lexicographic
/// normal form for traces), `Counts` by commutative monoids (one count per
/// generator), `Nat` by `(ℕ, 0, +)` and `Residue` by cyclic groups.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Word(Vec<u32>),
    Counts(Vec<u64>),
    Nat(u64),
    Residue(u64),
}

/// An element of `M + 1`; `None` is the undefined value ⊥.
pub type PartialValue = Option<Element>;

/// A family of partial values indexed by a key list owned by the caller.
pub type PartialRow = Vec<PartialValue>;

/// A validated output monoid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monoid {
    spec: MonoidSpec,
    /// `independent[i * n + j]` is true when generators `i` and `j` commute.
    independent: Vec<bool>,
}

impl Monoid {
    pub fn new(spec: MonoidSpec) -> Result<Self> {
        let MonoidSpec {
            kind,
            generators,
            commutations,
            modulus,
        } = spec;
        let wordlike = matches!(
            kind,
            MonoidKind::Free | MonoidKind::Trace | MonoidKind::Commutative
        );
        if !wordlike && !generators.is_empty() {
            return Err(Error::InvalidMonoid(format!("{kind} takes no generators")));
        }
        let mut seen = BTreeSet::new();
        for g in &generators {
            if g.is_empty() || g.trim() != g {
                return Err(Error::InvalidMonoid(format!("bad generator name {g:?}")));
            }
            if g.contains(SEPARATOR) || g == EPSILON || g == BOTTOM {
                return Err(Error::InvalidMonoid(format!("reserved generator name {g:?}")));
            }
            if !seen.insert(g.as_str()) {
                return Err(Error::InvalidMonoid(format!("duplicate generator {g:?}")));
            }
        }
        if kind != MonoidKind::Trace && !commutations.is_empty() {
            return Err(Error::InvalidMonoid(format!("{kind} takes no commutations")));
        }
        match (kind, modulus) {
            (MonoidKind::CyclicGroup, None) => {
                return Err(Error::InvalidMonoid("cyclic group needs a modulus".into()))
            }
            (MonoidKind::CyclicGroup, Some(0)) => {
                return Err(Error::InvalidMonoid("modulus must be at least 1".into()))
            }
            (MonoidKind::CyclicGroup, Some(_)) => {}
            (_, Some(_)) => {
                return Err(Error::InvalidMonoid(format!("{kind} takes no modulus")))
            }
            (_, None) => {}
        }

        let n = generators.len();
        let index = |name: &str| -> Result<usize> {
            generators
                .iter()
                .position(|g| g == name)
                .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
        };
        let mut independent = vec![false; n * n];
        let mut pairs = BTreeSet::new();
        for (x, y) in &commutations {
            let (i, j) = (index(x)?, index(y)?);
            if i == j {
                return Err(Error::InvalidMonoid(format!(
                    "commutation pair ({x}, {y}) must have distinct members"
                )));
            }
            independent[i * n + j] = true;
            independent[j * n + i] = true;
            pairs.insert((i.min(j), i.max(j)));
        }
        let commutations = pairs
            .into_iter()
            .map(|(i, j)| (generators[i].clone(), generators[j].clone()))
            .collect();

        Ok(Monoid {
            spec: MonoidSpec {
                kind,
                generators,
                commutations,
                modulus,
            },
            independent,
        })
    }

    pub fn free<S: AsRef<str>>(generators: &[S]) -> Self {
        Self::new(MonoidSpec {
            kind: MonoidKind::Free,
            generators: names(generators),
            commutations: vec![],
            modulus: None,
        })
        .expect("valid free monoid")
    }

    pub fn trace<S: AsRef<str>>(generators: &[S], commuting: &[(S, S)]) -> Result<Self> {
        Self::new(MonoidSpec {
            kind: MonoidKind::Trace,
            generators: names(generators),
            commutations: commuting
                .iter()
                .map(|(a, b)| (a.as_ref().to_string(), b.as_ref().to_string()))
                .collect(),
            modulus: None,
        })
    }

    pub fn commutative<S: AsRef<str>>(generators: &[S]) -> Self {
        Self::new(MonoidSpec {
            kind: MonoidKind::Commutative,
            generators: names(generators),
            commutations: vec![],
            modulus: None,
        })
        .expect("valid commutative monoid")
    }

    pub fn nat_add() -> Self {
        Self::new(MonoidSpec {
            kind: MonoidKind::NatAdd,
            generators: vec![],
            commutations: vec![],
            modulus: None,
        })
        .expect("valid (ℕ, +)")
    }

    pub fn cyclic(modulus: u64) -> Result<Self> {
        Self::new(MonoidSpec {
            kind: MonoidKind::CyclicGroup,
            generators: vec![],
            commutations: vec![],
            modulus: Some(modulus),
        })
    }

    /// The canonical presentation (commutation pairs ordered by generator order).
    pub fn spec(&self) -> &MonoidSpec {
        &self.spec
    }

    pub fn kind(&self) -> MonoidKind {
        self.spec.kind
    }

    pub fn generators(&self) -> &[String] {
        &self.spec.generators
    }

    fn modulus(&self) -> u64 {
        self.spec.modulus.unwrap_or(1)
    }

    fn commute(&self, a: u32, b: u32) -> bool {
        let n = self.spec.generators.len();
        self.independent[a as usize * n + b as usize]
    }

    /// Whether every non-unit element is non-invertible.
    pub fn has_trivial_invertibles(&self) -> bool {
        self.kind() != MonoidKind::CyclicGroup || self.modulus() == 1
    }

    pub fn unit(&self) -> Element {
        match self.kind() {
            MonoidKind::Free | MonoidKind::Trace => Element::Word(vec![]),
            MonoidKind::Commutative => Element::Counts(vec![0; self.spec.generators.len()]),
            MonoidKind::NatAdd => Element::Nat(0),
            MonoidKind::CyclicGroup => Element::Residue(0),
        }
    }

    pub fn is_unit(&self, x: &Element) -> bool {
        *x == self.unit()
    }

    /// The element denoted by a single generator.
    pub fn generator(&self, name: &str) -> Result<Element> {
        let i = self.generator_index(name)?;
        Ok(match self.kind() {
            MonoidKind::Commutative => {
                let mut counts = vec![0; self.spec.generators.len()];
                counts[i as usize] = 1;
                Element::Counts(counts)
            }
            _ => Element::Word(vec![i]),
        })
    }

    fn generator_index(&self, name: &str) -> Result<u32> {
        if !matches!(
            self.kind(),
            MonoidKind::Free | MonoidKind::Trace | MonoidKind::Commutative
        ) {
            return Err(Error::UnknownGenerator(name.to_string()));
        }
        self.spec
            .generators
            .iter()
            .position(|g| g == name)
            .map(|i| i as u32)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    /// Builds the element denoted by a sequence of generator indices.
    pub fn from_generators(&self, word: &[u32]) -> Element {
        match self.kind() {
            MonoidKind::Free => Element::Word(word.to_vec()),
            MonoidKind::Trace => Element::Word(self.trace_normal_form(word)),
            MonoidKind::Commutative => {
                let mut counts = vec![0; self.spec.generators.len()];
                for &g in word {
                    counts[g as usize] += 1;
                }
                Element::Counts(counts)
            }
            MonoidKind::NatAdd => Element::Nat(word.len() as u64),
            MonoidKind::CyclicGroup => Element::Residue(word.len() as u64 % self.modulus()),
        }
    }

    pub fn mul(&self, x: &Element, y: &Element) -> Element {
        match (x, y) {
            (Element::Word(a), Element::Word(b)) => {
                let mut w = Vec::with_capacity(a.len() + b.len());
                w.extend_from_slice(a);
                w.extend_from_slice(b);
                if self.kind() == MonoidKind::Trace {
                    Element::Word(self.trace_normal_form(&w))
                } else {
                    Element::Word(w)
                }
            }
            (Element::Counts(a), Element::Counts(b)) => {
                Element::Counts(a.iter().zip(b).map(|(p, q)| p + q).collect())
            }
            (Element::Nat(a), Element::Nat(b)) => Element::Nat(a + b),
            (Element::Residue(a), Element::Residue(b)) => {
                Element::Residue((a + b) % self.modulus())
            }
            _ => panic!("mismatched element kinds {x:?} and {y:?}"),
        }
    }

    /// Product on `M + 1`: ⊥ absorbs on both sides.
    pub fn mul_partial(&self, x: &PartialValue, y: &PartialValue) -> PartialValue {
        match (x, y) {
            (Some(x), Some(y)) => Some(self.mul(x, y)),
            _ => None,
        }
    }

    /// Multiplies every entry of a row on the left by `x`.
    pub fn scale_row(&self, x: &Element, row: &[PartialValue]) -> PartialRow {
        row.iter()
            .map(|v| v.as_ref().map(|v| self.mul(x, v)))
            .collect()
    }

    /// Binary left-gcd of two elements.
    pub fn lgcd(&self, x: &Element, y: &Element) -> Element {
        match (x, y) {
            (Element::Word(a), Element::Word(b)) => match self.kind() {
                MonoidKind::Trace => Element::Word(self.trace_lgcd(a, b)),
                _ => Element::Word(
                    a.iter()
                        .zip(b)
                        .take_while(|(p, q)| p == q)
                        .map(|(p, _)| *p)
                        .collect(),
                ),
            },
            (Element::Counts(a), Element::Counts(b)) => {
                Element::Counts(a.iter().zip(b).map(|(p, q)| *p.min(q)).collect())
            }
            (Element::Nat(a), Element::Nat(b)) => Element::Nat(*a.min(b)),
            // Every element of a group is a left-gcd; keep the left operand so
            // that folding a family returns its first defined entry.
            (Element::Residue(a), Element::Residue(_)) => Element::Residue(*a),
            _ => panic!("mismatched element kinds {x:?} and {y:?}"),
        }
    }

    /// Left-gcd of the defined entries of a family, ⊥ when none is defined.
    pub fn lgcd_family(&self, row: &[PartialValue]) -> PartialValue {
        let mut defined = row.iter().flatten();
        let first = defined.next()?.clone();
        Some(defined.fold(first, |acc, x| self.lgcd(&acc, x)))
    }

    /// The `ν` with `d ⊗ ν = x`, if any.
    pub fn left_divide(&self, d: &Element, x: &Element) -> Option<Element> {
        match (d, x) {
            (Element::Word(a), Element::Word(b)) => match self.kind() {
                MonoidKind::Trace => self.trace_left_divide(a, b).map(Element::Word),
                _ => b.strip_prefix(a.as_slice()).map(|r| Element::Word(r.to_vec())),
            },
            (Element::Counts(a), Element::Counts(b)) => a
                .iter()
                .zip(b)
                .map(|(p, q)| q.checked_sub(*p))
                .collect::<Option<Vec<_>>>()
                .map(Element::Counts),
            (Element::Nat(a), Element::Nat(b)) => b.checked_sub(*a).map(Element::Nat),
            (Element::Residue(a), Element::Residue(b)) => {
                let m = self.modulus();
                Some(Element::Residue((b + m - a % m) % m))
            }
            _ => panic!("mismatched element kinds {d:?} and {x:?}"),
        }
    }

    /// Left division on `M + 1`. Dividing ⊥ yields ⊥; ⊥ divides nothing else.
    pub fn left_divide_partial(&self, d: &PartialValue, x: &PartialValue) -> Result<PartialValue> {
        match (d, x) {
            (_, None) => Ok(None),
            (None, Some(_)) => Err(Error::NotDivisible),
            (Some(d), Some(x)) => self.left_divide(d, x).map(Some).ok_or(Error::NotDivisible),
        }
    }

    pub fn left_divides(&self, d: &Element, x: &Element) -> bool {
        self.left_divide(d, x).is_some()
    }

    pub fn is_invertible(&self, x: &Element) -> bool {
        match x {
            Element::Residue(_) => true,
            other => self.is_unit(other),
        }
    }

    pub fn inverse(&self, x: &Element) -> Result<Element> {
        match x {
            Element::Residue(a) => {
                let m = self.modulus();
                Ok(Element::Residue((m - a % m) % m))
            }
            other if self.is_unit(other) => Ok(other.clone()),
            _ => Err(Error::NotInvertible),
        }
    }

    /// Solves `u = χ ⊗ v` for an invertible `χ`.
    pub fn factor_left_invertible(&self, u: &PartialValue, v: &PartialValue) -> Option<Element> {
        match (u, v) {
            (None, None) => Some(self.unit()),
            (Some(u), Some(v)) => {
                if self.has_trivial_invertibles() {
                    (u == v).then(|| self.unit())
                } else {
                    let chi = self.mul(u, &self.inverse(v).ok()?);
                    (self.mul(&chi, v) == *u).then_some(chi)
                }
            }
            _ => None,
        }
    }

    /// Whether `a = b ⊗ χ` for some invertible `χ`.
    pub fn equal_up_to_right_invertible(&self, a: &PartialValue, b: &PartialValue) -> bool {
        match (a, b) {
            (None, None) => true,
            (Some(a), Some(b)) => {
                if self.has_trivial_invertibles() {
                    a == b
                } else {
                    self.left_divide(b, a).is_some_and(|c| self.is_invertible(&c))
                }
            }
            _ => false,
        }
    }

    /// Returns the invertible `χ` with `r1 = χ · r2` entrywise, if any.
    pub fn rows_equal_up_to_left_invertible(
        &self,
        r1: &[PartialValue],
        r2: &[PartialValue],
    ) -> Option<Element> {
        if r1.len() != r2.len() {
            return None;
        }
        if r1.iter().zip(r2).any(|(x, y)| x.is_some() != y.is_some()) {
            return None;
        }
        let chi = match r1.iter().zip(r2).find(|(x, _)| x.is_some()) {
            Some((x, y)) => self.factor_left_invertible(x, y)?,
            None => return Some(self.unit()),
        };
        let verified = r1
            .iter()
            .zip(r2)
            .all(|(x, y)| match (x, y) {
                (Some(x), Some(y)) => self.mul(&chi, y) == *x,
                _ => true,
            });
        verified.then_some(chi)
    }

    /// Divides every entry by the family's left-gcd.
    pub fn red_row(&self, row: &[PartialValue]) -> PartialRow {
        match self.lgcd_family(row) {
            None => row.to_vec(),
            Some(g) => row
                .iter()
                .map(|v| {
                    v.as_ref().map(|v| {
                        self.left_divide(&g, v)
                            .expect("the left-gcd of a family divides every member")
                    })
                })
                .collect(),
        }
    }

    /// Maximal number of non-invertible factors.
    pub fn rank(&self, x: &Element) -> u64 {
        match x {
            Element::Word(w) => w.len() as u64,
            Element::Counts(c) => c.iter().sum(),
            Element::Nat(n) => *n,
            Element::Residue(_) => 0,
        }
    }

    // Trace monoid internals.

    /// Lexicographic normal form: repeatedly emit the least letter that is
    /// minimal in the dependence order of what remains.
    fn trace_normal_form(&self, word: &[u32]) -> Vec<u32> {
        let mut rest = word.to_vec();
        let mut out = Vec::with_capacity(word.len());
        while !rest.is_empty() {
            let mut best: Option<(u32, usize)> = None;
            for (i, &c) in rest.iter().enumerate() {
                if best.is_some_and(|(b, _)| b <= c) {
                    continue;
                }
                if rest[..i].iter().all(|&p| self.commute(p, c)) {
                    best = Some((c, i));
                }
            }
            let (c, i) = best.expect("a non-empty trace has a minimal letter");
            rest.remove(i);
            out.push(c);
        }
        out
    }

    /// Position of the occurrence of `c` that can be moved to the front of `w`.
    fn extractable(&self, w: &[u32], c: u32) -> Option<usize> {
        for (i, &p) in w.iter().enumerate() {
            if p == c {
                return Some(i);
            }
            if !self.commute(p, c) {
                return None;
            }
        }
        None
    }

    fn trace_lgcd(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        let mut common = Vec::new();
        let n = self.spec.generators.len() as u32;
        'outer: loop {
            for c in 0..n {
                if let (Some(i), Some(j)) = (self.extractable(&a, c), self.extractable(&b, c)) {
                    a.remove(i);
                    b.remove(j);
                    common.push(c);
                    continue 'outer;
                }
            }
            break;
        }
        self.trace_normal_form(&common)
    }

    fn trace_left_divide(&self, d: &[u32], x: &[u32]) -> Option<Vec<u32>> {
        let mut rest = x.to_vec();
        for &c in d {
            let i = self.extractable(&rest, c)?;
            rest.remove(i);
        }
        Some(self.trace_normal_form(&rest))
    }

    // Text forms.

    pub fn render(&self, x: &Element) -> String {
        match x {
            Element::Word(w) if w.is_empty() => EPSILON.to_string(),
            Element::Word(w) => self.join(w.iter().copied()),
            Element::Counts(c) if c.iter().all(|&k| k == 0) => EPSILON.to_string(),
            Element::Counts(c) => self.join(
                c.iter()
                    .enumerate()
                    .flat_map(|(i, &k)| std::iter::repeat_n(i as u32, k as usize)),
            ),
            Element::Nat(n) | Element::Residue(n) => n.to_string(),
        }
    }

    pub fn render_partial(&self, x: &PartialValue) -> String {
        match x {
            Some(x) => self.render(x),
            None => BOTTOM.to_string(),
        }
    }

    fn join(&self, letters: impl Iterator<Item = u32>) -> String {
        let mut s = String::new();
        for (k, g) in letters.enumerate() {
            if k > 0 {
                s.push(SEPARATOR);
            }
            s.push_str(&self.spec.generators[g as usize]);
        }
        s
    }

    /// Parses the textual form. Words are generator names joined by `·`; when
    /// every generator is a single character the separator may be omitted.
    pub fn parse(&self, text: &str) -> Result<Element> {
        let text = text.trim();
        match self.kind() {
            MonoidKind::NatAdd | MonoidKind::CyclicGroup => {
                let n: u64 = text
                    .parse()
                    .map_err(|_| Error::MalformedElement(text.to_string()))?;
                Ok(match self.kind() {
                    MonoidKind::NatAdd => Element::Nat(n),
                    _ => Element::Residue(n % self.modulus()),
                })
            }
            _ => {
                if text.is_empty() || text == EPSILON {
                    return Ok(self.unit());
                }
                let single_chars = self.spec.generators.iter().all(|g| g.chars().count() == 1);
                let pieces: Vec<String> = if text.contains(SEPARATOR) || !single_chars {
                    text.split(SEPARATOR).map(|s| s.trim().to_string()).collect()
                } else {
                    text.chars().map(|c| c.to_string()).collect()
                };
                let mut word = Vec::with_capacity(pieces.len());
                for p in pieces {
                    if p.is_empty() {
                        return Err(Error::MalformedElement(text.to_string()));
                    }
                    if p == EPSILON {
                        continue;
                    }
                    word.push(self.generator_index(&p)?);
                }
                Ok(self.from_generators(&word))
            }
        }
    }

    pub fn parse_partial(&self, text: &str) -> Result<PartialValue> {
        if text.trim() == BOTTOM {
            Ok(None)
        } else {
            self.parse(text).map(Some)
        }
    }

    // Wire forms.

    pub fn to_json(&self, x: &Element) -> Value {
        match x {
            Element::Word(w) => Value::Array(
                w.iter()
                    .map(|&g| Value::String(self.spec.generators[g as usize].clone()))
                    .collect(),
            ),
            Element::Counts(c) => {
                let sorted: BTreeMap<&str, u64> = c
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| (self.spec.generators[i].as_str(), k))
                    .collect();
                Value::Object(
                    sorted
                        .into_iter()
                        .map(|(g, k)| (g.to_string(), Value::from(k)))
                        .collect(),
                )
            }
            Element::Nat(n) | Element::Residue(n) => Value::from(*n),
        }
    }

    /// Decodes the wire form. The flag is false when the input was valid but
    /// not canonical (it has been canonicalized).
    pub fn from_json(&self, value: &Value) -> Result<(Element, bool)> {
        let malformed = || Error::MalformedElement(value.to_string());
        match self.kind() {
            MonoidKind::Free | MonoidKind::Trace => {
                let items = value.as_array().ok_or_else(malformed)?;
                let mut word = Vec::with_capacity(items.len());
                for item in items {
                    let name = item.as_str().ok_or_else(malformed)?;
                    word.push(self.generator_index(name)?);
                }
                let x = self.from_generators(&word);
                let canonical = x == Element::Word(word);
                Ok((x, canonical))
            }
            MonoidKind::Commutative => {
                let map = value.as_object().ok_or_else(malformed)?;
                let mut counts = vec![0; self.spec.generators.len()];
                let mut canonical = true;
                let mut previous: Option<&str> = None;
                for (name, k) in map {
                    let k = k.as_u64().ok_or_else(malformed)?;
                    counts[self.generator_index(name)? as usize] += k;
                    if k == 0 || previous.is_some_and(|p| p >= name.as_str()) {
                        canonical = false;
                    }
                    previous = Some(name);
                }
                Ok((Element::Counts(counts), canonical))
            }
            MonoidKind::NatAdd => Ok((Element::Nat(value.as_u64().ok_or_else(malformed)?), true)),
            MonoidKind::CyclicGroup => {
                let n = value.as_u64().ok_or_else(malformed)?;
                let m = self.modulus();
                Ok((Element::Residue(n % m), n < m))
            }
        }
    }

    pub fn partial_to_json(&self, x: &PartialValue) -> Value {
        x.as_ref().map_or(Value::Null, |x| self.to_json(x))
    }
}

fn names<S: AsRef<str>>(generators: &[S]) -> Vec<String> {
    generators.iter().map(|g| g.as_ref().to_string()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn free() -> Monoid {
        Monoid::free(&["α", "β", "γ"])
    }

    fn trace() -> Monoid {
        Monoid::trace(&["α", "β", "γ"], &[("α", "β")]).unwrap()
    }

    fn el(m: &Monoid, s: &str) -> Element {
        m.parse(s).unwrap()
    }

    fn row(m: &Monoid, items: &[&str]) -> PartialRow {
        items.iter().map(|s| m.parse_partial(s).unwrap()).collect()
    }

    #[test]
    fn units() {
        assert_eq!(Monoid::free(&["α", "β"]).unit(), Element::Word(vec![]));
        assert_eq!(Monoid::nat_add().unit(), Element::Nat(0));
        assert_eq!(Monoid::cyclic(3).unwrap().unit(), Element::Residue(0));
    }

    #[test]
    fn products() {
        let m = free();
        assert_eq!(m.mul(&el(&m, "α"), &el(&m, "β·α")), el(&m, "α·β·α"));
        let t = Monoid::trace(&["α", "β"], &[("α", "β")]).unwrap();
        assert_eq!(t.render(&t.mul(&el(&t, "β"), &el(&t, "α"))), "α·β");
        let c = Monoid::cyclic(3).unwrap();
        assert_eq!(c.mul(&Element::Residue(2), &Element::Residue(2)), Element::Residue(1));
    }

    #[test]
    fn family_lgcds() {
        let m = free();
        assert_eq!(
            m.lgcd_family(&row(&m, &["αβα", "αββ", "⊥"])),
            Some(el(&m, "αβ"))
        );
        let c = Monoid::commutative(&["α", "β"]);
        assert_eq!(
            c.lgcd_family(&row(&c, &["ααβ", "αβββ"])),
            Some(el(&c, "αβ"))
        );
        let t = trace();
        assert_eq!(t.lgcd_family(&row(&t, &["αβγ", "βαα"])), Some(el(&t, "αβ")));
        assert_eq!(m.lgcd_family(&row(&m, &["⊥", "⊥"])), None);
    }

    #[test]
    fn divisions() {
        let m = free();
        assert_eq!(m.left_divide(&el(&m, "α"), &el(&m, "αβγ")), Some(el(&m, "βγ")));
        assert_eq!(
            m.left_divide_partial(&Some(el(&m, "β")), &Some(el(&m, "αβ"))),
            Err(Error::NotDivisible)
        );
        assert_eq!(m.left_divide_partial(&Some(el(&m, "β")), &None), Ok(None));
        let c = Monoid::cyclic(3).unwrap();
        assert_eq!(
            c.left_divide(&Element::Residue(1), &Element::Residue(0)),
            Some(Element::Residue(2))
        );
        let t = trace();
        assert_eq!(t.left_divide(&el(&t, "β"), &el(&t, "αβγ")), Some(el(&t, "αγ")));
        assert_eq!(t.left_divide(&el(&t, "γ"), &el(&t, "αβγ")), None);
    }

    #[test]
    fn invertibility() {
        let m = free();
        assert!(!m.is_invertible(&el(&m, "α")));
        assert!(m.is_invertible(&m.unit()));
        assert_eq!(m.inverse(&el(&m, "α")), Err(Error::NotInvertible));
        let c = Monoid::cyclic(3).unwrap();
        assert_eq!(c.inverse(&Element::Residue(2)), Ok(Element::Residue(1)));
        for m in [Monoid::nat_add(), Monoid::commutative(&["α"]), trace()] {
            assert!(m.is_invertible(&m.unit()));
        }
    }

    #[test]
    fn left_invertible_factors() {
        let m = free();
        let ab = Some(el(&m, "αβ"));
        let ba = Some(el(&m, "βα"));
        assert_eq!(m.factor_left_invertible(&ab, &ab), Some(m.unit()));
        assert_eq!(m.factor_left_invertible(&ab, &ba), None);
        assert_eq!(m.factor_left_invertible(&None, &None), Some(m.unit()));
        let c = Monoid::cyclic(3).unwrap();
        assert_eq!(
            c.factor_left_invertible(&Some(Element::Residue(1)), &Some(Element::Residue(2))),
            Some(Element::Residue(2))
        );
    }

    #[test]
    fn row_comparisons() {
        let m = free();
        assert_eq!(
            m.rows_equal_up_to_left_invertible(&row(&m, &["⊥", "αβ"]), &row(&m, &["⊥", "αβ"])),
            Some(m.unit())
        );
        assert_eq!(
            m.rows_equal_up_to_left_invertible(&row(&m, &["⊥", "α"]), &row(&m, &["α", "⊥"])),
            None
        );
        let c = Monoid::cyclic(3).unwrap();
        assert_eq!(
            c.rows_equal_up_to_left_invertible(&row(&c, &["1", "2"]), &row(&c, &["0", "1"])),
            Some(Element::Residue(1))
        );
    }

    #[test]
    fn reduced_rows() {
        let m = free();
        assert_eq!(m.red_row(&row(&m, &["αβα", "αββ"])), row(&m, &["α", "β"]));
        assert_eq!(m.red_row(&row(&m, &["⊥", "⊥"])), row(&m, &["⊥", "⊥"]));
        let c = Monoid::cyclic(3).unwrap();
        assert_eq!(c.red_row(&row(&c, &["1", "2"])), row(&c, &["0", "1"]));
    }

    #[test]
    fn ranks() {
        let m = free();
        assert_eq!(m.rank(&el(&m, "αβα")), 3);
        assert_eq!(m.rank(&m.unit()), 0);
        assert_eq!(Monoid::cyclic(3).unwrap().rank(&Element::Residue(2)), 0);
        assert_eq!(Monoid::nat_add().rank(&Element::Nat(7)), 7);
    }

    #[test]
    fn text_forms() {
        let m = Monoid::free(&["α", "β"]);
        assert_eq!(m.parse("α·β").unwrap(), Element::Word(vec![0, 1]));
        assert_eq!(m.render(&Element::Word(vec![0, 1])), "α·β");
        let t = Monoid::trace(&["α", "β"], &[("α", "β")]).unwrap();
        assert_eq!(t.render(&t.parse("β·α").unwrap()), "α·β");
        let n = Monoid::nat_add();
        assert_eq!(n.parse("5").unwrap(), Element::Nat(5));
        assert_eq!(n.render(&Element::Nat(5)), "5");
        assert_eq!(m.parse("δ"), Err(Error::UnknownGenerator("δ".into())));
        assert!(matches!(m.parse("α··β"), Err(Error::MalformedElement(_))));
        assert!(matches!(n.parse("-1"), Err(Error::MalformedElement(_))));
        let long = Monoid::free(&["ab", "c"]);
        assert_eq!(long.parse("ab·c").unwrap(), Element::Word(vec![0, 1]));
        assert!(long.parse("abc").is_err());
    }

    #[test]
    fn wire_forms() {
        let c = Monoid::commutative(&["β", "α"]);
        let x = c.parse("β·α·α").unwrap();
        assert_eq!(c.to_json(&x).to_string(), r#"{"α":2,"β":1}"#);
        assert_eq!(c.from_json(&c.to_json(&x)).unwrap(), (x, true));
        let t = trace();
        let (y, canonical) = t.from_json(&serde_json::json!(["β", "α"])).unwrap();
        assert!(!canonical);
        assert_eq!(t.to_json(&y), serde_json::json!(["α", "β"]));
        let z = Monoid::cyclic(3).unwrap();
        assert_eq!(z.from_json(&serde_json::json!(4)).unwrap(), (Element::Residue(1), false));
    }

    #[test]
    fn invalid_presentations() {
        assert!(Monoid::trace(&["α", "β"], &[("α", "α")]).is_err());
        assert!(Monoid::trace(&["α", "β"], &[("α", "δ")]).is_err());
        assert!(Monoid::cyclic(0).is_err());
        assert!(Monoid::new(MonoidSpec {
            kind: MonoidKind::Free,
            generators: vec!["α".into(), "α".into()],
            commutations: vec![],
            modulus: None,
        })
        .is_err());
        assert!(Monoid::new(MonoidSpec {
            kind: MonoidKind::Free,
            generators: vec!["".into()],
            commutations: vec![],
            modulus: None,
        })
        .is_err());
    }
}
