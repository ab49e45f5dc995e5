//! Permutations of the prime indices `1, 2, 3, ...`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A permutation moving finitely many indices; both directions are stored.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FiniteSupportPermutation {
    forward: BTreeMap<usize, usize>,
    inverse: BTreeMap<usize, usize>,
}

impl FiniteSupportPermutation {
    pub fn identity() -> Self {
        Self::default()
    }

    /// Builds from an index map; fixed points are dropped and the map must be
    /// a bijection of its key set onto itself.
    pub fn from_map(map: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let forward: BTreeMap<usize, usize> = map.into_iter().filter(|(a, b)| a != b).collect();
        let mut inverse = BTreeMap::new();
        for (&a, &b) in &forward {
            if a == 0 || b == 0 {
                return Err(Error::invalid("permutation indices are 1-based"));
            }
            if inverse.insert(b, a).is_some() {
                return Err(Error::invalid(format!("index {b} has two preimages")));
            }
        }
        let keys: BTreeSet<usize> = forward.keys().copied().collect();
        let values: BTreeSet<usize> = inverse.keys().copied().collect();
        if keys != values {
            return Err(Error::invalid("map does not permute its support"));
        }
        Ok(FiniteSupportPermutation { forward, inverse })
    }

    /// Product of disjoint cycles.
    pub fn from_cycles(cycles: &[Vec<usize>]) -> Result<Self> {
        let mut map = BTreeMap::new();
        let mut seen = BTreeSet::new();
        for cycle in cycles {
            for (k, &a) in cycle.iter().enumerate() {
                if !seen.insert(a) {
                    return Err(Error::invalid(format!("index {a} appears in two cycles")));
                }
                map.insert(a, cycle[(k + 1) % cycle.len()]);
            }
        }
        Self::from_map(map)
    }

    pub fn apply(&self, i: usize) -> usize {
        self.forward.get(&i).copied().unwrap_or(i)
    }

    pub fn apply_inverse(&self, i: usize) -> usize {
        self.inverse.get(&i).copied().unwrap_or(i)
    }

    pub fn inverse(&self) -> Self {
        FiniteSupportPermutation {
            forward: self.inverse.clone(),
            inverse: self.forward.clone(),
        }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        let support: BTreeSet<usize> = self
            .forward
            .keys()
            .chain(other.forward.keys())
            .copied()
            .collect();
        Self::from_map(support.into_iter().map(|i| (i, self.apply(other.apply(i)))))
            .expect("composition of permutations is a permutation")
    }

    pub fn is_identity(&self) -> bool {
        self.forward.is_empty()
    }

    /// Moved indices, increasing.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.forward.keys().copied()
    }

    pub fn max_moved(&self) -> usize {
        self.forward.keys().next_back().copied().unwrap_or(0)
    }

    /// Disjoint cycles, each starting at its smallest element, ordered by it.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut done = BTreeSet::new();
        let mut out = Vec::new();
        for &start in self.forward.keys() {
            if done.contains(&start) {
                continue;
            }
            let mut cycle = vec![start];
            done.insert(start);
            let mut i = self.apply(start);
            while i != start {
                done.insert(i);
                cycle.push(i);
                i = self.apply(i);
            }
            out.push(cycle);
        }
        out
    }
}

impl fmt::Display for FiniteSupportPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("()");
        }
        for cycle in self.cycles() {
            let body: Vec<String> = cycle.iter().map(usize::to_string).collect();
            write!(f, "({})", body.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for FiniteSupportPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for FiniteSupportPermutation {
    type Err = Error;

    /// Cycle notation such as `"(1 2)(4 5 6)"`; `"()"` is the identity.
    /// Entries may be separated by spaces or commas.
    fn from_str(text: &str) -> Result<Self> {
        let mut cycles = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::Parse(format!("expected '(' in permutation {text:?}")))?;
            let close = body
                .find(')')
                .ok_or_else(|| Error::Parse(format!("unclosed cycle in permutation {text:?}")))?;
            let cycle = body[..close]
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse::<usize>().ok().filter(|&i| i > 0).ok_or_else(|| {
                        Error::Parse(format!("bad index {s:?} in permutation {text:?}"))
                    })
                })
                .collect::<Result<Vec<usize>>>()?;
            if !cycle.is_empty() {
                cycles.push(cycle);
            }
            rest = body[close + 1..].trim_start();
        }
        Self::from_cycles(&cycles).map_err(|e| Error::Parse(format!("{text:?}: {e}")))
    }
}

/// A permutation of the prime indices.
///
/// `Shift(k)` is translation by `k` on `Z`, transported to the indices by
/// `1 -> 0`, `2j+1 -> j`, `2j -> -j`. For `k = 1` it is the single infinite
/// cycle `... 4 -> 2 -> 1 -> 3 -> 5 ...`, so every index orbit is infinite.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Permutation {
    Finite(FiniteSupportPermutation),
    Shift(i64),
}

fn to_z(i: usize) -> i64 {
    let i = i as i64;
    if i % 2 == 1 {
        (i - 1) / 2
    } else {
        -(i / 2)
    }
}

fn from_z(z: i64) -> usize {
    if z >= 0 {
        (2 * z + 1) as usize
    } else {
        (-2 * z) as usize
    }
}

impl Permutation {
    pub fn identity() -> Self {
        Permutation::Finite(FiniteSupportPermutation::identity())
    }

    pub fn apply(&self, i: usize) -> usize {
        match self {
            Permutation::Finite(p) => p.apply(i),
            Permutation::Shift(k) => from_z(to_z(i) + k),
        }
    }

    pub fn apply_inverse(&self, i: usize) -> usize {
        match self {
            Permutation::Finite(p) => p.apply_inverse(i),
            Permutation::Shift(k) => from_z(to_z(i) - k),
        }
    }

    pub fn inverse(&self) -> Self {
        match self {
            Permutation::Finite(p) => Permutation::Finite(p.inverse()),
            Permutation::Shift(k) => Permutation::Shift(-k),
        }
    }

    pub fn as_finite(&self) -> Option<&FiniteSupportPermutation> {
        match self {
            Permutation::Finite(p) => Some(p),
            Permutation::Shift(_) => None,
        }
    }
}

impl From<FiniteSupportPermutation> for Permutation {
    fn from(p: FiniteSupportPermutation) -> Self {
        Permutation::Finite(p)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Permutation::Finite(p) => write!(f, "{p}"),
            Permutation::Shift(k) => write!(f, "shift({k})"),
        }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Cycle notation, or `"shift(k)"` for the infinite shift.
    fn from_str(text: &str) -> Result<Self> {
        let t = text.trim();
        if let Some(arg) = t.strip_prefix("shift(").and_then(|r| r.strip_suffix(')')) {
            let k: i64 = arg
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad shift amount in {text:?}")))?;
            return Ok(if k == 0 {
                Permutation::identity()
            } else {
                Permutation::Shift(k)
            });
        }
        Ok(Permutation::Finite(t.parse()?))
    }
}

impl TryFrom<String> for Permutation {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Permutation> for String {
    fn from(p: Permutation) -> String {
        p.to_string()
    }
}

/// Default cap on the order of groups that get enumerated.
pub const DEFAULT_ENUMERATION_CAP: usize = 10_000;

/// A generator-presented group, enumerated when finite and small enough.
#[derive(Clone, Debug, PartialEq)]
pub struct PermutationGroup {
    generators: Vec<Permutation>,
    enumeration_cap: usize,
    enumeration: Option<Vec<FiniteSupportPermutation>>,
}

/// JSON shape `{"generators": ["(1 2)", ...], "enumeration_cap": k}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupDocument {
    pub generators: Vec<Permutation>,
    #[serde(default = "default_cap")]
    pub enumeration_cap: usize,
}

fn default_cap() -> usize {
    DEFAULT_ENUMERATION_CAP
}

impl PermutationGroup {
    pub fn new(generators: Vec<Permutation>) -> Self {
        Self::with_cap(generators, DEFAULT_ENUMERATION_CAP)
    }

    pub fn with_cap(generators: Vec<Permutation>, enumeration_cap: usize) -> Self {
        let enumeration = enumerate(&generators, enumeration_cap);
        PermutationGroup {
            generators,
            enumeration_cap,
            enumeration,
        }
    }

    pub fn trivial() -> Self {
        Self::new(Vec::new())
    }

    /// Parses generators in cycle notation.
    pub fn parse(generators: &[&str]) -> Result<Self> {
        Ok(Self::new(
            generators
                .iter()
                .map(|g| g.parse())
                .collect::<Result<Vec<_>>>()?,
        ))
    }

    /// Full symmetric group on `{1, ..., m}`.
    pub fn symmetric(m: usize) -> Self {
        let mut gens = Vec::new();
        if m >= 2 {
            gens.push(
                FiniteSupportPermutation::from_cycles(&[vec![1, 2]])
                    .expect("transposition")
                    .into(),
            );
        }
        if m >= 3 {
            gens.push(
                FiniteSupportPermutation::from_cycles(&[(1..=m).collect()])
                    .expect("cycle")
                    .into(),
            );
        }
        Self::new(gens)
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn enumeration_cap(&self) -> usize {
        self.enumeration_cap
    }

    /// All elements (identity first), when the group is finite and its order
    /// is at most the cap.
    pub fn enumeration(&self) -> Option<&[FiniteSupportPermutation]> {
        self.enumeration.as_deref()
    }

    pub fn order(&self) -> Option<usize> {
        self.enumeration.as_ref().map(Vec::len)
    }

    pub fn from_document(doc: &GroupDocument) -> Self {
        Self::with_cap(doc.generators.clone(), doc.enumeration_cap)
    }

    pub fn to_document(&self) -> GroupDocument {
        GroupDocument {
            generators: self.generators.clone(),
            enumeration_cap: self.enumeration_cap,
        }
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let doc: GroupDocument = serde_json::from_value(value.clone())
            .map_err(|e| Error::Parse(format!("group document: {e}")))?;
        Ok(Self::from_document(&doc))
    }
}

/// Breadth-first closure under right multiplication by generators; `None` if
/// a generator is infinite or the order exceeds `cap`.
fn enumerate(generators: &[Permutation], cap: usize) -> Option<Vec<FiniteSupportPermutation>> {
    let gens: Vec<&FiniteSupportPermutation> = generators
        .iter()
        .map(Permutation::as_finite)
        .collect::<Option<Vec<_>>>()?;
    let id = FiniteSupportPermutation::identity();
    let mut seen: BTreeSet<FiniteSupportPermutation> = BTreeSet::from([id.clone()]);
    let mut order = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        for s in &gens {
            let h = g.compose(s);
            if seen.insert(h.clone()) {
                if seen.len() > cap {
                    return None;
                }
                order.push(h.clone());
                queue.push_back(h);
            }
        }
    }
    Some(order)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_notation_round_trip() {
        let p: FiniteSupportPermutation = "(1 2)(4 5 6)".parse().unwrap();
        assert_eq!(p.apply(1), 2);
        assert_eq!(p.apply(6), 4);
        assert_eq!(p.apply(3), 3);
        assert_eq!(p.apply_inverse(4), 6);
        assert_eq!(p.to_string(), "(1 2)(4 5 6)");
        let q: FiniteSupportPermutation = "(5,6,4) (2 1)".parse().unwrap();
        assert_eq!(p, q);
        assert!(p.compose(&p.inverse()).is_identity());
        assert!("()"
            .parse::<FiniteSupportPermutation>()
            .unwrap()
            .is_identity());
        assert!("(1 2)(2 3)".parse::<FiniteSupportPermutation>().is_err());
        assert!("(1 0)".parse::<FiniteSupportPermutation>().is_err());
        assert!("1 2".parse::<FiniteSupportPermutation>().is_err());
    }

    #[test]
    fn composition_applies_right_factor_first() {
        let a: FiniteSupportPermutation = "(1 2)".parse().unwrap();
        let b: FiniteSupportPermutation = "(2 3)".parse().unwrap();
        let ab = a.compose(&b);
        for i in 1..=4 {
            assert_eq!(ab.apply(i), a.apply(b.apply(i)));
        }
    }

    #[test]
    fn shift_is_the_infinite_cycle() {
        let s: Permutation = "shift(1)".parse().unwrap();
        assert_eq!(s.apply(4), 2);
        assert_eq!(s.apply(2), 1);
        assert_eq!(s.apply(1), 3);
        assert_eq!(s.apply(3), 5);
        for i in 1..200 {
            assert_eq!(s.apply_inverse(s.apply(i)), i);
            assert_ne!(s.apply(i), i);
        }
        assert_eq!(s.inverse().to_string(), "shift(-1)");
    }

    #[test]
    fn enumeration_sizes() {
        assert_eq!(PermutationGroup::symmetric(3).order(), Some(6));
        assert_eq!(PermutationGroup::symmetric(5).order(), Some(120));
        assert_eq!(PermutationGroup::trivial().order(), Some(1));
        let g = PermutationGroup::parse(&["(1 2)", "(4 5 6)"]).unwrap();
        assert_eq!(g.order(), Some(6));
        let capped =
            PermutationGroup::with_cap(PermutationGroup::symmetric(5).generators().to_vec(), 100);
        assert!(capped.enumeration().is_none());
        assert!(PermutationGroup::parse(&["shift(1)"])
            .unwrap()
            .enumeration()
            .is_none());
    }

    #[test]
    fn group_document() {
        let v = serde_json::json!({"generators": ["(1 2)", "shift(2)"], "enumeration_cap": 50});
        let g = PermutationGroup::from_json(&v).unwrap();
        assert_eq!(g.generators().len(), 2);
        assert_eq!(g.enumeration_cap(), 50);
        assert_eq!(serde_json::to_value(g.to_document()).unwrap(), v);
    }
}
