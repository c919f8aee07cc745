//! Finite monoids given by multiplication tables.

mod construct;
mod enumerate;
mod format;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::word::{Identity, Letter, Word};

pub use construct::{cyclic_chain, direct_product, lrb_monoid, s_monoid, semilattice2, trivial_monoid, cyclic_group};
pub use enumerate::{enumerate_monoids, monoid_universe, MAX_ENUMERATION_SIZE};
pub use format::{parse_monoid_file, resolve_monoid_name, FormatError};

/// Index of an element inside a [`FiniteMonoid`].
pub type Element = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonoidError {
    #[error("empty table")]
    Empty,
    #[error("row {row} has {len} entries, expected {size}")]
    NotSquare { row: usize, len: usize, size: usize },
    #[error("entry ({row}, {col}) = {value} is out of range")]
    OutOfRange { row: usize, col: usize, value: usize },
    #[error("not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NonAssociative { a: Element, b: Element, c: Element },
    #[error("element {0} is not a two-sided identity")]
    NotIdentity(Element),
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("letter {0} is not assigned")]
    Unassigned(Letter),
    #[error("enumeration size {size} exceeds the cap {cap}")]
    SizeCapExceeded { size: usize, cap: usize },
}

/// A map from letters to monoid elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Assignment(BTreeMap<Letter, Element>);

impl Assignment {
    pub fn new() -> Assignment {
        Assignment::default()
    }

    pub fn with(mut self, l: Letter, e: Element) -> Assignment {
        self.0.insert(l, e);
        self
    }

    pub fn get(&self, l: Letter) -> Option<Element> {
        self.0.get(&l).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Letter, Element)> + '_ {
        self.0.iter().map(|(&l, &e)| (l, e))
    }

    /// Renders as `x->[a], y->[b]` using the monoid's element names.
    pub fn describe(&self, m: &FiniteMonoid) -> String {
        self.0
            .iter()
            .map(|(l, &e)| format!("{l}->[{}]", m.element_name(e)))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

/// Outcome of checking an identity in a monoid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Satisfaction {
    Holds,
    /// The lexicographically least falsifying assignment.
    Fails(Assignment),
}

impl Satisfaction {
    pub fn holds(&self) -> bool {
        matches!(self, Satisfaction::Holds)
    }
}

/// A validated finite monoid.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FiniteMonoid {
    size: usize,
    identity: Element,
    table: Vec<Element>,
    names: Option<Vec<String>>,
    label: Option<String>,
}

impl FiniteMonoid {
    /// Validates a square table, locating the identity element.
    pub fn from_table(rows: Vec<Vec<Element>>) -> Result<FiniteMonoid, MonoidError> {
        let size = rows.len();
        let table = flatten(rows)?;
        check_associative(size, &table)?;
        let identity = (0..size)
            .find(|&e| is_identity(size, &table, e))
            .ok_or(MonoidError::NoIdentity)?;
        Ok(FiniteMonoid { size, identity, table, names: None, label: None })
    }

    /// Validates a square table against a declared identity element.
    pub fn with_identity(rows: Vec<Vec<Element>>, identity: Element) -> Result<FiniteMonoid, MonoidError> {
        let size = rows.len();
        let table = flatten(rows)?;
        if identity >= size || !is_identity(size, &table, identity) {
            return Err(MonoidError::NotIdentity(identity));
        }
        check_associative(size, &table)?;
        Ok(FiniteMonoid { size, identity, table, names: None, label: None })
    }

    /// Skips validation; used by constructions whose output is known to be a monoid.
    pub(crate) fn from_parts_unchecked(size: usize, identity: Element, table: Vec<Element>) -> FiniteMonoid {
        debug_assert_eq!(table.len(), size * size);
        FiniteMonoid { size, identity, table, names: None, label: None }
    }

    pub fn named(mut self, label: impl Into<String>) -> FiniteMonoid {
        self.label = Some(label.into());
        self
    }

    pub fn with_element_names(mut self, names: Vec<String>) -> FiniteMonoid {
        assert_eq!(names.len(), self.size);
        self.names = Some(names);
        self
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn identity(&self) -> Element {
        self.identity
    }

    pub fn label(&self) -> &str {
        self.label.as_deref().unwrap_or("M")
    }

    pub fn element_name(&self, e: Element) -> String {
        match &self.names {
            Some(names) => names[e].clone(),
            None => e.to_string(),
        }
    }

    pub fn element_names(&self) -> Vec<String> {
        (0..self.size).map(|e| self.element_name(e)).collect()
    }

    pub fn element_by_name(&self, name: &str) -> Option<Element> {
        (0..self.size).find(|&e| self.element_name(e) == name)
    }

    #[inline]
    pub fn mul(&self, a: Element, b: Element) -> Element {
        self.table[a * self.size + b]
    }

    pub fn rows(&self) -> Vec<Vec<Element>> {
        self.table.chunks(self.size).map(|r| r.to_vec()).collect()
    }

    pub(crate) fn raw_table(&self) -> &[Element] {
        &self.table
    }

    pub fn elements(&self) -> std::ops::Range<Element> {
        0..self.size
    }

    pub fn product<I: IntoIterator<Item = Element>>(&self, items: I) -> Element {
        items.into_iter().fold(self.identity, |acc, e| self.mul(acc, e))
    }

    pub fn evaluate(&self, assignment: &Assignment, w: &Word) -> Result<Element, MonoidError> {
        let mut acc = self.identity;
        for &l in w.letters() {
            let e = assignment.get(l).ok_or(MonoidError::Unassigned(l))?;
            acc = self.mul(acc, e);
        }
        Ok(acc)
    }

    /// Evaluates with letter images given positionally for the sorted `letters`.
    fn evaluate_indexed(&self, positions: &[usize], values: &[Element]) -> Element {
        positions
            .iter()
            .fold(self.identity, |acc, &p| self.mul(acc, values[p]))
    }

    /// Checks `id` under every assignment of its letters, in lexicographic order.
    pub fn satisfies(&self, id: &Identity) -> Satisfaction {
        let letters: Vec<Letter> = id.content().into_iter().collect();
        let index = |w: &Word| -> Vec<usize> {
            w.letters()
                .iter()
                .map(|l| letters.binary_search(l).unwrap())
                .collect()
        };
        let (lhs, rhs) = (index(&id.lhs), index(&id.rhs));
        let mut values = vec![0; letters.len()];
        loop {
            if self.evaluate_indexed(&lhs, &values) != self.evaluate_indexed(&rhs, &values) {
                let assignment = letters
                    .iter()
                    .zip(&values)
                    .fold(Assignment::new(), |a, (&l, &v)| a.with(l, v));
                return Satisfaction::Fails(assignment);
            }
            if !odometer(&mut values, self.size) {
                return Satisfaction::Holds;
            }
        }
    }

    pub fn satisfies_all<'a, I: IntoIterator<Item = &'a Identity>>(&self, ids: I) -> bool {
        ids.into_iter().all(|id| self.satisfies(id).holds())
    }

    /// Closure of `generators` and the identity, re-indexed with the identity at 0.
    pub fn submonoid(&self, generators: &[Element]) -> FiniteMonoid {
        self.submonoid_with_embedding(generators).0
    }

    /// Like [`FiniteMonoid::submonoid`], also returning the embedding into `self`.
    pub fn submonoid_with_embedding(&self, generators: &[Element]) -> (FiniteMonoid, Vec<Element>) {
        let closure = self.closure(generators);
        let mut order: Vec<Element> = vec![self.identity];
        order.extend(closure.iter().copied().filter(|&e| e != self.identity));
        let mut position = vec![usize::MAX; self.size];
        for (i, &e) in order.iter().enumerate() {
            position[e] = i;
        }
        let k = order.len();
        let mut table = Vec::with_capacity(k * k);
        for &a in &order {
            for &b in &order {
                table.push(position[self.mul(a, b)]);
            }
        }
        let mut sub = FiniteMonoid::from_parts_unchecked(k, 0, table);
        if self.names.is_some() {
            sub.names = Some(order.iter().map(|&e| self.element_name(e)).collect());
        }
        sub.label = Some(format!("sub({})", self.label()));
        (sub, order)
    }

    /// Elements of the submonoid generated by `generators`, sorted.
    pub fn closure(&self, generators: &[Element]) -> BTreeSet<Element> {
        let mut seen = vec![false; self.size];
        seen[self.identity] = true;
        let mut queue = vec![self.identity];
        while let Some(a) = queue.pop() {
            for &g in generators {
                let p = self.mul(a, g);
                if !seen[p] {
                    seen[p] = true;
                    queue.push(p);
                }
            }
        }
        (0..self.size).filter(|&e| seen[e]).collect()
    }

    /// Smallest `(index, period)` with `x^(index+period) = x^index`.
    pub fn index_period(&self, x: Element) -> (usize, usize) {
        let mut first_seen = vec![usize::MAX; self.size];
        let mut power = x;
        let mut exp = 1;
        loop {
            if first_seen[power] != usize::MAX {
                let index = first_seen[power];
                return (index, exp - index);
            }
            first_seen[power] = exp;
            power = self.mul(power, x);
            exp += 1;
        }
    }

    pub fn is_completely_regular(&self) -> bool {
        self.elements().all(|e| self.index_period(e).0 == 1)
    }

    pub fn is_group(&self) -> bool {
        self.elements().all(|a| {
            self.elements()
                .any(|b| self.mul(a, b) == self.identity && self.mul(b, a) == self.identity)
        })
    }

    pub fn is_commutative(&self) -> bool {
        self.elements()
            .all(|a| (a + 1..self.size).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Least common multiple of all element periods.
    pub fn exponent_period(&self) -> usize {
        self.elements()
            .map(|e| self.index_period(e).1)
            .fold(1, |acc, p| acc / gcd(acc, p) * p)
    }

    /// Greedy small generating set: repeatedly adds the element whose
    /// inclusion enlarges the generated submonoid most (ties: lowest index),
    /// then drops redundant generators.
    pub fn generating_set(&self) -> Vec<Element> {
        let mut gens: Vec<Element> = Vec::new();
        let mut covered = self.closure(&gens);
        while covered.len() < self.size {
            let best = self
                .elements()
                .filter(|e| !covered.contains(e))
                .max_by_key(|&e| {
                    let mut trial = gens.clone();
                    trial.push(e);
                    (self.closure(&trial).len(), std::cmp::Reverse(e))
                })
                .expect("uncovered element exists");
            gens.push(best);
            covered = self.closure(&gens);
        }
        let mut i = 0;
        while i < gens.len() {
            let mut without = gens.clone();
            without.remove(i);
            if self.closure(&without).len() == self.size {
                gens = without;
            } else {
                i += 1;
            }
        }
        gens.sort();
        gens
    }

    /// Searches for an isomorphism onto `other`, returned as an element map.
    pub fn isomorphism_to(&self, other: &FiniteMonoid) -> Option<Vec<Element>> {
        if self.size != other.size {
            return None;
        }
        let mut map = vec![usize::MAX; self.size];
        let mut used = vec![false; self.size];
        map[self.identity] = other.identity;
        used[other.identity] = true;
        let order: Vec<Element> = self.elements().filter(|&e| e != self.identity).collect();
        fn extend(a: &FiniteMonoid, b: &FiniteMonoid, order: &[Element], k: usize, map: &mut Vec<Element>, used: &mut Vec<bool>) -> bool {
            if k == order.len() {
                return a.elements().all(|x| a.elements().all(|y| map[a.mul(x, y)] == b.mul(map[x], map[y])));
            }
            let x = order[k];
            for y in b.elements() {
                if used[y] {
                    continue;
                }
                map[x] = y;
                used[y] = true;
                // prune on products among already-mapped elements
                let consistent = order[..=k].iter().chain(std::iter::once(&a.identity)).all(|&p| {
                    let q = a.mul(x, p);
                    let r = a.mul(p, x);
                    (map[q] == usize::MAX || map[q] == b.mul(y, map[p]))
                        && (map[r] == usize::MAX || map[r] == b.mul(map[p], y))
                });
                if consistent && extend(a, b, order, k + 1, map, used) {
                    return true;
                }
                used[y] = false;
                map[x] = usize::MAX;
            }
            false
        }
        extend(self, other, &order, 0, &mut map, &mut used).then_some(map)
    }

    pub fn is_isomorphic(&self, other: &FiniteMonoid) -> bool {
        self.isomorphism_to(other).is_some()
    }
}

impl fmt::Display for FiniteMonoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format::render(self))
    }
}

fn flatten(rows: Vec<Vec<Element>>) -> Result<Vec<Element>, MonoidError> {
    let size = rows.len();
    if size == 0 {
        return Err(MonoidError::Empty);
    }
    let mut table = Vec::with_capacity(size * size);
    for (row, r) in rows.into_iter().enumerate() {
        if r.len() != size {
            return Err(MonoidError::NotSquare { row, len: r.len(), size });
        }
        for (col, &value) in r.iter().enumerate() {
            if value >= size {
                return Err(MonoidError::OutOfRange { row, col, value });
            }
        }
        table.extend(r);
    }
    Ok(table)
}

fn is_identity(size: usize, table: &[Element], e: Element) -> bool {
    (0..size).all(|a| table[e * size + a] == a && table[a * size + e] == a)
}

pub(crate) fn check_associative(size: usize, table: &[Element]) -> Result<(), MonoidError> {
    for a in 0..size {
        for b in 0..size {
            let ab = table[a * size + b];
            for c in 0..size {
                if table[ab * size + c] != table[a * size + table[b * size + c]] {
                    return Err(MonoidError::NonAssociative { a, b, c });
                }
            }
        }
    }
    Ok(())
}

/// Advances `values` as a base-`radix` counter, most significant digit first.
/// Returns false after the last combination.
pub(crate) fn odometer(values: &mut [usize], radix: usize) -> bool {
    for v in values.iter_mut().rev() {
        *v += 1;
        if *v < radix {
            return true;
        }
        *v = 0;
    }
    false
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 { a } else { gcd(b, a % b) }
}
