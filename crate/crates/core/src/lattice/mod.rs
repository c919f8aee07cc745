//! Finite lattices and special elements.
//!
//! For an element `x` and all `y, z`:
//!
//! | property | condition |
//! |---|---|
//! | neutral | `(x∨y)∧(y∨z)∧(z∨x) = (x∧y)∨(y∧z)∨(z∧x)` |
//! | standard | `(x∨y)∧z = (x∧z)∨(y∧z)` |
//! | modular | `y ≤ z ⇒ (x∨y)∧z = (x∧z)∨y` |
//! | lower-modular | `x ≤ y ⇒ x∨(y∧z) = y∧(x∨z)` |
//!
//! Costandard and upper-modular are the duals of standard and
//! lower-modular, evaluated on [`FiniteLattice::dual`].

mod enumerate;
mod format;

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

pub use enumerate::{enumerate_lattices, lattice_universe, mine_modular_lower_modular_not_standard, MinedExample, MAX_LATTICE_SIZE};
pub use format::{parse_lattice_file, render_lattice, LatticeFormatError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("empty lattice")]
    Empty,
    #[error("pair ({0}, {1}) is out of range")]
    OutOfRange(usize, usize),
    #[error("not a partial order: {0} <= {1} <= {0}")]
    Cycle(usize, usize),
    #[error("{0} and {1} have no unique meet")]
    NoMeet(usize, usize),
    #[error("{0} and {1} have no unique join")]
    NoJoin(usize, usize),
    #[error("lattice size {size} exceeds the cap {cap}")]
    SizeCapExceeded { size: usize, cap: usize },
    #[error("element {element}: {stronger} holds but {weaker} fails")]
    Inconsistent { element: usize, stronger: Property, weaker: Property },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FiniteLattice {
    size: usize,
    leq: Vec<bool>,
    meet: Vec<usize>,
    join: Vec<usize>,
    bottom: usize,
    top: usize,
    names: Option<Vec<String>>,
    label: Option<String>,
}

impl FiniteLattice {
    /// Takes the reflexive-transitive closure of `pairs` (each `(i, j)`
    /// meaning `i <= j`) and checks that every two elements have a meet and
    /// a join.
    pub fn from_leq_pairs(size: usize, pairs: &[(usize, usize)]) -> Result<FiniteLattice, LatticeError> {
        if size == 0 {
            return Err(LatticeError::Empty);
        }
        let mut leq = vec![false; size * size];
        for i in 0..size {
            leq[i * size + i] = true;
        }
        for &(i, j) in pairs {
            if i >= size || j >= size {
                return Err(LatticeError::OutOfRange(i, j));
            }
            leq[i * size + j] = true;
        }
        for k in 0..size {
            for i in 0..size {
                if leq[i * size + k] {
                    for j in 0..size {
                        if leq[k * size + j] {
                            leq[i * size + j] = true;
                        }
                    }
                }
            }
        }
        Self::from_order_matrix(size, leq)
    }

    /// `leq` must already be reflexive and transitive.
    pub(crate) fn from_order_matrix(size: usize, leq: Vec<bool>) -> Result<FiniteLattice, LatticeError> {
        for i in 0..size {
            for j in i + 1..size {
                if leq[i * size + j] && leq[j * size + i] {
                    return Err(LatticeError::Cycle(i, j));
                }
            }
        }
        let le = |a: usize, b: usize| leq[a * size + b];
        let bound = |a: usize, b: usize, lower: bool| -> Option<usize> {
            let below = |c: usize, d: usize| if lower { le(c, d) } else { le(d, c) };
            let candidates: Vec<usize> = (0..size).filter(|&c| below(c, a) && below(c, b)).collect();
            candidates
                .iter()
                .copied()
                .find(|&g| candidates.iter().all(|&c| below(c, g)))
        };
        let mut meet = vec![0; size * size];
        let mut join = vec![0; size * size];
        for a in 0..size {
            for b in 0..size {
                meet[a * size + b] = bound(a, b, true).ok_or(LatticeError::NoMeet(a, b))?;
                join[a * size + b] = bound(a, b, false).ok_or(LatticeError::NoJoin(a, b))?;
            }
        }
        let bottom = (0..size).find(|&b| (0..size).all(|c| le(b, c))).expect("lattice has a bottom");
        let top = (0..size).find(|&t| (0..size).all(|c| le(c, t))).expect("lattice has a top");
        Ok(FiniteLattice { size, leq, meet, join, bottom, top, names: None, label: None })
    }

    pub fn named(mut self, label: impl Into<String>) -> FiniteLattice {
        self.label = Some(label.into());
        self
    }

    pub fn with_element_names(mut self, names: Vec<String>) -> FiniteLattice {
        assert_eq!(names.len(), self.size);
        self.names = Some(names);
        self
    }

    pub fn label(&self) -> &str {
        self.label.as_deref().unwrap_or("L")
    }

    pub fn element_name(&self, e: usize) -> String {
        match &self.names {
            Some(n) => n[e].clone(),
            None => e.to_string(),
        }
    }

    pub fn element_by_name(&self, name: &str) -> Option<usize> {
        (0..self.size).find(|&e| self.element_name(e) == name)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.size
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.size + b]
    }

    #[inline]
    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    #[inline]
    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.size + b]
    }

    #[inline]
    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.size + b]
    }

    /// Covering pairs `(a, b)` with `a < b` and nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in self.elements() {
            for b in self.elements() {
                if self.lt(a, b) && !self.elements().any(|c| self.lt(a, c) && self.lt(c, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// The order-reversed lattice on the same element indices.
    pub fn dual(&self) -> FiniteLattice {
        let n = self.size;
        let leq = (0..n * n).map(|k| self.leq[(k % n) * n + k / n]).collect();
        FiniteLattice {
            size: n,
            leq,
            meet: self.join.clone(),
            join: self.meet.clone(),
            bottom: self.top,
            top: self.bottom,
            names: self.names.clone(),
            label: Some(format!("dual {}", self.label())),
        }
    }

    pub fn is_distributive(&self) -> bool {
        self.elements().all(|x| {
            self.elements().all(|y| {
                self.elements()
                    .all(|z| self.meet(x, self.join(y, z)) == self.join(self.meet(x, y), self.meet(x, z)))
            })
        })
    }

    pub fn is_modular(&self) -> bool {
        self.elements().all(|x| find_pentagon_witness(self, x).is_none())
    }

    /// Closure of `subset` under meet and join, with its embedding into `self`.
    pub fn sublattice_generated(&self, subset: &[usize]) -> (FiniteLattice, Vec<usize>) {
        let mut set: BTreeSet<usize> = subset.iter().copied().collect();
        loop {
            let current: Vec<usize> = set.iter().copied().collect();
            let mut grew = false;
            for &a in &current {
                for &b in &current {
                    grew |= set.insert(self.meet(a, b));
                    grew |= set.insert(self.join(a, b));
                }
            }
            if !grew {
                break;
            }
        }
        let embedding: Vec<usize> = set.into_iter().collect();
        let k = embedding.len();
        let leq = (0..k * k)
            .map(|i| self.leq(embedding[i / k], embedding[i % k]))
            .collect();
        let mut sub = FiniteLattice::from_order_matrix(k, leq).expect("meet/join closed subsets are lattices");
        if self.names.is_some() {
            sub.names = Some(embedding.iter().map(|&e| self.element_name(e)).collect());
        }
        (sub, embedding)
    }

    /// Element map onto `other` preserving order both ways, if any.
    pub fn isomorphism_to(&self, other: &FiniteLattice) -> Option<Vec<usize>> {
        if self.size != other.size {
            return None;
        }
        fn go(a: &FiniteLattice, b: &FiniteLattice, k: usize, map: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
            if k == a.size {
                return true;
            }
            for t in b.elements() {
                if used[t] {
                    continue;
                }
                let ok = (0..k).all(|p| a.leq(p, k) == b.leq(map[p], t) && a.leq(k, p) == b.leq(t, map[p]));
                if ok {
                    map.push(t);
                    used[t] = true;
                    if go(a, b, k + 1, map, used) {
                        return true;
                    }
                    used[t] = false;
                    map.pop();
                }
            }
            false
        }
        let mut map = Vec::with_capacity(self.size);
        let mut used = vec![false; self.size];
        go(self, other, 0, &mut map, &mut used).then_some(map)
    }

    pub fn is_isomorphic(&self, other: &FiniteLattice) -> bool {
        self.isomorphism_to(other).is_some()
    }
}

impl fmt::Display for FiniteLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render_lattice(self))
    }
}

/// `0 < 1 < ... < n-1`.
pub fn chain(n: usize) -> FiniteLattice {
    let pairs: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
    FiniteLattice::from_leq_pairs(n, &pairs).unwrap().named(format!("chain{n}"))
}

/// The pentagon `{0, u, w, x, 1}` with `u < w` and `x` beside them.
pub fn pentagon() -> FiniteLattice {
    FiniteLattice::from_leq_pairs(5, &[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)])
        .unwrap()
        .with_element_names(["0", "u", "w", "x", "1"].map(String::from).to_vec())
        .named("N5")
}

/// The diamond `{0, a, b, c, 1}` with three pairwise incomparable atoms.
pub fn diamond() -> FiniteLattice {
    FiniteLattice::from_leq_pairs(5, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)])
        .unwrap()
        .with_element_names(["0", "a", "b", "c", "1"].map(String::from).to_vec())
        .named("M3")
}

/// Subsets of a `k`-element set under inclusion; element `i` is the bitmask `i`.
pub fn boolean_lattice(k: usize) -> FiniteLattice {
    let n = 1usize << k;
    let leq = (0..n * n).map(|c| (c / n) & !(c % n) == 0).collect();
    FiniteLattice::from_order_matrix(n, leq).unwrap().named(format!("B{k}"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Property {
    Neutral,
    Standard,
    Costandard,
    Modular,
    LowerModular,
    UpperModular,
}

impl Property {
    pub const ALL: [Property; 6] = [
        Property::Neutral,
        Property::Standard,
        Property::Costandard,
        Property::Modular,
        Property::LowerModular,
        Property::UpperModular,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::Neutral => "neutral",
            Property::Standard => "standard",
            Property::Costandard => "costandard",
            Property::Modular => "modular",
            Property::LowerModular => "lower_modular",
            Property::UpperModular => "upper_modular",
        }
    }

    /// The property whose formula this one evaluates on the dual lattice.
    fn primal(self) -> (Property, bool) {
        match self {
            Property::Costandard => (Property::Standard, true),
            Property::UpperModular => (Property::LowerModular, true),
            p => (p, false),
        }
    }

    /// Evaluates the defining formula at one `(y, z)` pair.
    pub fn holds_at(self, l: &FiniteLattice, x: usize, y: usize, z: usize) -> bool {
        match self.primal() {
            (p, true) => p.holds_at(&l.dual(), x, y, z),
            (Property::Neutral, _) => {
                let lhs = l.meet(l.meet(l.join(x, y), l.join(y, z)), l.join(z, x));
                let rhs = l.join(l.join(l.meet(x, y), l.meet(y, z)), l.meet(z, x));
                lhs == rhs
            }
            (Property::Standard, _) => l.meet(l.join(x, y), z) == l.join(l.meet(x, z), l.meet(y, z)),
            (Property::Modular, _) => !l.leq(y, z) || l.meet(l.join(x, y), z) == l.join(l.meet(x, z), y),
            (Property::LowerModular, _) => !l.leq(x, y) || l.join(x, l.meet(y, z)) == l.meet(y, l.join(x, z)),
            _ => unreachable!("dual properties are handled above"),
        }
    }

    /// First falsifying `(y, z)` in index order, or `None` if `x` has the property.
    pub fn witness(self, l: &FiniteLattice, x: usize) -> Option<(usize, usize)> {
        let (p, dualise) = self.primal();
        let dual;
        let target = if dualise {
            dual = l.dual();
            &dual
        } else {
            l
        };
        target
            .elements()
            .flat_map(|y| target.elements().map(move |z| (y, z)))
            .find(|&(y, z)| !p.holds_at(target, x, y, z))
    }

    pub fn holds(self, l: &FiniteLattice, x: usize) -> bool {
        self.witness(l, x).is_none()
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn is_neutral_element(l: &FiniteLattice, x: usize) -> Option<(usize, usize)> {
    Property::Neutral.witness(l, x)
}

pub fn is_standard_element(l: &FiniteLattice, x: usize) -> Option<(usize, usize)> {
    Property::Standard.witness(l, x)
}

pub fn is_costandard_element(l: &FiniteLattice, x: usize) -> Option<(usize, usize)> {
    Property::Costandard.witness(l, x)
}

pub fn is_modular_element(l: &FiniteLattice, x: usize) -> Option<(usize, usize)> {
    Property::Modular.witness(l, x)
}

pub fn is_lower_modular_element(l: &FiniteLattice, x: usize) -> Option<(usize, usize)> {
    Property::LowerModular.witness(l, x)
}

pub fn is_upper_modular_element(l: &FiniteLattice, x: usize) -> Option<(usize, usize)> {
    Property::UpperModular.witness(l, x)
}

/// First `u < w` (index order) with `x∨u = x∨w` and `x∧u = x∧w`; such a
/// pair exists iff `x` is not modular, and `{x∧u, u, w, x, x∨u}` is then
/// a pentagon.
pub fn find_pentagon_witness(l: &FiniteLattice, x: usize) -> Option<(usize, usize)> {
    l.elements()
        .flat_map(|u| l.elements().map(move |w| (u, w)))
        .find(|&(u, w)| l.lt(u, w) && l.join(x, u) == l.join(x, w) && l.meet(x, u) == l.meet(x, w))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ElementReport {
    pub element: usize,
    pub neutral: bool,
    pub standard: bool,
    pub costandard: bool,
    pub modular: bool,
    pub lower_modular: bool,
    pub upper_modular: bool,
    /// One falsifying `(y, z)` per failed property.
    pub witnesses: Vec<(Property, (usize, usize))>,
}

impl ElementReport {
    pub fn get(&self, p: Property) -> bool {
        match p {
            Property::Neutral => self.neutral,
            Property::Standard => self.standard,
            Property::Costandard => self.costandard,
            Property::Modular => self.modular,
            Property::LowerModular => self.lower_modular,
            Property::UpperModular => self.upper_modular,
        }
    }
}

/// Implications that hold for elements of every lattice.
pub const IMPLICATIONS: [(Property, Property); 6] = [
    (Property::Neutral, Property::Standard),
    (Property::Neutral, Property::Costandard),
    (Property::Standard, Property::Modular),
    (Property::Standard, Property::LowerModular),
    (Property::Costandard, Property::Modular),
    (Property::Costandard, Property::UpperModular),
];

/// Runs all six predicates; fails if the results contradict [`IMPLICATIONS`].
pub fn classify_element(l: &FiniteLattice, x: usize) -> Result<ElementReport, LatticeError> {
    let results: Vec<(Property, Option<(usize, usize)>)> =
        Property::ALL.iter().map(|&p| (p, p.witness(l, x))).collect();
    let has = |p: Property| results.iter().any(|&(q, w)| q == p && w.is_none());
    for (stronger, weaker) in IMPLICATIONS {
        if has(stronger) && !has(weaker) {
            return Err(LatticeError::Inconsistent { element: x, stronger, weaker });
        }
    }
    Ok(ElementReport {
        element: x,
        neutral: has(Property::Neutral),
        standard: has(Property::Standard),
        costandard: has(Property::Costandard),
        modular: has(Property::Modular),
        lower_modular: has(Property::LowerModular),
        upper_modular: has(Property::UpperModular),
        witnesses: results.into_iter().filter_map(|(p, w)| w.map(|w| (p, w))).collect(),
    })
}

#[cfg(test)]
mod tests;
