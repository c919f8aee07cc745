use std::collections::HashMap;

use super::{Element, FiniteMonoid};
use crate::word::Word;

/// The one-element monoid.
pub fn trivial_monoid() -> FiniteMonoid {
    FiniteMonoid::from_parts_unchecked(1, 0, vec![0])
        .with_element_names(vec!["1".into()])
        .named("T")
}

/// `{1, e}` with `e*e = e`.
pub fn semilattice2() -> FiniteMonoid {
    FiniteMonoid::from_parts_unchecked(2, 0, vec![0, 1, 1, 1])
        .with_element_names(vec!["1".into(), "e".into()])
        .named("SL2")
}

/// Cyclic group of order `n`.
pub fn cyclic_group(n: usize) -> FiniteMonoid {
    assert!(n >= 1);
    let table = (0..n).flat_map(|a| (0..n).map(move |b| (a + b) % n)).collect();
    let names = (0..n).map(|i| match i {
        0 => "1".to_string(),
        1 => "g".to_string(),
        i => format!("g^{i}"),
    });
    FiniteMonoid::from_parts_unchecked(n, 0, table)
        .with_element_names(names.collect())
        .named(format!("Z{n}"))
}

/// `{1, g, ..., g^n}` with `g^i * g^j = g^min(i+j, n)`.
pub fn cyclic_chain(n: usize) -> FiniteMonoid {
    assert!(n >= 1, "cyclic_chain needs n >= 1");
    let size = n + 1;
    let table = (0..size)
        .flat_map(|a| (0..size).map(move |b| (a + b).min(n)))
        .collect();
    let names = (0..size).map(|i| match i {
        0 => "1".to_string(),
        1 => "g".to_string(),
        i => format!("g^{i}"),
    });
    FiniteMonoid::from_parts_unchecked(size, 0, table)
        .with_element_names(names.collect())
        .named(format!("C{n}"))
}

/// Identity adjoined to the two-element left-zero semigroup `{a, b}`.
pub fn lrb_monoid() -> FiniteMonoid {
    FiniteMonoid::from_parts_unchecked(3, 0, vec![0, 1, 2, 1, 1, 1, 2, 2, 2])
        .with_element_names(vec!["1".into(), "a".into(), "b".into()])
        .named("LRB")
}

/// Rees quotient of the free monoid by the ideal of non-subwords of `w`.
///
/// Element 0 is the empty word, then the non-empty subwords in shortlex
/// order, then the zero.
pub fn s_monoid(w: &Word) -> FiniteMonoid {
    assert!(!w.is_empty(), "S(w) needs a non-empty word");
    let subwords: Vec<Word> = w.subwords().into_iter().collect();
    let zero = subwords.len();
    let size = zero + 1;
    let position: HashMap<&Word, Element> = subwords.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut table = vec![zero; size * size];
    for (i, a) in subwords.iter().enumerate() {
        for (j, b) in subwords.iter().enumerate() {
            if a.len() + b.len() <= w.len() {
                if let Some(&k) = position.get(&a.concat(b)) {
                    table[i * size + j] = k;
                }
            }
        }
    }
    let mut names: Vec<String> = subwords.iter().map(|s| s.to_string()).collect();
    names.push("0".into());
    FiniteMonoid::from_parts_unchecked(size, 0, table)
        .with_element_names(names)
        .named(format!("S({w})"))
}

/// Componentwise product; `(a, b)` has index `a * |B| + b`.
pub fn direct_product(a: &FiniteMonoid, b: &FiniteMonoid) -> FiniteMonoid {
    let (n, m) = (a.size(), b.size());
    let size = n * m;
    let mut table = Vec::with_capacity(size * size);
    for x in 0..size {
        let (x1, x2) = (x / m, x % m);
        for y in 0..size {
            let (y1, y2) = (y / m, y % m);
            table.push(a.mul(x1, y1) * m + b.mul(x2, y2));
        }
    }
    let identity = a.identity() * m + b.identity();
    let names = (0..size)
        .map(|x| format!("({},{})", a.element_name(x / m), b.element_name(x % m)))
        .collect();
    FiniteMonoid::from_parts_unchecked(size, identity, table)
        .with_element_names(names)
        .named(format!("{}×{}", a.label(), b.label()))
}
