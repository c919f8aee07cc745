use indexmap::IndexSet;
use rayon::prelude::*;
use thiserror::Error;

use crate::finmon::FiniteMonoid;
use crate::word::{Letter, Word};

/// Default cap on the number of elements of a free object.
pub const DEFAULT_ELEMENT_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FreeObjectError {
    #[error("free object exceeds the budget of {budget} elements")]
    BudgetExceeded { budget: usize },
    #[error("rank {rank} needs {needed} coordinates, more than supported")]
    TooLarge { rank: usize, needed: u128 },
    #[error("factor {0} has more than 65536 elements")]
    FactorTooLarge(String),
}

type Vector = Box<[u16]>;

/// The free object of rank `letters.len()` in the variety generated by
/// `factors`, realised as the monoid of functions from assignments to the
/// factors generated by the coordinate projections.
///
/// Elements are numbered in breadth-first order from the identity, so each
/// representative is the shortlex-least word with that value.
#[derive(Debug, Clone)]
pub struct FreeObject {
    factors: Vec<FiniteMonoid>,
    letters: Vec<Letter>,
    elements: IndexSet<Vector>,
    representatives: Vec<Word>,
    /// `transitions[e][j]` is `e` multiplied on the right by generator `j`.
    transitions: Vec<Vec<usize>>,
}

struct Layout {
    /// (factor index, coordinate offset, number of assignments)
    blocks: Vec<(usize, usize, usize)>,
    len: usize,
}

impl FreeObject {
    /// BFS closure of the projections; fails once more than `budget`
    /// elements are found.
    pub fn build(factors: &[FiniteMonoid], letters: &[Letter], budget: usize) -> Result<FreeObject, FreeObjectError> {
        let mut letters = letters.to_vec();
        letters.sort();
        letters.dedup();
        let rank = letters.len();
        for f in factors {
            if f.size() > u16::MAX as usize + 1 {
                return Err(FreeObjectError::FactorTooLarge(f.label().to_string()));
            }
        }
        let layout = layout(factors, rank)?;

        let mut identity = vec![0u16; layout.len];
        for &(fi, off, count) in &layout.blocks {
            identity[off..off + count].fill(factors[fi].identity() as u16);
        }
        let projections: Vec<Vec<u16>> = (0..rank)
            .map(|j| {
                let mut v = vec![0u16; layout.len];
                for &(fi, off, count) in &layout.blocks {
                    let s = factors[fi].size();
                    // digit j (most significant first) of the assignment index
                    let stride = s.pow((rank - 1 - j) as u32);
                    for a in 0..count {
                        v[off + a] = ((a / stride) % s) as u16;
                    }
                }
                v
            })
            .collect();

        let mut elements: IndexSet<Vector> = IndexSet::new();
        elements.insert(identity.into_boxed_slice());
        let mut representatives = vec![Word::empty()];
        let mut transitions: Vec<Vec<usize>> = Vec::new();
        let mut level_start = 0;
        while level_start < elements.len() {
            let level_end = elements.len();
            let products: Vec<Vec<Vector>> = (level_start..level_end)
                .into_par_iter()
                .map(|e| {
                    let v = &elements[e];
                    projections
                        .iter()
                        .map(|p| multiply(factors, &layout, v, p))
                        .collect()
                })
                .collect();
            for (offset, row) in products.into_iter().enumerate() {
                let e = level_start + offset;
                let mut out = Vec::with_capacity(rank);
                for (j, v) in row.into_iter().enumerate() {
                    let (idx, fresh) = elements.insert_full(v);
                    if fresh {
                        if elements.len() > budget {
                            return Err(FreeObjectError::BudgetExceeded { budget });
                        }
                        let mut rep = representatives[e].clone();
                        rep.push(letters[j]);
                        representatives.push(rep);
                    }
                    out.push(idx);
                }
                transitions.push(out);
            }
            level_start = level_end;
        }
        Ok(FreeObject { factors: factors.to_vec(), letters, elements, representatives, transitions })
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn rank(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn factors(&self) -> &[FiniteMonoid] {
        &self.factors
    }

    pub fn representative(&self, e: usize) -> &Word {
        &self.representatives[e]
    }

    pub fn representatives(&self) -> &[Word] {
        &self.representatives
    }

    pub fn vector(&self, e: usize) -> &[u16] {
        &self.elements[e]
    }

    /// Element index of the generator for `letter`.
    pub fn generator(&self, letter: Letter) -> Option<usize> {
        let j = self.letters.binary_search(&letter).ok()?;
        Some(self.transitions[0][j])
    }

    pub fn right_multiply(&self, e: usize, letter_index: usize) -> usize {
        self.transitions[e][letter_index]
    }

    /// The element a word evaluates to; `None` if it uses foreign letters.
    pub fn element_of(&self, w: &Word) -> Option<usize> {
        let mut e = 0;
        for l in w.letters() {
            let j = self.letters.binary_search(l).ok()?;
            e = self.transitions[e][j];
        }
        Some(e)
    }

    pub fn multiply(&self, a: usize, b: usize) -> usize {
        self.representatives[b]
            .letters()
            .iter()
            .fold(a, |e, l| self.transitions[e][self.letters.binary_search(l).unwrap()])
    }

    /// The multiplication table, elements named by their representatives.
    pub fn as_monoid(&self) -> FiniteMonoid {
        let n = self.size();
        let mut table = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                table.push(self.multiply(a, b));
            }
        }
        FiniteMonoid::from_parts_unchecked(n, 0, table)
            .with_element_names(self.representatives.iter().map(|w| w.to_string()).collect())
            .named(format!("F{}", self.rank()))
    }
}

fn layout(factors: &[FiniteMonoid], rank: usize) -> Result<Layout, FreeObjectError> {
    let mut blocks = Vec::new();
    let mut len: u128 = 0;
    for (fi, f) in factors.iter().enumerate() {
        let count = (f.size() as u128).pow(rank as u32);
        blocks.push((fi, len as usize, count as usize));
        len += count;
        if len > (1 << 28) {
            return Err(FreeObjectError::TooLarge { rank, needed: len });
        }
    }
    Ok(Layout { blocks, len: len as usize })
}

fn multiply(factors: &[FiniteMonoid], layout: &Layout, v: &[u16], p: &[u16]) -> Vector {
    let mut out = vec![0u16; layout.len];
    for &(fi, off, count) in &layout.blocks {
        let f = &factors[fi];
        let table = f.raw_table();
        let s = f.size();
        for c in off..off + count {
            out[c] = table[v[c] as usize * s + p[c] as usize] as u16;
        }
    }
    out.into_boxed_slice()
}

/// Convenience: rank `k` over the variables `x, y, z, ...`.
pub fn free_object(n: &FiniteMonoid, k: usize, budget: usize) -> Result<FreeObject, FreeObjectError> {
    let letters: Vec<Letter> = (0..k).map(Letter::variable).collect();
    FreeObject::build(std::slice::from_ref(n), &letters, budget)
}

pub(crate) fn first_letters(k: usize) -> Vec<Letter> {
    let mut v: Vec<Letter> = (0..k).map(Letter::variable).collect();
    v.sort();
    v
}
