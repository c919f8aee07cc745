use std::collections::BTreeSet;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

use super::{classify_element, ElementReport, FiniteLattice, LatticeError, Property};

pub const MAX_LATTICE_SIZE: usize = 7;

static CACHE: [OnceLock<Vec<FiniteLattice>>; MAX_LATTICE_SIZE + 1] = [const { OnceLock::new() }; MAX_LATTICE_SIZE + 1];

/// All lattices on `n` elements up to isomorphism, in canonical order,
/// labeled `L{n}.{i}`. Every lattice has bottom `0` and top `n - 1`.
pub fn enumerate_lattices(n: usize) -> Result<&'static [FiniteLattice], LatticeError> {
    if n == 0 {
        return Err(LatticeError::Empty);
    }
    if n > MAX_LATTICE_SIZE {
        return Err(LatticeError::SizeCapExceeded { size: n, cap: MAX_LATTICE_SIZE });
    }
    Ok(CACHE[n].get_or_init(|| compute(n)))
}

/// Every lattice of size `1..=max`, smallest first.
pub fn lattice_universe(max: usize) -> Result<Vec<&'static FiniteLattice>, LatticeError> {
    let mut out = Vec::new();
    for n in 1..=max {
        out.extend(enumerate_lattices(n)?);
    }
    Ok(out)
}

fn compute(n: usize) -> Vec<FiniteLattice> {
    let codes: BTreeSet<u64> = if n <= 2 {
        let leq = (0..n * n).map(|c| c / n <= c % n).collect::<Vec<_>>();
        std::iter::once(encode(n, &leq)).collect()
    } else {
        // Strict relations among middle elements 1..=m that only go upward
        // in index order; every finite poset has such a labeling.
        let m = n - 2;
        let pairs: Vec<(usize, usize)> = (1..=m).flat_map(|i| (i + 1..=m).map(move |j| (i, j))).collect();
        let perms = permutations(m);
        (0u64..1 << pairs.len())
            .into_par_iter()
            .filter_map(|mask| {
                let mut leq = vec![false; n * n];
                for i in 0..n {
                    leq[i * n + i] = true;
                    leq[i] = true;
                    leq[i * n + n - 1] = true;
                }
                for (b, &(i, j)) in pairs.iter().enumerate() {
                    if mask >> b & 1 == 1 {
                        leq[i * n + j] = true;
                    }
                }
                let transitive = (0..n).all(|i| {
                    (0..n).all(|j| !leq[i * n + j] || (0..n).all(|k| !leq[j * n + k] || leq[i * n + k]))
                });
                if !transitive || FiniteLattice::from_order_matrix(n, leq.clone()).is_err() {
                    return None;
                }
                Some(canonical_code(n, &leq, &perms))
            })
            .collect::<Vec<u64>>()
            .into_iter()
            .collect()
    };
    codes
        .into_iter()
        .enumerate()
        .map(|(i, code)| {
            FiniteLattice::from_order_matrix(n, decode(n, code))
                .expect("canonical forms are lattices")
                .named(format!("L{n}.{i}"))
        })
        .collect()
}

/// Row-major order matrix packed with the first cell most significant.
fn encode(n: usize, leq: &[bool]) -> u64 {
    debug_assert_eq!(leq.len(), n * n);
    leq.iter().fold(0u64, |acc, &b| acc << 1 | u64::from(b))
}

fn decode(n: usize, code: u64) -> Vec<bool> {
    (0..n * n).map(|k| code >> (n * n - 1 - k) & 1 == 1).collect()
}

/// Least packed matrix over relabelings of the middle elements.
fn canonical_code(n: usize, leq: &[bool], perms: &[Vec<usize>]) -> u64 {
    let mut relabeled = vec![false; n * n];
    perms
        .iter()
        .map(|p| {
            let image = |i: usize| if i == 0 || i == n - 1 { i } else { p[i - 1] + 1 };
            for i in 0..n {
                for j in 0..n {
                    relabeled[image(i) * n + image(j)] = leq[i * n + j];
                }
            }
            encode(n, &relabeled)
        })
        .min()
        .expect("at least the identity permutation")
}

fn permutations(m: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; m], &mut out);
    out
}

/// A lattice element that is modular and lower-modular but not standard.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinedExample {
    pub lattice: FiniteLattice,
    pub element: usize,
    /// `(y, z)` with `(x∨y)∧z != (x∧z)∨(y∧z)`.
    pub standard_witness: (usize, usize),
    pub report: ElementReport,
}

impl MinedExample {
    /// Re-checks the certificate from the lattice tables alone.
    pub fn verify(&self) -> bool {
        let l = &self.lattice;
        let x = self.element;
        let (y, z) = self.standard_witness;
        let standard_fails = l.meet(l.join(x, y), z) != l.join(l.meet(x, z), l.meet(y, z));
        standard_fails && Property::Modular.holds(l, x) && Property::LowerModular.holds(l, x)
    }
}

/// Searches lattices by increasing size, then canonical order, then element
/// index, for a modular and lower-modular element that is not standard.
pub fn mine_modular_lower_modular_not_standard(max_size: usize) -> Result<Option<MinedExample>, LatticeError> {
    for n in 1..=max_size {
        let found = enumerate_lattices(n)?.par_iter().find_map_first(|l| {
            l.elements().find_map(|x| {
                let report = classify_element(l, x).ok()?;
                if report.modular && report.lower_modular && !report.standard {
                    let standard_witness = Property::Standard.witness(l, x).expect("not standard");
                    Some(MinedExample { lattice: l.clone(), element: x, standard_witness, report })
                } else {
                    None
                }
            })
        });
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}
