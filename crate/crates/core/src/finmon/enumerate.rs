use std::collections::BTreeSet;
use std::sync::OnceLock;

use rayon::prelude::*;

use super::{check_associative, odometer, FiniteMonoid, MonoidError};

pub const MAX_ENUMERATION_SIZE: usize = 4;

/// All monoids on `size` elements up to isomorphism, identity at index 0,
/// each given by its lexicographically least table. Sorted by that table.
pub fn enumerate_monoids(size: usize) -> Result<&'static [FiniteMonoid], MonoidError> {
    static CACHE: [OnceLock<Vec<FiniteMonoid>>; MAX_ENUMERATION_SIZE + 1] =
        [const { OnceLock::new() }; MAX_ENUMERATION_SIZE + 1];
    if size == 0 {
        return Err(MonoidError::Empty);
    }
    if size > MAX_ENUMERATION_SIZE {
        return Err(MonoidError::SizeCapExceeded { size, cap: MAX_ENUMERATION_SIZE });
    }
    Ok(CACHE[size].get_or_init(|| enumerate_uncached(size)))
}

/// Every monoid of size `1..=max_size`, smallest first.
pub fn monoid_universe(max_size: usize) -> Result<Vec<&'static FiniteMonoid>, MonoidError> {
    let mut out = Vec::new();
    for s in 1..=max_size {
        out.extend(enumerate_monoids(s)?.iter());
    }
    Ok(out)
}

fn enumerate_uncached(size: usize) -> Vec<FiniteMonoid> {
    let free = size - 1;
    let cells = free * free;
    // Row and column 0 are fixed by the identity; the leading free cell is
    // split across workers.
    let canon: BTreeSet<Vec<usize>> = (0..size)
        .into_par_iter()
        .flat_map_iter(|first| {
            let mut found = BTreeSet::new();
            if cells == 0 {
                found.insert(vec![0]);
                return found;
            }
            let mut rest = vec![0usize; cells - 1];
            loop {
                let mut table = vec![0usize; size * size];
                for i in 0..size {
                    table[i] = i;
                    table[i * size] = i;
                }
                for (k, &v) in std::iter::once(&first).chain(rest.iter()).enumerate() {
                    table[(1 + k / free) * size + 1 + k % free] = v;
                }
                if check_associative(size, &table).is_ok() {
                    found.insert(canonical_table(size, &table));
                }
                if !odometer(&mut rest, size) {
                    break;
                }
            }
            found
        })
        .collect();
    canon
        .into_iter()
        .enumerate()
        .map(|(i, table)| FiniteMonoid::from_parts_unchecked(size, 0, table).named(format!("M{size}.{i}")))
        .collect()
}

/// Lexicographically least relabelled table over permutations fixing 0.
pub(crate) fn canonical_table(size: usize, table: &[usize]) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..size).collect();
    let mut best: Option<Vec<usize>> = None;
    permute(&mut perm, 1, &mut |p| {
        // p maps old index -> new index
        let mut inv = vec![0; size];
        for (old, &new) in p.iter().enumerate() {
            inv[new] = old;
        }
        let relabelled: Vec<usize> = (0..size * size)
            .map(|k| p[table[inv[k / size] * size + inv[k % size]]])
            .collect();
        if best.as_ref().is_none_or(|b| relabelled < *b) {
            best = Some(relabelled);
        }
    });
    best.unwrap()
}

fn permute(p: &mut [usize], k: usize, visit: &mut impl FnMut(&[usize])) {
    if k >= p.len() {
        visit(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, visit);
        p.swap(k, i);
    }
}
