use std::collections::VecDeque;

use crate::finmon::FiniteMonoid;
use crate::word::{Letter, Word};

use super::free::{FreeObject, FreeObjectError, DEFAULT_ELEMENT_BUDGET};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsotermVerdict {
    Isoterm,
    /// A word `w' != w` such that `w = w'` holds in the variety.
    NotIsoterm(Word),
    Unknown(FreeObjectError),
}

impl IsotermVerdict {
    pub fn is_isoterm(&self) -> bool {
        matches!(self, IsotermVerdict::Isoterm)
    }

    pub fn status(&self) -> &'static str {
        match self {
            IsotermVerdict::Isoterm => "isoterm",
            IsotermVerdict::NotIsoterm(_) => "not_isoterm",
            IsotermVerdict::Unknown(_) => "unknown",
        }
    }
}

/// Words equal to `w` in the variety, up to a length cap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordClass {
    pub infinite: bool,
    /// Shortlex order, all members of length at most the cap.
    pub words: Vec<Word>,
}

/// A deterministic automaton over a letter list; `next[v][j]` is `None`
/// when the edge leaves the trimmed part.
struct Graph {
    letters: Vec<Letter>,
    next: Vec<Vec<Option<usize>>>,
    start: usize,
    accept: Vec<bool>,
    live: Vec<bool>,
}

impl Graph {
    fn new(letters: Vec<Letter>, full: Vec<Vec<usize>>, start: usize, accept: Vec<bool>) -> Graph {
        let n = full.len();
        let mut reverse: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (v, row) in full.iter().enumerate() {
            for &t in row {
                reverse[t].push(v);
            }
        }
        let mut live = accept.clone();
        let mut queue: VecDeque<usize> = (0..n).filter(|&v| accept[v]).collect();
        while let Some(v) = queue.pop_front() {
            for &p in &reverse[v] {
                if !live[p] {
                    live[p] = true;
                    queue.push_back(p);
                }
            }
        }
        let next = full
            .into_iter()
            .map(|row| row.into_iter().map(|t| live[t].then_some(t)).collect())
            .collect();
        Graph { letters, next, start, accept, live }
    }

    fn live_count(&self) -> usize {
        self.live.iter().filter(|&&b| b).count()
    }

    /// Cycle among live states reachable from the start.
    fn has_cycle(&self) -> bool {
        if !self.live[self.start] {
            return false;
        }
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut colour = vec![0u8; self.next.len()];
        let mut stack: Vec<(usize, usize)> = vec![(self.start, 0)];
        colour[self.start] = 1;
        while let Some(&mut (v, ref mut j)) = stack.last_mut() {
            if *j == self.letters.len() {
                colour[v] = 2;
                stack.pop();
                continue;
            }
            let edge = self.next[v][*j];
            *j += 1;
            if let Some(t) = edge {
                match colour[t] {
                    1 => return true,
                    0 => {
                        colour[t] = 1;
                        stack.push((t, 0));
                    }
                    _ => {}
                }
            }
        }
        false
    }

    /// Accepted word count, assuming no reachable live cycle.
    fn path_count(&self) -> u64 {
        fn go(g: &Graph, v: usize, memo: &mut Vec<Option<u64>>) -> u64 {
            if let Some(c) = memo[v] {
                return c;
            }
            let mut c = u64::from(g.accept[v]);
            for t in g.next[v].iter().flatten() {
                c = c.saturating_add(go(g, *t, memo));
            }
            memo[v] = Some(c);
            c
        }
        if !self.live[self.start] {
            return 0;
        }
        go(self, self.start, &mut vec![None; self.next.len()])
    }

    /// `layers[r][v]`: an accepting state is reachable from `v` in exactly `r` steps.
    fn layers(&self, max_len: usize) -> Vec<Vec<bool>> {
        let mut layers = vec![self.accept.clone()];
        for r in 1..=max_len {
            let layer = self.step_back(&layers[r - 1]);
            layers.push(layer);
        }
        layers
    }

    /// Accepted words of length `len`, lexicographically, skipping `exclude`,
    /// stopping after `limit`.
    fn words_of_length(&self, layers: &[Vec<bool>], len: usize, exclude: Option<&Word>, limit: usize) -> Vec<Word> {
        fn go(
            g: &Graph,
            layers: &[Vec<bool>],
            v: usize,
            remaining: usize,
            prefix: &mut Vec<Letter>,
            exclude: Option<&Word>,
            limit: usize,
            out: &mut Vec<Word>,
        ) {
            if out.len() >= limit {
                return;
            }
            if remaining == 0 {
                let w = Word::from_letters(prefix.clone());
                if exclude != Some(&w) {
                    out.push(w);
                }
                return;
            }
            for (j, &l) in g.letters.iter().enumerate() {
                if let Some(t) = g.next[v][j] {
                    if layers[remaining - 1][t] {
                        prefix.push(l);
                        go(g, layers, t, remaining - 1, prefix, exclude, limit, out);
                        prefix.pop();
                    }
                }
            }
        }
        let mut out = Vec::new();
        if layers[len][self.start] {
            go(self, layers, self.start, len, &mut Vec::new(), exclude, limit, &mut out);
        }
        out
    }

    /// Shortlex-least accepted word other than `exclude`.
    fn first_accepted_excluding(&self, exclude: &Word) -> Option<Word> {
        // A second accepted word, if any, has length below this bound.
        let max_len = 3 * self.live_count() + exclude.len() + 1;
        let mut layers = vec![self.accept.clone()];
        for len in 0..=max_len {
            if len > 0 {
                let layer = self.step_back(&layers[len - 1]);
                layers.push(layer);
            }
            if let Some(w) = self.words_of_length(&layers, len, Some(exclude), 1).pop() {
                return Some(w);
            }
        }
        None
    }

    fn step_back(&self, prev: &[bool]) -> Vec<bool> {
        self.next
            .iter()
            .map(|row| row.iter().flatten().any(|&t| prev[t]))
            .collect()
    }
}

/// The automaton whose states are the free-object elements over
/// `content(w)` plus one fresh letter, accepting exactly the words equal
/// to `w` in the variety.
pub struct WordAutomaton {
    free: FreeObject,
    word: Word,
    target: usize,
    graph: Graph,
}

impl WordAutomaton {
    pub fn build(factors: &[FiniteMonoid], w: &Word, budget: usize) -> Result<WordAutomaton, FreeObjectError> {
        let content = w.content();
        let mut letters: Vec<Letter> = content.iter().copied().collect();
        if let Some(fresh) = Letter::fresh(&content) {
            letters.push(fresh);
        }
        let free = FreeObject::build(factors, &letters, budget)?;
        let target = free.element_of(w).expect("w uses only its own letters");
        let full: Vec<Vec<usize>> = (0..free.size())
            .map(|e| (0..free.rank()).map(|j| free.right_multiply(e, j)).collect())
            .collect();
        let mut accept = vec![false; free.size()];
        accept[target] = true;
        let graph = Graph::new(free.letters().to_vec(), full, 0, accept);
        Ok(WordAutomaton { free, word: w.clone(), target, graph })
    }

    pub fn free_object(&self) -> &FreeObject {
        &self.free
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn state_count(&self) -> usize {
        self.free.size()
    }

    pub fn trimmed_state_count(&self) -> usize {
        self.graph.live_count()
    }

    pub fn is_infinite(&self) -> bool {
        self.graph.has_cycle()
    }

    pub fn is_isoterm(&self) -> bool {
        !self.graph.has_cycle() && self.graph.path_count() == 1
    }

    /// Some `w' != w` equal to `w`, preferring words with the same content
    /// as `w`, then shortlex order.
    pub fn witness(&self) -> Option<Word> {
        self.same_content_witness()
            .or_else(|| self.graph.first_accepted_excluding(&self.word))
    }

    fn same_content_witness(&self) -> Option<Word> {
        let content: Vec<Letter> = self.word.content().into_iter().collect();
        let bits = content.len();
        let full_mask = (1usize << bits) - 1;
        let letter_ix: Vec<usize> = content
            .iter()
            .map(|l| self.free.letters().binary_search(l).unwrap())
            .collect();
        let n = self.free.size();
        let node = |state: usize, mask: usize| state * (full_mask + 1) + mask;
        let mut full = Vec::with_capacity(n * (full_mask + 1));
        for state in 0..n {
            for mask in 0..=full_mask {
                full.push(
                    letter_ix
                        .iter()
                        .enumerate()
                        .map(|(b, &j)| node(self.free.right_multiply(state, j), mask | 1 << b))
                        .collect(),
                );
            }
        }
        let mut accept = vec![false; full.len()];
        accept[node(self.target, full_mask)] = true;
        Graph::new(content, full, node(0, 0), accept).first_accepted_excluding(&self.word)
    }

    pub fn verdict(&self) -> IsotermVerdict {
        if self.is_isoterm() {
            IsotermVerdict::Isoterm
        } else {
            IsotermVerdict::NotIsoterm(self.witness().expect("a second accepted word exists"))
        }
    }

    pub fn class(&self, length_cap: usize) -> WordClass {
        let layers = self.graph.layers(length_cap);
        let words = (0..=length_cap)
            .flat_map(|len| self.graph.words_of_length(&layers, len, None, usize::MAX))
            .collect();
        WordClass { infinite: self.is_infinite(), words }
    }
}

/// Decides whether `w` is an isoterm for the variety generated by `n`,
/// relative to `content(w)` plus one fresh letter.
pub fn isoterm(n: &FiniteMonoid, w: &Word) -> IsotermVerdict {
    isoterm_in_join(std::slice::from_ref(n), w, DEFAULT_ELEMENT_BUDGET)
}

/// Like [`isoterm`] for the join of the varieties generated by `factors`.
pub fn isoterm_in_join(factors: &[FiniteMonoid], w: &Word, budget: usize) -> IsotermVerdict {
    assert!(!w.is_empty(), "isoterms are non-empty words");
    match WordAutomaton::build(factors, w, budget) {
        Ok(a) => a.verdict(),
        Err(e) => IsotermVerdict::Unknown(e),
    }
}

pub fn word_class(n: &FiniteMonoid, w: &Word, length_cap: usize) -> Result<WordClass, FreeObjectError> {
    WordAutomaton::build(std::slice::from_ref(n), w, DEFAULT_ELEMENT_BUDGET).map(|a| a.class(length_cap))
}
