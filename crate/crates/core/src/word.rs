//! Words, identities and substitutions over the free monoid.
//!
//! Letters are lowercase ASCII. Words are stored fully expanded; the
//! canonical printer re-compresses maximal runs into `x^k` form and
//! prints the empty word as `1`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("illegal character {ch:?} at offset {offset}")]
    IllegalChar { ch: char, offset: usize },
    #[error("malformed exponent at offset {offset}")]
    MalformedExponent { offset: usize },
    #[error("identity must have the form `<word> = <word>`: {0:?}")]
    MalformedIdentity(String),
}

/// A single letter `a`..=`z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter(u8);

impl Letter {
    pub fn new(ch: char) -> Option<Letter> {
        ch.is_ascii_lowercase().then_some(Letter(ch as u8))
    }

    pub fn as_char(self) -> char {
        self.0 as char
    }

    /// Variable names in the order they are handed out: `x, y, z, t, u, ...`
    pub fn variables() -> impl Iterator<Item = Letter> {
        b"xyztuvwsrqponmlkjihgfedcba".iter().map(|&b| Letter(b))
    }

    /// The `i`-th variable name, see [`Letter::variables`].
    pub fn variable(i: usize) -> Letter {
        Letter::variables()
            .nth(i)
            .expect("alphabet is limited to 26 letters")
    }

    /// First variable name not occurring in `used`.
    pub fn fresh(used: &BTreeSet<Letter>) -> Option<Letter> {
        Letter::variables().find(|l| !used.contains(l))
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// An element of the free monoid. The empty word is the identity `1`.
///
/// Words are ordered length-first, then lexicographically by letter.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<Letter>) -> Word {
        Word(letters)
    }

    pub fn letter(l: Letter) -> Word {
        Word(vec![l])
    }

    /// `l^k`.
    pub fn power(l: Letter, k: usize) -> Word {
        Word(vec![l; k])
    }

    pub fn parse(text: &str) -> Result<Word, ParseError> {
        let mut letters = Vec::new();
        let mut chars = text.char_indices().peekable();
        // Set when the previous token was a letter that an exponent may follow.
        let mut last: Option<Letter> = None;
        while let Some((offset, ch)) = chars.next() {
            if ch.is_whitespace() {
                continue;
            }
            if ch == '1' {
                last = None;
                continue;
            }
            if ch == '^' {
                let base = last.take().ok_or(ParseError::MalformedExponent { offset })?;
                while chars.peek().is_some_and(|(_, c)| c.is_whitespace()) {
                    chars.next();
                }
                let mut digits = String::new();
                while let Some((_, c)) = chars.peek().copied() {
                    if c.is_ascii_digit() {
                        digits.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                let k: usize = digits
                    .parse()
                    .map_err(|_| ParseError::MalformedExponent { offset })?;
                if k == 0 {
                    return Err(ParseError::MalformedExponent { offset });
                }
                // The base letter was already pushed once.
                letters.extend(std::iter::repeat_n(base, k - 1));
                continue;
            }
            let l = Letter::new(ch).ok_or(ParseError::IllegalChar { ch, offset })?;
            letters.push(l);
            last = Some(l);
        }
        Ok(Word(letters))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn push(&mut self, l: Letter) {
        self.0.push(l);
    }

    pub fn content(&self) -> BTreeSet<Letter> {
        self.0.iter().copied().collect()
    }

    pub fn occurrences(&self, l: Letter) -> usize {
        self.0.iter().filter(|&&c| c == l).count()
    }

    /// All contiguous factors, including `1` and the word itself.
    pub fn subwords(&self) -> BTreeSet<Word> {
        let n = self.len();
        let mut out = BTreeSet::new();
        out.insert(Word::empty());
        for i in 0..n {
            for j in i + 1..=n {
                out.insert(Word(self.0[i..j].to_vec()));
            }
        }
        out
    }

    pub fn is_factor_of(&self, other: &Word) -> bool {
        self.is_empty() || other.0.windows(self.len()).any(|w| w == self.0.as_slice())
    }

    /// Same multiset of letters.
    pub fn is_permutation_of(&self, other: &Word) -> bool {
        let mut a = self.0.clone();
        let mut b = other.0.clone();
        a.sort();
        b.sort();
        a == b
    }

    /// All words over `alphabet` of length at most `max_len`, in shortlex order.
    pub fn all_up_to(alphabet: &[Letter], max_len: usize) -> Vec<Word> {
        let mut alphabet = alphabet.to_vec();
        alphabet.sort();
        alphabet.dedup();
        let mut out = vec![Word::empty()];
        let mut level = vec![Word::empty()];
        for _ in 0..max_len {
            let mut next = Vec::with_capacity(level.len() * alphabet.len());
            for w in &level {
                for &l in &alphabet {
                    let mut v = w.clone();
                    v.push(l);
                    next.push(v);
                }
            }
            out.extend(next.iter().cloned());
            level = next;
        }
        out
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        let mut i = 0;
        while i < self.0.len() {
            let l = self.0[i];
            let mut j = i;
            while j < self.0.len() && self.0[j] == l {
                j += 1;
            }
            match j - i {
                1 => write!(f, "{l}")?,
                k => write!(f, "{l}^{k}")?,
            }
            i = j;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Word::parse(s)
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Word::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// An equation `lhs ≈ rhs` between words.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Identity {
    pub lhs: Word,
    pub rhs: Word,
}

impl Identity {
    pub fn new(lhs: Word, rhs: Word) -> Identity {
        Identity { lhs, rhs }
    }

    /// Parses `u = v` (or `u ≈ v`).
    pub fn parse(text: &str) -> Result<Identity, ParseError> {
        let mut chain = parse_chain(text)?;
        if chain.len() != 2 {
            return Err(ParseError::MalformedIdentity(text.to_string()));
        }
        let rhs = chain.pop().unwrap();
        let lhs = chain.pop().unwrap();
        Ok(Identity { lhs, rhs })
    }

    pub fn is_trivial(&self) -> bool {
        self.lhs == self.rhs
    }

    pub fn content(&self) -> BTreeSet<Letter> {
        let mut c = self.lhs.content();
        c.extend(self.rhs.content());
        c
    }

    pub fn reversed(&self) -> Identity {
        Identity::new(self.rhs.clone(), self.lhs.clone())
    }

    pub fn substitute(&self, s: &Substitution) -> Identity {
        Identity::new(s.apply(&self.lhs), s.apply(&self.rhs))
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

impl FromStr for Identity {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Identity::parse(s)
    }
}

fn parse_chain(text: &str) -> Result<Vec<Word>, ParseError> {
    text.split(['=', '≈']).map(Word::parse).collect()
}

/// Parses an identity list: one identity per line, `#` starts a comment.
/// A chain `u = v = w` contributes `u = v` and `v = w`.
pub fn parse_identities(text: &str) -> Result<Vec<Identity>, ParseError> {
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let chain = parse_chain(line)?;
        if chain.len() < 2 {
            return Err(ParseError::MalformedIdentity(line.to_string()));
        }
        for pair in chain.windows(2) {
            out.push(Identity::new(pair[0].clone(), pair[1].clone()));
        }
    }
    Ok(out)
}

/// A letter-to-word map; letters not listed map to themselves.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Substitution(BTreeMap<Letter, Word>);

impl Substitution {
    pub fn identity() -> Substitution {
        Substitution::default()
    }

    pub fn with(mut self, l: Letter, w: Word) -> Substitution {
        self.0.insert(l, w);
        self
    }

    pub fn insert(&mut self, l: Letter, w: Word) {
        self.0.insert(l, w);
    }

    pub fn get(&self, l: Letter) -> Option<&Word> {
        self.0.get(&l)
    }

    pub fn image(&self, l: Letter) -> Word {
        self.0.get(&l).cloned().unwrap_or_else(|| Word::letter(l))
    }

    pub fn iter(&self) -> impl Iterator<Item = (Letter, &Word)> {
        self.0.iter().map(|(&l, w)| (l, w))
    }

    pub fn apply(&self, w: &Word) -> Word {
        let mut out = Vec::with_capacity(w.len());
        for &l in w.letters() {
            match self.0.get(&l) {
                Some(img) => out.extend_from_slice(img.letters()),
                None => out.push(l),
            }
        }
        Word(out)
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(l, w)| format!("{l}->{w}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}
