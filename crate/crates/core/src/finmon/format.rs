//! Text format for monoids.
//!
//! ```text
//! monoid C2
//! size 3
//! identity 0
//! table
//! 0 1 2
//! 1 2 2
//! 2 2 2
//! ```
//!
//! A block may instead consist of a single construction line:
//! `construct S <word>`, `construct C <n>`, `construct LRB`,
//! `construct product <name> <name>`. Construction lines may also appear
//! without a `monoid` header.

use std::collections::HashMap;
use std::fmt::Write;

use thiserror::Error;

use super::{cyclic_chain, cyclic_group, direct_product, lrb_monoid, s_monoid, semilattice2, trivial_monoid};
use super::{FiniteMonoid, MonoidError};
use crate::word::{ParseError, Word};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Word { line: usize, source: ParseError },
    #[error("monoid {name}: {source}")]
    Invalid { name: String, source: MonoidError },
    #[error("unknown monoid name {0:?}")]
    UnknownName(String),
    #[error("no monoid defined")]
    Empty,
}

fn syntax(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, msg: msg.into() }
}

/// Built-in names: `T`, `SL2`, `LRB`, `C<n>`, `Z<n>`, `S(<word>)`.
pub fn resolve_monoid_name(name: &str) -> Result<FiniteMonoid, FormatError> {
    let unknown = || FormatError::UnknownName(name.to_string());
    match name {
        "T" => return Ok(trivial_monoid()),
        "SL2" | "SL" => return Ok(semilattice2()),
        "LRB" => return Ok(lrb_monoid()),
        _ => {}
    }
    if let Some(inner) = name.strip_prefix("S(").and_then(|s| s.strip_suffix(')')) {
        let w = Word::parse(inner).map_err(|_| unknown())?;
        if w.is_empty() {
            return Err(unknown());
        }
        return Ok(s_monoid(&w));
    }
    let parse_n = |rest: &str| rest.parse::<usize>().ok().filter(|&n| n >= 1);
    if let Some(n) = name.strip_prefix('C').and_then(parse_n) {
        return Ok(cyclic_chain(n));
    }
    if let Some(n) = name.strip_prefix('Z').and_then(parse_n) {
        return Ok(cyclic_group(n));
    }
    Err(unknown())
}

fn construct(line_no: usize, args: &[&str], known: &HashMap<String, FiniteMonoid>) -> Result<FiniteMonoid, FormatError> {
    let lookup = |name: &str| match known.get(name) {
        Some(m) => Ok(m.clone()),
        None => resolve_monoid_name(name),
    };
    match args {
        ["S", word @ ..] if !word.is_empty() => {
            let w = Word::parse(&word.join("")).map_err(|source| FormatError::Word { line: line_no, source })?;
            if w.is_empty() {
                return Err(syntax(line_no, "S(w) needs a non-empty word"));
            }
            Ok(s_monoid(&w))
        }
        ["C", n] => match n.parse::<usize>() {
            Ok(n) if n >= 1 => Ok(cyclic_chain(n)),
            _ => Err(syntax(line_no, format!("bad chain parameter {n:?}"))),
        },
        ["LRB"] => Ok(lrb_monoid()),
        ["SL2"] | ["SL"] => Ok(semilattice2()),
        ["T"] => Ok(trivial_monoid()),
        ["product", a, b] => Ok(direct_product(&lookup(a)?, &lookup(b)?)),
        _ => Err(syntax(line_no, format!("unknown construction {:?}", args.join(" ")))),
    }
}

/// Parses every monoid block in `text`, in order of definition.
pub fn parse_monoid_file(text: &str) -> Result<Vec<FiniteMonoid>, FormatError> {
    let mut out: Vec<FiniteMonoid> = Vec::new();
    let mut known: HashMap<String, FiniteMonoid> = HashMap::new();
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect();
    let mut i = 0;
    while i < lines.len() {
        let (line_no, line) = lines[i];
        let words: Vec<&str> = line.split_whitespace().collect();
        match words.as_slice() {
            ["construct", args @ ..] => {
                let m = construct(line_no, args, &known)?;
                known.insert(m.label().to_string(), m.clone());
                out.push(m);
                i += 1;
            }
            ["monoid", name] => {
                let name = name.to_string();
                i += 1;
                let (next_no, next) = *lines.get(i).ok_or_else(|| syntax(line_no, "missing monoid body"))?;
                let next_words: Vec<&str> = next.split_whitespace().collect();
                let m = if let ["construct", args @ ..] = next_words.as_slice() {
                    i += 1;
                    construct(next_no, args, &known)?
                } else {
                    let (m, consumed) = parse_table_block(&lines[i..], &name)?;
                    i += consumed;
                    m
                };
                let m = m.named(name.clone());
                known.insert(name, m.clone());
                out.push(m);
            }
            _ => return Err(syntax(line_no, format!("unexpected line {line:?}"))),
        }
    }
    if out.is_empty() {
        return Err(FormatError::Empty);
    }
    Ok(out)
}

fn header_value(entry: Option<&(usize, &str)>, key: &str, prev_line: usize) -> Result<usize, FormatError> {
    let (line_no, line) = entry.ok_or_else(|| syntax(prev_line, format!("missing `{key}` line")))?;
    let rest = line
        .strip_prefix(key)
        .ok_or_else(|| syntax(*line_no, format!("expected `{key} <n>`")))?;
    rest.trim()
        .parse()
        .map_err(|_| syntax(*line_no, format!("bad `{key}` value")))
}

fn parse_table_block(lines: &[(usize, &str)], name: &str) -> Result<(FiniteMonoid, usize), FormatError> {
    let first_line = lines.first().map(|l| l.0).unwrap_or(0);
    let size = header_value(lines.first(), "size", first_line)?;
    let identity = header_value(lines.get(1), "identity", first_line)?;
    match lines.get(2) {
        Some((_, "table")) => {}
        Some((n, _)) => return Err(syntax(*n, "expected `table`")),
        None => return Err(syntax(first_line, "missing `table` line")),
    }
    let mut rows = Vec::with_capacity(size);
    for r in 0..size {
        let (line_no, line) = lines
            .get(3 + r)
            .ok_or_else(|| syntax(first_line, format!("table has fewer than {size} rows")))?;
        let row = line
            .split_whitespace()
            .map(|t| t.parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| syntax(*line_no, "table entries must be non-negative integers"))?;
        rows.push(row);
    }
    let m = FiniteMonoid::with_identity(rows, identity)
        .map_err(|source| FormatError::Invalid { name: name.to_string(), source })?;
    Ok((m, 3 + size))
}

pub(crate) fn render(m: &FiniteMonoid) -> String {
    let mut s = String::new();
    writeln!(s, "monoid {}", m.label().replace(char::is_whitespace, "_")).unwrap();
    writeln!(s, "size {}", m.size()).unwrap();
    writeln!(s, "identity {}", m.identity()).unwrap();
    writeln!(s, "table").unwrap();
    for row in m.rows() {
        let row: Vec<String> = row.iter().map(|e| e.to_string()).collect();
        writeln!(s, "{}", row.join(" ")).unwrap();
    }
    s
}
