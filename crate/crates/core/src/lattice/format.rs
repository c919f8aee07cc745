//! Text format:
//!
//! ```text
//! lattice N5
//! size 5
//! leq
//! 0 1
//! 1 2
//! ```
//!
//! Each `i j` line under `leq` means `i <= j`; the closure is taken. A file
//! may hold several blocks. `#` starts a comment.

use thiserror::Error;

use super::{FiniteLattice, LatticeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeFormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("lattice {name}: {source}")]
    Invalid { name: String, source: LatticeError },
    #[error("no lattice in input")]
    Empty,
}

struct Block {
    name: String,
    size: Option<usize>,
    pairs: Vec<(usize, usize)>,
    in_leq: bool,
}

pub fn parse_lattice_file(text: &str) -> Result<Vec<FiniteLattice>, LatticeFormatError> {
    let mut blocks: Vec<Block> = Vec::new();
    let syntax = |line: usize, message: &str| LatticeFormatError::Syntax { line, message: message.to_string() };
    for (ix, raw) in text.lines().enumerate() {
        let line = ix + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut parts = content.split_whitespace();
        let head = parts.next().unwrap();
        match head {
            "lattice" => {
                let name = parts.next().ok_or_else(|| syntax(line, "lattice needs a name"))?;
                blocks.push(Block { name: name.to_string(), size: None, pairs: Vec::new(), in_leq: false });
            }
            "size" => {
                let block = blocks.last_mut().ok_or_else(|| syntax(line, "size outside a lattice block"))?;
                let n = parts
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| syntax(line, "size needs a number"))?;
                block.size = Some(n);
            }
            "leq" => {
                let block = blocks.last_mut().ok_or_else(|| syntax(line, "leq outside a lattice block"))?;
                block.in_leq = true;
            }
            _ => {
                let block = blocks
                    .last_mut()
                    .filter(|b| b.in_leq)
                    .ok_or_else(|| syntax(line, "expected lattice, size or leq"))?;
                let i: usize = head.parse().map_err(|_| syntax(line, "expected an element index"))?;
                let j: usize = parts
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| syntax(line, "expected two element indices"))?;
                if parts.next().is_some() {
                    return Err(syntax(line, "trailing input"));
                }
                block.pairs.push((i, j));
            }
        }
    }
    if blocks.is_empty() {
        return Err(LatticeFormatError::Empty);
    }
    blocks
        .into_iter()
        .map(|b| {
            let size = b.size.ok_or_else(|| LatticeFormatError::Invalid {
                name: b.name.clone(),
                source: LatticeError::Empty,
            })?;
            FiniteLattice::from_leq_pairs(size, &b.pairs)
                .map(|l| l.named(b.name.clone()))
                .map_err(|source| LatticeFormatError::Invalid { name: b.name, source })
        })
        .collect()
}

/// Writes the covering relation only.
pub fn render_lattice(l: &FiniteLattice) -> String {
    let mut out = format!("lattice {}\nsize {}\nleq\n", l.label(), l.size());
    for (a, b) in l.covers() {
        out.push_str(&format!("{a} {b}\n"));
    }
    out
}
