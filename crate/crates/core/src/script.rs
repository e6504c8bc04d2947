//! Edit scripts keyed to original positions, and repair results.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::format::{parse_symbol, symbol_char, symbol_token, Format, TokenNames};
use crate::symbol::{ParenString, ParenSymbol};

/// One edit. Indices are 1-based positions in the original string;
/// `Insert { after: 0, .. }` prepends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EditOp {
    Delete(usize),
    Substitute(usize, ParenSymbol),
    Insert { after: usize, symbol: ParenSymbol },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EditScript {
    pub ops: Vec<EditOp>,
}

impl EditScript {
    pub fn new(ops: Vec<EditOp>) -> Self {
        Self { ops }
    }

    pub fn cost(&self) -> usize {
        self.ops.len()
    }

    pub fn push(&mut self, op: EditOp) {
        self.ops.push(op);
    }

    pub fn extend(&mut self, ops: impl IntoIterator<Item = EditOp>) {
        self.ops.extend(ops);
    }

    pub fn deletions(indices: impl IntoIterator<Item = usize>) -> Self {
        Self { ops: indices.into_iter().map(EditOp::Delete).collect() }
    }

    /// Ops sorted by position, for stable printing.
    pub fn sorted(&self) -> Self {
        let mut ops = self.ops.clone();
        ops.sort_by_key(|op| match *op {
            EditOp::Delete(i) => (i, 1, None),
            EditOp::Substitute(i, s) => (i, 1, Some(s)),
            EditOp::Insert { after, symbol } => (after, 2, Some(symbol)),
        });
        Self { ops }
    }

    /// One op per line: `D <i>`, `S <i> <symbol>`, `I <after> <symbol>`.
    pub fn to_text(&self, format: Format, names: &TokenNames) -> Result<String> {
        let sym = |s: ParenSymbol| -> Result<String> {
            match format {
                Format::Compact => symbol_char(s).map(String::from),
                Format::Tokens => Ok(symbol_token(s, names)),
            }
        };
        let mut out = String::new();
        for op in &self.ops {
            match *op {
                EditOp::Delete(i) => writeln!(out, "D {i}"),
                EditOp::Substitute(i, s) => writeln!(out, "S {i} {}", sym(s)?),
                EditOp::Insert { after, symbol } => writeln!(out, "I {after} {}", sym(symbol)?),
            }
            .expect("write to String");
        }
        Ok(out)
    }

    pub fn parse_text(text: &str, format: Format, names: &TokenNames) -> Result<Self> {
        let mut ops = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line_no = n + 1;
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.is_empty() {
                continue;
            }
            let bad = |msg: &str| Error::ScriptSyntax { line: line_no, msg: msg.to_owned() };
            let index: usize = fields
                .get(1)
                .ok_or_else(|| bad("missing index"))?
                .parse()
                .map_err(|_| bad("index is not a number"))?;
            let symbol = || -> Result<ParenSymbol> {
                let text = fields.get(2).ok_or_else(|| bad("missing symbol"))?;
                parse_symbol(text, format, names).ok_or_else(|| bad("unknown symbol"))
            };
            let op = match fields[0] {
                "D" if fields.len() == 2 => EditOp::Delete(index),
                "S" if fields.len() == 3 => EditOp::Substitute(index, symbol()?),
                "I" if fields.len() == 3 => EditOp::Insert { after: index, symbol: symbol()? },
                _ => return Err(bad("expected `D i`, `S i sym` or `I i sym`")),
            };
            ops.push(op);
        }
        Ok(Self { ops })
    }
}

/// Apply a script to `p`.
///
/// Substitutions and deletions act on original positions; insertions are
/// anchored after original positions. Inserts sharing an anchor are emitted
/// closes first, then opens, each by type id, so the result does not depend
/// on the order of `script.ops`.
pub fn apply_script(p: &ParenString, script: &EditScript) -> Result<ParenString> {
    let n = p.len();
    let mut replaced: Vec<Option<Option<ParenSymbol>>> = vec![None; n + 1];
    let mut inserts: Vec<(usize, ParenSymbol)> = Vec::new();
    for op in &script.ops {
        match *op {
            EditOp::Delete(i) | EditOp::Substitute(i, _) => {
                if i == 0 || i > n {
                    return Err(Error::IndexOutOfRange { index: i, len: n });
                }
                if replaced[i].is_some() {
                    return Err(Error::ConflictingOps { index: i });
                }
                replaced[i] = Some(match *op {
                    EditOp::Substitute(_, s) => Some(s),
                    _ => None,
                });
            }
            EditOp::Insert { after, symbol } => {
                if after > n {
                    return Err(Error::IndexOutOfRange { index: after, len: n });
                }
                inserts.push((after, symbol));
            }
        }
    }
    inserts.sort_by_key(|&(after, s)| (after, std::cmp::Reverse(s.polarity), s.type_id));

    let mut out = Vec::with_capacity(n + inserts.len());
    let mut pending = inserts.iter().peekable();
    let mut flush = |anchor: usize, out: &mut Vec<ParenSymbol>| {
        while let Some(&&(after, s)) = pending.peek() {
            if after != anchor {
                break;
            }
            out.push(s);
            pending.next();
        }
    };
    flush(0, &mut out);
    for (i, &symbol) in p.symbols().iter().enumerate() {
        match replaced[i + 1] {
            None => out.push(symbol),
            Some(Some(s)) => out.push(s),
            Some(None) => {}
        }
        flush(i + 1, &mut out);
    }
    let alphabet_size = out
        .iter()
        .map(|s| s.type_id + 1)
        .max()
        .unwrap_or(1)
        .max(p.alphabet_size());
    ParenString::new(out, alphabet_size)
}

/// Edit cost, script, and the well-formed string the script produces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepairResult {
    pub cost: usize,
    pub script: EditScript,
    pub repaired: ParenString,
}

impl RepairResult {
    /// Applies `script` to `input` and checks the output is well-formed.
    pub fn from_script(input: &ParenString, script: EditScript) -> Result<Self> {
        let repaired = apply_script(input, &script)?;
        if !repaired.is_well_formed() {
            return Err(Error::Invariant("repair script does not yield a well-formed string".into()));
        }
        Ok(Self { cost: script.cost(), script, repaired })
    }
}
