//! Parenthesis symbols, strings over a typed alphabet, and the stack-scan
//! membership test for Dyck(s).

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polarity {
    Open,
    Close,
}

/// One parenthesis: a type in `[0, s)` and a polarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParenSymbol {
    pub type_id: u32,
    pub polarity: Polarity,
}

impl ParenSymbol {
    pub const fn open(type_id: u32) -> Self {
        Self { type_id, polarity: Polarity::Open }
    }

    pub const fn close(type_id: u32) -> Self {
        Self { type_id, polarity: Polarity::Close }
    }

    pub fn is_open(self) -> bool {
        self.polarity == Polarity::Open
    }

    pub fn is_close(self) -> bool {
        self.polarity == Polarity::Close
    }

    /// Same type, opposite polarity.
    pub fn congruent(self) -> Self {
        let polarity = match self.polarity {
            Polarity::Open => Polarity::Close,
            Polarity::Close => Polarity::Open,
        };
        Self { type_id: self.type_id, polarity }
    }

    /// True when `self` is an open parenthesis and `close` is its congruent.
    pub fn closes_with(self, close: ParenSymbol) -> bool {
        self.is_open() && close == self.congruent()
    }
}

/// A sequence of parentheses over an alphabet of `alphabet_size` types.
///
/// Positions are 0-based internally; every externally reported index
/// (edit scripts, block decompositions, traces) is 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParenString {
    symbols: Vec<ParenSymbol>,
    alphabet_size: u32,
}

impl ParenString {
    pub fn new(symbols: Vec<ParenSymbol>, alphabet_size: u32) -> Result<Self> {
        if alphabet_size == 0 {
            return Err(Error::EmptyAlphabet);
        }
        if let Some(bad) = symbols.iter().find(|s| s.type_id >= alphabet_size) {
            return Err(Error::TypeOutOfRange { type_id: bad.type_id, alphabet_size });
        }
        Ok(Self { symbols, alphabet_size })
    }

    /// Alphabet size inferred as one more than the largest type seen (minimum 1).
    pub fn from_symbols(symbols: Vec<ParenSymbol>) -> Self {
        let alphabet_size = symbols.iter().map(|s| s.type_id + 1).max().unwrap_or(1);
        Self { symbols, alphabet_size }
    }

    pub fn empty(alphabet_size: u32) -> Self {
        Self { symbols: Vec::new(), alphabet_size: alphabet_size.max(1) }
    }

    /// Re-declare the alphabet; fails if a symbol falls outside it.
    pub fn with_alphabet_size(self, alphabet_size: u32) -> Result<Self> {
        Self::new(self.symbols, alphabet_size)
    }

    pub fn symbols(&self) -> &[ParenSymbol] {
        &self.symbols
    }

    pub fn into_symbols(self) -> Vec<ParenSymbol> {
        self.symbols
    }

    pub fn alphabet_size(&self) -> u32 {
        self.alphabet_size
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Symbol at a 1-based position.
    pub fn at(&self, index: usize) -> ParenSymbol {
        self.symbols[index - 1]
    }

    /// `(original 1-based index, symbol)` pairs.
    pub fn indexed(&self) -> Vec<(usize, ParenSymbol)> {
        self.symbols.iter().enumerate().map(|(i, &s)| (i + 1, s)).collect()
    }

    pub fn is_well_formed(&self) -> bool {
        is_well_formed(&self.symbols)
    }
}

impl fmt::Display for ParenString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match crate::format::render_compact(self) {
            Ok(s) => f.write_str(&s),
            Err(_) => {
                for (i, s) in self.symbols.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    match s.polarity {
                        Polarity::Open => write!(f, "t{}", s.type_id)?,
                        Polarity::Close => write!(f, "/t{}", s.type_id)?,
                    }
                }
                Ok(())
            }
        }
    }
}

/// Membership in Dyck(s) by a single stack scan.
pub fn is_well_formed(symbols: &[ParenSymbol]) -> bool {
    let mut stack: Vec<ParenSymbol> = Vec::new();
    for &s in symbols {
        if s.is_open() {
            stack.push(s);
        } else {
            match stack.pop() {
                Some(top) if top.closes_with(s) => {}
                _ => return false,
            }
        }
    }
    stack.is_empty()
}

fn dyck1_unmatched_pair(p: &ParenString) -> Result<(usize, usize)> {
    if p.alphabet_size() > 1 {
        return Err(Error::NotDyck1 { alphabet_size: p.alphabet_size() });
    }
    let mut depth = 0usize;
    let mut unmatched_close = 0usize;
    for s in p.symbols() {
        if s.is_open() {
            depth += 1;
        } else if depth > 0 {
            depth -= 1;
        } else {
            unmatched_close += 1;
        }
    }
    Ok((unmatched_close, depth))
}

/// Symbols left unmatched by one greedy pass: closes plus opens. This is the
/// deletion-only distance to Dyck(1).
pub fn dyck1_unmatched(p: &ParenString) -> Result<usize> {
    dyck1_unmatched_pair(p).map(|(c, o)| c + o)
}

/// Exact edit distance to Dyck(1) in one pass. The unmatched residue is
/// `)^c (^o`; substituting every other symbol of each run pairs it up, so the
/// cost is `ceil(c/2) + ceil(o/2)`.
pub fn dyck1_distance(p: &ParenString) -> Result<usize> {
    dyck1_unmatched_pair(p).map(|(c, o)| c.div_ceil(2) + o.div_ceil(2))
}
