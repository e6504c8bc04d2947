//! Text formats for parenthesis strings.
//!
//! * compact: `([{<` open and `)]}>` close, type ids 0..3, whitespace ignored.
//! * tokens: whitespace-separated `name` (open) and `/name` (close); names are
//!   interned to type ids in first-appearance order.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::symbol::{ParenString, ParenSymbol, Polarity};

const OPENS: [char; 4] = ['(', '[', '{', '<'];
const CLOSES: [char; 4] = [')', ']', '}', '>'];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Compact,
    Tokens,
}

/// Interned type names of the token format, indexed by type id.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TokenNames {
    names: Vec<String>,
    ids: HashMap<String, u32>,
}

impl TokenNames {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, name: &str) -> u32 {
        if let Some(&id) = self.ids.get(name) {
            return id;
        }
        let id = self.names.len() as u32;
        self.names.push(name.to_owned());
        self.ids.insert(name.to_owned(), id);
        id
    }

    pub fn id(&self, name: &str) -> Option<u32> {
        self.ids.get(name).copied()
    }

    /// Name for a type id; ids without a name render as `t<id>`.
    pub fn name(&self, type_id: u32) -> String {
        self.names
            .get(type_id as usize)
            .cloned()
            .unwrap_or_else(|| format!("t{type_id}"))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

pub fn parse_compact(text: &str) -> Result<ParenString> {
    let mut symbols = Vec::with_capacity(text.len());
    for (i, ch) in text.chars().enumerate() {
        if ch.is_whitespace() {
            continue;
        }
        let symbol = if let Some(t) = OPENS.iter().position(|&c| c == ch) {
            ParenSymbol::open(t as u32)
        } else if let Some(t) = CLOSES.iter().position(|&c| c == ch) {
            ParenSymbol::close(t as u32)
        } else {
            return Err(Error::UnknownCharacter { position: i + 1, ch });
        };
        symbols.push(symbol);
    }
    Ok(ParenString::from_symbols(symbols))
}

pub fn parse_tokens(text: &str) -> Result<(ParenString, TokenNames)> {
    let mut names = TokenNames::new();
    let mut symbols = Vec::new();
    for (i, token) in text.split_whitespace().enumerate() {
        let symbol = match token.strip_prefix('/') {
            Some("") => return Err(Error::EmptyTypeName { token: i + 1 }),
            Some(name) => ParenSymbol::close(names.intern(name)),
            None => ParenSymbol::open(names.intern(token)),
        };
        symbols.push(symbol);
    }
    let alphabet_size = (names.len() as u32).max(1);
    Ok((ParenString::new(symbols, alphabet_size)?, names))
}

pub fn symbol_char(symbol: ParenSymbol) -> Result<char> {
    let table = match symbol.polarity {
        Polarity::Open => &OPENS,
        Polarity::Close => &CLOSES,
    };
    table
        .get(symbol.type_id as usize)
        .copied()
        .ok_or(Error::Unrenderable { type_id: symbol.type_id })
}

pub fn render_compact(p: &ParenString) -> Result<String> {
    p.symbols().iter().map(|&s| symbol_char(s)).collect()
}

pub fn symbol_token(symbol: ParenSymbol, names: &TokenNames) -> String {
    match symbol.polarity {
        Polarity::Open => names.name(symbol.type_id),
        Polarity::Close => format!("/{}", names.name(symbol.type_id)),
    }
}

pub fn render_tokens(p: &ParenString, names: &TokenNames) -> String {
    p.symbols()
        .iter()
        .map(|&s| symbol_token(s, names))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Parse in either format; compact input gets a synthetic name table.
pub fn parse(text: &str, format: Format) -> Result<(ParenString, TokenNames)> {
    match format {
        Format::Compact => Ok((parse_compact(text)?, TokenNames::new())),
        Format::Tokens => parse_tokens(text),
    }
}

pub fn render(p: &ParenString, format: Format, names: &TokenNames) -> Result<String> {
    match format {
        Format::Compact => render_compact(p),
        Format::Tokens => Ok(render_tokens(p, names)),
    }
}

/// Parse one symbol in the given format (used by edit-script files).
pub fn parse_symbol(text: &str, format: Format, names: &TokenNames) -> Option<ParenSymbol> {
    match format {
        Format::Compact => {
            let mut chars = text.chars();
            let ch = chars.next()?;
            if chars.next().is_some() {
                return None;
            }
            OPENS
                .iter()
                .position(|&c| c == ch)
                .map(|t| ParenSymbol::open(t as u32))
                .or_else(|| CLOSES.iter().position(|&c| c == ch).map(|t| ParenSymbol::close(t as u32)))
        }
        Format::Tokens => match text.strip_prefix('/') {
            Some(name) => lookup(name, names).map(ParenSymbol::close),
            None => lookup(text, names).map(ParenSymbol::open),
        },
    }
}

fn lookup(name: &str, names: &TokenNames) -> Option<u32> {
    names
        .id(name)
        .or_else(|| name.strip_prefix('t').and_then(|n| n.parse().ok()))
}
