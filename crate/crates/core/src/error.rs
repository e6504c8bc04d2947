use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// 1-based character position in the input text.
    #[error("unknown character {ch:?} at position {position}")]
    UnknownCharacter { position: usize, ch: char },

    #[error("empty type name in token {token}")]
    EmptyTypeName { token: usize },

    #[error("symbol type {type_id} is outside an alphabet of size {alphabet_size}")]
    TypeOutOfRange { type_id: u32, alphabet_size: u32 },

    #[error("alphabet size must be at least 1")]
    EmptyAlphabet,

    #[error("compact format supports at most 4 parenthesis types, got type {type_id}")]
    Unrenderable { type_id: u32 },

    #[error("single-pass distance requires a one-type alphabet, got {alphabet_size}")]
    NotDyck1 { alphabet_size: u32 },

    #[error("edit index {index} out of range for a string of length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("conflicting edits on position {index}")]
    ConflictingOps { index: usize },

    #[error("malformed edit script line {line}: {msg}")]
    ScriptSyntax { line: usize, msg: String },

    #[error("input length {n} exceeds the cap {cap}")]
    TooLarge { n: usize, cap: usize },

    #[error("no well-formed string within {max_cost} edits")]
    NotFound { max_cost: usize },

    #[error("run matching expects all-open then all-close symbols")]
    PolarityViolation,

    #[error("local windows overlap at position {index}")]
    WindowOverlap { index: usize },

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("transcript line {line}: {msg}")]
    TranscriptSyntax { line: usize, msg: String },

    #[error("transcript op {index} has decorations inconsistent with the language")]
    MixedDecorations { index: usize },

    #[error("bad parameters: {0}")]
    BadParams(String),

    #[error("config line {line}: {msg}")]
    Config { line: usize, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
