//! Transcripts of insert/extract operations on a stack, queue, priority
//! queue or deque, and their repair by deleting operations.
//!
//! Text format, one op per line (blank lines and `#` comments are skipped):
//!
//! ```text
//! stack, queue:  I <key>        E <key>
//! pq:            I <key> <prio> E <key>
//! deque:         IH <key>  IT <key>  EH <key>  ET <key>
//! ```
//!
//! A priority queue extracts the smallest priority; among equal priorities
//! any element may be extracted, and its key must match.

mod gen;
mod repair;

pub use gen::gen_transcript;
pub use repair::{brute_force_transcript_distance, repair, stack_to_dyck, RepairedTranscript};

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Language {
    Stack,
    Queue,
    PriorityQueue,
    Deque,
}

impl Language {
    pub const ALL: [Language; 4] = [Language::Stack, Language::Queue, Language::PriorityQueue, Language::Deque];

    pub fn name(self) -> &'static str {
        match self {
            Language::Stack => "stack",
            Language::Queue => "queue",
            Language::PriorityQueue => "pq",
            Language::Deque => "deque",
        }
    }
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Language {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Language::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| Error::BadParams(format!("unknown language {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OpKind {
    Ins,
    Ext,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum End {
    Head,
    Tail,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TranscriptOp {
    pub kind: OpKind,
    pub key: String,
    /// Priority-queue inserts only.
    pub priority: Option<i64>,
    /// Deque ops only.
    pub end: Option<End>,
}

impl TranscriptOp {
    pub fn ins(key: &str) -> Self {
        Self { kind: OpKind::Ins, key: key.to_string(), priority: None, end: None }
    }

    pub fn ext(key: &str) -> Self {
        Self { kind: OpKind::Ext, key: key.to_string(), priority: None, end: None }
    }

    pub fn ins_prio(key: &str, priority: i64) -> Self {
        Self { priority: Some(priority), ..Self::ins(key) }
    }

    pub fn at(self, end: End) -> Self {
        Self { end: Some(end), ..self }
    }

    fn fits(&self, language: Language) -> bool {
        let prio_ok = match language {
            Language::PriorityQueue => self.priority.is_some() == (self.kind == OpKind::Ins),
            _ => self.priority.is_none(),
        };
        prio_ok && self.end.is_some() == (language == Language::Deque)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript {
    language: Language,
    ops: Vec<TranscriptOp>,
}

impl Transcript {
    pub fn new(language: Language, ops: Vec<TranscriptOp>) -> Result<Self> {
        if let Some(index) = ops.iter().position(|op| !op.fits(language)) {
            return Err(Error::MixedDecorations { index: index + 1 });
        }
        Ok(Self { language, ops })
    }

    pub fn language(&self) -> Language {
        self.language
    }

    pub fn ops(&self) -> &[TranscriptOp] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// The transcript without the ops at the given 1-based positions.
    pub fn without(&self, deleted: &[usize]) -> Self {
        let mut drop = vec![false; self.ops.len() + 1];
        for &i in deleted {
            drop[i] = true;
        }
        let ops = self.ops.iter().enumerate().filter(|(i, _)| !drop[i + 1]).map(|(_, op)| op.clone()).collect();
        Self { language: self.language, ops }
    }

    pub fn parse(text: &str, language: Language) -> Result<Self> {
        let mut ops = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let fields: Vec<&str> = raw.split_whitespace().collect();
            if fields.is_empty() || fields[0].starts_with('#') {
                continue;
            }
            let err = |msg: &str| Error::TranscriptSyntax { line, msg: msg.to_string() };
            let (kind, end) = match (fields[0], language) {
                ("I", Language::Deque) | ("E", Language::Deque) => return Err(err("deque ops need an end: IH, IT, EH or ET")),
                ("I", _) => (OpKind::Ins, None),
                ("E", _) => (OpKind::Ext, None),
                ("IH", Language::Deque) => (OpKind::Ins, Some(End::Head)),
                ("IT", Language::Deque) => (OpKind::Ins, Some(End::Tail)),
                ("EH", Language::Deque) => (OpKind::Ext, Some(End::Head)),
                ("ET", Language::Deque) => (OpKind::Ext, Some(End::Tail)),
                (other, _) => return Err(err(&format!("unknown op {other:?}"))),
            };
            let want = if kind == OpKind::Ins && language == Language::PriorityQueue { 3 } else { 2 };
            if fields.len() != want {
                return Err(err(&format!("expected {want} fields, got {}", fields.len())));
            }
            let priority = if want == 3 {
                Some(fields[2].parse::<i64>().map_err(|_| err("priority must be an integer"))?)
            } else {
                None
            };
            ops.push(TranscriptOp { kind, key: fields[1].to_string(), priority, end });
        }
        Self::new(language, ops)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for op in &self.ops {
            let head = match (op.kind, op.end) {
                (OpKind::Ins, None) => "I",
                (OpKind::Ext, None) => "E",
                (OpKind::Ins, Some(End::Head)) => "IH",
                (OpKind::Ins, Some(End::Tail)) => "IT",
                (OpKind::Ext, Some(End::Head)) => "EH",
                (OpKind::Ext, Some(End::Tail)) => "ET",
            };
            out.push_str(head);
            out.push(' ');
            out.push_str(&op.key);
            if let Some(p) = op.priority {
                out.push_str(&format!(" {p}"));
            }
            out.push('\n');
        }
        out
    }

    /// Replay against the declared structure; it must start and end empty.
    pub fn validate(&self) -> bool {
        let mut ids = HashMap::new();
        let mut key_id = |k: &str| {
            let next = ids.len();
            *ids.entry(k.to_string()).or_insert(next)
        };
        match self.language {
            Language::Stack | Language::Queue | Language::Deque => {
                let mut live: VecDeque<usize> = VecDeque::new();
                for op in &self.ops {
                    let key = key_id(&op.key);
                    let end = match (self.language, op.kind) {
                        (Language::Stack, _) => End::Tail,
                        (Language::Queue, OpKind::Ins) => End::Tail,
                        (Language::Queue, OpKind::Ext) => End::Head,
                        _ => op.end.expect("deque ops carry an end"),
                    };
                    match (op.kind, end) {
                        (OpKind::Ins, End::Head) => live.push_front(key),
                        (OpKind::Ins, End::Tail) => live.push_back(key),
                        (OpKind::Ext, End::Head) if live.front() == Some(&key) => {
                            live.pop_front();
                        }
                        (OpKind::Ext, End::Tail) if live.back() == Some(&key) => {
                            live.pop_back();
                        }
                        _ => return false,
                    }
                }
                live.is_empty()
            }
            Language::PriorityQueue => {
                // (priority, insertion order, key)
                let mut live: Vec<(i64, usize, usize)> = Vec::new();
                for (seq, op) in self.ops.iter().enumerate() {
                    let key = key_id(&op.key);
                    match op.kind {
                        OpKind::Ins => live.push((op.priority.expect("pq inserts carry a priority"), seq, key)),
                        OpKind::Ext => {
                            let Some(min) = live.iter().map(|e| e.0).min() else {
                                return false;
                            };
                            match live.iter().position(|e| e.0 == min && e.2 == key) {
                                Some(pos) => {
                                    live.remove(pos);
                                }
                                None => return false,
                            }
                        }
                    }
                }
                live.is_empty()
            }
        }
    }
}
