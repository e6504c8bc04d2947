use rand::Rng as _;

use super::{End, Language, OpKind, Transcript, TranscriptOp};
use crate::error::{Error, Result};
use crate::rng::Rng;

const KEYS: usize = 3;
const MAX_PRIORITY: i64 = 8;

fn random_key(rng: &mut Rng) -> String {
    format!("k{}", rng.gen_range(0..KEYS))
}

fn random_end(rng: &mut Rng) -> End {
    if rng.gen::<bool>() {
        End::Head
    } else {
        End::Tail
    }
}

fn random_op(language: Language, rng: &mut Rng) -> TranscriptOp {
    let key = random_key(rng);
    let mut op = if rng.gen::<bool>() { TranscriptOp::ins(&key) } else { TranscriptOp::ext(&key) };
    if language == Language::PriorityQueue && op.kind == OpKind::Ins {
        op.priority = Some(rng.gen_range(0..MAX_PRIORITY));
    }
    if language == Language::Deque {
        op.end = Some(random_end(rng));
    }
    op
}

/// A valid transcript of `n` ops (`n / 2` inserts) over keys `k0`..`k2`,
/// followed by `k` random edits: delete an op, change an op's key, or insert a
/// random op.
pub fn gen_transcript(language: Language, n: usize, k: usize, rng: &mut Rng) -> Result<Transcript> {
    if n % 2 == 1 {
        return Err(Error::BadParams(format!("transcript length must be even, got {n}")));
    }
    // Live elements as (key, priority, insertion order); the deque keeps them
    // in head-to-tail order, the others in insertion order.
    let mut live: Vec<(String, i64, usize)> = Vec::new();
    let mut ops = Vec::with_capacity(n + k);
    let mut inserts_left = n / 2;
    for step in 0..n {
        if inserts_left > 0 && (live.is_empty() || rng.gen::<bool>()) {
            inserts_left -= 1;
            let key = random_key(rng);
            let priority = rng.gen_range(0..MAX_PRIORITY);
            let mut op = TranscriptOp::ins(&key);
            match language {
                Language::PriorityQueue => op.priority = Some(priority),
                Language::Deque => op.end = Some(random_end(rng)),
                _ => {}
            }
            if op.end == Some(End::Head) {
                live.insert(0, (key, priority, step));
            } else {
                live.push((key, priority, step));
            }
            ops.push(op);
            continue;
        }
        let (pos, end) = match language {
            Language::Stack => (live.len() - 1, None),
            Language::Queue => (0, None),
            Language::PriorityQueue => {
                let min = live.iter().map(|e| e.1).min().expect("non-empty");
                (live.iter().position(|e| e.1 == min).expect("present"), None)
            }
            Language::Deque => match random_end(rng) {
                End::Head => (0, Some(End::Head)),
                End::Tail => (live.len() - 1, Some(End::Tail)),
            },
        };
        let (key, _, _) = live.remove(pos);
        let mut op = TranscriptOp::ext(&key);
        op.end = end;
        ops.push(op);
    }
    for _ in 0..k {
        match rng.gen_range(0..3) {
            0 if !ops.is_empty() => {
                let i = rng.gen_range(0..ops.len());
                ops.remove(i);
            }
            1 if !ops.is_empty() => {
                let i = rng.gen_range(0..ops.len());
                ops[i].key = random_key(rng);
            }
            _ => {
                let i = rng.gen_range(0..=ops.len());
                ops.insert(i, random_op(language, rng));
            }
        }
    }
    Transcript::new(language, ops)
}
