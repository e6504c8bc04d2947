use std::cmp::Reverse;
use std::collections::{HashMap, VecDeque};

use rand::Rng as _;
use rayon::prelude::*;

use super::{End, Language, OpKind, Transcript};
use crate::error::{Error, Result};
use crate::repair::{repair as repair_string, RepairParams};
use crate::rng::{substream, Rng};
use crate::script::EditOp;
use crate::stredit::IndelDistance;
use crate::symbol::{ParenString, ParenSymbol};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepairedTranscript {
    pub transcript: Transcript,
    /// 1-based positions of the deleted ops, sorted.
    pub deleted: Vec<usize>,
    pub cost: usize,
}

/// Inserts become opens and extracts closes, one type per distinct key (in
/// order of first appearance). Returns the string and the key of each type.
pub fn stack_to_dyck(t: &Transcript) -> Result<(ParenString, Vec<String>)> {
    if t.language() != Language::Stack {
        return Err(Error::BadParams(format!("expected a stack transcript, got {}", t.language())));
    }
    let mut ids: HashMap<&str, u32> = HashMap::new();
    let mut keys = Vec::new();
    let mut symbols = Vec::with_capacity(t.len());
    for (i, op) in t.ops().iter().enumerate() {
        if op.priority.is_some() || op.end.is_some() {
            return Err(Error::MixedDecorations { index: i + 1 });
        }
        let id = *ids.entry(op.key.as_str()).or_insert_with(|| {
            keys.push(op.key.clone());
            keys.len() as u32 - 1
        });
        symbols.push(match op.kind {
            OpKind::Ins => ParenSymbol::open(id),
            OpKind::Ext => ParenSymbol::close(id),
        });
    }
    let p = ParenString::new(symbols, (keys.len() as u32).max(1))?;
    Ok((p, keys))
}

#[derive(Debug, Clone, Copy)]
struct Op {
    kind: OpKind,
    key: u32,
    priority: i64,
    end: End,
}

fn intern(t: &Transcript) -> Vec<Op> {
    let mut ids: HashMap<&str, u32> = HashMap::new();
    t.ops()
        .iter()
        .enumerate()
        .map(|(seq, op)| {
            let next = ids.len() as u32;
            let key = *ids.entry(op.key.as_str()).or_insert(next);
            let priority = match t.language() {
                Language::Queue => seq as i64,
                _ => op.priority.unwrap_or(0),
            };
            Op { kind: op.kind, key, priority, end: op.end.unwrap_or(End::Tail) }
        })
        .collect()
}

/// Random deletion over a priority queue. At each switch from inserts to
/// extracts the live elements are sorted so the minimum priority is on top,
/// oldest first among equals; an extract matches any minimum-priority element
/// with its key. Returns the deleted 0-based positions.
fn pq_scan(ops: &[Op], rng: &mut Rng) -> Vec<usize> {
    // (priority, position, key); the top is the last element.
    let mut live: Vec<(i64, usize, u32)> = Vec::new();
    let mut deleted = Vec::new();
    let mut dirty = false;
    for (i, op) in ops.iter().enumerate() {
        if op.kind == OpKind::Ins {
            live.push((op.priority, i, op.key));
            dirty = true;
            continue;
        }
        if dirty {
            live.sort_unstable_by_key(|&(p, pos, _)| (Reverse(p), Reverse(pos)));
            dirty = false;
        }
        loop {
            let Some(&(min, _, _)) = live.last() else {
                deleted.push(i);
                break;
            };
            let hit = live.iter().rev().take_while(|e| e.0 == min).position(|e| e.2 == op.key);
            if let Some(back) = hit {
                live.remove(live.len() - 1 - back);
                break;
            }
            if rng.gen::<bool>() {
                deleted.push(live.pop().expect("non-empty").1);
            } else {
                deleted.push(i);
                break;
            }
        }
    }
    deleted.extend(live.into_iter().map(|e| e.1));
    deleted
}

/// Random deletion over a deque: an extract is compared with the element at
/// its own end.
fn deque_scan(ops: &[Op], rng: &mut Rng) -> Vec<usize> {
    let mut live: VecDeque<(usize, u32)> = VecDeque::new();
    let mut deleted = Vec::new();
    for (i, op) in ops.iter().enumerate() {
        match (op.kind, op.end) {
            (OpKind::Ins, End::Head) => live.push_front((i, op.key)),
            (OpKind::Ins, End::Tail) => live.push_back((i, op.key)),
            (OpKind::Ext, end) => loop {
                let top = match end {
                    End::Head => live.front(),
                    End::Tail => live.back(),
                };
                let Some(&(pos, key)) = top else {
                    deleted.push(i);
                    break;
                };
                let take = key == op.key || rng.gen::<bool>();
                if take {
                    match end {
                        End::Head => live.pop_front(),
                        End::Tail => live.pop_back(),
                    };
                    if key != op.key {
                        deleted.push(pos);
                        continue;
                    }
                } else {
                    deleted.push(i);
                }
                break;
            },
        }
    }
    deleted.extend(live.into_iter().map(|e| e.0));
    deleted
}

fn finish(t: &Transcript, mut deleted: Vec<usize>) -> Result<RepairedTranscript> {
    deleted.sort_unstable();
    let transcript = t.without(&deleted);
    if !transcript.validate() {
        return Err(Error::Invariant("repaired transcript does not validate".into()));
    }
    Ok(RepairedTranscript { transcript, cost: deleted.len(), deleted })
}

/// Delete ops until the transcript validates.
///
/// Stack transcripts go through the string repairs with deletion-only string
/// edits. The other languages run their scan `iterations` times and keep the
/// run with the fewest deletions.
pub fn repair(t: &Transcript, params: &RepairParams) -> Result<RepairedTranscript> {
    if t.language() == Language::Stack {
        let (p, _) = stack_to_dyck(t)?;
        let r = repair_string(&p, params, &IndelDistance)?;
        let deleted = r
            .script
            .ops
            .iter()
            .map(|op| match *op {
                EditOp::Delete(i) => Ok(i),
                _ => Err(Error::Invariant("stack repair produced a non-deletion".into())),
            })
            .collect::<Result<Vec<_>>>()?;
        return finish(t, deleted);
    }
    let ops = intern(t);
    let scan = match t.language() {
        Language::Deque => deque_scan,
        _ => pq_scan,
    };
    let iterations = params.iterations_for(t.len())? as u64;
    let (_, best) = (0..iterations)
        .into_par_iter()
        .map(|i| (scan(&ops, &mut substream(params.seed, i)).len(), i))
        .min()
        .expect("at least one iteration");
    let deleted = scan(&ops, &mut substream(params.seed, best));
    finish(t, deleted.into_iter().map(|i| i + 1).collect())
}

const BRUTE_CAP: usize = 16;

/// Fewest op deletions that make `t` validate, by trying every subset in
/// increasing size.
pub fn brute_force_transcript_distance(t: &Transcript, max_cost: usize) -> Result<usize> {
    let n = t.len();
    if n > BRUTE_CAP {
        return Err(Error::TooLarge { n, cap: BRUTE_CAP });
    }
    for k in 0..=max_cost.min(n) {
        let mut chosen: Vec<usize> = (1..=k).collect();
        loop {
            if t.without(&chosen).validate() {
                return Ok(k);
            }
            // Next k-subset of 1..=n in lexicographic order.
            let Some(j) = (0..k).rev().find(|&j| chosen[j] < n - (k - 1 - j)) else {
                break;
            };
            chosen[j] += 1;
            for m in j + 1..k {
                chosen[m] = chosen[m - 1] + 1;
            }
        }
    }
    Err(Error::NotFound { max_cost })
}

#[cfg(test)]
mod tests {
    use super::super::TranscriptOp as O;
    use super::*;
    use crate::randomdel::best_of;
    use crate::repair::Algorithm;

    fn t(language: Language, ops: Vec<O>) -> Transcript {
        Transcript::new(language, ops).unwrap()
    }

    fn params(algorithm: Algorithm, seed: u64) -> RepairParams {
        RepairParams::new(algorithm, seed)
    }

    #[test]
    fn stack_mapping() {
        let (p, keys) = stack_to_dyck(&t(Language::Stack, vec![O::ins("a"), O::ext("a")])).unwrap();
        assert_eq!(p.to_string(), "()");
        assert_eq!(keys, vec!["a"]);
        let (p, _) = stack_to_dyck(&t(Language::Stack, vec![O::ins("a"), O::ins("b"), O::ext("a"), O::ext("b")])).unwrap();
        assert_eq!(p.to_string(), "([)]");
        let (p, _) = stack_to_dyck(&t(Language::Stack, vec![])).unwrap();
        assert!(p.is_empty());
        assert!(stack_to_dyck(&t(Language::Queue, vec![])).is_err());
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(brute_force_transcript_distance(&t(Language::Stack, vec![O::ins("a"), O::ext("a")]), 3), Ok(0));
        assert_eq!(brute_force_transcript_distance(&t(Language::Stack, vec![O::ext("a")]), 3), Ok(1));
        assert_eq!(brute_force_transcript_distance(&t(Language::Stack, vec![O::ins("a"), O::ext("b")]), 3), Ok(2));
        let q = t(Language::Queue, vec![O::ins("a"), O::ins("b"), O::ext("b"), O::ext("a")]);
        assert_eq!(brute_force_transcript_distance(&q, 4), Ok(2));
        let pq = t(
            Language::PriorityQueue,
            vec![O::ins_prio("a", 1), O::ins_prio("b", 2), O::ext("b"), O::ext("a")],
        );
        assert_eq!(brute_force_transcript_distance(&pq, 4), Ok(2));
        assert_eq!(brute_force_transcript_distance(&q, 1), Err(Error::NotFound { max_cost: 1 }));
    }

    #[test]
    fn valid_transcripts_cost_nothing() {
        let cases = [
            t(Language::Stack, vec![O::ins("a"), O::ins("b"), O::ext("b"), O::ext("a")]),
            t(Language::Queue, vec![O::ins("a"), O::ins("b"), O::ext("a"), O::ext("b")]),
            t(Language::PriorityQueue, vec![O::ins_prio("a", 5), O::ins_prio("b", 2), O::ext("b"), O::ext("a")]),
            t(Language::Deque, vec![O::ins("a").at(End::Head), O::ins("b").at(End::Head), O::ext("a").at(End::Tail), O::ext("b").at(End::Tail)]),
        ];
        for tr in cases {
            for a in Algorithm::ALL {
                assert_eq!(repair(&tr, &params(a, 1)).unwrap().cost, 0, "{}", tr.language());
            }
        }
    }

    #[test]
    fn small_examples_reach_the_optimum() {
        let q = t(Language::Queue, vec![O::ins("a"), O::ins("b"), O::ext("b"), O::ext("a")]);
        let r = repair(&q, &params(Algorithm::Random, 0)).unwrap();
        assert_eq!(r.cost, 2);
        assert!(r.transcript.validate());
        let pq = t(
            Language::PriorityQueue,
            vec![O::ins_prio("a", 1), O::ins_prio("b", 2), O::ext("b"), O::ext("a")],
        );
        assert_eq!(repair(&pq, &params(Algorithm::Random, 0)).unwrap().cost, 2);
    }

    #[test]
    fn stack_repair_is_the_string_repair() {
        let ops: Vec<O> = "a b a c b c c a b"
            .split(' ')
            .enumerate()
            .map(|(i, k)| if i % 3 == 2 { O::ext(k) } else { O::ins(k) })
            .collect();
        let tr = t(Language::Stack, ops);
        let (p, _) = stack_to_dyck(&tr).unwrap();
        for seed in 0..10 {
            let mut prm = params(Algorithm::Random, seed);
            prm.iterations = Some(3);
            assert_eq!(repair(&tr, &prm).unwrap().cost, best_of(&p, 3, seed).cost);
        }
    }

    /// Two-instance reading of the deque scan: one stack-like instance for the
    /// tail extracts and one queue-like instance for the head extracts, moved
    /// in transcript order, with deleted inserts removed from both.
    fn lockstep(ops: &[Op], rng: &mut Rng) -> Vec<usize> {
        let mut stack: Vec<(usize, u32)> = Vec::new();
        let mut queue: VecDeque<(usize, u32)> = VecDeque::new();
        let mut gone = vec![false; ops.len()];
        let mut deleted = Vec::new();
        for (i, op) in ops.iter().enumerate() {
            if op.kind == OpKind::Ins {
                stack.push((i, op.key));
                queue.push_back((i, op.key));
                continue;
            }
            loop {
                let top = match op.end {
                    End::Tail => loop {
                        match stack.last() {
                            Some(&(p, _)) if gone[p] => {
                                stack.pop();
                            }
                            other => break other.copied(),
                        }
                    },
                    End::Head => loop {
                        match queue.front() {
                            Some(&(p, _)) if gone[p] => {
                                queue.pop_front();
                            }
                            other => break other.copied(),
                        }
                    },
                };
                let Some((pos, key)) = top else {
                    deleted.push(i);
                    break;
                };
                if key == op.key || rng.gen::<bool>() {
                    gone[pos] = true;
                    if key != op.key {
                        deleted.push(pos);
                        continue;
                    }
                } else {
                    deleted.push(i);
                }
                break;
            }
        }
        deleted.extend((0..ops.len()).filter(|&i| ops[i].kind == OpKind::Ins && !gone[i]));
        deleted
    }

    #[test]
    fn deque_scan_matches_the_two_instance_reading() {
        let keys = ["a", "b", "c"];
        for seed in 0..200u64 {
            let mut rng = substream(seed, 99);
            let ops: Vec<O> = (0..12)
                .map(|_| {
                    let k = keys[rng.gen_range(0..3)];
                    match rng.gen_range(0..3) {
                        0 => O::ins(k).at(End::Tail),
                        1 => O::ext(k).at(End::Tail),
                        _ => O::ext(k).at(End::Head),
                    }
                })
                .collect();
            let tr = t(Language::Deque, ops);
            let ops = intern(&tr);
            let mut a = deque_scan(&ops, &mut substream(seed, 0));
            let mut b = lockstep(&ops, &mut substream(seed, 0));
            a.sort_unstable();
            b.sort_unstable();
            assert_eq!(a, b, "seed {seed}");
        }
    }
}
