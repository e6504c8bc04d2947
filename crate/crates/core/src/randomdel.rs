//! Random-deletion: a stack scan that, on every mismatch between the stack
//! top and the current close, deletes one of the two by a fair coin.
//!
//! Opens are pushed. A close that matches the top's congruent is matched; a
//! close on an empty stack is deleted; otherwise the coin picks the top or the
//! close. Opens still on the stack when the input ends are deleted. Every run
//! leaves a well-formed string, and its deletion count is bounded in terms of
//! the optimum by a gambler's-ruin hitting time started at that optimum.

use rand::Rng as _;
use rayon::prelude::*;

use crate::error::Result;
use crate::rng::{substream, Rng};
use crate::script::{EditScript, RepairResult};
use crate::symbol::{ParenString, ParenSymbol};

/// `b = 1 / (1 - 0.194)`, rounded as in the restart analysis.
pub const RESTART_BASE: f64 = 1.24;

/// `ceil(3 * log_b n)` restarts, at least one.
pub fn default_iterations(n: usize) -> usize {
    if n < 2 {
        return 1;
    }
    ((3.0 * (n as f64).ln() / RESTART_BASE.ln()).ceil() as usize).max(1)
}

/// `ceil(3 * n^eps * log_b n)` restarts, at least one.
pub fn epsilon_iterations(n: usize, epsilon: f64) -> usize {
    if n < 2 {
        return 1;
    }
    let n = n as f64;
    ((3.0 * n.powf(epsilon) * n.ln() / RESTART_BASE.ln()).ceil() as usize).max(1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RdEventKind {
    Match,
    DeleteOpen,
    DeleteClose,
    FlushOpen,
}

/// One move of the scan. `open_index`/`close_index` are the 1-based indices
/// the move consumes; `against` is the close that a `DeleteOpen` was compared
/// with (it stays unconsumed).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RdEvent {
    pub time: usize,
    pub kind: RdEventKind,
    pub open_index: Option<usize>,
    pub close_index: Option<usize>,
    pub against: Option<usize>,
}

impl RdEvent {
    pub fn is_deletion(&self) -> bool {
        self.kind != RdEventKind::Match
    }

    /// Indices consumed by this event.
    pub fn consumed(&self) -> impl Iterator<Item = usize> {
        self.open_index.into_iter().chain(self.close_index)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RdTrace {
    pub events: Vec<RdEvent>,
    /// Number of deletion events.
    pub cost: usize,
    pub seed: u64,
    pub stream: u64,
    /// Close-versus-stack comparisons performed.
    pub comparisons: usize,
}

impl RdTrace {
    pub fn deleted(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self
            .events
            .iter()
            .filter(|e| e.is_deletion())
            .flat_map(|e| e.consumed())
            .collect();
        d.sort_unstable();
        d
    }

    pub fn repair(&self, input: &ParenString) -> Result<RepairResult> {
        RepairResult::from_script(input, EditScript::deletions(self.deleted()))
    }
}

/// What to do with the current close.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Move {
    Match,
    DeleteOpen,
    DeleteClose,
}

/// The scan's rule for a close against an optional stack top. Draws a coin
/// only on a mismatch.
pub fn decide(top: Option<ParenSymbol>, close: ParenSymbol, rng: &mut Rng) -> Move {
    match top {
        None => Move::DeleteClose,
        Some(t) if t.closes_with(close) => Move::Match,
        Some(_) if rng.gen::<bool>() => Move::DeleteOpen,
        Some(_) => Move::DeleteClose,
    }
}

/// Resumable scan over a subsequence `(original index, symbol)`.
pub struct Scanner<'a> {
    seq: &'a [(usize, ParenSymbol)],
    stack: Vec<usize>,
    cursor: usize,
    time: usize,
    comparisons: usize,
}

impl<'a> Scanner<'a> {
    pub fn new(seq: &'a [(usize, ParenSymbol)]) -> Self {
        Self { seq, stack: Vec::new(), cursor: 0, time: 0, comparisons: 0 }
    }

    /// Position in `seq` of the next unread symbol.
    pub fn cursor(&self) -> usize {
        self.cursor
    }

    pub fn comparisons(&self) -> usize {
        self.comparisons
    }

    /// Next event, or `None` once everything is consumed.
    pub fn step(&mut self, rng: &mut Rng) -> Option<RdEvent> {
        while self.cursor < self.seq.len() && self.seq[self.cursor].1.is_open() {
            self.stack.push(self.cursor);
            self.cursor += 1;
        }
        let (kind, open, close, against) = if self.cursor < self.seq.len() {
            let (ci, cs) = self.seq[self.cursor];
            self.comparisons += 1;
            let top = self.stack.last().map(|&k| self.seq[k]);
            match decide(top.map(|t| t.1), cs, rng) {
                Move::Match => {
                    self.stack.pop();
                    self.cursor += 1;
                    (RdEventKind::Match, top.map(|t| t.0), Some(ci), None)
                }
                Move::DeleteOpen => {
                    self.stack.pop();
                    (RdEventKind::DeleteOpen, top.map(|t| t.0), None, Some(ci))
                }
                Move::DeleteClose => {
                    self.cursor += 1;
                    (RdEventKind::DeleteClose, None, Some(ci), None)
                }
            }
        } else {
            let k = self.stack.pop()?;
            (RdEventKind::FlushOpen, Some(self.seq[k].0), None, None)
        };
        self.time += 1;
        Some(RdEvent { time: self.time, kind, open_index: open, close_index: close, against })
    }
}

/// Full trace of one run over a subsequence.
pub fn run_indexed(seq: &[(usize, ParenSymbol)], rng: &mut Rng) -> (Vec<RdEvent>, usize) {
    let mut scanner = Scanner::new(seq);
    let mut events = Vec::with_capacity(seq.len());
    while let Some(e) = scanner.step(rng) {
        events.push(e);
    }
    (events, scanner.comparisons())
}

/// Deletion count of one run, without recording events.
pub fn run_cost(seq: &[(usize, ParenSymbol)], rng: &mut Rng) -> usize {
    let mut stack: Vec<ParenSymbol> = Vec::new();
    let mut cost = 0;
    let mut k = 0;
    while k < seq.len() {
        let s = seq[k].1;
        if s.is_open() {
            stack.push(s);
            k += 1;
            continue;
        }
        match decide(stack.last().copied(), s, rng) {
            Move::Match => {
                stack.pop();
                k += 1;
            }
            Move::DeleteOpen => {
                stack.pop();
                cost += 1;
            }
            Move::DeleteClose => {
                cost += 1;
                k += 1;
            }
        }
    }
    cost + stack.len()
}

fn trace_for(seq: &[(usize, ParenSymbol)], seed: u64, stream: u64) -> RdTrace {
    let mut rng = substream(seed, stream);
    let (events, comparisons) = run_indexed(seq, &mut rng);
    let cost = events.iter().filter(|e| e.is_deletion()).count();
    RdTrace { events, cost, seed, stream, comparisons }
}

/// One run over the whole string, coins from `substream(seed, 0)`.
pub fn run(p: &ParenString, seed: u64) -> RdTrace {
    trace_for(&p.indexed(), seed, 0)
}

/// Best of `iterations` independent runs (run `i` uses `substream(seed, i)`);
/// ties go to the lowest `i`.
pub fn best_of(p: &ParenString, iterations: usize, seed: u64) -> RdTrace {
    best_of_indexed(&p.indexed(), iterations, seed)
}

pub fn best_of_indexed(seq: &[(usize, ParenSymbol)], iterations: usize, seed: u64) -> RdTrace {
    let iterations = iterations.max(1) as u64;
    let (_, best) = (0..iterations)
        .into_par_iter()
        .map(|i| (run_cost(seq, &mut substream(seed, i)), i))
        .min()
        .expect("at least one iteration");
    trace_for(seq, seed, best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::parse_compact;
    use crate::oracle::dyck_deletion_dp;
    use proptest::prelude::*;

    fn p(text: &str) -> ParenString {
        parse_compact(text).unwrap()
    }

    #[test]
    fn iteration_counts() {
        assert_eq!(default_iterations(2), 10);
        assert_eq!(default_iterations(1024), 97);
        assert_eq!(epsilon_iterations(4, 1.0), 78);
        assert_eq!(default_iterations(1), 1);
    }

    #[test]
    fn matched_pair_uses_no_randomness() {
        let t = run(&p("()"), 3);
        assert_eq!(t.cost, 0);
        assert_eq!(t.events.len(), 1);
        assert_eq!(t.events[0].kind, RdEventKind::Match);
        assert_eq!((t.events[0].open_index, t.events[0].close_index), (Some(1), Some(2)));
    }

    #[test]
    fn leftover_opens_are_flushed() {
        let t = run(&p("(("), 0);
        assert_eq!(t.cost, 2);
        assert!(t.events.iter().all(|e| e.kind == RdEventKind::FlushOpen));
        assert_eq!(t.events[0].open_index, Some(2));
    }

    #[test]
    fn mismatch_costs_two_either_way() {
        let mut kinds = std::collections::HashSet::new();
        for seed in 0..32 {
            let t = run(&p("(]"), seed);
            assert_eq!(t.cost, 2);
            kinds.insert(t.events[0].kind);
        }
        assert_eq!(kinds.len(), 2, "both coin outcomes occur");
        assert_eq!(best_of(&p("(]"), 5, 1).cost, 2);
    }

    #[test]
    fn best_of_is_deterministic() {
        let s = p("(([)]{]}>)((]");
        assert_eq!(best_of(&s, 12, 9), best_of(&s, 12, 9));
        assert_eq!(best_of(&p("([]{})"), 4, 0).cost, 0);
    }

    #[test]
    fn run_cost_agrees_with_trace() {
        let s = p("([)]{<]>)}(((]]])");
        for stream in 0..20 {
            let seq = s.indexed();
            let t = trace_for(&seq, 11, stream);
            assert_eq!(run_cost(&seq, &mut substream(11, stream)), t.cost);
        }
    }

    fn arb_string(max: usize) -> impl Strategy<Value = ParenString> {
        proptest::collection::vec((0u32..3, any::<bool>()), 0..max).prop_map(|v| {
            let syms = v
                .into_iter()
                .map(|(t, o)| if o { ParenSymbol::open(t) } else { ParenSymbol::close(t) })
                .collect();
            ParenString::new(syms, 3).unwrap()
        })
    }

    proptest! {
        #[test]
        fn traces_are_consistent(s in arb_string(16), seed in any::<u64>()) {
            let t = run(&s, seed);
            let mut seen = vec![0u32; s.len() + 1];
            for (k, e) in t.events.iter().enumerate() {
                prop_assert_eq!(e.time, k + 1);
                match e.kind {
                    RdEventKind::Match => prop_assert!(e.open_index.is_some() && e.close_index.is_some()),
                    RdEventKind::DeleteOpen => prop_assert!(e.open_index.is_some() && e.against.is_some()),
                    RdEventKind::FlushOpen => prop_assert!(e.open_index.is_some() && e.close_index.is_none()),
                    RdEventKind::DeleteClose => prop_assert!(e.close_index.is_some() && e.open_index.is_none()),
                }
                for i in e.consumed() {
                    seen[i] += 1;
                }
            }
            prop_assert!(seen[1..].iter().all(|&c| c == 1));
            let r = t.repair(&s).unwrap();
            prop_assert!(r.repaired.is_well_formed());
            prop_assert!(t.cost >= dyck_deletion_dp(&s).unwrap());
        }
    }
}
