//! One Random-deletion run per iteration, analysed in phases.
//!
//! Phase 1 works on the blocks of the decomposition. For each block the
//! window opens at the first event that touches its surviving closes and
//! shuts as soon as its surviving opens or its surviving closes run out; the
//! indices consumed inside it are repaired with `StrEdit`. Each block is then
//! left with only opens, only closes, or nothing. Runs of open-only blocks and
//! of close-only blocks merge, a leading close-run and a trailing open-run are
//! deleted, and the rest pairs up into the next phase's blocks, at most half
//! as many as before. The trace itself is recorded once and never replayed.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::preprocess::{decompose, BlockDecomposition};
use crate::randomdel::{default_iterations, epsilon_iterations, RdEvent, RdEventKind, Scanner};
use crate::rng::{substream, Rng};
use crate::script::{EditOp, EditScript, RepairResult};
use crate::stredit::{match_runs, match_runs_cost, StrEdit};
use crate::symbol::{ParenString, ParenSymbol};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhaseBlock {
    pub level: usize,
    /// Surviving opens, textual order.
    pub y: Vec<usize>,
    /// Surviving closes, textual order.
    pub x: Vec<usize>,
    /// First and last phase-1 block this block covers (0-based).
    pub span: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalWindow {
    pub level: usize,
    /// Position of the block within its phase.
    pub block: usize,
    /// First and last trace event of the window (0-based, inclusive).
    pub events: (usize, usize),
    /// Opens consumed in the window, textual order.
    pub opens: Vec<usize>,
    /// Closes consumed in the window, textual order.
    pub closes: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Leftover {
    Open,
    Close,
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhaseSegmentation {
    pub windows: Vec<LocalWindow>,
    pub leftovers: Vec<Leftover>,
}

#[derive(Debug, Clone, Copy)]
struct Ev {
    kind: RdEventKind,
    // 1-based indices, 0 when absent. For `DeleteOpen`, `close` is the close
    // it was compared with.
    open: u32,
    close: u32,
}

impl Ev {
    fn consumes_close(&self) -> bool {
        matches!(self.kind, RdEventKind::Match | RdEventKind::DeleteClose)
    }
}

/// A Random-deletion trace indexed for segmentation.
pub struct PhaseTrace {
    events: Vec<Ev>,
    first_touch: Vec<u32>,
}

const NONE: u32 = u32::MAX;

impl PhaseTrace {
    pub fn from_events(events: &[RdEvent], n: usize) -> Self {
        let ev = |e: &RdEvent| Ev {
            kind: e.kind,
            open: e.open_index.unwrap_or(0) as u32,
            close: e.close_index.or(e.against).unwrap_or(0) as u32,
        };
        Self::index(events.iter().map(ev).collect(), n)
    }

    fn record(seq: &[(usize, ParenSymbol)], n: usize, rng: &mut Rng) -> Self {
        let mut scanner = Scanner::new(seq);
        let mut events = Vec::with_capacity(seq.len());
        while let Some(e) = scanner.step(rng) {
            events.push(Ev {
                kind: e.kind,
                open: e.open_index.unwrap_or(0) as u32,
                close: e.close_index.or(e.against).unwrap_or(0) as u32,
            });
        }
        Self::index(events, n)
    }

    fn index(events: Vec<Ev>, n: usize) -> Self {
        let mut first_touch = vec![NONE; n + 1];
        for (t, e) in events.iter().enumerate() {
            if e.close != 0 && first_touch[e.close as usize] == NONE {
                first_touch[e.close as usize] = t as u32;
            }
        }
        Self { events, first_touch }
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }
}

/// Assignment state carried across the phases of one trace.
pub struct Segmenter<'t> {
    trace: &'t PhaseTrace,
    event_level: Vec<u32>,
    owner: Vec<u32>,
    stamp: u32,
    taken: Vec<bool>,
}

impl<'t> Segmenter<'t> {
    pub fn new(trace: &'t PhaseTrace, n: usize) -> Self {
        Self {
            trace,
            event_level: vec![0; trace.len()],
            owner: vec![0; n + 1],
            stamp: 0,
            taken: vec![false; n + 1],
        }
    }

    /// Cut one window per block and classify what each block keeps.
    pub fn segment_phase(&mut self, level: usize, blocks: &[PhaseBlock]) -> Result<PhaseSegmentation> {
        let events = &self.trace.events;
        let mut windows = Vec::with_capacity(blocks.len());
        let mut leftovers = Vec::with_capacity(blocks.len());
        for (b, block) in blocks.iter().enumerate() {
            self.stamp += 1;
            for &i in block.y.iter().chain(&block.x) {
                self.owner[i] = self.stamp;
            }
            let x0 = block.x[0];
            let mut t = self.trace.first_touch[x0] as usize;
            while self.event_level.get(t).is_some_and(|&l| l != 0) {
                t += 1;
            }
            let first = t;
            let (mut y_left, mut x_left) = (block.y.len(), block.x.len());
            let (mut opens, mut closes) = (Vec::new(), Vec::new());
            loop {
                let Some(e) = events.get(t) else {
                    return Err(Error::Invariant(format!("window for block {b} never closed")));
                };
                match self.event_level[t] {
                    0 => {}
                    l if l as usize == level => return Err(Error::WindowOverlap { index: t }),
                    _ => {
                        t += 1;
                        continue;
                    }
                }
                for i in [e.open, e.close] {
                    if i != 0 && self.owner[i as usize] != self.stamp {
                        return Err(Error::WindowOverlap { index: i as usize });
                    }
                }
                self.event_level[t] = level as u32;
                if e.open != 0 {
                    opens.push(e.open as usize);
                    self.taken[e.open as usize] = true;
                    y_left -= 1;
                }
                if e.consumes_close() {
                    closes.push(e.close as usize);
                    self.taken[e.close as usize] = true;
                    x_left -= 1;
                }
                if y_left == 0 || x_left == 0 {
                    break;
                }
                t += 1;
            }
            opens.sort_unstable();
            windows.push(LocalWindow { level, block: b, events: (first, t), opens, closes });
            leftovers.push(match (y_left, x_left) {
                (0, 0) => Leftover::Empty,
                (_, 0) => Leftover::Open,
                _ => Leftover::Close,
            });
        }
        Ok(PhaseSegmentation { windows, leftovers })
    }

    /// Next phase's blocks, plus the indices stripped as deletions.
    pub fn reblock(&self, blocks: &[PhaseBlock], leftovers: &[Leftover], level: usize) -> (Vec<PhaseBlock>, Vec<usize>) {
        // Alternating runs (is_open, indices, span).
        let mut runs: Vec<(bool, Vec<usize>, (usize, usize))> = Vec::new();
        for (block, &kind) in blocks.iter().zip(leftovers) {
            let (open, side) = match kind {
                Leftover::Empty => continue,
                Leftover::Open => (true, &block.y),
                Leftover::Close => (false, &block.x),
            };
            let survivors = side.iter().copied().filter(|&i| !self.taken[i]);
            match runs.last_mut() {
                Some((o, v, span)) if *o == open => {
                    v.extend(survivors);
                    span.1 = block.span.1;
                }
                _ => runs.push((open, survivors.collect(), block.span)),
            }
        }
        let mut strips = Vec::new();
        let mut runs = &runs[..];
        if let Some(((false, v, _), rest)) = runs.split_first() {
            strips.extend_from_slice(v);
            runs = rest;
        }
        if let Some(((true, v, _), rest)) = runs.split_last() {
            strips.extend_from_slice(v);
            runs = rest;
        }
        let next = runs
            .chunks_exact(2)
            .map(|pair| PhaseBlock {
                level,
                y: pair[0].1.clone(),
                x: pair[1].1.clone(),
                span: (pair[0].2 .0, pair[1].2 .1),
            })
            .collect();
        (next, strips)
    }
}

/// Everything one iteration decided.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IterationOutcome {
    pub cost: usize,
    pub phases: usize,
    pub windows: Vec<LocalWindow>,
    /// Prefix closes and suffix opens deleted between phases.
    pub strips: Vec<usize>,
}

fn symbols(p: &ParenString, indices: &[usize]) -> Vec<(usize, ParenSymbol)> {
    indices.iter().map(|&i| (i, p.at(i))).collect()
}

/// Segment `trace` phase by phase and price every window.
pub fn analyse(
    p: &ParenString,
    dec: &BlockDecomposition,
    trace: &PhaseTrace,
    stredit: &dyn StrEdit,
) -> Result<IterationOutcome> {
    let mut seg = Segmenter::new(trace, p.len());
    let mut blocks: Vec<PhaseBlock> = dec
        .blocks
        .iter()
        .enumerate()
        .map(|(a, b)| PhaseBlock { level: 1, y: b.opens.clone(), x: b.closes.clone(), span: (a, a) })
        .collect();
    let mut cost = dec.forced_deletions.len();
    let mut windows = Vec::new();
    let mut strips = Vec::new();
    let mut phases = 0;
    while !blocks.is_empty() {
        phases += 1;
        let s = seg.segment_phase(phases, &blocks)?;
        for w in &s.windows {
            cost += match_runs_cost(&symbols(p, &w.opens), &symbols(p, &w.closes), stredit)?;
        }
        let (next, stripped) = seg.reblock(&blocks, &s.leftovers, phases + 1);
        cost += stripped.len();
        strips.extend(stripped);
        windows.extend(s.windows);
        blocks = next;
    }
    Ok(IterationOutcome { cost, phases, windows, strips })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhasedReport {
    pub repair: RepairResult,
    pub iterations: usize,
    pub best_iteration: usize,
    /// Phase count of every iteration.
    pub phases: Vec<usize>,
    /// Block count of the decomposition.
    pub z: usize,
    pub outcome: IterationOutcome,
}

/// Phased repair with `iterations` runs (default `default_iterations(n)`).
pub fn run_phased(p: &ParenString, seed: u64, stredit: &dyn StrEdit, iterations: Option<usize>) -> Result<PhasedReport> {
    let iterations = iterations.unwrap_or_else(|| default_iterations(p.len())).max(1);
    let dec = decompose(p);
    let seq = dec.residual_symbols(p);
    let n = p.len();
    let one = |i: usize| -> Result<IterationOutcome> {
        let trace = PhaseTrace::record(&seq, n, &mut substream(seed, i as u64));
        analyse(p, &dec, &trace, stredit)
    };
    let summaries: Vec<(usize, usize)> = (0..iterations)
        .into_par_iter()
        .map(|i| one(i).map(|o| (o.cost, o.phases)))
        .collect::<Result<_>>()?;
    let best = (0..iterations).min_by_key(|&i| (summaries[i].0, i)).expect("at least one iteration");
    let outcome = one(best)?;

    let mut script = EditScript::deletions(dec.forced_deletions.iter().copied());
    for w in &outcome.windows {
        script.extend(match_runs(&symbols(p, &w.opens), &symbols(p, &w.closes), stredit)?.repairs);
    }
    script.extend(outcome.strips.iter().map(|&i| EditOp::Delete(i)));
    let repair = RepairResult::from_script(p, script)?;
    if repair.cost != outcome.cost {
        return Err(Error::Invariant(format!("script cost {} but priced {}", repair.cost, outcome.cost)));
    }
    Ok(PhasedReport {
        repair,
        iterations,
        best_iteration: best,
        phases: summaries.iter().map(|s| s.1).collect(),
        z: dec.z(),
        outcome,
    })
}

pub fn repair_phased(p: &ParenString, seed: u64, stredit: &dyn StrEdit, iterations: Option<usize>) -> Result<RepairResult> {
    Ok(run_phased(p, seed, stredit, iterations)?.repair)
}

/// Phased repair with `ceil(3 n^eps log_b n)` iterations.
pub fn epsilon_mode(p: &ParenString, seed: u64, stredit: &dyn StrEdit, epsilon: f64) -> Result<PhasedReport> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::BadParams(format!("epsilon must be in (0, 1], got {epsilon}")));
    }
    run_phased(p, seed, stredit, Some(epsilon_iterations(p.len(), epsilon)))
}

/// Largest phase count a run on `z` blocks may use: `ceil(log2 z) + 1`.
pub fn phase_bound(z: usize) -> usize {
    if z == 0 {
        0
    } else {
        z.next_power_of_two().trailing_zeros() as usize + 1
    }
}
