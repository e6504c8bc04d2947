//! Per-block restarts of Random-deletion, with the random edits of each block
//! replaced by a string-edit repair of the run it was matched against.
//!
//! For block `a` the scan is replayed from the state left by block `a - 1`
//! through the last close of `X_a`, several times with fresh coins. The
//! restart with the fewest deletions fixes `Z_a`, the opens it consumed while
//! working through `X_a`; the block is then charged `StrEdit(Z_a, X_a)` and
//! its state becomes the starting point for `a + 1`.

use rayon::prelude::*;

use crate::error::Result;
use crate::preprocess::{decompose, Block, BlockDecomposition};
use crate::randomdel::{decide, default_iterations, Move};
use crate::rng::{stream_id, substream, Rng};
use crate::script::{EditOp, EditScript, RepairResult};
use crate::stredit::{match_runs, StrEdit};
use crate::symbol::{ParenString, ParenSymbol};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum RestartMode {
    /// Restart each block's segment from the saved state.
    #[default]
    PerBlock,
    /// Repeat the whole scan and segment the best run.
    WholeRun,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RefinedOptions {
    /// Restarts per block (or whole runs); `default_iterations(n)` if unset.
    pub iterations: Option<usize>,
    pub mode: RestartMode,
}

/// The chosen segment for one block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentEstimate {
    pub block: usize,
    /// Opens consumed against `X_a`, in textual order.
    pub z_min: Vec<usize>,
    /// Deletions the chosen restart made.
    pub deletions: usize,
    pub restart: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefinedReport {
    pub repair: RepairResult,
    pub estimates: Vec<SegmentEstimate>,
    /// Opens still unmatched after the last block.
    pub leftover: Vec<usize>,
    pub iterations: usize,
}

struct Segment {
    z: Vec<usize>,
    deletions: usize,
    depth: usize,
    pushed: Vec<(usize, ParenSymbol)>,
}

/// One pass over `block` on top of `stack`, which is left untouched: pops
/// below its top move `depth` down instead.
fn segment(stack: &[(usize, ParenSymbol)], block: &Block, p: &ParenString, rng: &mut Rng) -> Segment {
    let mut depth = stack.len();
    let mut pushed: Vec<(usize, ParenSymbol)> = block.opens.iter().map(|&i| (i, p.at(i))).collect();
    let mut z = Vec::new();
    let mut deletions = 0;
    for &c in &block.closes {
        let close = p.at(c);
        loop {
            let top = pushed.last().copied().or_else(|| depth.checked_sub(1).map(|d| stack[d]));
            let mv = decide(top.map(|t| t.1), close, rng);
            if mv != Move::DeleteClose {
                let (i, _) = top.expect("decide only pops a present top");
                if pushed.pop().is_none() {
                    depth -= 1;
                }
                z.push(i);
            }
            match mv {
                Move::Match => break,
                Move::DeleteOpen => deletions += 1,
                Move::DeleteClose => {
                    deletions += 1;
                    break;
                }
            }
        }
    }
    z.reverse();
    Segment { z, deletions, depth, pushed }
}

fn commit(stack: &mut Vec<(usize, ParenSymbol)>, seg: &Segment) {
    stack.truncate(seg.depth);
    stack.extend_from_slice(&seg.pushed);
}

/// Fewest deletions; the later restart wins a tie.
fn better(a: &(usize, Segment), b: &(usize, Segment)) -> bool {
    (a.1.deletions, std::cmp::Reverse(a.0)) < (b.1.deletions, std::cmp::Reverse(b.0))
}

fn per_block(
    p: &ParenString,
    dec: &BlockDecomposition,
    seed: u64,
    iterations: usize,
) -> (Vec<SegmentEstimate>, Vec<usize>) {
    let mut stack = Vec::new();
    let mut estimates = Vec::with_capacity(dec.z());
    for (a, block) in dec.blocks.iter().enumerate() {
        let attempt = |r: usize| {
            let mut rng = substream(seed, stream_id(a as u64, r as u64));
            (r, segment(&stack, block, p, &mut rng))
        };
        let size = block.opens.len() + block.closes.len();
        let best = if size * iterations >= 1 << 14 {
            (0..iterations)
                .into_par_iter()
                .map(attempt)
                .reduce_with(|x, y| if better(&y, &x) { y } else { x })
        } else {
            (0..iterations).map(attempt).reduce(|x, y| if better(&y, &x) { y } else { x })
        };
        let (restart, seg) = best.expect("at least one restart");
        commit(&mut stack, &seg);
        estimates.push(SegmentEstimate { block: a, z_min: seg.z, deletions: seg.deletions, restart });
    }
    (estimates, stack.into_iter().map(|(i, _)| i).collect())
}

fn whole_run(
    p: &ParenString,
    dec: &BlockDecomposition,
    seed: u64,
    iterations: usize,
) -> (Vec<SegmentEstimate>, Vec<usize>) {
    let one = |r: usize| {
        let mut rng = substream(seed, r as u64);
        let mut stack = Vec::new();
        let mut estimates = Vec::with_capacity(dec.z());
        for (a, block) in dec.blocks.iter().enumerate() {
            let seg = segment(&stack, block, p, &mut rng);
            commit(&mut stack, &seg);
            estimates.push(SegmentEstimate { block: a, z_min: seg.z, deletions: seg.deletions, restart: r });
        }
        let total = estimates.iter().map(|e| e.deletions).sum::<usize>() + stack.len();
        (total, r, estimates, stack)
    };
    let (_, std::cmp::Reverse(best)) = (0..iterations)
        .into_par_iter()
        .map(|r| (one(r).0, std::cmp::Reverse(r)))
        .min()
        .expect("at least one run");
    let (_, _, estimates, stack) = one(best);
    (estimates, stack.into_iter().map(|(i, _)| i).collect())
}

pub fn refine(p: &ParenString, seed: u64, stredit: &dyn StrEdit, options: RefinedOptions) -> Result<RefinedReport> {
    let dec = decompose(p);
    let iterations = options.iterations.unwrap_or_else(|| default_iterations(p.len())).max(1);
    let (estimates, leftover) = match options.mode {
        RestartMode::PerBlock => per_block(p, &dec, seed, iterations),
        RestartMode::WholeRun => whole_run(p, &dec, seed, iterations),
    };

    let mut script = EditScript::deletions(dec.forced_deletions.iter().copied());
    let sym = |i: &usize| (*i, p.at(*i));
    for (est, block) in estimates.iter().zip(&dec.blocks) {
        let opens: Vec<_> = est.z_min.iter().map(sym).collect();
        let closes: Vec<_> = block.closes.iter().map(sym).collect();
        script.extend(match_runs(&opens, &closes, stredit)?.repairs);
    }
    script.extend(leftover.iter().map(|&i| EditOp::Delete(i)));
    let repair = RepairResult::from_script(p, script)?;
    Ok(RefinedReport { repair, estimates, leftover, iterations })
}

/// Refined repair with per-block restarts.
pub fn repair_refined(
    p: &ParenString,
    seed: u64,
    stredit: &dyn StrEdit,
    iterations: Option<usize>,
) -> Result<RepairResult> {
    Ok(refine(p, seed, stredit, RefinedOptions { iterations, mode: RestartMode::PerBlock })?.repair)
}
