//! String edit distance and the open-run/close-run adapter.
//!
//! An open-run `R` followed by a close-run `T` is well-formed exactly when
//! `R` equals `T` reversed with every symbol replaced by its congruent, so
//! repairing `R·T` is a plain string-edit problem between those two strings.

use crate::error::{Error, Result};
use crate::script::EditOp;
use crate::symbol::ParenSymbol;

/// One column of an optimal alignment between `a` and `b` (0-based positions).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlignOp {
    Match(usize, usize),
    Substitute(usize, usize),
    /// `a[i]` has no partner.
    DeleteA(usize),
    /// `b[j]` has no partner.
    InsertB(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alignment {
    pub cost: usize,
    pub ops: Vec<AlignOp>,
}

/// A string-edit subroutine. Implementations may be approximate; the run
/// adapter only needs a cost and an alignment realising it.
pub trait StrEdit: Sync {
    fn align(&self, a: &[u32], b: &[u32]) -> Alignment;

    fn distance(&self, a: &[u32], b: &[u32]) -> usize {
        self.align(a, b).cost
    }
}

/// Full quadratic DP.
#[derive(Debug, Clone, Copy, Default)]
pub struct Levenshtein;

/// Banded DP with a doubling band; exact.
#[derive(Debug, Clone, Copy, Default)]
pub struct BandedLevenshtein;

/// Insertions and deletions only (no substitutions). Repairs built on it
/// consist of deletions alone.
#[derive(Debug, Clone, Copy, Default)]
pub struct IndelDistance;

impl StrEdit for Levenshtein {
    fn align(&self, a: &[u32], b: &[u32]) -> Alignment {
        levenshtein(a, b)
    }

    fn distance(&self, a: &[u32], b: &[u32]) -> usize {
        levenshtein_distance(a, b)
    }
}

impl StrEdit for BandedLevenshtein {
    fn align(&self, a: &[u32], b: &[u32]) -> Alignment {
        adaptive(a, b, true, true)
    }

    fn distance(&self, a: &[u32], b: &[u32]) -> usize {
        adaptive(a, b, true, false).cost
    }
}

impl StrEdit for IndelDistance {
    fn align(&self, a: &[u32], b: &[u32]) -> Alignment {
        adaptive(a, b, false, true)
    }

    fn distance(&self, a: &[u32], b: &[u32]) -> usize {
        adaptive(a, b, false, false).cost
    }
}

/// Unit-cost edit distance, two rows.
pub fn levenshtein_distance<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0; b.len() + 1];
    for i in 1..=a.len() {
        cur[0] = i;
        for j in 1..=b.len() {
            let sub = prev[j - 1] + usize::from(a[i - 1] != b[j - 1]);
            cur[j] = sub.min(prev[j] + 1).min(cur[j - 1] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// Unit-cost edit distance with an optimal alignment.
pub fn levenshtein<T: PartialEq>(a: &[T], b: &[T]) -> Alignment {
    let (n, m) = (a.len(), b.len());
    let w = m + 1;
    let mut d = vec![0u32; (n + 1) * w];
    for j in 0..=m {
        d[j] = j as u32;
    }
    for i in 1..=n {
        d[i * w] = i as u32;
        for j in 1..=m {
            let sub = d[(i - 1) * w + j - 1] + u32::from(a[i - 1] != b[j - 1]);
            d[i * w + j] = sub.min(d[(i - 1) * w + j] + 1).min(d[i * w + j - 1] + 1);
        }
    }
    let mut ops = Vec::with_capacity(n.max(m));
    let (mut i, mut j) = (n, m);
    while i > 0 || j > 0 {
        let here = d[i * w + j];
        if i > 0 && j > 0 {
            let same = a[i - 1] == b[j - 1];
            if here == d[(i - 1) * w + j - 1] + u32::from(!same) {
                ops.push(if same { AlignOp::Match(i - 1, j - 1) } else { AlignOp::Substitute(i - 1, j - 1) });
                i -= 1;
                j -= 1;
                continue;
            }
        }
        if i > 0 && here == d[(i - 1) * w + j] + 1 {
            ops.push(AlignOp::DeleteA(i - 1));
            i -= 1;
        } else {
            ops.push(AlignOp::InsertB(j - 1));
            j -= 1;
        }
    }
    ops.reverse();
    Alignment { cost: d[n * w + m] as usize, ops }
}

const INF: u32 = u32::MAX / 4;

/// Edit distance restricted to the diagonal band `|i - j| <= band`.
///
/// Returns `None` unless the banded optimum is at most `band`, in which case
/// it equals the unrestricted distance: any path leaving the band already
/// costs more than `band`. With `substitute` off, mismatched pairs cannot be
/// aligned and the result is the insert/delete distance.
pub fn levenshtein_banded<T: PartialEq>(
    a: &[T],
    b: &[T],
    band: usize,
    substitute: bool,
    want_alignment: bool,
) -> Option<Alignment> {
    let (n, m) = (a.len(), b.len());
    if n.abs_diff(m) > band {
        return None;
    }
    let k = band.min(n.max(m));
    let width = 2 * k + 1;
    // Cell (i, j) lives at row i, slot j + k - i.
    let slot = |i: usize, j: usize| j + k - i;
    let rows = if want_alignment { n + 1 } else { 2 };
    let mut d = vec![INF; rows * width];
    let row_of = |i: usize| if want_alignment { i } else { i % 2 };

    for j in 0..=m.min(k) {
        d[slot(0, j)] = j as u32;
    }
    for i in 1..=n {
        let r = row_of(i) * width;
        let p = row_of(i - 1) * width;
        d[r..r + width].fill(INF);
        let lo = i.saturating_sub(k);
        let hi = (i + k).min(m);
        for j in lo..=hi {
            let mut best = INF;
            if j == 0 {
                best = i as u32;
            } else {
                if j - 1 + k >= i - 1 && j - 1 <= i - 1 + k {
                    let diag = d[p + slot(i - 1, j - 1)];
                    if a[i - 1] == b[j - 1] {
                        best = best.min(diag);
                    } else if substitute {
                        best = best.min(diag + 1);
                    }
                }
                if j > lo {
                    best = best.min(d[r + slot(i, j - 1)] + 1);
                }
            }
            if j + k > i - 1 && j < i + k {
                best = best.min(d[p + slot(i - 1, j)] + 1);
            }
            d[r + slot(i, j)] = best;
        }
    }
    let cost = d[row_of(n) * width + slot(n, m)];
    if cost as usize > band {
        return None;
    }
    if !want_alignment {
        return Some(Alignment { cost: cost as usize, ops: Vec::new() });
    }

    let at = |i: usize, j: usize| -> u32 {
        if j + k < i || j > i + k {
            INF
        } else {
            d[i * width + slot(i, j)]
        }
    };
    let mut ops = Vec::with_capacity(n.max(m));
    let (mut i, mut j) = (n, m);
    while i > 0 || j > 0 {
        let here = at(i, j);
        if i > 0 && j > 0 {
            let same = a[i - 1] == b[j - 1];
            if (same || substitute) && here == at(i - 1, j - 1) + u32::from(!same) {
                ops.push(if same { AlignOp::Match(i - 1, j - 1) } else { AlignOp::Substitute(i - 1, j - 1) });
                i -= 1;
                j -= 1;
                continue;
            }
        }
        if i > 0 && here == at(i - 1, j) + 1 {
            ops.push(AlignOp::DeleteA(i - 1));
            i -= 1;
        } else {
            ops.push(AlignOp::InsertB(j - 1));
            j -= 1;
        }
    }
    ops.reverse();
    Some(Alignment { cost: cost as usize, ops })
}

/// Banded DP, doubling the band until the distance certificate holds.
fn adaptive<T: PartialEq>(a: &[T], b: &[T], substitute: bool, want_alignment: bool) -> Alignment {
    let mut band = a.len().abs_diff(b.len()).max(8);
    loop {
        if let Some(al) = levenshtein_banded(a, b, band, substitute, want_alignment) {
            return al;
        }
        band *= 2;
    }
}

/// Repair of one open-run/close-run pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrEditOutcome {
    pub cost: usize,
    /// Ops on original indices; substitutions always change the close.
    pub repairs: Vec<EditOp>,
}

fn run_keys(opens: &[(usize, ParenSymbol)], closes: &[(usize, ParenSymbol)]) -> Result<(Vec<u32>, Vec<u32>)> {
    if opens.iter().any(|(_, s)| !s.is_open()) || closes.iter().any(|(_, s)| !s.is_close()) {
        return Err(Error::PolarityViolation);
    }
    let a = opens.iter().map(|(_, s)| s.type_id).collect();
    let b = closes.iter().rev().map(|(_, s)| s.type_id).collect();
    Ok((a, b))
}

/// Cost of making `opens · closes` well-formed.
pub fn match_runs_cost(
    opens: &[(usize, ParenSymbol)],
    closes: &[(usize, ParenSymbol)],
    strategy: &dyn StrEdit,
) -> Result<usize> {
    let (a, b) = run_keys(opens, closes)?;
    Ok(strategy.distance(&a, &b))
}

/// Repair `opens · closes` into a well-formed string. Both runs are given in
/// textual order with their original indices.
pub fn match_runs(
    opens: &[(usize, ParenSymbol)],
    closes: &[(usize, ParenSymbol)],
    strategy: &dyn StrEdit,
) -> Result<StrEditOutcome> {
    let (a, b) = run_keys(opens, closes)?;
    let alignment = strategy.align(&a, &b);
    let last = closes.len().wrapping_sub(1);
    let mut repairs = Vec::with_capacity(alignment.cost);
    for op in alignment.ops {
        match op {
            AlignOp::Match(..) => {}
            AlignOp::Substitute(i, j) => {
                repairs.push(EditOp::Substitute(closes[last - j].0, opens[i].1.congruent()))
            }
            AlignOp::DeleteA(i) => repairs.push(EditOp::Delete(opens[i].0)),
            AlignOp::InsertB(j) => repairs.push(EditOp::Delete(closes[last - j].0)),
        }
    }
    Ok(StrEditOutcome { cost: repairs.len(), repairs })
}
