//! Cubic interval DP for Dyck(s) edit distance.
//!
//! `E[i, j]` over half-open intervals `[i, j)`:
//!
//! ```text
//! E[i, i]   = 0
//! E[i, i+1] = 1
//! E[i, j]   = min( cost(σ_i, σ_{j-1}) + E[i+1, j-1],
//!                  min_{i<k<j} E[i, k] + E[k, j] )
//! ```
//!
//! In the full model `cost` counts how many of the two symbols must change to
//! form an `(open, congruent close)` pair; insertions are never needed since
//! each can be traded for deleting the symbol it would have matched. In the
//! deletion model a pair costs 0 when it already matches and is otherwise
//! unavailable.

use crate::error::{Error, Result};
use crate::script::{EditOp, EditScript, RepairResult};
use crate::symbol::{ParenString, ParenSymbol};

pub const DEFAULT_CAP: usize = 600;

const INF: u32 = u32::MAX / 4;
const PAIR: u32 = u32::MAX;
const SINGLE: u32 = 0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CostModel {
    /// Insertions, deletions and substitutions.
    Full,
    /// Deletions only.
    DeletionOnly,
}

/// Cost of turning `(a, b)` into an open followed by its congruent close.
pub fn pair_cost(a: ParenSymbol, b: ParenSymbol) -> u32 {
    match (a.is_open(), b.is_open()) {
        (true, false) if a.closes_with(b) => 0,
        (true, false) | (true, true) | (false, false) => 1,
        (false, true) => 2,
    }
}

/// Edit-distance table for every substring.
pub struct DpTable {
    n: usize,
    edit: Vec<u32>,
    // Same values, indexed [j][i], so the split scan reads both operands
    // contiguously.
    edit_t: Vec<u32>,
    choice: Option<Vec<u32>>,
}

impl DpTable {
    pub fn build(p: &ParenString, model: CostModel, cap: usize, with_choices: bool) -> Result<Self> {
        let n = p.len();
        if n > cap {
            return Err(Error::TooLarge { n, cap });
        }
        let w = n + 1;
        let mut edit = vec![0u32; w * w];
        let mut edit_t = vec![0u32; w * w];
        let mut choice = with_choices.then(|| vec![SINGLE; w * w]);
        let s = p.symbols();

        for len in 1..=n {
            for i in 0..=n - len {
                let j = i + len;
                let (mut best, mut arg) = if len == 1 {
                    (1, SINGLE)
                } else {
                    let c = match model {
                        CostModel::Full => pair_cost(s[i], s[j - 1]),
                        CostModel::DeletionOnly if s[i].closes_with(s[j - 1]) => 0,
                        CostModel::DeletionOnly => INF,
                    };
                    (c.saturating_add(edit[(i + 1) * w + j - 1]), PAIR)
                };
                let row = &edit[i * w..i * w + w];
                let col = &edit_t[j * w..j * w + w];
                for k in i + 1..j {
                    let v = row[k] + col[k];
                    if v < best {
                        best = v;
                        arg = k as u32;
                    }
                }
                edit[i * w + j] = best;
                edit_t[j * w + i] = best;
                if let Some(ch) = choice.as_mut() {
                    ch[i * w + j] = arg;
                }
            }
        }
        Ok(Self { n, edit, edit_t, choice })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Distance of the whole string.
    pub fn cost(&self) -> usize {
        self.edit[self.n] as usize
    }

    /// Distance of σ_i..σ_j, 1-based inclusive; `j = i - 1` is the empty substring.
    pub fn get(&self, i: usize, j: usize) -> usize {
        assert!(i >= 1 && i <= j + 1 && j <= self.n);
        let v = self.edit[(i - 1) * (self.n + 1) + j] as usize;
        debug_assert_eq!(v, self.edit_t[j * (self.n + 1) + i - 1] as usize);
        v
    }

    /// Optimal script recovered from the stored choices.
    pub fn script(&self, p: &ParenString) -> Option<EditScript> {
        let choice = self.choice.as_ref()?;
        let w = self.n + 1;
        let s = p.symbols();
        let mut ops = Vec::new();
        let mut work = vec![(0usize, self.n)];
        while let Some((i, j)) = work.pop() {
            if j <= i {
                continue;
            }
            let c = choice[i * w + j];
            if j - i == 1 {
                ops.push(EditOp::Delete(i + 1));
            } else if c == PAIR {
                ops.extend(pair_repair(s[i], i + 1, s[j - 1], j));
                work.push((i + 1, j - 1));
            } else {
                work.push((i, c as usize));
                work.push((c as usize, j));
            }
        }
        Some(EditScript::new(ops))
    }
}

/// Ops that make `(a at ia, b at ib)` a matching pair; the close side changes
/// when one change suffices.
fn pair_repair(a: ParenSymbol, ia: usize, b: ParenSymbol, ib: usize) -> Vec<EditOp> {
    match (a.is_open(), b.is_open()) {
        (true, false) if a.closes_with(b) => vec![],
        (true, _) => vec![EditOp::Substitute(ib, a.congruent())],
        (false, false) => vec![EditOp::Substitute(ia, b.congruent())],
        (false, true) => vec![
            EditOp::Substitute(ia, ParenSymbol::open(0)),
            EditOp::Substitute(ib, ParenSymbol::close(0)),
        ],
    }
}

/// Exact distance, plus an optimal repair when `want_script` is set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactOutcome {
    pub cost: usize,
    pub repair: Option<RepairResult>,
}

pub fn dyck_edit_dp(p: &ParenString, want_script: bool) -> Result<ExactOutcome> {
    dyck_edit_dp_capped(p, want_script, DEFAULT_CAP)
}

pub fn dyck_edit_dp_capped(p: &ParenString, want_script: bool, cap: usize) -> Result<ExactOutcome> {
    let table = DpTable::build(p, CostModel::Full, cap, want_script)?;
    let repair = match table.script(p) {
        Some(script) => Some(RepairResult::from_script(p, script)?),
        None => None,
    };
    Ok(ExactOutcome { cost: table.cost(), repair })
}

/// Minimum number of deletions to reach Dyck(s).
pub fn dyck_deletion_dp(p: &ParenString) -> Result<usize> {
    dyck_deletion_dp_capped(p, DEFAULT_CAP)
}

pub fn dyck_deletion_dp_capped(p: &ParenString, cap: usize) -> Result<usize> {
    Ok(DpTable::build(p, CostModel::DeletionOnly, cap, false)?.cost())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::parse_compact;

    fn full(text: &str) -> usize {
        dyck_edit_dp(&parse_compact(text).unwrap(), false).unwrap().cost
    }

    fn del(text: &str) -> usize {
        dyck_deletion_dp(&parse_compact(text).unwrap()).unwrap()
    }

    #[test]
    fn full_examples() {
        assert_eq!(full("(()())"), 0);
        assert_eq!(full("([)]"), 2);
        assert_eq!(full("))(("), 2);
        assert_eq!(full("(]"), 1);
        assert_eq!(full(""), 0);
        assert_eq!(full("((())"), 1);
    }

    #[test]
    fn deletion_examples() {
        assert_eq!(del("))(("), 4);
        assert_eq!(del("(()]"), 2);
        assert_eq!(del(""), 0);
        assert_eq!(del("[(])"), 2);
    }

    #[test]
    fn pair_costs() {
        let (o0, o1, c0, c1) =
            (ParenSymbol::open(0), ParenSymbol::open(1), ParenSymbol::close(0), ParenSymbol::close(1));
        assert_eq!(pair_cost(o0, c0), 0);
        assert_eq!(pair_cost(o0, c1), 1);
        assert_eq!(pair_cost(o0, o1), 1);
        assert_eq!(pair_cost(c0, c1), 1);
        assert_eq!(pair_cost(c0, o0), 2);
    }

    #[test]
    fn scripts_are_optimal_and_valid() {
        for text in ["([)]", "))((", "((())", "(]", "]]]", "{(<]>)}", ""] {
            let p = parse_compact(text).unwrap();
            let out = dyck_edit_dp(&p, true).unwrap();
            let repair = out.repair.unwrap();
            assert_eq!(repair.cost, out.cost, "{text}");
            assert!(repair.repaired.is_well_formed());
        }
    }

    #[test]
    fn table_bounds() {
        let p = parse_compact("([)]((]").unwrap();
        let t = DpTable::build(&p, CostModel::Full, DEFAULT_CAP, false).unwrap();
        for i in 1..=p.len() {
            assert_eq!(t.get(i, i), 1);
            assert_eq!(t.get(i, i - 1), 0);
            for j in i..=p.len() {
                assert!(t.get(i, j) <= j - i + 1);
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        let p = parse_compact(&"()".repeat(6)).unwrap();
        assert_eq!(
            dyck_edit_dp_capped(&p, false, 10),
            Err(Error::TooLarge { n: 12, cap: 10 })
        );
    }
}
