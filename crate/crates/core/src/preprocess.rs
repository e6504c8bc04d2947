//! Reductions that preserve the deletion-only distance: cancel well-formed
//! substrings, strip leading closes and trailing opens, and split what is
//! left into blocks `Y_1 X_1 ... Y_z X_z` of open-runs followed by close-runs.
//!
//! These hold in the deletion model only. `"))(("` has full edit distance 2
//! but every symbol here becomes a forced deletion; callers that work in the
//! full model pay at most the factor two between the two distances.

use crate::symbol::{ParenString, ParenSymbol};

/// Output of [`greedy_match`]. All indices are 1-based.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GreedyMatch {
    /// `(open, close)` pairs cancelled by the scan, in the order they closed.
    pub matched_pairs: Vec<(usize, usize)>,
    /// Indices that survive, in textual order.
    pub residual: Vec<usize>,
}

/// Cancel adjacent matching pairs until none remain.
///
/// One left-to-right pass with a stack that holds the whole residual so far:
/// a close cancels the top only if the top is its congruent open. A close that
/// cannot cancel stays on the stack and blocks every open beneath it, so the
/// residual never contains an adjacent `t t̄` pair.
pub fn greedy_match(p: &ParenString) -> GreedyMatch {
    let mut stack: Vec<usize> = Vec::new();
    let mut matched_pairs = Vec::new();
    for (i, &s) in p.symbols().iter().enumerate() {
        let index = i + 1;
        if s.is_close() {
            if let Some(&top) = stack.last() {
                if p.at(top).closes_with(s) {
                    stack.pop();
                    matched_pairs.push((top, index));
                    continue;
                }
            }
        }
        stack.push(index);
    }
    GreedyMatch { matched_pairs, residual: stack }
}

/// One open-run followed by one close-run, as 1-based original indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub opens: Vec<usize>,
    pub closes: Vec<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BlockDecomposition {
    pub blocks: Vec<Block>,
    /// Leading closes and trailing opens of the residual, sorted.
    pub forced_deletions: Vec<usize>,
    pub matched_pairs: Vec<(usize, usize)>,
}

impl BlockDecomposition {
    pub fn z(&self) -> usize {
        self.blocks.len()
    }

    /// Block indices in textual order: `Y_1, X_1, ..., Y_z, X_z`.
    pub fn residual(&self) -> Vec<usize> {
        self.blocks
            .iter()
            .flat_map(|b| b.opens.iter().chain(&b.closes).copied())
            .collect()
    }

    /// `(index, symbol)` pairs for the block indices, in textual order.
    pub fn residual_symbols(&self, p: &ParenString) -> Vec<(usize, ParenSymbol)> {
        self.residual().into_iter().map(|i| (i, p.at(i))).collect()
    }
}

pub fn decompose(p: &ParenString) -> BlockDecomposition {
    let GreedyMatch { matched_pairs, residual } = greedy_match(p);
    let lead = residual.iter().take_while(|&&i| p.at(i).is_close()).count();
    let trail = residual[lead..].iter().rev().take_while(|&&i| p.at(i).is_open()).count();
    let core = &residual[lead..residual.len() - trail];

    let mut forced_deletions: Vec<usize> = residual[..lead].to_vec();
    forced_deletions.extend_from_slice(&residual[residual.len() - trail..]);

    let mut blocks = Vec::new();
    let mut k = 0;
    while k < core.len() {
        let opens: Vec<usize> = core[k..].iter().take_while(|&&i| p.at(i).is_open()).copied().collect();
        k += opens.len();
        let closes: Vec<usize> = core[k..].iter().take_while(|&&i| p.at(i).is_close()).copied().collect();
        k += closes.len();
        debug_assert!(!opens.is_empty() && !closes.is_empty());
        blocks.push(Block { opens, closes });
    }
    BlockDecomposition { blocks, forced_deletions, matched_pairs }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::parse_compact;

    fn dec(text: &str) -> BlockDecomposition {
        decompose(&parse_compact(text).unwrap())
    }

    #[test]
    fn greedy_examples() {
        let g = greedy_match(&parse_compact("(()]").unwrap());
        assert_eq!(g.matched_pairs, vec![(2, 3)]);
        assert_eq!(g.residual, vec![1, 4]);

        let g = greedy_match(&parse_compact("([])").unwrap());
        assert_eq!(g.matched_pairs, vec![(2, 3), (1, 4)]);
        assert!(g.residual.is_empty());

        let g = greedy_match(&parse_compact(")(").unwrap());
        assert!(g.matched_pairs.is_empty());
        assert_eq!(g.residual, vec![1, 2]);
    }

    #[test]
    fn unmatched_close_blocks_the_stack() {
        // `]` cannot cancel `(`, and `)` must not reach across it.
        let g = greedy_match(&parse_compact("[(])").unwrap());
        assert!(g.matched_pairs.is_empty());
        assert_eq!(g.residual, vec![1, 2, 3, 4]);
    }

    #[test]
    fn decompose_examples() {
        let d = dec("))((");
        assert_eq!(d.forced_deletions, vec![1, 2, 3, 4]);
        assert_eq!(d.z(), 0);

        let d = dec("(]");
        assert_eq!(d.blocks, vec![Block { opens: vec![1], closes: vec![2] }]);

        let d = dec("(](]");
        assert_eq!(
            d.blocks,
            vec![
                Block { opens: vec![1], closes: vec![2] },
                Block { opens: vec![3], closes: vec![4] }
            ]
        );
        assert!(d.forced_deletions.is_empty());
    }

    #[test]
    fn decompose_mixed() {
        // ] | ( [ ] ) cancel | ( ] | < ) ( matched | ( (
        let d = dec("]([])(]<)()((");
        assert_eq!(d.forced_deletions, vec![1, 12, 13]);
        assert_eq!(d.matched_pairs, vec![(3, 4), (2, 5), (10, 11)]);
        assert_eq!(
            d.blocks,
            vec![
                Block { opens: vec![6], closes: vec![7] },
                Block { opens: vec![8], closes: vec![9] }
            ]
        );
    }
}
