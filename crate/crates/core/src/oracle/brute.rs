//! Exhaustive searches over edit scripts, independent of the interval DP.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::symbol::{is_well_formed, ParenString, ParenSymbol};

fn alphabet(s: u32) -> Vec<ParenSymbol> {
    (0..s).flat_map(|t| [ParenSymbol::open(t), ParenSymbol::close(t)]).collect()
}

/// Every string one edit away from `w`.
fn neighbours(w: &[ParenSymbol], symbols: &[ParenSymbol], insertions: bool, out: &mut Vec<Vec<ParenSymbol>>) {
    for i in 0..w.len() {
        let mut d = w.to_vec();
        d.remove(i);
        out.push(d);
        for &s in symbols {
            if s != w[i] {
                let mut v = w.to_vec();
                v[i] = s;
                out.push(v);
            }
        }
    }
    if insertions {
        for i in 0..=w.len() {
            for &s in symbols {
                let mut v = w.to_vec();
                v.insert(i, s);
                out.push(v);
            }
        }
    }
}

/// Breadth-first search over deletions and substitutions (and insertions when
/// `insertions` is set), in increasing cost.
pub fn brute_force_distance_with(p: &ParenString, max_cost: usize, insertions: bool) -> Result<usize> {
    let symbols = alphabet(p.alphabet_size());
    let start = p.symbols().to_vec();
    let mut seen: HashSet<Vec<ParenSymbol>> = HashSet::new();
    seen.insert(start.clone());
    let mut frontier = vec![start];
    let mut scratch = Vec::new();
    for cost in 0..=max_cost {
        if frontier.iter().any(|w| is_well_formed(w)) {
            return Ok(cost);
        }
        if cost == max_cost {
            break;
        }
        let mut next = Vec::new();
        for w in &frontier {
            scratch.clear();
            neighbours(w, &symbols, insertions, &mut scratch);
            for v in scratch.drain(..) {
                if seen.insert(v.clone()) {
                    next.push(v);
                }
            }
        }
        frontier = next;
    }
    Err(Error::NotFound { max_cost })
}

pub fn brute_force_distance(p: &ParenString, max_cost: usize) -> Result<usize> {
    brute_force_distance_with(p, max_cost, false)
}

/// Distances to Dyck(s) for every string of length at most `max_len`,
/// by breadth-first search backwards from all well-formed strings.
///
/// Strings are nodes; an edit is an edge. Without insertions, paths from a
/// string never grow it, so the graph restricted to lengths `<= max_len` gives
/// exact distances. With insertions, `slack` extra length is explored and the
/// result is exact whenever no optimal path needs more.
pub struct DistanceTable {
    s: u32,
    max_len: usize,
    offsets: Vec<usize>,
    dist: Vec<u8>,
}

const UNSEEN: u8 = u8::MAX;

impl DistanceTable {
    pub fn build(s: u32, max_len: usize, insertions: bool, slack: usize) -> Self {
        let top = max_len + if insertions { slack } else { 0 };
        let base = 2 * s as usize;
        let mut offsets = vec![0usize; top + 2];
        for len in 0..=top {
            offsets[len + 1] = offsets[len] + base.pow(len as u32);
        }
        let total = offsets[top + 1];
        let mut dist = vec![UNSEEN; total];
        let symbols = alphabet(s);

        let mut frontier = Vec::new();
        for len in 0..=top {
            for code in 0..base.pow(len as u32) {
                if is_well_formed(&decode(code, len, s)) {
                    let node = offsets[len] + code;
                    dist[node] = 0;
                    frontier.push((len, code));
                }
            }
        }
        let mut d = 0u8;
        let mut scratch = Vec::new();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &(len, code) in &frontier {
                let w = decode(code, len, s);
                // Predecessors: strings that reach `w` in one edit. Reversed,
                // a deletion is an insertion and vice versa.
                scratch.clear();
                neighbours(&w, &symbols, len < top, &mut scratch);
                for v in scratch.drain(..) {
                    if v.len() < w.len() && !insertions {
                        continue;
                    }
                    let node = offsets[v.len()] + encode(&v, s);
                    if dist[node] == UNSEEN {
                        dist[node] = d + 1;
                        next.push((v.len(), encode(&v, s)));
                    }
                }
            }
            frontier = next;
            d += 1;
        }
        Self { s, max_len, offsets, dist }
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn distance(&self, w: &[ParenSymbol]) -> Option<usize> {
        if w.len() > self.max_len || w.iter().any(|x| x.type_id >= self.s) {
            return None;
        }
        match self.dist[self.offsets[w.len()] + encode(w, self.s)] {
            UNSEEN => None,
            d => Some(d as usize),
        }
    }

    /// All strings of exactly `len` symbols over this alphabet.
    pub fn strings(&self, len: usize) -> impl Iterator<Item = Vec<ParenSymbol>> + '_ {
        let count = (2 * self.s as usize).pow(len as u32);
        (0..count).map(move |code| decode(code, len, self.s))
    }
}

fn symbol_code(x: ParenSymbol, s: u32) -> usize {
    (x.type_id + if x.is_open() { 0 } else { s }) as usize
}

fn encode(w: &[ParenSymbol], s: u32) -> usize {
    let base = 2 * s as usize;
    w.iter().fold(0, |acc, &x| acc * base + symbol_code(x, s))
}

fn decode(mut code: usize, len: usize, s: u32) -> Vec<ParenSymbol> {
    let base = 2 * s as usize;
    let mut w = vec![ParenSymbol::open(0); len];
    for slot in w.iter_mut().rev() {
        let c = (code % base) as u32;
        code /= base;
        *slot = if c < s { ParenSymbol::open(c) } else { ParenSymbol::close(c - s) };
    }
    w
}
