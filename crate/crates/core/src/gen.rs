//! Planted instances: a uniform well-formed string, then random edits.

use rand::seq::SliceRandom;
use rand::Rng as _;

use crate::error::{Error, Result};
use crate::rng::Rng;
use crate::symbol::{ParenString, ParenSymbol};

/// Uniform balanced shape of `n` symbols (true = open), by the cycle lemma:
/// shuffle `n/2` opens with `n/2 + 1` closes, rotate to start just after the
/// first minimum prefix sum, and drop the final close.
fn balanced_shape(n: usize, rng: &mut Rng) -> Vec<bool> {
    let half = n / 2;
    let mut steps: Vec<bool> = std::iter::repeat_n(true, half).chain(std::iter::repeat_n(false, half + 1)).collect();
    steps.shuffle(rng);
    let (mut sum, mut min, mut at) = (0i64, 0i64, 0usize);
    for (i, &up) in steps.iter().enumerate() {
        sum += if up { 1 } else { -1 };
        if sum < min {
            min = sum;
            at = i + 1;
        }
    }
    steps.rotate_left(at);
    steps.pop();
    steps
}

fn random_symbol(s: u32, rng: &mut Rng) -> ParenSymbol {
    let t = rng.gen_range(0..s);
    if rng.gen::<bool>() {
        ParenSymbol::open(t)
    } else {
        ParenSymbol::close(t)
    }
}

/// A well-formed string of length `n` over `s` types (each matched pair gets a
/// uniform type), with `k` random deletions, substitutions or insertions
/// applied. Returns the string and `k`; its distance to well-formed is at
/// most `k`.
pub fn gen_instance(n: usize, s: u32, k: usize, rng: &mut Rng) -> Result<(ParenString, usize)> {
    if n % 2 == 1 {
        return Err(Error::BadParams(format!("length must be even, got {n}")));
    }
    if s == 0 {
        return Err(Error::EmptyAlphabet);
    }
    let shape = if n == 0 { Vec::new() } else { balanced_shape(n, rng) };
    let mut symbols = Vec::with_capacity(n + k);
    let mut stack = Vec::new();
    for open in shape {
        if open {
            let t = rng.gen_range(0..s);
            stack.push(t);
            symbols.push(ParenSymbol::open(t));
        } else {
            symbols.push(ParenSymbol::close(stack.pop().expect("balanced shape")));
        }
    }
    for _ in 0..k {
        match rng.gen_range(0..3) {
            0 if !symbols.is_empty() => {
                let i = rng.gen_range(0..symbols.len());
                symbols.remove(i);
            }
            1 if !symbols.is_empty() => {
                let i = rng.gen_range(0..symbols.len());
                let old = symbols[i];
                while symbols[i] == old {
                    symbols[i] = random_symbol(s, rng);
                }
            }
            _ => {
                let i = rng.gen_range(0..=symbols.len());
                symbols.insert(i, random_symbol(s, rng));
            }
        }
    }
    Ok((ParenString::new(symbols, s)?, k))
}
