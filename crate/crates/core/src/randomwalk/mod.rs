//! Hitting times of a fair ±1 walk started at `d`.
//!
//! `T_0` is the first time the walk reaches 0. The hitting time theorem gives
//!
//! ```text
//! P_d(T_0 = D) = (d / D) * C(D, (D - d) / 2) * 2^-D
//! ```
//!
//! for `D >= d` with `D - d` even, and 0 otherwise. The repair walk is also
//! absorbed at an upper level `n + d`; that barrier only removes mass at
//! times of at least `n` and is ignored here, which can only weaken the
//! lower bounds checked against these values.

mod dbinom;
mod sim;

pub use dbinom::{bd0, dbinom_half, stirlerr};
pub use sim::{simulate, Histogram};

use std::marker::PhantomData;
use std::ops::Add;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Float, FloatConst, FromPrimitive, One, Zero};

use crate::error::{Error, Result};

/// Scalars that can carry hitting probabilities.
pub trait WalkScalar: Clone + Zero + Add<Output = Self> + PartialOrd {
    fn hitting_pmf(d: u64, steps: u64) -> Self;
}

fn float_pmf<T: Float + FloatConst + FromPrimitive>(d: u64, steps: u64) -> T {
    if d == 0 || steps < d || (steps - d) % 2 == 1 {
        return T::zero();
    }
    let ratio = T::from_f64(d as f64 / steps as f64).expect("finite ratio");
    ratio * dbinom_half::<T>((steps - d) / 2, steps)
}

impl WalkScalar for f64 {
    fn hitting_pmf(d: u64, steps: u64) -> Self {
        float_pmf(d, steps)
    }
}

impl WalkScalar for f32 {
    fn hitting_pmf(d: u64, steps: u64) -> Self {
        float_pmf(d, steps)
    }
}

fn binomial(n: u64, k: u64) -> BigUint {
    let k = k.min(n - k);
    let mut c = BigUint::one();
    for i in 0..k {
        c *= n - i;
        c /= i + 1;
    }
    c
}

impl WalkScalar for BigRational {
    fn hitting_pmf(d: u64, steps: u64) -> Self {
        if d == 0 || steps < d || (steps - d) % 2 == 1 {
            return BigRational::zero();
        }
        let num = BigUint::from(d) * binomial(steps, (steps - d) / 2);
        let den = BigUint::from(steps) << steps as usize;
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
}

/// A walk from `d`, observed for at most `cap` steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GamblersRuin<T> {
    d: u64,
    cap: u64,
    _scalar: PhantomData<T>,
}

impl<T: WalkScalar> GamblersRuin<T> {
    pub fn new(d: u64, cap: u64) -> Result<Self> {
        if d == 0 || cap < d {
            return Err(Error::BadParams(format!("need 1 <= d <= cap, got d={d} cap={cap}")));
        }
        Ok(Self { d, cap, _scalar: PhantomData })
    }

    pub fn start(&self) -> u64 {
        self.d
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    pub fn pmf(&self, steps: u64) -> T {
        T::hitting_pmf(self.d, steps)
    }

    /// `P(lo <= T_0 <= hi)`.
    pub fn window(&self, lo: u64, hi: u64) -> T {
        window_prob_in(self.d, lo, hi)
    }

    /// `P(T_0 <= cap)`.
    pub fn within_cap(&self) -> T {
        self.window(1, self.cap)
    }
}

fn window_prob_in<T: WalkScalar>(d: u64, lo: u64, hi: u64) -> T {
    let mut first = lo.max(d);
    if (first - d) % 2 == 1 {
        first += 1;
    }
    let mut total = T::zero();
    let mut steps = first;
    while steps <= hi {
        total = total + T::hitting_pmf(d, steps);
        steps += 2;
    }
    total
}

pub fn hitting_pmf(d: u64, steps: u64) -> f64 {
    f64::hitting_pmf(d, steps)
}

pub fn hitting_pmf_exact(d: u64, steps: u64) -> BigRational {
    BigRational::hitting_pmf(d, steps)
}

/// `P(lo <= T_0 <= hi)` for a walk from `d`.
pub fn window_prob(d: u64, lo: u64, hi: u64) -> f64 {
    window_prob_in(d, lo, hi)
}

pub fn window_prob_exact(d: u64, lo: u64, hi: u64) -> BigRational {
    window_prob_in(d, lo, hi)
}

/// `A(alpha) = 1 / (alpha sqrt(2 alpha) e^(1 / (2 alpha)))`, the lower bound
/// on `P(T_0 in [alpha d^2, 2 alpha d^2])` up to lower-order terms.
pub fn lower_bound_a<T: Float + FromPrimitive>(alpha: T) -> T {
    let two = T::from_u8(2).expect("2");
    T::one() / (alpha * (two * alpha).sqrt() * (T::one() / (two * alpha)).exp())
}

/// Step count `ceil(d^2 / (eps ln d))` and the claimed lower bound
/// `sqrt(eps ln d) / d^eps` on hitting 0 within twice that many steps.
pub fn corollary_window(d: u64, epsilon: f64) -> Result<(u64, f64)> {
    if d < 2 || epsilon.is_nan() || epsilon <= 0.0 {
        return Err(Error::BadParams(format!("need d >= 2 and epsilon > 0, got d={d} epsilon={epsilon}")));
    }
    let df = d as f64;
    let steps = (df * df / (epsilon * df.ln())).ceil() as u64;
    let bound = (epsilon * df.ln()).sqrt() / df.powf(epsilon);
    Ok((steps, bound))
}
