//! One entry point for the three randomized repairs.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::phased::run_phased;
use crate::randomdel::{best_of, default_iterations, epsilon_iterations};
use crate::refined::repair_refined;
use crate::script::RepairResult;
use crate::stredit::StrEdit;
use crate::symbol::ParenString;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Random,
    Refined,
    Phased,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Random, Algorithm::Refined, Algorithm::Phased];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Random => "random",
            Algorithm::Refined => "refined",
            Algorithm::Phased => "phased",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(Algorithm::Random),
            "refined" => Ok(Algorithm::Refined),
            "phased" => Ok(Algorithm::Phased),
            _ => Err(Error::BadParams(format!("unknown algorithm {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RepairParams {
    pub algorithm: Algorithm,
    pub seed: u64,
    /// Overrides the default iteration count.
    pub iterations: Option<usize>,
    /// Use `ceil(3 n^eps log_b n)` iterations instead of the default.
    pub epsilon: Option<f64>,
}

impl RepairParams {
    pub fn new(algorithm: Algorithm, seed: u64) -> Self {
        Self { algorithm, seed, iterations: None, epsilon: None }
    }

    /// Iterations this run will use on an input of length `n`.
    pub fn iterations_for(&self, n: usize) -> Result<usize> {
        if let Some(k) = self.iterations {
            return Ok(k.max(1));
        }
        match self.epsilon {
            Some(e) if !(e > 0.0 && e <= 1.0) => Err(Error::BadParams(format!("epsilon must be in (0, 1], got {e}"))),
            Some(e) => Ok(epsilon_iterations(n, e)),
            None => Ok(default_iterations(n)),
        }
    }
}

pub fn repair(p: &ParenString, params: &RepairParams, stredit: &dyn StrEdit) -> Result<RepairResult> {
    let iterations = params.iterations_for(p.len())?;
    match params.algorithm {
        Algorithm::Random => best_of(p, iterations, params.seed).repair(p),
        Algorithm::Refined => repair_refined(p, params.seed, stredit, Some(iterations)),
        Algorithm::Phased => Ok(run_phased(p, params.seed, stredit, Some(iterations))?.repair),
    }
}
