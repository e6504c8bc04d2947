//! Benchmark harness: planted instances, exact optima, and repair costs as CSV.
//!
//! Config is flat `key = value` lines; lists are comma-separated and `#`
//! starts a comment.
//!
//! ```text
//! n = 50, 100, 200, 400
//! s = 2
//! k = 1, 2, 4, 6, 8
//! algos = random, refined, phased
//! reps = 10
//! seed = 7
//! oracle_cap = 400
//! workers = 4
//! # iters = 20
//! # timing = true
//! min_random_within_4opt = 0.85
//! max_phased_ratio = 8
//! min_phased_within = 0.90
//! ```
//!
//! Cells are the `(n, k, rep)` grid in that nesting order. Cell `c` uses
//! seed `derive_seed(seed, c)`: the instance is `gen_instance` on substream
//! `(cell seed, 0)` and every algorithm runs with the cell seed, so a row can
//! be reproduced with `dyck gen --seed` and `dyck repair --seed`.

use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gen::gen_instance;
use crate::oracle::{dyck_deletion_dp_capped, dyck_edit_dp_capped};
use crate::repair::{repair, Algorithm, RepairParams};
use crate::rng::{derive_seed, substream};
use crate::stredit::Levenshtein;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    /// Fraction of instances where random-deletion costs at most `4 OPT^2`.
    pub min_random_within_4opt: f64,
    pub max_phased_ratio: f64,
    /// Fraction of instances where phased stays within `max_phased_ratio`.
    pub min_phased_within: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self { min_random_within_4opt: 0.85, max_phased_ratio: 8.0, min_phased_within: 0.90 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub ns: Vec<usize>,
    pub s: u32,
    pub ks: Vec<usize>,
    pub algos: Vec<Algorithm>,
    pub reps: usize,
    pub seed: u64,
    pub oracle_cap: usize,
    pub workers: usize,
    pub iterations: Option<usize>,
    /// Off by default so output is byte-identical across runs.
    pub timing: bool,
    pub thresholds: Thresholds,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            ns: vec![100],
            s: 2,
            ks: vec![4],
            algos: Algorithm::ALL.to_vec(),
            reps: 1,
            seed: 0,
            oracle_cap: 400,
            workers: 1,
            iterations: None,
            timing: false,
            thresholds: Thresholds::default(),
        }
    }
}

fn parse_value<T: std::str::FromStr>(line: usize, key: &str, v: &str) -> Result<T> {
    v.trim().parse().map_err(|_| Error::Config { line, msg: format!("bad value {v:?} for {key}") })
}

fn parse_list<T: std::str::FromStr>(line: usize, key: &str, v: &str) -> Result<Vec<T>> {
    let items: Vec<T> = v.split(',').map(|x| parse_value(line, key, x)).collect::<Result<_>>()?;
    if items.is_empty() {
        return Err(Error::Config { line, msg: format!("{key} is empty") });
    }
    Ok(items)
}

impl BenchConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut c = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let Some((key, value)) = body.split_once('=') else {
                return Err(Error::Config { line, msg: "expected key = value".into() });
            };
            let (key, value) = (key.trim(), value.trim());
            match key {
                "n" => c.ns = parse_list(line, key, value)?,
                "s" => c.s = parse_value(line, key, value)?,
                "k" => c.ks = parse_list(line, key, value)?,
                "algos" => {
                    c.algos = value
                        .split(',')
                        .map(|a| a.trim().parse::<Algorithm>().map_err(|e| Error::Config { line, msg: e.to_string() }))
                        .collect::<Result<_>>()?
                }
                "reps" => c.reps = parse_value(line, key, value)?,
                "seed" => c.seed = parse_value(line, key, value)?,
                "oracle_cap" => c.oracle_cap = parse_value(line, key, value)?,
                "workers" => c.workers = parse_value(line, key, value)?,
                "iters" => c.iterations = Some(parse_value(line, key, value)?),
                "timing" => c.timing = parse_value(line, key, value)?,
                "min_random_within_4opt" => c.thresholds.min_random_within_4opt = parse_value(line, key, value)?,
                "max_phased_ratio" => c.thresholds.max_phased_ratio = parse_value(line, key, value)?,
                "min_phased_within" => c.thresholds.min_phased_within = parse_value(line, key, value)?,
                _ => return Err(Error::Config { line, msg: format!("unknown key {key:?}") }),
            }
        }
        if let Some(&n) = c.ns.iter().find(|&&n| n % 2 == 1) {
            return Err(Error::Config { line: 0, msg: format!("n must be even, got {n}") });
        }
        if c.s == 0 {
            return Err(Error::Config { line: 0, msg: "s must be at least 1".into() });
        }
        Ok(c)
    }

    /// `(n, k, rep)` for every cell, in output order.
    pub fn cells(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for &n in &self.ns {
            for &k in &self.ks {
                for rep in 0..self.reps {
                    out.push((n, k, rep));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub n: usize,
    pub s: u32,
    pub planted_edits: usize,
    /// -1 when the oracle was skipped.
    pub opt_exact: i64,
    pub opt_deletion: i64,
    pub algo: Algorithm,
    pub iterations: usize,
    pub seed: u64,
    /// -1 for a failed cell.
    pub cost: i64,
    /// `cost / opt_exact`; 1 when both are 0; -1 when unknown.
    pub ratio: f64,
    pub wall_micros: u64,
}

pub const CSV_HEADER: &str = "n,s,planted_edits,opt_exact,opt_deletion,algo,iterations,seed,cost,ratio,wall_micros";

impl BenchRecord {
    pub fn csv_row(&self) -> String {
        let ratio = if self.ratio < 0.0 { "-1".to_string() } else { format!("{:.6}", self.ratio) };
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.n,
            self.s,
            self.planted_edits,
            self.opt_exact,
            self.opt_deletion,
            self.algo,
            self.iterations,
            self.seed,
            self.cost,
            ratio,
            self.wall_micros
        )
    }
}

fn ratio(cost: i64, opt: i64) -> f64 {
    match (cost, opt) {
        (c, _) if c < 0 => -1.0,
        (0, 0) => 1.0,
        (c, o) if o > 0 => c as f64 / o as f64,
        _ => -1.0,
    }
}

/// A failed `(row, algorithm)` with its error.
#[derive(Debug, Clone, PartialEq)]
pub struct CellError {
    pub row: usize,
    pub error: Error,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRun {
    pub records: Vec<BenchRecord>,
    pub errors: Vec<CellError>,
}

impl BenchRun {
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * (self.records.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for r in &self.records {
            out.push_str(&r.csv_row());
            out.push('\n');
        }
        out
    }
}

fn run_cell(config: &BenchConfig, (n, k, _): (usize, usize, usize), seed: u64) -> Vec<(BenchRecord, Option<Error>)> {
    let base = |algo| BenchRecord {
        n,
        s: config.s,
        planted_edits: k,
        opt_exact: -1,
        opt_deletion: -1,
        algo,
        iterations: 0,
        seed,
        cost: -1,
        ratio: -1.0,
        wall_micros: 0,
    };
    let p = match gen_instance(n, config.s, k, &mut substream(seed, 0)) {
        Ok((p, _)) => p,
        Err(e) => return config.algos.iter().map(|&a| (base(a), Some(e.clone()))).collect(),
    };
    let (mut opt_exact, mut opt_deletion) = (-1, -1);
    if n <= config.oracle_cap {
        if let Ok(o) = dyck_edit_dp_capped(&p, false, p.len()) {
            opt_exact = o.cost as i64;
        }
        if let Ok(d) = dyck_deletion_dp_capped(&p, p.len()) {
            opt_deletion = d as i64;
        }
    }
    config
        .algos
        .iter()
        .map(|&algo| {
            let mut record = BenchRecord { opt_exact, opt_deletion, ..base(algo) };
            let params = RepairParams { iterations: config.iterations, ..RepairParams::new(algo, seed) };
            let start = Instant::now();
            let outcome = params.iterations_for(p.len()).and_then(|it| {
                record.iterations = it;
                repair(&p, &params, &Levenshtein)
            });
            if config.timing {
                record.wall_micros = start.elapsed().as_micros() as u64;
            }
            match outcome {
                Ok(r) => {
                    record.cost = r.cost as i64;
                    record.ratio = ratio(record.cost, opt_exact);
                    (record, None)
                }
                Err(e) => (record, Some(e)),
            }
        })
        .collect()
}

/// Runs every cell on up to `config.workers` threads; rows come back in
/// config order whatever the completion order.
pub fn bench(config: &BenchConfig) -> Result<BenchRun> {
    let cells = config.cells();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers.max(1))
        .build()
        .map_err(|e| Error::BadParams(e.to_string()))?;
    let rows: Vec<Vec<(BenchRecord, Option<Error>)>> = pool.install(|| {
        cells
            .par_iter()
            .enumerate()
            .map(|(c, &cell)| run_cell(config, cell, derive_seed(config.seed, c as u64)))
            .collect()
    });
    let mut run = BenchRun { records: Vec::new(), errors: Vec::new() };
    for (record, error) in rows.into_iter().flatten() {
        if let Some(error) = error {
            run.errors.push(CellError { row: run.records.len(), error });
        }
        run.records.push(record);
    }
    Ok(run)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlgoStats {
    pub algo: Algorithm,
    pub rows: usize,
    pub failed: usize,
    /// Over rows with a known ratio.
    pub median_ratio: Option<f64>,
    pub max_ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchSummary {
    pub stats: Vec<AlgoStats>,
    pub checks: Vec<Check>,
}

fn median(mut v: Vec<f64>) -> Option<f64> {
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[m] } else { (v[m - 1] + v[m]) / 2.0 })
}

fn known(records: &[BenchRecord], algo: Algorithm) -> impl Iterator<Item = &BenchRecord> {
    records.iter().filter(move |r| r.algo == algo && r.ratio >= 0.0)
}

impl BenchSummary {
    pub fn new(records: &[BenchRecord], t: &Thresholds) -> Self {
        let mut algos: Vec<Algorithm> = Vec::new();
        for r in records {
            if !algos.contains(&r.algo) {
                algos.push(r.algo);
            }
        }
        let stats: Vec<AlgoStats> = algos
            .iter()
            .map(|&algo| {
                let ratios: Vec<f64> = known(records, algo).map(|r| r.ratio).collect();
                AlgoStats {
                    algo,
                    rows: records.iter().filter(|r| r.algo == algo).count(),
                    failed: records.iter().filter(|r| r.algo == algo && r.cost < 0).count(),
                    max_ratio: ratios.iter().copied().reduce(f64::max),
                    median_ratio: median(ratios),
                }
            })
            .collect();

        let mut checks = Vec::new();
        let bad = records.iter().filter(|r| r.opt_exact > 0 && r.cost >= 0 && r.ratio < 1.0).count();
        checks.push(Check { name: "ratio_at_least_one", pass: bad == 0, detail: format!("{bad} rows below 1") });

        let fraction = |algo, ok: &dyn Fn(&BenchRecord) -> bool| {
            let rows: Vec<&BenchRecord> = known(records, algo).collect();
            (rows.iter().filter(|r| ok(r)).count(), rows.len())
        };
        if algos.contains(&Algorithm::Random) {
            let (hit, total) = fraction(Algorithm::Random, &|r| r.cost <= 4 * r.opt_exact * r.opt_exact);
            let f = hit as f64 / total.max(1) as f64;
            checks.push(Check {
                name: "random_within_4opt",
                pass: total > 0 && f >= t.min_random_within_4opt,
                detail: format!("{hit}/{total} = {f:.4} (need >= {})", t.min_random_within_4opt),
            });
        }
        if algos.contains(&Algorithm::Phased) {
            let (hit, total) = fraction(Algorithm::Phased, &|r| r.ratio <= t.max_phased_ratio);
            let f = hit as f64 / total.max(1) as f64;
            checks.push(Check {
                name: "phased_within_max_ratio",
                pass: total > 0 && f >= t.min_phased_within,
                detail: format!("{hit}/{total} = {f:.4} at ratio <= {} (need >= {})", t.max_phased_ratio, t.min_phased_within),
            });
        }
        let med = |algo| stats.iter().find(|s| s.algo == algo).and_then(|s| s.median_ratio);
        if let (Some(p), Some(f), Some(r)) = (med(Algorithm::Phased), med(Algorithm::Refined), med(Algorithm::Random)) {
            checks.push(Check {
                name: "median_order",
                pass: p <= f && f <= r,
                detail: format!("phased {p:.4} <= refined {f:.4} <= random {r:.4}"),
            });
        }
        Self { stats, checks }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for s in &self.stats {
            let fmt = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.4}"));
            let _ = writeln!(
                out,
                "{}: rows {} failed {} median_ratio {} max_ratio {}",
                s.algo,
                s.rows,
                s.failed,
                fmt(s.median_ratio),
                fmt(s.max_ratio)
            );
        }
        for c in &self.checks {
            let _ = writeln!(out, "{} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
        }
        out
    }
}
