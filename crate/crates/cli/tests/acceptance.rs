//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Criteria listed in `KNOWN_UNATTAINABLE` print FAIL without failing the
//! target; any other FAIL exits non-zero.

use std::collections::HashMap;
use std::process::Command;
use std::sync::OnceLock;
use std::time::Instant;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::Rng as _;

use dyck_repair::bench::{bench, BenchConfig, BenchSummary};
use dyck_repair::memcheck::{self, brute_force_transcript_distance, gen_transcript, Language, OpKind, Transcript};
use dyck_repair::oracle::{dyck_deletion_dp, dyck_edit_dp, DistanceTable};
use dyck_repair::phased::{phase_bound, run_phased};
use dyck_repair::randomdel::{best_of, run};
use dyck_repair::randomwalk::{hitting_pmf, simulate, window_prob_exact};
use dyck_repair::rng::{substream, Rng};
use dyck_repair::{
    dyck1_distance, gen_instance, repair, Algorithm, BandedLevenshtein, IndelDistance, Levenshtein, ParenString,
    ParenSymbol, RepairParams, StrEdit,
};

/// 4: the literal string-edit construction disagrees with Levenshtein
/// whenever part of the open run can be repaired by turning opens into
/// closes. 6: the window `[d^2, 2d^2]` holds about 0.162 of the mass for
/// large `d`, since only steps of the parity of `d` can hit 0.
const KNOWN_UNATTAINABLE: &[u32] = &[4, 6];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn random_string(rng: &mut Rng, len: usize, s: u32) -> ParenString {
    let symbols = (0..len)
        .map(|_| {
            let t = rng.gen_range(0..s);
            if rng.gen::<bool>() {
                ParenSymbol::open(t)
            } else {
                ParenSymbol::close(t)
            }
        })
        .collect();
    ParenString::new(symbols, s).unwrap()
}

fn c1_exhaustive() -> Outcome {
    let start = Instant::now();
    // Backward search from every well-formed string up to length 10 covers
    // insertions, deletions and substitutions for inputs up to length 8.
    let table = DistanceTable::build(2, 8, true, 2);
    let (mut checked, mut of_len8, mut bad) = (0usize, 0usize, Vec::new());
    for len in 0..=8 {
        for w in table.strings(len) {
            let p = ParenString::new(w.clone(), 2).unwrap();
            let dp = dyck_edit_dp(&p, false).unwrap().cost;
            if table.distance(&w) != Some(dp) {
                bad.push(p.to_string());
            }
            checked += 1;
            of_len8 += usize::from(len == 8);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        bad.is_empty() && secs < 300.0,
        format!(
            "{checked} strings of length <= 8 ({of_len8} of length 8), {} discrepancies{}, {secs:.1}s",
            bad.len(),
            bad.first().map_or(String::new(), |b| format!(", first {b}"))
        ),
    )
}

fn c2_sandwich() -> Outcome {
    let mut rng = substream(2, 0);
    let mut violations = 0;
    for _ in 0..1000 {
        let s = rng.gen_range(1..=3);
        let len = rng.gen_range(0..=12);
        let p = random_string(&mut rng, len, s);
        let opt = dyck_edit_dp(&p, false).unwrap().cost;
        let optd = dyck_deletion_dp(&p).unwrap();
        if !(opt <= optd && optd <= 2 * opt) {
            violations += 1;
        }
    }
    outcome(violations == 0, format!("1000 strings, {violations} violations"))
}

fn c3_dyck1() -> Outcome {
    let mut rng = substream(3, 0);
    let mut violations = 0;
    for _ in 0..1000 {
        let len = rng.gen_range(0..=200);
        let p = random_string(&mut rng, len, 1);
        if dyck1_distance(&p).unwrap() != dyck_edit_dp(&p, false).unwrap().cost {
            violations += 1;
        }
    }
    outcome(violations == 0, format!("1000 strings, {violations} violations"))
}

fn levenshtein(a: &[u32], b: &[u32]) -> usize {
    let mut d = vec![vec![0usize; b.len() + 1]; a.len() + 1];
    for (i, row) in d.iter_mut().enumerate() {
        row[0] = i;
    }
    for (j, cell) in d[0].iter_mut().enumerate() {
        *cell = j;
    }
    for i in 1..=a.len() {
        for j in 1..=b.len() {
            let sub = d[i - 1][j - 1] + usize::from(a[i - 1] != b[j - 1]);
            d[i][j] = sub.min(d[i - 1][j] + 1).min(d[i][j - 1] + 1);
        }
    }
    d[a.len()][b.len()]
}

fn c4_string_edit_reduction() -> Outcome {
    let mut rng = substream(4, 0);
    let (mut violations, mut equal_len_violations, mut above) = (0, 0, 0);
    let mut example = None;
    for _ in 0..200 {
        let letters = rng.gen_range(1..=4);
        let a: Vec<u32> = (0..rng.gen_range(0..=30)).map(|_| rng.gen_range(0..letters)).collect();
        let b: Vec<u32> = (0..rng.gen_range(0..=30)).map(|_| rng.gen_range(0..letters)).collect();
        let symbols = a.iter().map(|&c| ParenSymbol::open(c)).chain(b.iter().rev().map(|&c| ParenSymbol::close(c))).collect();
        let p = ParenString::new(symbols, letters).unwrap();
        let dyck = dyck_edit_dp(&p, false).unwrap().cost;
        let lev = levenshtein(&a, &b);
        if dyck != lev {
            violations += 1;
            equal_len_violations += usize::from(a.len() == b.len());
            above += usize::from(dyck > lev);
            let size = a.len() + b.len();
            if example.as_ref().is_none_or(|&(_, best, _, _)| size < best) {
                example = Some((p.to_string(), size, dyck, lev));
            }
        }
    }
    let ex = example.map_or(String::new(), |(s, _, d, l)| format!("; e.g. {s}: dyck {d}, levenshtein {l}"));
    outcome(
        violations == 0,
        format!("200 pairs, {violations} violations ({equal_len_violations} with equal lengths, {above} with dyck above levenshtein){ex}"),
    )
}

struct Fuzz {
    runs: usize,
    repairs: usize,
    ill_formed: usize,
    below_opt: usize,
    phased_iterations: usize,
    phase_violations: usize,
    max_phases: usize,
}

fn fuzz() -> &'static Fuzz {
    static FUZZ: OnceLock<Fuzz> = OnceLock::new();
    FUZZ.get_or_init(|| {
        let strategies: [&dyn StrEdit; 3] = [&Levenshtein, &BandedLevenshtein, &IndelDistance];
        let mut f = Fuzz { runs: 0, repairs: 0, ill_formed: 0, below_opt: 0, phased_iterations: 0, phase_violations: 0, max_phases: 0 };
        for i in 0..10_000u64 {
            let mut rng = substream(5, i);
            let s = rng.gen_range(1..=4);
            let p = if i % 2 == 0 {
                let n = 2 * rng.gen_range(0..=95);
                let k = rng.gen_range(0..=10);
                gen_instance(n, s, k, &mut rng).unwrap().0
            } else {
                let len = rng.gen_range(0..=200);
                random_string(&mut rng, len, s)
            };
            let stredit = strategies[i as usize % 3];
            let exact = dyck_edit_dp(&p, true).unwrap();
            let opt = exact.cost;
            let mut results = vec![exact.repair.unwrap()];
            for algo in [Algorithm::Random, Algorithm::Refined] {
                results.push(repair(&p, &RepairParams::new(algo, i), stredit).unwrap());
            }
            let report = run_phased(&p, i, stredit, None).unwrap();
            let bound = phase_bound(report.z);
            for &phases in &report.phases {
                f.phased_iterations += 1;
                f.max_phases = f.max_phases.max(phases);
                f.phase_violations += usize::from(phases > bound);
            }
            results.push(report.repair);
            for r in &results {
                f.repairs += 1;
                f.ill_formed += usize::from(!r.repaired.is_well_formed());
                f.below_opt += usize::from(p.len() <= 200 && r.cost < opt);
            }
            f.runs += 1;
        }
        f
    })
}

fn c5_well_formed() -> Outcome {
    let f = fuzz();
    outcome(
        f.ill_formed == 0 && f.below_opt == 0,
        format!("{} runs, {} repairs, {} ill-formed, {} below the optimum", f.runs, f.repairs, f.ill_formed, f.below_opt),
    )
}

fn c6_window() -> Outcome {
    let bound = BigRational::new(194.into(), 1000.into());
    let mut worst: Option<(u64, BigRational)> = None;
    let mut fails = Vec::new();
    let mut within = f64::INFINITY;
    for d in 2..=25u64 {
        within = within.min(window_prob_exact(d, d, 2 * d * d).to_f64().unwrap());
        let w = window_prob_exact(d, d * d, 2 * d * d);
        if w < bound {
            fails.push(d);
        }
        if worst.as_ref().is_none_or(|(_, x)| w < *x) {
            worst = Some((d, w));
        }
    }
    let (d, w) = worst.unwrap();
    outcome(
        fails.is_empty(),
        format!(
            "d in [2, 25], minimum {:.6} at d = {d}, {} below 0.194 (first d = {}); P(T0 <= 2d^2) is at least {within:.6}",
            w.to_f64().unwrap(),
            fails.len(),
            fails.first().map_or("-".to_string(), u64::to_string)
        ),
    )
}

fn c7_monte_carlo() -> Outcome {
    let trials = 100_000u64;
    let (mut points, mut misses, mut worst) = (0, Vec::new(), 0.0f64);
    for d in [1u64, 2, 3, 5] {
        let h = simulate(d, 50, trials, 700 + d);
        for t in 1..=50u64 {
            let p = hitting_pmf(d, t);
            let emp = h.fraction(t);
            points += 1;
            let se = (p * (1.0 - p) / trials as f64).sqrt();
            let z = if se == 0.0 {
                if emp == 0.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            } else {
                (emp - p).abs() / se
            };
            worst = worst.max(z);
            if z > 3.0 {
                misses.push(format!("d={d} D={t} z={z:.2}"));
            }
        }
    }
    outcome(
        misses.is_empty(),
        format!("{points} points, {} beyond 3 SE, largest |z| {worst:.2}{}", misses.len(), if misses.is_empty() { String::new() } else { format!(" ({})", misses.join(", ")) }),
    )
}

fn c8_phase_bound() -> Outcome {
    let f = fuzz();
    outcome(
        f.phase_violations == 0,
        format!("{} phased iterations, {} above ceil(log2 z) + 1, most phases {}", f.phased_iterations, f.phase_violations, f.max_phases),
    )
}

fn c9_approximation() -> Outcome {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/approximation.conf");
    let config = BenchConfig::parse(&std::fs::read_to_string(path).unwrap()).unwrap();
    let run = bench(&config).unwrap();
    let summary = BenchSummary::new(&run.records, &config.thresholds);
    let instances = config.cells().len();
    let checks: Vec<String> =
        summary.checks.iter().map(|c| format!("{} {}: {}", if c.pass { "ok" } else { "no" }, c.name, c.detail)).collect();
    outcome(
        run.errors.is_empty() && summary.passed(),
        format!("{instances} instances, {} failed rows; {}", run.errors.len(), checks.join("; ")),
    )
}

fn min_secs(reps: usize, mut f: impl FnMut()) -> f64 {
    (0..reps)
        .map(|_| {
            let t = Instant::now();
            f();
            t.elapsed().as_secs_f64()
        })
        .fold(f64::INFINITY, f64::min)
}

fn c10_runtime() -> Outcome {
    let small = gen_instance(100_000, 2, 20, &mut substream(10, 0)).unwrap().0;
    let large = gen_instance(1_000_000, 2, 20, &mut substream(10, 1)).unwrap().0;
    let t5 = min_secs(7, || {
        std::hint::black_box(run(&small, 1));
    });
    let t6 = min_secs(7, || {
        std::hint::black_box(run(&large, 1));
    });
    let growth = t6 / t5;
    let start = Instant::now();
    let r = repair(&large, &RepairParams::new(Algorithm::Phased, 1), &Levenshtein).unwrap();
    let phased = start.elapsed().as_secs_f64();
    outcome(
        growth <= 30.0 && phased < 300.0 && r.repaired.is_well_formed(),
        format!(
            "single run {:.2}ms at 1e5, {:.2}ms at 1e6, growth {growth:.1}x (limit 30x); phased at 1e6 with k=20 {phased:.1}s, cost {}",
            t5 * 1e3,
            t6 * 1e3,
            r.cost
        ),
    )
}

/// Stack transcript as a Dyck string: keys become types in order of first
/// appearance, inserts open and extracts close.
fn transcript_as_dyck(t: &Transcript) -> ParenString {
    let mut ids: HashMap<&str, u32> = HashMap::new();
    let symbols: Vec<ParenSymbol> = t
        .ops()
        .iter()
        .map(|op| {
            let next = ids.len() as u32;
            let id = *ids.entry(op.key.as_str()).or_insert(next);
            if op.kind == OpKind::Ins {
                ParenSymbol::open(id)
            } else {
                ParenSymbol::close(id)
            }
        })
        .collect();
    ParenString::new(symbols, (ids.len() as u32).max(1)).unwrap()
}

fn c11_memcheck() -> Outcome {
    let (mut total, mut invalid, mut brute_checked, mut below_brute) = (0, 0, 0, 0);
    for (l, language) in Language::ALL.into_iter().enumerate() {
        for i in 0..1000u64 {
            let mut rng = substream(11, (l as u64) << 32 | i);
            let n = 2 * rng.gen_range(0..=8);
            let k = rng.gen_range(0..=4);
            let t = gen_transcript(language, n, k, &mut rng).unwrap();
            let algo = Algorithm::ALL[i as usize % 3];
            let r = memcheck::repair(&t, &RepairParams::new(algo, i)).unwrap();
            total += 1;
            invalid += usize::from(!r.transcript.validate() || r.transcript != t.without(&r.deleted));
            if t.len() <= 10 {
                brute_checked += 1;
                below_brute += usize::from(r.cost < brute_force_transcript_distance(&t, t.len()).unwrap());
            }
        }
    }
    let mut mismatched = 0;
    for i in 0..500u64 {
        let mut rng = substream(11, 1 << 40 | i);
        let n = 2 * rng.gen_range(1..=20);
        let k = rng.gen_range(0..=6);
        let t = gen_transcript(Language::Stack, n, k, &mut rng).unwrap();
        let p = transcript_as_dyck(&t);
        let algo = Algorithm::ALL[i as usize % 3];
        let params = RepairParams::new(algo, i);
        let stack_cost = memcheck::repair(&t, &params).unwrap().cost;
        let dyck_cost = match algo {
            Algorithm::Random => best_of(&p, params.iterations_for(p.len()).unwrap(), i).cost,
            _ => repair(&p, &params, &IndelDistance).unwrap().cost,
        };
        mismatched += usize::from(stack_cost != dyck_cost);
    }
    outcome(
        invalid == 0 && below_brute == 0 && mismatched == 0,
        format!(
            "{total} transcripts, {invalid} invalid repairs; {brute_checked} with <= 10 ops, {below_brute} below brute force; 500 stack/Dyck pairs, {mismatched} cost mismatches"
        ),
    )
}

fn c12_determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_dyck");
    let dir = tempfile::tempdir().unwrap();
    let path = |name: &str| dir.path().join(name).to_string_lossy().into_owned();
    let sh = |args: &[&str]| Command::new(bin).args(args).output().unwrap();

    let instance = sh(&["gen", "--n", "60", "--s", "3", "--k", "6", "--seed", "9"]);
    std::fs::write(path("p.txt"), &instance.stdout).unwrap();
    let tokens = "a b /a c /b /c a /a b\n";
    std::fs::write(path("t.txt"), tokens).unwrap();
    std::fs::write(path("bench.conf"), "n = 20, 40\nk = 1, 3\nreps = 2\nseed = 5\nworkers = 2\n").unwrap();
    for language in Language::ALL {
        let t = sh(&["gen-transcript", "--lang", language.name(), "--n", "12", "--k", "3", "--seed", "4"]);
        std::fs::write(path(&format!("{language}.tr")), &t.stdout).unwrap();
    }

    let p = path("p.txt");
    let t = path("t.txt");
    let conf = path("bench.conf");
    let mut commands: Vec<Vec<String>> = vec![
        vec!["gen", "--n", "60", "--s", "3", "--k", "6", "--seed", "9"],
        vec!["exact", &p],
        vec!["exact", "--deletion-only", &p],
        vec!["validate", &p],
        vec!["repair", "--algo", "phased", "--seed", "3", "--epsilon", "0.5", &p],
        vec!["repair", "--algo", "random", "--seed", "3", "--format", "tokens", "--emit-script", &t],
        vec!["rw", "pmf", "--d", "3", "--steps", "17"],
        vec!["rw", "window", "--d", "7"],
        vec!["rw", "simulate", "--d", "2", "--trials", "20000", "--seed", "8"],
    ]
    .into_iter()
    .map(|c| c.into_iter().map(String::from).collect())
    .collect();
    for algo in Algorithm::ALL {
        commands.push(["repair", "--algo", algo.name(), "--seed", "3", "--emit-script", &p].map(String::from).to_vec());
    }
    for language in Language::ALL {
        let tr = path(&format!("{language}.tr"));
        commands.push(["gen-transcript", "--lang", language.name(), "--n", "12", "--k", "3", "--seed", "4"].map(String::from).to_vec());
        commands.push(["transcript", "validate", "--lang", language.name(), &tr].map(String::from).to_vec());
        commands.push(["transcript", "repair", "--lang", language.name(), "--seed", "6", &tr].map(String::from).to_vec());
    }

    let mut differing = Vec::new();
    let mut failed = Vec::new();
    for c in &commands {
        let args: Vec<&str> = c.iter().map(String::as_str).collect();
        let (a, b) = (sh(&args), sh(&args));
        if !a.status.success() {
            failed.push(c.join(" "));
        }
        if a.stdout != b.stdout || a.status.code() != b.status.code() {
            differing.push(c.join(" "));
        }
    }
    let bench_run = |out: &str| {
        let o = sh(&["bench", "--config", &conf, "--out", &path(out)]);
        (o.status.success(), o.stdout, std::fs::read(path(out)).unwrap_or_default())
    };
    let (ok_a, out_a, csv_a) = bench_run("a.csv");
    let (ok_b, out_b, csv_b) = bench_run("b.csv");
    if !(ok_a && ok_b) {
        failed.push("bench".into());
    }
    if out_a != out_b || csv_a != csv_b || csv_a.is_empty() {
        differing.push("bench".into());
    }
    outcome(
        differing.is_empty() && failed.is_empty(),
        format!(
            "{} commands run twice, {} differ, {} failed{}",
            commands.len() + 1,
            differing.len(),
            failed.len(),
            if differing.is_empty() { String::new() } else { format!(" ({})", differing.join("; ")) }
        ),
    )
}

fn main() {
    let criteria: [(u32, &str, fn() -> Outcome); 12] = [
        (1, "oracle exhaustive agreement", c1_exhaustive),
        (2, "deletion sandwich", c2_sandwich),
        (3, "one-type single pass", c3_dyck1),
        (4, "string edit reduction", c4_string_edit_reduction),
        (5, "well-formed repairs, never below optimum", c5_well_formed),
        (6, "window probability at least 0.194", c6_window),
        (7, "pmf against Monte Carlo", c7_monte_carlo),
        (8, "phase bound", c8_phase_bound),
        (9, "approximation quality", c9_approximation),
        (10, "runtime shape", c10_runtime),
        (11, "memcheck", c11_memcheck),
        (12, "CLI determinism", c12_determinism),
    ];
    let mut unexpected = Vec::new();
    for (id, name, check) in criteria {
        let start = Instant::now();
        let o = check();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        let note = if !o.pass && KNOWN_UNATTAINABLE.contains(&id) { " [known unattainable]" } else { "" };
        println!("{verdict} {id:>2} {name}: {} ({:.1}s){note}", o.detail, start.elapsed().as_secs_f64());
        if !o.pass && note.is_empty() {
            unexpected.push(id);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
