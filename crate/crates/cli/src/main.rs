use std::fmt::Write as _;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dyck_repair::bench::{bench, BenchConfig, BenchSummary};
use dyck_repair::memcheck::{self, gen_transcript, Language, Transcript};
use dyck_repair::oracle::{dyck_deletion_dp_capped, dyck_edit_dp_capped, DEFAULT_CAP};
use dyck_repair::randomwalk::{hitting_pmf, simulate, window_prob};
use dyck_repair::rng::substream;
use dyck_repair::{gen_instance, parse, render, repair, Algorithm, Error, Format, Levenshtein, RepairParams, TokenNames};

#[derive(Parser)]
#[command(name = "dyck", version, about = "Edit distance to balanced parentheses, and repairs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Compact,
    Tokens,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Compact => Format::Compact,
            FormatArg::Tokens => Format::Tokens,
        }
    }
}

#[derive(Args)]
struct Input {
    /// Input file, or `-` for stdin.
    file: PathBuf,
    #[arg(long, value_enum, default_value = "compact")]
    format: FormatArg,
    /// Declared alphabet size; symbols of a larger type are rejected.
    #[arg(long)]
    alphabet: Option<u32>,
}

#[derive(Subcommand)]
enum Command {
    /// Approximate repair with one of the randomized algorithms.
    Repair {
        #[arg(long, value_parser = parse_algo)]
        algo: Algorithm,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        iters: Option<usize>,
        #[arg(long)]
        epsilon: Option<f64>,
        /// Print the edit script after the repaired string.
        #[arg(long)]
        emit_script: bool,
        #[command(flatten)]
        input: Input,
    },
    /// Exact distance by the cubic DP.
    Exact {
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[arg(long)]
        deletion_only: bool,
        #[command(flatten)]
        input: Input,
    },
    Validate {
        #[command(flatten)]
        input: Input,
    },
    /// Check or repair an operation transcript.
    Transcript {
        #[command(subcommand)]
        action: TranscriptAction,
    },
    /// Planted instance: a random balanced string with k random edits.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        s: u32,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "compact")]
        format: FormatArg,
    },
    GenTranscript {
        #[arg(long, value_parser = parse_lang)]
        lang: Language,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run a benchmark config and write CSV.
    Bench {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Overrides `workers` in the config.
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Gambler's-ruin hitting times.
    Rw {
        #[command(subcommand)]
        action: RwAction,
    },
}

#[derive(Subcommand)]
enum TranscriptAction {
    Validate {
        #[arg(long, value_parser = parse_lang)]
        lang: Language,
        file: PathBuf,
    },
    Repair {
        #[arg(long, value_parser = parse_lang)]
        lang: Language,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_parser = parse_algo, default_value = "random")]
        algo: Algorithm,
        #[arg(long)]
        iters: Option<usize>,
        file: PathBuf,
    },
}

#[derive(Subcommand)]
enum RwAction {
    /// P(T0 = steps) for a walk started at d.
    Pmf {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        steps: u64,
    },
    /// P(lo <= T0 <= hi); defaults to [d^2, 2 d^2].
    Window {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        lo: Option<u64>,
        #[arg(long)]
        hi: Option<u64>,
    },
    /// Monte Carlo hitting times as CSV against the exact pmf.
    Simulate {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Walks still alive after this many steps are censored.
        #[arg(long, default_value_t = 50)]
        cap: u64,
    },
}

fn parse_algo(s: &str) -> Result<Algorithm, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_lang(s: &str) -> Result<Language, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    Io(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Lib(e) => match e {
                Error::TooLarge { .. } => 3,
                Error::Invariant(_) | Error::WindowOverlap { .. } | Error::PolarityViolation => 4,
                Error::NotFound { .. } | Error::IndexOutOfRange { .. } | Error::ConflictingOps { .. } => 1,
                _ => 2,
            },
        }
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| Failure::Io(format!("stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn load(input: &Input) -> Result<(dyck_repair::ParenString, TokenNames, Format), Failure> {
    let format = Format::from(input.format);
    let (mut p, names) = parse(&read_text(&input.file)?, format)?;
    if let Some(s) = input.alphabet {
        p = p.with_alphabet_size(s)?;
    }
    Ok((p, names, format))
}

fn run(cli: Cli) -> Result<String, Failure> {
    let mut out = String::new();
    match cli.command {
        Command::Repair { algo, seed, iters, epsilon, emit_script, input } => {
            let (p, names, format) = load(&input)?;
            let params = RepairParams { iterations: iters, epsilon, ..RepairParams::new(algo, seed) };
            let r = repair(&p, &params, &Levenshtein)?;
            let _ = writeln!(out, "cost {}", r.cost);
            let _ = writeln!(out, "{}", render(&r.repaired, format, &names)?);
            if emit_script {
                out.push_str(&r.script.sorted().to_text(format, &names)?);
            }
        }
        Command::Exact { cap, deletion_only, input } => {
            let (p, names, format) = load(&input)?;
            if deletion_only {
                let _ = writeln!(out, "cost {}", dyck_deletion_dp_capped(&p, cap)?);
            } else {
                let o = dyck_edit_dp_capped(&p, true, cap)?;
                let _ = writeln!(out, "cost {}", o.cost);
                if let Some(r) = o.repair {
                    let _ = writeln!(out, "{}", render(&r.repaired, format, &names)?);
                }
            }
        }
        Command::Validate { input } => {
            let (p, _, _) = load(&input)?;
            out.push_str(if p.is_well_formed() { "well-formed\n" } else { "not well-formed\n" });
        }
        Command::Transcript { action } => match action {
            TranscriptAction::Validate { lang, file } => {
                let t = Transcript::parse(&read_text(&file)?, lang)?;
                out.push_str(if t.validate() { "valid\n" } else { "invalid\n" });
            }
            TranscriptAction::Repair { lang, seed, algo, iters, file } => {
                let t = Transcript::parse(&read_text(&file)?, lang)?;
                let params = RepairParams { iterations: iters, ..RepairParams::new(algo, seed) };
                let r = memcheck::repair(&t, &params)?;
                let deleted: Vec<String> = r.deleted.iter().map(usize::to_string).collect();
                let _ = writeln!(out, "cost {}", r.cost);
                let _ = writeln!(out, "deleted {}", deleted.join(","));
                out.push_str(&r.transcript.render());
            }
        },
        Command::Gen { n, s, k, seed, format } => {
            let (p, _) = gen_instance(n, s, k, &mut substream(seed, 0))?;
            let _ = writeln!(out, "{}", render(&p, format.into(), &TokenNames::new())?);
        }
        Command::GenTranscript { lang, n, k, seed } => {
            out.push_str(&gen_transcript(lang, n, k, &mut substream(seed, 0))?.render());
        }
        Command::Bench { config, out: path, workers } => {
            let mut config = BenchConfig::parse(&read_text(&config)?)?;
            if let Some(w) = workers {
                config.workers = w;
            }
            let run = bench(&config)?;
            for e in &run.errors {
                eprintln!("row {}: {}", e.row + 1, e.error);
            }
            fs::write(&path, run.to_csv()).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            out.push_str(&BenchSummary::new(&run.records, &config.thresholds).render());
        }
        Command::Rw { action } => match action {
            RwAction::Pmf { d, steps } => {
                let _ = writeln!(out, "{}", hitting_pmf(d, steps));
            }
            RwAction::Window { d, lo, hi } => {
                let _ = writeln!(out, "{}", window_prob(d, lo.unwrap_or(d * d), hi.unwrap_or(2 * d * d)));
            }
            RwAction::Simulate { d, trials, seed, cap } => {
                if d == 0 {
                    return Err(Error::BadParams("d must be at least 1".into()).into());
                }
                let h = simulate(d, cap, trials, seed);
                out.push_str("steps,hits,fraction,pmf\n");
                for (t, &hits) in h.hits.iter().enumerate().skip(1) {
                    let _ = writeln!(out, "{t},{hits},{},{}", h.fraction(t as u64), hitting_pmf(d, t as u64));
                }
                let _ = writeln!(out, "censored,{},{},", h.censored, h.censored as f64 / trials.max(1) as f64);
            }
        },
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => match io::stdout().lock().write_all(out.as_bytes()) {
            Err(e) if e.kind() != io::ErrorKind::BrokenPipe => ExitCode::from(1),
            _ => ExitCode::SUCCESS,
        },
        Err(f) => {
            match &f {
                Failure::Io(msg) => eprintln!("error: {msg}"),
                Failure::Lib(e) => eprintln!("error: {e}"),
            }
            ExitCode::from(f.code())
        }
    }
}
