//! Edit distance to Dyck languages, exact and approximate, with repair scripts.
//!
//! A Dyck string over `s` parenthesis types is well-balanced; the distance
//! of an arbitrary string is the fewest insertions, deletions and
//! substitutions that make it so. This crate has
//!
//! - exact references: an interval DP for both the full and deletion-only
//!   models, and brute force for tiny inputs ([`oracle`]);
//! - greedy matching and block decomposition ([`preprocess`]);
//! - three randomized repairs: best-of random deletion ([`randomdel`]),
//!   per-block restarts priced by string edit distance ([`refined`]), and the
//!   phased refinement ([`phased`]);
//! - the random walk behind their analysis ([`randomwalk`]);
//! - repair of stack, queue, priority-queue and deque transcripts
//!   ([`memcheck`]);
//! - instance generation and a CSV benchmark harness ([`gen`], [`bench`]).
//!
//! ```
//! use dyck_repair::{parse_compact, repair, Algorithm, Levenshtein, RepairParams};
//!
//! let p = parse_compact("([)]").unwrap();
//! let r = repair(&p, &RepairParams::new(Algorithm::Phased, 1), &Levenshtein).unwrap();
//! assert!(r.repaired.is_well_formed());
//! assert!(r.cost >= 2);
//! ```

pub mod bench;
pub mod error;
pub mod format;
pub mod gen;
pub mod memcheck;
pub mod oracle;
pub mod phased;
pub mod preprocess;
pub mod randomdel;
pub mod randomwalk;
pub mod refined;
pub mod repair;
pub mod rng;
pub mod script;
pub mod stredit;
pub mod symbol;

pub use error::{Error, Result};
pub use format::{parse, parse_compact, render, render_compact, Format, TokenNames};
pub use gen::gen_instance;
pub use oracle::{brute_force_distance, dyck_deletion_dp, dyck_edit_dp, ExactOutcome};
pub use preprocess::{decompose, greedy_match, BlockDecomposition};
pub use randomwalk::{hitting_pmf, window_prob, GamblersRuin, WalkScalar};
pub use repair::{repair, Algorithm, RepairParams};
pub use script::{apply_script, EditOp, EditScript, RepairResult};
pub use stredit::{BandedLevenshtein, IndelDistance, Levenshtein, StrEdit};
pub use symbol::{dyck1_distance, dyck1_unmatched, ParenString, ParenSymbol};

pub type Ruin = GamblersRuin<f64>;
pub type RuinF32 = GamblersRuin<f32>;
pub type RuinExact = GamblersRuin<num_rational::BigRational>;
