//! Exact references: the interval DP (full and deletion-only models) and
//! exhaustive search for tiny instances.

mod brute;
mod dp;

pub use brute::{brute_force_distance, brute_force_distance_with, DistanceTable};
pub use dp::{
    dyck_deletion_dp, dyck_deletion_dp_capped, dyck_edit_dp, dyck_edit_dp_capped, pair_cost, CostModel, DpTable,
    ExactOutcome, DEFAULT_CAP,
};
