//! All-pairs shortest paths, trajectory simplification, and
//! intermediate-goal selection.

mod apsp;
mod cache;
mod goal;
pub mod raster;
mod simplify;

pub use apsp::{build_apsp, edge_list, ApspReach, ApspTables, WeightMode};
pub use cache::{cache_file_name, load_or_build, read_cache, write_cache};
pub use goal::{select_goal, IntermediateGoal};
pub use simplify::{lardp, rdp, rdp_keep, segment_distance, Simplifier};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum PlanError {
    #[error("map has no water cells")]
    NoWater,
    #[error("cell ({row}, {col}) is not a water cell")]
    NotWater { row: usize, col: usize },
    #[error("destination unreachable from origin")]
    Unreachable,
    #[error("apsp cache: {0}")]
    Cache(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
