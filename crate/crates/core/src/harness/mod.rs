//! Experiment orchestration: training and evaluation loops, the arrival
//! metric, visit-density rasters and the wall-map ablation.

mod config;
mod density;
mod learner;
mod streams;
mod toy;
mod train;

use thiserror::Error;

pub use config::{AgentKind, TrainConfig};
pub use density::{density_map, write_pgm, DensityMap};
pub use learner::Learner;
pub use streams::{stream, Stream};
pub use toy::{toy_experiment, write_toy_csv, ToyConfig, ToyRow, ToyVariant};
pub use train::{best_batch, evaluate, train, write_metrics_csv, MetricsRow, TrainReport, METRICS_HEADER};

use crate::agents::AgentError;
use crate::env::EnvError;
use crate::gridworld::{MapError, SampleError};
use crate::neural::NeuralError;
use crate::planner::PlanError;
use crate::toy::ToyError;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("infeasible map: {0}")]
    InfeasibleMap(String),
    #[error(transparent)]
    Env(EnvError),
    #[error(transparent)]
    Agent(#[from] AgentError),
    #[error(transparent)]
    Neural(#[from] NeuralError),
    #[error(transparent)]
    Plan(PlanError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Toy(#[from] ToyError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<PlanError> for HarnessError {
    fn from(e: PlanError) -> Self {
        match e {
            PlanError::NoWater => HarnessError::InfeasibleMap(e.to_string()),
            e => HarnessError::Plan(e),
        }
    }
}

impl From<EnvError> for HarnessError {
    fn from(e: EnvError) -> Self {
        match e {
            EnvError::Sample(s @ SampleError::InfeasibleMap { .. })
            | EnvError::Sample(s @ SampleError::InsufficientCells { .. }) => HarnessError::InfeasibleMap(s.to_string()),
            EnvError::Plan(p) => p.into(),
            e => HarnessError::Env(e),
        }
    }
}

/// Rate of arrival to destination: percentage of successful plans.
pub fn ratd(successes: usize, total: usize) -> Result<f64, HarnessError> {
    if total == 0 {
        return Err(HarnessError::Config("ratd over zero plans".into()));
    }
    if successes > total {
        return Err(HarnessError::Config(format!("{successes} successes out of {total} plans")));
    }
    Ok(100.0 * successes as f64 / total as f64)
}
