//! Off-policy learners and their replay machinery.

mod ddpg;
mod dqn;
mod noise;
mod replay;
mod rotate;
mod schedule;

use thiserror::Error;

pub use ddpg::{actor_step, DdpgAgent, DdpgConfig};
pub use dqn::{DqnAgent, DqnConfig};
pub use noise::{ExplorationNoise, OuNoise};
pub use replay::{store_with_sar, ReplayBuffer, Transition, REPLAY_CAPACITY};
pub use rotate::{rotate_transition, DiscreteAction, Rotate};
pub use schedule::{ExplorationSchedule, TargetSync};

use crate::image::BitImage;
use crate::neural::NeuralError;
use crate::scalar::Real;

#[derive(Debug, Error)]
pub enum AgentError {
    #[error("replay buffer holds {have} transitions, batch needs {need}")]
    InsufficientBuffer { have: usize, need: usize },
    #[error(transparent)]
    Neural(#[from] NeuralError),
}

/// Stacks images into one `batch x input_len` network input.
pub(crate) fn stack<'a, R: Real>(images: impl IntoIterator<Item = &'a BitImage>, input_len: usize) -> Vec<R> {
    let images: Vec<&BitImage> = images.into_iter().collect();
    let mut out = vec![R::zero(); images.len() * input_len];
    for (img, dst) in images.iter().zip(out.chunks_exact_mut(input_len)) {
        img.write_input(dst);
    }
    out
}
