//! Small convolutional and dense networks with hand-written backprop.

mod adam;
mod checkpoint;
mod kernels;
mod network;
mod spec;

use thiserror::Error;

pub use adam::Adam;
pub use checkpoint::Checkpoint;
pub use network::{Cache, InputGrads, Network};
pub use spec::{actor_spec, critic_spec, q_network_spec, toy_q_spec, Activation, LayerSpec, NetworkSpec, Shape};

#[derive(Debug, Error)]
pub enum NeuralError {
    #[error("invalid network spec: {0}")]
    BadSpec(String),
    #[error("shape mismatch: expected {expected} values, found {found}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("cache does not match the current parameters")]
    StaleCache,
    #[error("gradient contains NaN or infinity")]
    NonFiniteGradient,
    #[error("update produced non-finite parameters")]
    NonFiniteParams,
    #[error("checkpoint: {0}")]
    Checkpoint(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
