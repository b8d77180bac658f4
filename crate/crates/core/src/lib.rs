//! Vessel path planning and reinforcement-learning navigation on gridded
//! coastal maps.

pub mod agents;
pub mod env;
pub mod gridworld;
pub mod harness;
pub mod image;
pub mod neural;
pub mod planner;
pub mod scalar;
pub mod toy;

/// Scalar used for training.
pub type Scalar = f32;
pub type Net = neural::Network<Scalar>;
/// Discrete-action value network agent.
pub type VnplvAgent = agents::DqnAgent<Scalar>;
/// Continuous-action actor-critic agent.
pub type CvnAgent = agents::DdpgAgent<Scalar>;
