use std::fmt;
use std::str::FromStr;

use super::HarnessError;
use crate::agents::ExplorationSchedule;
use crate::env::{ActionSpace, EnvConfig};
use crate::planner::{Simplifier, WeightMode};

/// The six agents of the comparison table: learner, action magnitude and
/// whether replay is augmented with rotations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AgentKind {
    A1,
    B1,
    C1,
    A2,
    B2,
    C2,
}

impl AgentKind {
    pub const ALL: [AgentKind; 6] =
        [AgentKind::A1, AgentKind::B1, AgentKind::C1, AgentKind::A2, AgentKind::B2, AgentKind::C2];

    pub fn name(self) -> &'static str {
        match self {
            AgentKind::A1 => "a1",
            AgentKind::B1 => "b1",
            AgentKind::C1 => "c1",
            AgentKind::A2 => "a2",
            AgentKind::B2 => "b2",
            AgentKind::C2 => "c2",
        }
    }

    /// Velocity-output (actor-critic) agent.
    pub fn is_continuous(self) -> bool {
        matches!(self, AgentKind::C1 | AgentKind::C2)
    }

    pub fn uses_sar(self) -> bool {
        matches!(self, AgentKind::A2 | AgentKind::B2 | AgentKind::C2)
    }

    pub fn action_space(self) -> ActionSpace {
        match self {
            AgentKind::A1 | AgentKind::A2 => ActionSpace::Discrete { step_size: 0.001 },
            AgentKind::B1 | AgentKind::B2 => ActionSpace::Discrete { step_size: 0.0005 },
            AgentKind::C1 | AgentKind::C2 => ActionSpace::Continuous { max_velocity: 0.001 },
        }
    }
}

impl fmt::Display for AgentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AgentKind {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AgentKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| HarnessError::Config(format!("unknown agent {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrainConfig {
    pub agent: AgentKind,
    pub batches: usize,
    pub train_plans: usize,
    pub test_plans: usize,
    pub max_dist: f64,
    pub seed: u64,
    pub weights: WeightMode,
    pub simplifier: Simplifier,
    pub n_obstacles: usize,
    pub episode_step_cap: usize,
    /// Environment steps between gradient updates.
    pub train_every: usize,
    pub exploration: ExplorationSchedule,
    pub replay_capacity: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            agent: AgentKind::A1,
            batches: 4,
            train_plans: 200,
            test_plans: 100,
            max_dist: 0.01,
            seed: 0,
            weights: WeightMode::Plain,
            simplifier: Simplifier::Lardp,
            n_obstacles: 30,
            episode_step_cap: 200,
            train_every: 1,
            exploration: ExplorationSchedule::default(),
            replay_capacity: crate::agents::REPLAY_CAPACITY,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<(), HarnessError> {
        let counts = [
            ("batches", self.batches),
            ("train plans", self.train_plans),
            ("test plans", self.test_plans),
            ("episode step cap", self.episode_step_cap),
            ("train_every", self.train_every),
            ("replay capacity", self.replay_capacity),
        ];
        if let Some((name, _)) = counts.iter().find(|(_, v)| *v == 0) {
            return Err(HarnessError::Config(format!("{name} must be at least 1")));
        }
        if !(self.max_dist.is_finite() && self.max_dist > 0.0) {
            return Err(HarnessError::Config(format!("max_dist must be positive, got {}", self.max_dist)));
        }
        Ok(())
    }

    pub fn env_config(&self) -> EnvConfig {
        EnvConfig {
            max_dist: self.max_dist,
            n_obstacles: self.n_obstacles,
            episode_step_cap: self.episode_step_cap,
            simplifier: self.simplifier,
            actions: self.agent.action_space(),
            ..EnvConfig::default()
        }
    }
}
