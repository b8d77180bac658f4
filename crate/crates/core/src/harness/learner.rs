use std::sync::Arc;

use rand::Rng;

use super::{AgentKind, HarnessError};
use crate::agents::{
    DdpgAgent, DdpgConfig, DiscreteAction, DqnAgent, DqnConfig, ExplorationNoise, OuNoise, ReplayBuffer, Transition,
};
use crate::env::{Action, Heading, Velocity};
use crate::image::BitImage;
use crate::neural::{actor_spec, critic_spec, q_network_spec, Checkpoint, Network};
use crate::{CvnAgent, Scalar, VnplvAgent};

const CHANNELS: usize = 4;
/// Rotations stored per transition when augmenting, giving four copies.
const SAR_TURNS: u8 = 3;

/// An agent from the comparison table together with its replay memory.
#[derive(Clone, Debug)]
#[allow(clippy::large_enum_variant)]
pub enum Learner {
    Vnplv { kind: AgentKind, agent: VnplvAgent, buffer: ReplayBuffer<Heading> },
    Cvn { kind: AgentKind, agent: CvnAgent, buffer: ReplayBuffer<Velocity>, noise: ExplorationNoise },
}

fn ddpg_config() -> DdpgConfig {
    DdpgConfig::default()
}

impl Learner {
    pub fn new<G: Rng + ?Sized>(
        kind: AgentKind,
        view_size: usize,
        replay_capacity: usize,
        rng: &mut G,
    ) -> Result<Self, HarnessError> {
        Ok(if kind.is_continuous() {
            let cfg = ddpg_config();
            Learner::Cvn {
                kind,
                agent: DdpgAgent::new(view_size, CHANNELS, cfg, rng)?,
                buffer: ReplayBuffer::new(replay_capacity),
                noise: ExplorationNoise::Ou(OuNoise::for_velocity(cfg.max_velocity)),
            }
        } else {
            let spec = q_network_spec(view_size, CHANNELS, Heading::COUNT);
            Learner::Vnplv {
                kind,
                agent: DqnAgent::new(spec, DqnConfig::default(), rng)?,
                buffer: ReplayBuffer::new(replay_capacity),
            }
        })
    }

    pub fn kind(&self) -> AgentKind {
        match self {
            Learner::Vnplv { kind, .. } | Learner::Cvn { kind, .. } => *kind,
        }
    }

    /// Restores an agent saved by [`Learner::checkpoint`]. Only the networks
    /// needed for acting and further training are stored; replay starts empty.
    pub fn from_checkpoint(ck: &Checkpoint, view_size: usize, replay_capacity: usize) -> Result<Self, HarnessError> {
        let kind: AgentKind = checkpoint_field(ck, "agent")
            .ok_or_else(|| HarnessError::Config("checkpoint does not name its agent".into()))?
            .parse()?;
        Ok(if kind.is_continuous() {
            let cfg = ddpg_config();
            let mut actor = Network::zeros(actor_spec(view_size, CHANNELS, cfg.max_velocity))?;
            let mut critic = Network::zeros(critic_spec(view_size, CHANNELS))?;
            ck.restore("actor", &mut actor)?;
            ck.restore("critic", &mut critic)?;
            Learner::Cvn {
                kind,
                agent: DdpgAgent::from_networks(actor, critic, cfg),
                buffer: ReplayBuffer::new(replay_capacity),
                noise: ExplorationNoise::Ou(OuNoise::for_velocity(cfg.max_velocity)),
            }
        } else {
            let mut online = Network::zeros(q_network_spec(view_size, CHANNELS, Heading::COUNT))?;
            ck.restore("online", &mut online)?;
            Learner::Vnplv {
                kind,
                agent: DqnAgent::from_network(online, DqnConfig::default()),
                buffer: ReplayBuffer::new(replay_capacity),
            }
        })
    }

    /// Parameters of the acting networks; `meta` is appended to the agent tag.
    pub fn checkpoint(&self, meta: &str) -> Checkpoint {
        let mut ck = Checkpoint::new(format!("agent={} {meta}", self.kind()).trim_end().to_string());
        match self {
            Learner::Vnplv { agent, .. } => ck.push("online", &agent.online),
            Learner::Cvn { agent, .. } => {
                ck.push("actor", &agent.actor);
                ck.push("critic", &agent.critic);
            }
        }
        ck
    }

    /// Resets per-plan exploration state.
    pub fn begin_plan(&mut self) {
        if let Learner::Cvn { noise, .. } = self {
            noise.reset();
        }
    }

    pub fn act_greedy(&self, state: &BitImage) -> Result<Action, HarnessError> {
        Ok(match self {
            Learner::Vnplv { agent, .. } => Action::Discrete(Heading::from_index(agent.greedy(state)?)),
            Learner::Cvn { agent, .. } => Action::Continuous(agent.act(state)?),
        })
    }

    /// Behaviour policy: epsilon-greedy for the discrete agents, policy
    /// plus noise for the continuous ones (which ignore `epsilon`).
    pub fn act_explore<G: Rng + ?Sized>(
        &mut self,
        state: &BitImage,
        epsilon: f64,
        rng: &mut G,
    ) -> Result<Action, HarnessError> {
        Ok(match self {
            Learner::Vnplv { agent, .. } => Action::Discrete(Heading::from_index(agent.select(state, epsilon, rng)?)),
            Learner::Cvn { agent, noise, .. } => Action::Continuous(agent.act_noisy(state, noise, rng)?),
        })
    }

    /// Stores one transition, with its three rotations for the SAR agents.
    pub fn remember(
        &mut self,
        state: Arc<BitImage>,
        action: Action,
        reward: f64,
        next_state: Arc<BitImage>,
        terminal: bool,
    ) -> Result<(), HarnessError> {
        let turns = if self.kind().uses_sar() { SAR_TURNS } else { 0 };
        match (self, action) {
            (Learner::Vnplv { buffer, .. }, Action::Discrete(h)) => {
                buffer.store_with_sar(Transition { state, action: h, reward, next_state, terminal }, turns)
            }
            (Learner::Cvn { buffer, .. }, Action::Continuous(v)) => {
                buffer.store_with_sar(Transition { state, action: v, reward, next_state, terminal }, turns)
            }
            (_, a) => return Err(HarnessError::Config(format!("action {a:?} does not fit the agent"))),
        }
        Ok(())
    }

    pub fn buffer_len(&self) -> usize {
        match self {
            Learner::Vnplv { buffer, .. } => buffer.len(),
            Learner::Cvn { buffer, .. } => buffer.len(),
        }
    }

    pub fn batch_size(&self) -> usize {
        match self {
            Learner::Vnplv { agent, .. } => agent.config().batch,
            Learner::Cvn { agent, .. } => agent.config().batch,
        }
    }

    /// One gradient update once the buffer can fill a batch; returns
    /// whether an update happened.
    pub fn train_step<G: Rng + ?Sized>(&mut self, rng: &mut G) -> Result<bool, HarnessError> {
        if self.buffer_len() < self.batch_size() {
            return Ok(false);
        }
        match self {
            Learner::Vnplv { agent, buffer, .. } => {
                agent.train_step(buffer, rng)?;
            }
            Learner::Cvn { agent, buffer, .. } => {
                agent.train_step(buffer, rng)?;
            }
        }
        Ok(true)
    }

    pub fn networks(&self) -> Vec<&Network<Scalar>> {
        match self {
            Learner::Vnplv { agent, .. } => vec![&agent.online],
            Learner::Cvn { agent, .. } => vec![&agent.actor, &agent.critic],
        }
    }
}

/// Value of a `key=value` token in the checkpoint metadata.
pub(crate) fn checkpoint_field<'a>(ck: &'a Checkpoint, key: &str) -> Option<&'a str> {
    ck.meta.split_whitespace().find_map(|tok| tok.strip_prefix(key)?.strip_prefix('='))
}
