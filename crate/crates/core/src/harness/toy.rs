use std::fmt::Write as _;
use std::sync::Arc;

use super::streams::{stream, Stream};
use super::{ratd, HarnessError};
use crate::agents::{DqnAgent, DqnConfig, ExplorationSchedule, ReplayBuffer, Transition, REPLAY_CAPACITY};
use crate::neural::toy_q_spec;
use crate::toy::{render_toy, toy_state, toy_step, ToyAction, ToyKind, ToyOutcome, TOY_SIDE};
use crate::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ToyVariant {
    Dqn,
    DqnSar,
}

impl ToyVariant {
    pub fn name(self) -> &'static str {
        match self {
            ToyVariant::Dqn => "dqn",
            ToyVariant::DqnSar => "dqn+sar",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ToyConfig {
    pub epochs: usize,
    pub train_episodes: usize,
    pub test_episodes: usize,
    pub variants: Vec<ToyVariant>,
    pub seed: u64,
    pub dqn: DqnConfig,
}

impl Default for ToyConfig {
    fn default() -> Self {
        Self {
            epochs: 20,
            train_episodes: 200,
            test_episodes: 100,
            variants: vec![ToyVariant::Dqn, ToyVariant::DqnSar],
            seed: 0,
            dqn: DqnConfig::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ToyRow {
    pub variant: ToyVariant,
    pub epoch: usize,
    pub kind: ToyKind,
    pub ratd: f64,
}

pub fn write_toy_csv(rows: &[ToyRow]) -> String {
    let mut s = String::from("variant,epoch,kind,ratd\n");
    for r in rows {
        let _ = writeln!(s, "{},{},{},{:.4}", r.variant.name(), r.epoch, r.kind.name(), r.ratd);
    }
    s
}

fn test_kind(
    agent: &DqnAgent<Scalar>,
    kind: ToyKind,
    episodes: usize,
    seed: u64,
    index: u32,
) -> Result<f64, HarnessError> {
    let mut rng = stream(seed, Stream::ToyTest(index));
    let mut reached = 0;
    for _ in 0..episodes {
        let mut map = render_toy(kind, &mut rng);
        let mut state = toy_state(&map);
        loop {
            let step = toy_step(&mut map, ToyAction::from_index(agent.greedy(&state)?))?;
            if step.terminal {
                reached += usize::from(step.outcome == ToyOutcome::Reached);
                break;
            }
            state = step.state;
        }
    }
    ratd(reached, episodes)
}

fn run_variant(cfg: &ToyConfig, variant: ToyVariant, rows: &mut Vec<ToyRow>) -> Result<(), HarnessError> {
    let mut agent =
        DqnAgent::<Scalar>::new(toy_q_spec(TOY_SIDE * TOY_SIDE * 3, 4), cfg.dqn, &mut stream(cfg.seed, Stream::Init))?;
    let mut buffer = ReplayBuffer::<ToyAction>::new(REPLAY_CAPACITY);
    let mut maps = stream(cfg.seed, Stream::Endpoints);
    let mut explore = stream(cfg.seed, Stream::Exploration);
    let mut replay = stream(cfg.seed, Stream::Replay);
    // decays to the floor halfway through training
    let schedule = ExplorationSchedule { horizon: (cfg.epochs * cfg.train_episodes) as f64 / 2.0, floor: 0.1 };
    let turns = if variant == ToyVariant::DqnSar { 3 } else { 0 };
    let mut episode = 0u64;
    for epoch in 0..cfg.epochs {
        for _ in 0..cfg.train_episodes {
            let epsilon = schedule.value(episode);
            let mut map = render_toy(ToyKind::Horizontal, &mut maps);
            let mut state = Arc::new(toy_state(&map));
            loop {
                let action = ToyAction::from_index(agent.select(&state, epsilon, &mut explore)?);
                let step = toy_step(&mut map, action)?;
                let next = Arc::new(step.state);
                let terminal = step.terminal && step.outcome != ToyOutcome::StepCap;
                let t = Transition { state, action, reward: step.reward, next_state: Arc::clone(&next), terminal };
                buffer.store_with_sar(t, turns);
                if buffer.len() >= agent.config().batch {
                    agent.train_step(&buffer, &mut replay)?;
                }
                if step.terminal {
                    break;
                }
                state = next;
            }
            episode += 1;
        }
        for (i, kind) in ToyKind::ALL.into_iter().enumerate() {
            let ratd = test_kind(&agent, kind, cfg.test_episodes, cfg.seed, i as u32)?;
            rows.push(ToyRow { variant, epoch, kind, ratd });
        }
    }
    Ok(())
}

/// Trains each variant on horizontal-wall maps only and tests it on all
/// three layouts after every epoch. Variants share the seed, so they see
/// the same training maps and the same test maps.
pub fn toy_experiment(cfg: &ToyConfig) -> Result<Vec<ToyRow>, HarnessError> {
    if cfg.epochs == 0 || cfg.train_episodes == 0 || cfg.test_episodes == 0 || cfg.variants.is_empty() {
        return Err(HarnessError::Config("toy experiment counts must be at least 1".into()));
    }
    let mut rows = Vec::with_capacity(cfg.epochs * 3 * cfg.variants.len());
    for &variant in &cfg.variants {
        run_variant(cfg, variant, &mut rows)?;
    }
    Ok(rows)
}
