use rand::Rng;

use super::{stack, AgentError, ExplorationNoise, ReplayBuffer, TargetSync};
use crate::env::Velocity;
use crate::image::BitImage;
use crate::neural::{actor_spec, critic_spec, Adam, Network, NeuralError};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DdpgConfig {
    pub gamma: f64,
    pub batch: usize,
    pub actor_lr: f64,
    pub critic_lr: f64,
    pub sync_every: u64,
    pub max_velocity: f64,
}

impl Default for DdpgConfig {
    fn default() -> Self {
        Self { gamma: 0.99, batch: 32, actor_lr: 1e-4, critic_lr: 1e-3, sync_every: 200, max_velocity: 0.001 }
    }
}

/// Deterministic actor-critic for velocity actions.
///
/// The critic sees actions divided by `max_velocity`, so its action input
/// lives in `[-1, 1]` like the actor's tanh output before scaling.
#[derive(Clone, Debug)]
pub struct DdpgAgent<R: Real> {
    pub actor: Network<R>,
    pub critic: Network<R>,
    pub actor_target: Network<R>,
    pub critic_target: Network<R>,
    actor_opt: Adam<R>,
    critic_opt: Adam<R>,
    cfg: DdpgConfig,
    sync: TargetSync,
}

impl<R: Real> DdpgAgent<R> {
    /// Fresh agent over `side x side x channels` views.
    pub fn new<G: Rng + ?Sized>(
        side: usize,
        channels: usize,
        cfg: DdpgConfig,
        rng: &mut G,
    ) -> Result<Self, NeuralError> {
        let actor = Network::init(actor_spec(side, channels, cfg.max_velocity), rng)?;
        let critic = Network::init(critic_spec(side, channels), rng)?;
        Ok(Self::from_networks(actor, critic, cfg))
    }

    pub fn from_networks(actor: Network<R>, critic: Network<R>, cfg: DdpgConfig) -> Self {
        Self {
            actor_opt: Adam::for_network(&actor, cfg.actor_lr),
            critic_opt: Adam::for_network(&critic, cfg.critic_lr),
            actor_target: actor.clone(),
            critic_target: critic.clone(),
            actor,
            critic,
            cfg,
            sync: TargetSync::new(cfg.sync_every),
        }
    }

    pub fn config(&self) -> &DdpgConfig {
        &self.cfg
    }

    pub fn sync(&self) -> &TargetSync {
        &self.sync
    }

    /// Policy output without noise.
    pub fn act(&self, state: &BitImage) -> Result<Velocity, NeuralError> {
        let a = self.actor.predict(&state.to_input(), None, 1)?;
        Ok(Velocity::new(to_f64(a[0]), to_f64(a[1])))
    }

    /// Policy output plus exploration noise, clamped to the velocity box.
    pub fn act_noisy<G: Rng + ?Sized>(
        &self,
        state: &BitImage,
        noise: &mut ExplorationNoise,
        rng: &mut G,
    ) -> Result<Velocity, NeuralError> {
        let a = self.act(state)?;
        let [nx, ny] = noise.sample(rng);
        Ok(Velocity::new(a.v_lon + nx, a.v_lat + ny).clamped(self.cfg.max_velocity))
    }

    /// Critic regression followed by one policy-gradient step on the actor.
    /// Returns `(critic_loss, actor_loss)`, the latter being `-mean Q`.
    pub fn train_step<G: Rng + ?Sized>(
        &mut self,
        buffer: &ReplayBuffer<Velocity>,
        rng: &mut G,
    ) -> Result<(R, R), AgentError> {
        let n = self.cfg.batch;
        if buffer.len() < n {
            return Err(AgentError::InsufficientBuffer { have: buffer.len(), need: n });
        }
        let batch = buffer.sample(rng, n);
        let len = self.actor.input_len();
        let inv_v = R::lit(1.0 / self.cfg.max_velocity);
        let states = stack(batch.iter().map(|t| t.state.as_ref()), len);
        let actions: Vec<R> =
            batch.iter().flat_map(|t| [R::lit(t.action.v_lon) * inv_v, R::lit(t.action.v_lat) * inv_v]).collect();

        let next_q = if self.cfg.gamma == 0.0 || batch.iter().all(|t| t.terminal) {
            vec![R::zero(); n]
        } else {
            let next = stack(batch.iter().map(|t| t.next_state.as_ref()), len);
            let mut next_a = self.actor_target.predict(&next, None, n)?;
            next_a.iter_mut().for_each(|a| *a *= inv_v);
            self.critic_target.predict(&next, Some(&next_a), n)?
        };

        let gamma = R::lit(self.cfg.gamma);
        let cache = self.critic.forward(&states, Some(&actions), n)?;
        let scale = R::lit(2.0 / n as f64);
        let mut critic_loss = R::zero();
        let d_out: Vec<R> = batch
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let mut y = R::lit(t.reward);
                if !t.terminal {
                    y += gamma * next_q[i];
                }
                let err = cache.output()[i] - y;
                critic_loss += err * err;
                scale * err
            })
            .collect();
        let mut grads = vec![R::zero(); self.critic.n_params()];
        self.critic.backward(&cache, &d_out, Some(&mut grads), false)?;
        self.critic_opt.step(&mut self.critic, &grads)?;

        let critic = &self.critic;
        let actor_loss = actor_step(&mut self.actor, &mut self.actor_opt, &states, n, |a| {
            let an: Vec<R> = a.iter().map(|&v| v * inv_v).collect();
            let c = critic.forward(&states, Some(&an), n)?;
            let q = c.output();
            let loss = -q.iter().copied().sum::<R>() / R::lit(n as f64);
            let d = vec![-R::one() / R::lit(n as f64); n];
            let da = critic.backward(&c, &d, None, false)?.aux.expect("critic has an action input");
            Ok((loss, da.into_iter().map(|g| g * inv_v).collect()))
        })?;

        if self.sync.tick() {
            self.actor_target.copy_from(&self.actor);
            self.critic_target.copy_from(&self.critic);
        }
        Ok((critic_loss / R::lit(n as f64), actor_loss))
    }
}

/// One optimiser step on `actor` given a loss over its output actions.
///
/// `loss_grad` receives the batch of actions and returns the loss together
/// with its gradient with respect to each action component.
pub fn actor_step<R: Real, F>(
    actor: &mut Network<R>,
    opt: &mut Adam<R>,
    states: &[R],
    batch: usize,
    loss_grad: F,
) -> Result<R, NeuralError>
where
    F: FnOnce(&[R]) -> Result<(R, Vec<R>), NeuralError>,
{
    let cache = actor.forward(states, None, batch)?;
    let (loss, d_a) = loss_grad(cache.output())?;
    let mut grads = vec![R::zero(); actor.n_params()];
    actor.backward(&cache, &d_a, Some(&mut grads), false)?;
    opt.step(actor, &grads)?;
    Ok(loss)
}

fn to_f64<R: Real>(v: R) -> f64 {
    v.to_f64().expect("finite network output")
}
