use rand::Rng;

use super::{stack, AgentError, DiscreteAction, ReplayBuffer, TargetSync};
use crate::image::BitImage;
use crate::neural::{Adam, Network, NetworkSpec, NeuralError};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DqnConfig {
    pub gamma: f64,
    pub batch: usize,
    pub lr: f64,
    pub sync_every: u64,
}

impl Default for DqnConfig {
    fn default() -> Self {
        Self { gamma: 0.99, batch: 32, lr: 1e-3, sync_every: 200 }
    }
}

/// Deep Q-learning with a hard-synchronised target network.
#[derive(Clone, Debug)]
pub struct DqnAgent<R: Real> {
    pub online: Network<R>,
    pub target: Network<R>,
    opt: Adam<R>,
    cfg: DqnConfig,
    sync: TargetSync,
}

impl<R: Real> DqnAgent<R> {
    pub fn new<G: Rng + ?Sized>(spec: NetworkSpec, cfg: DqnConfig, rng: &mut G) -> Result<Self, NeuralError> {
        Ok(Self::from_network(Network::init(spec, rng)?, cfg))
    }

    /// Wraps an existing online network; the target starts as a copy.
    pub fn from_network(online: Network<R>, cfg: DqnConfig) -> Self {
        let opt = Adam::for_network(&online, cfg.lr);
        Self { target: online.clone(), online, opt, cfg, sync: TargetSync::new(cfg.sync_every) }
    }

    pub fn config(&self) -> &DqnConfig {
        &self.cfg
    }

    pub fn sync(&self) -> &TargetSync {
        &self.sync
    }

    pub fn n_actions(&self) -> usize {
        self.online.output_len()
    }

    pub fn q_values(&self, state: &BitImage) -> Result<Vec<R>, NeuralError> {
        self.online.predict(&state.to_input(), None, 1)
    }

    /// Greedy action; ties go to the lowest index.
    pub fn greedy(&self, state: &BitImage) -> Result<usize, NeuralError> {
        Ok(argmax(&self.q_values(state)?))
    }

    /// Epsilon-greedy: uniform random with probability `epsilon`.
    pub fn select<G: Rng + ?Sized>(&self, state: &BitImage, epsilon: f64, rng: &mut G) -> Result<usize, NeuralError> {
        if rng.random::<f64>() < epsilon {
            Ok(rng.random_range(0..self.n_actions()))
        } else {
            self.greedy(state)
        }
    }

    /// One minibatch update on the online network. Returns the loss before
    /// the update.
    pub fn train_step<A: DiscreteAction, G: Rng + ?Sized>(
        &mut self,
        buffer: &ReplayBuffer<A>,
        rng: &mut G,
    ) -> Result<R, AgentError> {
        let n = self.cfg.batch;
        if buffer.len() < n {
            return Err(AgentError::InsufficientBuffer { have: buffer.len(), need: n });
        }
        let batch = buffer.sample(rng, n);
        let len = self.online.input_len();
        let k = self.n_actions();
        let gamma = R::lit(self.cfg.gamma);

        let next_q = if self.cfg.gamma == 0.0 || batch.iter().all(|t| t.terminal) {
            vec![R::zero(); n * k]
        } else {
            self.target.predict(&stack(batch.iter().map(|t| t.next_state.as_ref()), len), None, n)?
        };
        let cache = self.online.forward(&stack(batch.iter().map(|t| t.state.as_ref()), len), None, n)?;
        let q = cache.output();

        let scale = R::lit(2.0 / n as f64);
        let mut loss = R::zero();
        let mut d_out = vec![R::zero(); n * k];
        for (i, t) in batch.iter().enumerate() {
            let mut y = R::lit(t.reward);
            if !t.terminal {
                y += gamma * max(&next_q[i * k..(i + 1) * k]);
            }
            let a = t.action.index();
            let err = q[i * k + a] - y;
            loss += err * err;
            d_out[i * k + a] = scale * err;
        }
        let mut grads = vec![R::zero(); self.online.n_params()];
        self.online.backward(&cache, &d_out, Some(&mut grads), false)?;
        self.opt.step(&mut self.online, &grads)?;
        if self.sync.tick() {
            self.target.copy_from(&self.online);
        }
        Ok(loss / R::lit(n as f64))
    }
}

fn max<R: Real>(v: &[R]) -> R {
    v.iter().copied().fold(R::neg_infinity(), R::max)
}

pub(crate) fn argmax<R: Real>(v: &[R]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate() {
        if x > v[best] {
            best = i;
        }
    }
    best
}
