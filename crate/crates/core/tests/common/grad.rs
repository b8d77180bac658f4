//! Analytic gradients against central finite differences.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use seanav::neural::{
    actor_spec, critic_spec, q_network_spec, toy_q_spec, Activation, LayerSpec, Network, NetworkSpec, Shape,
};

const H: f64 = 1e-5;
const TOL: f64 = 1e-4;
const SAMPLED: usize = 40;

fn rel_err(a: &[f64], n: &[f64]) -> f64 {
    let diff: f64 = a.iter().zip(n).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nn: f64 = n.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na + nn == 0.0 {
        0.0
    } else {
        diff / (na + nn)
    }
}

struct Probe {
    x: Vec<f64>,
    aux: Option<Vec<f64>>,
    weights: Vec<f64>,
    batch: usize,
}

impl Probe {
    fn new(net: &Network<f64>, batch: usize, rng: &mut ChaCha8Rng) -> Self {
        let x = (0..batch * net.input_len()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let aux_len = batch * net.spec().aux;
        let aux = (aux_len > 0).then(|| (0..aux_len).map(|_| rng.random_range(-1.0..1.0)).collect());
        let weights = (0..batch * net.output_len()).map(|_| rng.random_range(-1.0..1.0)).collect();
        Self { x, aux, weights, batch }
    }

    /// Central difference, or `None` when the one-sided slopes disagree,
    /// meaning a relu kink lies within `H` of the point.
    fn central(&self, up: f64, mid: f64, down: f64) -> Option<f64> {
        let (fwd, bwd) = ((up - mid) / H, (mid - down) / H);
        ((fwd - bwd).abs() <= 1e-4 * (1.0 + fwd.abs() + bwd.abs())).then(|| (up - down) / (2.0 * H))
    }

    /// Scalar loss: fixed random projection of the outputs.
    fn loss(&self, net: &Network<f64>, x: &[f64], aux: Option<&[f64]>) -> f64 {
        let out = net.predict(x, aux, self.batch).unwrap();
        out.iter().zip(&self.weights).map(|(o, w)| o * w).sum()
    }
}

/// Checks parameter, input and auxiliary-input gradients of `spec`.
pub fn check(spec: NetworkSpec, seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut net = Network::<f64>::init(spec, &mut rng).unwrap();
    let probe = Probe::new(&net, 2, &mut rng);
    let aux = probe.aux.as_deref();
    let cache = net.forward(&probe.x, aux, probe.batch).unwrap();
    let mut grads = vec![0.0; net.n_params()];
    let ig = net.backward(&cache, &probe.weights, Some(&mut grads), true).unwrap();

    let idx: Vec<usize> = if net.n_params() <= SAMPLED {
        (0..net.n_params()).collect()
    } else {
        (0..SAMPLED).map(|_| rng.random_range(0..net.n_params())).collect()
    };
    let mid = probe.loss(&net, &probe.x, aux);
    let mut skipped = 0;
    let mut analytic = Vec::new();
    let mut numeric = Vec::new();
    for &i in &idx {
        let orig = net.params()[i];
        net.params_mut()[i] = orig + H;
        let up = probe.loss(&net, &probe.x, aux);
        net.params_mut()[i] = orig - H;
        let down = probe.loss(&net, &probe.x, aux);
        net.params_mut()[i] = orig;
        match probe.central(up, mid, down) {
            Some(n) => {
                analytic.push(grads[i]);
                numeric.push(n);
            }
            None => skipped += 1,
        }
    }
    let e = rel_err(&analytic, &numeric);
    if e >= TOL {
        return Err(format!("params seed {seed}: rel err {e:e} for {}", net.spec()));
    }

    let input = ig.input.unwrap();
    let mut analytic = Vec::new();
    let mut numeric = Vec::new();
    for _ in 0..SAMPLED.min(probe.x.len()) {
        let i = rng.random_range(0..probe.x.len());
        let mut x = probe.x.clone();
        x[i] += H;
        let up = probe.loss(&net, &x, aux);
        x[i] -= 2.0 * H;
        let down = probe.loss(&net, &x, aux);
        match probe.central(up, mid, down) {
            Some(n) => {
                analytic.push(input[i]);
                numeric.push(n);
            }
            None => skipped += 1,
        }
    }
    let e = rel_err(&analytic, &numeric);
    if e >= TOL {
        return Err(format!("input seed {seed}: rel err {e:e}"));
    }

    if let Some(a) = &probe.aux {
        let ga = ig.aux.unwrap();
        let mut analytic = Vec::new();
        let mut numeric = Vec::new();
        for i in 0..a.len() {
            let mut p = a.clone();
            p[i] += H;
            let up = probe.loss(&net, &probe.x, Some(&p));
            p[i] -= 2.0 * H;
            let down = probe.loss(&net, &probe.x, Some(&p));
            match probe.central(up, mid, down) {
                Some(n) => {
                    analytic.push(ga[i]);
                    numeric.push(n);
                }
                None => skipped += 1,
            }
        }
        let e = rel_err(&analytic, &numeric);
        if e >= TOL {
            return Err(format!("aux seed {seed}: rel err {e:e}"));
        }
    }
    // a handful of kinks is expected; many would mean the detector hides a bug
    if skipped > 3 {
        return Err(format!("seed {seed}: {skipped} coordinates straddle a kink"));
    }
    Ok(())
}

pub fn single(layer: LayerSpec, input: Shape, aux: usize) -> NetworkSpec {
    let mut layers = vec![layer];
    if aux > 0 {
        layers.push(LayerSpec::Concat);
        layers.push(LayerSpec::Dense { units: 3, act: Activation::Tanh });
    }
    NetworkSpec::new(input, aux, layers)
}

/// Every layer type and activation, alone and behind a concatenation.
pub fn layer_suite(seed: u64) -> Result<(), String> {
    for act in [Activation::Relu, Activation::Tanh, Activation::Linear] {
        check(single(LayerSpec::Dense { units: 5, act }, Shape::Flat(7), 0), seed)?;
        check(single(LayerSpec::Conv { filters: 3, kernel: 3, stride: 2, act }, Shape::Spatial(7, 7, 2), 0), seed)?;
        check(single(LayerSpec::Conv { filters: 2, kernel: 2, stride: 1, act }, Shape::Spatial(5, 4, 3), 0), seed)?;
    }
    check(single(LayerSpec::Dense { units: 4, act: Activation::Relu }, Shape::Flat(6), 2), seed)?;
    check(
        NetworkSpec::new(
            Shape::Flat(5),
            0,
            vec![LayerSpec::Dense { units: 3, act: Activation::Tanh }, LayerSpec::Scale(0.25)],
        ),
        seed,
    )
}

/// The networks the agents use, at full local-view size.
pub fn agent_suite(seed: u64) -> Result<(), String> {
    check(toy_q_spec(12, 4), seed)?;
    check(q_network_spec(51, 4, 8), seed)?;
    check(actor_spec(51, 4, 1.0), seed)?;
    check(critic_spec(51, 4), seed)
}
