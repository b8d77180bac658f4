use super::{Network, NeuralError};
use crate::scalar::Real;

/// Adam optimiser state for one network.
#[derive(Clone, Debug)]
pub struct Adam<R: Real> {
    pub lr: R,
    pub beta1: R,
    pub beta2: R,
    pub eps: R,
    m: Vec<R>,
    v: Vec<R>,
    t: i32,
}

impl<R: Real> Adam<R> {
    pub fn new(n_params: usize, lr: f64) -> Self {
        Self {
            lr: R::lit(lr),
            beta1: R::lit(0.9),
            beta2: R::lit(0.999),
            eps: R::lit(1e-8),
            m: vec![R::zero(); n_params],
            v: vec![R::zero(); n_params],
            t: 0,
        }
    }

    pub fn for_network(net: &Network<R>, lr: f64) -> Self {
        Self::new(net.n_params(), lr)
    }

    pub fn steps(&self) -> i32 {
        self.t
    }

    /// One bias-corrected Adam step. Non-finite gradients are rejected
    /// before anything is modified.
    pub fn step(&mut self, net: &mut Network<R>, grads: &[R]) -> Result<(), NeuralError> {
        if grads.len() != self.m.len() || net.n_params() != self.m.len() {
            return Err(NeuralError::ShapeMismatch { expected: self.m.len(), found: grads.len() });
        }
        if grads.iter().any(|g| !g.is_finite()) {
            return Err(NeuralError::NonFiniteGradient);
        }
        self.t += 1;
        let one = R::one();
        let step = self.lr * (one - self.beta2.powi(self.t)).sqrt() / (one - self.beta1.powi(self.t));
        let params = net.params_mut();
        for (((p, &g), m), v) in params.iter_mut().zip(grads).zip(&mut self.m).zip(&mut self.v) {
            *m = self.beta1 * *m + (one - self.beta1) * g;
            *v = self.beta2 * *v + (one - self.beta2) * g * g;
            *p -= step * *m / (v.sqrt() + self.eps);
        }
        if params.iter().any(|p| !p.is_finite()) {
            return Err(NeuralError::NonFiniteParams);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::neural::{Activation, LayerSpec, NetworkSpec, Shape};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn net() -> Network<f64> {
        let spec = NetworkSpec::new(Shape::Flat(4), 0, vec![LayerSpec::Dense { units: 3, act: Activation::Tanh }]);
        Network::init(spec, &mut ChaCha8Rng::seed_from_u64(2)).unwrap()
    }

    #[test]
    fn zero_gradient_keeps_params() {
        let mut n = net();
        let before = n.params().to_vec();
        let mut opt = Adam::for_network(&n, 1e-3);
        for _ in 0..10 {
            let z = vec![0.0; n.n_params()];
            opt.step(&mut n, &z).unwrap();
        }
        for (a, b) in before.iter().zip(n.params()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_learning_rate_is_identity() {
        let mut n = net();
        let before = n.params().to_vec();
        let mut opt = Adam::for_network(&n, 0.0);
        let g = vec![3.0; n.n_params()];
        opt.step(&mut n, &g).unwrap();
        assert_eq!(before, n.params());
    }

    #[test]
    fn constant_gradient_moves_against_sign() {
        let mut n = net();
        let mut opt = Adam::for_network(&n, 1e-2);
        let g: Vec<f64> = (0..n.n_params()).map(|i| if i % 2 == 0 { 1.0 } else { -0.5 }).collect();
        let mut prev = n.params().to_vec();
        for _ in 0..100 {
            opt.step(&mut n, &g).unwrap();
            for ((p, q), gi) in n.params().iter().zip(&prev).zip(&g) {
                assert!((p - q) * gi < 0.0);
            }
            prev = n.params().to_vec();
        }
    }

    #[test]
    fn rejects_nan() {
        let mut n = net();
        let before = n.params().to_vec();
        let mut opt = Adam::for_network(&n, 1e-3);
        let mut g = vec![0.0; n.n_params()];
        g[3] = f64::NAN;
        assert!(matches!(opt.step(&mut n, &g), Err(NeuralError::NonFiniteGradient)));
        assert_eq!(before, n.params());
    }
}
