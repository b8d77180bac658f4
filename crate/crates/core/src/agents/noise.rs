use rand::Rng;
use rand_distr::StandardNormal;

/// Ornstein-Uhlenbeck process on two axes: `x <- x + theta (mu - x) + sigma N(0, 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct OuNoise {
    pub theta: f64,
    pub sigma: f64,
    pub mu: f64,
    x: [f64; 2],
}

impl OuNoise {
    pub fn new(theta: f64, sigma: f64) -> Self {
        Self { theta, sigma, mu: 0.0, x: [0.0; 2] }
    }

    /// Defaults for a velocity box of half-width `max_velocity`.
    pub fn for_velocity(max_velocity: f64) -> Self {
        Self::new(0.15, 0.2 * max_velocity)
    }

    pub fn state(&self) -> [f64; 2] {
        self.x
    }

    pub fn reset(&mut self) {
        self.x = [self.mu; 2];
    }

    pub fn sample<R: Rng + ?Sized>(&mut self, rng: &mut R) -> [f64; 2] {
        for x in &mut self.x {
            let z: f64 = rng.sample(StandardNormal);
            *x += self.theta * (self.mu - *x) + self.sigma * z;
        }
        self.x
    }
}

/// Behaviour-policy perturbation for continuous actions.
#[derive(Clone, Debug, PartialEq)]
pub enum ExplorationNoise {
    Ou(OuNoise),
    /// Independent zero-mean Gaussian with the given standard deviation.
    Gaussian(f64),
}

impl ExplorationNoise {
    pub fn reset(&mut self) {
        if let ExplorationNoise::Ou(ou) = self {
            ou.reset();
        }
    }

    pub fn sample<R: Rng + ?Sized>(&mut self, rng: &mut R) -> [f64; 2] {
        match self {
            ExplorationNoise::Ou(ou) => ou.sample(rng),
            ExplorationNoise::Gaussian(s) => {
                let a: f64 = rng.sample(StandardNormal);
                let b: f64 = rng.sample(StandardNormal);
                [a * *s, b * *s]
            }
        }
    }
}
