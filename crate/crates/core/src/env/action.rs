/// Compass headings of the discrete action set, in clockwise order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Heading {
    N,
    NE,
    E,
    SE,
    S,
    SW,
    W,
    NW,
}

impl Heading {
    pub const ALL: [Heading; 8] =
        [Heading::N, Heading::NE, Heading::E, Heading::SE, Heading::S, Heading::SW, Heading::W, Heading::NW];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Self {
        Self::ALL[i % 8]
    }

    /// Unit displacement `(d_lon, d_lat)`; diagonals move on both axes.
    pub fn unit(self) -> (f64, f64) {
        match self {
            Heading::N => (0.0, 1.0),
            Heading::NE => (1.0, 1.0),
            Heading::E => (1.0, 0.0),
            Heading::SE => (1.0, -1.0),
            Heading::S => (0.0, -1.0),
            Heading::SW => (-1.0, -1.0),
            Heading::W => (-1.0, 0.0),
            Heading::NW => (-1.0, 1.0),
        }
    }
}

/// Per-step velocity in degrees.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Velocity {
    pub v_lon: f64,
    pub v_lat: f64,
}

impl Velocity {
    pub fn new(v_lon: f64, v_lat: f64) -> Self {
        Self { v_lon, v_lat }
    }

    /// Componentwise clamp into `[-max, max]`.
    pub fn clamped(self, max: f64) -> Self {
        Self { v_lon: self.v_lon.clamp(-max, max), v_lat: self.v_lat.clamp(-max, max) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Action {
    Discrete(Heading),
    Continuous(Velocity),
}

/// Which kind of action the environment accepts, and its magnitude.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ActionSpace {
    /// Eight headings, moving `step_size` degrees on each active axis.
    Discrete { step_size: f64 },
    /// Velocity pairs bounded by `max_velocity` on each axis.
    Continuous { max_velocity: f64 },
}

impl ActionSpace {
    /// Largest per-axis displacement.
    pub fn axis_limit(&self) -> f64 {
        match *self {
            ActionSpace::Discrete { step_size } => step_size,
            ActionSpace::Continuous { max_velocity } => max_velocity,
        }
    }
}
