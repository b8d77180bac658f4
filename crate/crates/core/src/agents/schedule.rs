/// Linear exploration decay with a floor: `max(floor, 1 - pn / horizon * 0.9)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExplorationSchedule {
    pub horizon: f64,
    pub floor: f64,
}

impl Default for ExplorationSchedule {
    fn default() -> Self {
        Self { horizon: 20_000.0, floor: 0.1 }
    }
}

impl ExplorationSchedule {
    /// Probability of a random action at plan number `pn`.
    pub fn value(&self, pn: u64) -> f64 {
        (1.0 - pn as f64 / self.horizon * 0.9).max(self.floor)
    }
}

/// Counts training steps and signals a hard target copy every `period`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TargetSync {
    pub period: u64,
    steps: u64,
}

impl TargetSync {
    pub fn new(period: u64) -> Self {
        assert!(period > 0);
        Self { period, steps: 0 }
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    /// Records one training step; true when the targets should be copied.
    pub fn tick(&mut self) -> bool {
        self.steps += 1;
        self.steps.is_multiple_of(self.period)
    }
}
