use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Named random sub-streams derived from one seed. Each component draws
/// from its own stream so it can be replayed in isolation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stream {
    Endpoints,
    Obstacles,
    Exploration,
    Init,
    Replay,
    /// Per-plan endpoint stream for test and evaluation plans.
    TestEndpoints(u32),
    TestObstacles(u32),
    MapGen,
    /// Episode draws of the wall-map ablation, per epoch.
    ToyTest(u32),
}

impl Stream {
    fn id(self) -> u64 {
        match self {
            Stream::Endpoints => 1,
            Stream::Obstacles => 2,
            Stream::Exploration => 3,
            Stream::Init => 4,
            Stream::Replay => 5,
            Stream::MapGen => 6,
            Stream::TestEndpoints(i) => (1 << 32) | i as u64,
            Stream::TestObstacles(i) => (2 << 32) | i as u64,
            Stream::ToyTest(i) => (3 << 32) | i as u64,
        }
    }
}

pub fn stream(seed: u64, which: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(which.id());
    rng
}
