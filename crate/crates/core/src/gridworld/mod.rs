//! Map representation, georeferencing, and random placement of plan
//! endpoints and obstacles.

mod components;
mod map;
pub mod procedural;
mod sampling;

pub use components::WaterComponents;
pub use map::{CellKind, GeoMap, Georef, GridCell, MapError};
pub use sampling::{place_obstacles, sample_endpoints, EndpointSampler, ObstacleSet, Reachability, SampleError};

use num_traits::Float;

/// A point in continuous map coordinates (degrees).
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Position<T = f64> {
    pub lon: T,
    pub lat: T,
}

impl<T: Float> Position<T> {
    pub fn new(lon: T, lat: T) -> Self {
        Self { lon, lat }
    }

    pub fn distance(&self, other: &Self) -> T {
        (self.lon - other.lon).hypot(self.lat - other.lat)
    }

    /// Chebyshev (max-axis) distance, the metric of a square view.
    pub fn chebyshev(&self, other: &Self) -> T {
        (self.lon - other.lon).abs().max((self.lat - other.lat).abs())
    }
}

/// The round area a plan must reach.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DestinationCircle {
    pub center: Position,
    pub radius: f64,
}

impl DestinationCircle {
    pub fn contains(&self, p: &Position) -> bool {
        self.center.distance(p) <= self.radius
    }
}
