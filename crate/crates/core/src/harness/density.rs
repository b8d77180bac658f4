use std::io::Write;

use super::streams::{stream, Stream};
use super::HarnessError;
use crate::gridworld::{sample_endpoints, EndpointSampler, GeoMap};
use crate::planner::ApspTables;

/// Per-cell visit counts over a batch of planner paths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityMap {
    pub width: usize,
    pub height: usize,
    /// Row-major, row 0 north.
    pub counts: Vec<u64>,
}

impl DensityMap {
    pub fn distinct_cells(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }

    pub fn max_count(&self) -> u64 {
        self.counts.iter().copied().max().unwrap_or(0)
    }

    /// Grey levels scaled so the most visited cell is white.
    pub fn raster(&self) -> Vec<u8> {
        let max = self.max_count();
        self.counts
            .iter()
            .map(|&c| if max == 0 { 0 } else { ((c as f64 / max as f64) * 255.0).round() as u8 })
            .collect()
    }
}

/// Samples `n_pairs` endpoint pairs no further apart than `max_dist` and
/// counts the cells on each shortest path.
pub fn density_map(
    map: &GeoMap,
    tables: &ApspTables,
    n_pairs: usize,
    max_dist: f64,
    seed: u64,
) -> Result<DensityMap, HarnessError> {
    if !(max_dist.is_finite() && max_dist > 0.0) {
        return Err(HarnessError::Config(format!("max_dist must be positive, got {max_dist}")));
    }
    let mut counts = vec![0u64; map.width() * map.height()];
    let sampler = EndpointSampler { max_dist, ..EndpointSampler::default() };
    let reach = tables.reach(map);
    let mut rng = stream(seed, Stream::Endpoints);
    for _ in 0..n_pairs {
        let (o, d) = sample_endpoints(map, &sampler, &reach, &mut rng)
            .map_err(|e| HarnessError::InfeasibleMap(e.to_string()))?;
        let (from, to) = (map.locate(&o).expect("on map"), map.locate(&d.center).expect("on map"));
        for cell in tables.path_cells(map, from, to)? {
            counts[map.index(cell)] += 1;
        }
    }
    Ok(DensityMap { width: map.width(), height: map.height(), counts })
}

/// Binary greymap (P5) of the normalised counts.
pub fn write_pgm(density: &DensityMap, mut w: impl Write) -> std::io::Result<()> {
    write!(w, "P5\n{} {}\n255\n", density.width, density.height)?;
    w.write_all(&density.raster())
}
