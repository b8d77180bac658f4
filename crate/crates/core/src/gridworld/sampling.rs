use std::io::{BufRead, Write};

use rand::seq::index;
use rand::Rng;
use thiserror::Error;

use super::{DestinationCircle, GeoMap, GridCell, Position};

#[derive(Debug, Error)]
pub enum SampleError {
    #[error("no feasible endpoint pair found after {attempts} attempts")]
    InfeasibleMap { attempts: usize },
    #[error("requested {requested} obstacles but only {eligible} eligible water cells")]
    InsufficientCells { requested: usize, eligible: usize },
    #[error("obstacle file line {line}: {reason}")]
    BadObstacleLine { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Answers whether two water cells are connected by some planner path.
pub trait Reachability {
    fn reachable(&self, a: GridCell, b: GridCell) -> bool;
}

/// Rejection sampler for plan endpoints.
#[derive(Clone, Copy, Debug)]
pub struct EndpointSampler {
    /// Upper bound on the origin/destination separation (degrees).
    pub max_dist: f64,
    /// Radius given to the destination circle.
    pub radius: f64,
    /// Separation must strictly exceed this (degrees).
    pub min_separation: f64,
    pub max_attempts: usize,
}

impl Default for EndpointSampler {
    fn default() -> Self {
        Self { max_dist: 0.32, radius: 0.002, min_separation: 0.0, max_attempts: 10_000 }
    }
}

/// Samples an origin and a destination circle on water cells.
///
/// Both endpoints are cell centers. Each attempt draws the origin uniformly
/// over water and the destination uniformly over the cells of the square of
/// half-width `max_dist` around it; the pair is accepted when the
/// destination is water, the separation lies in `(min_separation, max_dist]`
/// and the cells are mutually reachable.
pub fn sample_endpoints<R: Rng + ?Sized>(
    map: &GeoMap,
    sampler: &EndpointSampler,
    reach: &impl Reachability,
    rng: &mut R,
) -> Result<(Position, DestinationCircle), SampleError> {
    let water = map.water_indices();
    let attempts = sampler.max_attempts;
    if water.len() < 2 {
        return Err(SampleError::InfeasibleMap { attempts: 0 });
    }
    let reach_cells = (sampler.max_dist / map.cell_size()).ceil().max(0.0) as usize;
    for _ in 0..attempts {
        let origin = map.cell_at(water[rng.random_range(0..water.len())]);
        let r0 = origin.row.saturating_sub(reach_cells);
        let r1 = (origin.row + reach_cells).min(map.height() - 1);
        let c0 = origin.col.saturating_sub(reach_cells);
        let c1 = (origin.col + reach_cells).min(map.width() - 1);
        let dest = GridCell::new(rng.random_range(r0..=r1), rng.random_range(c0..=c1));
        if dest == origin || !map.is_water(dest) {
            continue;
        }
        let (po, pd) = (map.cell_center(origin), map.cell_center(dest));
        let sep = po.distance(&pd);
        if sep > sampler.max_dist || sep <= sampler.min_separation {
            continue;
        }
        if !reach.reachable(origin, dest) {
            continue;
        }
        return Ok((po, DestinationCircle { center: pd, radius: sampler.radius }));
    }
    Err(SampleError::InfeasibleMap { attempts })
}

/// Static obstacles for one plan, one per water cell.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ObstacleSet {
    pub positions: Vec<Position>,
}

impl ObstacleSet {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Reads `lon,lat` lines without a header. Blank lines are skipped.
    pub fn read_csv(reader: impl BufRead) -> Result<Self, SampleError> {
        let mut positions = Vec::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let bad = |reason: &str| SampleError::BadObstacleLine { line: i + 1, reason: reason.into() };
            let (lon, lat) = line.split_once(',').ok_or_else(|| bad("expected lon,lat"))?;
            let lon = lon.trim().parse().map_err(|_| bad("bad longitude"))?;
            let lat = lat.trim().parse().map_err(|_| bad("bad latitude"))?;
            positions.push(Position { lon, lat });
        }
        Ok(Self { positions })
    }

    pub fn write_csv(&self, mut w: impl Write) -> std::io::Result<()> {
        for p in &self.positions {
            writeln!(w, "{},{}", p.lon, p.lat)?;
        }
        Ok(())
    }
}

/// Picks `n` distinct water cells uniformly, excluding every cell that
/// contains a forbidden position. Obstacles sit at cell centers.
pub fn place_obstacles<R: Rng + ?Sized>(
    map: &GeoMap,
    n: usize,
    forbidden: &[Position],
    rng: &mut R,
) -> Result<ObstacleSet, SampleError> {
    let banned: Vec<usize> = forbidden.iter().filter_map(|p| map.locate(p)).map(|c| map.index(c)).collect();
    let eligible: Vec<usize> = map.water_indices().iter().copied().filter(|i| !banned.contains(i)).collect();
    if eligible.len() < n {
        return Err(SampleError::InsufficientCells { requested: n, eligible: eligible.len() });
    }
    let positions =
        index::sample(rng, eligible.len(), n).into_iter().map(|k| map.cell_center(map.cell_at(eligible[k]))).collect();
    Ok(ObstacleSet { positions })
}
