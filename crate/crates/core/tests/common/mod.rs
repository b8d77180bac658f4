//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

pub mod grad;

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rand::Rng;
use seanav::gridworld::{CellKind, GeoMap, Georef, Position};

pub fn unit_georef() -> Georef {
    Georef { origin_lon: 0.0, origin_lat: 0.0, cell_size: 1.0 }
}

/// Random grid with independent land cells.
pub fn random_map<R: Rng>(rng: &mut R, max_side: usize, land_p: f64) -> GeoMap {
    let w = rng.random_range(2..=max_side);
    let h = rng.random_range(2..=max_side);
    let text: String = (0..h)
        .map(|_| {
            let mut row: String = (0..w).map(|_| if rng.random_bool(land_p) { '1' } else { '0' }).collect();
            row.push('\n');
            row
        })
        .collect();
    GeoMap::from_grid_text(&text, unit_georef()).unwrap()
}

fn land(map: &GeoMap, r: isize, c: isize) -> bool {
    r < 0 || c < 0 || r >= map.height() as isize || c >= map.width() as isize || {
        map.cells()[r as usize * map.width() + c as usize] == CellKind::Land
    }
}

fn neighbours(r: isize, c: isize) -> impl Iterator<Item = (isize, isize)> {
    (-1..=1).flat_map(move |dr| (-1..=1).map(move |dc| (r + dr, c + dc))).filter(move |&p| p != (r, c))
}

/// Fraction of the 8 neighbours that are land, off-map counting as land.
fn land_ratio(map: &GeoMap, r: isize, c: isize) -> f64 {
    neighbours(r, c).filter(|&(a, b)| land(map, a, b)).count() as f64 / 8.0
}

/// Cost of stepping into `(r, c)` under the land-proximity weighting.
pub fn proximity_factor(map: &GeoMap, r: isize, c: isize, alpha: f64, beta: f64) -> f64 {
    let water: Vec<(isize, isize)> = neighbours(r, c).filter(|&(a, b)| !land(map, a, b)).collect();
    let mean = if water.is_empty() {
        0.0
    } else {
        water.iter().map(|&(a, b)| land_ratio(map, a, b)).sum::<f64>() / water.len() as f64
    };
    1.0 + alpha * land_ratio(map, r, c) + beta * mean
}

#[derive(PartialEq)]
struct Item(f64, usize);

impl Eq for Item {}

impl PartialOrd for Item {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Item {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then(other.1.cmp(&self.1))
    }
}

/// Single-source shortest path costs over the 8-connected water graph.
/// `penalty` of `(alpha, beta)` selects the land-proximity weighting.
pub fn dijkstra(map: &GeoMap, src: usize, penalty: Option<(f64, f64)>) -> Vec<f64> {
    let w = map.width();
    let mut dist = vec![f64::INFINITY; map.cells().len()];
    let mut heap = BinaryHeap::new();
    dist[src] = 0.0;
    heap.push(Item(0.0, src));
    while let Some(Item(d, i)) = heap.pop() {
        if d > dist[i] {
            continue;
        }
        let (r, c) = ((i / w) as isize, (i % w) as isize);
        for (a, b) in neighbours(r, c) {
            if land(map, a, b) {
                continue;
            }
            let step = if a != r && b != c { 2f64.sqrt() } else { 1.0 };
            let cost = match penalty {
                None => step,
                Some((alpha, beta)) => step * proximity_factor(map, a, b, alpha, beta),
            };
            let j = a as usize * w + b as usize;
            if d + cost < dist[j] {
                dist[j] = d + cost;
                heap.push(Item(dist[j], j));
            }
        }
    }
    dist
}

/// Brute-force supercover: every in-range cell whose closed square meets
/// the closed segment, found by Liang-Barsky clipping in grid space.
pub fn brute_supercover(map: &GeoMap, a: &Position, b: &Position, pad: isize) -> Vec<(isize, isize)> {
    let (ax, ay) = map.to_grid_space(a);
    let (bx, by) = map.to_grid_space(b);
    let mut out = Vec::new();
    for r in -pad..map.height() as isize + pad {
        for c in -pad..map.width() as isize + pad {
            if segment_meets_box(ax, ay, bx, by, c as f64, r as f64, c as f64 + 1.0, r as f64 + 1.0) {
                out.push((r, c));
            }
        }
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn segment_meets_box(ax: f64, ay: f64, bx: f64, by: f64, x0: f64, y0: f64, x1: f64, y1: f64) -> bool {
    let (dx, dy) = (bx - ax, by - ay);
    let (mut t0, mut t1) = (0.0f64, 1.0f64);
    for (p, q) in [(-dx, ax - x0), (dx, x1 - ax), (-dy, ay - y0), (dy, y1 - ay)] {
        if p == 0.0 {
            if q < 0.0 {
                return false;
            }
        } else {
            let t = q / p;
            if p < 0.0 {
                t0 = t0.max(t);
            } else {
                t1 = t1.min(t);
            }
        }
    }
    t0 <= t1
}

/// Distance from `p` to the closed segment `a`-`b`.
pub fn point_segment(p: &Position, a: &Position, b: &Position) -> f64 {
    let (dx, dy) = (b.lon - a.lon, b.lat - a.lat);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 { 0.0 } else { (((p.lon - a.lon) * dx + (p.lat - a.lat) * dy) / len2).clamp(0.0, 1.0) };
    (p.lon - a.lon - t * dx).hypot(p.lat - a.lat - t * dy)
}

/// Random map with a shortest path between two random connected water
/// cells, as cell-centre waypoints. `None` when the draw has no such pair.
pub fn random_route<R: Rng>(rng: &mut R, max_side: usize) -> Option<(GeoMap, Vec<Position>)> {
    use seanav::planner::{build_apsp, WeightMode};
    let map = random_map(rng, max_side, 0.3);
    let water = map.water_indices();
    if water.len() < 2 {
        return None;
    }
    let tables = build_apsp::<f64>(&map, WeightMode::Plain).ok()?;
    let a = map.cell_at(water[rng.random_range(0..water.len())]);
    let b = map.cell_at(water[rng.random_range(0..water.len())]);
    let path = tables.shortest_path(&map, a, b).ok()?;
    Some((map, path))
}

/// Water cells reachable from `src` by 8-connected breadth-first search.
pub fn bfs_reach(map: &GeoMap, src: usize) -> Vec<bool> {
    let w = map.width();
    let mut seen = vec![false; map.cells().len()];
    let mut queue = std::collections::VecDeque::from([src]);
    seen[src] = true;
    while let Some(i) = queue.pop_front() {
        for (a, b) in neighbours((i / w) as isize, (i % w) as isize) {
            if !land(map, a, b) {
                let j = a as usize * w + b as usize;
                if !seen[j] {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
    }
    seen
}
