use crate::gridworld::{CellKind, GeoMap, GridCell, Position, Reachability};
use crate::scalar::Real;

use super::PlanError;

const NONE: u32 = u32::MAX;

const STEPS: [(isize, isize); 8] = [(-1, 0), (-1, 1), (0, 1), (1, 1), (1, 0), (1, -1), (0, -1), (-1, -1)];

/// Edge weighting for the water graph.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WeightMode {
    /// Euclidean cell-center distance (1 or sqrt 2 in cell units).
    Plain,
    /// Distance scaled by a land-proximity penalty on the entered cell:
    /// `d * (1 + alpha * land(B) + beta * mean_{n in water nbrs of B} land(n))`,
    /// where `land(c)` is the fraction of land among the 8 neighbours of `c`
    /// (cells beyond the map edge count as land).
    Modified { alpha: f64, beta: f64 },
}

impl WeightMode {
    pub fn modified() -> Self {
        WeightMode::Modified { alpha: 2.0, beta: 2.0 }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            WeightMode::Plain => "plain",
            WeightMode::Modified { .. } => "modified",
        }
    }
}

fn land_fraction(map: &GeoMap, r: isize, c: isize) -> f64 {
    let land = STEPS.iter().filter(|(dr, dc)| map.kind_or_land(r + dr, c + dc) == CellKind::Land).count();
    land as f64 / 8.0
}

/// Directed weighted edges of the 8-connected water graph as
/// `(from_flat_index, to_flat_index, weight)` in cell units.
pub fn edge_list(map: &GeoMap, mode: WeightMode) -> Vec<(usize, usize, f64)> {
    let penalty: Vec<f64> = match mode {
        WeightMode::Plain => Vec::new(),
        WeightMode::Modified { alpha, beta } => {
            let w = map.width();
            let frac: Vec<f64> =
                (0..map.cells().len()).map(|i| land_fraction(map, (i / w) as isize, (i % w) as isize)).collect();
            (0..map.cells().len())
                .map(|i| {
                    let (r, c) = ((i / w) as isize, (i % w) as isize);
                    let (mut sum, mut n) = (0.0, 0usize);
                    for (dr, dc) in STEPS {
                        if map.kind_or_land(r + dr, c + dc) == CellKind::Water {
                            sum += frac[(r + dr) as usize * w + (c + dc) as usize];
                            n += 1;
                        }
                    }
                    let mean = if n == 0 { 0.0 } else { sum / n as f64 };
                    1.0 + alpha * frac[i] + beta * mean
                })
                .collect()
        }
    };
    let mut edges = Vec::new();
    for &i in map.water_indices() {
        let cell = map.cell_at(i);
        let (r, c) = (cell.row as isize, cell.col as isize);
        for (dr, dc) in STEPS {
            if map.kind_or_land(r + dr, c + dc) != CellKind::Water {
                continue;
            }
            let j = map.index(GridCell::new((r + dr) as usize, (c + dc) as usize));
            let base = if dr != 0 && dc != 0 { std::f64::consts::SQRT_2 } else { 1.0 };
            let w = if penalty.is_empty() { base } else { base * penalty[j] };
            edges.push((i, j, w));
        }
    }
    edges
}

/// Floyd-Warshall tables over the water cells of one map.
#[derive(Clone, Debug, PartialEq)]
pub struct ApspTables<T: Real = f64> {
    pub(super) mode: WeightMode,
    pub(super) map_hash: String,
    pub(super) grid_len: usize,
    /// Flat grid index of each node.
    pub(super) nodes: Vec<u32>,
    /// Node id of each flat grid index, `NONE` for land.
    pub(super) node_of: Vec<u32>,
    pub(super) dist: Vec<T>,
    pub(super) next: Vec<u32>,
}

pub fn build_apsp<T: Real>(map: &GeoMap, mode: WeightMode) -> Result<ApspTables<T>, PlanError> {
    let nodes: Vec<u32> = map.water_indices().iter().map(|&i| i as u32).collect();
    let n = nodes.len();
    if n == 0 {
        return Err(PlanError::NoWater);
    }
    let mut node_of = vec![NONE; map.cells().len()];
    for (k, &i) in nodes.iter().enumerate() {
        node_of[i as usize] = k as u32;
    }
    let mut dist = vec![T::infinity(); n * n];
    let mut next = vec![NONE; n * n];
    for k in 0..n {
        dist[k * n + k] = T::zero();
        next[k * n + k] = k as u32;
    }
    for (i, j, w) in edge_list(map, mode) {
        let (a, b) = (node_of[i] as usize, node_of[j] as usize);
        let w = T::lit(w);
        if w < dist[a * n + b] {
            dist[a * n + b] = w;
            next[a * n + b] = b as u32;
        }
    }

    let mut row_k = vec![T::zero(); n];
    for k in 0..n {
        row_k.copy_from_slice(&dist[k * n..(k + 1) * n]);
        for i in 0..n {
            let d_ik = dist[i * n + k];
            if !d_ik.is_finite() || i == k {
                continue;
            }
            let hop = next[i * n + k];
            let d_row = &mut dist[i * n..(i + 1) * n];
            let n_row = &mut next[i * n..(i + 1) * n];
            for j in 0..n {
                let cand = d_ik + row_k[j];
                if cand < d_row[j] {
                    d_row[j] = cand;
                    n_row[j] = hop;
                }
            }
        }
    }

    Ok(ApspTables { mode, map_hash: map.content_hash(), grid_len: map.cells().len(), nodes, node_of, dist, next })
}

impl<T: Real> ApspTables<T> {
    pub fn mode(&self) -> WeightMode {
        self.mode
    }

    pub fn map_hash(&self) -> &str {
        &self.map_hash
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    fn node(&self, map: &GeoMap, cell: GridCell) -> Result<usize, PlanError> {
        match self.node_of.get(map.index(cell)) {
            Some(&k) if k != NONE => Ok(k as usize),
            _ => Err(PlanError::NotWater { row: cell.row, col: cell.col }),
        }
    }

    /// Path cost in cell units; infinite when unreachable.
    pub fn distance(&self, map: &GeoMap, from: GridCell, to: GridCell) -> Result<T, PlanError> {
        let n = self.nodes.len();
        Ok(self.dist[self.node(map, from)? * n + self.node(map, to)?])
    }

    /// Cells along the shortest path, both endpoints included.
    pub fn path_cells(&self, map: &GeoMap, from: GridCell, to: GridCell) -> Result<Vec<GridCell>, PlanError> {
        let n = self.nodes.len();
        let (mut a, b) = (self.node(map, from)?, self.node(map, to)?);
        if !self.dist[a * n + b].is_finite() {
            return Err(PlanError::Unreachable);
        }
        let mut cells = vec![from];
        while a != b {
            a = self.next[a * n + b] as usize;
            cells.push(map.cell_at(self.nodes[a] as usize));
        }
        Ok(cells)
    }

    /// Shortest path as cell-center waypoints.
    pub fn shortest_path(&self, map: &GeoMap, from: GridCell, to: GridCell) -> Result<Vec<Position>, PlanError> {
        Ok(self.path_cells(map, from, to)?.into_iter().map(|c| map.cell_center(c)).collect())
    }
}

/// Answers reachability for cells of the map the tables were built from.
pub struct ApspReach<'a, T: Real> {
    pub map: &'a GeoMap,
    pub tables: &'a ApspTables<T>,
}

impl<T: Real> ApspTables<T> {
    pub fn reach<'a>(&'a self, map: &'a GeoMap) -> ApspReach<'a, T> {
        ApspReach { map, tables: self }
    }
}

impl<T: Real> Reachability for ApspReach<'_, T> {
    fn reachable(&self, a: GridCell, b: GridCell) -> bool {
        self.tables.distance(self.map, a, b).is_ok_and(|d| d.is_finite())
    }
}
