use std::collections::VecDeque;

use super::{GeoMap, GridCell, Reachability};

/// 8-connected labelling of the water cells.
#[derive(Clone, Debug)]
pub struct WaterComponents {
    width: usize,
    labels: Vec<Option<u32>>,
    sizes: Vec<usize>,
}

pub(crate) const NEIGHBORS_8: [(isize, isize); 8] =
    [(-1, 0), (-1, 1), (0, 1), (1, 1), (1, 0), (1, -1), (0, -1), (-1, -1)];

impl WaterComponents {
    pub fn label(map: &GeoMap) -> Self {
        let (w, h) = (map.width(), map.height());
        let mut labels = vec![None; w * h];
        let mut sizes = Vec::new();
        let mut queue = VecDeque::new();
        for &start in map.water_indices() {
            if labels[start].is_some() {
                continue;
            }
            let id = sizes.len() as u32;
            let mut size = 0;
            labels[start] = Some(id);
            queue.push_back(start);
            while let Some(i) = queue.pop_front() {
                size += 1;
                let (r, c) = ((i / w) as isize, (i % w) as isize);
                for (dr, dc) in NEIGHBORS_8 {
                    let (nr, nc) = (r + dr, c + dc);
                    if nr < 0 || nc < 0 || nr >= h as isize || nc >= w as isize {
                        continue;
                    }
                    let j = nr as usize * w + nc as usize;
                    if labels[j].is_none() && map.cells()[j] == super::CellKind::Water {
                        labels[j] = Some(id);
                        queue.push_back(j);
                    }
                }
            }
            sizes.push(size);
        }
        Self { width: w, labels, sizes }
    }

    pub fn component_of(&self, cell: GridCell) -> Option<u32> {
        self.labels[cell.row * self.width + cell.col]
    }

    pub fn count(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Label of the component with the most cells (lowest label on ties).
    pub fn largest(&self) -> Option<u32> {
        let mut best: Option<(u32, usize)> = None;
        for (i, &s) in self.sizes.iter().enumerate() {
            if best.is_none_or(|(_, bs)| s > bs) {
                best = Some((i as u32, s));
            }
        }
        best.map(|(i, _)| i)
    }
}

impl Reachability for WaterComponents {
    fn reachable(&self, a: GridCell, b: GridCell) -> bool {
        match (self.component_of(a), self.component_of(b)) {
            (Some(x), Some(y)) => x == y,
            _ => false,
        }
    }
}
