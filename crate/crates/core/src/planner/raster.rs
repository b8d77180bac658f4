//! Supercover (all-touched) rasterization of segments onto the grid.

use crate::gridworld::{CellKind, GeoMap, Position};

/// Every cell `(row, col)` whose closed square touches the closed segment
/// `a`-`b`. Coordinates may fall outside the map (negative or past the
/// last row/column).
pub fn supercover(map: &GeoMap, a: &Position, b: &Position) -> Vec<(isize, isize)> {
    let (ax, ay) = map.to_grid_space(a);
    let (bx, by) = map.to_grid_space(b);
    let (x0, x1) = (ax.min(bx), ax.max(bx));
    let mut cells = Vec::new();
    let c_first = x0.ceil() as isize - 1;
    let c_last = x1.floor() as isize;
    for c in c_first..=c_last {
        // y-extent of the segment restricted to x in [c, c+1]
        let (ylo, yhi) = if (bx - ax).abs() < f64::EPSILON * (1.0 + ax.abs()) {
            (ay.min(by), ay.max(by))
        } else {
            let lo = (c as f64).max(x0);
            let hi = ((c + 1) as f64).min(x1);
            if lo > hi {
                continue;
            }
            let y_at = |x: f64| ay + (by - ay) * (x - ax) / (bx - ax);
            let (p, q) = (y_at(lo), y_at(hi));
            (p.min(q), p.max(q))
        };
        for r in (ylo.ceil() as isize - 1)..=(yhi.floor() as isize) {
            cells.push((r, c));
        }
    }
    cells
}

/// True when the segment touches land or leaves the map.
pub fn crosses_land(map: &GeoMap, a: &Position, b: &Position) -> bool {
    supercover(map, a, b).into_iter().any(|(r, c)| map.kind_or_land(r, c) == CellKind::Land)
}
