use crate::gridworld::{CellKind, GeoMap, ObstacleSet, Position};
use crate::image::BitImage;
use crate::planner::IntermediateGoal;

/// Agent-centred multi-channel window over the map.
pub type LocalView = BitImage;

pub const LAND: usize = 0;
pub const WATER: usize = 1;
pub const OBSTACLE: usize = 2;
pub const GOAL: usize = 3;

/// Renders a `size x size` view (odd `size`) with the agent's cell at the
/// centre pixel. Pixel `(r, c)` shows the cell at
/// `agent_cell + (r - size/2, c - size/2)`; cells beyond the map are land.
pub fn make_local_view(
    map: &GeoMap,
    agent: &Position,
    goal: &IntermediateGoal,
    obstacles: &ObstacleSet,
    size: usize,
) -> LocalView {
    let agent_cell = map.locate(agent).expect("agent must be inside the map to render its view");
    let half = (size / 2) as isize;
    let (ar, ac) = (agent_cell.row as isize, agent_cell.col as isize);
    let mut img = BitImage::new(size, 4);
    for r in 0..size {
        for c in 0..size {
            let kind = map.kind_or_land(ar + r as isize - half, ac + c as isize - half);
            let ch = if kind == CellKind::Land { LAND } else { WATER };
            img.set(r, c, ch, true);
        }
    }
    let to_pixel = |row: usize, col: usize| -> Option<(usize, usize)> {
        let pr = row as isize - ar + half;
        let pc = col as isize - ac + half;
        (pr >= 0 && pc >= 0 && pr < size as isize && pc < size as isize).then_some((pr as usize, pc as usize))
    };
    for p in &obstacles.positions {
        if let Some(cell) = map.locate(p) {
            if let Some((r, c)) = to_pixel(cell.row, cell.col) {
                img.set(r, c, OBSTACLE, true);
            }
        }
    }
    // goal disc: pixels whose cell centre lies within the radius
    let cs = map.cell_size();
    let (gx, gy) = map.to_grid_space(&goal.center);
    let reach = (goal.radius / cs).ceil() as isize + 1;
    let (gr, gc) = (gy.floor() as isize, gx.floor() as isize);
    for row in gr - reach..=gr + reach {
        for col in gc - reach..=gc + reach {
            let (pr, pc) = (row - ar + half, col - ac + half);
            if pr < 0 || pc < 0 || pr >= size as isize || pc >= size as isize {
                continue;
            }
            if map.cell_center_signed(row, col).distance(&goal.center) <= goal.radius * (1.0 + 1e-9) {
                img.set(pr as usize, pc as usize, GOAL, true);
            }
        }
    }
    img
}
