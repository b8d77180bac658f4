use crate::gridworld::Position;

/// Per-episode target circle inside the local view.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntermediateGoal {
    pub center: Position,
    pub radius: f64,
    /// Waypoint the goal sits on; `None` for a view-boundary goal.
    pub waypoint: Option<usize>,
}

/// Chooses the intermediate goal among `waypoints[first_remaining..]`.
///
/// * one remaining waypoint inside the closed view square: that point;
/// * several inside: the one farthest from the agent (later index on ties);
/// * none inside: where the segment from the agent to the nearest remaining
///   waypoint leaves the view square.
pub fn select_goal(
    agent: &Position,
    view_half: f64,
    waypoints: &[Position],
    first_remaining: usize,
    radius: f64,
) -> IntermediateGoal {
    assert!(!waypoints.is_empty(), "select_goal needs at least one waypoint");
    let start = first_remaining.min(waypoints.len() - 1);
    let remaining = &waypoints[start..];

    let mut farthest: Option<(usize, f64)> = None;
    for (k, w) in remaining.iter().enumerate() {
        if agent.chebyshev(w) <= view_half {
            let d = agent.distance(w);
            if farthest.is_none_or(|(_, best)| d >= best) {
                farthest = Some((start + k, d));
            }
        }
    }
    if let Some((i, _)) = farthest {
        return IntermediateGoal { center: waypoints[i], radius, waypoint: Some(i) };
    }

    let mut nearest = (start, f64::INFINITY);
    for (k, w) in remaining.iter().enumerate() {
        let d = agent.distance(w);
        if d < nearest.1 {
            nearest = (start + k, d);
        }
    }
    let target = waypoints[nearest.0];
    let (dx, dy) = (target.lon - agent.lon, target.lat - agent.lat);
    let t = view_half / dx.abs().max(dy.abs());
    let center = Position { lon: agent.lon + t * dx, lat: agent.lat + t * dy };
    IntermediateGoal { center, radius, waypoint: None }
}
