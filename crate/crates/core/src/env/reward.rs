use crate::gridworld::Position;
use crate::planner::IntermediateGoal;

use super::Outcome;

/// Default shaping coefficient: the inverse of the longest possible move
/// (a diagonal at the per-axis limit), which keeps shaping in `[-1, 1]`.
pub fn shaping_scale(axis_limit: f64) -> f64 {
    1.0 / (axis_limit * std::f64::consts::SQRT_2)
}

/// Terminal outcomes earn +1/-1; a normal move earns `kappa` times the
/// decrease in distance to the goal center.
pub fn reward(prev: &Position, next: &Position, goal: &IntermediateGoal, outcome: Outcome, kappa: f64) -> f64 {
    match outcome {
        Outcome::ArriveAtTarget => 1.0,
        Outcome::HitLand | Outcome::HitObstacle | Outcome::VanishTarget => -1.0,
        Outcome::NormalMovement => kappa * (prev.distance(&goal.center) - next.distance(&goal.center)),
    }
}
