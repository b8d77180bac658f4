use std::io::Write;

use rand::Rng;
use thiserror::Error;

use crate::gridworld::{
    place_obstacles, sample_endpoints, CellKind, DestinationCircle, EndpointSampler, GeoMap, GridCell, ObstacleSet,
    Position, SampleError,
};
use crate::planner::{lardp, rdp, select_goal, ApspTables, IntermediateGoal, PlanError, Simplifier};

use super::action::{Action, ActionSpace};
use super::reward::{reward, shaping_scale};
use super::view::{make_local_view, LocalView};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Outcome {
    HitObstacle,
    HitLand,
    ArriveAtTarget,
    VanishTarget,
    NormalMovement,
}

impl Outcome {
    pub const ALL: [Outcome; 5] = [
        Outcome::HitObstacle,
        Outcome::HitLand,
        Outcome::ArriveAtTarget,
        Outcome::VanishTarget,
        Outcome::NormalMovement,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Outcome::HitObstacle => "hit_obstacle",
            Outcome::HitLand => "hit_land",
            Outcome::ArriveAtTarget => "arrive",
            Outcome::VanishTarget => "vanish",
            Outcome::NormalMovement => "normal",
        }
    }
}

#[derive(Debug, Error)]
pub enum EnvError {
    #[error("step called on a finished plan")]
    StepAfterTerminal,
    #[error("action {0:?} does not match the environment's action space")]
    WrongActionKind(Action),
    #[error(transparent)]
    Sample(#[from] SampleError),
    #[error(transparent)]
    Plan(#[from] PlanError),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnvConfig {
    /// Local view side in pixels (odd).
    pub view_size: usize,
    pub dest_radius: f64,
    pub max_dist: f64,
    pub n_obstacles: usize,
    pub episode_step_cap: usize,
    pub simplifier: Simplifier,
    pub simplify_threshold: f64,
    pub actions: ActionSpace,
    /// Shaping coefficient; `None` picks [`shaping_scale`] of the action limit.
    pub shaping: Option<f64>,
    pub max_sample_attempts: usize,
}

impl Default for EnvConfig {
    fn default() -> Self {
        Self {
            view_size: 51,
            dest_radius: 0.002,
            max_dist: 0.32,
            n_obstacles: 30,
            episode_step_cap: 200,
            simplifier: Simplifier::Lardp,
            simplify_threshold: 0.0025,
            actions: ActionSpace::Discrete { step_size: 0.001 },
            shaping: None,
            max_sample_attempts: 10_000,
        }
    }
}

impl EnvConfig {
    pub fn kappa(&self) -> f64 {
        self.shaping.unwrap_or_else(|| shaping_scale(self.actions.axis_limit()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Step {
    pub action: Action,
    pub outcome: Outcome,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Episode {
    pub start: Position,
    pub goal: IntermediateGoal,
    pub steps: Vec<Step>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FailReason {
    Outcome(Outcome),
    StepCap,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlanStatus {
    Running,
    Succeeded,
    Failed(FailReason),
}

/// Mutable state of one voyage.
#[derive(Clone, Debug)]
pub struct PlanContext {
    pub origin: Position,
    pub destination: DestinationCircle,
    pub waypoints: Vec<Position>,
    pub obstacles: ObstacleSet,
    obstacle_cells: Vec<GridCell>,
    agent: Position,
    next_waypoint: usize,
    episodes: Vec<Episode>,
    trajectory: Vec<(Position, Option<Outcome>)>,
    status: PlanStatus,
}

impl PlanContext {
    pub fn agent(&self) -> Position {
        self.agent
    }

    pub fn goal(&self) -> &IntermediateGoal {
        &self.episodes.last().expect("plan has an episode").goal
    }

    pub fn episodes(&self) -> &[Episode] {
        &self.episodes
    }

    pub fn status(&self) -> PlanStatus {
        self.status
    }

    pub fn is_running(&self) -> bool {
        self.status == PlanStatus::Running
    }

    pub fn total_steps(&self) -> usize {
        self.episodes.iter().map(|e| e.steps.len()).sum()
    }

    /// Writes the `t,lon,lat,outcome` log; row 0 is the origin.
    pub fn write_trajectory_csv(&self, mut w: impl Write) -> std::io::Result<()> {
        writeln!(w, "t,lon,lat,outcome")?;
        for (t, (p, o)) in self.trajectory.iter().enumerate() {
            let name = o.map_or("origin", Outcome::name);
            writeln!(w, "{t},{},{},{name}", p.lon, p.lat)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct StepResult {
    /// State to act from next; after reaching an intermediate goal it shows
    /// the following episode's goal.
    pub view: LocalView,
    pub reward: f64,
    pub outcome: Outcome,
    pub status: PlanStatus,
}

/// The simulator over one shared, immutable map and its planner tables.
pub struct VesselEnv<'a> {
    map: &'a GeoMap,
    apsp: &'a ApspTables<f64>,
    cfg: EnvConfig,
}

impl<'a> VesselEnv<'a> {
    pub fn new(map: &'a GeoMap, apsp: &'a ApspTables<f64>, cfg: EnvConfig) -> Self {
        Self { map, apsp, cfg }
    }

    pub fn config(&self) -> &EnvConfig {
        &self.cfg
    }

    pub fn map(&self) -> &GeoMap {
        self.map
    }

    /// Half-width of the view square in degrees. The goal centre stays
    /// within the rendered pixels for any agent position inside its cell.
    pub fn view_half(&self) -> f64 {
        ((self.cfg.view_size / 2) as f64 - 0.5) * self.map.cell_size()
    }

    /// Samples a new plan and returns its first state.
    pub fn reset_plan<R1: Rng + ?Sized, R2: Rng + ?Sized>(
        &self,
        endpoint_rng: &mut R1,
        obstacle_rng: &mut R2,
    ) -> Result<(LocalView, PlanContext), EnvError> {
        let sampler = EndpointSampler {
            max_dist: self.cfg.max_dist,
            radius: self.cfg.dest_radius,
            min_separation: self.cfg.dest_radius,
            max_attempts: self.cfg.max_sample_attempts,
        };
        let (origin, destination) = sample_endpoints(self.map, &sampler, &self.apsp.reach(self.map), endpoint_rng)?;
        let from = self.map.locate(&origin).expect("sampled on the map");
        let to = self.map.locate(&destination.center).expect("sampled on the map");
        let path = self.apsp.shortest_path(self.map, from, to)?;
        let waypoints = match self.cfg.simplifier {
            Simplifier::Rdp => rdp(&path, self.cfg.simplify_threshold),
            Simplifier::Lardp => lardp(&path, self.cfg.simplify_threshold, self.map),
        };
        let obstacles = place_obstacles(self.map, self.cfg.n_obstacles, &[origin, destination.center], obstacle_rng)?;
        let ctx = self.start_plan(origin, destination, waypoints, obstacles);
        Ok((self.observe(&ctx), ctx))
    }

    /// Builds a plan context from explicit endpoints and waypoints.
    pub fn start_plan(
        &self,
        origin: Position,
        destination: DestinationCircle,
        waypoints: Vec<Position>,
        obstacles: ObstacleSet,
    ) -> PlanContext {
        assert!(!waypoints.is_empty());
        let mut obstacle_cells: Vec<GridCell> = obstacles.positions.iter().filter_map(|p| self.map.locate(p)).collect();
        obstacle_cells.sort();
        let mut ctx = PlanContext {
            origin,
            destination,
            waypoints,
            obstacles,
            obstacle_cells,
            agent: origin,
            next_waypoint: 1,
            episodes: Vec::new(),
            trajectory: vec![(origin, None)],
            status: PlanStatus::Running,
        };
        let goal = self.next_goal(&mut ctx);
        ctx.episodes.push(Episode { start: origin, goal, steps: Vec::new() });
        ctx
    }

    fn is_final(&self, ctx: &PlanContext, goal: &IntermediateGoal) -> bool {
        goal.waypoint == Some(ctx.waypoints.len() - 1)
    }

    /// Selects the next goal, skipping waypoints the agent already sits on.
    fn next_goal(&self, ctx: &mut PlanContext) -> IntermediateGoal {
        loop {
            let goal =
                select_goal(&ctx.agent, self.view_half(), &ctx.waypoints, ctx.next_waypoint, self.cfg.dest_radius);
            match goal.waypoint {
                Some(i) if !self.is_final(ctx, &goal) && ctx.agent.distance(&goal.center) <= goal.radius => {
                    ctx.next_waypoint = i + 1;
                }
                _ => return goal,
            }
        }
    }

    pub fn observe(&self, ctx: &PlanContext) -> LocalView {
        make_local_view(self.map, &ctx.agent, ctx.goal(), &ctx.obstacles, self.cfg.view_size)
    }

    fn displacement(&self, action: Action) -> Result<(f64, f64), EnvError> {
        match (action, self.cfg.actions) {
            (Action::Discrete(h), ActionSpace::Discrete { step_size }) => {
                let (x, y) = h.unit();
                Ok((x * step_size, y * step_size))
            }
            (Action::Continuous(v), ActionSpace::Continuous { max_velocity }) => {
                let v = v.clamped(max_velocity);
                Ok((v.v_lon, v.v_lat))
            }
            _ => Err(EnvError::WrongActionKind(action)),
        }
    }

    /// Land test along the swept move, sampled at quarter-cell spacing.
    fn sweeps_land(&self, from: &Position, to: &Position) -> bool {
        let len = from.distance(to);
        let n = ((len / (self.map.cell_size() * 0.25)).ceil() as usize).max(1);
        (1..=n).any(|k| {
            let t = k as f64 / n as f64;
            let p = Position::new(from.lon + (to.lon - from.lon) * t, from.lat + (to.lat - from.lat) * t);
            match self.map.locate(&p) {
                Some(c) => self.map.kind(c) == CellKind::Land,
                None => true,
            }
        })
    }

    fn clamp_to_map(&self, p: Position) -> Position {
        let g = self.map.georef();
        Position::new(p.lon.clamp(g.origin_lon, self.map.max_lon()), p.lat.clamp(g.origin_lat, self.map.max_lat()))
    }

    pub fn step(&self, ctx: &mut PlanContext, action: Action) -> Result<StepResult, EnvError> {
        if !ctx.is_running() {
            return Err(EnvError::StepAfterTerminal);
        }
        let (dx, dy) = self.displacement(action)?;
        let prev = ctx.agent;
        let moved = Position::new(prev.lon + dx, prev.lat + dy);
        let goal = *ctx.goal();

        let outcome = if self.sweeps_land(&prev, &moved) {
            Outcome::HitLand
        } else if self.map.locate(&moved).is_some_and(|c| ctx.obstacle_cells.binary_search(&c).is_ok()) {
            Outcome::HitObstacle
        } else if moved.distance(&goal.center) <= goal.radius {
            Outcome::ArriveAtTarget
        } else if moved.chebyshev(&goal.center) > self.view_half() {
            Outcome::VanishTarget
        } else {
            Outcome::NormalMovement
        };

        let r = reward(&prev, &moved, &goal, outcome, self.cfg.kappa());
        ctx.agent = self.clamp_to_map(moved);
        ctx.trajectory.push((ctx.agent, Some(outcome)));
        let episode = ctx.episodes.last_mut().expect("plan has an episode");
        episode.steps.push(Step { action, outcome });
        let episode_len = episode.steps.len();

        ctx.status = match outcome {
            Outcome::ArriveAtTarget if self.is_final(ctx, &goal) => PlanStatus::Succeeded,
            Outcome::ArriveAtTarget => {
                if let Some(i) = goal.waypoint {
                    ctx.next_waypoint = i + 1;
                }
                let next = self.next_goal(ctx);
                ctx.episodes.push(Episode { start: ctx.agent, goal: next, steps: Vec::new() });
                PlanStatus::Running
            }
            Outcome::NormalMovement if episode_len >= self.cfg.episode_step_cap => {
                PlanStatus::Failed(FailReason::StepCap)
            }
            Outcome::NormalMovement => PlanStatus::Running,
            other => PlanStatus::Failed(FailReason::Outcome(other)),
        };

        Ok(StepResult { view: self.observe(ctx), reward: r, outcome, status: ctx.status })
    }
}
