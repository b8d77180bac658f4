//! The vessel simulator: plan/episode/step lifecycle, local-view states,
//! action kinematics, outcomes and reward.

mod action;
mod reward;
mod sim;
mod view;

pub use action::{Action, ActionSpace, Heading, Velocity};
pub use reward::{reward, shaping_scale};
pub use sim::{
    EnvConfig, EnvError, Episode, FailReason, Outcome, PlanContext, PlanStatus, Step, StepResult, VesselEnv,
};
pub use view::{make_local_view, LocalView, GOAL, LAND, OBSTACLE, WATER};
