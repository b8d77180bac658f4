use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use super::learner::checkpoint_field;
use super::streams::{stream, Stream};
use super::{ratd, HarnessError, Learner, TrainConfig};
use crate::env::{FailReason, Outcome, PlanStatus, VesselEnv};
use crate::gridworld::GeoMap;
use crate::neural::Checkpoint;
use crate::planner::ApspTables;

pub const METRICS_HEADER: &str = "batch,ratd_test,mean_plan_steps,arrive,hit_land,hit_obstacle,vanish,step_cap";

/// Test results after one training batch.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct MetricsRow {
    pub batch: usize,
    pub ratd: f64,
    pub mean_plan_steps: f64,
    pub arrive: usize,
    pub hit_land: usize,
    pub hit_obstacle: usize,
    pub vanish: usize,
    pub step_cap: usize,
}

impl MetricsRow {
    fn record(&mut self, status: PlanStatus) {
        match status {
            PlanStatus::Succeeded => self.arrive += 1,
            PlanStatus::Failed(FailReason::StepCap) => self.step_cap += 1,
            PlanStatus::Failed(FailReason::Outcome(Outcome::HitLand)) => self.hit_land += 1,
            PlanStatus::Failed(FailReason::Outcome(Outcome::HitObstacle)) => self.hit_obstacle += 1,
            PlanStatus::Failed(FailReason::Outcome(_)) => self.vanish += 1,
            PlanStatus::Running => unreachable!("plan finished"),
        }
    }

    pub fn plans(&self) -> usize {
        self.arrive + self.hit_land + self.hit_obstacle + self.vanish + self.step_cap
    }

    pub fn csv_line(&self) -> String {
        format!(
            "{},{:.4},{:.4},{},{},{},{},{}",
            self.batch,
            self.ratd,
            self.mean_plan_steps,
            self.arrive,
            self.hit_land,
            self.hit_obstacle,
            self.vanish,
            self.step_cap
        )
    }
}

pub fn write_metrics_csv(rows: &[MetricsRow], path: &Path) -> Result<(), HarnessError> {
    let mut s = String::from(METRICS_HEADER);
    s.push('\n');
    for r in rows {
        let _ = writeln!(s, "{}", r.csv_line());
    }
    fs::write(path, s)?;
    Ok(())
}

/// Batch with the highest test RATD; ties go to the earliest.
pub fn best_batch(rows: &[MetricsRow]) -> Option<usize> {
    rows.iter()
        .enumerate()
        .fold(None, |best: Option<(usize, f64)>, (i, r)| match best {
            Some((_, b)) if b >= r.ratd => best,
            _ => Some((i, r.ratd)),
        })
        .map(|(i, _)| rows[i].batch)
}

#[derive(Clone, Debug)]
pub struct TrainReport {
    pub rows: Vec<MetricsRow>,
    pub best: usize,
    pub learner: Learner,
}

/// Runs the fixed test set greedily. Plan `i` draws its endpoints and
/// obstacles from its own sub-streams, so the set is identical for every
/// batch and for a later evaluation under the same seed.
fn run_tests(
    env: &VesselEnv,
    learner: &Learner,
    n_plans: usize,
    seed: u64,
    batch: usize,
) -> Result<MetricsRow, HarnessError> {
    let mut row = MetricsRow { batch, ..MetricsRow::default() };
    let mut steps = 0;
    for i in 0..n_plans {
        let id = u32::try_from(i).map_err(|_| HarnessError::Config("too many test plans".into()))?;
        let (mut view, mut ctx) =
            env.reset_plan(&mut stream(seed, Stream::TestEndpoints(id)), &mut stream(seed, Stream::TestObstacles(id)))?;
        while ctx.is_running() {
            view = env.step(&mut ctx, learner.act_greedy(&view)?)?.view;
        }
        steps += ctx.total_steps();
        row.record(ctx.status());
    }
    row.ratd = ratd(row.arrive, n_plans)?;
    row.mean_plan_steps = steps as f64 / n_plans as f64;
    Ok(row)
}

/// Trains one agent batch by batch, testing after each batch.
///
/// With `out` set, writes `checkpoint_<batch>.bin` per batch, `metrics.csv`
/// and `best.txt` naming the highest-RATD batch.
pub fn train(
    cfg: &TrainConfig,
    map: &GeoMap,
    tables: &ApspTables,
    out: Option<&Path>,
) -> Result<TrainReport, HarnessError> {
    cfg.validate()?;
    let env = VesselEnv::new(map, tables, cfg.env_config());
    let view_size = env.config().view_size;
    let mut endpoints = stream(cfg.seed, Stream::Endpoints);
    let mut obstacles = stream(cfg.seed, Stream::Obstacles);
    let mut explore = stream(cfg.seed, Stream::Exploration);
    let mut replay = stream(cfg.seed, Stream::Replay);
    let mut learner = Learner::new(cfg.agent, view_size, cfg.replay_capacity, &mut stream(cfg.seed, Stream::Init))?;
    if let Some(dir) = out {
        fs::create_dir_all(dir)?;
    }

    let mut rows = Vec::with_capacity(cfg.batches);
    let (mut pn, mut env_steps) = (0u64, 0usize);
    for batch in 0..cfg.batches {
        for _ in 0..cfg.train_plans {
            let epsilon = cfg.exploration.value(pn);
            learner.begin_plan();
            let (view, mut ctx) = env.reset_plan(&mut endpoints, &mut obstacles)?;
            let mut state = Arc::new(view);
            while ctx.is_running() {
                let action = learner.act_explore(&state, epsilon, &mut explore)?;
                let res = env.step(&mut ctx, action)?;
                let next = Arc::new(res.view);
                // every non-normal outcome closes an episode; a step cap does not
                let terminal = res.outcome != Outcome::NormalMovement;
                learner.remember(state, action, res.reward, Arc::clone(&next), terminal)?;
                env_steps += 1;
                if env_steps % cfg.train_every == 0 {
                    learner.train_step(&mut replay)?;
                }
                state = next;
            }
            pn += 1;
        }
        let row = run_tests(&env, &learner, cfg.test_plans, cfg.seed, batch)?;
        rows.push(row);
        if let Some(dir) = out {
            learner.checkpoint(&format!("batch={batch}")).save(&dir.join(format!("checkpoint_{batch}.bin")))?;
            write_metrics_csv(&rows, &dir.join("metrics.csv"))?;
        }
    }
    let best = best_batch(&rows).expect("at least one batch");
    if let Some(dir) = out {
        let r = &rows[best];
        fs::write(
            dir.join("best.txt"),
            format!("batch={best}\nratd_test={:.4}\ncheckpoint=checkpoint_{best}.bin\n", r.ratd),
        )?;
    }
    Ok(TrainReport { rows, best, learner })
}

/// Greedy evaluation of a saved agent over `cfg.test_plans` plans on `map`.
///
/// The agent kind comes from the checkpoint; the rest of the environment
/// setup and the seed come from `cfg`. With the training seed and map this
/// replays the saved batch's test row exactly.
pub fn evaluate(
    ck: &Checkpoint,
    cfg: &TrainConfig,
    map: &GeoMap,
    tables: &ApspTables,
) -> Result<MetricsRow, HarnessError> {
    let probe = TrainConfig::default().env_config();
    let learner = Learner::from_checkpoint(ck, probe.view_size, 1)?;
    let cfg = TrainConfig { agent: learner.kind(), ..*cfg };
    cfg.validate()?;
    let env = VesselEnv::new(map, tables, cfg.env_config());
    let batch = checkpoint_field(ck, "batch").and_then(|b| b.parse().ok()).unwrap_or(0);
    run_tests(&env, &learner, cfg.test_plans, cfg.seed, batch)
}
