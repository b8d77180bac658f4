//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
//! and exits non-zero when any fails.

mod common;

use std::fs;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use common::grad::{agent_suite, layer_suite};
use common::{brute_supercover, dijkstra, point_segment, random_map, random_route};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use seanav::agents::{
    rotate_transition, store_with_sar, ExplorationSchedule, ReplayBuffer, Rotate, TargetSync, Transition,
};
use seanav::env::{Heading, Velocity};
use seanav::gridworld::procedural::{generate, ProceduralConfig};
use seanav::gridworld::{CellKind, GeoMap, Georef, Position};
use seanav::harness::{
    density_map, evaluate, ratd, toy_experiment, train, write_metrics_csv, AgentKind, ToyConfig, ToyVariant,
    TrainConfig,
};
use seanav::image::BitImage;
use seanav::neural::Checkpoint;
use seanav::planner::{build_apsp, lardp, rdp, rdp_keep, ApspTables, WeightMode};
use seanav::toy::{ToyAction, ToyKind};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

fn toy_ablation() -> Outcome {
    let start = Instant::now();
    let seeds = [0u64, 1, 2];
    let mut best_h = [vec![], vec![]];
    let mut last_v = [vec![], vec![]];
    let mut last_d = [vec![], vec![]];
    let cfg = ToyConfig::default();
    for &seed in &seeds {
        let rows = toy_experiment(&ToyConfig { seed, ..cfg.clone() }).map_err(|e| e.to_string())?;
        for (k, variant) in [ToyVariant::Dqn, ToyVariant::DqnSar].into_iter().enumerate() {
            let pick = |kind: ToyKind| rows.iter().filter(move |r| r.variant == variant && r.kind == kind);
            best_h[k].push(pick(ToyKind::Horizontal).map(|r| r.ratd).fold(0.0, f64::max));
            last_v[k].push(pick(ToyKind::Vertical).next_back().unwrap().ratd);
            last_d[k].push(pick(ToyKind::Diagonal).next_back().unwrap().ratd);
        }
    }
    let elapsed = start.elapsed();
    let h = [median(best_h[0].clone()), median(best_h[1].clone())];
    let v = [median(last_v[0].clone()), median(last_v[1].clone())];
    let d = [median(last_d[0].clone()), median(last_d[1].clone())];
    let detail = format!(
        "horizontal best {:.0}/{:.0}, final vertical {:.0}/{:.0}, final diagonal {:.0}/{:.0} (dqn/dqn+sar medians), {:.0}s",
        h[0], h[1], v[0], v[1], d[0], d[1], elapsed.as_secs_f64()
    );
    let ok = h[0] >= 80.0
        && h[1] >= 80.0
        && v[1] - v[0] >= 15.0
        && d[1] - d[0] >= 15.0
        && elapsed < Duration::from_secs(1800);
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn planner_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut pairs = 0usize;
    for m in 0..200 {
        let land = rng.random_range(0.1..0.45);
        let map = random_map(&mut rng, 25, land);
        for (mode, penalty) in [(WeightMode::Plain, None), (WeightMode::modified(), Some((2.0, 2.0)))] {
            let Ok(tables) = build_apsp::<f64>(&map, mode) else {
                ensure(map.water_indices().is_empty(), || format!("map {m}: build failed with water present"))?;
                continue;
            };
            let water = map.water_indices();
            for _ in 0..20 {
                let s = water[rng.random_range(0..water.len())];
                let oracle = dijkstra(&map, s, penalty);
                let t = water[rng.random_range(0..water.len())];
                if oracle[t].is_infinite() {
                    continue;
                }
                let d = tables.distance(&map, map.cell_at(s), map.cell_at(t)).map_err(|e| e.to_string())?;
                ensure((d - oracle[t]).abs() <= 1e-9 * oracle[t].max(1.0), || {
                    format!("map {m} {}: {d} vs dijkstra {}", mode.tag(), oracle[t])
                })?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} reachable pairs over 200 maps, both weightings"))
}

fn simplification() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for i in 0..1000 {
        let n = rng.random_range(0..60);
        let pts: Vec<Position> =
            (0..n).map(|_| Position::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
        let threshold = rng.random_range(0.0..0.5);
        let keep = rdp_keep(&pts, threshold);
        for w in keep.windows(2) {
            for p in &pts[w[0]..=w[1]] {
                let dev = point_segment(p, &pts[w[0]], &pts[w[1]]);
                ensure(dev <= threshold + 1e-12, || format!("polyline {i}: deviation {dev} > {threshold}"))?;
            }
        }
        let once = rdp(&pts, threshold);
        ensure(rdp(&once, threshold) == once, || format!("polyline {i}: rdp not idempotent"))?;
    }
    let mut routes = 0;
    while routes < 1000 {
        let Some((map, path)) = random_route(&mut rng, 25) else { continue };
        let threshold = rng.random_range(0.0..5.0);
        let plain = rdp(&path, threshold);
        let aware = lardp(&path, threshold, &map);
        ensure(plain.iter().all(|p| aware.contains(p)), || format!("route {routes}: lardp misses an rdp point"))?;
        for w in aware.windows(2) {
            let i = path.iter().position(|p| p == &w[0]).unwrap();
            let j = path.iter().position(|p| p == &w[1]).unwrap();
            // consecutive path cells may cut a land corner diagonally; only
            // chords that skip points are simplifier output
            if j > i + 1 {
                let land = brute_supercover(&map, &w[0], &w[1], 1)
                    .into_iter()
                    .any(|(r, c)| map.kind_or_land(r, c) == CellKind::Land);
                ensure(!land, || format!("route {routes}: chord {i}->{j} touches land"))?;
            }
        }
        routes += 1;
    }
    Ok("1000 random polylines for rdp, 1000 planner routes for lardp".into())
}

fn random_image(rng: &mut ChaCha8Rng, side: usize) -> Arc<BitImage> {
    let mut img = BitImage::new(side, 4);
    for r in 0..side {
        for c in 0..side {
            img.set_pixel_bits(r, c, rng.random::<u8>() & 0x0f);
        }
    }
    Arc::new(img)
}

fn check_group<A: Clone + Rotate + PartialEq>(t: &Transition<A>) -> Result<(), String> {
    let mut r = t.clone();
    for _ in 0..4 {
        r = rotate_transition(&r, 1);
    }
    ensure(&r == t, || "four quarter turns are not the identity".into())?;
    for a in 0..4u8 {
        for b in 0..4u8 {
            let lhs = rotate_transition(&rotate_transition(t, a), b);
            ensure(lhs == rotate_transition(t, (a + b) % 4), || format!("turns {a}+{b} do not compose"))?;
        }
    }
    let mut buf = ReplayBuffer::new(64);
    for k in 1..=3 {
        store_with_sar(&mut buf, t.clone(), 3);
        ensure(buf.len() == 4 * k, || format!("buffer holds {} after {k} calls", buf.len()))?;
    }
    Ok(())
}

fn sar_algebra() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for i in 0..1000 {
        let side = rng.random_range(1..16);
        let (s, n) = (random_image(&mut rng, side), random_image(&mut rng, side));
        let reward = rng.random_range(-1.0..1.0);
        let terminal = rng.random_bool(0.3);
        let heading = Heading::from_index(rng.random_range(0..8));
        let velocity = Velocity::new(rng.random_range(-0.001..0.001), rng.random_range(-0.001..0.001));
        let toy = ToyAction::ALL[rng.random_range(0..4)];
        fn make<A>(s: &Arc<BitImage>, n: &Arc<BitImage>, action: A, reward: f64, terminal: bool) -> Transition<A> {
            Transition { state: Arc::clone(s), action, reward, next_state: Arc::clone(n), terminal }
        }
        match i % 3 {
            0 => check_group(&make(&s, &n, heading, reward, terminal)),
            1 => check_group(&make(&s, &n, velocity, reward, terminal)),
            _ => check_group(&make(&s, &n, toy, reward, terminal)),
        }
        .map_err(|e| format!("transition {i}: {e}"))?;
    }
    Ok("1000 transitions across heading, velocity and toy actions".into())
}

fn gradients() -> Outcome {
    for seed in 0..20 {
        layer_suite(seed)?;
        agent_suite(seed)?;
    }
    Ok("all layer types and agent networks, 20 seeds".into())
}

fn schedules() -> Outcome {
    let e = ExplorationSchedule::default();
    ensure(e.value(0) == 1.0, || format!("e(0) = {}", e.value(0)))?;
    ensure((e.value(10_000) - 0.55).abs() < 1e-12, || format!("e(10000) = {}", e.value(10_000)))?;
    for pn in [20_000, 20_001, 35_000, 1_000_000] {
        ensure((e.value(pn) - 0.1).abs() < 1e-12, || format!("e({pn}) = {}", e.value(pn)))?;
    }
    let r = ratd(85, 100).map_err(|e| e.to_string())?;
    ensure(r == 85.0, || format!("ratd(85, 100) = {r}"))?;
    let mut sync = TargetSync::new(200);
    for step in 1..=10_000u64 {
        ensure(sync.tick() == (step % 200 == 0), || format!("sync wrong at step {step}"))?;
    }
    Ok("e(pn), ratd and target sync".into())
}

fn procedural(seed: u64) -> GeoMap {
    generate(
        &ProceduralConfig { width: 40, height: 40, ..ProceduralConfig::default() },
        &mut ChaCha8Rng::seed_from_u64(seed),
    )
}

fn density_trend() -> Outcome {
    // coarse cells so that 0.32 degrees spans most of the map
    let georef = Georef { cell_size: 0.005, ..Georef::default() };
    let cfg = ProceduralConfig { width: 70, height: 70, georef, ..ProceduralConfig::default() };
    let map = generate(&cfg, &mut ChaCha8Rng::seed_from_u64(7));
    let tables: ApspTables = build_apsp(&map, WeightMode::Plain).map_err(|e| e.to_string())?;
    let mut counts = Vec::new();
    for max_dist in [0.01, 0.08, 0.32] {
        counts.push(density_map(&map, &tables, 1000, max_dist, 0).map_err(|e| e.to_string())?.distinct_cells());
    }
    let detail = format!("distinct cells {counts:?} for max_dist 0.01/0.08/0.32");
    if counts[0] <= counts[1] && counts[1] <= counts[2] && counts[2] > counts[0] {
        Ok(detail)
    } else {
        Err(detail)
    }
}

const C8_MAP_A: u64 = 11;
const C8_MAP_B: u64 = 12;

fn cross_map() -> Outcome {
    let start = Instant::now();
    let (a, b) = (procedural(C8_MAP_A), procedural(C8_MAP_B));
    let ta: ApspTables = build_apsp(&a, WeightMode::Plain).map_err(|e| e.to_string())?;
    let tb: ApspTables = build_apsp(&b, WeightMode::Plain).map_err(|e| e.to_string())?;
    let mut scores = [vec![], vec![]];
    for seed in 0..3u64 {
        for (k, agent) in [AgentKind::C1, AgentKind::C2].into_iter().enumerate() {
            let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
            let cfg = TrainConfig { agent, batches: 4, train_plans: 200, seed, ..TrainConfig::default() };
            let report = train(&cfg, &a, &ta, Some(dir.path())).map_err(|e| e.to_string())?;
            let ck = Checkpoint::load(&dir.path().join(format!("checkpoint_{}.bin", report.best)))
                .map_err(|e| e.to_string())?;
            let eval = TrainConfig { test_plans: 200, ..cfg };
            scores[k].push(evaluate(&ck, &eval, &b, &tb).map_err(|e| e.to_string())?.ratd);
        }
    }
    let (c1, c2) = (median(scores[0].clone()), median(scores[1].clone()));
    let detail = format!(
        "map B RATD c1 {:?} c2 {:?}, medians {c1:.1} vs {c2:.1}, {:.0}s",
        scores[0],
        scores[1],
        start.elapsed().as_secs_f64()
    );
    if c2 >= c1 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn determinism() -> Outcome {
    let map = procedural(3);
    let tables: ApspTables = build_apsp(&map, WeightMode::modified()).map_err(|e| e.to_string())?;
    let mut trained = Vec::new();
    let mut evaluated = Vec::new();
    for agent in [AgentKind::A2, AgentKind::C1] {
        for _ in 0..2 {
            let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
            let cfg = TrainConfig {
                agent,
                batches: 2,
                train_plans: 15,
                test_plans: 10,
                seed: 5,
                weights: WeightMode::modified(),
                ..TrainConfig::default()
            };
            train(&cfg, &map, &tables, Some(dir.path())).map_err(|e| e.to_string())?;
            trained.push(fs::read(dir.path().join("metrics.csv")).map_err(|e| e.to_string())?);
            let ck = Checkpoint::load(&dir.path().join("checkpoint_1.bin")).map_err(|e| e.to_string())?;
            let row = evaluate(&ck, &cfg, &map, &tables).map_err(|e| e.to_string())?;
            let path = dir.path().join("eval.csv");
            write_metrics_csv(&[row], &path).map_err(|e| e.to_string())?;
            evaluated.push(fs::read(&path).map_err(|e| e.to_string())?);
        }
    }
    for k in [0, 2] {
        ensure(trained[k] == trained[k + 1], || "train metrics differ between runs".into())?;
        ensure(evaluated[k] == evaluated[k + 1], || "evaluate metrics differ between runs".into())?;
    }
    Ok("train and evaluate CSVs byte-identical for a2 and c1".into())
}

fn main() -> ExitCode {
    let only: Option<Vec<usize>> =
        std::env::var("ACCEPTANCE_ONLY").ok().map(|s| s.split(',').filter_map(|x| x.trim().parse().ok()).collect());
    let criteria: [Criterion; 9] = [
        ("toy SAR ablation", toy_ablation),
        ("planner oracle equivalence", planner_oracle),
        ("simplification properties", simplification),
        ("SAR algebra", sar_algebra),
        ("gradient correctness", gradients),
        ("schedules and metric", schedules),
        ("distance/density trend", density_trend),
        ("cross-map generalisation", cross_map),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let n = i + 1;
        if only.as_ref().is_some_and(|o| !o.contains(&n)) {
            continue;
        }
        match run() {
            Ok(detail) => println!("PASS {n} {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {n} {name}: {detail}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
