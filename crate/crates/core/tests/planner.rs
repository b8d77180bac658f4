mod common;

use common::{brute_supercover, dijkstra, point_segment, random_map, random_route};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use seanav::gridworld::{CellKind, GridCell, Position};
use seanav::planner::raster::supercover;
use seanav::planner::{build_apsp, edge_list, lardp, rdp, rdp_keep, WeightMode};

fn check_against_dijkstra(mode: WeightMode, seed: u64, maps: usize) {
    let penalty = match mode {
        WeightMode::Plain => None,
        WeightMode::Modified { alpha, beta } => Some((alpha, beta)),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..maps {
        let map = random_map(&mut rng, 12, 0.35);
        let Ok(tables) = build_apsp::<f64>(&map, mode) else {
            assert!(map.water_indices().is_empty());
            continue;
        };
        for &s in map.water_indices() {
            let oracle = dijkstra(&map, s, penalty);
            for &t in map.water_indices() {
                let d = tables.distance(&map, map.cell_at(s), map.cell_at(t)).unwrap();
                if oracle[t].is_infinite() {
                    assert!(d.is_infinite());
                } else {
                    assert!((d - oracle[t]).abs() <= 1e-9 * (1.0 + oracle[t]), "{d} vs {}", oracle[t]);
                }
            }
        }
    }
}

#[test]
fn plain_distances_match_dijkstra() {
    check_against_dijkstra(WeightMode::Plain, 1, 60);
}

#[test]
fn modified_distances_match_dijkstra() {
    check_against_dijkstra(WeightMode::modified(), 2, 60);
}

#[test]
fn paths_are_water_walks_of_the_reported_cost() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..40 {
        let map = random_map(&mut rng, 14, 0.3);
        let Ok(tables) = build_apsp::<f64>(&map, WeightMode::modified()) else { continue };
        let edges = edge_list(&map, WeightMode::modified());
        let weight = |a: usize, b: usize| edges.iter().find(|e| e.0 == a && e.1 == b).map(|e| e.2);
        let water = map.water_indices();
        for _ in 0..10 {
            let a = map.cell_at(water[rng.random_range(0..water.len())]);
            let b = map.cell_at(water[rng.random_range(0..water.len())]);
            let Ok(cells) = tables.path_cells(&map, a, b) else {
                assert!(tables.distance(&map, a, b).unwrap().is_infinite());
                continue;
            };
            assert_eq!((cells[0], *cells.last().unwrap()), (a, b));
            let cost: f64 = cells.windows(2).map(|w| weight(map.index(w[0]), map.index(w[1])).unwrap()).sum();
            assert!((cost - tables.distance(&map, a, b).unwrap()).abs() < 1e-9);
            assert!(cells.iter().all(|&c| map.kind(c) == CellKind::Water));
        }
    }
}

#[test]
fn unreachable_and_land_cells_are_reported() {
    let map = seanav::gridworld::GeoMap::from_grid_text("010\n010\n", common::unit_georef()).unwrap();
    let tables = build_apsp::<f64>(&map, WeightMode::Plain).unwrap();
    let (a, b) = (GridCell::new(0, 0), GridCell::new(1, 2));
    assert!(tables.distance(&map, a, b).unwrap().is_infinite());
    assert!(tables.path_cells(&map, a, b).is_err());
    assert!(tables.distance(&map, a, GridCell::new(0, 1)).is_err());
}

fn polyline() -> impl Strategy<Value = Vec<Position>> {
    prop::collection::vec((-50.0f64..50.0, -50.0f64..50.0), 0..40)
        .prop_map(|v| v.into_iter().map(|(x, y)| Position::new(x, y)).collect())
}

proptest! {
    #[test]
    fn supercover_matches_brute_force(ax in 0.0f64..8.0, ay in 0.0f64..8.0, bx in 0.0f64..8.0, by in 0.0f64..8.0, snap in any::<bool>()) {
        let map = seanav::gridworld::GeoMap::all_water(8, 8, common::unit_georef());
        // snapping to a quarter grid exercises corner and edge contacts
        let q = |v: f64| if snap { (v * 4.0).round() / 4.0 } else { v };
        let (a, b) = (Position::new(q(ax), q(ay)), Position::new(q(bx), q(by)));
        let mut fast = supercover(&map, &a, &b);
        fast.sort_unstable();
        fast.dedup();
        prop_assert_eq!(fast, brute_supercover(&map, &a, &b, 2));
    }

    #[test]
    fn rdp_stays_within_threshold(pts in polyline(), threshold in 0.0f64..20.0) {
        let keep = rdp_keep(&pts, threshold);
        if pts.is_empty() {
            prop_assert!(keep.is_empty());
        } else {
            prop_assert_eq!(keep[0], 0);
            prop_assert_eq!(*keep.last().unwrap(), pts.len() - 1);
            prop_assert!(keep.windows(2).all(|w| w[0] < w[1]));
            for w in keep.windows(2) {
                for p in &pts[w[0]..=w[1]] {
                    prop_assert!(point_segment(p, &pts[w[0]], &pts[w[1]]) <= threshold + 1e-9);
                }
            }
        }
    }

    #[test]
    fn rdp_is_idempotent(pts in polyline(), threshold in 0.0f64..20.0) {
        let once = rdp(&pts, threshold);
        prop_assert_eq!(rdp(&once, threshold), once);
    }

    #[test]
    fn lardp_refines_rdp_and_avoids_land(seed in any::<u64>(), threshold in 0.0f64..6.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let Some((map, path)) = random_route(&mut rng, 15) else { return Ok(()) };
        let plain = rdp(&path, threshold);
        let aware = lardp(&path, threshold, &map);
        prop_assert!(plain.iter().all(|p| aware.contains(p)));
        prop_assert_eq!(aware.first(), path.first());
        prop_assert_eq!(aware.last(), path.last());
        for w in aware.windows(2) {
            let i = path.iter().position(|p| p == &w[0]).unwrap();
            let j = path.iter().position(|p| p == &w[1]).unwrap();
            if j > i + 1 {
                let land = brute_supercover(&map, &w[0], &w[1], 1)
                    .into_iter()
                    .any(|(r, c)| map.kind_or_land(r, c) == CellKind::Land);
                prop_assert!(!land, "shortcut {:?} -> {:?} touches land", w[0], w[1]);
            }
        }
    }
}
