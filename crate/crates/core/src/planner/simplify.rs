//! Ramer-Douglas-Peucker simplification and its land-attended variant.

use num_traits::Float;

use crate::gridworld::{GeoMap, Position};

use super::raster::crosses_land;

/// Which simplifier turns a planner path into waypoints.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Simplifier {
    Rdp,
    Lardp,
}

/// Distance from `p` to the closed segment `a`-`b`.
pub fn segment_distance<T: Float>(p: &Position<T>, a: &Position<T>, b: &Position<T>) -> T {
    let (dx, dy) = (b.lon - a.lon, b.lat - a.lat);
    let len2 = dx * dx + dy * dy;
    if len2 == T::zero() {
        return p.distance(a);
    }
    let t = ((p.lon - a.lon) * dx + (p.lat - a.lat) * dy) / len2;
    let t = t.max(T::zero()).min(T::one());
    let proj = Position { lon: a.lon + t * dx, lat: a.lat + t * dy };
    p.distance(&proj)
}

/// Indices kept by the recursive split. A range is split at its farthest
/// interior point (first index on ties) when that point deviates by more
/// than `threshold`, or when `force_split(start, end)` holds.
fn keep_indices<T: Float>(
    pts: &[Position<T>],
    threshold: T,
    mut force_split: impl FnMut(&Position<T>, &Position<T>) -> bool,
) -> Vec<usize> {
    let n = pts.len();
    if n <= 2 {
        return (0..n).collect();
    }
    let mut keep = vec![false; n];
    keep[0] = true;
    keep[n - 1] = true;
    let mut stack = vec![(0usize, n - 1)];
    while let Some((s, e)) = stack.pop() {
        if e <= s + 1 {
            continue;
        }
        let mut best = (s + 1, T::neg_infinity());
        for i in s + 1..e {
            let d = segment_distance(&pts[i], &pts[s], &pts[e]);
            if d > best.1 {
                best = (i, d);
            }
        }
        if best.1 > threshold || force_split(&pts[s], &pts[e]) {
            keep[best.0] = true;
            stack.push((best.0, e));
            stack.push((s, best.0));
        }
    }
    keep.iter().enumerate().filter(|(_, k)| **k).map(|(i, _)| i).collect()
}

/// Indices of the points classic RDP retains.
pub fn rdp_keep<T: Float>(pts: &[Position<T>], threshold: T) -> Vec<usize> {
    keep_indices(pts, threshold, |_, _| false)
}

pub fn rdp<T: Float>(pts: &[Position<T>], threshold: T) -> Vec<Position<T>> {
    rdp_keep(pts, threshold).into_iter().map(|i| pts[i]).collect()
}

/// RDP that additionally splits any range whose chord touches land under
/// supercover rasterization. Retains a superset of what [`rdp`] keeps.
pub fn lardp(pts: &[Position], threshold: f64, map: &GeoMap) -> Vec<Position> {
    keep_indices(pts, threshold, |a, b| crosses_land(map, a, b)).into_iter().map(|i| pts[i]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gridworld::{Georef, GridCell};

    fn p(x: f64, y: f64) -> Position {
        Position::new(x, y)
    }

    #[test]
    fn collinear_collapses_to_endpoints() {
        let out = rdp(&[p(0.0, 0.0), p(1.0, 0.0), p(2.0, 0.0)], 0.1);
        assert_eq!(out, vec![p(0.0, 0.0), p(2.0, 0.0)]);
    }

    #[test]
    fn apex_above_threshold_is_kept() {
        let pts = [p(0.0, 0.0), p(1.0, 1.0), p(2.0, 0.0)];
        assert_eq!(rdp(&pts, 0.5), pts.to_vec());
    }

    #[test]
    fn tiny_inputs_unchanged() {
        assert!(rdp::<f64>(&[], 1.0).is_empty());
        assert_eq!(rdp(&[p(1.0, 2.0)], 1.0), vec![p(1.0, 2.0)]);
        let two = [p(0.0, 0.0), p(3.0, 4.0)];
        let map = GeoMap::all_water(5, 5, Georef { origin_lon: 0.0, origin_lat: 0.0, cell_size: 1.0 });
        assert_eq!(lardp(&two, 10.0, &map), two.to_vec());
    }

    #[test]
    fn generic_over_f32() {
        let pts = [Position::new(0.0f32, 0.0), Position::new(1.0, 0.01), Position::new(2.0, 0.0)];
        assert_eq!(rdp(&pts, 0.1f32).len(), 2);
    }

    #[test]
    fn lardp_keeps_corner_around_land() {
        // U-shaped detour around a land block
        let map = GeoMap::from_grid_text(
            "00000\n01110\n01110\n01110\n00000\n",
            Georef { origin_lon: 0.0, origin_lat: 0.0, cell_size: 1.0 },
        )
        .unwrap();
        let cells = [(2, 0), (1, 0), (0, 0), (0, 1), (0, 2), (0, 3), (0, 4), (1, 4), (2, 4)];
        let pts: Vec<Position> = cells.iter().map(|&(r, c)| map.cell_center(GridCell::new(r, c))).collect();
        let plain = rdp(&pts, 10.0);
        assert_eq!(plain.len(), 2);
        assert!(crosses_land(&map, &plain[0], &plain[1]));
        let attended = lardp(&pts, 10.0, &map);
        assert!(attended.len() > 2);
        for w in attended.windows(2) {
            let i = pts.iter().position(|q| *q == w[0]).unwrap();
            let j = pts.iter().position(|q| *q == w[1]).unwrap();
            if j > i + 1 {
                assert!(!crosses_land(&map, &w[0], &w[1]));
            }
        }
    }

    #[test]
    fn lardp_matches_rdp_on_open_water() {
        let map = GeoMap::all_water(20, 20, Georef { origin_lon: 0.0, origin_lat: 0.0, cell_size: 1.0 });
        let pts: Vec<Position> = (0..15).map(|i| p(2.5 + i as f64, 5.5 + (i as f64 * 0.9).sin() * 3.0)).collect();
        for t in [0.1, 0.5, 1.0, 3.0] {
            assert_eq!(lardp(&pts, t, &map), rdp(&pts, t));
        }
    }
}
