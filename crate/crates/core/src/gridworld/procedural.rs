//! Procedural coastlines: thresholded smoothed noise, reduced to a single
//! connected body of water.

use rand::Rng;

use super::{CellKind, GeoMap, Georef, WaterComponents};

#[derive(Clone, Copy, Debug)]
pub struct ProceduralConfig {
    pub width: usize,
    pub height: usize,
    /// Target fraction of land before disconnected water is filled in.
    pub land_fraction: f64,
    /// Number of 3x3 box-blur passes applied to the noise.
    pub smoothing: usize,
    pub georef: Georef,
}

impl Default for ProceduralConfig {
    fn default() -> Self {
        Self { width: 40, height: 40, land_fraction: 0.35, smoothing: 3, georef: Georef::default() }
    }
}

pub fn generate<R: Rng + ?Sized>(cfg: &ProceduralConfig, rng: &mut R) -> GeoMap {
    let (w, h) = (cfg.width, cfg.height);
    let mut field: Vec<f64> = (0..w * h).map(|_| rng.random::<f64>()).collect();
    for _ in 0..cfg.smoothing {
        let mut next = vec![0.0; w * h];
        for r in 0..h {
            for c in 0..w {
                let (mut sum, mut n) = (0.0, 0.0);
                for dr in -1isize..=1 {
                    for dc in -1isize..=1 {
                        let (rr, cc) = (r as isize + dr, c as isize + dc);
                        if rr >= 0 && cc >= 0 && (rr as usize) < h && (cc as usize) < w {
                            sum += field[rr as usize * w + cc as usize];
                            n += 1.0;
                        }
                    }
                }
                next[r * w + c] = sum / n;
            }
        }
        field = next;
    }

    let mut sorted = field.clone();
    sorted.sort_by(f64::total_cmp);
    let land_cells = ((cfg.land_fraction.clamp(0.0, 1.0)) * (w * h) as f64).round() as usize;
    let threshold = if land_cells == 0 { f64::INFINITY } else { sorted[(w * h).saturating_sub(land_cells)] };
    let cells: Vec<CellKind> =
        field.iter().map(|&v| if v >= threshold { CellKind::Land } else { CellKind::Water }).collect();
    let map = GeoMap::new(cfg.georef, w, h, cells).expect("valid dimensions");

    let comps = WaterComponents::label(&map);
    let Some(keep) = comps.largest() else {
        return map;
    };
    let cells = (0..w * h)
        .map(|i| match comps.component_of(map.cell_at(i)) {
            Some(id) if id == keep => CellKind::Water,
            _ => CellKind::Land,
        })
        .collect();
    GeoMap::new(cfg.georef, w, h, cells).expect("valid dimensions")
}
