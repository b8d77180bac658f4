use std::fmt::Write as _;
use std::path::Path;

use sha2::{Digest, Sha256};
use thiserror::Error;

use super::Position;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CellKind {
    Water,
    Land,
}

#[derive(Debug, Error)]
pub enum MapError {
    #[error("empty map input")]
    Empty,
    #[error("ragged grid: row {row} has {found} cells, expected {expected}")]
    RaggedGrid { row: usize, expected: usize, found: usize },
    #[error("illegal character {ch:?} at row {row}, column {col}")]
    IllegalChar { row: usize, col: usize, ch: char },
    #[error("bad header line {0:?}: expected \"lon lat cell_size\"")]
    BadHeader(String),
    #[error("cell size must be positive and finite, got {0}")]
    BadCellSize(f64),
    #[error("position ({lon}, {lat}) is outside the map")]
    OutOfBounds { lon: f64, lat: f64 },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Southwest corner and square cell size, all in decimal degrees.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Georef {
    pub origin_lon: f64,
    pub origin_lat: f64,
    pub cell_size: f64,
}

impl Default for Georef {
    fn default() -> Self {
        Self { origin_lon: 0.0, origin_lat: 0.0, cell_size: 0.0005 }
    }
}

/// Grid index. Row 0 is the northernmost row, column 0 the westernmost.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridCell {
    pub row: usize,
    pub col: usize,
}

impl GridCell {
    pub fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }
}

/// Bounded occupancy grid of water and land. Immutable once built.
#[derive(Clone, Debug, PartialEq)]
pub struct GeoMap {
    georef: Georef,
    width: usize,
    height: usize,
    cells: Vec<CellKind>,
    water: Vec<usize>,
}

impl GeoMap {
    pub fn new(georef: Georef, width: usize, height: usize, cells: Vec<CellKind>) -> Result<Self, MapError> {
        if width == 0 || height == 0 {
            return Err(MapError::Empty);
        }
        if !(georef.cell_size > 0.0 && georef.cell_size.is_finite()) {
            return Err(MapError::BadCellSize(georef.cell_size));
        }
        assert_eq!(cells.len(), width * height, "cell count must match dimensions");
        let water = cells.iter().enumerate().filter(|(_, k)| **k == CellKind::Water).map(|(i, _)| i).collect();
        Ok(Self { georef, width, height, cells, water })
    }

    pub fn all_water(width: usize, height: usize, georef: Georef) -> Self {
        Self::new(georef, width, height, vec![CellKind::Water; width * height]).expect("valid dimensions")
    }

    /// Parses a bare character grid ('0' water, '1' land), one row per line.
    pub fn from_grid_text(text: &str, georef: Georef) -> Result<Self, MapError> {
        let mut lines: Vec<&str> = text.lines().map(|l| l.trim_end_matches('\r')).collect();
        while lines.last().is_some_and(|l| l.is_empty()) {
            lines.pop();
        }
        if lines.is_empty() || lines[0].is_empty() {
            return Err(MapError::Empty);
        }
        let width = lines[0].chars().count();
        let mut cells = Vec::with_capacity(width * lines.len());
        for (row, line) in lines.iter().enumerate() {
            let found = line.chars().count();
            if found != width {
                return Err(MapError::RaggedGrid { row, expected: width, found });
            }
            for (col, ch) in line.chars().enumerate() {
                cells.push(match ch {
                    '0' => CellKind::Water,
                    '1' => CellKind::Land,
                    _ => return Err(MapError::IllegalChar { row, col, ch }),
                });
            }
        }
        Self::new(georef, width, lines.len(), cells)
    }

    /// Parses the map file format: a `lon lat cell_size` header line
    /// followed by the character grid.
    pub fn parse(text: &str) -> Result<Self, MapError> {
        let (header, grid) = text.split_once('\n').ok_or(MapError::Empty)?;
        let header = header.trim_end_matches('\r');
        let fields: Vec<f64> = header
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<_, _>>()
            .map_err(|_| MapError::BadHeader(header.to_string()))?;
        let [origin_lon, origin_lat, cell_size] = fields[..] else {
            return Err(MapError::BadHeader(header.to_string()));
        };
        Self::from_grid_text(grid, Georef { origin_lon, origin_lat, cell_size })
    }

    pub fn to_file_string(&self) -> String {
        let g = &self.georef;
        let mut s = String::with_capacity((self.width + 1) * self.height + 32);
        let _ = writeln!(s, "{} {} {}", g.origin_lon, g.origin_lat, g.cell_size);
        for row in self.cells.chunks(self.width) {
            s.extend(row.iter().map(|k| match k {
                CellKind::Water => '0',
                CellKind::Land => '1',
            }));
            s.push('\n');
        }
        s
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, MapError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), MapError> {
        std::fs::write(path, self.to_file_string())?;
        Ok(())
    }

    /// Hex digest of the canonical file encoding.
    pub fn content_hash(&self) -> String {
        let digest = Sha256::digest(self.to_file_string().as_bytes());
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn georef(&self) -> Georef {
        self.georef
    }

    pub fn cell_size(&self) -> f64 {
        self.georef.cell_size
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn cells(&self) -> &[CellKind] {
        &self.cells
    }

    /// Flat indices of all water cells, ascending.
    pub fn water_indices(&self) -> &[usize] {
        &self.water
    }

    pub fn index(&self, cell: GridCell) -> usize {
        cell.row * self.width + cell.col
    }

    pub fn cell_at(&self, index: usize) -> GridCell {
        GridCell { row: index / self.width, col: index % self.width }
    }

    pub fn kind(&self, cell: GridCell) -> CellKind {
        self.cells[self.index(cell)]
    }

    /// Kind at signed coordinates; anything outside the grid is land.
    pub fn kind_or_land(&self, row: isize, col: isize) -> CellKind {
        if row < 0 || col < 0 || row as usize >= self.height || col as usize >= self.width {
            CellKind::Land
        } else {
            self.cells[row as usize * self.width + col as usize]
        }
    }

    pub fn is_water(&self, cell: GridCell) -> bool {
        self.kind(cell) == CellKind::Water
    }

    pub fn max_lon(&self) -> f64 {
        self.georef.origin_lon + self.width as f64 * self.georef.cell_size
    }

    pub fn max_lat(&self) -> f64 {
        self.georef.origin_lat + self.height as f64 * self.georef.cell_size
    }

    pub fn contains(&self, p: &Position) -> bool {
        p.lon >= self.georef.origin_lon
            && p.lon <= self.max_lon()
            && p.lat >= self.georef.origin_lat
            && p.lat <= self.max_lat()
    }

    /// Grid cell containing `p`, or `None` outside the bounding box.
    ///
    /// The far (east/north) edges belong to the last column/row.
    pub fn locate(&self, p: &Position) -> Option<GridCell> {
        if !self.contains(p) {
            return None;
        }
        let cs = self.georef.cell_size;
        let col = (((p.lon - self.georef.origin_lon) / cs).floor() as usize).min(self.width - 1);
        let from_south = (((p.lat - self.georef.origin_lat) / cs).floor() as usize).min(self.height - 1);
        Some(GridCell { row: self.height - 1 - from_south, col })
    }

    pub fn cell_of(&self, p: &Position) -> Result<(CellKind, GridCell), MapError> {
        let cell = self.locate(p).ok_or(MapError::OutOfBounds { lon: p.lon, lat: p.lat })?;
        Ok((self.kind(cell), cell))
    }

    pub fn cell_center(&self, cell: GridCell) -> Position {
        let cs = self.georef.cell_size;
        Position {
            lon: self.georef.origin_lon + (cell.col as f64 + 0.5) * cs,
            lat: self.georef.origin_lat + ((self.height - 1 - cell.row) as f64 + 0.5) * cs,
        }
    }

    /// Center of a possibly out-of-map cell.
    pub fn cell_center_signed(&self, row: isize, col: isize) -> Position {
        let cs = self.georef.cell_size;
        Position {
            lon: self.georef.origin_lon + (col as f64 + 0.5) * cs,
            lat: self.georef.origin_lat + ((self.height as isize - 1 - row) as f64 + 0.5) * cs,
        }
    }

    /// Continuous grid coordinates `(x, y)`: `x` grows east in columns,
    /// `y` grows south in rows, so cell `(r, c)` spans `[c, c+1] x [r, r+1]`.
    pub fn to_grid_space(&self, p: &Position) -> (f64, f64) {
        let cs = self.georef.cell_size;
        ((p.lon - self.georef.origin_lon) / cs, (self.max_lat() - p.lat) / cs)
    }
}
