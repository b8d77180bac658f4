//! Ten-by-ten wall maps for the rotation-augmentation ablation.
//!
//! A single wall with one gap separates the agent from the target. The agent
//! moves one cell per step in four directions.

use std::collections::VecDeque;

use rand::Rng;
use thiserror::Error;

use crate::image::BitImage;

pub const TOY_SIDE: usize = 10;
pub const TOY_STEP_CAP: usize = 50;
pub const TOY_SHAPING: f64 = 0.1;

pub const WALL: usize = 0;
pub const AGENT: usize = 1;
pub const TARGET: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ToyKind {
    Horizontal,
    Vertical,
    Diagonal,
}

impl ToyKind {
    pub const ALL: [ToyKind; 3] = [ToyKind::Horizontal, ToyKind::Vertical, ToyKind::Diagonal];

    pub fn name(self) -> &'static str {
        match self {
            ToyKind::Horizontal => "horizontal",
            ToyKind::Vertical => "vertical",
            ToyKind::Diagonal => "diagonal",
        }
    }
}

/// Moves in clockwise order, so a quarter turn adds one to the index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ToyAction {
    Up,
    Right,
    Down,
    Left,
}

impl ToyAction {
    pub const ALL: [ToyAction; 4] = [ToyAction::Up, ToyAction::Right, ToyAction::Down, ToyAction::Left];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Self {
        Self::ALL[i % 4]
    }

    fn delta(self) -> (isize, isize) {
        match self {
            ToyAction::Up => (-1, 0),
            ToyAction::Right => (0, 1),
            ToyAction::Down => (1, 0),
            ToyAction::Left => (0, -1),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ToyError {
    #[error("step after the episode ended")]
    StepAfterTerminal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ToyOutcome {
    Moved,
    Reached,
    HitWall,
    StepCap,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ToyStep {
    pub state: BitImage,
    pub reward: f64,
    pub terminal: bool,
    pub outcome: ToyOutcome,
}

/// One episode's map and mutable agent state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToyMap {
    kind: ToyKind,
    walls: [[bool; TOY_SIDE]; TOY_SIDE],
    agent: (usize, usize),
    target: (usize, usize),
    steps: usize,
    done: bool,
}

impl ToyMap {
    /// Builds a map from explicit parts. Panics if agent or target sit on a
    /// wall or coincide.
    pub fn from_parts(
        kind: ToyKind,
        walls: [[bool; TOY_SIDE]; TOY_SIDE],
        agent: (usize, usize),
        target: (usize, usize),
    ) -> Self {
        assert!(agent != target, "agent and target must differ");
        assert!(!walls[agent.0][agent.1] && !walls[target.0][target.1], "endpoints must be free");
        Self { kind, walls, agent, target, steps: 0, done: false }
    }

    /// Horizontal layout: wall along `row` except at column `gap`.
    pub fn horizontal(row: usize, gap: usize, agent: (usize, usize), target: (usize, usize)) -> Self {
        let mut walls = [[false; TOY_SIDE]; TOY_SIDE];
        for (c, w) in walls[row].iter_mut().enumerate() {
            *w = c != gap;
        }
        Self::from_parts(ToyKind::Horizontal, walls, agent, target)
    }

    /// Mirrors the map across the main diagonal. A horizontal map becomes a
    /// vertical one.
    pub fn transposed(&self) -> Self {
        let mut walls = [[false; TOY_SIDE]; TOY_SIDE];
        for (r, row) in walls.iter_mut().enumerate() {
            for (c, w) in row.iter_mut().enumerate() {
                *w = self.walls[c][r];
            }
        }
        let kind = match self.kind {
            ToyKind::Horizontal => ToyKind::Vertical,
            ToyKind::Vertical => ToyKind::Horizontal,
            ToyKind::Diagonal => ToyKind::Diagonal,
        };
        let swap = |(r, c): (usize, usize)| (c, r);
        Self { kind, walls, agent: swap(self.agent), target: swap(self.target), steps: self.steps, done: self.done }
    }

    pub fn kind(&self) -> ToyKind {
        self.kind
    }

    pub fn is_wall(&self, row: usize, col: usize) -> bool {
        self.walls[row][col]
    }

    pub fn agent(&self) -> (usize, usize) {
        self.agent
    }

    pub fn target(&self) -> (usize, usize) {
        self.target
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn is_done(&self) -> bool {
        self.done
    }

    /// Breadth-first search over free cells from agent to target.
    pub fn connected(&self) -> bool {
        let mut seen = [[false; TOY_SIDE]; TOY_SIDE];
        let mut queue = VecDeque::from([self.agent]);
        seen[self.agent.0][self.agent.1] = true;
        while let Some((r, c)) = queue.pop_front() {
            if (r, c) == self.target {
                return true;
            }
            for a in ToyAction::ALL {
                if let Some((nr, nc)) = offset((r, c), a) {
                    if !self.walls[nr][nc] && !seen[nr][nc] {
                        seen[nr][nc] = true;
                        queue.push_back((nr, nc));
                    }
                }
            }
        }
        false
    }
}

fn offset((r, c): (usize, usize), a: ToyAction) -> Option<(usize, usize)> {
    let (dr, dc) = a.delta();
    let nr = r.checked_add_signed(dr)?;
    let nc = c.checked_add_signed(dc)?;
    (nr < TOY_SIDE && nc < TOY_SIDE).then_some((nr, nc))
}

fn manhattan(a: (usize, usize), b: (usize, usize)) -> usize {
    a.0.abs_diff(b.0) + a.1.abs_diff(b.1)
}

fn pick<R: Rng + ?Sized>(cells: &[(usize, usize)], rng: &mut R) -> (usize, usize) {
    cells[rng.random_range(0..cells.len())]
}

/// Draws a random map of the given kind.
///
/// Horizontal and vertical maps consume the generator identically, so the
/// vertical map for a seed is the transpose of the horizontal one.
pub fn render_toy<R: Rng + ?Sized>(kind: ToyKind, rng: &mut R) -> ToyMap {
    loop {
        let map = match kind {
            ToyKind::Horizontal => draw_horizontal(rng),
            ToyKind::Vertical => draw_horizontal(rng).transposed(),
            ToyKind::Diagonal => draw_diagonal(rng),
        };
        if map.connected() {
            return map;
        }
    }
}

fn draw_horizontal<R: Rng + ?Sized>(rng: &mut R) -> ToyMap {
    let row = rng.random_range(1..TOY_SIDE - 1);
    let gap = rng.random_range(0..TOY_SIDE);
    let above: Vec<_> = (0..row).flat_map(|r| (0..TOY_SIDE).map(move |c| (r, c))).collect();
    let below: Vec<_> = (row + 1..TOY_SIDE).flat_map(|r| (0..TOY_SIDE).map(move |c| (r, c))).collect();
    let (a, b) = (pick(&above, rng), pick(&below, rng));
    let (agent, target) = if rng.random_bool(0.5) { (a, b) } else { (b, a) };
    ToyMap::horizontal(row, gap, agent, target)
}

fn draw_diagonal<R: Rng + ?Sized>(rng: &mut R) -> ToyMap {
    let gap = rng.random_range(0..TOY_SIDE);
    let mut walls = [[false; TOY_SIDE]; TOY_SIDE];
    for (i, row) in walls.iter_mut().enumerate() {
        row[i] = i != gap;
    }
    let cells = |upper: bool| -> Vec<(usize, usize)> {
        (0..TOY_SIDE)
            .flat_map(|r| (0..TOY_SIDE).map(move |c| (r, c)))
            .filter(|&(r, c)| if upper { c > r } else { r > c })
            .collect()
    };
    let (a, b) = (pick(&cells(true), rng), pick(&cells(false), rng));
    let (agent, target) = if rng.random_bool(0.5) { (a, b) } else { (b, a) };
    ToyMap::from_parts(ToyKind::Diagonal, walls, agent, target)
}

/// Walls, agent and target as three one-hot channels.
pub fn toy_state(map: &ToyMap) -> BitImage {
    let mut img = BitImage::new(TOY_SIDE, 3);
    for r in 0..TOY_SIDE {
        for c in 0..TOY_SIDE {
            if map.walls[r][c] {
                img.set(r, c, WALL, true);
            }
        }
    }
    img.set(map.agent.0, map.agent.1, AGENT, true);
    img.set(map.target.0, map.target.1, TARGET, true);
    img
}

/// Advances the agent one cell.
///
/// Reaching the target pays +1, walls and the border pay -1, both ending the
/// episode. Other moves pay 0.1 per unit of Manhattan distance gained. The
/// fiftieth step ends the episode regardless.
pub fn toy_step(map: &mut ToyMap, action: ToyAction) -> Result<ToyStep, ToyError> {
    if map.done {
        return Err(ToyError::StepAfterTerminal);
    }
    map.steps += 1;
    let (reward, outcome) = match offset(map.agent, action) {
        Some((r, c)) if !map.walls[r][c] => {
            let before = manhattan(map.agent, map.target) as f64;
            map.agent = (r, c);
            if map.agent == map.target {
                (1.0, ToyOutcome::Reached)
            } else {
                let after = manhattan(map.agent, map.target) as f64;
                (TOY_SHAPING * (before - after), ToyOutcome::Moved)
            }
        }
        _ => (-1.0, ToyOutcome::HitWall),
    };
    let outcome = if outcome == ToyOutcome::Moved && map.steps >= TOY_STEP_CAP { ToyOutcome::StepCap } else { outcome };
    map.done = outcome != ToyOutcome::Moved;
    Ok(ToyStep { state: toy_state(map), reward, terminal: map.done, outcome })
}
