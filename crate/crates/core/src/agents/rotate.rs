use std::sync::Arc;

use super::Transition;
use crate::env::{Heading, Velocity};
use crate::image::BitImage;
use crate::toy::ToyAction;

/// Clockwise quarter-turn rotation, applied consistently to states and
/// actions.
pub trait Rotate: Sized {
    fn rotated(&self, quarter_turns: u8) -> Self;
}

impl Rotate for BitImage {
    fn rotated(&self, quarter_turns: u8) -> Self {
        BitImage::rotated(self, quarter_turns)
    }
}

impl Rotate for Heading {
    /// Eight headings, two per quarter turn: N becomes E, NE becomes SE.
    fn rotated(&self, quarter_turns: u8) -> Self {
        Heading::from_index(self.index() + 2 * quarter_turns as usize)
    }
}

impl Rotate for ToyAction {
    fn rotated(&self, quarter_turns: u8) -> Self {
        ToyAction::from_index(self.index() + quarter_turns as usize)
    }
}

impl Rotate for Velocity {
    /// Each turn maps `(v_lon, v_lat)` to `(v_lat, -v_lon)`.
    fn rotated(&self, quarter_turns: u8) -> Self {
        let mut v = *self;
        for _ in 0..quarter_turns % 4 {
            v = Velocity::new(v.v_lat, -v.v_lon);
        }
        v
    }
}

/// Action sets indexed by a network's output units.
pub trait DiscreteAction: Rotate + Copy {
    const COUNT: usize;
    fn index(self) -> usize;
    fn from_index(i: usize) -> Self;
}

impl DiscreteAction for Heading {
    const COUNT: usize = 8;
    fn index(self) -> usize {
        Heading::index(self)
    }
    fn from_index(i: usize) -> Self {
        Heading::from_index(i)
    }
}

impl DiscreteAction for ToyAction {
    const COUNT: usize = 4;
    fn index(self) -> usize {
        ToyAction::index(self)
    }
    fn from_index(i: usize) -> Self {
        ToyAction::from_index(i)
    }
}

/// Rotates both images and the action; reward and terminal flag carry over.
pub fn rotate_transition<A: Rotate>(t: &Transition<A>, quarter_turns: u8) -> Transition<A> {
    Transition {
        state: Arc::new(t.state.as_ref().rotated(quarter_turns)),
        action: t.action.rotated(quarter_turns),
        reward: t.reward,
        next_state: Arc::new(t.next_state.as_ref().rotated(quarter_turns)),
        terminal: t.terminal,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn action_examples() {
        assert_eq!(ToyAction::Up.rotated(1), ToyAction::Right);
        assert_eq!(Heading::N.rotated(1), Heading::E);
        assert_eq!(Heading::NE.rotated(1), Heading::SE);
        assert_eq!(Heading::SW.rotated(1), Heading::NW);
        assert_eq!(Velocity::new(0.001, 0.0).rotated(2), Velocity::new(-0.001, 0.0));
        assert_eq!(Velocity::new(0.0, 0.001).rotated(1), Velocity::new(0.001, 0.0));
    }

    #[test]
    fn image_and_action_agree() {
        // moving up then rotating equals rotating then moving right
        let mut img = BitImage::new(10, 1);
        img.set(2, 3, 0, true);
        let r = Rotate::rotated(&img, 1);
        assert!(r.get(3, 7, 0));
        let mut up = BitImage::new(10, 1);
        up.set(1, 3, 0, true);
        let ru = Rotate::rotated(&up, 1);
        assert!(ru.get(3, 8, 0), "one column right of the rotated start");
    }
}
