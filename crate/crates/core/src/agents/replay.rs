use std::collections::VecDeque;
use std::sync::Arc;

use rand::Rng;

use super::rotate::{rotate_transition, Rotate};
use crate::image::BitImage;

pub const REPLAY_CAPACITY: usize = 100_000;

/// One step of experience. States are shared so consecutive transitions
/// do not duplicate images.
#[derive(Clone, Debug, PartialEq)]
pub struct Transition<A> {
    pub state: Arc<BitImage>,
    pub action: A,
    pub reward: f64,
    pub next_state: Arc<BitImage>,
    pub terminal: bool,
}

/// Fixed-capacity FIFO of transitions with uniform sampling.
#[derive(Clone, Debug)]
pub struct ReplayBuffer<A> {
    capacity: usize,
    items: VecDeque<Transition<A>>,
    // rotated copies of the last stored next-state, reused when the next
    // transition starts from it
    rotated_next: Option<(Arc<BitImage>, Vec<Arc<BitImage>>)>,
}

impl<A: Clone + Rotate> ReplayBuffer<A> {
    pub fn new(capacity: usize) -> Self {
        assert!(capacity > 0);
        Self { capacity, items: VecDeque::with_capacity(capacity.min(4096)), rotated_next: None }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn push(&mut self, t: Transition<A>) {
        if self.items.len() == self.capacity {
            self.items.pop_front();
        }
        self.items.push_back(t);
    }

    pub fn iter(&self) -> impl Iterator<Item = &Transition<A>> {
        self.items.iter()
    }

    /// Uniform sample with replacement.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Vec<&Transition<A>> {
        assert!(!self.items.is_empty(), "sampling an empty buffer");
        (0..n).map(|_| &self.items[rng.random_range(0..self.items.len())]).collect()
    }

    /// Stores `t` followed by its first `rotations` quarter-turn copies.
    pub fn store_with_sar(&mut self, t: Transition<A>, rotations: u8) {
        assert!(rotations <= 3, "at most three distinct rotations");
        if rotations == 0 {
            self.push(t);
            return;
        }
        let cached =
            self.rotated_next.take().filter(|(src, rot)| Arc::ptr_eq(src, &t.state) && rot.len() >= rotations as usize);
        let mut next_rot = Vec::with_capacity(rotations as usize);
        let mut copies = Vec::with_capacity(rotations as usize);
        for q in 1..=rotations {
            let mut r = rotate_transition(&t, q);
            if let Some((_, rot)) = &cached {
                r.state = Arc::clone(&rot[q as usize - 1]);
            }
            next_rot.push(Arc::clone(&r.next_state));
            copies.push(r);
        }
        self.rotated_next = Some((Arc::clone(&t.next_state), next_rot));
        self.push(t);
        for c in copies {
            self.push(c);
        }
    }
}

/// Free-function form of [`ReplayBuffer::store_with_sar`].
pub fn store_with_sar<A: Clone + Rotate>(buffer: &mut ReplayBuffer<A>, t: Transition<A>, rotations: u8) {
    buffer.store_with_sar(t, rotations);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toy::ToyAction;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn img(r: usize, c: usize) -> Arc<BitImage> {
        let mut i = BitImage::new(4, 1);
        i.set(r, c, 0, true);
        Arc::new(i)
    }

    fn tr(s: Arc<BitImage>, n: Arc<BitImage>, reward: f64) -> Transition<ToyAction> {
        Transition { state: s, action: ToyAction::Up, reward, next_state: n, terminal: false }
    }

    #[test]
    fn sar_stores_four_interleaved() {
        let mut b = ReplayBuffer::new(100);
        b.store_with_sar(tr(img(1, 1), img(0, 1), 0.5), 3);
        assert_eq!(b.len(), 4);
        let actions: Vec<_> = b.iter().map(|t| t.action).collect();
        assert_eq!(actions, ToyAction::ALL.to_vec());
        b.store_with_sar(tr(img(1, 1), img(0, 1), 0.5), 0);
        assert_eq!(b.len(), 5);
    }

    #[test]
    fn fifo_evicts_oldest_four() {
        let mut b = ReplayBuffer::new(8);
        b.store_with_sar(tr(img(0, 0), img(0, 1), 1.0), 3);
        b.store_with_sar(tr(img(0, 1), img(0, 2), 2.0), 3);
        b.store_with_sar(tr(img(0, 2), img(0, 3), 3.0), 3);
        assert_eq!(b.len(), 8);
        assert!(b.iter().all(|t| t.reward > 1.0));
    }

    #[test]
    fn chained_states_share_rotations() {
        let mut b = ReplayBuffer::new(100);
        let mid = img(2, 2);
        b.store_with_sar(tr(img(1, 1), Arc::clone(&mid), 0.0), 3);
        b.store_with_sar(tr(Arc::clone(&mid), img(3, 3), 0.0), 3);
        let items: Vec<_> = b.iter().collect();
        for q in 1..4 {
            assert!(Arc::ptr_eq(&items[q].next_state, &items[4 + q].state));
            assert_eq!(*items[4 + q].state, mid.rotated(q as u8));
        }
    }

    #[test]
    fn sampling_is_seeded() {
        let mut b = ReplayBuffer::new(50);
        for k in 0..20 {
            b.push(tr(img(0, 0), img(0, 0), k as f64));
        }
        let s1: Vec<f64> = b.sample(&mut ChaCha8Rng::seed_from_u64(1), 10).iter().map(|t| t.reward).collect();
        let s2: Vec<f64> = b.sample(&mut ChaCha8Rng::seed_from_u64(1), 10).iter().map(|t| t.reward).collect();
        assert_eq!(s1, s2);
    }
}
