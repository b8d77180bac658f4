//! Square binary images with up to eight channels packed as bit planes.
//!
//! Local views and toy-environment states are both one-hot style images,
//! so each pixel is a single byte whose bit `k` is channel `k`.

use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitImage {
    side: usize,
    channels: usize,
    pixels: Vec<u8>,
}

impl BitImage {
    pub fn new(side: usize, channels: usize) -> Self {
        assert!(channels <= 8, "at most 8 bit planes");
        Self { side, channels, pixels: vec![0; side * side] }
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    /// Number of scalar inputs when fed to a network (`side * side * channels`).
    pub fn input_len(&self) -> usize {
        self.side * self.side * self.channels
    }

    pub fn get(&self, row: usize, col: usize, channel: usize) -> bool {
        self.pixels[row * self.side + col] & (1 << channel) != 0
    }

    pub fn set(&mut self, row: usize, col: usize, channel: usize, on: bool) {
        debug_assert!(channel < self.channels);
        let px = &mut self.pixels[row * self.side + col];
        if on {
            *px |= 1 << channel;
        } else {
            *px &= !(1 << channel);
        }
    }

    pub fn pixel_bits(&self, row: usize, col: usize) -> u8 {
        self.pixels[row * self.side + col]
    }

    pub fn set_pixel_bits(&mut self, row: usize, col: usize, bits: u8) {
        self.pixels[row * self.side + col] = bits;
    }

    /// Count of set pixels in one channel.
    pub fn count(&self, channel: usize) -> usize {
        self.pixels.iter().filter(|&&p| p & (1 << channel) != 0).count()
    }

    /// Rotates clockwise by `quarter_turns * 90` degrees.
    ///
    /// One turn moves pixel `(r, c)` to `(c, side - 1 - r)`.
    pub fn rotated(&self, quarter_turns: u8) -> Self {
        let n = self.side;
        let mut out = Self { side: n, channels: self.channels, pixels: vec![0; n * n] };
        let turns = quarter_turns % 4;
        for r in 0..n {
            for c in 0..n {
                let (nr, nc) = match turns {
                    0 => (r, c),
                    1 => (c, n - 1 - r),
                    2 => (n - 1 - r, n - 1 - c),
                    _ => (n - 1 - c, r),
                };
                out.pixels[nr * n + nc] = self.pixels[r * n + c];
            }
        }
        out
    }

    /// Writes the image as channel-last (`row, col, channel`) scalars.
    pub fn write_input<R: Real>(&self, out: &mut [R]) {
        debug_assert_eq!(out.len(), self.input_len());
        let ch = self.channels;
        for (i, &px) in self.pixels.iter().enumerate() {
            let dst = &mut out[i * ch..(i + 1) * ch];
            for (k, v) in dst.iter_mut().enumerate() {
                *v = if px & (1 << k) != 0 { R::one() } else { R::zero() };
            }
        }
    }

    pub fn to_input<R: Real>(&self) -> Vec<R> {
        let mut v = vec![R::zero(); self.input_len()];
        self.write_input(&mut v);
        v
    }
}
