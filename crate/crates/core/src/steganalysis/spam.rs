//! Second-order SPAM features (truncation `T = 3`, 686 dimensions).
//!
//! Pixel differences along each of eight directions are clamped to
//! `[-T, T]` and modelled as a second-order Markov chain. The transition
//! tensors of the four axis-aligned directions are averaged into the first
//! 343 features and those of the four diagonals into the last 343.

use crate::error::{Error, Result};
use crate::image::GrayImage;

use super::FeatureVector;

pub const SPAM_T: i32 = 3;
const SIDE: usize = (2 * SPAM_T + 1) as usize;
/// Entries of one transition tensor, `(2T + 1)^3`.
pub const TENSOR_LEN: usize = SIDE * SIDE * SIDE;
pub const SPAM_DIM: usize = 2 * TENSOR_LEN;

/// Scan direction as a `(row, col)` step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Right,
    Left,
    Down,
    Up,
    DownRight,
    UpLeft,
    UpRight,
    DownLeft,
}

impl Direction {
    pub const AXIAL: [Direction; 4] = [Direction::Right, Direction::Left, Direction::Down, Direction::Up];
    pub const DIAGONAL: [Direction; 4] = [
        Direction::DownRight,
        Direction::UpLeft,
        Direction::UpRight,
        Direction::DownLeft,
    ];

    fn step(self) -> (isize, isize) {
        match self {
            Direction::Right => (0, 1),
            Direction::Left => (0, -1),
            Direction::Down => (1, 0),
            Direction::Up => (-1, 0),
            Direction::DownRight => (1, 1),
            Direction::UpLeft => (-1, -1),
            Direction::UpRight => (-1, 1),
            Direction::DownLeft => (1, -1),
        }
    }
}

/// Index of the triple `(a, b, c)` of clamped differences, each in `[-T, T]`.
#[inline]
pub fn tensor_index(a: i32, b: i32, c: i32) -> usize {
    let s = SIDE as i32;
    ((a + SPAM_T) * s * s + (b + SPAM_T) * s + (c + SPAM_T)) as usize
}

/// Conditional transition tensor `P(c | a, b)` for consecutive clamped
/// differences `a, b, c` along `dir`. Slices over `c` sum to 1 when the
/// pair `(a, b)` occurs and to 0 otherwise.
pub fn transition_tensor(img: &GrayImage, dir: Direction) -> Vec<f64> {
    let (dy, dx) = dir.step();
    let (h, w) = (img.height() as isize, img.width() as isize);
    let px = img.pixels();
    let mut counts = vec![0u64; TENSOR_LEN];
    // Start positions keep all four pixels p, p+d, p+2d, p+3d in bounds.
    let range = |d: isize, len: isize| {
        if d >= 0 {
            0..(len - 3 * d).max(0)
        } else {
            (-3 * d).min(len)..len
        }
    };
    let step = dy * w + dx;
    for y in range(dy, h) {
        for x in range(dx, w) {
            let p = y * w + x;
            let v = |i: isize| i32::from(px[(p + i * step) as usize]);
            let (p0, p1, p2, p3) = (v(0), v(1), v(2), v(3));
            let clamp = |d: i32| d.clamp(-SPAM_T, SPAM_T);
            counts[tensor_index(clamp(p0 - p1), clamp(p1 - p2), clamp(p2 - p3))] += 1;
        }
    }
    let mut probs = vec![0.0; TENSOR_LEN];
    for (pair_counts, pair_probs) in counts.chunks(SIDE).zip(probs.chunks_mut(SIDE)) {
        let total: u64 = pair_counts.iter().sum();
        if total > 0 {
            for (p, &c) in pair_probs.iter_mut().zip(pair_counts) {
                *p = c as f64 / total as f64;
            }
        }
    }
    probs
}

/// The 686-dimensional SPAM vector. Needs at least 4 pixels per side.
pub fn spam_features(img: &GrayImage) -> Result<FeatureVector> {
    if img.width() < 4 || img.height() < 4 {
        return Err(Error::ImageTooSmall {
            width: img.width(),
            height: img.height(),
        });
    }
    let mut out = vec![0.0; SPAM_DIM];
    for (group, half) in [Direction::AXIAL, Direction::DIAGONAL].iter().zip(out.chunks_mut(TENSOR_LEN)) {
        for &dir in group {
            for (o, p) in half.iter_mut().zip(transition_tensor(img, dir)) {
                *o += p / 4.0;
            }
        }
    }
    FeatureVector::new(out)
}
