//! Key-derived parity-check matrices.

use std::fmt;

use super::matrix::{parity_and, words_for, BitMatrix, BitVector};
use super::prng::{fnv1a64, MsbBits, Xoshiro256StarStar};
use super::solve::SyndromeSolver;
use crate::error::{Error, Result};

/// The secret shared by sender and receiver.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HidingKey(Vec<u8>);

impl HidingKey {
    pub fn new(bytes: impl Into<Vec<u8>>) -> Result<Self> {
        let bytes = bytes.into();
        if bytes.is_empty() {
            return Err(Error::EmptyKey);
        }
        Ok(Self(bytes))
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    /// FNV-1a-64 of the key bytes.
    pub fn seed(&self) -> u64 {
        fnv1a64(&self.0)
    }
}

impl fmt::Debug for HidingKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HidingKey({} bytes)", self.0.len())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MatrixMode {
    /// Dense random `k x n` matrix of full row rank.
    General,
    /// `n x n` permutation matrix; `H^T H = I`.
    Permutation,
}

/// Fills a `k x n` matrix row-major from the MSB-first bit stream of `seed`.
pub fn fill_from_seed(seed: u64, k: usize, n: usize) -> Result<BitMatrix> {
    let stride = words_for(n);
    let mut data = vec![0u64; k * stride];
    if n % 64 == 0 {
        let mut rng = Xoshiro256StarStar::from_seed(seed);
        for w in data.iter_mut() {
            *w = rng.next_u64().reverse_bits();
        }
    } else {
        let mut bits = MsbBits::new(seed);
        for row in data.chunks_mut(stride) {
            for (wi, w) in row.iter_mut().enumerate() {
                let take = (n - wi * 64).min(64) as u32;
                *w = bits.take(take);
            }
        }
    }
    BitMatrix::from_row_words(k, n, data)
}

/// `fill_from_seed(seed, k, v.len()) * v` computed row by row, without
/// materializing the matrix.
pub fn seeded_product(seed: u64, k: usize, v: &BitVector) -> Result<BitVector> {
    let n = v.len();
    if k == 0 || n == 0 {
        return Err(Error::ZeroDimension { rows: k, cols: n });
    }
    let stride = words_for(n);
    let mut row = vec![0u64; stride];
    let mut out = BitVector::zeros(k);
    if n % 64 == 0 {
        let mut rng = Xoshiro256StarStar::from_seed(seed);
        for r in 0..k {
            let mut acc = 0u64;
            for &x in v.words() {
                acc ^= rng.next_u64().reverse_bits() & x;
            }
            out.set(r, acc.count_ones() & 1 == 1);
        }
    } else {
        let mut bits = MsbBits::new(seed);
        for r in 0..k {
            for (wi, w) in row.iter_mut().enumerate() {
                *w = bits.take((n - wi * 64).min(64) as u32);
            }
            out.set(r, parity_and(&row, v.words()));
        }
    }
    Ok(out)
}

fn permutation_from_seed(seed: u64, n: usize) -> Result<BitMatrix> {
    let mut rng = Xoshiro256StarStar::from_seed(seed);
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = (rng.next_u64() % (i as u64 + 1)) as usize;
        perm.swap(i, j);
    }
    let mut h = BitMatrix::zeros(n, n)?;
    for (r, &c) in perm.iter().enumerate() {
        h.set(r, c, true);
    }
    Ok(h)
}

fn check_dims(k: usize, n: usize, mode: MatrixMode) -> Result<()> {
    if k == 0 || n == 0 {
        return Err(Error::ZeroDimension { rows: k, cols: n });
    }
    match mode {
        MatrixMode::General if k > n => Err(Error::RankImpossible { k, n }),
        MatrixMode::Permutation if k != n => Err(Error::NonSquarePermutation { k, n }),
        _ => Ok(()),
    }
}

/// Generates the key's `k x n` matrix together with its syndrome solver.
///
/// General mode retries with `seed + attempt` until the matrix reaches full
/// row rank, so the result is always solvable for every syndrome.
pub fn generate_with_solver(
    key: &HidingKey,
    k: usize,
    n: usize,
    mode: MatrixMode,
) -> Result<(BitMatrix, SyndromeSolver)> {
    check_dims(k, n, mode)?;
    let base = key.seed();
    match mode {
        MatrixMode::Permutation => {
            let h = permutation_from_seed(base, n)?;
            let solver = SyndromeSolver::new(&h);
            Ok((h, solver))
        }
        MatrixMode::General => {
            for attempt in 0u64.. {
                let h = fill_from_seed(base.wrapping_add(attempt), k, n)?;
                let solver = SyndromeSolver::new(&h);
                if solver.rank() == k {
                    return Ok((h, solver));
                }
            }
            unreachable!("attempt counter exhausted")
        }
    }
}

/// Deterministic key-derived matrix. See [`generate_with_solver`].
pub fn generate_matrix(key: &HidingKey, k: usize, n: usize, mode: MatrixMode) -> Result<BitMatrix> {
    check_dims(k, n, mode)?;
    match mode {
        MatrixMode::Permutation => permutation_from_seed(key.seed(), n),
        MatrixMode::General => {
            let base = key.seed();
            for attempt in 0u64.. {
                let h = fill_from_seed(base.wrapping_add(attempt), k, n)?;
                if h.rank() == k {
                    return Ok(h);
                }
            }
            unreachable!("attempt counter exhausted")
        }
    }
}
