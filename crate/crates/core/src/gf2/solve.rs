//! Syndrome solving: find `e` with `H e = s` over GF(2).
//!
//! [`SyndromeSolver`] reduces `[H | I]` to reduced row echelon form once and
//! keeps the accumulated row transform `T`, so each solve afterwards costs a
//! single `k x k` matrix-vector product. Pivots are chosen left to right and
//! free variables are set to zero.

use super::matrix::{parity_and, words_for, xor_into, BitMatrix, BitVector};
use crate::error::{Error, Result};

/// Largest column count accepted by the exhaustive coset-leader search.
pub const MAX_MINIMIZE_COLS: usize = 24;

#[derive(Debug, Clone)]
pub struct SyndromeSolver {
    rows: usize,
    cols: usize,
    /// Pivot column of reduced row `i`, for `i < rank`.
    pivots: Vec<usize>,
    /// Row `r` holds the reduced form of the eliminated column prefix in
    /// its first `reduced_words` words, then the row transform `T` with
    /// `T H = reduced`.
    aug: Vec<u64>,
    stride: usize,
    reduced_words: usize,
    reduced_cols: usize,
    /// Kernel basis as column masks, kept when `cols <= MAX_MINIMIZE_COLS`.
    kernel: Vec<u32>,
}

impl SyndromeSolver {
    pub fn new(h: &BitMatrix) -> Self {
        let k = h.rows();
        let prefix = h.cols().min((k + 64).next_multiple_of(64));
        let solver = Self::eliminate(h, prefix);
        if solver.rank() == k || prefix == h.cols() {
            return solver;
        }
        Self::eliminate(h, h.cols())
    }

    fn eliminate(h: &BitMatrix, width: usize) -> Self {
        let k = h.rows();
        let hw = words_for(width);
        let tw = words_for(k);
        let stride = hw + tw;
        let mut aug = vec![0u64; k * stride];
        for r in 0..k {
            let row = &mut aug[r * stride..(r + 1) * stride];
            row[..hw].copy_from_slice(&h.row_words(r)[..hw]);
            if width % 64 != 0 {
                row[hw - 1] &= (1u64 << (width % 64)) - 1;
            }
            row[hw + r / 64] |= 1 << (r % 64);
        }

        let mut pivots = Vec::with_capacity(k);
        for c in 0..width {
            let rank = pivots.len();
            if rank == k {
                break;
            }
            let (wi, bit) = (c / 64, 1u64 << (c % 64));
            let Some(p) = (rank..k).find(|&r| aug[r * stride + wi] & bit != 0) else {
                continue;
            };
            if p != rank {
                for w in 0..stride {
                    aug.swap(p * stride + w, rank * stride + w);
                }
            }
            // Rows at or below the pivot are zero left of column c, so the
            // XOR can start at the pivot's word.
            let (above, rest) = aug.split_at_mut(rank * stride);
            let (pivot_row, below) = rest.split_at_mut(stride);
            for row in above.chunks_exact_mut(stride).chain(below.chunks_exact_mut(stride)) {
                if row[wi] & bit != 0 {
                    xor_into(&mut row[wi..], &pivot_row[wi..]);
                }
            }
            pivots.push(c);
        }

        let mut solver = Self {
            rows: k,
            cols: h.cols(),
            pivots,
            aug,
            stride,
            reduced_words: hw,
            reduced_cols: width,
            kernel: Vec::new(),
        };
        if width == solver.cols && width <= MAX_MINIMIZE_COLS {
            solver.kernel = solver.kernel_basis();
        }
        solver
    }

    /// One kernel vector per free column `f`: `f` itself plus the pivot
    /// columns whose reduced rows contain `f`.
    fn kernel_basis(&self) -> Vec<u32> {
        let mut is_pivot = 0u32;
        for &c in &self.pivots {
            is_pivot |= 1 << c;
        }
        (0..self.cols)
            .filter(|&f| is_pivot >> f & 1 == 0)
            .map(|f| {
                let mut v = 1u32 << f;
                for (i, &c) in self.pivots.iter().enumerate() {
                    if self.aug[i * self.stride] >> f & 1 == 1 {
                        v |= 1 << c;
                    }
                }
                v
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Particular solution supported on pivot columns.
    pub fn solve(&self, s: &BitVector) -> Result<BitVector> {
        let mut e = BitVector::zeros(0);
        self.solve_into(s, &mut e)?;
        Ok(e)
    }

    /// [`solve`](Self::solve) writing into `e`, reusing its storage.
    pub fn solve_into(&self, s: &BitVector, e: &mut BitVector) -> Result<()> {
        e.reset(self.cols);
        self.for_each_pivot_set(s, |c| e.set(c, true))
    }

    /// Minimum-weight solution by exhaustive search of the coset
    /// `e0 + ker(H)`. Limited to `n <= MAX_MINIMIZE_COLS`.
    pub fn solve_minimal(&self, s: &BitVector) -> Result<BitVector> {
        let mut e = BitVector::zeros(0);
        self.solve_minimal_into(s, &mut e)?;
        Ok(e)
    }

    /// [`solve_minimal`](Self::solve_minimal) writing into `e`.
    pub fn solve_minimal_into(&self, s: &BitVector, e: &mut BitVector) -> Result<()> {
        if self.cols > MAX_MINIMIZE_COLS {
            return Err(Error::MinimizeTooLarge {
                n: self.cols,
                max: MAX_MINIMIZE_COLS,
            });
        }
        debug_assert_eq!(self.reduced_cols, self.cols);
        let mut particular = 0u32;
        self.for_each_pivot_set(s, |c| particular |= 1 << c)?;

        // Gray-code walk over all 2^d kernel combinations.
        let mut current = particular;
        let (mut best, mut best_weight) = (current, current.count_ones());
        for step in 1u64..(1u64 << self.kernel.len()) {
            if best_weight == 0 {
                break;
            }
            current ^= self.kernel[step.trailing_zeros() as usize];
            let weight = current.count_ones();
            if weight < best_weight {
                (best, best_weight) = (current, weight);
            }
        }
        e.reset(self.cols);
        e.words_mut()[0] = u64::from(best);
        Ok(())
    }

    /// Computes `y = T s` row by row and calls `f` with the pivot column of
    /// every set `y_i`. Fails if a row beyond the rank is set.
    fn for_each_pivot_set(&self, s: &BitVector, mut f: impl FnMut(usize)) -> Result<()> {
        if s.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "syndrome of length {} for {} rows",
                s.len(),
                self.rows
            )));
        }
        let rank = self.rank();
        if self.stride - self.reduced_words == 1 {
            // Up to 64 rows: `y = T s` fits in one word.
            let sw = s.words()[0];
            let mut y = 0u64;
            for (r, row) in self.aug.chunks_exact(self.stride).enumerate() {
                y |= u64::from((row[self.reduced_words] & sw).count_ones() & 1) << r;
            }
            if y.checked_shr(rank as u32).unwrap_or(0) != 0 {
                return Err(Error::Infeasible);
            }
            while y != 0 {
                f(self.pivots[y.trailing_zeros() as usize]);
                y &= y - 1;
            }
            return Ok(());
        }
        // Check consistency first so that `f` only runs for solvable syndromes.
        for r in rank..self.rows {
            if parity_and(self.transform_row(r), s.words()) {
                return Err(Error::Infeasible);
            }
        }
        for (r, &c) in self.pivots.iter().enumerate() {
            if parity_and(self.transform_row(r), s.words()) {
                f(c);
            }
        }
        Ok(())
    }

    #[inline]
    fn transform_row(&self, r: usize) -> &[u64] {
        &self.aug[r * self.stride + self.reduced_words..(r + 1) * self.stride]
    }
}

/// Solves `H e = s`. With `minimize` the result is a coset leader
/// (only for `n <= 24`); otherwise the pivot-column particular solution.
pub fn solve_syndrome(h: &BitMatrix, s: &BitVector, minimize: bool) -> Result<BitVector> {
    let solver = SyndromeSolver::new(h);
    if minimize {
        solver.solve_minimal(s)
    } else {
        solver.solve(s)
    }
}
