//! Packed GF(2) vectors and matrices.
//!
//! Bits are stored least-significant-first inside each `u64` word: column `j`
//! of a row lives in word `j / 64`, bit `j % 64`. Padding bits past the last
//! column are always zero, which lets equality and popcounts work on whole
//! words.

use std::fmt;

use crate::error::{Error, Result};

#[inline]
pub(crate) fn words_for(bits: usize) -> usize {
    bits.div_ceil(64)
}

#[inline]
fn tail_mask(bits: usize) -> u64 {
    match bits % 64 {
        0 => u64::MAX,
        r => (1u64 << r) - 1,
    }
}

/// A packed bit vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn from_bools<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut v = Self::zeros(0);
        for b in bits {
            v.push(b);
        }
        v
    }

    /// Builds a vector from 0/1 bytes; any non-zero byte counts as 1.
    pub fn from_bits(bits: &[u8]) -> Self {
        Self::from_bools(bits.iter().map(|&b| b != 0))
    }

    pub(crate) fn from_words(len: usize, mut words: Vec<u64>) -> Self {
        words.resize(words_for(len), 0);
        if let Some(last) = words.last_mut() {
            *last &= tail_mask(len);
        }
        Self { len, words }
    }

    pub(crate) fn words_mut(&mut self) -> &mut [u64] {
        &mut self.words
    }

    /// Resizes to `len` zero bits, keeping the allocation.
    pub(crate) fn reset(&mut self, len: usize) {
        self.words.clear();
        self.words.resize(words_for(len), 0);
        self.len = len;
    }

    pub fn push(&mut self, bit: bool) {
        if self.len % 64 == 0 {
            self.words.push(0);
        }
        if bit {
            self.words[self.len / 64] |= 1 << (self.len % 64);
        }
        self.len += 1;
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % 64);
        if bit {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / 64] ^= 1 << (i % 64);
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Parity of the GF(2) inner product.
    pub fn dot(&self, other: &Self) -> Result<bool> {
        self.check_len(other)?;
        Ok(parity_and(&self.words, &other.words))
    }

    /// Integer inner product: number of positions where both bits are 1.
    pub fn and_count(&self, other: &Self) -> Result<usize> {
        self.check_len(other)?;
        Ok(self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum())
    }

    pub fn xor(&self, other: &Self) -> Result<Self> {
        self.check_len(other)?;
        Ok(Self {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a ^ b).collect(),
        })
    }

    /// Number of positions where the two vectors differ.
    pub fn hamming_distance(&self, other: &Self) -> Result<usize> {
        self.check_len(other)?;
        Ok(self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum())
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Indices of set bits, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
    }

    fn check_len(&self, other: &Self) -> Result<()> {
        if self.len != other.len {
            return Err(Error::DimensionMismatch(format!(
                "vector lengths {} and {}",
                self.len, other.len
            )));
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector[")?;
        for b in self.iter().take(128) {
            write!(f, "{}", b as u8)?;
        }
        if self.len > 128 {
            write!(f, "... ({} bits)", self.len)?;
        }
        write!(f, "]")
    }
}

#[inline]
pub(crate) fn parity_and(a: &[u64], b: &[u64]) -> bool {
    let mut acc = 0u64;
    for (x, y) in a.iter().zip(b) {
        acc ^= x & y;
    }
    acc.count_ones() & 1 == 1
}

#[inline]
pub(crate) fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

/// A dense, row-major, bit-packed matrix over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::ZeroDimension { rows, cols });
        }
        let stride = words_for(cols);
        Ok(Self {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n, n)?;
        for i in 0..n {
            m.set(i, i, true);
        }
        Ok(m)
    }

    /// Builds a matrix from rows of 0/1 bytes.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = Self::zeros(rows.len(), cols)?;
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            for (j, &b) in row.iter().enumerate() {
                if b != 0 {
                    m.set(i, j, true);
                }
            }
        }
        Ok(m)
    }

    /// An `n x 1` column matrix holding `v`.
    pub fn column(v: &BitVector) -> Result<Self> {
        let mut m = Self::zeros(v.len(), 1)?;
        for i in v.ones() {
            m.data[i] = 1;
        }
        Ok(m)
    }

    /// A `1 x n` row matrix holding `v`.
    pub fn row_matrix(v: &BitVector) -> Result<Self> {
        let mut m = Self::zeros(1, v.len())?;
        m.data.copy_from_slice(v.words());
        Ok(m)
    }

    /// Wraps packed row words. Padding bits are cleared.
    pub(crate) fn from_row_words(rows: usize, cols: usize, mut data: Vec<u64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::ZeroDimension { rows, cols });
        }
        let stride = words_for(cols);
        assert_eq!(data.len(), rows * stride);
        let mask = tail_mask(cols);
        for r in 0..rows {
            data[r * stride + stride - 1] &= mask;
        }
        Ok(Self {
            rows,
            cols,
            stride,
            data,
        })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Words per packed row.
    #[inline]
    pub fn stride(&self) -> usize {
        self.stride
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols, "({r},{c}) out of range");
        self.data[r * self.stride + c / 64] >> (c % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, bit: bool) {
        assert!(r < self.rows && c < self.cols, "({r},{c}) out of range");
        let w = &mut self.data[r * self.stride + c / 64];
        let mask = 1u64 << (c % 64);
        if bit {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    #[inline]
    pub(crate) fn row_words_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row(&self, r: usize) -> BitVector {
        BitVector::from_words(self.cols, self.row_words(r).to_vec())
    }

    pub fn count_ones(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    /// Flattens a row or column matrix into a vector.
    pub fn to_vector(&self) -> Option<BitVector> {
        if self.rows == 1 {
            Some(self.row(0))
        } else if self.cols == 1 {
            Some(BitVector::from_bools((0..self.rows).map(|r| self.data[r * self.stride] & 1 == 1)))
        } else {
            None
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows).expect("non-zero dims");
        for r in 0..self.rows {
            let row = self.row_words(r);
            for (wi, &w) in row.iter().enumerate() {
                let mut w = w;
                while w != 0 {
                    let c = wi * 64 + w.trailing_zeros() as usize;
                    w &= w - 1;
                    t.data[c * t.stride + r / 64] |= 1 << (r % 64);
                }
            }
        }
        t
    }

    /// Entrywise sum mod 2.
    pub fn xor(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "xor of {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            stride: self.stride,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a ^ b).collect(),
        })
    }

    /// Matrix product over GF(2).
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "matmul of {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols)?;
        if other.cols <= 64 {
            // Narrow right operand: inner products against its transpose.
            let bt = other.transpose();
            for i in 0..self.rows {
                let a = self.row_words(i);
                for j in 0..other.cols {
                    if parity_and(a, bt.row_words(j)) {
                        out.data[i * out.stride + j / 64] |= 1 << (j % 64);
                    }
                }
            }
        } else {
            for i in 0..self.rows {
                let (a, o) = (
                    &self.data[i * self.stride..(i + 1) * self.stride],
                    &mut out.data[i * other.stride..(i + 1) * other.stride],
                );
                for (wi, &w) in a.iter().enumerate() {
                    let mut w = w;
                    while w != 0 {
                        let t = wi * 64 + w.trailing_zeros() as usize;
                        w &= w - 1;
                        xor_into(o, other.row_words(t));
                    }
                }
            }
        }
        Ok(out)
    }

    /// `self * v` for a column vector `v`.
    pub fn mul_vec(&self, v: &BitVector) -> Result<BitVector> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix times length-{} vector",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok(BitVector::from_bools(
            (0..self.rows).map(|r| parity_and(self.row_words(r), v.words())),
        ))
    }

    /// Row rank over GF(2).
    pub fn rank(&self) -> usize {
        // The leading columns of a random-looking matrix almost always carry
        // the full row rank; only fall back to the whole width when they don't.
        let prefix = self.cols.min((self.rows + 64).next_multiple_of(64));
        let r = rank_of_words(self.rows, self.stride, words_for(prefix), &self.data, prefix);
        if r == self.rows || prefix == self.cols {
            return r;
        }
        rank_of_words(self.rows, self.stride, self.stride, &self.data, self.cols)
    }
}

/// Gaussian elimination on the first `width` columns (spanning `take` words
/// per row) of a packed matrix.
fn rank_of_words(rows: usize, stride: usize, take: usize, data: &[u64], width: usize) -> usize {
    let mut m: Vec<u64> = Vec::with_capacity(rows * take);
    for r in 0..rows {
        m.extend_from_slice(&data[r * stride..r * stride + take]);
    }
    let mut rank = 0;
    for c in 0..width {
        if rank == rows {
            break;
        }
        let (wi, bit) = (c / 64, 1u64 << (c % 64));
        let Some(p) = (rank..rows).find(|&r| m[r * take + wi] & bit != 0) else {
            continue;
        };
        if p != rank {
            for w in wi..take {
                m.swap(p * take + w, rank * take + w);
            }
        }
        let pivot: Vec<u64> = m[rank * take + wi..(rank + 1) * take].to_vec();
        for r in rank + 1..rows {
            if m[r * take + wi] & bit != 0 {
                xor_into(&mut m[r * take + wi..(r + 1) * take], &pivot);
            }
        }
        rank += 1;
    }
    rank
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows.min(16) {
            for c in 0..self.cols.min(96) {
                write!(f, "{}", self.get(r, c) as u8)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
