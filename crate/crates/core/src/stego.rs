//! Sender and receiver endpoints: LSB planes, flattening, matrix embedding
//! of a payload into a cover and extraction from a stego image.
//!
//! The cover's LSB plane is cascaded row by row into `c`. Embedding flips
//! the fewest LSBs the solver finds so that `H c = m`, with `H` derived from
//! the hiding key; extraction simply recomputes `H c`.

use std::path::Path;

use rand::Rng;

use crate::error::{Error, Result};
use crate::gf2::{generate_with_solver, BitMatrix, BitVector, HidingKey, MatrixMode, SyndromeSolver};
use crate::image::GrayImage;

/// Secret source data: a non-empty bit vector.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Payload(BitVector);

impl Payload {
    pub fn new(bits: BitVector) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::EmptyPayload);
        }
        Ok(Self(bits))
    }

    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        Self::new(BitVector::from_bits(bits))
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R, k: usize) -> Result<Self> {
        Self::new(BitVector::from_bools((0..k).map(|_| rng.gen::<bool>())))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &BitVector {
        &self.0
    }

    pub fn into_bits(self) -> BitVector {
        self.0
    }

    /// Packs the bits most-significant-bit first, zero-padding the last byte.
    pub fn to_bytes(&self) -> Vec<u8> {
        pack_msb_first(&self.0)
    }

    /// Reads the first `k` bits of an MSB-first packed buffer.
    pub fn from_bytes(bytes: &[u8], k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::EmptyPayload);
        }
        if bytes.len() * 8 < k {
            return Err(Error::InvalidInput(format!(
                "payload file holds {} bits, {k} requested",
                bytes.len() * 8
            )));
        }
        Self::new(BitVector::from_bools(
            (0..k).map(|i| bytes[i / 8] >> (7 - i % 8) & 1 == 1),
        ))
    }

    pub fn load(path: impl AsRef<Path>, k: usize) -> Result<Self> {
        Self::from_bytes(&std::fs::read(path)?, k)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_bytes())?;
        Ok(())
    }
}

pub(crate) fn pack_msb_first(bits: &BitVector) -> Vec<u8> {
    let mut out = vec![0u8; bits.len().div_ceil(8)];
    for i in bits.ones() {
        out[i / 8] |= 0x80 >> (i % 8);
    }
    out
}

/// LSB plane as a `height x width` matrix: entry `(row, col)` is
/// `pixel(row, col) mod 2`.
pub fn extract_lsb_plane(img: &GrayImage) -> BitMatrix {
    let mut plane = BitMatrix::zeros(img.height(), img.width()).expect("image dims are positive");
    for r in 0..img.height() {
        for c in 0..img.width() {
            if img.get(r, c) & 1 == 1 {
                plane.set(r, c, true);
            }
        }
    }
    plane
}

/// Substitutes the LSB plane; the upper seven bitplanes are untouched.
pub fn replace_lsb_plane(img: &GrayImage, plane: &BitMatrix) -> Result<GrayImage> {
    if plane.rows() != img.height() || plane.cols() != img.width() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} plane for a {}x{} image",
            plane.rows(),
            plane.cols(),
            img.height(),
            img.width()
        )));
    }
    let mut out = img.clone();
    for r in 0..img.height() {
        for c in 0..img.width() {
            out.set(r, c, (img.get(r, c) & !1) | u8::from(plane.get(r, c)));
        }
    }
    Ok(out)
}

/// Row-major cascade of a plane into a vector of length `rows * cols`.
pub fn flatten(plane: &BitMatrix) -> BitVector {
    BitVector::from_bools((0..plane.rows()).flat_map(|r| (0..plane.cols()).map(move |c| plane.get(r, c))))
}

pub fn unflatten(v: &BitVector, rows: usize, cols: usize) -> Result<BitMatrix> {
    if rows.checked_mul(cols) != Some(v.len()) {
        return Err(Error::DimensionMismatch(format!(
            "{} bits into a {rows}x{cols} plane",
            v.len()
        )));
    }
    let mut m = BitMatrix::zeros(rows, cols)?;
    for i in v.ones() {
        m.set(i / cols, i % cols, true);
    }
    Ok(m)
}

/// `flatten(extract_lsb_plane(img))` without the intermediate plane.
pub fn lsb_vector(img: &GrayImage) -> BitVector {
    BitVector::from_bools(img.pixels().iter().map(|p| p & 1 == 1))
}

/// Writes a flattened LSB vector back into the image.
pub fn with_lsb_vector(img: &GrayImage, bits: &BitVector) -> Result<GrayImage> {
    if bits.len() != img.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} bits for {} pixels",
            bits.len(),
            img.len()
        )));
    }
    let mut out = img.clone();
    for (p, b) in out.pixels_mut().iter_mut().zip(bits.iter()) {
        *p = (*p & !1) | u8::from(b);
    }
    Ok(out)
}

/// Keyed embedder/extractor for a fixed payload length and cover size.
///
/// Building a codec derives `H` and factors it once; every embed after that
/// costs one `H c` product plus one `k x k` solve.
#[derive(Debug, Clone)]
pub struct Codec {
    h: BitMatrix,
    solver: SyndromeSolver,
    mode: MatrixMode,
}

impl Codec {
    /// `k` payload bits in covers of `n = w * r` pixels.
    pub fn new(key: &HidingKey, k: usize, n: usize, mode: MatrixMode) -> Result<Self> {
        if k == 0 {
            return Err(Error::EmptyPayload);
        }
        if k > n {
            return Err(Error::CapacityExceeded { k, capacity: n });
        }
        let (h, solver) = generate_with_solver(key, k, n, mode)?;
        Ok(Self { h, solver, mode })
    }

    /// Codec sized for `cover`. Permutation mode forces `k = w * r`.
    pub fn for_cover(key: &HidingKey, k: usize, cover: &GrayImage, mode: MatrixMode) -> Result<Self> {
        Self::new(key, k, cover.len(), mode)
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.h
    }

    pub fn mode(&self) -> MatrixMode {
        self.mode
    }

    pub fn payload_len(&self) -> usize {
        self.h.rows()
    }

    pub fn cover_len(&self) -> usize {
        self.h.cols()
    }

    fn check_cover(&self, img: &GrayImage) -> Result<()> {
        if img.len() != self.cover_len() {
            return Err(Error::DimensionMismatch(format!(
                "codec built for {} pixels, image has {}",
                self.cover_len(),
                img.len()
            )));
        }
        Ok(())
    }

    /// Flips cover LSBs so that the stego extracts to `m`.
    pub fn embed(&self, cover: &GrayImage, m: &Payload, minimize: bool) -> Result<GrayImage> {
        self.check_cover(cover)?;
        if m.len() != self.payload_len() {
            return Err(Error::DimensionMismatch(format!(
                "payload of {} bits for a {}-bit codec",
                m.len(),
                self.payload_len()
            )));
        }
        let c = lsb_vector(cover);
        let syndrome = self.h.mul_vec(&c)?.xor(m.bits())?;
        let change = if minimize {
            self.solver.solve_minimal(&syndrome)?
        } else {
            self.solver.solve(&syndrome)?
        };
        let mut stego = cover.clone();
        let px = stego.pixels_mut();
        for i in change.ones() {
            px[i] ^= 1;
        }
        Ok(stego)
    }

    pub fn extract(&self, stego: &GrayImage) -> Result<Payload> {
        self.check_cover(stego)?;
        Payload::new(self.h.mul_vec(&lsb_vector(stego))?)
    }
}

/// One-shot embedding with a general-mode matrix.
pub fn embed(cover: &GrayImage, m: &Payload, key: &HidingKey, minimize: bool) -> Result<GrayImage> {
    Codec::for_cover(key, m.len(), cover, MatrixMode::General)?.embed(cover, m, minimize)
}

/// One-shot extraction of `k` bits with a general-mode matrix.
pub fn extract(stego: &GrayImage, key: &HidingKey, k: usize) -> Result<Payload> {
    Codec::for_cover(key, k, stego, MatrixMode::General)?.extract(stego)
}
