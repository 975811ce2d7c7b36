//! 8-bit grayscale rasters, binary PGM (P5) I/O and synthetic covers.

use std::f64::consts::TAU;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Grayscale image stored row by row, top row first.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl std::fmt::Debug for GrayImage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GrayImage({}x{})", self.width, self.height)
    }
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::ZeroDimension {
                rows: height,
                cols: width,
            });
        }
        if width.checked_mul(height) != Some(pixels.len()) {
            return Err(Error::DimensionMismatch(format!(
                "{} pixels for a {width}x{height} image",
                pixels.len()
            )));
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self> {
        Self::new(width, height, vec![value; width.saturating_mul(height)])
    }

    /// Builds an image from raster rows.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let width = rows.first().map_or(0, |r| r.as_ref().len());
        let mut pixels = Vec::with_capacity(width * rows.len());
        for r in rows {
            if r.as_ref().len() != width {
                return Err(Error::DimensionMismatch("ragged raster rows".into()));
            }
            pixels.extend_from_slice(r.as_ref());
        }
        Self::new(width, rows.len(), pixels)
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    /// Number of pixels, `w * r`.
    #[inline]
    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.pixels[row * self.width + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: u8) {
        self.pixels[row * self.width + col] = value;
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn pixels_mut(&mut self) -> &mut [u8] {
        &mut self.pixels
    }

    pub fn same_dims(&self, other: &Self) -> bool {
        self.width == other.width && self.height == other.height
    }
}

fn is_pgm_space(b: u8) -> bool {
    matches!(b, b' ' | b'\t' | b'\n' | b'\r' | 0x0b | 0x0c)
}

/// Header reader: skips whitespace and `#` comments between tokens.
struct Header<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Header<'_> {
    fn skip_space(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b'#' => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                b if is_pgm_space(b) => self.pos += 1,
                _ => break,
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        self.skip_space();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::Pgm(format!("missing {what}")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Pgm(format!("{what} out of range")))
    }
}

/// Parses a binary 8-bit PGM.
pub fn read_pgm(bytes: &[u8]) -> Result<GrayImage> {
    if bytes.len() < 2 || &bytes[..2] != b"P5" {
        return Err(Error::Pgm("bad magic, expected P5".into()));
    }
    let mut h = Header { bytes, pos: 2 };
    let width = h.number("width")?;
    let height = h.number("height")?;
    let maxval = h.number("maxval")?;
    if maxval != 255 {
        return Err(Error::Pgm(format!("unsupported maxval {maxval}, only 255")));
    }
    // Exactly one whitespace byte separates the header from the raster.
    match bytes.get(h.pos) {
        Some(&b) if is_pgm_space(b) => h.pos += 1,
        _ => return Err(Error::Pgm("missing raster separator".into())),
    }
    if width == 0 || height == 0 {
        return Err(Error::Pgm(format!("empty image {width}x{height}")));
    }
    let size = width
        .checked_mul(height)
        .ok_or_else(|| Error::Pgm("dimension overflow".into()))?;
    let raster = &bytes[h.pos..];
    if raster.len() < size {
        return Err(Error::Pgm(format!(
            "truncated raster: {} of {size} bytes",
            raster.len()
        )));
    }
    GrayImage::new(width, height, raster[..size].to_vec())
}

/// Canonical encoding: `P5\n<w> <h>\n255\n` followed by the raster.
pub fn write_pgm(img: &GrayImage) -> Vec<u8> {
    let header = format!("P5\n{} {}\n255\n", img.width, img.height);
    let mut out = Vec::with_capacity(header.len() + img.len());
    out.extend_from_slice(header.as_bytes());
    out.extend_from_slice(&img.pixels);
    out
}

pub fn load_pgm(path: impl AsRef<Path>) -> Result<GrayImage> {
    read_pgm(&std::fs::read(path)?)
}

pub fn save_pgm(img: &GrayImage, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, write_pgm(img))?;
    Ok(())
}

/// Deterministic pseudo-natural test image: a few low-frequency seeded
/// sinusoids around mid-gray plus integer noise in `[-4, 4]`, clamped.
pub fn synth_cover(seed: u64, width: usize, height: usize) -> Result<GrayImage> {
    if width == 0 || height == 0 {
        return Err(Error::ZeroDimension {
            rows: height,
            cols: width,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let waves: Vec<(f64, f64, f64, f64)> = (0..4)
        .map(|_| {
            (
                rng.gen_range(10.0..35.0),
                rng.gen_range(-3.0..3.0),
                rng.gen_range(-3.0..3.0),
                rng.gen_range(0.0..TAU),
            )
        })
        .collect();
    // sin(a + b) = sin a cos b + cos a sin b, tabulated per column and row.
    let col_terms: Vec<Vec<(f64, f64)>> = waves
        .iter()
        .map(|&(_, fx, _, _)| {
            (0..width)
                .map(|x| (TAU * fx * x as f64 / width as f64).sin_cos())
                .collect()
        })
        .collect();
    let mut pixels = Vec::with_capacity(width * height);
    for y in 0..height {
        let row_terms: Vec<(f64, f64)> = waves
            .iter()
            .map(|&(_, _, fy, phase)| (TAU * fy * y as f64 / height as f64 + phase).sin_cos())
            .collect();
        for x in 0..width {
            let mut base = 128.0;
            for (i, &(amp, ..)) in waves.iter().enumerate() {
                let (sx, cx) = col_terms[i][x];
                let (sy, cy) = row_terms[i];
                base += amp * (sx * cy + cx * sy);
            }
            let noise = rng.gen_range(-4i32..=4);
            pixels.push((base.round() as i32 + noise).clamp(0, 255) as u8);
        }
    }
    GrayImage::new(width, height, pixels)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_minimal_pgm() {
        let mut b = b"P5\n2 2\n255\n".to_vec();
        b.extend([7, 8, 5, 6]);
        let img = read_pgm(&b).unwrap();
        assert_eq!(img, GrayImage::from_rows(&[[7, 8], [5, 6]]).unwrap());
        assert_eq!(write_pgm(&img), b);
    }

    #[test]
    fn header_comments_and_spacing() {
        let mut b = b"P5 # made by hand\n3\t1 # w h\n  255\n".to_vec();
        b.extend([1, 2, 3]);
        let img = read_pgm(&b).unwrap();
        assert_eq!((img.width(), img.height()), (3, 1));
        assert_eq!(img.pixels(), &[1, 2, 3]);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(read_pgm(b"P2\n1 1\n255\n0").is_err());
        let err = read_pgm(b"P5\n1 1\n65535\n\0\0").unwrap_err();
        assert!(err.to_string().contains("maxval"));
        assert!(read_pgm(b"P5\n2 2\n255\n\x01\x02").unwrap_err().to_string().contains("truncated"));
        assert!(read_pgm(b"P5\n99999999999999999999 2\n255\n").is_err());
        assert!(read_pgm(b"P5\n4294967296 4294967296\n255\n").is_err());
    }

    #[test]
    fn single_pixel_encoding() {
        let img = GrayImage::from_rows(&[[0]]).unwrap();
        assert_eq!(write_pgm(&img), b"P5\n1 1\n255\n\0");
    }

    #[test]
    fn synth_is_deterministic_and_seed_sensitive() {
        let a = synth_cover(3, 40, 30).unwrap();
        assert_eq!(a, synth_cover(3, 40, 30).unwrap());
        for s in 0..9u64 {
            let x = synth_cover(s, 64, 48).unwrap();
            let y = synth_cover(s + 1, 64, 48).unwrap();
            let differing = x.pixels().iter().zip(y.pixels()).filter(|(p, q)| p != q).count();
            assert!(differing * 100 >= x.len(), "seeds {s},{} differ in {differing}", s + 1);
        }
    }
}
