//! Server-side computation on stego images, receiver-side recovery, and the
//! binary result container.
//!
//! The server never sees a key. It combines the flattened LSB vectors
//! `c1`, `c2` of two stego images:
//!
//! * add:   `c' = c1 ^ c2`, written back into the LSBs of `Y1`;
//!          the receiver computes `H c' = m1 ^ m2`.
//! * outer: `C' = c1 c2^T` (a `wr x wr` matrix, shipped packed);
//!          the receiver computes `H C' H^T = m1 m2^T`.
//! * inner: `c1^T c2`, which equals `m1^T m2` when `H` is a permutation.
//!          Available as a parity bit or as an integer count.
//!
//! Inner products leave the result readable by the server. No blinding is
//! applied.

use std::fmt;

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector, HidingKey, MatrixMode};
use crate::image::{read_pgm, write_pgm, GrayImage};
use crate::stego::{lsb_vector, with_lsb_vector, Codec, Payload};

/// Largest `w * r` for which the outer product is materialized by default.
pub const DEFAULT_OUTER_CAP: usize = 8192;

const MAGIC: &[u8; 4] = b"DCCD";
const VERSION: u8 = 1;
const HEADER_LEN: usize = 4 + 1 + 1 + 1 + 4 + 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Case {
    Add,
    Outer,
    Inner,
}

impl Case {
    fn code(self) -> u8 {
        match self {
            Case::Add => 1,
            Case::Outer => 2,
            Case::Inner => 3,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Case::Add => "add",
            Case::Outer => "outer",
            Case::Inner => "inner",
        }
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Arithmetic of the inner product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Semantics {
    /// Parity, `sum mod 2`.
    #[default]
    Gf2,
    /// Plain count of coinciding ones.
    Integer,
}

impl Semantics {
    fn code(self) -> u8 {
        match self {
            Semantics::Gf2 => 0,
            Semantics::Integer => 1,
        }
    }
}

/// Output of a server-side computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CovertResult {
    /// `Y'`: `Y1` with its LSB plane replaced by `c1 ^ c2`.
    Add { carrier: GrayImage },
    /// `c1 c2^T`, `wr x wr`.
    Outer { product: BitMatrix },
    /// `c1^T c2` under the given semantics.
    Inner { semantics: Semantics, value: u64 },
}

impl CovertResult {
    pub fn case(&self) -> Case {
        match self {
            CovertResult::Add { .. } => Case::Add,
            CovertResult::Outer { .. } => Case::Outer,
            CovertResult::Inner { .. } => Case::Inner,
        }
    }

    fn wrong(&self, expected: Case) -> Error {
        Error::WrongCase {
            expected: expected.name(),
            found: self.case().name(),
        }
    }

    /// Serializes into the `DCCD` container (big-endian header).
    pub fn to_bytes(&self) -> Vec<u8> {
        let (semantics, rows, cols) = match self {
            CovertResult::Add { carrier } => (0, carrier.height(), carrier.width()),
            CovertResult::Outer { product } => (0, product.rows(), product.cols()),
            CovertResult::Inner { semantics, .. } => (semantics.code(), 1, 1),
        };
        let mut out = Vec::with_capacity(HEADER_LEN);
        out.extend_from_slice(MAGIC);
        out.push(VERSION);
        out.push(self.case().code());
        out.push(semantics);
        out.extend_from_slice(&(rows as u32).to_be_bytes());
        out.extend_from_slice(&(cols as u32).to_be_bytes());
        match self {
            CovertResult::Add { carrier } => out.extend_from_slice(&write_pgm(carrier)),
            CovertResult::Outer { product } => out.extend_from_slice(&pack_rows(product)),
            CovertResult::Inner { value, .. } => out.extend_from_slice(&value.to_be_bytes()),
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let bad = |m: &str| Error::Container(m.to_string());
        if bytes.len() < HEADER_LEN {
            return Err(bad("truncated header"));
        }
        if &bytes[..4] != MAGIC {
            return Err(bad("bad magic"));
        }
        if bytes[4] != VERSION {
            return Err(Error::Container(format!("unsupported version {}", bytes[4])));
        }
        let (case, semantics) = (bytes[5], bytes[6]);
        let rows = u32::from_be_bytes(bytes[7..11].try_into().unwrap()) as usize;
        let cols = u32::from_be_bytes(bytes[11..15].try_into().unwrap()) as usize;
        let body = &bytes[HEADER_LEN..];
        if case != 3 && semantics != 0 {
            return Err(bad("semantics byte must be 0 outside the inner case"));
        }
        match case {
            1 => {
                let carrier = read_pgm(body)?;
                if carrier.height() != rows || carrier.width() != cols {
                    return Err(bad("carrier dimensions disagree with header"));
                }
                Ok(CovertResult::Add { carrier })
            }
            2 => {
                let row_bytes = cols.div_ceil(8);
                if rows == 0 || cols == 0 || body.len() != rows * row_bytes {
                    return Err(bad("outer payload length disagrees with header"));
                }
                let mut product = BitMatrix::zeros(rows, cols)?;
                for r in 0..rows {
                    let row = &body[r * row_bytes..(r + 1) * row_bytes];
                    for c in 0..cols {
                        if row[c / 8] >> (7 - c % 8) & 1 == 1 {
                            product.set(r, c, true);
                        }
                    }
                }
                Ok(CovertResult::Outer { product })
            }
            3 => {
                let semantics = match semantics {
                    0 => Semantics::Gf2,
                    1 => Semantics::Integer,
                    s => return Err(Error::Container(format!("unknown semantics {s}"))),
                };
                if (rows, cols) != (1, 1) || body.len() != 8 {
                    return Err(bad("inner payload must be a single 8-byte count"));
                }
                let value = u64::from_be_bytes(body.try_into().unwrap());
                if semantics == Semantics::Gf2 && value > 1 {
                    return Err(bad("gf2 inner result must be 0 or 1"));
                }
                Ok(CovertResult::Inner { semantics, value })
            }
            c => Err(Error::Container(format!("unknown case {c}"))),
        }
    }
}

/// Rows padded to a byte boundary, most significant bit first.
fn pack_rows(m: &BitMatrix) -> Vec<u8> {
    let row_bytes = m.cols().div_ceil(8);
    let mut out = vec![0u8; m.rows() * row_bytes];
    for r in 0..m.rows() {
        for c in m.row(r).ones() {
            out[r * row_bytes + c / 8] |= 0x80 >> (c % 8);
        }
    }
    out
}

fn same_dims(y1: &GrayImage, y2: &GrayImage) -> Result<()> {
    if !y1.same_dims(y2) {
        return Err(Error::DimensionMismatch(format!(
            "stego images {}x{} and {}x{}",
            y1.width(),
            y1.height(),
            y2.width(),
            y2.height()
        )));
    }
    Ok(())
}

/// Adds the hidden vectors: `Y'` carries `c1 ^ c2` in the LSBs of `Y1`.
pub fn covert_add(y1: &GrayImage, y2: &GrayImage) -> Result<CovertResult> {
    same_dims(y1, y2)?;
    let sum = lsb_vector(y1).xor(&lsb_vector(y2))?;
    Ok(CovertResult::Add {
        carrier: with_lsb_vector(y1, &sum)?,
    })
}

/// Outer product `c1 c2^T`, refused when `w * r > cap`.
pub fn covert_outer(y1: &GrayImage, y2: &GrayImage, cap: usize) -> Result<CovertResult> {
    same_dims(y1, y2)?;
    let n = y1.len();
    if n > cap {
        return Err(Error::OuterCapExceeded { needed: n, cap });
    }
    let (c1, c2) = (lsb_vector(y1), lsb_vector(y2));
    let mut product = BitMatrix::zeros(n, n)?;
    for s in c1.ones() {
        product.row_words_mut(s).copy_from_slice(c2.words());
    }
    Ok(CovertResult::Outer { product })
}

/// Inner product `c1^T c2`.
pub fn covert_inner(y1: &GrayImage, y2: &GrayImage, semantics: Semantics) -> Result<CovertResult> {
    same_dims(y1, y2)?;
    let (c1, c2) = (lsb_vector(y1), lsb_vector(y2));
    let value = match semantics {
        Semantics::Gf2 => u64::from(c1.dot(&c2)?),
        Semantics::Integer => c1.and_count(&c2)? as u64,
    };
    Ok(CovertResult::Inner { semantics, value })
}

/// `H c'` from an add result, using an existing codec.
pub fn recover_add_with(res: &CovertResult, codec: &Codec) -> Result<Payload> {
    match res {
        CovertResult::Add { carrier } => codec.extract(carrier),
        other => Err(other.wrong(Case::Add)),
    }
}

/// Receiver side of the add case: returns `m1 ^ m2`.
pub fn recover_add(res: &CovertResult, key: &HidingKey, k: usize) -> Result<Payload> {
    let CovertResult::Add { carrier } = res else {
        return Err(res.wrong(Case::Add));
    };
    let codec = Codec::for_cover(key, k, carrier, MatrixMode::General)?;
    recover_add_with(res, &codec)
}

/// `H C' H^T` for an outer result and a known `H`.
pub fn recover_outer_with(res: &CovertResult, h: &BitMatrix) -> Result<BitMatrix> {
    let CovertResult::Outer { product } = res else {
        return Err(res.wrong(Case::Outer));
    };
    if product.rows() != h.cols() || product.cols() != h.cols() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} outer result for a {}x{} key matrix",
            product.rows(),
            product.cols(),
            h.rows(),
            h.cols()
        )));
    }
    h.matmul(product)?.matmul(&h.transpose())
}

/// Receiver side of the outer case: returns the `k x k` matrix `m1 m2^T`.
pub fn recover_outer(res: &CovertResult, key: &HidingKey, k: usize) -> Result<BitMatrix> {
    let CovertResult::Outer { product } = res else {
        return Err(res.wrong(Case::Outer));
    };
    let h = crate::gf2::generate_matrix(key, k, product.cols(), MatrixMode::General)?;
    recover_outer_with(res, &h)
}

/// Inner results are already in the clear; this unwraps the scalar.
pub fn recover_inner(res: &CovertResult) -> Result<u64> {
    match res {
        CovertResult::Inner { value, .. } => Ok(*value),
        other => Err(other.wrong(Case::Inner)),
    }
}

/// Plaintext `m1 m2^T` over GF(2).
pub fn plain_outer(m1: &BitVector, m2: &BitVector) -> Result<BitMatrix> {
    BitMatrix::column(m1)?.matmul(&BitMatrix::row_matrix(m2)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::generate_matrix;

    fn img(lsbs: &[u8], base: u8) -> GrayImage {
        GrayImage::new(lsbs.len(), 1, lsbs.iter().map(|b| base + b).collect()).unwrap()
    }

    #[test]
    fn add_xors_lsbs_and_keeps_upper_planes() {
        let y1 = img(&[1, 0, 1, 1], 100);
        let y2 = img(&[1, 1, 0, 1], 40);
        let CovertResult::Add { carrier } = covert_add(&y1, &y2).unwrap() else { panic!() };
        assert_eq!(lsb_vector(&carrier), BitVector::from_bits(&[0, 1, 1, 0]));
        assert!(carrier.pixels().iter().zip(y1.pixels()).all(|(a, b)| a >> 1 == b >> 1));
        let zero = img(&[0, 0, 0, 0], 2);
        let CovertResult::Add { carrier } = covert_add(&y1, &zero).unwrap() else { panic!() };
        assert_eq!(carrier, y1);
    }

    #[test]
    fn outer_examples() {
        let CovertResult::Outer { product } = covert_outer(&img(&[1, 0], 0), &img(&[1, 1], 0), 8).unwrap() else {
            panic!()
        };
        assert_eq!(product, BitMatrix::from_rows(&[[1, 1], [0, 0]]).unwrap());
        let CovertResult::Outer { product } = covert_outer(&img(&[0, 0, 0], 0), &img(&[1, 1, 0], 0), 8).unwrap() else {
            panic!()
        };
        assert!(product.is_zero());
        assert!(matches!(
            covert_outer(&img(&[0; 9], 0), &img(&[0; 9], 0), 8),
            Err(Error::OuterCapExceeded { .. })
        ));
    }

    #[test]
    fn inner_hand_example() {
        // H = [[0,1],[1,0]], c1 = [1,1], c2 = [0,1] -> m1 = [1,1], m2 = [1,0].
        let h = BitMatrix::from_rows(&[[0, 1], [1, 0]]).unwrap();
        let (c1, c2) = (BitVector::from_bits(&[1, 1]), BitVector::from_bits(&[0, 1]));
        let (m1, m2) = (h.mul_vec(&c1).unwrap(), h.mul_vec(&c2).unwrap());
        assert_eq!(m1.and_count(&m2).unwrap(), 1);
        for sem in [Semantics::Gf2, Semantics::Integer] {
            let r = covert_inner(&img(&[1, 1], 0), &img(&[0, 1], 0), sem).unwrap();
            assert_eq!(recover_inner(&r).unwrap(), 1);
            let r = covert_inner(&img(&[1, 1], 0), &img(&[0, 0], 0), sem).unwrap();
            assert_eq!(recover_inner(&r).unwrap(), 0);
        }
    }

    #[test]
    fn wrong_case_and_dims() {
        let inner = CovertResult::Inner {
            semantics: Semantics::Integer,
            value: 7,
        };
        assert_eq!(recover_inner(&inner).unwrap(), 7);
        let key = HidingKey::new(*b"k").unwrap();
        assert!(matches!(recover_add(&inner, &key, 1), Err(Error::WrongCase { .. })));
        assert!(matches!(recover_outer(&inner, &key, 1), Err(Error::WrongCase { .. })));
        let add = covert_add(&img(&[1], 0), &img(&[1], 0)).unwrap();
        assert!(recover_inner(&add).is_err());
        assert!(covert_add(&img(&[1, 0], 0), &img(&[1], 0)).is_err());

        let outer = covert_outer(&img(&[1, 0, 1], 0), &img(&[1, 1, 1], 0), 8).unwrap();
        let h = generate_matrix(&key, 2, 4, MatrixMode::General).unwrap();
        assert!(recover_outer_with(&outer, &h).is_err());
    }

    #[test]
    fn container_layout() {
        let r = CovertResult::Inner {
            semantics: Semantics::Integer,
            value: 258,
        };
        let b = r.to_bytes();
        assert_eq!(&b[..7], b"DCCD\x01\x03\x01");
        assert_eq!(&b[7..15], &[0, 0, 0, 1, 0, 0, 0, 1]);
        assert_eq!(&b[15..], &[0, 0, 0, 0, 0, 0, 1, 2]);
        assert_eq!(CovertResult::from_bytes(&b).unwrap(), r);

        let outer = CovertResult::Outer {
            product: BitMatrix::from_rows(&[[1, 0, 0, 0, 0, 0, 0, 0, 1], [0; 9]]).unwrap(),
        };
        let b = outer.to_bytes();
        assert_eq!(&b[5..7], &[2, 0]);
        assert_eq!(&b[15..], &[0x80, 0x80, 0, 0]);
        assert_eq!(CovertResult::from_bytes(&b).unwrap(), outer);

        let add = covert_add(&img(&[1, 0, 1], 8), &img(&[0, 0, 1], 8)).unwrap();
        let b = add.to_bytes();
        assert_eq!(&b[7..15], &[0, 0, 0, 1, 0, 0, 0, 3]);
        assert_eq!(&b[15..17], b"P5");
        assert_eq!(CovertResult::from_bytes(&b).unwrap(), add);
    }

    #[test]
    fn container_rejects_garbage() {
        assert!(CovertResult::from_bytes(b"DCCD").is_err());
        let mut b = CovertResult::Inner {
            semantics: Semantics::Gf2,
            value: 1,
        }
        .to_bytes();
        b[0] = b'X';
        assert!(CovertResult::from_bytes(&b).is_err());
        b[0] = b'D';
        b[4] = 2;
        assert!(CovertResult::from_bytes(&b).is_err());
        b[4] = 1;
        b[5] = 9;
        assert!(CovertResult::from_bytes(&b).is_err());
        b[5] = 3;
        *b.last_mut().unwrap() = 5;
        assert!(CovertResult::from_bytes(&b).is_err());
    }
}
