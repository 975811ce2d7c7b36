//! Textbook RSA with a fixed 256-bit modulus, used only as a timing
//! baseline. No padding, fixed primes, deterministic output: this is not a
//! secure encryption scheme.

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::gf2::BitVector;

pub const BLOCK_BITS: usize = 128;
pub const PUBLIC_EXPONENT: u32 = 65537;

const P_HEX: &str = "c3a5c85c97cb3127b0c4f1e5d3a2b7ff";
const Q_HEX: &str = "e7037ed1a0b428dba3c9f4e8b1d2c711";
const D_HEX: &str = "90ca59899a6a77312fdf9cac4f0e6f2172e6ebd03617abe1c58e6ef98a9377a1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RsaParams {
    pub modulus: BigUint,
    pub exponent: BigUint,
}

impl RsaParams {
    /// The pinned 256-bit key (two 128-bit primes, `e = 65537`).
    pub fn pinned() -> Self {
        let (p, q) = pinned_primes();
        Self {
            modulus: p * q,
            exponent: BigUint::from(PUBLIC_EXPONENT),
        }
    }
}

pub fn pinned_primes() -> (BigUint, BigUint) {
    let hex = |s| BigUint::parse_bytes(s, 16).expect("valid hex constant");
    (hex(P_HEX.as_bytes()), hex(Q_HEX.as_bytes()))
}

/// Private exponent matching [`RsaParams::pinned`].
pub fn pinned_private_exponent() -> BigUint {
    BigUint::parse_bytes(D_HEX.as_bytes(), 16).expect("valid hex constant")
}

/// `base^exp mod modulus`, left-to-right square and multiply.
pub fn modexp(base: &BigUint, exp: &BigUint, modulus: &BigUint) -> Result<BigUint> {
    if *modulus < BigUint::from(2u8) {
        return Err(Error::BadModulus);
    }
    let base = base % modulus;
    let mut acc = BigUint::one();
    for i in (0..exp.bits()).rev() {
        acc = &acc * &acc % modulus;
        if exp.bit(i) {
            acc = acc * &base % modulus;
        }
    }
    Ok(acc)
}

/// Splits the payload into 128-bit blocks (first bit is the block's most
/// significant bit; the last block is zero-padded).
pub fn payload_blocks(bits: &BitVector) -> Vec<BigUint> {
    let mut blocks = Vec::with_capacity(bits.len().div_ceil(BLOCK_BITS));
    for start in (0..bits.len()).step_by(BLOCK_BITS) {
        let mut value = 0u128;
        for i in 0..BLOCK_BITS {
            let idx = start + i;
            if idx < bits.len() && bits.get(idx) {
                value |= 1 << (BLOCK_BITS - 1 - i);
            }
        }
        blocks.push(BigUint::from(value));
    }
    blocks
}

pub fn rsa_encrypt(bits: &BitVector, params: &RsaParams) -> Result<Vec<BigUint>> {
    if bits.is_empty() {
        return Err(Error::EmptyPayload);
    }
    payload_blocks(bits)
        .iter()
        .map(|b| modexp(b, &params.exponent, &params.modulus))
        .collect()
}

/// Inverse of [`rsa_encrypt`] at the block level.
pub fn rsa_decrypt_blocks(blocks: &[BigUint], params: &RsaParams, private: &BigUint) -> Result<Vec<BigUint>> {
    blocks.iter().map(|c| modexp(c, private, &params.modulus)).collect()
}
