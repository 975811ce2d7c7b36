//! Computing on data hidden in the LSB planes of grayscale images.
//!
//! A sender hides bit vectors in covers with keyed GF(2) matrix embedding;
//! a server combines the stego images without the key; a receiver holding
//! the key extracts the combined result.

pub mod cli;
pub mod covert;
pub mod error;
pub mod experiments;
pub mod gf2;
pub mod image;
pub mod rsa;
pub mod steganalysis;
pub mod stego;

pub use covert::{CovertResult, Semantics};
pub use error::{Error, Result};
pub use gf2::{BitMatrix, BitVector, HidingKey, MatrixMode};
pub use image::GrayImage;
pub use stego::{Codec, Payload};
