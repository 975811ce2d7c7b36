//! Hidden outer product: the server forms `c1 c2^T` from the LSB planes and
//! the receiver computes `H C H^T = m1 m2^T`. The intermediate has
//! `(w*r)^2` bits, so covers must stay small.

use dccd::covert::{covert_outer, plain_outer, recover_outer_with, DEFAULT_OUTER_CAP};
use dccd::image::synth_cover;
use dccd::stego::{Codec, Payload};
use dccd::{HidingKey, MatrixMode};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> dccd::Result<()> {
    let key = HidingKey::new(b"outer".to_vec())?;
    let (w, h, k) = (64, 64, 16);
    let codec = Codec::new(&key, k, w * h, MatrixMode::General)?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (m1, m2) = (Payload::random(&mut rng, k)?, Payload::random(&mut rng, k)?);
    let y1 = codec.embed(&synth_cover(1, w, h)?, &m1, false)?;
    let y2 = codec.embed(&synth_cover(2, w, h)?, &m2, false)?;

    let res = covert_outer(&y1, &y2, DEFAULT_OUTER_CAP)?;
    let product = recover_outer_with(&res, codec.matrix())?;
    assert_eq!(product, plain_outer(m1.bits(), m2.bits())?);
    println!("{k}x{k} outer product recovered:");
    println!("{product:?}");
    Ok(())
}
