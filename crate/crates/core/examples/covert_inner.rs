//! Hidden inner product with a permutation matrix (`H^T H = I`), where the
//! server's LSB-plane inner product equals the payload inner product.

use dccd::covert::{covert_inner, recover_inner};
use dccd::image::synth_cover;
use dccd::stego::{Codec, Payload};
use dccd::{HidingKey, MatrixMode, Semantics};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> dccd::Result<()> {
    let key = HidingKey::new(b"inner".to_vec())?;
    let (w, h) = (64, 64);
    let n = w * h;
    let codec = Codec::new(&key, n, n, MatrixMode::Permutation)?;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (m1, m2) = (Payload::random(&mut rng, n)?, Payload::random(&mut rng, n)?);
    let y1 = codec.embed(&synth_cover(1, w, h)?, &m1, false)?;
    let y2 = codec.embed(&synth_cover(2, w, h)?, &m2, false)?;

    let parity = recover_inner(&covert_inner(&y1, &y2, Semantics::Gf2)?)?;
    let count = recover_inner(&covert_inner(&y1, &y2, Semantics::Integer)?)?;
    println!("parity of <m1, m2>: {parity}");
    println!("integer <m1, m2>: {count}");
    assert_eq!(count, m1.bits().and_count(m2.bits())? as u64);
    assert_eq!(parity, count % 2);
    Ok(())
}
