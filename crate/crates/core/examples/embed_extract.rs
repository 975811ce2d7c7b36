//! Hide a random payload in a synthetic cover and read it back.

use dccd::image::synth_cover;
use dccd::stego::{Codec, Payload};
use dccd::{HidingKey, MatrixMode};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> dccd::Result<()> {
    let cover = synth_cover(1, 256, 256)?;
    let key = HidingKey::new(b"correct horse battery staple".to_vec())?;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let m = Payload::random(&mut rng, 2000)?;

    // Building the codec derives H from the key; reuse it for many images.
    let codec = Codec::for_cover(&key, m.len(), &cover, MatrixMode::General)?;
    let stego = codec.embed(&cover, &m, false)?;
    let changed = cover.pixels().iter().zip(stego.pixels()).filter(|(a, b)| a != b).count();
    println!("embedded {} bits, changed {changed} of {} pixels", m.len(), cover.len());

    assert_eq!(codec.extract(&stego)?, m);
    println!("extracted payload matches");

    let other = HidingKey::new(b"wrong key".to_vec())?;
    let guess = dccd::stego::extract(&stego, &other, m.len())?;
    let errors = guess.bits().hamming_distance(m.bits())?;
    println!("with a wrong key {errors} of {} bits differ", m.len());
    Ok(())
}
