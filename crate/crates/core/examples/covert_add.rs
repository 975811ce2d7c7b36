//! Two senders hide payloads; a server XORs the stego images without the
//! key; the receiver extracts `m1 ^ m2`.

use dccd::covert::{covert_add, recover_add, CovertResult};
use dccd::image::synth_cover;
use dccd::stego::Payload;
use dccd::HidingKey;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> dccd::Result<()> {
    let key = HidingKey::new(b"shared by senders and receiver".to_vec())?;
    let k = 1000;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (m1, m2) = (Payload::random(&mut rng, k)?, Payload::random(&mut rng, k)?);

    let y1 = dccd::stego::embed(&synth_cover(1, 128, 128)?, &m1, &key, false)?;
    let y2 = dccd::stego::embed(&synth_cover(2, 128, 128)?, &m2, &key, false)?;

    // Server side: only the images.
    let wire = covert_add(&y1, &y2)?.to_bytes();
    println!("server result: {} bytes", wire.len());

    let sum = recover_add(&CovertResult::from_bytes(&wire)?, &key, k)?;
    assert_eq!(sum.bits(), &m1.bits().xor(m2.bits())?);
    println!("receiver recovered m1 ^ m2 ({k} bits)");
    Ok(())
}
