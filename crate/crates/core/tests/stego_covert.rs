use dccd::covert::{
    covert_add, covert_inner, covert_outer, plain_outer, recover_add, recover_inner, recover_outer, Case,
    CovertResult, Semantics,
};
use dccd::gf2::{seeded_product, HidingKey, MatrixMode};
use dccd::image::{read_pgm, synth_cover, write_pgm, GrayImage};
use dccd::stego::{extract, lsb_vector, Codec, Payload};
use dccd::{BitVector, Error, Result};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn key(s: &str) -> HidingKey {
    HidingKey::new(s.as_bytes().to_vec()).unwrap()
}

#[test]
fn round_trip_many_sizes() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for &(w, h, k) in &[(4, 4, 1), (8, 8, 30), (17, 5, 85), (40, 30, 600), (64, 64, 4000)] {
        let cover = synth_cover(rng.gen(), w, h).unwrap();
        let codec = Codec::for_cover(&key("round"), k, &cover, MatrixMode::General).unwrap();
        for _ in 0..5 {
            let m = Payload::random(&mut rng, k).unwrap();
            let stego = codec.embed(&cover, &m, false).unwrap();
            assert_eq!(codec.extract(&stego).unwrap(), m);
            assert_eq!(extract(&stego, &key("round"), k).unwrap(), m);
        }
    }
}

#[test]
fn distortion_is_bounded_by_capacity() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let cover = synth_cover(9, 96, 64).unwrap();
    for k in [1, 10, 200, 1000] {
        let codec = Codec::for_cover(&key("distort"), k, &cover, MatrixMode::General).unwrap();
        let m = Payload::random(&mut rng, k).unwrap();
        let stego = codec.embed(&cover, &m, false).unwrap();
        let mut changed = 0;
        for (&a, &b) in cover.pixels().iter().zip(stego.pixels()) {
            if a != b {
                changed += 1;
                assert_eq!(a.abs_diff(b), 1);
            }
        }
        assert!(changed <= k, "k={k}: {changed} pixels changed");
    }
}

#[test]
fn minimal_embedding_never_changes_more() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let cover = synth_cover(4, 5, 4).unwrap();
    let codec = Codec::for_cover(&key("min"), 6, &cover, MatrixMode::General).unwrap();
    for _ in 0..20 {
        let m = Payload::random(&mut rng, 6).unwrap();
        let count = |img: &GrayImage| img.pixels().iter().zip(cover.pixels()).filter(|(a, b)| a != b).count();
        let plain = codec.embed(&cover, &m, false).unwrap();
        let best = codec.embed(&cover, &m, true).unwrap();
        assert_eq!(codec.extract(&best).unwrap(), m);
        assert!(count(&best) <= count(&plain));
    }
}

#[test]
fn embedding_already_present_message_is_a_no_op() {
    let cover = synth_cover(5, 32, 32).unwrap();
    let codec = Codec::for_cover(&key("noop"), 100, &cover, MatrixMode::General).unwrap();
    let m = codec.extract(&cover).unwrap();
    assert_eq!(codec.embed(&cover, &m, false).unwrap(), cover);
}

#[test]
fn codec_rejects_bad_shapes() {
    let cover = synth_cover(6, 8, 8).unwrap();
    assert!(Codec::for_cover(&key("x"), 65, &cover, MatrixMode::General).is_err());
    assert!(Codec::for_cover(&key("x"), 0, &cover, MatrixMode::General).is_err());
    assert!(Codec::for_cover(&key("x"), 10, &cover, MatrixMode::Permutation).is_err());
    let codec = Codec::for_cover(&key("x"), 10, &cover, MatrixMode::General).unwrap();
    let other = synth_cover(6, 8, 9).unwrap();
    assert!(codec.extract(&other).is_err());
    let short = Payload::from_bits(&[1, 0, 1]).unwrap();
    assert!(codec.embed(&cover, &short, false).is_err());
    assert!(matches!(HidingKey::new(Vec::new()), Err(Error::EmptyKey)));
}

#[test]
fn wrong_key_extraction_is_near_half() {
    let (w, h, k) = (512, 512, 1000);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let codec = Codec::new(&key("right"), k, w * h, MatrixMode::General).unwrap();
    let cover = synth_cover(10, w, h).unwrap();
    let mut wrong = 0usize;
    let trials = 100;
    for _ in 0..trials {
        let m = Payload::random(&mut rng, k).unwrap();
        let stego = codec.embed(&cover, &m, false).unwrap();
        let guess = seeded_product(rng.gen(), k, &lsb_vector(&stego)).unwrap();
        wrong += guess.hamming_distance(m.bits()).unwrap();
    }
    let rate = wrong as f64 / (k * trials) as f64;
    assert!((0.48..=0.52).contains(&rate), "rate {rate}");
}

#[test]
fn other_key_cannot_read() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let cover = synth_cover(11, 128, 128).unwrap();
    let m = Payload::random(&mut rng, 2000).unwrap();
    let stego = dccd::stego::embed(&cover, &m, &key("alice"), false).unwrap();
    let guess = extract(&stego, &key("mallory"), 2000).unwrap();
    let rate = guess.bits().hamming_distance(m.bits()).unwrap() as f64 / 2000.0;
    assert!((0.44..=0.56).contains(&rate), "rate {rate}");
}

#[test]
fn server_operations_never_see_a_key() {
    let _: fn(&GrayImage, &GrayImage) -> Result<CovertResult> = covert_add;
    let _: fn(&GrayImage, &GrayImage, usize) -> Result<CovertResult> = covert_outer;
    let _: fn(&GrayImage, &GrayImage, Semantics) -> Result<CovertResult> = covert_inner;
}

fn embed_pair(k: usize, w: usize, h: usize, mode: MatrixMode, seed: u64) -> (Payload, Payload, GrayImage, GrayImage) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let codec = Codec::new(&key("pair"), k, w * h, mode).unwrap();
    let m1 = Payload::random(&mut rng, k).unwrap();
    let m2 = Payload::random(&mut rng, k).unwrap();
    let y1 = codec.embed(&synth_cover(rng.gen(), w, h).unwrap(), &m1, false).unwrap();
    let y2 = codec.embed(&synth_cover(rng.gen(), w, h).unwrap(), &m2, false).unwrap();
    (m1, m2, y1, y2)
}

#[test]
fn hidden_addition() {
    for seed in 0..5 {
        let (m1, m2, y1, y2) = embed_pair(300, 40, 40, MatrixMode::General, seed);
        let res = covert_add(&y1, &y2).unwrap();
        assert_eq!(res.case(), Case::Add);
        let back = CovertResult::from_bytes(&res.to_bytes()).unwrap();
        assert_eq!(back, res);
        let sum = recover_add(&back, &key("pair"), 300).unwrap();
        assert_eq!(sum.bits(), &m1.bits().xor(m2.bits()).unwrap());
    }
}

#[test]
fn hidden_outer_product() {
    for seed in 0..5 {
        let (m1, m2, y1, y2) = embed_pair(12, 16, 16, MatrixMode::General, seed);
        let res = CovertResult::from_bytes(&covert_outer(&y1, &y2, 8192).unwrap().to_bytes()).unwrap();
        let got = recover_outer(&res, &key("pair"), 12).unwrap();
        assert_eq!(got, plain_outer(m1.bits(), m2.bits()).unwrap());
    }
    let big = synth_cover(1, 128, 128).unwrap();
    assert!(matches!(covert_outer(&big, &big, 8192), Err(Error::OuterCapExceeded { .. })));
}

#[test]
fn hidden_inner_product() {
    for seed in 0..5 {
        let (m1, m2, y1, y2) = embed_pair(144, 12, 12, MatrixMode::Permutation, seed);
        let parity = recover_inner(&covert_inner(&y1, &y2, Semantics::Gf2).unwrap()).unwrap();
        let count = recover_inner(&covert_inner(&y1, &y2, Semantics::Integer).unwrap()).unwrap();
        assert_eq!(parity, u64::from(m1.bits().dot(m2.bits()).unwrap()));
        assert_eq!(count, m1.bits().and_count(m2.bits()).unwrap() as u64);
    }
}

#[test]
fn mismatched_server_inputs() {
    let a = synth_cover(1, 8, 8).unwrap();
    let b = synth_cover(1, 8, 9).unwrap();
    assert!(covert_add(&a, &b).is_err());
    assert!(covert_inner(&a, &b, Semantics::Gf2).is_err());
    let res = covert_inner(&a, &a, Semantics::Gf2).unwrap();
    assert!(matches!(recover_add(&res, &key("k"), 4), Err(Error::WrongCase { .. })));
    assert!(CovertResult::from_bytes(b"DCCX\x01\x01\x00").is_err());
}

#[test]
fn payload_bit_files() {
    let p = Payload::from_bits(&[1, 0, 1, 1, 0, 0, 0, 0, 1, 1]).unwrap();
    assert_eq!(p.to_bytes(), vec![0b1011_0000, 0b1100_0000]);
    assert_eq!(Payload::from_bytes(&p.to_bytes(), 10).unwrap(), p);
    assert!(Payload::from_bytes(&[0xff], 9).is_err());
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.bits");
    p.save(&path).unwrap();
    assert_eq!(Payload::load(&path, 10).unwrap(), p);
    assert!(Payload::new(BitVector::zeros(0)).is_err());
}

proptest! {
    #[test]
    fn pgm_round_trip(w in 1usize..40, h in 1usize..40, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let px: Vec<u8> = (0..w * h).map(|_| rng.gen()).collect();
        let img = GrayImage::new(w, h, px).unwrap();
        let bytes = write_pgm(&img);
        prop_assert_eq!(read_pgm(&bytes).unwrap(), img.clone());
        prop_assert_eq!(write_pgm(&read_pgm(&bytes).unwrap()), bytes);
    }

    #[test]
    fn embed_extract_round_trip(seed: u64, w in 2usize..24, h in 2usize..24, frac in 0.05f64..1.0) {
        let n = w * h;
        let k = ((n as f64 * frac) as usize).clamp(1, n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cover = synth_cover(rng.gen(), w, h).unwrap();
        let k_bytes: [u8; 8] = rng.gen();
        let key = HidingKey::new(k_bytes.to_vec()).unwrap();
        let codec = Codec::for_cover(&key, k, &cover, MatrixMode::General).unwrap();
        let m = Payload::random(&mut rng, k).unwrap();
        let stego = codec.embed(&cover, &m, false).unwrap();
        prop_assert_eq!(codec.extract(&stego).unwrap(), m);
        let changed = stego.pixels().iter().zip(cover.pixels()).filter(|(a, b)| a != b).count();
        prop_assert!(changed <= k);
    }
}
