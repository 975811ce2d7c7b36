use dccd::image::{synth_cover, GrayImage};
use dccd::steganalysis::{
    averaged_pe, compute_pe, holdout_pe, spam_features, train_ensemble, EnsembleConfig, FeatureVector,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

/// Clamped difference arrays, built the textbook way: for each direction a
/// 2-D array `D[i][j] = I[i][j] - I[i + di][j + dj]`, then counts of
/// `(D[p], D[p + d], D[p + 2d])` normalised by the count of the leading pair.
fn spam_oracle(img: &GrayImage) -> Vec<f64> {
    let (h, w) = (img.height() as i64, img.width() as i64);
    let at = |i: i64, j: i64| img.get(i as usize, j as usize) as i64;
    let dirs: [(i64, i64); 8] = [(0, 1), (0, -1), (1, 0), (-1, 0), (1, 1), (-1, -1), (-1, 1), (1, -1)];
    let mut out = vec![0.0; 686];
    for (n, &(di, dj)) in dirs.iter().enumerate() {
        let inside = |i: i64, j: i64| i >= 0 && j >= 0 && i < h && j < w;
        let diff = |i: i64, j: i64| -> Option<i64> {
            if inside(i, j) && inside(i + di, j + dj) {
                Some((at(i, j) - at(i + di, j + dj)).clamp(-3, 3))
            } else {
                None
            }
        };
        let mut triple = [[[0u64; 7]; 7]; 7];
        for i in 0..h {
            for j in 0..w {
                if let (Some(a), Some(b), Some(c)) =
                    (diff(i, j), diff(i + di, j + dj), diff(i + 2 * di, j + 2 * dj))
                {
                    triple[(a + 3) as usize][(b + 3) as usize][(c + 3) as usize] += 1;
                }
            }
        }
        let base = if n < 4 { 0 } else { 343 };
        for a in 0..7 {
            for b in 0..7 {
                let pair: u64 = triple[a][b].iter().sum();
                for c in 0..7 {
                    if pair > 0 {
                        out[base + a * 49 + b * 7 + c] += triple[a][b][c] as f64 / pair as f64 / 4.0;
                    }
                }
            }
        }
    }
    out
}

#[test]
fn spam_matches_difference_array_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for &(w, h) in &[(4, 4), (5, 7), (9, 4), (16, 16), (33, 21)] {
        for _ in 0..3 {
            let noisy = GrayImage::new(w, h, (0..w * h).map(|_| rng.gen_range(100..108)).collect()).unwrap();
            let smooth = synth_cover(rng.gen(), w, h).unwrap();
            for img in [noisy, smooth] {
                let got = spam_features(&img).unwrap();
                let want = spam_oracle(&img);
                for (i, (g, e)) in got.values().iter().zip(&want).enumerate() {
                    assert!((g - e).abs() < 1e-12, "{w}x{h} entry {i}: {g} vs {e}");
                }
            }
        }
    }
}

#[test]
fn hand_counted_four_by_four() {
    // Columns 0, 1, 2, 3 along every row: all horizontal differences are -1.
    let img = GrayImage::from_rows(&[[0, 1, 2, 3], [0, 1, 2, 3], [0, 1, 2, 3], [0, 1, 2, 3]]).unwrap();
    let f = spam_features(&img).unwrap();
    let idx = |a: usize, b: usize, c: usize| a * 49 + b * 7 + c;
    // right: (-1,-1,-1); left: (1,1,1); down and up: (0,0,0). Each weighs 1/4.
    assert_eq!(f.values()[idx(2, 2, 2)], 0.25);
    assert_eq!(f.values()[idx(4, 4, 4)], 0.25);
    assert_eq!(f.values()[idx(3, 3, 3)], 0.5);
    // Diagonals: down-right and up-right give -1, the other two give +1.
    assert_eq!(f.values()[343 + idx(2, 2, 2)], 0.5);
    assert_eq!(f.values()[343 + idx(4, 4, 4)], 0.5);
    assert_eq!(f.values().iter().sum::<f64>(), 2.0);
}

/// Direct definition: every candidate threshold, counted from scratch.
fn pe_oracle(cover: &[f64], stego: &[f64]) -> f64 {
    let mut ts: Vec<f64> = cover.iter().chain(stego).copied().collect();
    ts.push(f64::INFINITY);
    ts.push(f64::NEG_INFINITY);
    ts.iter()
        .map(|&t| {
            let fa = cover.iter().filter(|&&x| x >= t).count() as f64 / cover.len() as f64;
            let md = stego.iter().filter(|&&x| x < t).count() as f64 / stego.len() as f64;
            (fa + md) / 2.0
        })
        .fold(f64::INFINITY, f64::min)
}

#[test]
fn crafted_pe_values() {
    let sep = (vec![0.0, 0.1, 0.2, 0.3], vec![1.0, 1.1, 1.2, 1.3]);
    let same = (vec![0.2, 0.4, 0.6, 0.8], vec![0.8, 0.6, 0.4, 0.2]);
    // Half of the stego scores coincide with the cover scores.
    let half = (vec![0.0, 0.0, 1.0, 1.0], vec![1.0, 1.0, 2.0, 2.0]);
    for ((c, s), want) in [(sep, 0.0), (same, 0.5), (half, 0.25)] {
        assert_eq!(compute_pe(&c, &s).unwrap().p_e, want);
        assert_eq!(pe_oracle(&c, &s), want);
    }
}

proptest! {
    #[test]
    fn pe_agrees_with_quadratic_sweep(
        cover in prop::collection::vec(-20i32..20, 1..40),
        stego in prop::collection::vec(-20i32..20, 1..40),
    ) {
        let c: Vec<f64> = cover.iter().map(|&x| f64::from(x) / 4.0).collect();
        let s: Vec<f64> = stego.iter().map(|&x| f64::from(x) / 4.0).collect();
        let r = compute_pe(&c, &s).unwrap();
        prop_assert_eq!(r.p_e, pe_oracle(&c, &s));
        prop_assert_eq!(r.p_e, (r.p_fa + r.p_md) / 2.0);
        prop_assert!(r.p_e <= 0.5);
    }
}

fn gaussian_sets(shift: f64, n: usize, dim: usize, seed: u64) -> (Vec<FeatureVector>, Vec<FeatureVector>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, 1.0).unwrap();
    let mut make = |mu: f64| -> Vec<FeatureVector> {
        (0..n)
            .map(|_| FeatureVector::new((0..dim).map(|_| normal.sample(&mut rng) + mu).collect()).unwrap())
            .collect()
    };
    let cover = make(0.0);
    let stego = make(shift);
    (cover, stego)
}

#[test]
fn ensemble_error_tracks_class_separation() {
    let cfg = EnsembleConfig {
        learners: 15,
        ..EnsembleConfig::default()
    };
    let mut last = 0.0;
    for shift in [1.0, 0.3, 0.1, 0.0] {
        let (c, s) = gaussian_sets(shift, 80, 40, 3);
        let pe = averaged_pe(&c, &s, 1, 4, &cfg).unwrap().p_e;
        assert!(pe + 0.05 >= last, "shift {shift}: {pe} after {last}");
        last = pe;
    }
    assert!(last > 0.35, "no separation still gives {last}");
    let (c, s) = gaussian_sets(1.0, 80, 40, 3);
    assert!(holdout_pe(&c, &s, 2, &cfg).unwrap().p_e < 0.05);
}

#[test]
fn ensemble_scores_are_vote_fractions() {
    let (c, s) = gaussian_sets(0.5, 30, 12, 4);
    let model = train_ensemble(&c, &s, 9, &EnsembleConfig::default()).unwrap();
    assert_eq!(model.learners().len(), 51);
    assert_eq!(model.subspace(), 3);
    for f in c.iter().chain(&s) {
        let v = model.classify(f).unwrap();
        let votes = model.learners().iter().filter(|l| l.votes_stego(f)).count();
        assert_eq!(v, votes as f64 / 51.0);
    }
}
