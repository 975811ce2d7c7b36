//! Detectability of the embedding: SPAM features, an FLD ensemble and the
//! `P_E` error metric.

mod ensemble;
mod pe;
mod spam;

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use ensemble::{train_ensemble, BaseLearner, EnsembleConfig, EnsembleModel};
pub use pe::{compute_pe, PeReport};
pub use spam::{spam_features, tensor_index, transition_tensor, Direction, SPAM_DIM, SPAM_T, TENSOR_LEN};

use crate::error::{Error, Result};

/// Ordered real-valued features of one image.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector(Vec<f64>);

impl FeatureVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyInput("feature vector"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite feature value".into()));
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// One line per record: identifier, then space-separated values.
pub fn write_features<'a, I>(records: I) -> String
where
    I: IntoIterator<Item = (&'a str, &'a FeatureVector)>,
{
    let mut out = String::new();
    for (id, feat) in records {
        out.push_str(id);
        for v in feat.values() {
            write!(out, " {v}").unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn read_features(text: &str) -> Result<Vec<(String, FeatureVector)>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(n, line)| {
            let mut parts = line.split_whitespace();
            let id = parts.next().unwrap_or_default().to_string();
            let values = parts
                .map(|p| {
                    p.parse::<f64>()
                        .map_err(|_| Error::InvalidInput(format!("line {}: bad value {p:?}", n + 1)))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((id, FeatureVector::new(values)?))
        })
        .collect()
}

/// Trains on a seeded half of the cover/stego pairs and measures `P_E` on
/// the other half. Pairs stay together on one side of the split.
pub fn holdout_pe(
    cover: &[FeatureVector],
    stego: &[FeatureVector],
    seed: u64,
    config: &EnsembleConfig,
) -> Result<PeReport> {
    if cover.len() != stego.len() {
        return Err(Error::InvalidInput("cover and stego sets must pair up".into()));
    }
    if cover.len() < 4 {
        return Err(Error::InvalidInput("need at least four pairs to split".into()));
    }
    let mut order: Vec<usize> = (0..cover.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let (train, test) = order.split_at(cover.len() / 2);
    let pick = |set: &[FeatureVector], idx: &[usize]| idx.iter().map(|&i| set[i].clone()).collect::<Vec<_>>();
    let model = train_ensemble(&pick(cover, train), &pick(stego, train), seed, config)?;
    let scores = |set: &[FeatureVector]| {
        test.iter()
            .map(|&i| model.classify(&set[i]))
            .collect::<Result<Vec<_>>>()
    };
    compute_pe(&scores(cover)?, &scores(stego)?)
}

/// `P_E`, `P_FA` and `P_MD` averaged over repeated random splits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AveragedPe {
    pub p_e: f64,
    pub p_fa: f64,
    pub p_md: f64,
    pub repetitions: usize,
}

pub fn averaged_pe(
    cover: &[FeatureVector],
    stego: &[FeatureVector],
    seed: u64,
    repetitions: usize,
    config: &EnsembleConfig,
) -> Result<AveragedPe> {
    if repetitions == 0 {
        return Err(Error::InvalidInput("zero repetitions".into()));
    }
    let mut acc = AveragedPe {
        p_e: 0.0,
        p_fa: 0.0,
        p_md: 0.0,
        repetitions,
    };
    for rep in 0..repetitions {
        let r = holdout_pe(cover, stego, seed.wrapping_add(rep as u64), config)?;
        acc.p_e += r.p_e;
        acc.p_fa += r.p_fa;
        acc.p_md += r.p_md;
    }
    let n = repetitions as f64;
    acc.p_e /= n;
    acc.p_fa /= n;
    acc.p_md /= n;
    Ok(acc)
}
