//! Random-subspace ensemble of Fisher linear discriminants.
//!
//! Each base learner sees a seeded random subset of `d_sub` features and a
//! paired bootstrap sample (the same image indices drawn for both classes).
//! It projects onto `w = (S_w + lambda I)^-1 (mu_stego - mu_cover)` and votes
//! "stego" when the projection exceeds the midpoint of the projected class
//! means. The ensemble score is the fraction of stego votes.

use nalgebra::{DMatrix, DVector};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::FeatureVector;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleConfig {
    /// Number of base learners; must be odd.
    pub learners: usize,
    /// Subspace dimension. `None` means `min(ceil(dim / 4), 200)`.
    pub subspace: Option<usize>,
    /// Diagonal regularization of the within-class scatter.
    pub ridge: f64,
}

impl Default for EnsembleConfig {
    fn default() -> Self {
        Self {
            learners: 51,
            subspace: None,
            ridge: 1e-6,
        }
    }
}

impl EnsembleConfig {
    pub fn subspace_for(&self, dim: usize) -> usize {
        self.subspace.unwrap_or_else(|| dim.div_ceil(4).min(200))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BaseLearner {
    pub features: Vec<usize>,
    pub weights: Vec<f64>,
    pub threshold: f64,
}

impl BaseLearner {
    pub fn project(&self, feat: &FeatureVector) -> f64 {
        let v = feat.values();
        self.features.iter().zip(&self.weights).map(|(&i, w)| w * v[i]).sum()
    }

    pub fn votes_stego(&self, feat: &FeatureVector) -> bool {
        self.project(feat) > self.threshold
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleModel {
    learners: Vec<BaseLearner>,
    dim: usize,
    subspace: usize,
}

impl EnsembleModel {
    pub fn learners(&self) -> &[BaseLearner] {
        &self.learners
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn subspace(&self) -> usize {
        self.subspace
    }

    /// Fraction of base learners voting "stego".
    pub fn classify(&self, feat: &FeatureVector) -> Result<f64> {
        if feat.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "feature of dimension {} for a {}-dimensional model",
                feat.len(),
                self.dim
            )));
        }
        let votes = self.learners.iter().filter(|l| l.votes_stego(feat)).count();
        Ok(votes as f64 / self.learners.len() as f64)
    }
}

fn class_stats(rows: &[&FeatureVector], idx: &[usize], features: &[usize]) -> (DVector<f64>, DMatrix<f64>) {
    let (n, d) = (idx.len(), features.len());
    let data = DMatrix::from_fn(n, d, |r, c| rows[idx[r]].values()[features[c]]);
    let mean = DVector::from_fn(d, |c, _| data.column(c).sum() / n as f64);
    let mut centered = data;
    for (c, mut col) in centered.column_iter_mut().enumerate() {
        col.add_scalar_mut(-mean[c]);
    }
    let scatter = centered.transpose() * &centered;
    (mean, scatter)
}

fn fisher_direction(scatter: &DMatrix<f64>, diff: &DVector<f64>, ridge: f64) -> DVector<f64> {
    let d = scatter.nrows();
    let mut lambda = ridge;
    loop {
        let reg = scatter + DMatrix::<f64>::identity(d, d) * lambda;
        if let Some(chol) = reg.cholesky() {
            return chol.solve(diff);
        }
        // Numerically indefinite: strengthen the ridge.
        lambda *= 10.0;
    }
}

/// Trains the ensemble. Cover and stego sets are paired by index and must
/// have equal sizes of at least two.
pub fn train_ensemble(
    cover: &[FeatureVector],
    stego: &[FeatureVector],
    seed: u64,
    config: &EnsembleConfig,
) -> Result<EnsembleModel> {
    if cover.len() != stego.len() {
        return Err(Error::InvalidInput(format!(
            "{} cover and {} stego features",
            cover.len(),
            stego.len()
        )));
    }
    if cover.len() < 2 {
        return Err(Error::InvalidInput("need at least two samples per class".into()));
    }
    if config.learners == 0 || config.learners % 2 == 0 {
        return Err(Error::InvalidInput(format!(
            "learner count must be odd, got {}",
            config.learners
        )));
    }
    let dim = cover[0].len();
    if cover.iter().chain(stego).any(|f| f.len() != dim) {
        return Err(Error::DimensionMismatch("features of differing dimension".into()));
    }
    let subspace = config.subspace_for(dim);
    if subspace == 0 || subspace > dim {
        return Err(Error::InvalidInput(format!(
            "subspace {subspace} outside 1..={dim}"
        )));
    }

    let cover: Vec<&FeatureVector> = cover.iter().collect();
    let stego: Vec<&FeatureVector> = stego.iter().collect();
    let n = cover.len();
    let learners = (0..config.learners)
        .map(|l| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(l as u64);
            let mut features = sample(&mut rng, dim, subspace).into_vec();
            features.sort_unstable();
            let boot: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();

            let (mu_c, s_c) = class_stats(&cover, &boot, &features);
            let (mu_s, s_s) = class_stats(&stego, &boot, &features);
            let w = fisher_direction(&(s_c + s_s), &(&mu_s - &mu_c), config.ridge);
            let threshold = w.dot(&(&mu_s + &mu_c)) / 2.0;
            BaseLearner {
                features,
                weights: w.iter().copied().collect(),
                threshold,
            }
        })
        .collect();
    Ok(EnsembleModel {
        learners,
        dim,
        subspace,
    })
}
