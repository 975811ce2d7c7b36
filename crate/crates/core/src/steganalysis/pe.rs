//! Minimal total detection error under equal priors.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeReport {
    /// `min over thresholds of (P_FA + P_MD) / 2`.
    pub p_e: f64,
    pub p_fa: f64,
    pub p_md: f64,
    /// Minimizing threshold; scores `>= threshold` are called stego.
    pub threshold: f64,
    pub n_cover: usize,
    pub n_stego: usize,
}

/// Sweeps every distinct score plus `+-inf` as a threshold. A score at or
/// above the threshold is a "stego" decision, so
/// `P_FA = #{cover >= t} / n_cover` and `P_MD = #{stego < t} / n_stego`.
/// Ties go to the smallest minimizing threshold.
pub fn compute_pe(cover_scores: &[f64], stego_scores: &[f64]) -> Result<PeReport> {
    if cover_scores.is_empty() {
        return Err(Error::EmptyInput("cover scores"));
    }
    if stego_scores.is_empty() {
        return Err(Error::EmptyInput("stego scores"));
    }
    if cover_scores.iter().chain(stego_scores).any(|s| s.is_nan()) {
        return Err(Error::InvalidInput("NaN score".into()));
    }
    let sorted = |s: &[f64]| {
        let mut v = s.to_vec();
        v.sort_by(f64::total_cmp);
        v
    };
    let (cover, stego) = (sorted(cover_scores), sorted(stego_scores));
    let mut thresholds: Vec<f64> = cover.iter().chain(&stego).copied().collect();
    thresholds.push(f64::NEG_INFINITY);
    thresholds.push(f64::INFINITY);
    thresholds.sort_by(f64::total_cmp);
    thresholds.dedup();

    let (nc, ns) = (cover.len() as f64, stego.len() as f64);
    let mut best: Option<PeReport> = None;
    for t in thresholds {
        let p_fa = (cover.len() - cover.partition_point(|&x| x < t)) as f64 / nc;
        let p_md = stego.partition_point(|&x| x < t) as f64 / ns;
        let p_e = (p_fa + p_md) / 2.0;
        if best.is_none_or(|b| p_e < b.p_e) {
            best = Some(PeReport {
                p_e,
                p_fa,
                p_md,
                threshold: t,
                n_cover: cover.len(),
                n_stego: stego.len(),
            });
        }
    }
    Ok(best.expect("threshold list is never empty"))
}
