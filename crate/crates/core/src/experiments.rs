//! End-to-end experiments: feasibility of the three covert cases, key
//! security, wall-clock comparison against RSA, and detectability.
//!
//! Every run is deterministic given its seed, except the wall-clock values
//! of [`run_timing`].

use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::covert::{
    covert_add, covert_inner, covert_outer, plain_outer, recover_add_with, recover_inner, recover_outer_with,
    Semantics, DEFAULT_OUTER_CAP,
};
use crate::error::{Error, Result};
use crate::gf2::{seeded_product, HidingKey, MatrixMode};
use crate::image::{load_pgm, synth_cover, GrayImage};
use crate::rsa::{rsa_encrypt, RsaParams};
use crate::steganalysis::{averaged_pe, spam_features, EnsembleConfig, FeatureVector};
use crate::stego::{Codec, Payload};

/// Capacities used throughout the experiments, in bits.
pub const CAPACITIES: [usize; 5] = [1000, 2000, 3000, 4000, 5000];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Experiment {
    Feasibility,
    Security,
    Timing,
    Steganalysis,
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Experiment::Feasibility => "feasibility",
            Experiment::Security => "security",
            Experiment::Timing => "timing",
            Experiment::Steganalysis => "steganalysis",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Unit {
    Ratio,
    Percent,
    Milliseconds,
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Unit::Ratio => "ratio",
            Unit::Percent => "percent",
            Unit::Milliseconds => "ms",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub capacity: usize,
    pub metric: String,
    pub value: f64,
    pub unit: Unit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub experiment: Experiment,
    pub rows: Vec<ReportRow>,
    pub environment: String,
    pub notes: Vec<String>,
}

impl ExperimentReport {
    fn new(experiment: Experiment) -> Self {
        Self {
            experiment,
            rows: Vec::new(),
            environment: machine_note(),
            notes: Vec::new(),
        }
    }

    fn push(&mut self, capacity: usize, metric: impl Into<String>, value: f64, unit: Unit) {
        self.rows.push(ReportRow {
            capacity,
            metric: metric.into(),
            value,
            unit,
        });
    }

    /// First row matching `capacity` and `metric`.
    pub fn value(&self, capacity: usize, metric: &str) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.capacity == capacity && r.metric == metric)
            .map(|r| r.value)
    }

    fn sort(&mut self) {
        self.rows
            .sort_by(|a, b| a.capacity.cmp(&b.capacity).then_with(|| a.metric.cmp(&b.metric)));
    }
}

/// `#` header lines, then `experiment capacity metric value unit` per row.
impl fmt::Display for ExperimentReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# experiment: {}", self.experiment)?;
        writeln!(f, "# environment: {}", self.environment)?;
        for note in &self.notes {
            writeln!(f, "# {note}")?;
        }
        for r in &self.rows {
            writeln!(f, "{} {} {} {} {}", self.experiment, r.capacity, r.metric, r.value, r.unit)?;
        }
        Ok(())
    }
}

pub fn machine_note() -> String {
    let cpus = std::thread::available_parallelism().map_or(1, |n| n.get());
    format!(
        "{}-{} cpus={cpus} build={}",
        std::env::consts::OS,
        std::env::consts::ARCH,
        if cfg!(debug_assertions) { "debug" } else { "release" }
    )
}

fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn experiment_key(rng: &mut impl Rng) -> HidingKey {
    HidingKey::new(rng.gen::<[u8; 16]>().to_vec()).expect("16-byte key")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FeasibilityConfig {
    pub trials: usize,
    /// Payload bits and `(width, height)` for the add case.
    pub add_bits: usize,
    pub add_dims: (usize, usize),
    /// Payload bits and dimensions for the outer case (`w * r` within the cap).
    pub outer_bits: usize,
    pub outer_dims: (usize, usize),
    /// Dimensions for the inner case; the payload fills every pixel.
    pub inner_dims: (usize, usize),
}

impl Default for FeasibilityConfig {
    fn default() -> Self {
        Self {
            trials: 100,
            add_bits: 1000,
            add_dims: (512, 512),
            outer_bits: 16,
            outer_dims: (64, 64),
            inner_dims: (64, 64),
        }
    }
}

/// Mismatch counts of one feasibility case.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct Tally {
    differing: usize,
    total: usize,
}

impl Tally {
    fn ratio(self) -> f64 {
        self.differing as f64 / self.total as f64
    }
}

/// Sender -> server -> receiver for every case, compared against the
/// plaintext result. The difference ratio is the Hamming distance divided by
/// the result length, pooled over trials.
pub fn run_feasibility(seed: u64, cfg: &FeasibilityConfig) -> Result<ExperimentReport> {
    if cfg.trials == 0 {
        return Err(Error::InvalidInput("trials must be at least 1".into()));
    }
    let mut report = ExperimentReport::new(Experiment::Feasibility);
    let mut rng = trial_rng(seed, 0);
    let key = experiment_key(&mut rng);

    let (w, h) = cfg.add_dims;
    let codec = Codec::new(&key, cfg.add_bits, w * h, MatrixMode::General)?;
    let mut add = Tally::default();
    for t in 0..cfg.trials {
        let mut rng = trial_rng(seed, 1 + t as u64);
        let (m1, m2) = (Payload::random(&mut rng, cfg.add_bits)?, Payload::random(&mut rng, cfg.add_bits)?);
        let y1 = codec.embed(&synth_cover(rng.gen(), w, h)?, &m1, false)?;
        let y2 = codec.embed(&synth_cover(rng.gen(), w, h)?, &m2, false)?;
        let got = recover_add_with(&covert_add(&y1, &y2)?, &codec)?;
        let want = m1.bits().xor(m2.bits())?;
        add.differing += got.bits().hamming_distance(&want)?;
        add.total += want.len();
    }
    report.push(cfg.add_bits, "add.difference_ratio", add.ratio(), Unit::Ratio);

    let (w, h) = cfg.outer_dims;
    let codec = Codec::new(&key, cfg.outer_bits, w * h, MatrixMode::General)?;
    let mut outer = Tally::default();
    for t in 0..cfg.trials {
        let mut rng = trial_rng(seed, 10_000 + t as u64);
        let (m1, m2) = (Payload::random(&mut rng, cfg.outer_bits)?, Payload::random(&mut rng, cfg.outer_bits)?);
        let y1 = codec.embed(&synth_cover(rng.gen(), w, h)?, &m1, false)?;
        let y2 = codec.embed(&synth_cover(rng.gen(), w, h)?, &m2, false)?;
        let res = covert_outer(&y1, &y2, DEFAULT_OUTER_CAP)?;
        let got = recover_outer_with(&res, codec.matrix())?;
        let want = plain_outer(m1.bits(), m2.bits())?;
        outer.differing += got.xor(&want)?.count_ones();
        outer.total += want.rows() * want.cols();
    }
    report.push(cfg.outer_bits, "outer.difference_ratio", outer.ratio(), Unit::Ratio);

    let (w, h) = cfg.inner_dims;
    let n = w * h;
    let codec = Codec::new(&key, n, n, MatrixMode::Permutation)?;
    let (mut parity, mut count) = (Tally::default(), Tally::default());
    for t in 0..cfg.trials {
        let mut rng = trial_rng(seed, 20_000 + t as u64);
        let (m1, m2) = (Payload::random(&mut rng, n)?, Payload::random(&mut rng, n)?);
        let y1 = codec.embed(&synth_cover(rng.gen(), w, h)?, &m1, false)?;
        let y2 = codec.embed(&synth_cover(rng.gen(), w, h)?, &m2, false)?;
        let bit = recover_inner(&covert_inner(&y1, &y2, Semantics::Gf2)?)?;
        let dot = recover_inner(&covert_inner(&y1, &y2, Semantics::Integer)?)?;
        parity.differing += usize::from(bit != u64::from(m1.bits().dot(m2.bits())?));
        count.differing += usize::from(dot != m1.bits().and_count(m2.bits())? as u64);
        parity.total += 1;
        count.total += 1;
    }
    report.push(n, "inner_gf2.difference_ratio", parity.ratio(), Unit::Ratio);
    report.push(n, "inner_int.difference_ratio", count.ratio(), Unit::Ratio);
    report.sort();
    Ok(report)
}

/// Extraction error with the hiding key and with a fresh random matrix per
/// stego image, in percent of payload bits.
pub fn run_security(seed: u64, trials: usize, capacities: &[usize], dims: (usize, usize)) -> Result<ExperimentReport> {
    if trials == 0 {
        return Err(Error::InvalidInput("trials must be at least 1".into()));
    }
    let (w, h) = dims;
    let mut report = ExperimentReport::new(Experiment::Security);
    report.notes.push(format!("covers: synthetic {w}x{h}, trials per capacity: {trials}"));
    for &k in capacities {
        let mut rng = trial_rng(seed, k as u64);
        let key = experiment_key(&mut rng);
        let codec = Codec::new(&key, k, w * h, MatrixMode::General)?;
        let (mut with_key, mut without_key) = (0usize, 0usize);
        for _ in 0..trials {
            let m = Payload::random(&mut rng, k)?;
            let stego = codec.embed(&synth_cover(rng.gen(), w, h)?, &m, false)?;
            with_key += codec.extract(&stego)?.bits().hamming_distance(m.bits())?;
            let guess = seeded_product(rng.gen(), k, &crate::stego::lsb_vector(&stego))?;
            without_key += guess.hamming_distance(m.bits())?;
        }
        let total = (k * trials) as f64;
        report.push(k, "error_with_key", 100.0 * with_key as f64 / total, Unit::Percent);
        report.push(k, "error_without_key", 100.0 * without_key as f64 / total, Unit::Percent);
    }
    report.sort();
    Ok(report)
}

/// RSA encryption of one payload takes well under a millisecond, so each
/// timed run averages a batch of encryptions.
const RSA_BATCH: u32 = 20;

fn median(mut xs: Vec<Duration>) -> Duration {
    xs.sort();
    xs[xs.len() / 2]
}

/// Median wall-clock of the full pipeline (two embeddings, the covert add,
/// extraction) against textbook RSA encryption of the same payload.
/// Key-dependent setup of the codec is timed separately.
pub fn run_timing(seed: u64, capacities: &[usize], dims: (usize, usize), runs: usize) -> Result<ExperimentReport> {
    let runs = runs.max(5);
    let (w, h) = dims;
    let mut report = ExperimentReport::new(Experiment::Timing);
    report.notes.push(format!(
        "dccd = embed x2 + covert add + extract on {w}x{h}; rsa = textbook RSA-256 encryption, 128-bit blocks; median of {runs} runs, rsa runs average {RSA_BATCH} encryptions"
    ));
    let mut rng = trial_rng(seed, 0);
    let x1 = synth_cover(rng.gen(), w, h)?;
    let x2 = synth_cover(rng.gen(), w, h)?;
    let params = RsaParams::pinned();
    for &k in capacities {
        let key = experiment_key(&mut rng);
        let m1 = Payload::random(&mut rng, k)?;
        let m2 = Payload::random(&mut rng, k)?;

        let start = Instant::now();
        let codec = Codec::new(&key, k, w * h, MatrixMode::General)?;
        let setup = start.elapsed();

        let mut dccd = Vec::with_capacity(runs);
        let mut rsa = Vec::with_capacity(runs);
        for _ in 0..runs {
            let start = Instant::now();
            let y1 = codec.embed(&x1, &m1, false)?;
            let y2 = codec.embed(&x2, &m2, false)?;
            let out = recover_add_with(&covert_add(&y1, &y2)?, &codec)?;
            dccd.push(start.elapsed());
            std::hint::black_box(out);

            let start = Instant::now();
            for _ in 0..RSA_BATCH {
                std::hint::black_box(rsa_encrypt(std::hint::black_box(m1.bits()), &params)?);
            }
            rsa.push(start.elapsed() / RSA_BATCH);
        }
        let ms = |d: Duration| d.as_secs_f64() * 1e3;
        report.push(k, "dccd_pipeline", ms(median(dccd)), Unit::Milliseconds);
        report.push(k, "dccd_setup", ms(setup), Unit::Milliseconds);
        report.push(k, "rsa_encrypt", ms(median(rsa)), Unit::Milliseconds);
    }
    report.sort();
    Ok(report)
}

/// All `.pgm` files of a directory, sorted by file name.
pub fn load_corpus(dir: impl AsRef<Path>) -> Result<Vec<(String, GrayImage)>> {
    let mut paths: Vec<_> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e.eq_ignore_ascii_case("pgm")))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let name = p.file_name().unwrap_or_default().to_string_lossy().into_owned();
            load_pgm(&p).map(|img| (name, img))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteganalysisConfig {
    pub repetitions: usize,
    pub ensemble: EnsembleConfig,
    pub min_images: usize,
}

impl Default for SteganalysisConfig {
    fn default() -> Self {
        Self {
            repetitions: 10,
            ensemble: EnsembleConfig::default(),
            min_images: 20,
        }
    }
}

/// SPAM + ensemble detectability per capacity, `P_E` averaged over seeded
/// 50/50 splits. Capacity 0 is a control run where stego equals cover.
pub fn run_steganalysis(
    corpus: &[GrayImage],
    capacities: &[usize],
    seed: u64,
    cfg: &SteganalysisConfig,
) -> Result<ExperimentReport> {
    if corpus.len() < cfg.min_images {
        return Err(Error::InvalidInput(format!(
            "corpus has {} images, need at least {}",
            corpus.len(),
            cfg.min_images
        )));
    }
    let mut report = ExperimentReport::new(Experiment::Steganalysis);
    report.notes.push(format!(
        "images: {}, features: SPAM-686, learners: {}, repetitions: {}",
        corpus.len(),
        cfg.ensemble.learners,
        cfg.repetitions
    ));
    let cover_feats: Vec<FeatureVector> = corpus.iter().map(spam_features).collect::<Result<_>>()?;
    for &k in capacities {
        let mut rng = trial_rng(seed, k as u64);
        let stego_feats: Vec<FeatureVector> = if k == 0 {
            cover_feats.clone()
        } else {
            let key = experiment_key(&mut rng);
            let mut codecs: HashMap<usize, Codec> = HashMap::new();
            corpus
                .iter()
                .map(|img| {
                    let codec = match codecs.entry(img.len()) {
                        std::collections::hash_map::Entry::Occupied(e) => e.into_mut(),
                        std::collections::hash_map::Entry::Vacant(e) => {
                            e.insert(Codec::for_cover(&key, k, img, MatrixMode::General)?)
                        }
                    };
                    let m = Payload::random(&mut rng, k)?;
                    spam_features(&codec.embed(img, &m, false)?)
                })
                .collect::<Result<_>>()?
        };
        let pe = averaged_pe(&cover_feats, &stego_feats, seed, cfg.repetitions, &cfg.ensemble)?;
        report.push(k, "p_e", pe.p_e, Unit::Ratio);
        report.push(k, "p_fa", pe.p_fa, Unit::Ratio);
        report.push(k, "p_md", pe.p_md, Unit::Ratio);
    }
    report.sort();
    Ok(report)
}

/// Deterministic stand-in corpus of synthetic covers.
pub fn synthetic_corpus(seed: u64, count: usize, dims: (usize, usize)) -> Result<Vec<GrayImage>> {
    (0..count as u64)
        .map(|i| synth_cover(seed.wrapping_mul(0x9e37_79b9).wrapping_add(i), dims.0, dims.1))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_feasibility_is_exact() {
        let cfg = FeasibilityConfig {
            trials: 3,
            add_bits: 20,
            add_dims: (16, 16),
            outer_bits: 4,
            outer_dims: (8, 8),
            inner_dims: (8, 8),
        };
        let r = run_feasibility(1, &cfg).unwrap();
        assert_eq!(r.rows.len(), 4);
        assert!(r.rows.iter().all(|row| row.value == 0.0), "{r}");
    }

    #[test]
    fn report_lines_are_parseable() {
        let r = run_security(3, 2, &[40, 20], (16, 16)).unwrap();
        let text = r.to_string();
        let lines: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).map(str::trim).collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[0].starts_with("security 20 error_with_key 0 percent"));
        for l in lines {
            let f: Vec<&str> = l.split(' ').collect();
            assert_eq!(f.len(), 5);
            f[1].parse::<usize>().unwrap();
            f[3].parse::<f64>().unwrap();
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let a = run_security(9, 2, &[30], (16, 8)).unwrap();
        let b = run_security(9, 2, &[30], (16, 8)).unwrap();
        assert_eq!(a.rows, b.rows);
    }

    #[test]
    fn too_small_corpus() {
        let corpus = synthetic_corpus(1, 5, (16, 16)).unwrap();
        assert!(run_steganalysis(&corpus, &[10], 0, &SteganalysisConfig::default()).is_err());
    }
}
