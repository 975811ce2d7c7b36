//! Detectability of the embedding with SPAM features and an FLD ensemble.
//!
//! Pass a directory of PGM covers, or nothing to use 200 synthetic covers.
//!
//!     cargo run --release --example steganalysis -- /data/ucid_pgm

use dccd::experiments::{load_corpus, run_steganalysis, synthetic_corpus, SteganalysisConfig, CAPACITIES};

fn main() -> dccd::Result<()> {
    let corpus = match std::env::args().nth(1) {
        Some(dir) => load_corpus(dir)?.into_iter().map(|(_, img)| img).collect(),
        None => synthetic_corpus(5, 200, (512, 384))?,
    };
    let mut caps = vec![0];
    caps.extend(CAPACITIES);
    let report = run_steganalysis(&corpus, &caps, 17, &SteganalysisConfig::default())?;
    print!("{report}");
    Ok(())
}
