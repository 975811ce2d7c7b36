//! Extraction error with and without the hiding key.
//!
//! Without the key the extractor guesses a random matrix per image; the
//! error should sit near 50%.

use dccd::experiments::{run_security, CAPACITIES};

fn main() -> dccd::Result<()> {
    let trials = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(100);
    print!("{}", run_security(11, trials, &CAPACITIES, (512, 384))?);
    Ok(())
}
