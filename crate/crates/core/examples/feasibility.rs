//! Runs every covert case many times and prints the difference ratio
//! between the recovered and the plaintext result (0 means exact).

use dccd::experiments::{run_feasibility, FeasibilityConfig};

fn main() -> dccd::Result<()> {
    let trials = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(100);
    let cfg = FeasibilityConfig {
        trials,
        ..FeasibilityConfig::default()
    };
    print!("{}", run_feasibility(1, &cfg)?);
    Ok(())
}
