//! Wall-clock of the hidden-addition pipeline against textbook RSA.
//!
//! Run with `cargo run --release --example timing`.

use dccd::experiments::{run_timing, CAPACITIES};

fn main() -> dccd::Result<()> {
    let report = run_timing(7, &CAPACITIES, (512, 512), 5)?;
    print!("{report}");
    Ok(())
}
