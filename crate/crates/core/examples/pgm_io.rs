//! Reading and writing binary PGM files and inspecting the LSB plane.
//!
//!     cargo run --example pgm_io -- photo.pgm

use dccd::image::{load_pgm, read_pgm, save_pgm, synth_cover, write_pgm};
use dccd::stego::extract_lsb_plane;

fn main() -> dccd::Result<()> {
    let img = match std::env::args().nth(1) {
        Some(path) => load_pgm(path)?,
        None => synth_cover(9, 48, 32)?,
    };
    let bytes = write_pgm(&img);
    assert_eq!(read_pgm(&bytes)?, img);
    println!("{}x{} image, {} bytes as PGM", img.width(), img.height(), bytes.len());

    let plane = extract_lsb_plane(&img);
    let ones = plane.count_ones();
    println!("LSB plane: {ones} ones of {} ({:.1}%)", img.len(), 100.0 * ones as f64 / img.len() as f64);

    let out = std::env::temp_dir().join("dccd_pgm_io.pgm");
    save_pgm(&img, &out)?;
    println!("wrote {}", out.display());
    Ok(())
}
