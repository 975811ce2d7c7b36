//! GF(2) linear algebra: packed matrices, keyed matrix generation and
//! syndrome solving.

mod keyed;
mod matrix;
pub mod prng;
mod solve;

pub use keyed::{fill_from_seed, generate_matrix, generate_with_solver, seeded_product, HidingKey, MatrixMode};
pub use matrix::{BitMatrix, BitVector};
pub use solve::{solve_syndrome, SyndromeSolver, MAX_MINIMIZE_COLS};
