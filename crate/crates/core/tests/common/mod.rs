#![allow(dead_code, unused_imports)]

pub use gabp_core::random::{diagonally_dominant, random_tree, random_vector, walk_summable};

pub fn rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    gabp_core::random::seeded(seed)
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[path = "eigen.rs"]
mod eigen;
pub use eigen::brute_force_eigenvalues;
