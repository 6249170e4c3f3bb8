//! Seeded generators of random test systems.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

use crate::diagnostics::spectral_radius_abs_shift;
use crate::matrix::SymmetricSparseMatrix;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_edges(rng: &mut impl Rng, n: usize, density: f64) -> Vec<(usize, usize, f64)> {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..i {
            if rng.gen_bool(density) {
                edges.push((i, j, rng.gen_range(-1.0..1.0)));
            }
        }
    }
    edges
}

/// Symmetric, strictly diagonally dominant, positive diagonal.
pub fn diagonally_dominant(rng: &mut impl Rng, n: usize, density: f64) -> SymmetricSparseMatrix {
    let edges = random_edges(rng, n, density);
    let mut off = vec![0.0; n];
    for &(i, j, v) in &edges {
        off[i] += f64::abs(v);
        off[j] += f64::abs(v);
    }
    let mut triplets = edges;
    for (i, s) in off.into_iter().enumerate() {
        triplets.push((i, i, s * rng.gen_range(1.05..2.0) + rng.gen_range(0.01..0.5)));
    }
    SymmetricSparseMatrix::from_triplets(n, &triplets).unwrap()
}

/// `A = I − B` with zero-diagonal `B` scaled so `ρ(|B|) = target`.
pub fn walk_summable(rng: &mut impl Rng, n: usize, density: f64, target: f64) -> SymmetricSparseMatrix {
    loop {
        let edges = random_edges(rng, n, density);
        if edges.is_empty() {
            continue;
        }
        let mut triplets: Vec<_> = edges.iter().map(|&(i, j, v)| (i, j, -v)).collect();
        triplets.extend((0..n).map(|i| (i, i, 1.0)));
        let raw = SymmetricSparseMatrix::from_triplets(n, &triplets).unwrap();
        let rho = spectral_radius_abs_shift(&raw, 100_000, 1e-14).value;
        if rho == 0.0 {
            continue;
        }
        let s = target / rho;
        let mut scaled: Vec<_> = edges.iter().map(|&(i, j, v)| (i, j, -v * s)).collect();
        scaled.extend((0..n).map(|i| (i, i, 1.0)));
        return SymmetricSparseMatrix::from_triplets(n, &scaled).unwrap();
    }
}

/// Random spanning tree, well-conditioned but not necessarily dominant.
pub fn random_tree(rng: &mut impl Rng, n: usize) -> SymmetricSparseMatrix {
    let mut triplets = Vec::new();
    for i in 1..n {
        let parent = rng.gen_range(0..i);
        let mag = rng.gen_range(0.2..1.5);
        let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        triplets.push((i, parent, sign * mag));
    }
    for i in 0..n {
        triplets.push((i, i, rng.gen_range(1.0..3.0)));
    }
    SymmetricSparseMatrix::from_triplets(n, &triplets).unwrap()
}

pub fn random_vector(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect()
}
