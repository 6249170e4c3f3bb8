//! Sufficient-condition checks for GaBP convergence.
//!
//! Two independent tests are provided: strict diagonal dominance and the
//! spectral radius of `|I − A|` (entrywise absolute value) being below one.
//! Either one guarantees convergence of the marginal means; neither implies
//! the other. Acyclic graphs are reported separately since GaBP is exact on
//! trees regardless of either condition.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::graph::GraphTopology;
use crate::matrix::SymmetricSparseMatrix;

pub const DEFAULT_POWER_MAX_ITERS: usize = 10_000;
pub const DEFAULT_POWER_TOL: f64 = 1e-12;

/// Outcome of a power iteration. `converged == false` means the estimate is
/// the last iterate after `iterations` steps and should be treated as a
/// warning.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralEstimate {
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagnosticsReport {
    pub strictly_diagonally_dominant: bool,
    pub spectral_radius_estimate: f64,
    pub spectral_radius_converged: bool,
    pub is_tree: bool,
    pub power_iterations_used: usize,
}

impl DiagnosticsReport {
    /// Either sufficient condition holds.
    pub fn convergence_guaranteed(&self) -> bool {
        self.strictly_diagonally_dominant || self.spectral_radius_estimate < 1.0
    }

    pub fn verdict(&self) -> &'static str {
        if self.convergence_guaranteed() {
            "GaBP convergence guaranteed"
        } else {
            "no guarantee (may still converge)"
        }
    }
}

/// `|A_ii| > Σ_{j≠i} |A_ij|` for every row.
pub fn is_strictly_diagonally_dominant(a: &SymmetricSparseMatrix) -> bool {
    (0..a.dim()).all(|i| {
        let off: f64 = a.row(i).iter().map(|&(_, v)| v.abs()).sum();
        a.diagonal(i).abs() > off
    })
}

/// Estimates `ρ(|I − A|)` by power iteration from the normalized all-ones
/// vector, stopping when successive Rayleigh quotients differ by at most
/// `tol`.
///
/// The iteration runs on `|I − A| + I`, whose Perron root is strictly
/// dominant even when `|I − A|` is bipartite (where `±ρ` would both be
/// eigenvalues and the plain iteration stalls on a mixture), and the unit
/// shift is removed from the estimate.
pub fn spectral_radius_abs_shift(a: &SymmetricSparseMatrix, max_iters: usize, tol: f64) -> SpectralEstimate {
    let n = a.dim();
    let apply = |v: &[f64], out: &mut [f64]| {
        for i in 0..n {
            let diag = (1.0 - a.diagonal(i)).abs() + 1.0;
            out[i] = diag * v[i] + a.row(i).iter().map(|&(j, w)| w.abs() * v[j]).sum::<f64>();
        }
    };
    let mut v = vec![1.0 / (n as f64).sqrt(); n];
    let mut w = vec![0.0; n];
    let mut prev = f64::NAN;
    for iter in 1..=max_iters {
        apply(&v, &mut w);
        let rayleigh: f64 = v.iter().zip(&w).map(|(x, y)| x * y).sum();
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        let estimate = (rayleigh - 1.0).max(0.0);
        if (estimate - prev).abs() <= tol {
            return SpectralEstimate { value: estimate, iterations: iter, converged: true };
        }
        prev = estimate;
        for (x, y) in v.iter_mut().zip(&w) {
            *x = y / norm;
        }
    }
    SpectralEstimate { value: prev.max(0.0), iterations: max_iters, converged: false }
}

/// Spectral radius of a general (possibly non-symmetric) linear map by
/// power iteration on its square. The norm-growth ratio of `M²` converges
/// to `ρ(M)²` even when `M` has a `±ρ` pair or a negative dominant
/// eigenvalue.
///
/// The start vector is a fixed pseudo-random draw rather than the all-ones
/// vector, which can be orthogonal to the dominant eigenvector of a map
/// with no sign structure.
pub fn spectral_radius_of_map<F>(n: usize, apply: F, max_iters: usize, tol: f64) -> SpectralEstimate
where
    F: Fn(&[f64], &mut [f64]),
{
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..1.5)).collect();
    let start_norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= start_norm);
    let mut mid = vec![0.0; n];
    let mut w = vec![0.0; n];
    let mut prev = f64::NAN;
    for iter in 1..=max_iters {
        apply(&v, &mut mid);
        apply(&mid, &mut w);
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        let estimate = norm.sqrt();
        if norm == 0.0 || (estimate - prev).abs() <= tol {
            return SpectralEstimate { value: estimate, iterations: iter, converged: true };
        }
        prev = estimate;
        for (x, y) in v.iter_mut().zip(&w) {
            *x = y / norm;
        }
    }
    SpectralEstimate { value: prev, iterations: max_iters, converged: false }
}

pub fn diagnose(a: &SymmetricSparseMatrix) -> DiagnosticsReport {
    let rho = spectral_radius_abs_shift(a, DEFAULT_POWER_MAX_ITERS, DEFAULT_POWER_TOL);
    DiagnosticsReport {
        strictly_diagonally_dominant: is_strictly_diagonally_dominant(a),
        spectral_radius_estimate: rho.value,
        spectral_radius_converged: rho.converged,
        is_tree: GraphTopology::from_matrix(a).is_tree(),
        power_iterations_used: rho.iterations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense(rows: &[&[f64]]) -> SymmetricSparseMatrix {
        SymmetricSparseMatrix::from_dense(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn identity_has_zero_radius() {
        let est = spectral_radius_abs_shift(&SymmetricSparseMatrix::identity(3).unwrap(), 100, 1e-12);
        assert!(est.value < 1e-15, "{}", est.value);
        assert!(est.converged);
    }

    #[test]
    fn bipartite_shift_matrix() {
        // |I - A| = [[0,2],[2,0]] has eigenvalues ±2
        let est = spectral_radius_abs_shift(&dense(&[&[1.0, 2.0], &[2.0, 1.0]]), 1000, 1e-12);
        assert!((est.value - 2.0).abs() < 1e-9);
        // star graph: the ones vector is not an eigenvector here
        let star = dense(&[&[1.0, 0.5, 0.5, 0.5], &[0.5, 1.0, 0.0, 0.0], &[0.5, 0.0, 1.0, 0.0], &[0.5, 0.0, 0.0, 1.0]]);
        let est = spectral_radius_abs_shift(&star, 10_000, 1e-14);
        assert!((est.value - 0.75f64.sqrt()).abs() < 1e-9, "{est:?}");
    }

    #[test]
    fn reports_non_convergence() {
        let a = dense(&[&[1.0, 0.3, 0.2], &[0.3, 1.0, 0.1], &[0.2, 0.1, 1.0]]);
        let est = spectral_radius_abs_shift(&a, 1, 1e-15);
        assert!(!est.converged);
        assert_eq!(est.iterations, 1);
    }

    #[test]
    fn dominance_flag() {
        assert!(is_strictly_diagonally_dominant(&dense(&[&[2.0, 1.0], &[1.0, 2.0]])));
        assert!(!is_strictly_diagonally_dominant(&dense(&[&[1.0, 1.0], &[1.0, 2.0]])));
        assert!(!is_strictly_diagonally_dominant(&dense(&[&[1.0, 2.0], &[2.0, 1.0]])));
    }

    #[test]
    fn map_radius_with_negative_dominant_eigenvalue() {
        // diag(-0.9, 0.5)
        let est = spectral_radius_of_map(
            2,
            |v, out| {
                out[0] = -0.9 * v[0];
                out[1] = 0.5 * v[1];
            },
            10_000,
            1e-14,
        );
        assert!((est.value - 0.9).abs() < 1e-10);
    }

    #[test]
    fn verdict_wording() {
        let r = diagnose(&dense(&[&[1.0, 2.0], &[2.0, 1.0]]));
        assert!(!r.strictly_diagonally_dominant);
        assert!((r.spectral_radius_estimate - 2.0).abs() < 1e-9);
        assert_eq!(r.verdict(), "no guarantee (may still converge)");
        let r = diagnose(&dense(&[&[2.0, 1.0, 0.0], &[1.0, 3.0, 1.0], &[0.0, 1.0, 2.0]]));
        assert!(r.strictly_diagonally_dominant && r.is_tree);
        assert_eq!(r.verdict(), "GaBP convergence guaranteed");
    }
}
