//! Max-product check on products of one-dimensional Gaussians.
//!
//! The max-product and sum-product forms of GaBP send identical messages
//! because the maximizer of a Gaussian product is its mean. Rather than a
//! second solver, the crate checks that fact numerically.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Mean and precision of `N(μ₁, P₁⁻¹)·N(μ₂, P₂⁻¹)` up to normalization:
/// `P = P₁ + P₂`, `μ = P⁻¹(P₁μ₁ + P₂μ₂)`.
pub fn gaussian_product(mean1: f64, precision1: f64, mean2: f64, precision2: f64) -> (f64, f64) {
    let precision = precision1 + precision2;
    ((precision1 * mean1 + precision2 * mean2) / precision, precision)
}

fn log_density_slope(x: f64, mean: f64, precision: f64) -> f64 {
    -precision * (x - mean)
}

/// Maximizer of the product density, found by bisection on the sign of the
/// slope of its logarithm (the sum of both factors' slopes).
pub fn product_density_maximizer(mean1: f64, precision1: f64, mean2: f64, precision2: f64) -> f64 {
    let slope = |x: f64| log_density_slope(x, mean1, precision1) + log_density_slope(x, mean2, precision2);
    let (mut lo, mut hi) = (mean1.min(mean2) - 1.0, mean1.max(mean2) + 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if slope(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Golden-section search for the maximizer of a unimodal `f` on `[lo, hi]`.
pub fn golden_section_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - ratio * (hi - lo);
    let mut d = lo + ratio * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    while hi - lo > tol {
        if fc > fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - ratio * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + ratio * (hi - lo);
            fd = f(d);
        }
    }
    0.5 * (lo + hi)
}

/// Draws `samples` random pairs of Gaussians and checks that the product's
/// maximizer equals its closed-form mean within `1e-8`.
pub fn max_product_mode_check(samples: usize, seed: u64) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples).all(|_| {
        let (m1, m2) = (rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
        let (p1, p2) = (10f64.powf(rng.gen_range(-2.0..2.0)), 10f64.powf(rng.gen_range(-2.0..2.0)));
        let (mean, _) = gaussian_product(m1, p1, m2, p2);
        (product_density_maximizer(m1, p1, m2, p2) - mean).abs() <= 1e-8
    })
}
