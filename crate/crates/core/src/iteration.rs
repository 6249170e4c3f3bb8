//! Shared driver for fixed-point solvers.
//!
//! Every iterative method in the crate (GaBP, Jacobi, Gauss-Seidel, SOR) is
//! expressed as a [`FixedPointIteration`]. The plain driver here and the
//! Steffensen driver in [`crate::accel`] both run on that trait, so the
//! convergence test and iteration accounting are identical across methods.

use serde::Serialize;

use crate::error::Result;
use crate::matrix::{inf_norm, SymmetricSparseMatrix};

/// Why an iteration stopped.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", content = "reason", rename_all = "snake_case")]
pub enum SolveStatus {
    Converged,
    MaxItersExceeded,
    Diverged(String),
}

/// A single round could not be completed.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFailure(pub String);

impl std::fmt::Display for StepFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

/// One round of a deterministic fixed-point map.
pub trait FixedPointIteration {
    /// Advances by one round (one parallel update or one full sweep).
    fn step(&mut self) -> std::result::Result<(), StepFailure>;

    /// Current estimate of the solution.
    fn solution(&self) -> Vec<f64>;

    /// Values whose change decides convergence. Defaults to the solution.
    fn monitored(&self) -> Vec<f64> {
        self.solution()
    }

    /// The per-node sequence an extrapolation acts on.
    fn extrapolated(&self) -> Vec<f64> {
        self.solution()
    }

    /// Replaces the extrapolated sequence's current value.
    fn set_extrapolated(&mut self, values: &[f64]);
}

/// Raw outcome of a driver, before residuals are attached.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationOutcome {
    pub x: Vec<f64>,
    /// Reported iteration count: rounds for plain runs, Δ² cycles for
    /// Steffensen runs.
    pub iterations: usize,
    /// Underlying solver rounds actually executed.
    pub rounds: usize,
    pub status: SolveStatus,
    pub trajectory: Option<Vec<Vec<f64>>>,
}

/// Result of a solve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveResult {
    pub x: Vec<f64>,
    pub iterations: usize,
    pub rounds: usize,
    pub status: SolveStatus,
    pub residual_inf: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub marginal_precisions: Option<Vec<f64>>,
    #[serde(skip)]
    pub trajectory: Option<Vec<Vec<f64>>>,
}

impl SolveResult {
    pub fn from_outcome(outcome: IterationOutcome, a: &SymmetricSparseMatrix, b: &[f64]) -> Result<Self> {
        let residual_inf = a.residual_inf(&outcome.x, b)?;
        Ok(Self {
            x: outcome.x,
            iterations: outcome.iterations,
            rounds: outcome.rounds,
            status: outcome.status,
            residual_inf: if residual_inf.is_finite() { residual_inf } else { f64::INFINITY },
            marginal_precisions: None,
            trajectory: outcome.trajectory,
        })
    }

    pub fn converged(&self) -> bool {
        self.status == SolveStatus::Converged
    }
}

/// Largest absolute change, scaled by `max(1, ‖curr‖∞)`.
///
/// Convergence is declared when this is at most `epsilon`. The scale makes
/// the test invariant to the magnitude of the solution once it exceeds one.
pub fn relative_change(prev: &[f64], curr: &[f64]) -> f64 {
    let diff = prev.iter().zip(curr).map(|(p, c)| (c - p).abs()).fold(0.0, f64::max);
    diff / inf_norm(curr).max(1.0)
}

pub fn has_converged(prev: &[f64], curr: &[f64], epsilon: f64) -> bool {
    relative_change(prev, curr) <= epsilon
}

/// Values beyond this magnitude are treated as divergence.
pub(crate) const BLOWUP: f64 = 1e150;

pub(crate) fn all_finite(v: &[f64]) -> bool {
    v.iter().all(|x| x.is_finite() && x.abs() < BLOWUP)
}

/// Runs `it` until the monitored values change by at most `epsilon`
/// (relative) between consecutive rounds, or `max_iters` rounds elapse.
pub fn run_plain<I: FixedPointIteration + ?Sized>(
    it: &mut I,
    epsilon: f64,
    max_iters: usize,
    record_trajectory: bool,
) -> IterationOutcome {
    let mut trajectory = record_trajectory.then(Vec::new);
    let mut prev = it.monitored();
    let mut status = SolveStatus::MaxItersExceeded;
    let mut rounds = 0;
    while rounds < max_iters {
        if let Err(fail) = it.step() {
            rounds += 1;
            status = SolveStatus::Diverged(fail.0);
            break;
        }
        rounds += 1;
        let curr = it.monitored();
        if let Some(t) = trajectory.as_mut() {
            t.push(it.solution());
        }
        if !all_finite(&curr) {
            status = SolveStatus::Diverged("non-finite iterate".into());
            break;
        }
        if has_converged(&prev, &curr, epsilon) {
            status = SolveStatus::Converged;
            break;
        }
        prev = curr;
    }
    IterationOutcome { x: it.solution(), iterations: rounds, rounds, status, trajectory }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Halving(Vec<f64>);

    impl FixedPointIteration for Halving {
        fn step(&mut self) -> std::result::Result<(), StepFailure> {
            self.0.iter_mut().for_each(|x| *x *= 0.5);
            Ok(())
        }
        fn solution(&self) -> Vec<f64> {
            self.0.clone()
        }
        fn set_extrapolated(&mut self, values: &[f64]) {
            self.0 = values.to_vec();
        }
    }

    #[test]
    fn relative_change_scales_above_one() {
        assert_eq!(relative_change(&[0.0, 1.0], &[0.0, 1.5]), 0.5 / 1.5);
        assert_eq!(relative_change(&[10.0], &[20.0]), 0.5);
        assert_eq!(relative_change(&[0.1], &[0.3]), 0.19999999999999998);
    }

    #[test]
    fn plain_driver_counts_rounds() {
        // |Δ| at round t is 2^-t; first t with 2^-t <= 1e-3 is 10
        let mut it = Halving(vec![1.0]);
        let out = run_plain(&mut it, 1e-3, 100, true);
        assert_eq!(out.status, SolveStatus::Converged);
        assert_eq!(out.iterations, 10);
        assert_eq!(out.trajectory.unwrap().len(), 10);

        let mut it = Halving(vec![1.0]);
        let out = run_plain(&mut it, 1e-3, 5, false);
        assert_eq!(out.status, SolveStatus::MaxItersExceeded);
        assert_eq!(out.iterations, 5);
    }
}
