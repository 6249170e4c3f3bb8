//! Aitken Δ² extrapolation and Steffensen's iterations.
//!
//! Steffensen's method wraps any [`FixedPointIteration`]: starting from the
//! current value of the extrapolated sequence it runs two rounds, applies
//! Δ² componentwise to the three values, and writes the result back before
//! the next pair of rounds. Each Δ² cycle counts as one iteration; the
//! underlying rounds are reported separately.

use std::collections::VecDeque;

use thiserror::Error;

use crate::iteration::{all_finite, has_converged, FixedPointIteration, IterationOutcome, SolveStatus};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AitkenError {
    #[error("dimension mismatch in extrapolation window")]
    DimensionMismatch,
    /// The second difference vanished while the sequence was still moving,
    /// so the Δ² formula has no finite value for this component.
    #[error("Aitken breakdown in component {component}")]
    Breakdown { component: usize },
}

/// Tolerances controlling the Δ² denominator guard.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AitkenGuard {
    /// A second difference at most `guard_tol·(1 + |x2|)` is degenerate.
    pub guard_tol: f64,
    /// A degenerate component passes through unchanged only if both of its
    /// first differences are at most `stall_tol·(1 + |x2|)`; otherwise the
    /// extrapolation breaks down.
    pub stall_tol: f64,
}

impl Default for AitkenGuard {
    fn default() -> Self {
        Self { guard_tol: 1e-12, stall_tol: 1e-6 }
    }
}

/// Componentwise `y = x0 − (x1 − x0)² / (x2 − 2·x1 + x0)`.
pub fn aitken_extrapolate(x0: &[f64], x1: &[f64], x2: &[f64], guard: AitkenGuard) -> Result<Vec<f64>, AitkenError> {
    if x0.len() != x1.len() || x1.len() != x2.len() {
        return Err(AitkenError::DimensionMismatch);
    }
    x0.iter()
        .zip(x1)
        .zip(x2)
        .enumerate()
        .map(|(component, ((&a, &b), &c))| {
            let second = c - 2.0 * b + a;
            let scale = 1.0 + c.abs();
            if second.abs() <= guard.guard_tol * scale {
                let stalled = (b - a).abs() <= guard.stall_tol * scale && (c - b).abs() <= guard.stall_tol * scale;
                return if stalled { Ok(c) } else { Err(AitkenError::Breakdown { component }) };
            }
            Ok(a - (b - a) * (b - a) / second)
        })
        .collect()
}

/// Rolling window of the last three iterates.
#[derive(Debug, Clone, Default)]
pub struct AccelState {
    window: VecDeque<Vec<f64>>,
    pub guard: AitkenGuard,
}

impl AccelState {
    pub fn new(guard: AitkenGuard) -> Self {
        Self { window: VecDeque::with_capacity(3), guard }
    }

    pub fn push(&mut self, x: Vec<f64>) -> Result<(), AitkenError> {
        if self.window.front().is_some_and(|f| f.len() != x.len()) {
            return Err(AitkenError::DimensionMismatch);
        }
        if self.window.len() == 3 {
            self.window.pop_front();
        }
        self.window.push_back(x);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.window.len()
    }

    pub fn is_empty(&self) -> bool {
        self.window.is_empty()
    }

    pub fn clear(&mut self) {
        self.window.clear();
    }

    /// Δ² of the full window, `None` until three iterates are held.
    pub fn extrapolate(&self) -> Option<Result<Vec<f64>, AitkenError>> {
        (self.window.len() == 3).then(|| aitken_extrapolate(&self.window[0], &self.window[1], &self.window[2], self.guard))
    }
}

/// Runs Steffensen's iterations on `it` until the monitored values change by
/// at most `epsilon` (relative) across one Δ² cycle, or `max_iters` cycles
/// elapse.
pub fn steffensen_run<I: FixedPointIteration + ?Sized>(
    it: &mut I,
    epsilon: f64,
    max_iters: usize,
    guard: AitkenGuard,
    record_trajectory: bool,
) -> IterationOutcome {
    let mut trajectory = record_trajectory.then(Vec::new);
    let mut window = AccelState::new(guard);
    let mut prev = it.monitored();
    let mut cycles = 0;
    let mut rounds = 0;
    let mut status = SolveStatus::MaxItersExceeded;

    'cycles: while cycles < max_iters {
        window.clear();
        window.push(it.extrapolated()).expect("fresh window");
        for _ in 0..2 {
            rounds += 1;
            if let Err(fail) = it.step() {
                cycles += 1;
                status = SolveStatus::Diverged(fail.0);
                break 'cycles;
            }
            if let Err(e) = window.push(it.extrapolated()) {
                status = SolveStatus::Diverged(e.to_string());
                break 'cycles;
            }
        }
        cycles += 1;
        let y = match window.extrapolate().expect("three iterates") {
            Ok(y) if all_finite(&y) => y,
            Ok(_) => {
                status = SolveStatus::Diverged("non-finite extrapolation".into());
                break;
            }
            Err(e) => {
                status = SolveStatus::Diverged(e.to_string());
                break;
            }
        };
        it.set_extrapolated(&y);
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
    IterationOutcome { x: it.solution(), iterations: cycles, rounds, status, trajectory }
}

/// Adapts a plain map `x ↦ f(x)` to [`FixedPointIteration`].
pub struct MapIteration<F> {
    x: Vec<f64>,
    map: F,
}

impl<F: FnMut(&[f64]) -> Vec<f64>> MapIteration<F> {
    pub fn new(x_init: Vec<f64>, map: F) -> Self {
        Self { x: x_init, map }
    }
}

impl<F: FnMut(&[f64]) -> Vec<f64>> FixedPointIteration for MapIteration<F> {
    fn step(&mut self) -> Result<(), crate::iteration::StepFailure> {
        self.x = (self.map)(&self.x);
        Ok(())
    }

    fn solution(&self) -> Vec<f64> {
        self.x.clone()
    }

    fn set_extrapolated(&mut self, values: &[f64]) {
        self.x = values.to_vec();
    }
}
