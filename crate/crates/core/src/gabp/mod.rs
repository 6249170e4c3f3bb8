//! Gaussian belief propagation for `A·x = b`.
//!
//! The system is read as a Gaussian graphical model with precision matrix
//! `A` and potential vector `b`; the marginal means are the solution. Each
//! node keeps a prior `(P_ii, μ_ii) = (A_ii, b_i/A_ii)`, broadcasts the
//! aggregate of its prior and incoming messages, and every neighbor
//! recovers the message meant for it by subtracting its own contribution
//! (the broadcast variant). A round updates every directed message once.
//!
//! ```
//! use gabp_core::{gabp::{solve_gabp, SolverConfig}, SymmetricSparseMatrix};
//!
//! let a = SymmetricSparseMatrix::from_dense(&[vec![2.0, 1.0], vec![1.0, 2.0]])?;
//! let result = solve_gabp(&a, &[3.0, 3.0], &SolverConfig::default())?;
//! assert!(result.converged());
//! assert_eq!(result.x, vec![1.0, 1.0]);
//! # Ok::<(), gabp_core::Error>(())
//! ```

mod max_product;
pub mod reference;
mod state;

use serde::{Deserialize, Serialize};

pub use max_product::{gaussian_product, golden_section_max, max_product_mode_check, product_density_maximizer};
pub use state::{check_convergence, GabpError, MessageState, MIN_RESIDUAL_PRECISION};

use crate::accel::{steffensen_run, AitkenGuard};
use crate::error::{Error, Result};
use crate::iteration::{run_plain, FixedPointIteration, SolveResult, StepFailure};
use crate::matrix::SymmetricSparseMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Schedule {
    /// Synchronous: all messages from the previous round's state.
    Parallel,
    /// Asynchronous sweep in node order.
    Serial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Acceleration {
    None,
    Steffensen,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    GaBP,
    /// Message precisions pinned to zero and the recipient not excluded from
    /// the sender's neighborhood. Parallel schedule reproduces Jacobi,
    /// serial reproduces Gauss-Seidel.
    JacobiVariant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConvergenceMetric {
    /// Change in the marginal means `μ̃` only.
    MarginalMeans,
    /// Change in every message scalar and every marginal mean.
    AllScalars,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub epsilon: f64,
    pub max_iters: usize,
    pub schedule: Schedule,
    /// Serial sweep order; ascending index when `None`.
    pub node_order: Option<Vec<usize>>,
    /// Weight `γ` of the previous message: stored = `(1−γ)·new + γ·old`.
    pub damping: f64,
    pub acceleration: Acceleration,
    pub mode: Mode,
    pub metric: ConvergenceMetric,
    pub aitken: AitkenGuard,
    pub record_trajectory: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            epsilon: 1e-6,
            max_iters: 10_000,
            schedule: Schedule::Parallel,
            node_order: None,
            damping: 0.0,
            acceleration: Acceleration::None,
            mode: Mode::GaBP,
            metric: ConvergenceMetric::MarginalMeans,
            aitken: AitkenGuard::default(),
            record_trajectory: false,
        }
    }
}

impl SolverConfig {
    pub fn serial() -> Self {
        Self { schedule: Schedule::Serial, ..Self::default() }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.epsilon.is_nan() || self.epsilon <= 0.0 {
            return Err(Error::InvalidConfig(format!("epsilon must be positive, got {}", self.epsilon)));
        }
        if !(0.0..1.0).contains(&self.damping) {
            return Err(Error::InvalidConfig(format!("damping must lie in [0, 1), got {}", self.damping)));
        }
        if let Some(order) = &self.node_order {
            let mut seen = vec![false; n];
            let valid = order.len() == n && order.iter().all(|&i| i < n && !std::mem::replace(&mut seen[i], true));
            if !valid {
                return Err(Error::InvalidConfig("node_order must be a permutation of 0..n".into()));
            }
        }
        Ok(())
    }

    fn order(&self, n: usize) -> Vec<usize> {
        self.node_order.clone().unwrap_or_else(|| (0..n).collect())
    }
}

/// A GaBP run packaged as a fixed-point iteration over the marginal means.
///
/// Under Steffensen acceleration each node extrapolates its own broadcast
/// precision `P̃_i` (in [`Mode::JacobiVariant`], where `P̃_i` is constant,
/// its broadcast mean `μ̃_i`).
#[derive(Debug, Clone)]
pub struct GabpIteration {
    pub state: MessageState,
    schedule: Schedule,
    order: Vec<usize>,
    damping: f64,
    metric: ConvergenceMetric,
}

impl GabpIteration {
    pub fn new(a: &SymmetricSparseMatrix, b: &[f64], config: &SolverConfig) -> Result<Self> {
        config.validate(a.dim())?;
        Ok(Self {
            state: MessageState::new(a, b, config.mode)?,
            schedule: config.schedule,
            order: config.order(a.dim()),
            damping: config.damping,
            metric: config.metric,
        })
    }
}

impl FixedPointIteration for GabpIteration {
    fn step(&mut self) -> std::result::Result<(), StepFailure> {
        self.state
            .run_round(self.schedule, &self.order, self.damping)
            .map_err(|e| StepFailure(e.to_string()))
    }

    fn solution(&self) -> Vec<f64> {
        self.state.node_mean.clone()
    }

    fn monitored(&self) -> Vec<f64> {
        self.state.monitored(self.metric)
    }

    fn extrapolated(&self) -> Vec<f64> {
        match self.state.mode() {
            Mode::GaBP => self.state.node_precision.clone(),
            Mode::JacobiVariant => self.state.node_mean.clone(),
        }
    }

    fn set_extrapolated(&mut self, values: &[f64]) {
        match self.state.mode() {
            Mode::GaBP => self.state.node_precision.copy_from_slice(values),
            Mode::JacobiVariant => self.state.node_mean.copy_from_slice(values),
        }
    }
}

/// Solves `A·x = b` with GaBP.
///
/// Non-convergence is reported in [`SolveResult::status`] with the last
/// iterate as a best-effort `x`; `Err` is returned only for invalid inputs.
pub fn solve_gabp(a: &SymmetricSparseMatrix, b: &[f64], config: &SolverConfig) -> Result<SolveResult> {
    let mut it = GabpIteration::new(a, b, config)?;
    let outcome = match config.acceleration {
        Acceleration::None => run_plain(&mut it, config.epsilon, config.max_iters, config.record_trajectory),
        Acceleration::Steffensen => {
            steffensen_run(&mut it, config.epsilon, config.max_iters, config.aitken, config.record_trajectory)
        }
    };
    let mut result = SolveResult::from_outcome(outcome, a, b)?;
    if config.mode == Mode::GaBP {
        result.marginal_precisions = Some(it.state.node_precision.clone());
    }
    Ok(result)
}
