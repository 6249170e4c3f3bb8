//! Classical stationary iterations used as baselines.
//!
//! All three start from `x⁰_i = b_i / A_ii` and use the same relative-change
//! convergence test as GaBP, with one sweep counted as one iteration.

use serde::{Deserialize, Serialize};

use crate::accel::{steffensen_run, AitkenGuard};
use crate::diagnostics::spectral_radius_of_map;
use crate::error::{Error, Result};
use crate::gabp::{self, Acceleration, Mode, SolverConfig};
use crate::iteration::{run_plain, FixedPointIteration, SolveResult, StepFailure};
use crate::matrix::SymmetricSparseMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Jacobi,
    GaussSeidel,
    Sor,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Omega {
    /// `ω* = 2 / (1 + √(1 − ρ_J²))`.
    Auto,
    Fixed(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalConfig {
    pub method: Method,
    pub omega: Omega,
    pub epsilon: f64,
    pub max_iters: usize,
    pub acceleration: Acceleration,
    pub aitken: AitkenGuard,
    pub record_trajectory: bool,
}

impl Default for ClassicalConfig {
    fn default() -> Self {
        Self {
            method: Method::Jacobi,
            omega: Omega::Auto,
            epsilon: 1e-6,
            max_iters: 10_000,
            acceleration: Acceleration::None,
            aitken: AitkenGuard::default(),
            record_trajectory: false,
        }
    }
}

impl ClassicalConfig {
    pub fn with_method(method: Method) -> Self {
        Self { method, ..Self::default() }
    }

    fn validate(&self) -> Result<()> {
        if self.epsilon.is_nan() || self.epsilon <= 0.0 {
            return Err(Error::InvalidConfig(format!("epsilon must be positive, got {}", self.epsilon)));
        }
        if let Omega::Fixed(w) = self.omega {
            check_omega(w)?;
        }
        Ok(())
    }
}

fn check_omega(omega: f64) -> Result<()> {
    if omega > 0.0 && omega < 2.0 {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!("omega must lie in (0, 2), got {omega}")))
    }
}

fn initial_iterate(a: &SymmetricSparseMatrix, b: &[f64]) -> Result<Vec<f64>> {
    a.check_len(b.len())?;
    Ok(b.iter().zip(a.diagonals()).map(|(bi, d)| bi / d).collect())
}

/// `(b_i − Σ_{k≠i} A_ik x_k) / A_ii`.
fn relaxed_row(a: &SymmetricSparseMatrix, b: &[f64], x: &[f64], i: usize) -> f64 {
    let mut s = b[i];
    for &(k, v) in a.row(i) {
        s -= v * x[k];
    }
    s / a.diagonal(i)
}

/// Synchronous Jacobi sweep.
pub struct JacobiIteration<'a> {
    a: &'a SymmetricSparseMatrix,
    b: &'a [f64],
    x: Vec<f64>,
}

impl<'a> JacobiIteration<'a> {
    pub fn new(a: &'a SymmetricSparseMatrix, b: &'a [f64]) -> Result<Self> {
        Ok(Self { a, b, x: initial_iterate(a, b)? })
    }
}

impl FixedPointIteration for JacobiIteration<'_> {
    fn step(&mut self) -> std::result::Result<(), StepFailure> {
        self.x = (0..self.x.len()).map(|i| relaxed_row(self.a, self.b, &self.x, i)).collect();
        Ok(())
    }

    fn solution(&self) -> Vec<f64> {
        self.x.clone()
    }

    fn set_extrapolated(&mut self, values: &[f64]) {
        self.x.copy_from_slice(values);
    }
}

/// In-place ascending sweep; `omega == None` is plain Gauss-Seidel.
pub struct SorIteration<'a> {
    a: &'a SymmetricSparseMatrix,
    b: &'a [f64],
    x: Vec<f64>,
    omega: Option<f64>,
}

impl<'a> SorIteration<'a> {
    pub fn gauss_seidel(a: &'a SymmetricSparseMatrix, b: &'a [f64]) -> Result<Self> {
        Ok(Self { a, b, x: initial_iterate(a, b)?, omega: None })
    }

    pub fn sor(a: &'a SymmetricSparseMatrix, b: &'a [f64], omega: f64) -> Result<Self> {
        check_omega(omega)?;
        Ok(Self { a, b, x: initial_iterate(a, b)?, omega: Some(omega) })
    }
}

impl FixedPointIteration for SorIteration<'_> {
    fn step(&mut self) -> std::result::Result<(), StepFailure> {
        for i in 0..self.x.len() {
            let gs = relaxed_row(self.a, self.b, &self.x, i);
            self.x[i] = match self.omega {
                None => gs,
                Some(w) => (1.0 - w) * self.x[i] + w * gs,
            };
        }
        Ok(())
    }

    fn solution(&self) -> Vec<f64> {
        self.x.clone()
    }

    fn set_extrapolated(&mut self, values: &[f64]) {
        self.x.copy_from_slice(values);
    }
}

fn drive<I: FixedPointIteration>(
    mut it: I,
    a: &SymmetricSparseMatrix,
    b: &[f64],
    config: &ClassicalConfig,
) -> Result<SolveResult> {
    config.validate()?;
    let outcome = match config.acceleration {
        Acceleration::None => run_plain(&mut it, config.epsilon, config.max_iters, config.record_trajectory),
        Acceleration::Steffensen => {
            steffensen_run(&mut it, config.epsilon, config.max_iters, config.aitken, config.record_trajectory)
        }
    };
    SolveResult::from_outcome(outcome, a, b)
}

pub fn solve_jacobi(a: &SymmetricSparseMatrix, b: &[f64], config: &ClassicalConfig) -> Result<SolveResult> {
    drive(JacobiIteration::new(a, b)?, a, b, config)
}

pub fn solve_gauss_seidel(a: &SymmetricSparseMatrix, b: &[f64], config: &ClassicalConfig) -> Result<SolveResult> {
    drive(SorIteration::gauss_seidel(a, b)?, a, b, config)
}

pub fn solve_sor(a: &SymmetricSparseMatrix, b: &[f64], omega: f64, config: &ClassicalConfig) -> Result<SolveResult> {
    drive(SorIteration::sor(a, b, omega)?, a, b, config)
}

/// Spectral radius of the Jacobi iteration matrix `I − D⁻¹A`.
pub fn jacobi_spectral_radius(a: &SymmetricSparseMatrix) -> f64 {
    let apply = |v: &[f64], out: &mut [f64]| {
        for i in 0..a.dim() {
            out[i] = -a.row(i).iter().map(|&(k, w)| w * v[k]).sum::<f64>() / a.diagonal(i);
        }
    };
    spectral_radius_of_map(a.dim(), apply, 10_000, 1e-10).value
}

/// `ω* = 2 / (1 + √(1 − ρ_J²))`, defined only for `ρ_J < 1`.
pub fn optimal_sor_omega(a: &SymmetricSparseMatrix) -> Result<f64> {
    let rho = jacobi_spectral_radius(a);
    if rho >= 1.0 {
        return Err(Error::OmegaUndefined { rho });
    }
    Ok(2.0 / (1.0 + (1.0 - rho * rho).sqrt()))
}

/// GaBP with zeroed message precisions and no recipient exclusion, which
/// is the Jacobi iteration written as message passing.
pub fn solve_gabp_jacobi_mode(a: &SymmetricSparseMatrix, b: &[f64], config: &ClassicalConfig) -> Result<SolveResult> {
    config.validate()?;
    let gabp_config = SolverConfig {
        epsilon: config.epsilon,
        max_iters: config.max_iters,
        mode: Mode::JacobiVariant,
        acceleration: config.acceleration,
        aitken: config.aitken,
        record_trajectory: config.record_trajectory,
        ..SolverConfig::default()
    };
    gabp::solve_gabp(a, b, &gabp_config)
}

/// Dispatches on `config.method`, resolving `Omega::Auto` for SOR.
pub fn solve_classical(a: &SymmetricSparseMatrix, b: &[f64], config: &ClassicalConfig) -> Result<SolveResult> {
    match config.method {
        Method::Jacobi => solve_jacobi(a, b, config),
        Method::GaussSeidel => solve_gauss_seidel(a, b, config),
        Method::Sor => {
            let omega = match config.omega {
                Omega::Auto => optimal_sor_omega(a)?,
                Omega::Fixed(w) => w,
            };
            solve_sor(a, b, omega, config)
        }
    }
}
