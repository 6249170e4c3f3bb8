//! Solver selection by key, shared by the bench harness and the CLI.
//!
//! Keys are `jacobi`, `gs`, `sor`, `gabp-parallel` and `gabp-serial`, each
//! optionally suffixed with `+steffensen`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::classical::{self, ClassicalConfig, Method, Omega};
use crate::error::{Error, Result};
use crate::gabp::{self, Acceleration, Schedule, SolverConfig};
use crate::iteration::SolveResult;
use crate::matrix::SymmetricSparseMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaseMethod {
    Jacobi,
    Gs,
    Sor,
    GabpParallel,
    GabpSerial,
}

impl BaseMethod {
    pub const ALL: [BaseMethod; 5] =
        [BaseMethod::Jacobi, BaseMethod::Gs, BaseMethod::Sor, BaseMethod::GabpParallel, BaseMethod::GabpSerial];

    pub fn key(self) -> &'static str {
        match self {
            BaseMethod::Jacobi => "jacobi",
            BaseMethod::Gs => "gs",
            BaseMethod::Sor => "sor",
            BaseMethod::GabpParallel => "gabp-parallel",
            BaseMethod::GabpSerial => "gabp-serial",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MethodSpec {
    pub base: BaseMethod,
    pub steffensen: bool,
}

impl MethodSpec {
    pub const fn new(base: BaseMethod, steffensen: bool) -> Self {
        Self { base, steffensen }
    }

    pub fn is_gabp(&self) -> bool {
        matches!(self.base, BaseMethod::GabpParallel | BaseMethod::GabpSerial)
    }
}

impl fmt::Display for MethodSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.base.key())?;
        if self.steffensen {
            f.write_str("+steffensen")?;
        }
        Ok(())
    }
}

impl FromStr for MethodSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let (base, steffensen) = match lower.strip_suffix("+steffensen") {
            Some(rest) => (rest, true),
            None => (lower.as_str(), false),
        };
        BaseMethod::ALL
            .into_iter()
            .find(|m| m.key() == base)
            .map(|base| MethodSpec { base, steffensen })
            .ok_or_else(|| {
                Error::InvalidConfig(format!(
                    "unknown method '{s}'; expected one of jacobi, gs, sor, gabp-parallel, gabp-serial, optionally with +steffensen"
                ))
            })
    }
}

/// Knobs common to every method; those that do not apply are ignored.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub epsilon: f64,
    pub max_iters: usize,
    pub omega: Omega,
    pub damping: f64,
    pub record_trajectory: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { epsilon: 1e-6, max_iters: 10_000, omega: Omega::Auto, damping: 0.0, record_trajectory: false }
    }
}

pub fn run_method(a: &SymmetricSparseMatrix, b: &[f64], spec: MethodSpec, opts: &RunOptions) -> Result<SolveResult> {
    let acceleration = if spec.steffensen { Acceleration::Steffensen } else { Acceleration::None };
    let schedule = match spec.base {
        BaseMethod::GabpParallel => Schedule::Parallel,
        BaseMethod::GabpSerial => Schedule::Serial,
        base => {
            let method = match base {
                BaseMethod::Jacobi => Method::Jacobi,
                BaseMethod::Gs => Method::GaussSeidel,
                _ => Method::Sor,
            };
            let config = ClassicalConfig {
                method,
                omega: opts.omega,
                epsilon: opts.epsilon,
                max_iters: opts.max_iters,
                acceleration,
                record_trajectory: opts.record_trajectory,
                ..ClassicalConfig::default()
            };
            return classical::solve_classical(a, b, &config);
        }
    };
    let config = SolverConfig {
        epsilon: opts.epsilon,
        max_iters: opts.max_iters,
        schedule,
        damping: opts.damping,
        acceleration,
        record_trajectory: opts.record_trajectory,
        ..SolverConfig::default()
    };
    gabp::solve_gabp(a, b, &config)
}

/// `b_i / A_ii`, the starting iterate of every method.
pub fn initial_iterate(a: &SymmetricSparseMatrix, b: &[f64]) -> Result<Vec<f64>> {
    if a.dim() != b.len() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.len() });
    }
    Ok(b.iter().zip(a.diagonals()).map(|(bi, d)| bi / d).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_round_trip() {
        for base in BaseMethod::ALL {
            for steffensen in [false, true] {
                let spec = MethodSpec { base, steffensen };
                assert_eq!(spec.to_string().parse::<MethodSpec>().unwrap(), spec);
            }
        }
        assert!("GS+Steffensen".parse::<MethodSpec>().unwrap().steffensen);
        assert!("newton".parse::<MethodSpec>().is_err());
        assert!("gabp".parse::<MethodSpec>().is_err());
    }

    #[test]
    fn every_method_solves_a_small_system() {
        let a = SymmetricSparseMatrix::from_dense(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        for base in BaseMethod::ALL {
            for steffensen in [false, true] {
                let r = run_method(&a, &[3.0, 3.0], MethodSpec { base, steffensen }, &RunOptions::default()).unwrap();
                assert!(r.converged(), "{base:?} {steffensen}");
                assert!(r.x.iter().all(|v| (v - 1.0).abs() < 1e-5));
            }
        }
    }
}
