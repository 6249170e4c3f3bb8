//! Decorrelator detection for synchronous CDMA.
//!
//! With `n` users sharing spreading codes of length `N`, the matched-filter
//! outputs satisfy `y = R·x + noise` where `R` is the code cross-correlation
//! matrix. The decorrelator decides `sign(R⁻¹y)`, which is a linear solve
//! with `A = R` and `b = y`.

mod bench;
mod gold;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

pub use bench::{bench_table1, BenchCell, BenchMetadata, BenchReport, TableRow};
pub use gold::{correlation, correlation_matrix, find_code_subset, gold_codes_n7, SpreadingCodeSet};

use crate::dense::direct_solve;
use crate::diagnostics::{spectral_radius_abs_shift, DEFAULT_POWER_MAX_ITERS, DEFAULT_POWER_TOL};
use crate::error::{Error, Result};
use crate::gabp::{solve_gabp, SolverConfig};
use crate::matrix::{inf_norm, SymmetricSparseMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum FixtureName {
    R3,
    R4,
}

impl FixtureName {
    pub const ALL: [FixtureName; 2] = [FixtureName::R3, FixtureName::R4];
}

impl fmt::Display for FixtureName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FixtureName::R3 => "R3",
            FixtureName::R4 => "R4",
        })
    }
}

impl FromStr for FixtureName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "R3" => Ok(FixtureName::R3),
            "R4" => Ok(FixtureName::R4),
            _ => Err(Error::InvalidConfig(format!("unknown fixture '{s}'; expected R3 or R4"))),
        }
    }
}

/// A cross-correlation matrix of Gold codes with its quoted `ρ(|I − R|)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationFixture {
    pub name: FixtureName,
    pub matrix: SymmetricSparseMatrix,
    pub expected_rho: f64,
}

/// Agreement required between the computed and quoted spectral radius.
pub const FIXTURE_RHO_TOLERANCE: f64 = 5e-5;

const R3_SEVENTHS: [[f64; 3]; 3] = [[7.0, -1.0, 3.0], [-1.0, 7.0, -5.0], [3.0, -5.0, 7.0]];
const R4_SEVENTHS: [[f64; 4]; 4] =
    [[7.0, -1.0, 3.0, 3.0], [-1.0, 7.0, 3.0, -1.0], [3.0, 3.0, 7.0, -1.0], [3.0, -1.0, -1.0, 7.0]];

fn sevenths<const N: usize>(m: &[[f64; N]; N]) -> SymmetricSparseMatrix {
    let dense: Vec<Vec<f64>> = m.iter().map(|row| row.iter().map(|v| v / 7.0).collect()).collect();
    SymmetricSparseMatrix::from_dense(&dense).expect("embedded fixture is valid")
}

impl CorrelationFixture {
    pub fn load(name: FixtureName) -> Self {
        match name {
            FixtureName::R3 => Self { name, matrix: sevenths(&R3_SEVENTHS), expected_rho: 0.9008 },
            FixtureName::R4 => Self { name, matrix: sevenths(&R4_SEVENTHS), expected_rho: 0.8747 },
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn spectral_radius(&self) -> f64 {
        spectral_radius_abs_shift(&self.matrix, DEFAULT_POWER_MAX_ITERS, DEFAULT_POWER_TOL).value
    }

    /// `ρ(|I − R|)` agrees with the quoted value to [`FIXTURE_RHO_TOLERANCE`].
    pub fn is_authentic(&self) -> bool {
        (self.spectral_radius() - self.expected_rho).abs() <= FIXTURE_RHO_TOLERANCE
    }

    /// Indices of Gold codes (with cyclic shifts, code-major) reproducing
    /// this fixture exactly.
    pub fn gold_subset(&self) -> Option<Vec<usize>> {
        find_code_subset(&gold_codes_n7().with_cyclic_shifts(), &self.matrix, 1e-12)
    }
}

pub fn fixtures() -> Vec<CorrelationFixture> {
    FixtureName::ALL.into_iter().map(CorrelationFixture::load).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub enum DetectorSolver {
    Gabp(SolverConfig),
    /// Dense LU.
    Oracle,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Detector {
    pub solver: DetectorSolver,
    /// Soft estimates with `|x_i| ≤ tie_tolerance·(1 + ‖x‖∞)` are ties and
    /// decide `+1`.
    pub tie_tolerance: f64,
}

impl Default for Detector {
    fn default() -> Self {
        Self {
            solver: DetectorSolver::Gabp(SolverConfig { epsilon: 1e-10, ..SolverConfig::serial() }),
            tie_tolerance: 1e-6,
        }
    }
}

impl Detector {
    pub fn oracle() -> Self {
        Self { solver: DetectorSolver::Oracle, ..Self::default() }
    }
}

/// `sign(R⁻¹y)` with `sign(0) = +1`.
pub fn decorrelate(r: &SymmetricSparseMatrix, y: &[f64], detector: &Detector) -> Result<Vec<i8>> {
    let x = match &detector.solver {
        DetectorSolver::Oracle => direct_solve(r, y)?,
        DetectorSolver::Gabp(config) => {
            let result = solve_gabp(r, y, config)?;
            if !result.converged() {
                return Err(Error::NotConverged(format!("{:?}", result.status)));
            }
            result.x
        }
    };
    let tie = detector.tie_tolerance * (1.0 + inf_norm(&x));
    Ok(x.iter().map(|&v| if v < -tie { -1 } else { 1 }).collect())
}
