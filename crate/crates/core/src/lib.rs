//! Gaussian belief propagation for symmetric linear systems.
//!
//! The crate solves `A·x = b` for real symmetric `A` by message passing on
//! the graph of its nonzero pattern, alongside the Jacobi, Gauss-Seidel and
//! SOR baselines, Steffensen acceleration, sufficient-condition diagnostics
//! and a CDMA decorrelator example.
//!
//! ```
//! use gabp_core::{classical, gabp, SymmetricSparseMatrix};
//!
//! let a = SymmetricSparseMatrix::from_dense(&[
//!     vec![4.0, 1.0, 0.0],
//!     vec![1.0, 3.0, 1.0],
//!     vec![0.0, 1.0, 2.0],
//! ])?;
//! let b = [1.0, 2.0, 3.0];
//! let bp = gabp::solve_gabp(&a, &b, &gabp::SolverConfig::serial())?;
//! let gs = classical::solve_gauss_seidel(&a, &b, &Default::default())?;
//! assert!(bp.converged() && gs.converged());
//! assert!(bp.x.iter().zip(&gs.x).all(|(u, v)| (u - v).abs() < 1e-5));
//! # Ok::<(), gabp_core::Error>(())
//! ```

pub mod accel;
pub mod cdma;
pub mod classical;
pub mod dense;
pub mod diagnostics;
mod error;
pub mod gabp;
pub mod graph;
pub mod io;
pub mod iteration;
pub mod matrix;
pub mod method;
pub mod random;

pub use diagnostics::{diagnose, DiagnosticsReport};
pub use error::{Error, Result};
pub use iteration::{SolveResult, SolveStatus};
pub use matrix::SymmetricSparseMatrix;
pub use method::{run_method, MethodSpec, RunOptions};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/model.md")]
    mod model {}
    #[doc = include_str!("../../../book/src/gabp.md")]
    mod gabp {}
    #[doc = include_str!("../../../book/src/convergence.md")]
    mod convergence {}
    #[doc = include_str!("../../../book/src/classical.md")]
    mod classical {}
    #[doc = include_str!("../../../book/src/acceleration.md")]
    mod acceleration {}
    #[doc = include_str!("../../../book/src/cdma.md")]
    mod cdma {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
