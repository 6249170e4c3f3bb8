//! Direct dense solve, used as ground truth for the iterative solvers.

use crate::error::{Error, Result};
use crate::matrix::SymmetricSparseMatrix;

/// Pivots smaller than this after partial pivoting are treated as singular.
pub const PIVOT_TOLERANCE: f64 = 1e-12;

/// Solves `A·x = b` by Gaussian elimination with partial pivoting.
pub fn direct_solve(a: &SymmetricSparseMatrix, b: &[f64]) -> Result<Vec<f64>> {
    a.check_len(b.len())?;
    let n = a.dim();
    let mut m = a.to_dense();
    let mut rhs = b.to_vec();

    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&r, &s| m[r][col].abs().total_cmp(&m[s][col].abs()))
            .expect("non-empty pivot range");
        if m[pivot_row][col].abs() < PIVOT_TOLERANCE {
            return Err(Error::SingularMatrix { column: col });
        }
        m.swap(col, pivot_row);
        rhs.swap(col, pivot_row);

        let pivot = m[col][col];
        for row in col + 1..n {
            let factor = m[row][col] / pivot;
            if factor == 0.0 {
                continue;
            }
            for k in col..n {
                m[row][k] -= factor * m[col][k];
            }
            rhs[row] -= factor * rhs[col];
        }
    }

    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let tail: f64 = (row + 1..n).map(|k| m[row][k] * x[k]).sum();
        x[row] = (rhs[row] - tail) / m[row][row];
    }
    Ok(x)
}

/// Diagonal of `A⁻¹`, one direct solve per unit vector.
pub fn inverse_diagonal(a: &SymmetricSparseMatrix) -> Result<Vec<f64>> {
    let n = a.dim();
    (0..n)
        .map(|i| {
            let mut e = vec![0.0; n];
            e[i] = 1.0;
            direct_solve(a, &e).map(|col| col[i])
        })
        .collect()
}
