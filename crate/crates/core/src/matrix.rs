//! Symmetric sparse storage for the data matrix `A`.
//!
//! Entries are kept as one adjacency list per row, which is the access
//! pattern message passing needs: every sweep walks the neighbors of a node.

use crate::error::{Error, Result};

/// A real symmetric matrix with a nonzero diagonal.
///
/// Off-diagonal entries are stored in both rows, so `get(i, j) == get(j, i)`
/// by construction. Explicit zeros are dropped: an off-diagonal entry exists
/// exactly when its value is nonzero.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricSparseMatrix {
    diag: Vec<f64>,
    rows: Vec<Vec<(usize, f64)>>,
}

impl SymmetricSparseMatrix {
    /// Builds a matrix from `(i, j, value)` triplets.
    ///
    /// Either triangle (or both) may be supplied. When both `(i, j)` and
    /// `(j, i)` appear, or a position repeats, the values must agree exactly.
    pub fn from_triplets(n: usize, triplets: &[(usize, usize, f64)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        let mut diag: Vec<Option<f64>> = vec![None; n];
        let mut upper: std::collections::BTreeMap<(usize, usize), f64> = Default::default();
        for &(i, j, v) in triplets {
            if i >= n || j >= n {
                return Err(Error::IndexOutOfRange { i, j, n });
            }
            if i == j {
                match diag[i] {
                    Some(prev) if prev != v => return Err(Error::AsymmetricInput { i, j }),
                    _ => diag[i] = Some(v),
                }
                continue;
            }
            let key = (i.min(j), i.max(j));
            match upper.get(&key) {
                Some(&prev) if prev != v => return Err(Error::AsymmetricInput { i, j }),
                _ => {
                    upper.insert(key, v);
                }
            }
        }
        let diag = diag
            .into_iter()
            .enumerate()
            .map(|(i, d)| match d {
                Some(v) if v != 0.0 => Ok(v),
                _ => Err(Error::MissingDiagonal(i)),
            })
            .collect::<Result<Vec<_>>>()?;

        let mut rows = vec![Vec::new(); n];
        for (&(i, j), &v) in &upper {
            if v != 0.0 {
                rows[i].push((j, v));
                rows[j].push((i, v));
            }
        }
        for row in &mut rows {
            row.sort_unstable_by_key(|&(j, _)| j);
        }
        Ok(Self { diag, rows })
    }

    /// Builds a matrix from a dense row-major array, reading only the
    /// upper triangle after checking that the input is exactly symmetric.
    pub fn from_dense(dense: &[Vec<f64>]) -> Result<Self> {
        let n = dense.len();
        let mut triplets = Vec::new();
        for (i, row) in dense.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: row.len() });
            }
            for (j, &v) in row.iter().enumerate() {
                if v != 0.0 || i == j {
                    triplets.push((i, j, v));
                }
            }
        }
        Self::from_triplets(n, &triplets)
    }

    /// The `n × n` identity.
    pub fn identity(n: usize) -> Result<Self> {
        let triplets: Vec<_> = (0..n).map(|i| (i, i, 1.0)).collect();
        Self::from_triplets(n, &triplets)
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diagonal(&self, i: usize) -> f64 {
        self.diag[i]
    }

    pub fn diagonals(&self) -> &[f64] {
        &self.diag
    }

    /// Nonzero off-diagonal entries `(j, A_ij)` of row `i`, ascending in `j`.
    pub fn row(&self, i: usize) -> &[(usize, f64)] {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return self.diag[i];
        }
        let row = &self.rows[i];
        row.binary_search_by_key(&j, |&(k, _)| k)
            .map(|pos| row[pos].1)
            .unwrap_or(0.0)
    }

    /// Number of undirected off-diagonal edges.
    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Upper-triangle triplets (`i <= j`), row-major.
    pub fn upper_triplets(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::with_capacity(self.dim() + self.edge_count());
        for i in 0..self.dim() {
            out.push((i, i, self.diag[i]));
            out.extend(self.rows[i].iter().filter(|&&(j, _)| j > i).map(|&(j, v)| (i, j, v)));
        }
        out
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        let mut dense = vec![vec![0.0; n]; n];
        for i in 0..n {
            dense[i][i] = self.diag[i];
            for &(j, v) in &self.rows[i] {
                dense[i][j] = v;
            }
        }
        dense
    }

    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_len(x.len())?;
        Ok((0..self.dim())
            .map(|i| self.diag[i] * x[i] + self.rows[i].iter().map(|&(j, v)| v * x[j]).sum::<f64>())
            .collect())
    }

    /// `‖A·x − b‖∞`.
    pub fn residual_inf(&self, x: &[f64], b: &[f64]) -> Result<f64> {
        self.check_len(b.len())?;
        let ax = self.matvec(x)?;
        Ok(ax.iter().zip(b).map(|(l, r)| (l - r).abs()).fold(0.0, f64::max))
    }

    pub(crate) fn check_len(&self, len: usize) -> Result<()> {
        if len != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: len });
        }
        Ok(())
    }
}

/// `q(x) = xᵀAx/2 − bᵀx`, whose stationary point solves `A·x = b`.
pub fn quadratic_form(a: &SymmetricSparseMatrix, b: &[f64], x: &[f64]) -> Result<f64> {
    a.check_len(b.len())?;
    let ax = a.matvec(x)?;
    let xax: f64 = x.iter().zip(&ax).map(|(l, r)| l * r).sum();
    let bx: f64 = b.iter().zip(x).map(|(l, r)| l * r).sum();
    Ok(xax / 2.0 - bx)
}

pub(crate) fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn two_by_two() -> SymmetricSparseMatrix {
        SymmetricSparseMatrix::from_triplets(2, &[(0, 0, 2.0), (1, 1, 2.0), (0, 1, 1.0)]).unwrap()
    }

    #[test]
    fn builds_from_one_triangle() {
        let a = two_by_two();
        assert_eq!(a.to_dense(), vec![vec![2.0, 1.0], vec![1.0, 2.0]]);
        assert_eq!(a.get(1, 0), 1.0);
        assert_eq!(a.edge_count(), 1);
    }

    #[test]
    fn missing_diagonal_is_rejected() {
        let err = SymmetricSparseMatrix::from_triplets(2, &[(0, 0, 2.0), (0, 1, 1.0)]).unwrap_err();
        assert_eq!(err, Error::MissingDiagonal(1));
        let err = SymmetricSparseMatrix::from_triplets(1, &[(0, 0, 0.0)]).unwrap_err();
        assert_eq!(err, Error::MissingDiagonal(0));
    }

    #[test]
    fn conflicting_mirror_entries_are_rejected() {
        let t = [(0, 0, 1.0), (1, 1, 1.0), (0, 1, 0.5), (1, 0, 0.25)];
        assert_eq!(
            SymmetricSparseMatrix::from_triplets(2, &t).unwrap_err(),
            Error::AsymmetricInput { i: 1, j: 0 }
        );
        let ok = [(0, 0, 1.0), (1, 1, 1.0), (0, 1, 0.5), (1, 0, 0.5)];
        assert!(SymmetricSparseMatrix::from_triplets(2, &ok).is_ok());
    }

    #[test]
    fn index_out_of_range() {
        let err = SymmetricSparseMatrix::from_triplets(2, &[(0, 2, 1.0)]).unwrap_err();
        assert_eq!(err, Error::IndexOutOfRange { i: 0, j: 2, n: 2 });
        assert_eq!(SymmetricSparseMatrix::from_triplets(0, &[]).unwrap_err(), Error::EmptyMatrix);
    }

    #[test]
    fn explicit_zero_off_diagonal_is_not_an_edge() {
        let a = SymmetricSparseMatrix::from_triplets(2, &[(0, 0, 1.0), (1, 1, 1.0), (0, 1, 0.0)]).unwrap();
        assert_eq!(a.edge_count(), 0);
    }

    #[test]
    fn quadratic_form_values() {
        let id = SymmetricSparseMatrix::identity(2).unwrap();
        assert_eq!(quadratic_form(&id, &[0.0, 0.0], &[1.0, 1.0]).unwrap(), 1.0);
        assert_eq!(quadratic_form(&two_by_two(), &[3.0, 3.0], &[1.0, 1.0]).unwrap(), -3.0);
        assert!(matches!(
            quadratic_form(&id, &[0.0], &[1.0, 1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    proptest! {
        #[test]
        fn reads_are_symmetric(entries in proptest::collection::vec((0usize..6, 0usize..6, -5.0f64..5.0), 0..20)) {
            let mut triplets: Vec<_> = (0..6).map(|i| (i, i, 10.0)).collect();
            triplets.extend(entries.into_iter().filter(|&(i, j, _)| i != j).map(|(i, j, v)| (i.min(j), i.max(j), v)));
            // keep the last value per position so the input is consistent
            let mut seen = std::collections::HashMap::new();
            for &(i, j, v) in &triplets { seen.insert((i, j), v); }
            let triplets: Vec<_> = seen.into_iter().map(|((i, j), v)| (i, j, v)).collect();
            let a = SymmetricSparseMatrix::from_triplets(6, &triplets).unwrap();
            for i in 0..6 {
                for j in 0..6 {
                    prop_assert_eq!(a.get(i, j).to_bits(), a.get(j, i).to_bits());
                }
            }
        }
    }
}
