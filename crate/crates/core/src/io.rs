//! Matrix Market and right-hand-side file formats.
//!
//! Matrices are read from the coordinate format with `real` entries and
//! `symmetric` or `general` storage. Symmetric files hold one triangle and
//! are mirrored on read; general files must agree with their transpose.
//! Values are written with 17 significant digits so a write/read
//! round-trip is exact.

use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::error::Error as MatrixError;
use crate::matrix::SymmetricSparseMatrix;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}:{line}: {message}")]
    Parse { path: String, line: usize, message: String },
    #[error("{path}: {source}")]
    Matrix { path: String, source: MatrixError },
}

fn parse_err(path: &str, line: usize, message: impl Into<String>) -> IoError {
    IoError::Parse { path: path.to_string(), line, message: message.into() }
}

/// Parses Matrix Market text; `origin` names the source in error messages.
pub fn parse_matrix_market(text: &str, origin: &str) -> Result<SymmetricSparseMatrix, IoError> {
    let mut lines = text.lines().enumerate().map(|(k, l)| (k + 1, l));
    let (line_no, banner) = lines.next().ok_or_else(|| parse_err(origin, 1, "empty file"))?;
    let fields: Vec<String> = banner.split_whitespace().map(str::to_ascii_lowercase).collect();
    if fields.len() != 5 || fields[0] != "%%matrixmarket" || fields[1] != "matrix" {
        return Err(parse_err(origin, line_no, "expected '%%MatrixMarket matrix coordinate real symmetric' banner"));
    }
    if fields[2] != "coordinate" {
        return Err(parse_err(origin, line_no, format!("unsupported format '{}'", fields[2])));
    }
    if fields[3] != "real" && fields[3] != "integer" {
        return Err(parse_err(origin, line_no, format!("unsupported field '{}'", fields[3])));
    }
    let symmetric = match fields[4].as_str() {
        "symmetric" => true,
        "general" => false,
        other => return Err(parse_err(origin, line_no, format!("unsupported symmetry '{other}'"))),
    };

    let mut data = lines.filter(|(_, l)| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('%')
    });
    let (size_line, size) = data.next().ok_or_else(|| parse_err(origin, line_no, "missing size line"))?;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| parse_err(origin, size_line, format!("invalid size field '{t}'"))))
        .collect::<Result<_, _>>()?;
    let [rows, cols, nnz] = dims[..] else {
        return Err(parse_err(origin, size_line, "size line must hold rows, columns and entry count"));
    };
    if rows != cols {
        return Err(parse_err(origin, size_line, format!("matrix must be square, got {rows}x{cols}")));
    }

    let mut triplets = Vec::with_capacity(if symmetric { 2 * nnz } else { nnz });
    let mut count = 0;
    for (k, line) in data {
        count += 1;
        if count > nnz {
            return Err(parse_err(origin, k, format!("more than the declared {nnz} entries")));
        }
        let tok: Vec<&str> = line.split_whitespace().collect();
        if tok.len() != 3 {
            return Err(parse_err(origin, k, "entry must hold row, column and value"));
        }
        let index = |t: &str| -> Result<usize, IoError> {
            match t.parse::<usize>() {
                Ok(v) if (1..=rows).contains(&v) => Ok(v - 1),
                _ => Err(parse_err(origin, k, format!("index '{t}' outside 1..={rows}"))),
            }
        };
        let (i, j) = (index(tok[0])?, index(tok[1])?);
        let v: f64 = tok[2].parse().map_err(|_| parse_err(origin, k, format!("invalid value '{}'", tok[2])))?;
        if !v.is_finite() {
            return Err(parse_err(origin, k, "value is not finite"));
        }
        if symmetric && i < j {
            return Err(parse_err(origin, k, "symmetric storage expects the lower triangle (row >= column)"));
        }
        triplets.push((i, j, v));
        if symmetric && i != j {
            triplets.push((j, i, v));
        }
    }
    if count < nnz {
        return Err(parse_err(origin, line_no, format!("expected {nnz} entries, found {count}")));
    }
    SymmetricSparseMatrix::from_triplets(rows, &triplets)
        .map_err(|source| IoError::Matrix { path: origin.to_string(), source })
}

pub fn read_matrix_market(path: impl AsRef<Path>) -> Result<SymmetricSparseMatrix, IoError> {
    let path = path.as_ref();
    let name = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| IoError::Io { path: name.clone(), source })?;
    parse_matrix_market(&text, &name)
}

/// Lower triangle in symmetric coordinate storage.
pub fn format_matrix_market(a: &SymmetricSparseMatrix) -> String {
    let mut entries: Vec<(usize, usize, f64)> = a.upper_triplets().into_iter().map(|(i, j, v)| (j, i, v)).collect();
    entries.sort_by_key(|&(i, j, _)| (j, i));
    let mut out = String::from("%%MatrixMarket matrix coordinate real symmetric\n");
    let _ = writeln!(out, "{} {} {}", a.dim(), a.dim(), entries.len());
    for (i, j, v) in entries {
        let _ = writeln!(out, "{} {} {:.16e}", i + 1, j + 1, v);
    }
    out
}

pub fn write_matrix_market(path: impl AsRef<Path>, a: &SymmetricSparseMatrix) -> Result<(), IoError> {
    let path = path.as_ref();
    std::fs::write(path, format_matrix_market(a))
        .map_err(|source| IoError::Io { path: path.display().to_string(), source })
}

/// One real per line, or a single-column CSV with an optional header.
pub fn parse_vector(text: &str, origin: &str) -> Result<Vec<f64>, IoError> {
    let mut values = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.trim().trim_end_matches(',').trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('%') {
            continue;
        }
        if line.contains(',') {
            return Err(parse_err(origin, k + 1, "expected a single column"));
        }
        match line.parse::<f64>() {
            Ok(v) if v.is_finite() => values.push(v),
            Ok(_) => return Err(parse_err(origin, k + 1, "value is not finite")),
            Err(_) if values.is_empty() && k == first_content_line(text) => {}
            Err(_) => return Err(parse_err(origin, k + 1, format!("invalid value '{line}'"))),
        }
    }
    if values.is_empty() {
        return Err(parse_err(origin, 1, "no values found"));
    }
    Ok(values)
}

fn first_content_line(text: &str) -> usize {
    text.lines().position(|l| !l.trim().is_empty()).unwrap_or(0)
}

pub fn read_vector(path: impl AsRef<Path>) -> Result<Vec<f64>, IoError> {
    let path = path.as_ref();
    let name = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| IoError::Io { path: name.clone(), source })?;
    parse_vector(&text, &name)
}

pub fn format_vector(values: &[f64]) -> String {
    values.iter().fold(String::new(), |mut out, v| {
        let _ = writeln!(out, "{v:.16e}");
        out
    })
}

pub fn write_vector(path: impl AsRef<Path>, values: &[f64]) -> Result<(), IoError> {
    let path = path.as_ref();
    std::fs::write(path, format_vector(values)).map_err(|source| IoError::Io { path: path.display().to_string(), source })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_symmetric_lower_triangle() {
        let text = "%%MatrixMarket matrix coordinate real symmetric\n% comment\n2 2 3\n1 1 2.0\n2 1 1.0\n2 2 2.0\n";
        let a = parse_matrix_market(text, "m.mtx").unwrap();
        assert_eq!(a.to_dense(), vec![vec![2.0, 1.0], vec![1.0, 2.0]]);
    }

    #[test]
    fn reads_general_storage() {
        let text = "%%MatrixMarket matrix coordinate real general\n2 2 4\n1 1 2\n1 2 1\n2 1 1\n2 2 2\n";
        let a = parse_matrix_market(text, "m.mtx").unwrap();
        assert_eq!(a.get(0, 1), 1.0);
        let bad = "%%MatrixMarket matrix coordinate real general\n2 2 4\n1 1 2\n1 2 1\n2 1 3\n2 2 2\n";
        assert!(matches!(parse_matrix_market(bad, "m.mtx"), Err(IoError::Matrix { .. })));
    }

    #[test]
    fn errors_name_file_and_line() {
        let text = "%%MatrixMarket matrix coordinate real symmetric\n2 2 2\n1 1 2.0\n2 x 1.0\n";
        let msg = parse_matrix_market(text, "m.mtx").unwrap_err().to_string();
        assert!(msg.starts_with("m.mtx:4:"), "{msg}");
        let upper = "%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n1 2 1.0\n";
        assert!(parse_matrix_market(upper, "u.mtx").unwrap_err().to_string().starts_with("u.mtx:3:"));
        assert!(parse_matrix_market("%%MatrixMarket matrix array real symmetric\n", "a").is_err());
        assert!(parse_matrix_market("", "e").is_err());
    }

    #[test]
    fn vectors_accept_plain_and_csv() {
        assert_eq!(parse_vector("1\n2.5\n\n-3e-1\n", "b").unwrap(), vec![1.0, 2.5, -0.3]);
        assert_eq!(parse_vector("b\n1,\n2\n", "b.csv").unwrap(), vec![1.0, 2.0]);
        assert!(parse_vector("1\nfoo\n", "b").unwrap_err().to_string().starts_with("b:2:"));
        assert!(parse_vector("1,2\n", "b").is_err());
        assert!(parse_vector("", "b").is_err());
    }

    #[test]
    fn round_trip_is_exact() {
        let a = SymmetricSparseMatrix::from_dense(&[
            vec![1.0 / 3.0, -0.1, 0.0],
            vec![-0.1, std::f64::consts::PI, 1e-300],
            vec![0.0, 1e-300, 7.0 / 9.0],
        ])
        .unwrap();
        assert_eq!(parse_matrix_market(&format_matrix_market(&a), "rt").unwrap(), a);
        let v = vec![0.1, -2.0 / 3.0, 1e308, 5e-324];
        assert_eq!(parse_vector(&format_vector(&v), "rt").unwrap(), v);
    }
}
