//! The convergence-rate table over both correlation fixtures.

use std::fmt::Write as _;

use serde::Serialize;

use super::{CorrelationFixture, FixtureName};
use crate::classical::{optimal_sor_omega, Omega};
use crate::method::{run_method, BaseMethod, MethodSpec, RunOptions};

/// A row of the table, in published order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub label: &'static str,
    pub method: MethodSpec,
}

pub const TABLE_ROWS: [TableRow; 8] = [
    TableRow { label: "Jacobi", method: MethodSpec::new(BaseMethod::Jacobi, false) },
    TableRow { label: "GS", method: MethodSpec::new(BaseMethod::Gs, false) },
    TableRow { label: "Parallel GaBP", method: MethodSpec::new(BaseMethod::GabpParallel, false) },
    TableRow { label: "Optimal SOR", method: MethodSpec::new(BaseMethod::Sor, false) },
    TableRow { label: "Serial GaBP", method: MethodSpec::new(BaseMethod::GabpSerial, false) },
    TableRow { label: "Jacobi+Steffensen", method: MethodSpec::new(BaseMethod::Jacobi, true) },
    TableRow { label: "Parallel GaBP+Steffensen", method: MethodSpec::new(BaseMethod::GabpParallel, true) },
    TableRow { label: "Serial GaBP+Steffensen", method: MethodSpec::new(BaseMethod::GabpSerial, true) },
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchCell {
    pub method: String,
    pub fixture: FixtureName,
    /// Iterations to convergence; `None` when the run did not converge.
    pub iterations: Option<usize>,
    pub rounds: usize,
    pub converged: bool,
    pub status: String,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchMetadata {
    pub epsilon: f64,
    pub max_iters: usize,
    pub rhs: &'static str,
    pub node_order: &'static str,
    pub convergence_test: &'static str,
    pub accounting: &'static str,
    pub steffensen_target: &'static str,
    pub omega: Vec<(FixtureName, Option<f64>)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub metadata: BenchMetadata,
    pub records: Vec<BenchCell>,
}

/// Runs every table row on both fixtures with `b` all ones.
///
/// A cell that fails to converge is recorded, never fatal.
pub fn bench_table1(epsilon: f64, max_iters: usize) -> BenchReport {
    let fixtures: Vec<CorrelationFixture> = FixtureName::ALL.into_iter().map(CorrelationFixture::load).collect();
    let omega: Vec<(FixtureName, Option<f64>)> =
        fixtures.iter().map(|f| (f.name, optimal_sor_omega(&f.matrix).ok())).collect();
    let mut records = Vec::with_capacity(TABLE_ROWS.len() * fixtures.len());
    for row in TABLE_ROWS {
        for (fixture, &(_, w)) in fixtures.iter().zip(&omega) {
            let b = vec![1.0; fixture.dim()];
            let opts = RunOptions {
                epsilon,
                max_iters,
                omega: w.map_or(Omega::Auto, Omega::Fixed),
                ..RunOptions::default()
            };
            let cell = match run_method(&fixture.matrix, &b, row.method, &opts) {
                Ok(r) => BenchCell {
                    method: row.label.to_string(),
                    fixture: fixture.name,
                    iterations: r.converged().then_some(r.iterations),
                    rounds: r.rounds,
                    converged: r.converged(),
                    status: status_text(&r.status),
                    residual: r.residual_inf,
                },
                Err(e) => BenchCell {
                    method: row.label.to_string(),
                    fixture: fixture.name,
                    iterations: None,
                    rounds: 0,
                    converged: false,
                    status: format!("error: {e}"),
                    residual: f64::NAN,
                },
            };
            records.push(cell);
        }
    }
    BenchReport {
        metadata: BenchMetadata {
            epsilon,
            max_iters,
            rhs: "all ones",
            node_order: "ascending node index",
            convergence_test: "max|Δμ| <= epsilon * max(1, ||μ||_inf) between consecutive iterations",
            accounting: "plain methods: rounds (one full update or sweep); Steffensen: Δ² cycles of two rounds each",
            steffensen_target: "GaBP: per-node broadcast precision; Jacobi: iterate",
            omega,
        },
        records,
    }
}

fn status_text(status: &crate::SolveStatus) -> String {
    match status {
        crate::SolveStatus::Converged => "converged".into(),
        crate::SolveStatus::MaxItersExceeded => "max iterations exceeded".into(),
        crate::SolveStatus::Diverged(why) => format!("diverged: {why}"),
    }
}

impl BenchReport {
    pub fn cell(&self, label: &str, fixture: FixtureName) -> Option<&BenchCell> {
        self.records.iter().find(|c| c.method == label && c.fixture == fixture)
    }

    /// Aligned plain-text table; non-converged cells print as `−`.
    pub fn to_text(&self) -> String {
        let width = TABLE_ROWS.iter().map(|r| r.label.len()).max().unwrap_or(0);
        let mut out = String::new();
        let _ = write!(out, "{:<width$}", "Method");
        for f in FixtureName::ALL {
            let _ = write!(out, "  {:>6}", f.to_string());
        }
        out.push('\n');
        for row in TABLE_ROWS {
            let _ = write!(out, "{:<width$}", row.label);
            for f in FixtureName::ALL {
                let v = self
                    .cell(row.label, f)
                    .and_then(|c| c.iterations)
                    .map_or_else(|| "−".to_string(), |n| n.to_string());
                let _ = write!(out, "  {v:>6}");
            }
            out.push('\n');
        }
        let m = &self.metadata;
        let _ = writeln!(out, "\nepsilon = {:e}, max_iters = {}, b = {}", m.epsilon, m.max_iters, m.rhs);
        let _ = writeln!(out, "node order: {}", m.node_order);
        for (f, w) in &m.omega {
            match w {
                Some(w) => {
                    let _ = writeln!(out, "optimal SOR omega ({f}): {w:.6}");
                }
                None => {
                    let _ = writeln!(out, "optimal SOR omega ({f}): undefined");
                }
            }
        }
        let _ = writeln!(out, "convergence: {}", m.convergence_test);
        let _ = writeln!(out, "accounting: {}", m.accounting);
        let _ = writeln!(out, "steffensen extrapolates: {}", m.steffensen_target);
        out
    }

    /// One CSV line per cell.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("method,fixture,iterations,rounds,converged,residual\n");
        for c in &self.records {
            let iters = c.iterations.map_or_else(String::new, |n| n.to_string());
            let _ = writeln!(out, "{},{},{},{},{},{:e}", c.method, c.fixture, iters, c.rounds, c.converged, c.residual);
        }
        out
    }
}
