use thiserror::Error;

use super::{ConvergenceMetric, Mode, Schedule};
use crate::error::Result;
use crate::graph::GraphTopology;
use crate::iteration::has_converged;
use crate::matrix::SymmetricSparseMatrix;

/// Messages whose exclusion precision falls below this are undefined.
pub const MIN_RESIDUAL_PRECISION: f64 = 1e-300;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GabpError {
    #[error("aggregate precision of node {0} is zero")]
    DegenerateAggregate(usize),
    #[error("residual precision for message {i}->{j} vanished")]
    ZeroResidualPrecision { i: usize, j: usize },
}

/// All scalars carried by a GaBP run.
///
/// Directed edges `i→j` are stored contiguously per source node (CSR
/// layout), so `edges_from(i)` is a range into the per-edge arrays and
/// `reverse[e]` is the index of `j→i`.
#[derive(Debug, Clone, PartialEq)]
pub struct MessageState {
    mode: Mode,
    offsets: Vec<usize>,
    sources: Vec<usize>,
    targets: Vec<usize>,
    weights: Vec<f64>,
    reverse: Vec<usize>,
    /// `P_ij` per directed edge.
    pub edge_precision: Vec<f64>,
    /// `μ_ij` per directed edge. In [`Mode::JacobiVariant`] this holds the
    /// un-excluded sender mean `μ_i`, since `P_ij` is pinned to zero.
    pub edge_mean: Vec<f64>,
    /// Broadcast aggregate `P̃_i`.
    pub node_precision: Vec<f64>,
    /// Broadcast aggregate `μ̃_i`.
    pub node_mean: Vec<f64>,
    prior_precision: Vec<f64>,
    prior_info: Vec<f64>,
}

impl MessageState {
    /// Fresh state: every edge message zero, priors `P_ii = A_ii`,
    /// `μ_ii = b_i / A_ii`, and one broadcast pass so that `P̃_i = P_ii` and
    /// `μ̃_i = μ_ii`.
    pub fn new(a: &SymmetricSparseMatrix, b: &[f64], mode: Mode) -> Result<Self> {
        a.check_len(b.len())?;
        let graph = GraphTopology::from_matrix(a);
        let n = a.dim();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut sources = Vec::new();
        let mut targets = Vec::new();
        let mut weights = Vec::new();
        offsets.push(0);
        for i in 0..n {
            for &(j, v) in a.row(i) {
                sources.push(i);
                targets.push(j);
                weights.push(v);
            }
            offsets.push(targets.len());
        }
        let reverse = (0..targets.len())
            .map(|e| {
                let (i, j) = (sources[e], targets[e]);
                let start = offsets[j];
                let pos = targets[start..offsets[j + 1]]
                    .binary_search(&i)
                    .expect("symmetric adjacency");
                start + pos
            })
            .collect();
        debug_assert_eq!(graph.edge_count() * 2, targets.len());

        let edges = targets.len();
        let mut state = Self {
            mode,
            offsets,
            sources,
            targets,
            weights,
            reverse,
            edge_precision: vec![0.0; edges],
            edge_mean: vec![0.0; edges],
            node_precision: vec![0.0; n],
            node_mean: vec![0.0; n],
            prior_precision: a.diagonals().to_vec(),
            prior_info: b.to_vec(),
        };
        state
            .broadcast_aggregates()
            .expect("priors have nonzero precision");
        Ok(state)
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn node_count(&self) -> usize {
        self.prior_precision.len()
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len()
    }

    /// `P_ii = A_ii`.
    pub fn prior_precision(&self) -> &[f64] {
        &self.prior_precision
    }

    /// `μ_ii = b_i / A_ii`.
    pub fn prior_mean(&self) -> Vec<f64> {
        self.prior_info.iter().zip(&self.prior_precision).map(|(h, p)| h / p).collect()
    }

    pub fn edges_from(&self, i: usize) -> std::ops::Range<usize> {
        self.offsets[i]..self.offsets[i + 1]
    }

    /// `(source, target)` of directed edge `e`.
    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        (self.sources[e], self.targets[e])
    }

    pub fn reverse(&self, e: usize) -> usize {
        self.reverse[e]
    }

    /// `A_ij` for directed edge `e = i→j`.
    pub fn weight(&self, e: usize) -> f64 {
        self.weights[e]
    }

    pub fn edge_index(&self, i: usize, j: usize) -> Option<usize> {
        let range = self.edges_from(i);
        let start = range.start;
        self.targets[range].binary_search(&j).ok().map(|p| start + p)
    }

    /// `(P_ij, μ_ij)` if `j ∈ N(i)`.
    pub fn message(&self, i: usize, j: usize) -> Option<(f64, f64)> {
        self.edge_index(i, j)
            .map(|e| (self.edge_precision[e], self.edge_mean[e]))
    }

    pub fn set_message(&mut self, i: usize, j: usize, precision: f64, mean: f64) -> Option<()> {
        let e = self.edge_index(i, j)?;
        self.edge_precision[e] = precision;
        self.edge_mean[e] = mean;
        Some(())
    }

    /// Recomputes node `i`'s broadcast aggregate from its incoming messages.
    pub fn refresh_aggregate(&mut self, i: usize) -> std::result::Result<(), GabpError> {
        let mut precision = self.prior_precision[i];
        let mut info = self.prior_info[i];
        match self.mode {
            Mode::GaBP => {
                for e in self.edges_from(i) {
                    let incoming = self.reverse[e];
                    precision += self.edge_precision[incoming];
                    info += self.edge_precision[incoming] * self.edge_mean[incoming];
                }
            }
            Mode::JacobiVariant => {
                // P_ki = 0; the information P_ki·μ_ki is taken as −A_ki·μ_k
                for e in self.edges_from(i) {
                    info -= self.weights[e] * self.edge_mean[self.reverse[e]];
                }
            }
        }
        if precision == 0.0 {
            return Err(GabpError::DegenerateAggregate(i));
        }
        self.node_precision[i] = precision;
        self.node_mean[i] = info / precision;
        Ok(())
    }

    /// Recomputes every node's aggregate `(P̃_i, μ̃_i)`.
    pub fn broadcast_aggregates(&mut self) -> std::result::Result<(), GabpError> {
        (0..self.node_count()).try_for_each(|i| self.refresh_aggregate(i))
    }

    /// Message `i→j` along directed edge `e`, computed from the sender's
    /// broadcast aggregate with the recipient's own contribution subtracted:
    /// `P_ij = −A_ij² / (P̃_i − P_ji)`, `μ_ij = (P̃_i μ̃_i − P_ji μ_ji) / A_ij`.
    pub fn compute_edge_message(&self, e: usize) -> std::result::Result<(f64, f64), GabpError> {
        let i = self.sources[e];
        match self.mode {
            Mode::GaBP => {
                let back = self.reverse[e];
                let a_ij = self.weights[e];
                let residual = self.node_precision[i] - self.edge_precision[back];
                if residual.abs() < MIN_RESIDUAL_PRECISION {
                    return Err(GabpError::ZeroResidualPrecision { i, j: self.targets[e] });
                }
                let precision = -a_ij * a_ij / residual;
                let mean = (self.node_precision[i] * self.node_mean[i]
                    - self.edge_precision[back] * self.edge_mean[back])
                    / a_ij;
                Ok((precision, mean))
            }
            Mode::JacobiVariant => Ok((0.0, self.node_mean[i])),
        }
    }

    fn store(&mut self, e: usize, (precision, mean): (f64, f64), damping: f64) {
        if damping == 0.0 {
            self.edge_precision[e] = precision;
            self.edge_mean[e] = mean;
        } else {
            self.edge_precision[e] = (1.0 - damping) * precision + damping * self.edge_precision[e];
            self.edge_mean[e] = (1.0 - damping) * mean + damping * self.edge_mean[e];
        }
    }

    /// One full round under `schedule`.
    ///
    /// Messages are always computed from the senders' stored broadcast
    /// aggregates. Parallel: every message is computed from the previous
    /// round's state, then all aggregates are rebroadcast. Serial: nodes
    /// send in `order`, and recipients refresh their aggregates at once, so
    /// later senders in the sweep see earlier senders' new messages.
    pub fn run_round(
        &mut self,
        schedule: Schedule,
        order: &[usize],
        damping: f64,
    ) -> std::result::Result<(), GabpError> {
        match schedule {
            Schedule::Parallel => {
                let fresh = (0..self.edge_count())
                    .map(|e| self.compute_edge_message(e))
                    .collect::<std::result::Result<Vec<_>, _>>()?;
                for (e, msg) in fresh.into_iter().enumerate() {
                    self.store(e, msg, damping);
                }
            }
            Schedule::Serial => {
                for &i in order {
                    for e in self.edges_from(i) {
                        let msg = self.compute_edge_message(e)?;
                        self.store(e, msg, damping);
                    }
                    for e in self.edges_from(i) {
                        self.refresh_aggregate(self.targets[e])?;
                    }
                }
            }
        }
        self.broadcast_aggregates()
    }

    /// Values watched by the convergence test under `metric`.
    pub fn monitored(&self, metric: ConvergenceMetric) -> Vec<f64> {
        match metric {
            ConvergenceMetric::MarginalMeans => self.node_mean.clone(),
            ConvergenceMetric::AllScalars => self
                .edge_precision
                .iter()
                .chain(&self.edge_mean)
                .chain(&self.node_mean)
                .copied()
                .collect(),
        }
    }

    /// `(μ_i, P_i) = (μ̃_i, P̃_i)`.
    pub fn infer_marginals(&self) -> (Vec<f64>, Vec<f64>) {
        (self.node_mean.clone(), self.node_precision.clone())
    }
}

/// Relative change test between two states of the same topology.
pub fn check_convergence(prev: &MessageState, curr: &MessageState, epsilon: f64, metric: ConvergenceMetric) -> bool {
    has_converged(&prev.monitored(metric), &curr.monitored(metric), epsilon)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_by_two() -> SymmetricSparseMatrix {
        SymmetricSparseMatrix::from_dense(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap()
    }

    #[test]
    fn init_state_priors_and_zero_messages() {
        let s = MessageState::new(&two_by_two(), &[3.0, 3.0], Mode::GaBP).unwrap();
        assert_eq!(s.prior_precision(), &[2.0, 2.0]);
        assert_eq!(s.prior_mean(), vec![1.5, 1.5]);
        assert!(s.edge_precision.iter().chain(&s.edge_mean).all(|&v| v == 0.0));
        assert_eq!(s.node_precision, vec![2.0, 2.0]);
        assert_eq!(s.node_mean, vec![1.5, 1.5]);
    }

    #[test]
    fn identity_has_empty_edge_maps() {
        let a = SymmetricSparseMatrix::identity(2).unwrap();
        let mut s = MessageState::new(&a, &[5.0, -2.0], Mode::GaBP).unwrap();
        assert_eq!(s.edge_count(), 0);
        assert_eq!(s.node_mean, vec![5.0, -2.0]);
        s.run_round(Schedule::Parallel, &[0, 1], 0.0).unwrap();
        let (mu, p) = s.infer_marginals();
        assert_eq!(mu, vec![5.0, -2.0]);
        assert_eq!(p, vec![1.0, 1.0]);
    }

    #[test]
    fn first_messages_by_hand() {
        let mut s = MessageState::new(&two_by_two(), &[3.0, 3.0], Mode::GaBP).unwrap();
        let e = s.edge_index(0, 1).unwrap();
        assert_eq!(s.compute_edge_message(e).unwrap(), (-0.5, 3.0));
        s.run_round(Schedule::Parallel, &[0, 1], 0.0).unwrap();
        assert_eq!(s.message(0, 1), Some((-0.5, 3.0)));
        assert_eq!(s.message(1, 0), Some((-0.5, 3.0)));
        // (2·1.5 − 0.5·3) / (2 − 0.5)
        assert_eq!(s.node_mean, vec![1.0, 1.0]);
        assert_eq!(s.node_precision, vec![1.5, 1.5]);
    }

    #[test]
    fn zero_residual_precision_is_reported() {
        let mut s = MessageState::new(&two_by_two(), &[3.0, 3.0], Mode::GaBP).unwrap();
        s.set_message(1, 0, 2.0, 0.0).unwrap();
        s.node_precision[0] = 2.0;
        let e = s.edge_index(0, 1).unwrap();
        assert_eq!(s.compute_edge_message(e).unwrap_err(), GabpError::ZeroResidualPrecision { i: 0, j: 1 });
    }

    #[test]
    fn degenerate_aggregate_is_reported() {
        let mut s = MessageState::new(&two_by_two(), &[3.0, 3.0], Mode::GaBP).unwrap();
        s.set_message(1, 0, -2.0, 0.0).unwrap();
        assert_eq!(s.refresh_aggregate(0).unwrap_err(), GabpError::DegenerateAggregate(0));
    }

    #[test]
    fn convergence_check_thresholds() {
        let s = MessageState::new(&two_by_two(), &[3.0, 3.0], Mode::GaBP).unwrap();
        assert!(check_convergence(&s, &s, 1e-6, ConvergenceMetric::AllScalars));
        let mut t = s.clone();
        let e = t.edge_index(0, 1).unwrap();
        t.edge_mean[e] += 2e-6;
        assert!(!check_convergence(&s, &t, 1e-6, ConvergenceMetric::AllScalars));
        assert!(check_convergence(&s, &t, 1e-6, ConvergenceMetric::MarginalMeans));
    }

    #[test]
    fn damping_blends_with_previous_message() {
        let a = two_by_two();
        let mut s = MessageState::new(&a, &[3.0, 3.0], Mode::GaBP).unwrap();
        s.set_message(0, 1, -1.0, 1.0).unwrap();
        s.set_message(1, 0, -1.0, 1.0).unwrap();
        s.broadcast_aggregates().unwrap();
        let e = s.edge_index(0, 1).unwrap();
        let (p, m) = s.compute_edge_message(e).unwrap();
        s.run_round(Schedule::Parallel, &[0, 1], 0.25).unwrap();
        let (dp, dm) = s.message(0, 1).unwrap();
        assert!((dp - (0.75 * p + 0.25 * -1.0)).abs() < 1e-15);
        assert!((dm - (0.75 * m + 0.25 * 1.0)).abs() < 1e-15);
    }
}
