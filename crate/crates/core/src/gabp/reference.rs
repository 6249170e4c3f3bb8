//! Per-edge message computation by direct summation over `N(i)\j`.
//!
//! This is the textbook form of the update, kept as an independent check on
//! the broadcast-and-subtract path in [`MessageState::compute_edge_message`].

use super::{GabpError, MessageState, MIN_RESIDUAL_PRECISION};

/// `P_{i\j} = P_ii + Σ_{k∈N(i)\j} P_ki` and
/// `μ_{i\j} = P_{i\j}⁻¹ (P_ii μ_ii + Σ_{k∈N(i)\j} P_ki μ_ki)`.
pub fn excluded_belief(state: &MessageState, i: usize, j: usize) -> (f64, f64) {
    let mut precision = state.prior_precision()[i];
    let mut info = precision * state.prior_mean()[i];
    for e in state.edges_from(i) {
        let (_, k) = state.endpoints(e);
        if k == j {
            continue;
        }
        let incoming = state.reverse(e);
        precision += state.edge_precision[incoming];
        info += state.edge_precision[incoming] * state.edge_mean[incoming];
    }
    (precision, info / precision)
}

/// `P_ij = −A_ij² / P_{i\j}` and `μ_ij = −A_ij μ_{i\j} / P_ij`.
pub fn edge_message_by_direct_sum(state: &MessageState, e: usize) -> Result<(f64, f64), GabpError> {
    let (i, j) = state.endpoints(e);
    let a_ij = state.weight(e);
    let (p_excl, mu_excl) = excluded_belief(state, i, j);
    if p_excl.abs() < MIN_RESIDUAL_PRECISION {
        return Err(GabpError::ZeroResidualPrecision { i, j });
    }
    let precision = -a_ij * a_ij / p_excl;
    Ok((precision, -a_ij * mu_excl / precision))
}
