//! The clique estimator and reconstruction error accounting.

use serde::{Deserialize, Serialize};

use crate::combinatorics::binom_f64;
use crate::error::{Error, Result};
use crate::model::{Graph, Hyperedge, Hypergraph, MAX_ARITY};
use crate::stats::OrientedGraph;

/// Default cap on the number of cliques the estimator will emit.
pub const DEFAULT_CLIQUE_CAP: u64 = 100_000_000;

/// `H^ = { Psi : A_ij = 1 for all i, j in Psi }`, i.e. every `d`-clique of `A`.
pub fn clique_estimator(a: &Graph, d: usize) -> Result<Hypergraph> {
    clique_estimator_capped(a, d, DEFAULT_CLIQUE_CAP)
}

/// As [`clique_estimator`], failing with `CliqueBudgetExceeded` once more
/// than `cap` cliques turn up.
pub fn clique_estimator_capped(a: &Graph, d: usize, cap: u64) -> Result<Hypergraph> {
    if !(2..=MAX_ARITY).contains(&d) {
        return Err(Error::UnsupportedArity(d));
    }
    let cliques = OrientedGraph::new(a)
        .list(d, cap)
        .ok_or(Error::CliqueBudgetExceeded { cap })?;
    let edges: Vec<Hyperedge> = cliques
        .into_iter()
        .map(|c| c.into_iter().collect())
        .collect();
    Ok(Hypergraph::from_edges_unchecked(a.n(), d, edges))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReconMetrics {
    /// `|H △ H^|`
    pub sym_diff: u64,
    /// `|H \ H^|`
    pub missed: u64,
    /// `|H^ \ H|`
    pub false_pos: u64,
    /// `s C(n, d)`
    pub normalizer: f64,
    /// `sym_diff / normalizer`
    pub normalized_error: f64,
}

pub fn recon_metrics(h: &Hypergraph, h_hat: &Hypergraph, s: f64) -> Result<ReconMetrics> {
    if h.n() != h_hat.n() || h.d() != h_hat.d() {
        return Err(Error::InvalidParams(format!(
            "shape mismatch: (n, d) = ({}, {}) vs ({}, {})",
            h.n(),
            h.d(),
            h_hat.n(),
            h_hat.d()
        )));
    }
    let shared = h.intersection_len(h_hat) as u64;
    let missed = h.len() as u64 - shared;
    let false_pos = h_hat.len() as u64 - shared;
    let sym_diff = missed + false_pos;
    let normalizer = s * binom_f64(h.n() as u64, h.d() as u64);
    let normalized_error = if sym_diff == 0 {
        0.0
    } else {
        sym_diff as f64 / normalizer
    };
    Ok(ReconMetrics {
        sym_diff,
        missed,
        false_pos,
        normalizer,
        normalized_error,
    })
}

/// Hyperedges of `H` none of whose internal pairs were observed in `A`.
pub fn empty_set(h: &Hypergraph, a: &Graph) -> Result<Hypergraph> {
    if h.n() != a.n() {
        return Err(Error::InvalidParams(format!(
            "vertex counts differ: {} vs {}",
            h.n(),
            a.n()
        )));
    }
    let kept = h
        .iter()
        .filter(|e| (0..e.len()).all(|x| (x + 1..e.len()).all(|y| !a.contains(e[x], e[y]))))
        .cloned()
        .collect();
    Ok(Hypergraph::from_edges_unchecked(h.n(), h.d(), kept))
}
