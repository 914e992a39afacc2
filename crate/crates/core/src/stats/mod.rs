//! Detection statistics, their thresholds, per-edge likelihood factors, the
//! density-matched null and the replica intersection statistic.

pub mod cliques;
mod ks;

use serde::{Deserialize, Serialize};

pub use cliques::OrientedGraph;
pub use ks::{ks_two_sample, KsResult};

use crate::combinatorics::{binom_f64, ln_binom};
use crate::error::{Error, Result};
use crate::model::{project, Graph, Hypergraph, ModelParams, MAX_ARITY};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StatisticName {
    EdgeCount,
    CliqueCount,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Decision {
    Planted,
    Null,
}

impl Decision {
    /// `Planted` iff `value >= threshold`.
    pub fn from_threshold(value: f64, threshold: f64) -> Self {
        if value >= threshold {
            Decision::Planted
        } else {
            Decision::Null
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestOutcome {
    pub statistic_name: StatisticName,
    pub value: f64,
    pub threshold: f64,
    pub decision: Decision,
}

impl TestOutcome {
    pub fn new(statistic_name: StatisticName, value: f64, threshold: f64) -> Self {
        TestOutcome {
            statistic_name,
            value,
            threshold,
            decision: Decision::from_threshold(value, threshold),
        }
    }
}

/// Which edge-count threshold to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum ThresholdRule {
    /// `q C(n,2) + (1/2) p s C(d,2) C(n,d)`.
    #[default]
    Verbatim,
    /// `q C(n,2) + (1/2) * 0.9 (p - q) s C(d,2) C(n,d)`, the midpoint of the
    /// null mean and the lower bound on the planted excess.
    Calibrated,
}

/// `f(A)`, the number of edges.
pub fn edge_count(a: &Graph) -> u64 {
    a.edge_count() as u64
}

fn finite(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow(format!("{name} evaluates to {v}")))
    }
}

/// Threshold of the edge-count test.
pub fn edge_count_threshold(params: &ModelParams) -> Result<f64> {
    edge_count_threshold_with(params, ThresholdRule::Verbatim)
}

pub fn edge_count_threshold_with(params: &ModelParams, rule: ThresholdRule) -> Result<f64> {
    let c_d2 = binom_f64(params.d as u64, 2);
    let weight = match rule {
        ThresholdRule::Verbatim => 0.5 * params.p,
        ThresholdRule::Calibrated => 0.5 * 0.9 * (params.p - params.q),
    };
    let null_mean = params.q * params.num_pairs();
    let excess = weight * params.s * c_d2 * params.num_subsets();
    finite("edge-count threshold", null_mean + excess)
}

/// `g(A)`, the number of `d`-subsets spanning a clique.
pub fn clique_count(a: &Graph, d: usize) -> u64 {
    assert!((2..=MAX_ARITY).contains(&d), "clique size {d} out of range");
    if d == 2 {
        return edge_count(a);
    }
    OrientedGraph::new(a).count(d)
}

/// Threshold of the clique-count test: `q^{C(d,2)} C(n,d) + (1/2) p s C(n,d)`.
pub fn clique_count_threshold(params: &ModelParams) -> Result<f64> {
    let c_d2 = binom_f64(params.d as u64, 2);
    let subsets = params.num_subsets();
    let mut background = params.q.powf(c_d2) * subsets;
    if params.q > 0.0 && (background == 0.0 || !background.is_finite()) {
        // q^{C(d,2)} under- or overflows on its own.
        background = (c_d2 * params.q.ln() + ln_binom(params.n as u64, params.d as u64)).exp();
    }
    let planted = 0.5 * params.p * params.s * subsets;
    finite("clique-count threshold", background + planted)
}

/// Edge density of the Erdős–Rényi null whose expected edge count matches
/// the planted model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatchedNull {
    pub density: f64,
    /// The raw formula left `[0, 1]` and was clamped.
    pub clamped: bool,
}

/// `q~ = (p - q) s C(n,d) C(d,2) / C(n,2) + q`, clamped to `[0, 1]`.
pub fn matched_null_density(params: &ModelParams) -> MatchedNull {
    let c_d2 = binom_f64(params.d as u64, 2);
    let excess =
        (params.p - params.q) * params.s * params.num_subsets() * c_d2 / params.num_pairs();
    let raw = excess + params.q;
    let density = raw.clamp(0.0, 1.0);
    MatchedNull {
        density,
        clamped: density != raw,
    }
}

/// Per-edge likelihood-ratio factors of the noisy channel against `G(n, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeFactors {
    /// `l(1) = p / q`.
    pub ell_one: f64,
    /// `l(0) = (1 - p) / (1 - q)`.
    pub ell_zero: f64,
    /// `E_Q[l^2] = p^2 / q + (1 - p)^2 / (1 - q)`.
    pub second_moment_factor: f64,
}

pub fn likelihood_edge_factors(p: f64, q: f64) -> Result<EdgeFactors> {
    if q <= 0.0 || p >= 1.0 {
        return Err(Error::DegenerateNoise { p, q });
    }
    if q > p || p < 0.0 {
        return Err(Error::InvalidParams(format!(
            "need 0 < q <= p < 1, got p = {p}, q = {q}"
        )));
    }
    Ok(EdgeFactors {
        ell_one: p / q,
        ell_zero: (1.0 - p) / (1.0 - q),
        second_moment_factor: p * p / q + (1.0 - p) * (1.0 - p) / (1.0 - q),
    })
}

/// `Y = |E(P(H)) ∩ E(P(H'))|`.
pub fn intersection_statistic(h: &Hypergraph, h_prime: &Hypergraph) -> Result<u64> {
    if h.n() != h_prime.n() {
        return Err(Error::InvalidParams(format!(
            "vertex counts differ: {} vs {}",
            h.n(),
            h_prime.n()
        )));
    }
    Ok(project(h).intersection_len(&project(h_prime)) as u64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpectedIntersection {
    /// `C(n,2) (1 - (1-s)^{C(n-2,d-2)})^2`.
    pub exact: f64,
    /// `C(n,2) (C(n-2,d-2) s)^2`, the first-order form.
    pub first_order: f64,
}

/// Mean of `Y` for independent `H, H' ~ mu`.
pub fn expected_intersection(n: usize, d: usize, s: f64) -> Result<ExpectedIntersection> {
    if n < d || !(2..=MAX_ARITY).contains(&d) || !(0.0..=1.0).contains(&s) {
        return Err(Error::InvalidParams(format!("n = {n}, d = {d}, s = {s}")));
    }
    let pairs = binom_f64(n as u64, 2);
    let m = binom_f64(n as u64 - 2, d as u64 - 2);
    // 1 - (1-s)^m, accurate for tiny s.
    let cover = if s >= 1.0 {
        1.0
    } else {
        -(m * (-s).ln_1p()).exp_m1()
    };
    Ok(ExpectedIntersection {
        exact: pairs * cover * cover,
        first_order: pairs * (m * s) * (m * s),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rates(n: usize, d: usize, s: f64, p: f64, q: f64) -> ModelParams {
        ModelParams::from_rates(n, d, s, p, q).unwrap()
    }

    #[test]
    fn tie_goes_to_planted() {
        assert_eq!(Decision::from_threshold(6.3, 6.3), Decision::Planted);
        assert_eq!(Decision::from_threshold(6.2, 6.3), Decision::Null);
        let o = TestOutcome::new(StatisticName::EdgeCount, 7.0, 6.3);
        assert_eq!(o.decision, Decision::Planted);
    }

    #[test]
    fn edge_count_examples() {
        assert_eq!(edge_count(&Graph::new(4, [(1, 2), (3, 4)]).unwrap()), 2);
        assert_eq!(edge_count(&Graph::empty(4)), 0);
        assert_eq!(edge_count(&Graph::complete(7)), 21);
    }

    #[test]
    fn edge_threshold_examples() {
        let t = edge_count_threshold(&rates(10, 3, 0.01, 1.0, 0.1)).unwrap();
        assert!((t - 6.3).abs() < 1e-12, "{t}");
        let t = edge_count_threshold(&rates(10, 3, 0.0, 1.0, 0.0)).unwrap();
        assert_eq!(t, 0.0);
        let t = edge_count_threshold(&rates(10, 2, 0.2, 0.5, 0.1)).unwrap();
        assert!((t - 6.75).abs() < 1e-12, "{t}");
    }

    #[test]
    fn calibrated_threshold() {
        let params = rates(10, 3, 0.01, 1.0, 0.1);
        let t = edge_count_threshold_with(&params, ThresholdRule::Calibrated).unwrap();
        // 0.1 * 45 + 0.5 * 0.9 * 0.9 * 0.01 * 3 * 120
        assert!((t - (4.5 + 0.5 * 0.9 * 0.9 * 3.6)).abs() < 1e-12);
    }

    #[test]
    fn thresholds_stay_finite_at_large_n() {
        let params = ModelParams::resolve(10_000, 6, 0.3, 1.0, 0.5, Default::default()).unwrap();
        assert!(edge_count_threshold(&params).unwrap().is_finite());
        assert!(clique_count_threshold(&params).unwrap().is_finite());
    }

    #[test]
    fn clique_threshold_examples() {
        let t = clique_count_threshold(&rates(10, 3, 0.01, 1.0, 0.1)).unwrap();
        assert!((t - 0.72).abs() < 1e-12, "{t}");
        assert_eq!(
            clique_count_threshold(&rates(10, 3, 0.0, 1.0, 0.0)).unwrap(),
            0.0
        );
        let t = clique_count_threshold(&rates(6, 3, 0.5, 1.0, 1.0)).unwrap();
        assert!((t - 25.0).abs() < 1e-12, "{t}");
    }

    #[test]
    fn clique_count_examples() {
        assert_eq!(clique_count(&Graph::complete(4), 3), 4);
        let c5 = Graph::new(5, [(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)]).unwrap();
        assert_eq!(clique_count(&c5, 3), 0);
        assert_eq!(clique_count(&c5, 2), 5);
    }

    #[test]
    fn matched_null_examples() {
        let m = matched_null_density(&rates(10, 3, 0.01, 1.0, 0.0));
        assert!((m.density - 0.08).abs() < 1e-15);
        assert!(!m.clamped);
        let m = matched_null_density(&rates(10, 3, 0.3, 0.4, 0.4));
        assert_eq!(m.density, 0.4);
        let m = matched_null_density(&rates(10, 3, 0.0, 0.9, 0.2));
        assert_eq!(m.density, 0.2);
        let m = matched_null_density(&rates(10, 3, 0.9, 1.0, 0.0));
        assert_eq!(m.density, 1.0);
        assert!(m.clamped);
    }

    #[test]
    fn likelihood_factor_examples() {
        let f = likelihood_edge_factors(0.3, 0.3).unwrap();
        assert!((f.ell_one - 1.0).abs() < 1e-15);
        assert!((f.ell_zero - 1.0).abs() < 1e-15);
        assert!((f.second_moment_factor - 1.0).abs() < 1e-15);

        let f = likelihood_edge_factors(0.8, 0.2).unwrap();
        assert!((f.ell_one - 4.0).abs() < 1e-15);
        assert!((f.ell_zero - 0.25).abs() < 1e-15);
        assert!((f.second_moment_factor - 3.25).abs() < 1e-12);

        let f = likelihood_edge_factors(0.5, 0.5).unwrap();
        assert!((f.second_moment_factor - 1.0).abs() < 1e-15);

        assert!(matches!(
            likelihood_edge_factors(0.5, 0.0),
            Err(Error::DegenerateNoise { .. })
        ));
        assert!(matches!(
            likelihood_edge_factors(1.0, 0.2),
            Err(Error::DegenerateNoise { .. })
        ));
    }

    #[test]
    fn intersection_examples() {
        let a = Hypergraph::new(4, 3, [[1, 2, 3]]).unwrap();
        let b = Hypergraph::new(4, 3, [[1, 2, 4]]).unwrap();
        assert_eq!(intersection_statistic(&a, &b).unwrap(), 1);
        assert_eq!(intersection_statistic(&a, &a).unwrap(), 3);
        assert_eq!(
            intersection_statistic(&a, &Hypergraph::empty(4, 3)).unwrap(),
            0
        );
        assert!(intersection_statistic(&a, &Hypergraph::empty(5, 3)).is_err());
    }

    #[test]
    fn expected_intersection_examples() {
        let e = expected_intersection(4, 3, 0.5).unwrap();
        assert!((e.exact - 3.375).abs() < 1e-12);
        assert!((e.first_order - 6.0).abs() < 1e-12);
        let e = expected_intersection(10, 3, 0.0).unwrap();
        assert_eq!((e.exact, e.first_order), (0.0, 0.0));
        let e = expected_intersection(30, 3, 1e-4).unwrap();
        let ratio = e.exact / e.first_order;
        assert!((0.99..=1.0).contains(&ratio), "{ratio}");
    }
}
