use std::collections::BTreeMap;

use rand::seq::index;
use rand::Rng as _;
use rand_distr::{Binomial, Distribution, Geometric};

use super::graph::{Edge, Graph};
use super::hypergraph::{Hyperedge, Hypergraph};
use super::params::ModelParams;
use crate::combinatorics::{binom_u64, unrank_colex};
use crate::error::{Error, Result};
use crate::rng::{rng_from_seed, Rng};

/// Most hyperedges a single sample may hold.
pub const MAX_SAMPLED_HYPEREDGES: u64 = 50_000_000;

/// Draws `H ~ mu`: every `d`-subset of `{1..=n}` independently with
/// probability `s`.
///
/// Two stages: `|H| ~ Binomial(C(n, d), s)`, then that many distinct ranks
/// drawn uniformly and unranked into subsets.
pub fn sample_hypergraph(params: &ModelParams, seed: u64) -> Result<Hypergraph> {
    let mut rng = rng_from_seed(seed);
    sample_hypergraph_with(params.n, params.d, params.s, &mut rng)
}

pub(crate) fn sample_hypergraph_with(
    n: usize,
    d: usize,
    s: f64,
    rng: &mut Rng,
) -> Result<Hypergraph> {
    let total = binom_u64(n as u64, d as u64).ok_or(Error::BudgetExceeded {
        what: "candidate hyperedges C(n, d)",
        requested: crate::combinatorics::binom_u128(n as u64, d as u64).unwrap_or(u128::MAX),
        cap: u64::MAX as u128,
    })?;
    if s <= 0.0 || total == 0 {
        return Ok(Hypergraph::empty(n, d));
    }
    let k = if s >= 1.0 {
        total
    } else {
        Binomial::new(total, s)
            .map_err(|e| Error::InvalidParams(e.to_string()))?
            .sample(rng)
    };
    if k > MAX_SAMPLED_HYPEREDGES {
        return Err(Error::BudgetExceeded {
            what: "sampled hyperedges",
            requested: k as u128,
            cap: MAX_SAMPLED_HYPEREDGES as u128,
        });
    }
    let edges: Vec<Hyperedge> = index::sample(rng, total as usize, k as usize)
        .into_iter()
        .map(|r| {
            unrank_colex(r as u64, n as u64, d)
                .into_iter()
                .map(|v| v as u32 + 1)
                .collect()
        })
        .collect();
    Ok(Hypergraph::from_edges_unchecked(n, d, edges))
}

/// The projection `P(H)`: `(i, j)` is an edge iff some hyperedge holds both.
pub fn project(h: &Hypergraph) -> Graph {
    let mut edges = Vec::with_capacity(h.len() * h.d() * (h.d() - 1) / 2);
    for e in h.iter() {
        push_pairs(e, &mut edges);
    }
    Graph::from_edges_unchecked(h.n(), edges)
}

fn push_pairs(e: &[u32], out: &mut Vec<Edge>) {
    for a in 0..e.len() {
        for b in a + 1..e.len() {
            out.push((e[a], e[b]));
        }
    }
}

/// Calls `f(i, j)` for each pair `i < j` of `{1..=n}` selected independently
/// with probability `q`, in lexicographic order. Cost is proportional to
/// `n` plus the number of selected pairs.
pub(crate) fn for_each_bernoulli_pair(
    n: usize,
    q: f64,
    rng: &mut Rng,
    mut f: impl FnMut(u32, u32),
) {
    if n < 2 || q <= 0.0 {
        return;
    }
    let n32 = n as u32;
    if q >= 1.0 {
        for i in 1..=n32 {
            for j in i + 1..=n32 {
                f(i, j);
            }
        }
        return;
    }
    let geo = Geometric::new(q).expect("0 < q < 1");
    let total = (n as u64) * (n as u64 - 1) / 2;
    let mut pos = geo.sample(rng);
    let mut i: u32 = 1;
    let mut row_start: u64 = 0;
    let mut row_len: u64 = n as u64 - 1;
    while pos < total {
        while pos >= row_start + row_len {
            row_start += row_len;
            row_len -= 1;
            i += 1;
        }
        f(i, i + 1 + (pos - row_start) as u32);
        pos = pos.saturating_add(1).saturating_add(geo.sample(rng));
    }
}

/// The noisy observation `A`: edges of `proj` survive with probability `p`,
/// non-edges appear with probability `q`, all independently.
pub fn apply_noise(proj: &Graph, p: f64, q: f64, seed: u64) -> Graph {
    let mut rng = rng_from_seed(seed);
    apply_noise_with(proj, p, q, &mut rng)
}

pub(crate) fn apply_noise_with(proj: &Graph, p: f64, q: f64, rng: &mut Rng) -> Graph {
    let kept: Vec<Edge> = proj
        .edges()
        .iter()
        .copied()
        .filter(|_| rng.random::<f64>() < p)
        .collect();

    // Spurious edges: Bernoulli(q) over all pairs, minus the projected ones.
    let proj_edges = proj.edges();
    let mut cursor = 0;
    let mut spurious = Vec::new();
    for_each_bernoulli_pair(proj.n(), q, rng, |i, j| {
        while cursor < proj_edges.len() && proj_edges[cursor] < (i, j) {
            cursor += 1;
        }
        if cursor < proj_edges.len() && proj_edges[cursor] == (i, j) {
            return;
        }
        spurious.push((i, j));
    });

    Graph::from_sorted_unchecked(proj.n(), merge_sorted(kept, spurious))
}

fn merge_sorted(a: Vec<Edge>, b: Vec<Edge>) -> Vec<Edge> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut ia, mut ib) = (a.into_iter().peekable(), b.into_iter().peekable());
    loop {
        match (ia.peek(), ib.peek()) {
            (Some(x), Some(y)) => {
                if x < y {
                    out.push(ia.next().unwrap());
                } else {
                    out.push(ib.next().unwrap());
                }
            }
            (Some(_), None) => out.extend(ia.by_ref()),
            (None, Some(_)) => out.extend(ib.by_ref()),
            (None, None) => break,
        }
    }
    out
}

/// Erdős–Rényi `G(n, q)`.
pub fn sample_null(n: usize, q: f64, seed: u64) -> Graph {
    let mut rng = rng_from_seed(seed);
    sample_null_with(n, q, &mut rng)
}

pub(crate) fn sample_null_with(n: usize, q: f64, rng: &mut Rng) -> Graph {
    let mut edges = Vec::new();
    for_each_bernoulli_pair(n, q, rng, |i, j| edges.push((i, j)));
    Graph::from_sorted_unchecked(n, edges)
}

/// `k -> |M_k|`, where `M_k` is the set of projected edges covered by at
/// least `k` hyperedges. Only nonzero entries are present.
pub fn edge_multiplicity_histogram(h: &Hypergraph) -> BTreeMap<usize, usize> {
    let mut pairs = Vec::with_capacity(h.len() * h.d() * (h.d() - 1) / 2);
    for e in h.iter() {
        push_pairs(e, &mut pairs);
    }
    pairs.sort_unstable();
    let mut hist = BTreeMap::new();
    for run in pairs.chunk_by(|a, b| a == b) {
        for k in 1..=run.len() {
            *hist.entry(k).or_insert(0) += 1;
        }
    }
    hist
}
