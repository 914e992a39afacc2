//! Exact inference by full enumeration on tiny instances.
//!
//! Hypergraphs are encoded as bitmasks over the lexicographic ordering of the
//! `d`-subsets of `[n]` and graphs as bitmasks over the lexicographic ordering
//! of vertex pairs. Both sides are capped at 20 bits.
//!
//! Every channel quantity is evaluated with plain products of `p`, `1 - p`,
//! `q`, `1 - q`. A factor raised to the zeroth power is 1, so degenerate
//! channels (`q = 0` or `p = 1`) simply give probability zero to impossible
//! observations, and such states are dropped from supports.

use std::collections::BTreeMap;

use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{binom_u64, Combinations};
use crate::error::{Error, Result};
use crate::model::{Graph, Hypergraph, ModelParams};
use crate::rng::{rng_from_seed, trial_seed, Rng, Stream};

/// Largest number of bits on either side of an enumeration.
pub const MAX_ENUM_BITS: u32 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SupportKind {
    Graph,
    Hypergraph,
}

/// A finite probability table. `support` is sorted ascending and holds only
/// states of positive probability.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactDistribution {
    pub kind: SupportKind,
    pub n: usize,
    /// Hyperedge arity; 2 for graphs.
    pub d: usize,
    pub support: Vec<u64>,
    pub probs: Vec<f64>,
}

impl ExactDistribution {
    /// Builds from a dense table indexed by encoding, dropping zero entries.
    fn from_dense(kind: SupportKind, n: usize, d: usize, dense: &[f64]) -> Self {
        let (support, probs) = dense
            .iter()
            .enumerate()
            .filter(|(_, &w)| w > 0.0)
            .map(|(code, &w)| (code as u64, w))
            .unzip();
        ExactDistribution {
            kind,
            n,
            d,
            support,
            probs,
        }
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    /// Probability of the state with this encoding (0 off the support).
    pub fn prob(&self, code: u64) -> f64 {
        match self.support.binary_search(&code) {
            Ok(i) => self.probs[i],
            Err(_) => 0.0,
        }
    }

    pub fn total_mass(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Mode; ties go to the smallest encoding.
    pub fn map_estimate(&self) -> u64 {
        let mut best = 0;
        for i in 1..self.probs.len() {
            if self.probs[i] > self.probs[best] {
                best = i;
            }
        }
        self.support[best]
    }

    /// Inverse-CDF draw.
    pub fn sample(&self, rng: &mut Rng) -> u64 {
        let u: f64 = rng.random::<f64>() * self.total_mass();
        let mut acc = 0.0;
        for (&code, &w) in self.support.iter().zip(&self.probs) {
            acc += w;
            if u < acc {
                return code;
            }
        }
        *self.support.last().expect("empty distribution")
    }

    /// Total variation distance to another table over the same space.
    pub fn total_variation(&self, other: &ExactDistribution) -> f64 {
        let mut codes: Vec<u64> = self.support.iter().chain(&other.support).copied().collect();
        codes.sort_unstable();
        codes.dedup();
        0.5 * codes
            .iter()
            .map(|&c| (self.prob(c) - other.prob(c)).abs())
            .sum::<f64>()
    }

    pub fn to_fixture(&self, params: &ModelParams) -> OracleFixture {
        OracleFixture {
            params: FixtureParams {
                n: params.n,
                d: params.d,
                s: params.s,
                p: params.p,
                q: params.q,
            },
            kind: self.kind,
            support_encoding: self.support.clone(),
            probs: self.probs.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixtureParams {
    pub n: usize,
    pub d: usize,
    pub s: f64,
    pub p: f64,
    pub q: f64,
}

/// Serialized form of an exact table, used for golden files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleFixture {
    pub params: FixtureParams,
    pub kind: SupportKind,
    pub support_encoding: Vec<u64>,
    pub probs: Vec<f64>,
}

/// Lexicographic index of the pair `(i, j)`, `1 <= i < j <= n`.
pub fn pair_index(n: usize, i: u32, j: u32) -> usize {
    let (i, j) = (i as usize, j as usize);
    debug_assert!(1 <= i && i < j && j <= n);
    // Pairs starting before i: sum_{a<i} (n - a).
    (i - 1) * n - (i - 1) * i / 2 + (j - i - 1)
}

pub fn graph_encoding(g: &Graph) -> Result<u64> {
    check_bits(
        "graph pairs",
        binom_u64(g.n() as u64, 2).unwrap_or(u64::MAX),
    )?;
    Ok(g.edges()
        .iter()
        .fold(0, |acc, &(i, j)| acc | 1 << pair_index(g.n(), i, j)))
}

pub fn graph_from_encoding(n: usize, code: u64) -> Graph {
    let edges = Combinations::new(n as u32, 2)
        .enumerate()
        .filter(|(b, _)| code >> b & 1 == 1)
        .map(|(_, e)| (e[0], e[1]))
        .collect();
    Graph::from_sorted_unchecked(n, edges)
}

pub fn hypergraph_encoding(h: &Hypergraph) -> Result<u64> {
    check_bits(
        "hypergraph subsets",
        binom_u64(h.n() as u64, h.d() as u64).unwrap_or(u64::MAX),
    )?;
    let mut code = 0;
    for (b, e) in Combinations::new(h.n() as u32, h.d()).enumerate() {
        if h.contains(&e) {
            code |= 1 << b;
        }
    }
    Ok(code)
}

pub fn hypergraph_from_encoding(n: usize, d: usize, code: u64) -> Hypergraph {
    let edges = Combinations::new(n as u32, d)
        .enumerate()
        .filter(|(b, _)| code >> b & 1 == 1)
        .map(|(_, e)| e.into_iter().collect())
        .collect();
    Hypergraph::from_edges_unchecked(n, d, edges)
}

fn check_bits(what: &'static str, bits: u64) -> Result<()> {
    if bits > MAX_ENUM_BITS as u64 {
        return Err(Error::BudgetExceeded {
            what,
            requested: bits as u128,
            cap: MAX_ENUM_BITS as u128,
        });
    }
    Ok(())
}

/// `x^k` with `0^0 = 1`.
fn pow(x: f64, k: u32) -> f64 {
    x.powi(k as i32)
}

/// Enumeration tables shared by the oracle functions.
struct Space {
    n: usize,
    d: usize,
    /// Number of `d`-subsets.
    big_n: u32,
    /// Number of pairs.
    big_m: u32,
    /// Projected pair mask of each `d`-subset.
    subset_pairs: Vec<u64>,
}

impl Space {
    fn new(n: usize, d: usize) -> Result<Self> {
        if n < d || d < 2 {
            return Err(Error::InvalidParams(format!(
                "need 2 <= d <= n, got n = {n}, d = {d}"
            )));
        }
        let subsets = binom_u64(n as u64, d as u64).unwrap_or(u64::MAX);
        let pairs = binom_u64(n as u64, 2).unwrap_or(u64::MAX);
        check_bits("hypergraph subsets", subsets)?;
        check_bits("graph pairs", pairs)?;
        let subset_pairs = Combinations::new(n as u32, d)
            .map(|e| {
                let mut mask = 0u64;
                for x in 0..d {
                    for y in x + 1..d {
                        mask |= 1 << pair_index(n, e[x], e[y]);
                    }
                }
                mask
            })
            .collect();
        Ok(Space {
            n,
            d,
            big_n: subsets as u32,
            big_m: pairs as u32,
            subset_pairs,
        })
    }

    fn of(params: &ModelParams) -> Result<Self> {
        Space::new(params.n, params.d)
    }

    fn project(&self, h: u64) -> u64 {
        let mut g = 0;
        let mut rest = h;
        while rest != 0 {
            let b = rest.trailing_zeros();
            g |= self.subset_pairs[b as usize];
            rest &= rest - 1;
        }
        g
    }

    fn prior(&self, s: f64, h: u64) -> f64 {
        let k = h.count_ones();
        pow(s, k) * pow(1.0 - s, self.big_n - k)
    }

    fn null(&self, q: f64, a: u64) -> f64 {
        let k = a.count_ones();
        pow(q, k) * pow(1.0 - q, self.big_m - k)
    }

    /// `P(A | P(H) = G)`.
    fn channel(&self, p: f64, q: f64, a: u64, g: u64) -> f64 {
        let kept = (a & g).count_ones();
        let dropped = (g & !a).count_ones();
        let added = (a & !g).count_ones();
        let absent = self.big_m - kept - dropped - added;
        pow(p, kept) * pow(1.0 - p, dropped) * pow(q, added) * pow(1.0 - q, absent)
    }

    /// Law of the projection, `pi(G) = sum_{H : P(H) = G} mu(H)`, as a sparse
    /// list sorted by `G`.
    fn projection_law(&self, s: f64) -> Vec<(u64, f64)> {
        let mut law: BTreeMap<u64, f64> = BTreeMap::new();
        for h in 0..1u64 << self.big_n {
            let w = self.prior(s, h);
            if w > 0.0 {
                *law.entry(self.project(h)).or_insert(0.0) += w;
            }
        }
        law.into_iter().collect()
    }
}

/// The ratio needs `Q(A) > 0` for every `A`.
fn require_open_q(p: f64, q: f64) -> Result<()> {
    if q <= 0.0 || q >= 1.0 {
        return Err(Error::DegenerateNoise { p, q });
    }
    Ok(())
}

/// Prior `mu` over hypergraphs.
pub fn exact_prior(params: &ModelParams) -> Result<ExactDistribution> {
    let sp = Space::of(params)?;
    let dense: Vec<f64> = (0..1u64 << sp.big_n)
        .map(|h| sp.prior(params.s, h))
        .collect();
    Ok(ExactDistribution::from_dense(
        SupportKind::Hypergraph,
        sp.n,
        sp.d,
        &dense,
    ))
}

/// Erdős–Rényi `G(n, q)`.
pub fn exact_null(n: usize, q: f64) -> Result<ExactDistribution> {
    let sp = Space::new(n, 2)?;
    let dense: Vec<f64> = (0..1u64 << sp.big_m).map(|a| sp.null(q, a)).collect();
    Ok(ExactDistribution::from_dense(
        SupportKind::Graph,
        n,
        2,
        &dense,
    ))
}

/// Planted marginal `P(A) = sum_H mu(H) P(A | H)`.
///
/// When `p = q` or `s = 0` the observation does not depend on `H` and the
/// marginal is `G(n, q)` itself; that table is returned directly so the two
/// compare equal exactly rather than up to rounding.
pub fn exact_planted_marginal(params: &ModelParams) -> Result<ExactDistribution> {
    let sp = Space::of(params)?;
    if params.p == params.q || params.s == 0.0 {
        return exact_null(params.n, params.q);
    }
    let law = sp.projection_law(params.s);
    let dense: Vec<f64> = (0..1u64 << sp.big_m)
        .into_par_iter()
        .map(|a| {
            law.iter()
                .map(|&(g, w)| w * sp.channel(params.p, params.q, a, g))
                .sum()
        })
        .collect();
    Ok(ExactDistribution::from_dense(
        SupportKind::Graph,
        sp.n,
        2,
        &dense,
    ))
}

/// `L(A) = E_H[prod_{ij in P(H)} l(A_ij)]`, summing over every hypergraph.
pub fn exact_likelihood_ratio(a: &Graph, params: &ModelParams) -> Result<f64> {
    let sp = Space::of(params)?;
    require_open_q(params.p, params.q)?;
    let code = graph_encoding(a)?;
    let (l1, l0) = (params.p / params.q, (1.0 - params.p) / (1.0 - params.q));
    Ok((0..1u64 << sp.big_n)
        .map(|h| {
            let g = sp.project(h);
            sp.prior(params.s, h)
                * pow(l1, (g & code).count_ones())
                * pow(l0, (g & !code).count_ones())
        })
        .sum())
}

/// `L(A)` for every graph, indexed by encoding. Built from the projection law
/// rather than the marginal, so it is independent of [`exact_planted_marginal`].
pub fn likelihood_ratio_table(params: &ModelParams) -> Result<Vec<f64>> {
    let sp = Space::of(params)?;
    require_open_q(params.p, params.q)?;
    let (l1, l0) = (params.p / params.q, (1.0 - params.p) / (1.0 - params.q));
    let law = sp.projection_law(params.s);
    Ok((0..1u64 << sp.big_m)
        .into_par_iter()
        .map(|a| {
            law.iter()
                .map(|&(g, w)| w * pow(l1, (g & a).count_ones()) * pow(l0, (g & !a).count_ones()))
                .sum()
        })
        .collect())
}

/// `sum_A Q(A) L(A)`, which should be 1.
pub fn exact_null_mean_of_ratio(params: &ModelParams) -> Result<f64> {
    let sp = Space::of(params)?;
    let table = likelihood_ratio_table(params)?;
    Ok(table
        .iter()
        .enumerate()
        .map(|(a, l)| sp.null(params.q, a as u64) * l)
        .sum())
}

/// `TV(P, Q) = (1/2) sum_A |P(A) - Q(A)|` from the two exact marginals.
pub fn exact_tv(params: &ModelParams) -> Result<f64> {
    let planted = exact_planted_marginal(params)?;
    let null = exact_null(params.n, params.q)?;
    Ok(planted.total_variation(&null).min(1.0))
}

/// `TV(P, Q) = (1/2) E_Q |L - 1|`, an independent route through the ratio.
pub fn exact_tv_via_ratio(params: &ModelParams) -> Result<f64> {
    let sp = Space::of(params)?;
    let table = likelihood_ratio_table(params)?;
    Ok(0.5
        * table
            .iter()
            .enumerate()
            .map(|(a, l)| sp.null(params.q, a as u64) * (l - 1.0).abs())
            .sum::<f64>())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecondMoment {
    /// `sum_A Q(A) L(A)^2`
    pub direct: f64,
    /// `E_{H,H'}[F^{|E(P(H)) ∩ E(P(H'))|}]` with `F = p^2/q + (1-p)^2/(1-q)`.
    pub replica: f64,
}

pub fn exact_second_moment(params: &ModelParams) -> Result<SecondMoment> {
    let sp = Space::of(params)?;
    let (p, q) = (params.p, params.q);
    if q <= 0.0 || q >= 1.0 || p >= 1.0 {
        return Err(Error::DegenerateNoise { p, q });
    }
    let table = likelihood_ratio_table(params)?;
    let direct = table
        .iter()
        .enumerate()
        .map(|(a, l)| sp.null(q, a as u64) * l * l)
        .sum();

    let f = p * p / q + (1.0 - p) * (1.0 - p) / (1.0 - q);
    let law = sp.projection_law(params.s);
    let replica = law
        .par_iter()
        .map(|&(g, w)| {
            w * law
                .iter()
                .map(|&(g2, w2)| w2 * pow(f, (g & g2).count_ones()))
                .sum::<f64>()
        })
        .collect::<Vec<f64>>()
        .iter()
        .sum();
    Ok(SecondMoment { direct, replica })
}

/// `mu_A(H) ∝ mu(H) P(A | H)` over all hypergraphs.
pub fn exact_posterior(a: &Graph, params: &ModelParams) -> Result<ExactDistribution> {
    let sp = Space::of(params)?;
    if a.n() != sp.n {
        return Err(Error::InvalidParams(format!(
            "graph has n = {}, model has n = {}",
            a.n(),
            sp.n
        )));
    }
    let code = graph_encoding(a)?;
    posterior_from_code(&sp, params, code)
}

fn posterior_from_code(sp: &Space, params: &ModelParams, code: u64) -> Result<ExactDistribution> {
    let mut dense: Vec<f64> = (0..1u64 << sp.big_n)
        .map(|h| sp.prior(params.s, h) * sp.channel(params.p, params.q, code, sp.project(h)))
        .collect();
    let evidence: f64 = dense.iter().sum();
    if evidence <= 0.0 {
        return Err(Error::ZeroEvidence);
    }
    for w in &mut dense {
        *w /= evidence;
    }
    Ok(ExactDistribution::from_dense(
        SupportKind::Hypergraph,
        sp.n,
        sp.d,
        &dense,
    ))
}

/// Unnormalized posterior weight `mu(H) P(A | H)`, for Bayes-rule checks.
pub fn joint_weight(h: &Hypergraph, a: &Graph, params: &ModelParams) -> Result<f64> {
    let sp = Space::of(params)?;
    let hc = hypergraph_encoding(h)?;
    let ac = graph_encoding(a)?;
    Ok(sp.prior(params.s, hc) * sp.channel(params.p, params.q, ac, sp.project(hc)))
}

/// Overlaps `|H ∩ H'|` with `H` drawn from the model and `H'` from the exact
/// posterior given the observation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlapSamples {
    pub overlaps: Vec<u32>,
    /// `|H|` in the same trial.
    pub truth_sizes: Vec<u32>,
}

impl OverlapSamples {
    pub fn histogram(&self) -> BTreeMap<u32, u64> {
        let mut h = BTreeMap::new();
        for &o in &self.overlaps {
            *h.entry(o).or_insert(0) += 1;
        }
        h
    }

    pub fn mean_overlap(&self) -> f64 {
        mean(&self.overlaps)
    }

    pub fn mean_truth_size(&self) -> f64 {
        mean(&self.truth_sizes)
    }
}

fn mean(v: &[u32]) -> f64 {
    v.iter().map(|&x| x as f64).sum::<f64>() / v.len() as f64
}

/// Draws a hypergraph encoding from the prior, one Bernoulli per subset.
fn sample_prior_code(sp: &Space, s: f64, rng: &mut Rng) -> u64 {
    (0..sp.big_n).fold(0, |acc, b| {
        if rng.random::<f64>() < s {
            acc | 1 << b
        } else {
            acc
        }
    })
}

fn sample_channel_code(sp: &Space, p: f64, q: f64, g: u64, rng: &mut Rng) -> u64 {
    (0..sp.big_m).fold(0, |acc, b| {
        let rate = if g >> b & 1 == 1 { p } else { q };
        if rng.random::<f64>() < rate {
            acc | 1 << b
        } else {
            acc
        }
    })
}

pub fn exact_overlap_distribution(
    params: &ModelParams,
    seed: u64,
    trials: usize,
) -> Result<OverlapSamples> {
    if trials == 0 {
        return Err(Error::InvalidParams("trials must be at least 1".into()));
    }
    let sp = Space::of(params)?;
    let mut cache: BTreeMap<u64, ExactDistribution> = BTreeMap::new();
    let mut out = OverlapSamples {
        overlaps: Vec::with_capacity(trials),
        truth_sizes: Vec::with_capacity(trials),
    };
    for t in 0..trials as u64 {
        let mut rng_h = rng_from_seed(trial_seed(seed, 0, t, Stream::Hypergraph));
        let mut rng_a = rng_from_seed(trial_seed(seed, 0, t, Stream::Noise));
        let mut rng_post = rng_from_seed(trial_seed(seed, 0, t, Stream::Posterior));
        let h = sample_prior_code(&sp, params.s, &mut rng_h);
        let a = sample_channel_code(&sp, params.p, params.q, sp.project(h), &mut rng_a);
        let post = match cache.get(&a) {
            Some(post) => post,
            None => {
                let post = posterior_from_code(&sp, params, a)?;
                cache.entry(a).or_insert(post)
            }
        };
        let h2 = post.sample(&mut rng_post);
        out.overlaps.push((h & h2).count_ones());
        out.truth_sizes.push(h.count_ones());
    }
    Ok(out)
}

/// `|H ∩ H''|` for independent `H, H'' ~ mu`, the reference law when the
/// observation carries no information.
pub fn prior_overlap_samples(params: &ModelParams, seed: u64, trials: usize) -> Result<Vec<u32>> {
    let sp = Space::of(params)?;
    Ok((0..trials as u64)
        .map(|t| {
            let mut rng = rng_from_seed(trial_seed(seed, 0, t, Stream::Replica));
            let h = sample_prior_code(&sp, params.s, &mut rng);
            let h2 = sample_prior_code(&sp, params.s, &mut rng);
            (h & h2).count_ones()
        })
        .collect())
}
