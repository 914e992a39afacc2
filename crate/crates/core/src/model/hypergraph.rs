use arrayvec::ArrayVec;

use super::params::MAX_ARITY;
use crate::error::{Error, Result};

/// A hyperedge: `d` distinct vertices in ascending order.
pub type Hyperedge = ArrayVec<u32, MAX_ARITY>;

/// A `d`-uniform hypergraph on `{1..=n}`.
///
/// Hyperedges are kept sorted and unique, so equality, iteration order and
/// serialization are canonical.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Hypergraph {
    n: usize,
    d: usize,
    edges: Vec<Hyperedge>,
}

impl Hypergraph {
    /// Builds a hypergraph from arbitrary vertex tuples. Each tuple is sorted;
    /// out-of-range vertices, repeated vertices, wrong arity and duplicate
    /// hyperedges are rejected.
    pub fn new<I, E>(n: usize, d: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: AsRef<[u32]>,
    {
        if !(2..=MAX_ARITY).contains(&d) {
            return Err(Error::InvalidParams(format!(
                "arity {d} not in [2, {MAX_ARITY}]"
            )));
        }
        let mut out = Vec::new();
        for e in edges {
            let e = e.as_ref();
            if e.len() != d {
                return Err(Error::InvalidParams(format!(
                    "hyperedge {e:?} has {} vertices, expected {d}",
                    e.len()
                )));
            }
            let mut he: Hyperedge = e.iter().copied().collect();
            he.sort_unstable();
            if he.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidParams(format!(
                    "hyperedge {e:?} repeats a vertex"
                )));
            }
            if he[0] == 0 || he[d - 1] as usize > n {
                return Err(Error::InvalidParams(format!(
                    "hyperedge {e:?} has a vertex outside [1, {n}]"
                )));
            }
            out.push(he);
        }
        out.sort_unstable();
        if let Some(w) = out.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidParams(format!(
                "duplicate hyperedge {:?}",
                w[0]
            )));
        }
        Ok(Hypergraph { n, d, edges: out })
    }

    /// Caller guarantees every hyperedge is valid; order and duplicates are
    /// fixed up here.
    pub(crate) fn from_edges_unchecked(n: usize, d: usize, mut edges: Vec<Hyperedge>) -> Self {
        edges.sort_unstable();
        edges.dedup();
        Hypergraph { n, d, edges }
    }

    pub fn empty(n: usize, d: usize) -> Self {
        Hypergraph {
            n,
            d,
            edges: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[Hyperedge] {
        &self.edges
    }

    pub fn iter(&self) -> impl Iterator<Item = &Hyperedge> {
        self.edges.iter()
    }

    pub fn contains(&self, e: &[u32]) -> bool {
        self.edges.binary_search_by(|x| x.as_slice().cmp(e)).is_ok()
    }

    /// `|self ∩ other|` by a sorted merge.
    pub fn intersection_len(&self, other: &Hypergraph) -> usize {
        sorted_intersection_len(&self.edges, &other.edges)
    }
}

pub(crate) fn sorted_intersection_len<T: Ord>(a: &[T], b: &[T]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}
