use crate::error::{Error, Result};

use super::hypergraph::sorted_intersection_len;

/// An undirected edge `(i, j)` with `i < j`.
pub type Edge = (u32, u32);

/// A simple graph on `{1..=n}` stored as a sorted, duplicate-free edge list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
}

impl Graph {
    /// Builds a graph from unordered pairs; each pair is normalized to
    /// `i < j`. Self-loops, out-of-range endpoints and duplicates are errors.
    pub fn new<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, u32)>,
    {
        let mut out = Vec::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::InvalidParams(format!("self-loop at vertex {a}")));
            }
            let (i, j) = if a < b { (a, b) } else { (b, a) };
            if i == 0 || j as usize > n {
                return Err(Error::InvalidParams(format!(
                    "edge ({a}, {b}) has an endpoint outside [1, {n}]"
                )));
            }
            out.push((i, j));
        }
        out.sort_unstable();
        if let Some(w) = out.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidParams(format!("duplicate edge {:?}", w[0])));
        }
        Ok(Graph { n, edges: out })
    }

    /// Caller guarantees valid, normalized edges; sorting and dedup happen here.
    pub(crate) fn from_edges_unchecked(n: usize, mut edges: Vec<Edge>) -> Self {
        edges.sort_unstable();
        edges.dedup();
        Graph { n, edges }
    }

    /// Caller guarantees the edges are already sorted and unique.
    pub(crate) fn from_sorted_unchecked(n: usize, edges: Vec<Edge>) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        Graph { n, edges }
    }

    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            edges: Vec::new(),
        }
    }

    pub fn complete(n: usize) -> Self {
        let n32 = n as u32;
        let edges = (1..=n32)
            .flat_map(|i| (i + 1..=n32).map(move |j| (i, j)))
            .collect();
        Graph { n, edges }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn contains(&self, i: u32, j: u32) -> bool {
        let e = if i < j { (i, j) } else { (j, i) };
        self.edges.binary_search(&e).is_ok()
    }

    /// `|E(self) ∩ E(other)|`.
    pub fn intersection_len(&self, other: &Graph) -> usize {
        sorted_intersection_len(&self.edges, &other.edges)
    }

    /// Sorted neighbor lists, indexed by vertex (index 0 unused).
    pub fn adjacency(&self) -> Vec<Vec<u32>> {
        let mut adj = vec![Vec::new(); self.n + 1];
        for &(i, j) in &self.edges {
            adj[i as usize].push(j);
            adj[j as usize].push(i);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_and_validates() {
        let g = Graph::new(4, [(2, 1), (4, 3)]).unwrap();
        assert_eq!(g.edges(), &[(1, 2), (3, 4)]);
        assert!(g.contains(2, 1));
        assert!(Graph::new(4, [(1, 1)]).is_err());
        assert!(Graph::new(4, [(1, 5)]).is_err());
        assert!(Graph::new(4, [(1, 2), (2, 1)]).is_err());
    }

    #[test]
    fn complete_graph_has_all_pairs() {
        assert_eq!(Graph::complete(7).edge_count(), 21);
        assert_eq!(Graph::complete(1).edge_count(), 0);
        let adj = Graph::complete(4).adjacency();
        assert_eq!(adj[2], vec![1, 3, 4]);
    }
}
