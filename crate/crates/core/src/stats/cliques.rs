//! `k`-clique counting and listing on sparse graphs.
//!
//! Edges are oriented along a degeneracy ordering, so every vertex has at
//! most `degeneracy` forward neighbors, and cliques are grown by
//! intersecting forward neighborhoods. Each clique is reached exactly once,
//! from its earliest vertex in the ordering.

use std::ops::ControlFlow;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;

use crate::model::Graph;

/// A graph with edges oriented along a degeneracy ordering.
#[derive(Debug, Clone)]
pub struct OrientedGraph {
    /// Forward neighbors of each vertex, sorted by vertex id. Index 0 unused.
    forward: Vec<Vec<u32>>,
    degeneracy: usize,
}

impl OrientedGraph {
    pub fn new(g: &Graph) -> Self {
        let adj = g.adjacency();
        let (rank, degeneracy) = degeneracy_order(&adj);
        let mut forward = vec![Vec::new(); adj.len()];
        for &(i, j) in g.edges() {
            if rank[i as usize] < rank[j as usize] {
                forward[i as usize].push(j);
            } else {
                forward[j as usize].push(i);
            }
        }
        for list in &mut forward {
            list.sort_unstable();
        }
        OrientedGraph {
            forward,
            degeneracy,
        }
    }

    pub fn degeneracy(&self) -> usize {
        self.degeneracy
    }

    /// Number of `k`-cliques.
    pub fn count(&self, k: usize) -> u64 {
        assert!(k >= 2, "clique size must be at least 2");
        (1..self.forward.len())
            .into_par_iter()
            .map(|v| {
                let mut scratch = Scratch::new(k);
                count_from(&self.forward, &self.forward[v], k - 1, 0, &mut scratch)
            })
            .sum()
    }

    /// Calls `f` on every `k`-clique. Vertices are handed over in ordering
    /// order, not sorted. Stops early on `ControlFlow::Break`.
    pub fn for_each_from<F>(&self, v: u32, k: usize, f: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[u32]) -> ControlFlow<()>,
    {
        assert!(k >= 2, "clique size must be at least 2");
        let mut stack = Vec::with_capacity(k);
        stack.push(v);
        let mut scratch = Scratch::new(k);
        list_from(
            &self.forward,
            &self.forward[v as usize],
            k - 1,
            0,
            &mut stack,
            &mut scratch,
            f,
        )
    }

    /// All `k`-cliques as sorted vertex lists, in lexicographic order.
    /// Returns `None` once more than `cap` cliques would be produced.
    pub fn list(&self, k: usize, cap: u64) -> Option<Vec<Vec<u32>>> {
        let emitted = AtomicU64::new(0);
        let overflow = AtomicBool::new(false);
        let per_vertex: Vec<Vec<Vec<u32>>> = (1..self.forward.len() as u32)
            .into_par_iter()
            .map(|v| {
                let mut local = Vec::new();
                if overflow.load(Ordering::Relaxed) {
                    return local;
                }
                let _ = self.for_each_from(v, k, &mut |clique| {
                    if emitted.fetch_add(1, Ordering::Relaxed) >= cap {
                        overflow.store(true, Ordering::Relaxed);
                        return ControlFlow::Break(());
                    }
                    let mut c = clique.to_vec();
                    c.sort_unstable();
                    local.push(c);
                    ControlFlow::Continue(())
                });
                local
            })
            .collect();
        if overflow.load(Ordering::Relaxed) {
            return None;
        }
        let mut all: Vec<Vec<u32>> = per_vertex.into_iter().flatten().collect();
        all.sort_unstable();
        Some(all)
    }
}

/// Per-depth candidate buffers, reused across the recursion.
struct Scratch {
    levels: Vec<Vec<u32>>,
}

impl Scratch {
    fn new(k: usize) -> Self {
        Scratch {
            levels: vec![Vec::new(); k],
        }
    }
}

fn intersect_into(a: &[u32], b: &[u32], out: &mut Vec<u32>) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
}

/// Cliques of `remaining` more vertices drawn from `cands`.
fn count_from(
    fwd: &[Vec<u32>],
    cands: &[u32],
    remaining: usize,
    depth: usize,
    scratch: &mut Scratch,
) -> u64 {
    if remaining == 1 {
        return cands.len() as u64;
    }
    if cands.len() < remaining {
        return 0;
    }
    let mut total = 0;
    for &w in cands {
        let mut next = std::mem::take(&mut scratch.levels[depth]);
        intersect_into(cands, &fwd[w as usize], &mut next);
        total += count_from(fwd, &next, remaining - 1, depth + 1, scratch);
        scratch.levels[depth] = next;
    }
    total
}

fn list_from<F>(
    fwd: &[Vec<u32>],
    cands: &[u32],
    remaining: usize,
    depth: usize,
    stack: &mut Vec<u32>,
    scratch: &mut Scratch,
    f: &mut F,
) -> ControlFlow<()>
where
    F: FnMut(&[u32]) -> ControlFlow<()>,
{
    if cands.len() < remaining {
        return ControlFlow::Continue(());
    }
    for &w in cands {
        stack.push(w);
        let flow = if remaining == 1 {
            f(stack)
        } else {
            let mut next = std::mem::take(&mut scratch.levels[depth]);
            intersect_into(cands, &fwd[w as usize], &mut next);
            let flow = list_from(fwd, &next, remaining - 1, depth + 1, stack, scratch, f);
            scratch.levels[depth] = next;
            flow
        };
        stack.pop();
        flow?;
    }
    ControlFlow::Continue(())
}

/// Smallest-last (degeneracy) ordering by bucket peeling. Returns each
/// vertex's position and the degeneracy.
fn degeneracy_order(adj: &[Vec<u32>]) -> (Vec<usize>, usize) {
    let n = adj.len().saturating_sub(1);
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let max_deg = degree.iter().copied().max().unwrap_or(0);
    let mut buckets: Vec<Vec<u32>> = vec![Vec::new(); max_deg + 1];
    for v in 1..=n {
        buckets[degree[v]].push(v as u32);
    }
    let mut rank = vec![usize::MAX; adj.len()];
    let mut removed = vec![false; adj.len()];
    let mut degeneracy = 0;
    let mut current = 0;
    for pos in 0..n {
        // Lazy deletion: stale bucket entries are skipped.
        let v = loop {
            while buckets[current].is_empty() {
                current += 1;
            }
            let v = buckets[current].pop().unwrap();
            if !removed[v as usize] && degree[v as usize] == current {
                break v;
            }
        };
        degeneracy = degeneracy.max(current);
        removed[v as usize] = true;
        rank[v as usize] = pos;
        for &u in &adj[v as usize] {
            let u = u as usize;
            if !removed[u] {
                degree[u] -= 1;
                buckets[degree[u]].push(u as u32);
                current = current.min(degree[u]);
            }
        }
    }
    (rank, degeneracy)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: u32) -> Graph {
        Graph::new(n as usize, (1..=n).map(|i| (i, i % n + 1))).unwrap()
    }

    #[test]
    fn complete_graph_counts() {
        let g = OrientedGraph::new(&Graph::complete(6));
        assert_eq!(g.degeneracy(), 5);
        assert_eq!(g.count(2), 15);
        assert_eq!(g.count(3), 20);
        assert_eq!(g.count(4), 15);
        assert_eq!(g.count(6), 1);
    }

    #[test]
    fn cycle_has_no_triangles() {
        let g = OrientedGraph::new(&cycle(5));
        assert_eq!(g.degeneracy(), 2);
        assert_eq!(g.count(3), 0);
        assert_eq!(g.list(3, 10).unwrap(), Vec::<Vec<u32>>::new());
    }

    #[test]
    fn listing_is_sorted_and_capped() {
        let g = OrientedGraph::new(&Graph::complete(4));
        let all = g.list(3, 100).unwrap();
        assert_eq!(
            all,
            vec![vec![1, 2, 3], vec![1, 2, 4], vec![1, 3, 4], vec![2, 3, 4]]
        );
        assert!(g.list(3, 3).is_none());
        assert!(g.list(3, 4).is_some());
    }

    #[test]
    fn isolated_vertices_are_fine() {
        let g = OrientedGraph::new(&Graph::empty(5));
        assert_eq!(g.count(3), 0);
        assert_eq!(g.degeneracy(), 0);
    }
}
