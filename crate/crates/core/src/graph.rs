//! Finite simple graphs, with an optional bipartite tag for `K_{m,n}`.

use std::collections::VecDeque;
use std::ops::Range;

use crate::error::{Error, Result};

/// Partition sizes of a complete bipartite graph. Vertices `0..small` form the
/// small partition and `small..small + large` the large one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bipartition {
    pub small: usize,
    pub large: usize,
}

impl Bipartition {
    pub fn small_range(&self) -> Range<usize> {
        0..self.small
    }

    pub fn large_range(&self) -> Range<usize> {
        self.small..self.small + self.large
    }

    pub fn is_small(&self, v: usize) -> bool {
        v < self.small
    }
}

/// A connected, loop-free, undirected graph on vertices `0..vertex_count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    bipartite: Option<Bipartition>,
}

impl Graph {
    /// Validates and wraps an adjacency list. Neighbor lists are sorted and
    /// deduplicated.
    pub fn from_adjacency(mut adjacency: Vec<Vec<usize>>) -> Result<Self> {
        let count = adjacency.len();
        if count < 2 {
            return Err(Error::invalid(format!(
                "a graph needs at least 2 vertices, got {count}"
            )));
        }
        for (v, nbrs) in adjacency.iter_mut().enumerate() {
            nbrs.sort_unstable();
            nbrs.dedup();
            if let Some(&bad) = nbrs.iter().find(|&&u| u >= count) {
                return Err(Error::invalid(format!("vertex {v} lists unknown neighbor {bad}")));
            }
            if nbrs.binary_search(&v).is_ok() {
                return Err(Error::invalid(format!("loop at vertex {v}")));
            }
        }
        for (v, nbrs) in adjacency.iter().enumerate() {
            for &u in nbrs {
                if adjacency[u].binary_search(&v).is_err() {
                    return Err(Error::invalid(format!(
                        "adjacency is not symmetric: {u} in N({v}) but {v} not in N({u})"
                    )));
                }
            }
        }
        let graph = Graph {
            adjacency,
            bipartite: None,
        };
        if !graph.is_connected() {
            return Err(Error::invalid("graph is not connected"));
        }
        Ok(graph)
    }

    pub fn from_edges(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); vertex_count];
        for &(a, b) in edges {
            if a >= vertex_count || b >= vertex_count {
                return Err(Error::invalid(format!("edge ({a},{b}) out of range")));
            }
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        Self::from_adjacency(adjacency)
    }

    /// Path on `len` vertices `0 - 1 - ... - (len-1)`.
    pub fn path(len: usize) -> Result<Self> {
        let edges: Vec<_> = (1..len).map(|i| (i - 1, i)).collect();
        Self::from_edges(len, &edges)
    }

    /// `K_{m,n}` with the small partition first.
    pub fn complete_bipartite(m: usize, n: usize) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::invalid(format!(
                "complete bipartite graph needs both sides non-empty, got m={m}, n={n}"
            )));
        }
        let mut adjacency = Vec::with_capacity(m + n);
        adjacency.extend((0..m).map(|_| (m..m + n).collect::<Vec<_>>()));
        adjacency.extend((0..n).map(|_| (0..m).collect::<Vec<_>>()));
        let mut graph = Self::from_adjacency(adjacency)?;
        graph.bipartite = Some(Bipartition { small: m, large: n });
        Ok(graph)
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, v: usize, u: usize) -> bool {
        v < self.vertex_count() && self.adjacency[v].binary_search(&u).is_ok()
    }

    pub fn bipartition(&self) -> Option<Bipartition> {
        self.bipartite
    }

    /// All directed edges `(v, u)` with `{v, u}` an edge, ordered by `v` then `u`.
    pub fn directed_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(v, nbrs)| nbrs.iter().map(move |&u| (v, u)))
    }

    pub fn directed_edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum()
    }

    pub fn is_regular(&self) -> bool {
        let d = self.degree(0);
        self.adjacency.iter().all(|nbrs| nbrs.len() == d)
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.vertex_count()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(v) = queue.pop_front() {
            for &u in &self.adjacency[v] {
                if !seen[u] {
                    seen[u] = true;
                    reached += 1;
                    queue.push_back(u);
                }
            }
        }
        reached == self.vertex_count()
    }
}
