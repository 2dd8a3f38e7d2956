//! Simple undirected host graphs with bitset adjacency.

use crate::bitset::Bitset;
use thiserror::Error;

pub type Vertex = usize;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range (graph has {n} vertices)")]
    OutOfRange { vertex: Vertex, n: usize },
    #[error("loop at vertex {0}")]
    Loop(Vertex),
    #[error("parallel edge {0}-{1}")]
    ParallelEdge(Vertex, Vertex),
}

/// A finite simple undirected graph on vertices `0..n`.
///
/// Adjacency is symmetric and irreflexive; every constructor and mutator keeps
/// it that way.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Graph {
    adj: Vec<Bitset>,
    edge_count: usize,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            adj: (0..n).map(|_| Bitset::new(n)).collect(),
            edge_count: 0,
        }
    }

    /// Builds a graph, rejecting loops, parallel edges and out-of-range ids.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut g = Graph::new(n);
        for (u, v) in edges {
            g.try_add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let mut g = Graph::new(n);
        for v in 1..n {
            g.add_edge(v - 1, v);
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Graph::path(n);
        if n >= 3 {
            g.add_edge(n - 1, 0);
        }
        g
    }

    /// `K_{a,b}` with sides `0..a` and `a..a+b`.
    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let mut g = Graph::new(a + b);
        for u in 0..a {
            for v in a..a + b {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn petersen() -> Self {
        let mut g = Graph::new(10);
        for i in 0..5 {
            g.add_edge(i, (i + 1) % 5);
            g.add_edge(i, i + 5);
            g.add_edge(5 + i, 5 + (i + 2) % 5);
        }
        g
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.adj.len()
    }

    #[inline]
    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.adj.len() && self.adj[u].contains(v)
    }

    #[inline]
    pub fn neighbors(&self, v: Vertex) -> &Bitset {
        &self.adj[v]
    }

    /// Closed neighbourhood `N[v]`.
    pub fn closed_neighbors(&self, v: Vertex) -> Bitset {
        let mut s = self.adj[v].clone();
        s.insert(v);
        s
    }

    #[inline]
    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.vertices().map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.vertices()
            .flat_map(move |u| self.adj[u].iter().filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn empty_set(&self) -> Bitset {
        Bitset::new(self.vertex_count())
    }

    pub fn try_add_edge(&mut self, u: Vertex, v: Vertex) -> Result<(), GraphError> {
        let n = self.vertex_count();
        for x in [u, v] {
            if x >= n {
                return Err(GraphError::OutOfRange { vertex: x, n });
            }
        }
        if u == v {
            return Err(GraphError::Loop(u));
        }
        if self.has_edge(u, v) {
            return Err(GraphError::ParallelEdge(u.min(v), u.max(v)));
        }
        self.adj[u].insert(v);
        self.adj[v].insert(u);
        self.edge_count += 1;
        Ok(())
    }

    /// Adds `uv`; returns false if it was already present.
    ///
    /// Panics on loops or out-of-range ids.
    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> bool {
        assert!(u != v, "loop at vertex {u}");
        if self.adj[u].insert(v) {
            self.adj[v].insert(u);
            self.edge_count += 1;
            true
        } else {
            false
        }
    }

    pub fn remove_edge(&mut self, u: Vertex, v: Vertex) -> bool {
        if self.has_edge(u, v) {
            self.adj[u].remove(v);
            self.adj[v].remove(u);
            self.edge_count -= 1;
            true
        } else {
            false
        }
    }

    /// Subgraph induced on `keep`, relabelled densely in ascending order.
    /// Returns the graph and the map from new ids to old ids.
    pub fn induced_subgraph(&self, keep: &Bitset) -> (Graph, Vec<Vertex>) {
        let old: Vec<Vertex> = keep.iter().collect();
        let mut new_id = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in old.iter().enumerate() {
            new_id[v] = i;
        }
        let mut g = Graph::new(old.len());
        for (i, &v) in old.iter().enumerate() {
            for w in self.adj[v].intersection(keep).iter() {
                if new_id[w] > i {
                    g.add_edge(i, new_id[w]);
                }
            }
        }
        (g, old)
    }

    /// Number of edges with both ends in `set`.
    pub fn edges_within(&self, set: &Bitset) -> usize {
        set.iter().map(|v| self.adj[v].intersection_len(set)).sum::<usize>() / 2
    }

    /// True iff `path` (listed in order) is an induced path of the graph.
    pub fn is_induced_path(&self, path: &[Vertex]) -> bool {
        for (i, &a) in path.iter().enumerate() {
            if a >= self.vertex_count() {
                return false;
            }
            for (j, &b) in path.iter().enumerate().skip(i + 1) {
                if a == b || self.has_edge(a, b) != (j == i + 1) {
                    return false;
                }
            }
        }
        true
    }

    /// True iff `cycle` (listed in cyclic order, length ≥ 3) is an induced cycle.
    pub fn is_induced_cycle(&self, cycle: &[Vertex]) -> bool {
        let k = cycle.len();
        if k < 3 {
            return false;
        }
        for i in 0..k {
            if cycle[i] >= self.vertex_count() {
                return false;
            }
            for j in i + 1..k {
                let consecutive = j == i + 1 || (i == 0 && j == k - 1);
                if cycle[i] == cycle[j] || self.has_edge(cycle[i], cycle[j]) != consecutive {
                    return false;
                }
            }
        }
        true
    }
}
