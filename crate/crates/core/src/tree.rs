//! Rooted trees living inside a host graph, and small abstract pattern trees.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset::Bitset;
use crate::graph::{Graph, Vertex};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TreeError {
    #[error("root {0} is given a parent")]
    RootHasParent(Vertex),
    #[error("vertex {0} does not reach the root")]
    Detached(Vertex),
    #[error("vertex {0} listed twice")]
    Duplicate(Vertex),
    #[error("tree edge {0}-{1} is not a host edge")]
    MissingHostEdge(Vertex, Vertex),
    #[error("vertex {0} is not in the tree")]
    NotMember(Vertex),
    #[error("vertex {0} is already in the tree")]
    AlreadyMember(Vertex),
    #[error("pattern edge {0}-{1} is invalid")]
    BadPatternEdge(usize, usize),
    #[error("pattern contains a cycle")]
    PatternCycle,
    #[error("pattern root {0} out of range")]
    PatternRoot(usize),
}

/// A rooted tree whose vertices are host vertex ids.
///
/// Children are kept in ascending id order, and `order` lists members in BFS
/// order from the root with that child order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RootedTree {
    root: Vertex,
    parent: BTreeMap<Vertex, Vertex>,
    children: BTreeMap<Vertex, Vec<Vertex>>,
    depth: BTreeMap<Vertex, usize>,
    order: Vec<Vertex>,
}

impl RootedTree {
    pub fn singleton(root: Vertex) -> Self {
        RootedTree {
            root,
            parent: BTreeMap::new(),
            children: BTreeMap::from([(root, Vec::new())]),
            depth: BTreeMap::from([(root, 0)]),
            order: vec![root],
        }
    }

    /// Builds a tree from `(child, parent)` pairs.
    pub fn from_parents<I>(root: Vertex, pairs: I) -> Result<Self, TreeError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut parent = BTreeMap::new();
        for (c, p) in pairs {
            if c == root {
                return Err(TreeError::RootHasParent(root));
            }
            if parent.insert(c, p).is_some() {
                return Err(TreeError::Duplicate(c));
            }
        }
        let mut children: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
        children.insert(root, Vec::new());
        for &c in parent.keys() {
            children.entry(c).or_default();
        }
        for (&c, &p) in &parent {
            match children.get_mut(&p) {
                Some(list) => list.push(c),
                None => return Err(TreeError::Detached(c)),
            }
        }
        let mut depth = BTreeMap::new();
        let mut order = Vec::with_capacity(parent.len() + 1);
        let mut queue = VecDeque::from([(root, 0usize)]);
        while let Some((v, d)) = queue.pop_front() {
            depth.insert(v, d);
            order.push(v);
            for &c in &children[&v] {
                queue.push_back((c, d + 1));
            }
        }
        if order.len() != parent.len() + 1 {
            let stray = parent.keys().find(|c| !depth.contains_key(c)).copied();
            return Err(TreeError::Detached(stray.unwrap_or(root)));
        }
        Ok(RootedTree {
            root,
            parent,
            children,
            depth,
            order,
        })
    }

    #[inline]
    pub fn root(&self) -> Vertex {
        self.root
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.depth.contains_key(&v)
    }

    pub fn parent(&self, v: Vertex) -> Option<Vertex> {
        self.parent.get(&v).copied()
    }

    pub fn children(&self, v: Vertex) -> &[Vertex] {
        self.children.get(&v).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn depth(&self, v: Vertex) -> Option<usize> {
        self.depth.get(&v).copied()
    }

    pub fn height(&self) -> usize {
        self.depth.values().copied().max().unwrap_or(0)
    }

    /// Maximum number of children of a vertex.
    pub fn spread(&self) -> usize {
        self.children.values().map(Vec::len).max().unwrap_or(0)
    }

    /// Members in BFS order from the root.
    pub fn bfs_order(&self) -> &[Vertex] {
        &self.order
    }

    /// Members in ascending id order.
    pub fn members(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.depth.keys().copied()
    }

    pub fn member_set(&self, capacity: usize) -> Bitset {
        Bitset::from_iter(capacity, self.members())
    }

    /// `(child, parent)` pairs in ascending child order.
    pub fn parent_pairs(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.parent.iter().map(|(&c, &p)| (c, p))
    }

    pub fn leaves(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.children
            .iter()
            .filter(|(_, c)| c.is_empty())
            .map(|(&v, _)| v)
    }

    /// Vertices of the path from the root to `v`, root first.
    pub fn root_path(&self, v: Vertex) -> Vec<Vertex> {
        let mut path = vec![v];
        let mut cur = v;
        while let Some(p) = self.parent(cur) {
            path.push(p);
            cur = p;
        }
        path.reverse();
        path
    }

    /// The subtree of descendants of `v`, rooted at `v`.
    pub fn subtree_at(&self, v: Vertex) -> Result<RootedTree, TreeError> {
        if !self.contains(v) {
            return Err(TreeError::NotMember(v));
        }
        let mut pairs = Vec::new();
        let mut stack = vec![v];
        while let Some(x) = stack.pop() {
            for &c in self.children(x) {
                pairs.push((c, x));
                stack.push(c);
            }
        }
        RootedTree::from_parents(v, pairs)
    }

    /// Same root, and every parent link of `self` is a parent link of `other`.
    pub fn is_rooted_subtree_of(&self, other: &RootedTree) -> bool {
        self.root == other.root
            && self
                .parent
                .iter()
                .all(|(c, p)| other.parent.get(c) == Some(p))
    }

    /// Returns a copy with `child` attached below `parent`.
    pub fn with_child(&self, parent: Vertex, child: Vertex) -> Result<RootedTree, TreeError> {
        if !self.contains(parent) {
            return Err(TreeError::NotMember(parent));
        }
        if self.contains(child) {
            return Err(TreeError::AlreadyMember(child));
        }
        RootedTree::from_parents(
            self.root,
            self.parent_pairs().chain(std::iter::once((child, parent))),
        )
    }

    /// Checks that every tree edge is a host edge and every id is in range.
    pub fn check_in(&self, g: &Graph) -> Result<(), TreeError> {
        if self.root >= g.vertex_count() {
            return Err(TreeError::NotMember(self.root));
        }
        for (c, p) in self.parent_pairs() {
            if !g.has_edge(c, p) {
                return Err(TreeError::MissingHostEdge(p, c));
            }
        }
        Ok(())
    }
}

/// True iff every non-leaf has exactly `zeta` children and every leaf sits at
/// depth exactly `eta`. With `eta = 0` only the one-vertex tree qualifies.
pub fn is_uniform(t: &RootedTree, zeta: usize, eta: usize) -> bool {
    t.bfs_order().iter().all(|&v| {
        let kids = t.children(v).len();
        if kids == 0 {
            t.depth(v) == Some(eta)
        } else {
            kids == zeta
        }
    })
}

/// Number of vertices of a `(zeta, eta)`-uniform tree: `1 + ζ + … + ζ^η`.
pub fn uniform_size(zeta: usize, eta: usize) -> usize {
    let mut total = 1usize;
    let mut level = 1usize;
    for _ in 0..eta {
        level = level.saturating_mul(zeta);
        total = total.saturating_add(level);
    }
    total
}

#[derive(Deserialize)]
struct RawPattern {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    #[serde(default)]
    root: usize,
}

/// A small abstract forest (usually a tree) with a designated root.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawPattern")]
pub struct Pattern {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    root: usize,
}

impl TryFrom<RawPattern> for Pattern {
    type Error = TreeError;

    fn try_from(raw: RawPattern) -> Result<Self, TreeError> {
        Pattern::new(raw.vertex_count, raw.edges, raw.root)
    }
}

impl Pattern {
    /// Validates that the edges form a simple forest on `0..vertex_count`.
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>, root: usize) -> Result<Self, TreeError> {
        if vertex_count > 0 && root >= vertex_count {
            return Err(TreeError::PatternRoot(root));
        }
        let mut comp: Vec<usize> = (0..vertex_count).collect();
        fn find(comp: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while comp[r] != r {
                r = comp[r];
            }
            comp[x] = r;
            r
        }
        for &(u, v) in &edges {
            if u >= vertex_count || v >= vertex_count || u == v {
                return Err(TreeError::BadPatternEdge(u, v));
            }
            let (a, b) = (find(&mut comp, u), find(&mut comp, v));
            if a == b {
                return Err(TreeError::PatternCycle);
            }
            comp[a] = b;
        }
        Ok(Pattern {
            vertex_count,
            edges,
            root,
        })
    }

    pub fn path(k: usize) -> Self {
        Pattern::new(k, (1..k).map(|v| (v - 1, v)).collect(), 0).expect("path is a tree")
    }

    /// Star with `leaves` leaves, rooted at the centre 0.
    pub fn star(leaves: usize) -> Self {
        Pattern::new(leaves + 1, (1..=leaves).map(|v| (0, v)).collect(), 0).expect("star is a tree")
    }

    /// Spider with `legs` legs of `len` edges each, rooted at the body 0.
    pub fn spider(legs: usize, len: usize) -> Self {
        let mut edges = Vec::new();
        let mut next = 1;
        for _ in 0..legs {
            let mut prev = 0;
            for _ in 0..len {
                edges.push((prev, next));
                prev = next;
                next += 1;
            }
        }
        Pattern::new(next, edges, 0).expect("spider is a tree")
    }

    /// Converts a rooted tree (over arbitrary ids) into a pattern, numbering
    /// vertices in BFS order so the root becomes 0. Also returns the id map.
    pub fn from_rooted(t: &RootedTree) -> (Self, Vec<Vertex>) {
        let ids: Vec<Vertex> = t.bfs_order().to_vec();
        let index: BTreeMap<Vertex, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let edges = t.parent_pairs().map(|(c, p)| (index[&p], index[&c])).collect();
        (Pattern::new(ids.len(), edges, 0).expect("rooted tree is a tree"), ids)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn with_root(&self, root: usize) -> Result<Self, TreeError> {
        Pattern::new(self.vertex_count, self.edges.clone(), root)
    }

    pub fn is_tree(&self) -> bool {
        self.vertex_count > 0 && self.edges.len() + 1 == self.vertex_count
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in adj.iter_mut() {
            list.sort_unstable();
        }
        adj
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.iter().any(|&(a, b)| (a, b) == (u, v) || (a, b) == (v, u))
    }

    /// BFS order covering every component: the root's component first, then
    /// the remaining components from their smallest vertex. Each entry carries
    /// the vertex and its BFS parent.
    pub fn bfs_with_parents(&self) -> Vec<(usize, Option<usize>)> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.vertex_count];
        let mut out = Vec::with_capacity(self.vertex_count);
        let starts = std::iter::once(self.root).chain(0..self.vertex_count);
        for s in starts {
            if self.vertex_count == 0 || seen[s] {
                continue;
            }
            seen[s] = true;
            let mut queue = VecDeque::from([(s, None)]);
            while let Some((v, p)) = queue.pop_front() {
                out.push((v, p));
                for &w in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back((w, Some(v)));
                    }
                }
            }
        }
        out
    }

    /// Distance of each vertex from the root (`usize::MAX` if unreachable).
    pub fn depths(&self) -> Vec<usize> {
        let mut depth = vec![usize::MAX; self.vertex_count];
        for (v, p) in self.bfs_with_parents() {
            depth[v] = match p {
                Some(p) => depth[p] + 1,
                None if v == self.root => 0,
                None => usize::MAX,
            };
        }
        depth
    }

    /// Height of the root's component.
    pub fn height(&self) -> usize {
        self.depths().into_iter().filter(|&d| d != usize::MAX).max().unwrap_or(0)
    }

    /// Maximum number of children in the rooted tree.
    pub fn spread(&self) -> usize {
        let mut kids = vec![0usize; self.vertex_count];
        for (_, p) in self.bfs_with_parents() {
            if let Some(p) = p {
                kids[p] += 1;
            }
        }
        kids.into_iter().max().unwrap_or(0)
    }

    pub fn as_graph(&self) -> Graph {
        Graph::from_edges(self.vertex_count, self.edges.iter().copied()).expect("pattern is simple")
    }

    /// Deletes vertex `p`, renumbering the rest in ascending order.
    /// Returns the smaller pattern (rooted at the image of `new_root`) and the
    /// map from new ids to old ids.
    pub fn without_vertex(&self, p: usize, new_root: usize) -> (Pattern, Vec<usize>) {
        let old: Vec<usize> = (0..self.vertex_count).filter(|&v| v != p).collect();
        let idx = |v: usize| if v < p { v } else { v - 1 };
        let edges = self
            .edges
            .iter()
            .filter(|&&(a, b)| a != p && b != p)
            .map(|&(a, b)| (idx(a), idx(b)))
            .collect();
        let pat = Pattern::new(old.len(), edges, idx(new_root)).expect("subforest of a forest");
        (pat, old)
    }
}
