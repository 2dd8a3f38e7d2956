//! Uniform rooted trees inside a host: `t`-bad vertices, shrinking, greedy
//! disjointification, path-induced uniform tree search and the limb edge
//! audit.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::Pow;
use rayon::prelude::*;
use thiserror::Error;

use crate::bitset::Bitset;
use crate::graph::{Graph, Vertex};
use crate::search::{find_biclique_budgeted, Budget, SearchOutcome};
use crate::tree::{is_uniform, RootedTree, TreeError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum UniformError {
    #[error("vertex {0} lies inside the tree")]
    InsideTree(Vertex),
    #[error("tree is not uniform")]
    NotUniform,
    #[error("tree is not ({zeta}, {eta})-uniform")]
    WrongUniformity { zeta: usize, eta: usize },
    #[error("fan-out {fan} is below the required {needed}")]
    FanTooSmall { fan: usize, needed: usize },
    #[error("vertex {0} is t-bad for the tree")]
    Bad(Vertex),
    #[error("t = {tt} does not divide zeta = {zeta}")]
    Divisibility { tt: usize, zeta: usize },
    #[error("parameter out of range: {0}")]
    Parameter(&'static str),
    #[error("root {0} lies in another tree")]
    SharedRoot(Vertex),
    #[error("greedy step failed for tree {0}")]
    Greedy(usize),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// `(ζ, η)` of a uniform tree; a one-vertex tree reports `(0, 0)`.
pub fn uniform_params(t: &RootedTree) -> Option<(usize, usize)> {
    let zeta = t.children(t.root()).len();
    let eta = t.height();
    is_uniform(t, zeta, eta).then_some((zeta, eta))
}

/// Outcome of a badness test. `witness_parent` is set iff the subject is bad.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BadnessReport {
    pub subject: Vertex,
    pub witness_parent: Option<Vertex>,
    /// Neighbours of the subject among the witness's children.
    pub adjacent: usize,
    /// The threshold `(t−1)ζ/t` as a numerator and denominator.
    pub threshold: (usize, usize),
}

impl BadnessReport {
    pub fn is_bad(&self) -> bool {
        self.witness_parent.is_some()
    }
}

/// `count > (t−1)·fan/t`, compared exactly.
#[inline]
pub fn exceeds_fraction(count: usize, fan: usize, tt: usize) -> bool {
    (count as u128) * (tt as u128) > ((tt as u128) - 1) * (fan as u128)
}

/// Reports the smallest tree vertex `w` such that `u` sees more than
/// `(t−1)ζ/t` of the children of `w`.
pub fn is_t_bad(g: &Graph, t: &RootedTree, tt: usize, u: Vertex) -> Result<BadnessReport, UniformError> {
    if tt == 0 {
        return Err(UniformError::Parameter("t must be positive"));
    }
    if t.contains(u) {
        return Err(UniformError::InsideTree(u));
    }
    let (zeta, _) = uniform_params(t).ok_or(UniformError::NotUniform)?;
    let nbrs = g.neighbors(u);
    let threshold = ((tt - 1) * zeta, tt);
    for w in t.members() {
        let kids = t.children(w);
        if kids.is_empty() {
            continue;
        }
        let adjacent = kids.iter().filter(|&&c| nbrs.contains(c)).count();
        if exceeds_fraction(adjacent, kids.len(), tt) {
            return Ok(BadnessReport { subject: u, witness_parent: Some(w), adjacent, threshold });
        }
    }
    Ok(BadnessReport { subject: u, witness_parent: None, adjacent: 0, threshold })
}

/// A `(zeta, h)`-uniform rooted subtree of the uniform tree `t` (same root,
/// same height) that uses no vertex of `forbidden` apart from the root.
/// Children are kept in ascending id order among those whose own subtree can
/// still be completed, so the search is exact, not greedy.
pub fn prune_uniform(t: &RootedTree, zeta: usize, forbidden: &Bitset) -> Option<RootedTree> {
    let eta = t.height();
    let mut ok: BTreeMap<Vertex, bool> = BTreeMap::new();
    for &v in t.bfs_order().iter().rev() {
        let depth = t.depth(v).expect("member");
        let usable = v == t.root() || !forbidden.contains(v);
        let good = usable
            && if depth == eta {
                true
            } else {
                t.children(v).iter().filter(|c| ok[c]).count() >= zeta
            };
        ok.insert(v, good);
    }
    if !ok[&t.root()] {
        return None;
    }
    let mut pairs = Vec::new();
    let mut stack = vec![t.root()];
    while let Some(v) = stack.pop() {
        if t.depth(v) == Some(eta) {
            continue;
        }
        for &c in t.children(v).iter().filter(|c| ok[c]).take(zeta) {
            pairs.push((c, v));
            stack.push(c);
        }
    }
    Some(RootedTree::from_parents(t.root(), pairs).expect("subtree of a tree"))
}

/// Given a `(t·ζ, η)`-uniform tree and a vertex `u` that is not `t`-bad,
/// returns a `(ζ, η)`-uniform subtree on which `u` has no neighbour except
/// possibly the root.
pub fn shrink(g: &Graph, t: &RootedTree, tt: usize, zeta: usize, u: Vertex) -> Result<RootedTree, UniformError> {
    if zeta == 0 || tt == 0 {
        return Err(UniformError::Parameter("t and zeta must be positive"));
    }
    let (fan, eta) = uniform_params(t).ok_or(UniformError::NotUniform)?;
    if eta > 0 && fan != tt * zeta {
        return Err(UniformError::WrongUniformity { zeta: tt * zeta, eta });
    }
    if is_t_bad(g, t, tt, u)?.is_bad() {
        return Err(UniformError::Bad(u));
    }
    prune_uniform(t, zeta, g.neighbors(u)).ok_or(UniformError::Greedy(0))
}

/// Result of [`bad_vertex_set`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BadSet {
    pub vertices: Vec<Vertex>,
    /// `ζ^η (t−1)`.
    pub bound: BigUint,
    pub within_bound: bool,
    /// Set when an audit was requested: whether the host is free of `K_{t,t}`.
    pub kst_free: Option<bool>,
}

/// All `t`-bad vertices outside a `(ζ, η)`-uniform tree, with the comparison
/// against `ζ^η (t−1)`.
pub fn bad_vertex_set(g: &Graph, t: &RootedTree, tt: usize, audit: bool) -> Result<BadSet, UniformError> {
    let (zeta, eta) = uniform_params(t).ok_or(UniformError::NotUniform)?;
    if tt == 0 {
        return Err(UniformError::Parameter("t must be positive"));
    }
    if eta > 0 && zeta % tt != 0 {
        return Err(UniformError::Divisibility { tt, zeta });
    }
    let mut vertices = Vec::new();
    for u in g.vertices().filter(|&u| !t.contains(u)) {
        if is_t_bad(g, t, tt, u)?.is_bad() {
            vertices.push(u);
        }
    }
    let bound = BigUint::from(zeta).pow(eta as u32) * BigUint::from(tt - 1);
    let within_bound = BigUint::from(vertices.len()) <= bound;
    let kst_free = audit.then(|| {
        matches!(find_biclique_budgeted(g, tt, tt, &mut Budget::unlimited()), SearchOutcome::NotFound)
    });
    Ok(BadSet { vertices, bound, within_bound, kst_free })
}

/// Pairwise vertex-disjoint `(ζ, η)`-uniform subtrees, the `i`-th inside
/// `trees[i]` with the same root. Each input must be uniform of height `η`
/// with fan-out at least `k·ζ^{η+1}`.
pub fn disjointify(g: &Graph, trees: &[RootedTree], zeta: usize, eta: usize) -> Result<Vec<RootedTree>, UniformError> {
    if zeta < 2 {
        return Err(UniformError::Parameter("zeta must be at least 2"));
    }
    let k = trees.len();
    let needed = (zeta as u128).checked_pow(eta as u32 + 1).and_then(|z| z.checked_mul(k as u128));
    for (i, t) in trees.iter().enumerate() {
        t.check_in(g)?;
        let (fan, h) = uniform_params(t).ok_or(UniformError::NotUniform)?;
        if h != eta {
            return Err(UniformError::WrongUniformity { zeta: fan, eta });
        }
        if eta > 0 && needed.is_none_or(|n| (fan as u128) < n) {
            return Err(UniformError::FanTooSmall { fan, needed: needed.map_or(usize::MAX, |n| n as usize) });
        }
        for (j, other) in trees.iter().enumerate() {
            if i != j && other.contains(t.root()) {
                return Err(UniformError::SharedRoot(t.root()));
            }
        }
    }
    let mut committed = g.empty_set();
    let mut out = Vec::with_capacity(k);
    for (i, t) in trees.iter().enumerate() {
        let s = prune_uniform(t, zeta, &committed).ok_or(UniformError::Greedy(i))?;
        for v in s.members() {
            committed.insert(v);
        }
        out.push(s);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Path-induced uniform trees

#[derive(Clone)]
struct Task {
    vertex: Vertex,
    depth: usize,
    /// Union of `N[a]` over the strict ancestors `a` of `vertex`.
    forbid: Bitset,
    picked: Vec<Vertex>,
}

struct UniformSearch<'a> {
    g: &'a Graph,
    zeta: usize,
    eta: usize,
    used: Bitset,
    parent: BTreeMap<Vertex, Vertex>,
    done: bool,
}

impl UniformSearch<'_> {
    /// Processes the task stack; restores it before returning `false`.
    fn run(&mut self, tasks: &mut Vec<Task>, budget: &mut Budget) -> bool {
        if !budget.tick() {
            return true;
        }
        let Some(task) = tasks.pop() else {
            self.done = true;
            return true;
        };
        if task.depth == self.eta {
            if self.run(tasks, budget) {
                return true;
            }
            tasks.push(task);
            return false;
        }
        if task.picked.len() == self.zeta {
            let base = tasks.len();
            let mut forbid = task.forbid.clone();
            forbid.union_with(&self.g.closed_neighbors(task.vertex));
            for &c in task.picked.iter().rev() {
                tasks.push(Task { vertex: c, depth: task.depth + 1, forbid: forbid.clone(), picked: Vec::new() });
            }
            if self.run(tasks, budget) {
                return true;
            }
            tasks.truncate(base);
            tasks.push(task);
            return false;
        }
        let mut cand = self.g.neighbors(task.vertex).difference(&task.forbid);
        cand.difference_with(&self.used);
        let floor = task.picked.last().map_or(0, |&v| v + 1);
        let cand: Vec<Vertex> = cand.iter().filter(|&c| c >= floor).collect();
        let missing = self.zeta - task.picked.len();
        if cand.len() < missing {
            tasks.push(task);
            return false;
        }
        for (i, &c) in cand.iter().enumerate() {
            if cand.len() - i < missing {
                break;
            }
            self.used.insert(c);
            self.parent.insert(c, task.vertex);
            let mut next = task.clone();
            next.picked.push(c);
            tasks.push(next);
            if self.run(tasks, budget) {
                return true;
            }
            tasks.pop();
            self.parent.remove(&c);
            self.used.remove(c);
        }
        tasks.push(task);
        false
    }
}

/// Complete backtracking search for a `(ζ, η)`-uniform tree whose root paths
/// are all induced. Siblings' subtrees may be joined by host edges. Without
/// a root, roots are tried in ascending order.
pub fn find_path_induced_uniform(
    g: &Graph,
    zeta: usize,
    eta: usize,
    root: Option<Vertex>,
    budget: &mut Budget,
) -> SearchOutcome<RootedTree> {
    assert!(zeta >= 1, "zeta must be positive");
    let roots: Vec<Vertex> = match root {
        Some(r) if r < g.vertex_count() => vec![r],
        Some(_) => return SearchOutcome::NotFound,
        None => g.vertices().collect(),
    };
    for r in roots {
        if eta > 0 && g.degree(r) < zeta {
            continue;
        }
        let mut search = UniformSearch {
            g,
            zeta,
            eta,
            used: Bitset::from_iter(g.vertex_count(), [r]),
            parent: BTreeMap::new(),
            done: false,
        };
        let mut tasks = vec![Task { vertex: r, depth: 0, forbid: g.empty_set(), picked: Vec::new() }];
        if search.run(&mut tasks, budget) {
            if !search.done {
                return SearchOutcome::BudgetExhausted;
            }
            let t = RootedTree::from_parents(r, search.parent).expect("search builds a tree");
            return SearchOutcome::Found(t);
        }
    }
    SearchOutcome::NotFound
}

// ---------------------------------------------------------------------------
// Limb audit

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeClass {
    A,
    B,
    C,
    D,
}

/// One class total together with the bound it is compared against.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassTotal {
    pub class: EdgeClass,
    pub size: usize,
    pub bound: BigUint,
}

impl ClassTotal {
    pub fn within(&self) -> bool {
        BigUint::from(self.size) <= self.bound
    }
}

#[derive(Clone, Debug)]
pub struct LimbAudit {
    pub zeta_prime: BigUint,
    /// Vertices that root a limb.
    pub limb_roots: Vec<Vertex>,
    /// The limb selected for each root.
    pub limbs: BTreeMap<Vertex, RootedTree>,
    /// Vertices whose limb search ran out of budget; treated as limb-free.
    pub exhausted: Vec<Vertex>,
    /// Every edge `(u, v)` with `u < v`, its head (if any) and class.
    pub edges: Vec<((Vertex, Vertex), Option<Vertex>, EdgeClass)>,
    pub totals: Vec<ClassTotal>,
}

impl LimbAudit {
    pub fn complete(&self) -> bool {
        self.exhausted.is_empty()
    }

    pub fn size(&self, class: EdgeClass) -> usize {
        self.edges.iter().filter(|e| e.2 == class).count()
    }
}

fn factorial(n: usize) -> u32 {
    (1..=n as u32).product()
}

/// Classifies every edge into `A`, `B`, `C` or `D` relative to a limb per
/// limb root. A limb is a `(ζ′, η−1)`-uniform path-induced tree with
/// `ζ′ = t·ζ^{η+1}`. The head of an edge is its smaller end among limb roots.
pub fn edge_partition_audit(g: &Graph, zeta: usize, eta: usize, tt: usize, node_budget: Option<u64>) -> LimbAudit {
    assert!(zeta >= 1 && eta >= 1 && tt >= 1, "parameters must be positive");
    let zeta_prime_big = BigUint::from(tt) * BigUint::from(zeta).pow(eta as u32 + 1);
    let zeta_prime = usize::try_from(&zeta_prime_big).ok();
    let limb_eta = eta - 1;
    let searches: Vec<(Vertex, SearchOutcome<RootedTree>)> = g
        .vertices()
        .into_par_iter()
        .map(|v| {
            let outcome = match zeta_prime {
                _ if limb_eta == 0 => SearchOutcome::Found(RootedTree::singleton(v)),
                Some(zp) if zp < g.vertex_count() => {
                    find_path_induced_uniform(g, zp, limb_eta, Some(v), &mut Budget::from_option(node_budget))
                }
                _ => SearchOutcome::NotFound,
            };
            (v, outcome)
        })
        .collect();
    let mut limbs = BTreeMap::new();
    let mut exhausted = Vec::new();
    for (v, outcome) in searches {
        match outcome {
            SearchOutcome::Found(t) => {
                limbs.insert(v, t);
            }
            SearchOutcome::BudgetExhausted => exhausted.push(v),
            SearchOutcome::NotFound => {}
        }
    }
    let mut edges = Vec::with_capacity(g.edge_count());
    for (a, b) in g.edges() {
        let head = [a, b].into_iter().find(|v| limbs.contains_key(v));
        let class = match head {
            None => EdgeClass::A,
            Some(v) => {
                let u = if v == a { b } else { a };
                let limb = &limbs[&v];
                if limb.contains(u) {
                    EdgeClass::D
                } else if is_t_bad(g, limb, tt, u).expect("limbs are uniform").is_bad() {
                    EdgeClass::C
                } else {
                    EdgeClass::B
                }
            }
        };
        edges.push(((a, b), head, class));
    }
    let n = BigUint::from(g.vertex_count());
    let p = BigUint::from(limbs.len());
    let q = BigUint::from(g.vertex_count() - limbs.len());
    let zt = &zeta_prime_big * BigUint::from(tt);
    let bounds = [
        (EdgeClass::A, zt.pow(factorial(eta)) * q),
        (EdgeClass::B, BigUint::from(zeta.saturating_sub(1)) * n),
        (
            EdgeClass::C,
            zeta_prime_big.clone().pow(limb_eta as u32) * BigUint::from(tt - 1) * &p,
        ),
        (EdgeClass::D, &zeta_prime_big * &p),
    ];
    let mut audit = LimbAudit {
        zeta_prime: zeta_prime_big,
        limb_roots: limbs.keys().copied().collect(),
        limbs,
        exhausted,
        edges,
        totals: Vec::new(),
    };
    audit.totals = bounds
        .into_iter()
        .map(|(class, bound)| ClassTotal { class, size: audit.size(class), bound })
        .collect();
    audit
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificate::validate_path_induced;

    fn star(center: Vertex, leaves: &[Vertex]) -> RootedTree {
        RootedTree::from_parents(center, leaves.iter().map(|&l| (l, center))).unwrap()
    }

    fn host_with(n: usize, edges: &[(usize, usize)]) -> Graph {
        Graph::from_edges(n, edges.iter().copied()).unwrap()
    }

    #[test]
    fn badness_thresholds() {
        // star 0 -> 1..=4, outside vertex 5
        let g = host_with(6, &[(0, 1), (0, 2), (0, 3), (0, 4), (5, 1), (5, 2), (5, 3)]);
        let t = star(0, &[1, 2, 3, 4]);
        let r = is_t_bad(&g, &t, 2, 5).unwrap();
        assert!(r.is_bad());
        assert_eq!(r.witness_parent, Some(0));
        let g2 = host_with(6, &[(0, 1), (0, 2), (0, 3), (0, 4), (5, 1), (5, 2)]);
        assert!(!is_t_bad(&g2, &t, 2, 5).unwrap().is_bad());
        assert_eq!(is_t_bad(&g2, &t, 2, 1), Err(UniformError::InsideTree(1)));

        let mut edges: Vec<(usize, usize)> = (1..=6).map(|c| (0, c)).collect();
        edges.extend((1..=5).map(|c| (7, c)));
        let g3 = host_with(8, &edges);
        let t3 = star(0, &[1, 2, 3, 4, 5, 6]);
        assert!(is_t_bad(&g3, &t3, 3, 7).unwrap().is_bad());
    }

    #[test]
    fn shrink_forced_choice() {
        let g = host_with(6, &[(0, 1), (0, 2), (0, 3), (0, 4), (5, 1), (5, 2)]);
        let t = star(0, &[1, 2, 3, 4]);
        let s = shrink(&g, &t, 2, 2, 5).unwrap();
        assert_eq!(s.children(0), &[3, 4]);
        let bad = host_with(6, &[(0, 1), (0, 2), (0, 3), (0, 4), (5, 1), (5, 2), (5, 3)]);
        assert_eq!(shrink(&bad, &t, 2, 2, 5), Err(UniformError::Bad(5)));
        assert!(matches!(shrink(&g, &t, 2, 1, 5), Err(UniformError::WrongUniformity { .. })));
    }

    #[test]
    fn disjointify_overlapping_stars() {
        // Two stars with 8 leaves each sharing leaves 4..8.
        let mut edges = Vec::new();
        let a: Vec<usize> = (2..10).collect();
        let b: Vec<usize> = (6..14).collect();
        edges.extend(a.iter().map(|&l| (0, l)));
        edges.extend(b.iter().map(|&l| (1, l)));
        let g = host_with(14, &edges);
        let out = disjointify(&g, &[star(0, &a), star(1, &b)], 2, 1).unwrap();
        assert_eq!(out.len(), 2);
        let s0 = out[0].member_set(14);
        let s1 = out[1].member_set(14);
        assert!(s0.is_disjoint(&s1));
        assert!(out.iter().all(|t| is_uniform(t, 2, 1)));
    }

    #[test]
    fn bad_set_on_small_star() {
        let g = Graph::cycle(6);
        let t = star(1, &[0, 2]);
        let r = bad_vertex_set(&g, &t, 2, true).unwrap();
        assert_eq!(r.kst_free, Some(true));
        assert!(r.within_bound);
        assert!(matches!(bad_vertex_set(&g, &t, 3, false), Err(UniformError::Divisibility { .. })));
        let lonely = bad_vertex_set(&Graph::path(3), &RootedTree::from_parents(1, [(0, 1), (2, 1)]).unwrap(), 2, false).unwrap();
        assert!(lonely.vertices.is_empty());
    }

    #[test]
    fn path_induced_search() {
        let p3 = Graph::path(3);
        let t = find_path_induced_uniform(&p3, 2, 1, None, &mut Budget::unlimited()).found().unwrap();
        assert!(is_uniform(&t, 2, 1));
        assert!(find_path_induced_uniform(&Graph::cycle(4), 2, 2, None, &mut Budget::unlimited()) == SearchOutcome::NotFound);
        // complete binary tree of depth 2 plus chords between sibling subtrees
        let mut g = host_with(7, &[(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6)]);
        g.add_edge(3, 5);
        let t = find_path_induced_uniform(&g, 2, 2, Some(0), &mut Budget::unlimited()).found().unwrap();
        assert!(validate_path_induced(&g, &t));
        assert!(is_uniform(&t, 2, 2));
    }

    #[test]
    fn audit_covers_edges() {
        let g = Graph::new(4);
        let a = edge_partition_audit(&g, 2, 2, 2, None);
        assert!(a.edges.is_empty() && a.limb_roots.is_empty());
        let c5 = Graph::cycle(5);
        let a = edge_partition_audit(&c5, 2, 2, 2, None);
        assert_eq!(a.size(EdgeClass::A), 5);
        assert!(a.totals.iter().all(|t| t.within()));
    }
}
