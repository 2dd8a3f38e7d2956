//! Exhaustive searches: bicliques, `τ`, induced trees, long induced cycles,
//! plus brute-force subset oracles for tiny graphs.
//!
//! Every backtracking search takes a [`Budget`] counting search nodes. When
//! the budget runs out the result is [`SearchOutcome::BudgetExhausted`], never
//! a silent "not found".

use thiserror::Error;

use crate::bitset::Bitset;
use crate::certificate::{BicliqueWitness, InducedEmbedding};
use crate::graph::{Graph, Vertex};
use crate::tree::Pattern;

/// A node budget shared by one search.
#[derive(Clone, Debug)]
pub struct Budget {
    limit: Option<u64>,
    used: u64,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget { limit: None, used: 0 }
    }

    pub fn nodes(limit: u64) -> Self {
        Budget { limit: Some(limit), used: 0 }
    }

    pub fn from_option(limit: Option<u64>) -> Self {
        Budget { limit, used: 0 }
    }

    /// Charges one node. Returns false once the limit is passed.
    #[inline]
    pub fn tick(&mut self) -> bool {
        self.used += 1;
        self.limit.is_none_or(|l| self.used <= l)
    }

    pub fn exhausted(&self) -> bool {
        self.limit.is_some_and(|l| self.used > l)
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn limit(&self) -> Option<u64> {
        self.limit
    }

    /// A fresh budget with the same limit.
    pub fn fresh(&self) -> Budget {
        Budget::from_option(self.limit)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome<T> {
    Found(T),
    NotFound,
    BudgetExhausted,
}

impl<T> SearchOutcome<T> {
    pub fn found(self) -> Option<T> {
        match self {
            SearchOutcome::Found(x) => Some(x),
            _ => None,
        }
    }

    pub fn as_found(&self) -> Option<&T> {
        match self {
            SearchOutcome::Found(x) => Some(x),
            _ => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, SearchOutcome::Found(_))
    }

    pub fn is_exhausted(&self) -> bool {
        matches!(self, SearchOutcome::BudgetExhausted)
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> SearchOutcome<U> {
        match self {
            SearchOutcome::Found(x) => SearchOutcome::Found(f(x)),
            SearchOutcome::NotFound => SearchOutcome::NotFound,
            SearchOutcome::BudgetExhausted => SearchOutcome::BudgetExhausted,
        }
    }
}

/// Result of a backtracking step: keep going, or stop with the current state.
enum Step {
    Continue,
    Stop,
}

// ---------------------------------------------------------------------------
// Bicliques

/// Complete search for a `K_{s,t}` subgraph.
pub fn find_biclique(g: &Graph, s: usize, t: usize) -> Option<BicliqueWitness> {
    find_biclique_budgeted(g, s, t, &mut Budget::unlimited()).found()
}

/// Enumerates the smaller side `A` in ascending order while tracking the
/// common neighbourhood of `A`; the other side is read off that neighbourhood.
/// When `s == t`, only bicliques with `min(A) < min(B)` are visited.
pub fn find_biclique_budgeted(
    g: &Graph,
    s: usize,
    t: usize,
    budget: &mut Budget,
) -> SearchOutcome<BicliqueWitness> {
    assert!(s >= 1 && t >= 1, "biclique sides must be nonempty");
    let (small, large) = (s.min(t), s.max(t));
    if small + large > g.vertex_count() {
        return SearchOutcome::NotFound;
    }
    let mut chosen = Vec::with_capacity(small);
    let common = Bitset::full(g.vertex_count());
    let mut found = None;
    let step = biclique_rec(g, small, large, s == t, &mut chosen, &common, budget, &mut found);
    match (found, step) {
        (Some((a, b)), _) => {
            let w = if s <= t { BicliqueWitness::new(a, b) } else { BicliqueWitness::new(b, a) };
            SearchOutcome::Found(w)
        }
        (None, Step::Stop) => SearchOutcome::BudgetExhausted,
        (None, Step::Continue) => SearchOutcome::NotFound,
    }
}

#[allow(clippy::too_many_arguments)]
fn biclique_rec(
    g: &Graph,
    small: usize,
    large: usize,
    symmetric: bool,
    chosen: &mut Vec<Vertex>,
    common: &Bitset,
    budget: &mut Budget,
    found: &mut Option<(Vec<Vertex>, Vec<Vertex>)>,
) -> Step {
    if !budget.tick() {
        return Step::Stop;
    }
    if chosen.len() == small {
        let mut other = common.clone();
        if symmetric {
            for v in 0..=chosen[0] {
                other.remove(v);
            }
        }
        if other.len() >= large {
            *found = Some((chosen.clone(), other.iter().take(large).collect()));
            return Step::Stop;
        }
        return Step::Continue;
    }
    let start = chosen.last().map_or(0, |&v| v + 1);
    for v in start..g.vertex_count() {
        let next = common.intersection(g.neighbors(v));
        let mut usable = next.len();
        if symmetric {
            let floor = chosen.first().copied().unwrap_or(v);
            usable = next.iter().filter(|&w| w > floor).count();
        }
        if usable < large {
            continue;
        }
        chosen.push(v);
        let step = biclique_rec(g, small, large, symmetric, chosen, &next, budget, found);
        chosen.pop();
        if let Step::Stop = step {
            return Step::Stop;
        }
    }
    Step::Continue
}

/// Largest `t` with `K_{t,t} ⊆ g`.
pub fn tau(g: &Graph) -> usize {
    let (t, exhausted) = tau_budgeted(g, &mut Budget::unlimited());
    debug_assert!(!exhausted);
    t
}

/// `τ` with a node budget. Returns the best lower bound and whether the
/// budget ran out before the answer was confirmed.
pub fn tau_budgeted(g: &Graph, budget: &mut Budget) -> (usize, bool) {
    let mut best = 0;
    loop {
        let next = best + 1;
        if 2 * next > g.vertex_count() || next > g.max_degree() {
            return (best, false);
        }
        match find_biclique_budgeted(g, next, next, budget) {
            SearchOutcome::Found(_) => best = next,
            SearchOutcome::NotFound => return (best, false),
            SearchOutcome::BudgetExhausted => return (best, true),
        }
    }
}

// ---------------------------------------------------------------------------
// Induced trees

/// Complete search for an induced copy of `h` (a forest), optionally pinning
/// the root of `h` to `root_image`.
pub fn find_induced_tree(g: &Graph, h: &Pattern, root_image: Option<Vertex>) -> Option<InducedEmbedding> {
    find_induced_tree_budgeted(g, h, root_image, None, &mut Budget::unlimited()).found()
}

/// As [`find_induced_tree`], restricted to the host vertices in `allowed`.
///
/// Pattern vertices are placed in BFS order from the root. A candidate for a
/// vertex with parent `p` must be adjacent to the image of `p` and to no
/// other image placed so far; a candidate for the first vertex of a further
/// component must be adjacent to no image at all.
pub fn find_induced_tree_budgeted(
    g: &Graph,
    h: &Pattern,
    root_image: Option<Vertex>,
    allowed: Option<&Bitset>,
    budget: &mut Budget,
) -> SearchOutcome<InducedEmbedding> {
    let k = h.vertex_count();
    if k == 0 {
        return SearchOutcome::Found(InducedEmbedding { pattern: h.clone(), image: Vec::new() });
    }
    let n = g.vertex_count();
    let allowed = allowed.cloned().unwrap_or_else(|| Bitset::full(n));
    if let Some(r) = root_image {
        if r >= n || !allowed.contains(r) {
            return SearchOutcome::NotFound;
        }
    }
    let order = h.bfs_with_parents();
    let mut state = TreeSearch {
        g,
        order: &order,
        root_image,
        allowed: &allowed,
        image: vec![usize::MAX; k],
        placed: Vec::with_capacity(k),
        used: Bitset::new(n),
    };
    match state.extend(budget) {
        Step::Stop if state.placed.len() == k => SearchOutcome::Found(InducedEmbedding {
            pattern: h.clone(),
            image: state.image,
        }),
        Step::Stop => SearchOutcome::BudgetExhausted,
        Step::Continue => SearchOutcome::NotFound,
    }
}

struct TreeSearch<'a> {
    g: &'a Graph,
    order: &'a [(usize, Option<usize>)],
    root_image: Option<Vertex>,
    allowed: &'a Bitset,
    image: Vec<Vertex>,
    placed: Vec<usize>,
    used: Bitset,
}

impl TreeSearch<'_> {
    fn extend(&mut self, budget: &mut Budget) -> Step {
        if !budget.tick() {
            return Step::Stop;
        }
        let pos = self.placed.len();
        if pos == self.order.len() {
            return Step::Stop;
        }
        let (x, parent) = self.order[pos];
        let mut cand = match parent {
            Some(p) => self.g.neighbors(self.image[p]).intersection(self.allowed),
            None if pos == 0 => match self.root_image {
                Some(r) => Bitset::from_iter(self.g.vertex_count(), [r]),
                None => self.allowed.clone(),
            },
            None => self.allowed.clone(),
        };
        cand.difference_with(&self.used);
        for &y in &self.placed {
            if Some(y) != parent {
                cand.difference_with(self.g.neighbors(self.image[y]));
            }
        }
        for c in cand.iter() {
            self.image[x] = c;
            self.placed.push(x);
            self.used.insert(c);
            if let Step::Stop = self.extend(budget) {
                return Step::Stop;
            }
            self.used.remove(c);
            self.placed.pop();
            self.image[x] = usize::MAX;
        }
        Step::Continue
    }
}

// ---------------------------------------------------------------------------
// Long induced cycles

/// Complete search for an induced cycle with more than `ell` vertices.
pub fn find_long_induced_cycle(g: &Graph, ell: usize) -> Option<Vec<Vertex>> {
    find_long_induced_cycle_budgeted(g, ell, &mut Budget::unlimited()).found()
}

/// Grows induced paths from each start `s`, using only vertices above `s`,
/// and closes a cycle whenever the path end returns to a neighbour of `s`.
/// Each induced cycle is reached from its smallest vertex.
pub fn find_long_induced_cycle_budgeted(
    g: &Graph,
    ell: usize,
    budget: &mut Budget,
) -> SearchOutcome<Vec<Vertex>> {
    assert!(ell >= 3, "cycle length threshold must be at least 3");
    let n = g.vertex_count();
    for s in 0..n {
        let mut above = Bitset::full(n);
        for v in 0..=s {
            above.remove(v);
        }
        for p1 in g.neighbors(s).intersection(&above).iter() {
            let mut path = vec![s, p1];
            match cycle_rec(g, ell, &above, &mut path, &Bitset::new(n), budget) {
                SearchOutcome::NotFound => {}
                other => return other,
            }
        }
    }
    SearchOutcome::NotFound
}

/// `inner` is the union of `N[p]` over the path vertices strictly between the
/// start and the last vertex.
fn cycle_rec(
    g: &Graph,
    ell: usize,
    above: &Bitset,
    path: &mut Vec<Vertex>,
    inner: &Bitset,
    budget: &mut Budget,
) -> SearchOutcome<Vec<Vertex>> {
    if !budget.tick() {
        return SearchOutcome::BudgetExhausted;
    }
    let s = path[0];
    let last = *path.last().expect("path has a start");
    let mut cand = g.neighbors(last).intersection(above);
    cand.difference_with(inner);
    let mut deeper = inner.clone();
    deeper.union_with(&g.closed_neighbors(last));
    for v in cand.iter() {
        if g.has_edge(v, s) {
            if path.len() + 1 > ell {
                let mut cycle = path.clone();
                cycle.push(v);
                return SearchOutcome::Found(cycle);
            }
            continue;
        }
        path.push(v);
        let r = cycle_rec(g, ell, above, path, &deeper, budget);
        path.pop();
        if !matches!(r, SearchOutcome::NotFound) {
            return r;
        }
    }
    SearchOutcome::NotFound
}

// ---------------------------------------------------------------------------
// Brute-force oracles

pub const BRUTE_LIMIT: usize = 16;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("brute-force oracle limited to {limit} vertices, graph has {n}")]
pub struct TooLarge {
    pub n: usize,
    pub limit: usize,
}

fn masks(g: &Graph) -> Result<Vec<u32>, TooLarge> {
    let n = g.vertex_count();
    if n > BRUTE_LIMIT {
        return Err(TooLarge { n, limit: BRUTE_LIMIT });
    }
    Ok(g.vertices()
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, w| m | (1 << w)))
        .collect())
}

/// Maximum over nonempty vertex subsets `S` of the minimum degree of `g[S]`.
pub fn brute_degeneracy(g: &Graph) -> Result<usize, TooLarge> {
    let adj = masks(g)?;
    let n = g.vertex_count();
    let mut best = 0;
    for set in 1u32..(1u32 << n) {
        let min = (0..n)
            .filter(|&v| set >> v & 1 == 1)
            .map(|v| (adj[v] & set).count_ones() as usize)
            .min()
            .expect("nonempty subset");
        best = best.max(min);
    }
    Ok(best)
}

/// True iff some `s`-subset has at least `t` common neighbours.
pub fn brute_biclique(g: &Graph, s: usize, t: usize) -> Result<bool, TooLarge> {
    let adj = masks(g)?;
    let n = g.vertex_count();
    let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    for set in 0u32..(1u32 << n) {
        if set.count_ones() as usize != s {
            continue;
        }
        let common = (0..n).filter(|&v| set >> v & 1 == 1).fold(full, |m, v| m & adj[v]);
        if common.count_ones() as usize >= t {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Largest `t` such that some `t`-subset has `t` common neighbours.
pub fn brute_tau(g: &Graph) -> Result<usize, TooLarge> {
    let mut best = 0;
    for t in 1..=g.vertex_count() / 2 {
        if brute_biclique(g, t, t)? {
            best = t;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificate::validate_biclique;

    #[test]
    fn bicliques() {
        let k33 = Graph::complete_bipartite(3, 3);
        let w = find_biclique(&k33, 2, 2).unwrap();
        assert!(validate_biclique(&k33, &w));
        assert!(find_biclique(&Graph::cycle(6), 2, 2).is_none());
        let w = find_biclique(&Graph::complete_bipartite(2, 4), 4, 2).unwrap();
        assert_eq!((w.side_a.len(), w.side_b.len()), (4, 2));
        assert!(validate_biclique(&Graph::complete_bipartite(2, 4), &w));
    }

    #[test]
    fn tau_values() {
        assert_eq!(tau(&Graph::complete_bipartite(3, 3)), 3);
        assert_eq!(tau(&Graph::new(5)), 0);
        assert_eq!(tau(&Graph::petersen()), 1);
        assert_eq!(tau(&Graph::complete(4)), 2);
        assert_eq!(tau(&Graph::complete(5)), 2);
    }

    #[test]
    fn brute_values() {
        assert_eq!(brute_degeneracy(&Graph::complete(4)), Ok(3));
        assert_eq!(brute_tau(&Graph::complete(4)), Ok(2));
        assert_eq!(brute_degeneracy(&Graph::cycle(5)), Ok(2));
        assert_eq!(brute_tau(&Graph::cycle(5)), Ok(1));
        assert_eq!(brute_tau(&Graph::new(17)), Err(TooLarge { n: 17, limit: 16 }));
    }

    #[test]
    fn induced_trees() {
        assert!(find_induced_tree(&Graph::complete(3), &Pattern::path(3), None).is_none());
        let e = find_induced_tree(&Graph::path(5), &Pattern::path(3), None).unwrap();
        assert!(e.check(&Graph::path(5)).is_ok());
        let pinned = find_induced_tree(&Graph::path(5), &Pattern::path(3), Some(4)).unwrap();
        assert_eq!(pinned.image[0], 4);
    }

    #[test]
    fn induced_forests() {
        let two_edges = Pattern::new(4, vec![(0, 1), (2, 3)], 0).unwrap();
        assert!(find_induced_tree(&Graph::path(4), &two_edges, None).is_none());
        let e = find_induced_tree(&Graph::path(5), &two_edges, None).unwrap();
        assert!(e.check(&Graph::path(5)).is_ok());
    }

    #[test]
    fn budget_is_explicit() {
        let g = Graph::complete(8);
        let mut b = Budget::nodes(3);
        let r = find_induced_tree_budgeted(&g, &Pattern::path(3), None, None, &mut b);
        assert!(r.is_exhausted());
    }

    #[test]
    fn long_cycles() {
        let c7 = Graph::cycle(7);
        let c = find_long_induced_cycle(&c7, 5).unwrap();
        assert_eq!(c.len(), 7);
        assert!(c7.is_induced_cycle(&c));
        assert!(find_long_induced_cycle(&c7, 7).is_none());
        assert!(find_long_induced_cycle(&Graph::complete(6), 3).is_none());
        let tri = find_long_induced_cycle(&Graph::complete(3), 3);
        assert!(tri.is_none());
    }
}
