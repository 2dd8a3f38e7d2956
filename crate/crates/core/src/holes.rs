//! Long holes: tapering trees, infusions, derived infusions, columns and
//! shifts, the derivability fixpoint and long induced cycles.

use std::sync::Arc;

use num_bigint::BigUint;
use rayon::prelude::*;
use thiserror::Error;

use crate::bitset::Bitset;
use crate::graph::{Graph, Vertex};
use crate::grow::{capped_pow, BoundValue};
use crate::search::{Budget, SearchOutcome};
use crate::uniform::EdgeClass;

/// Tapering trees above this many vertices are refused.
pub const MAX_TAPERING_VERTICES: usize = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HoleError {
    #[error("parameter out of range: {0}")]
    Parameter(&'static str),
    #[error("({t},{eta})-tapering tree has more than {MAX_TAPERING_VERTICES} vertices")]
    TooLarge { t: usize, eta: usize },
    #[error("derivation needs {need} parts, got {have}")]
    PartCount { have: usize, need: usize },
    #[error("part {index}: {reason}")]
    Part { index: usize, reason: PartFailure },
    #[error("derived map is not an infusion: {0}")]
    Postcondition(InfusionViolation),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PartFailure {
    #[error("tree shape differs from the first part")]
    Shape,
    #[error("root {0} is not a neighbour of the new root")]
    NotNeighbour(Vertex),
    #[error("root {0} repeats an earlier part's root")]
    DuplicateRoot(Vertex),
    #[error("the new root lies in the part's image")]
    ContainsCenter,
    #[error("the new root is bad at abstract vertex {0}")]
    Bad(usize),
    #[error("not an infusion: {0}")]
    Invalid(InfusionViolation),
}

/// The `(t, η)`-tapering tree, numbered in BFS order with root `0`; children
/// of each vertex are consecutive ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaperingTree {
    t: usize,
    eta: usize,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    height: Vec<usize>,
}

impl TaperingTree {
    pub fn new(t: usize, eta: usize) -> Result<Self, HoleError> {
        if t == 0 {
            return Err(HoleError::Parameter("t must be positive"));
        }
        let mut parent = vec![None];
        let mut children = vec![Vec::new()];
        let mut height = vec![0];
        let mut v = 0;
        while v < parent.len() {
            let h = height[v];
            if h < eta {
                let k = t
                    .checked_pow((eta - h) as u32)
                    .filter(|k| parent.len() + k <= MAX_TAPERING_VERTICES)
                    .ok_or(HoleError::TooLarge { t, eta })?;
                for _ in 0..k {
                    let c = parent.len();
                    parent.push(Some(v));
                    children.push(Vec::new());
                    height.push(h + 1);
                    children[v].push(c);
                }
            }
            v += 1;
        }
        Ok(TaperingTree { t, eta, parent, children, height })
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn eta(&self) -> usize {
        self.eta
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn height(&self, v: usize) -> usize {
        self.height[v]
    }

    pub fn leaves(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&v| self.children[v].is_empty())
    }

    /// Abstract vertices from the root down to `v`.
    pub fn root_path(&self, v: usize) -> Vec<usize> {
        let mut path = vec![v];
        let mut cur = v;
        while let Some(p) = self.parent[cur] {
            path.push(p);
            cur = p;
        }
        path.reverse();
        path
    }

    /// Number of children a vertex of height `h` must have.
    pub fn fan_at(&self, h: usize) -> usize {
        if h >= self.eta {
            0
        } else {
            self.t.pow((self.eta - h) as u32)
        }
    }
}

/// A `(t, η)`-infusion: `phi[x]` is the host image of abstract vertex `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Infusion {
    pub phi: Vec<Vertex>,
    pub tree: Arc<TaperingTree>,
    pub root_image: Vertex,
}

impl Infusion {
    /// The set `V(φ)`.
    pub fn image_set(&self, n: usize) -> Bitset {
        Bitset::from_iter(n, self.phi.iter().copied())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InfusionViolation {
    #[error("malformed infusion: {0}")]
    Malformed(&'static str),
    #[error("bullet 1: edge {parent}-{child} not mapped to a host edge")]
    EdgeNotMapped { parent: usize, child: usize },
    #[error("bullet 2: siblings {a} and {b} share an image")]
    SiblingCollision { a: usize, b: usize },
    #[error("bullet 3: {ancestor} and {vertex} share an image on a root path")]
    PathRepeat { ancestor: usize, vertex: usize },
    #[error("bullet 4: adjacency of {ancestor} and {vertex} differs on a root path")]
    PathAdjacency { ancestor: usize, vertex: usize },
}

impl InfusionViolation {
    /// The definition bullet that fails (0 for structural problems).
    pub fn bullet(&self) -> usize {
        match self {
            InfusionViolation::Malformed(_) => 0,
            InfusionViolation::EdgeNotMapped { .. } => 1,
            InfusionViolation::SiblingCollision { .. } => 2,
            InfusionViolation::PathRepeat { .. } => 3,
            InfusionViolation::PathAdjacency { .. } => 4,
        }
    }
}

/// Which of the four bullets hold, with the lowest failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfusionReport {
    pub bullets: [bool; 4],
    pub first: Option<InfusionViolation>,
}

impl InfusionReport {
    pub fn ok(&self) -> bool {
        self.first.is_none()
    }
}

pub fn validate_infusion(g: &Graph, inf: &Infusion) -> InfusionReport {
    let tree = &inf.tree;
    let malformed = |m| InfusionReport { bullets: [false; 4], first: Some(InfusionViolation::Malformed(m)) };
    if inf.phi.len() != tree.len() {
        return malformed("image length differs from tree size");
    }
    if inf.phi.iter().any(|&x| x >= g.vertex_count()) {
        return malformed("image out of range");
    }
    if inf.phi[0] != inf.root_image {
        return malformed("root image disagrees with phi");
    }
    let mut found: [Option<InfusionViolation>; 4] = [None, None, None, None];
    let phi = &inf.phi;
    for v in 1..tree.len() {
        let p = tree.parent(v).expect("non-root");
        if found[0].is_none() && (phi[p] == phi[v] || !g.has_edge(phi[p], phi[v])) {
            found[0] = Some(InfusionViolation::EdgeNotMapped { parent: p, child: v });
        }
    }
    for v in 0..tree.len() {
        let ch = tree.children(v);
        'sib: for (i, &a) in ch.iter().enumerate() {
            for &b in &ch[i + 1..] {
                if phi[a] == phi[b] {
                    if found[1].is_none() {
                        found[1] = Some(InfusionViolation::SiblingCollision { a, b });
                    }
                    break 'sib;
                }
            }
        }
    }
    for v in 0..tree.len() {
        let path = tree.root_path(v);
        let (&last, ancestors) = path.split_last().expect("nonempty");
        for (k, &a) in ancestors.iter().enumerate() {
            if found[2].is_none() && phi[a] == phi[last] {
                found[2] = Some(InfusionViolation::PathRepeat { ancestor: a, vertex: last });
            }
            let h_adj = k + 1 == ancestors.len();
            if found[3].is_none() && g.has_edge(phi[a], phi[last]) != h_adj {
                found[3] = Some(InfusionViolation::PathAdjacency { ancestor: a, vertex: last });
            }
        }
    }
    let bullets = [found[0].is_none(), found[1].is_none(), found[2].is_none(), found[3].is_none()];
    let first = found.into_iter().flatten().next();
    InfusionReport { bullets, first }
}

/// `(t−1)·t^{η−h−1}`, the badness threshold at height `h < η`.
pub fn infusion_threshold(t: usize, eta: usize, h: usize) -> u128 {
    assert!(h < eta, "threshold only defined below the leaves");
    (t as u128 - 1).saturating_mul((t as u128).saturating_pow((eta - h - 1) as u32))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfusionBadness {
    pub subject: Vertex,
    /// First abstract vertex (BFS order) with too many children adjacent to
    /// the subject, the count, and the threshold exceeded.
    pub witness: Option<(usize, usize, u128)>,
}

impl InfusionBadness {
    pub fn is_bad(&self) -> bool {
        self.witness.is_some()
    }
}

pub fn bad_for_infusion(g: &Graph, inf: &Infusion, u: Vertex) -> InfusionBadness {
    let tree = &inf.tree;
    let nu = g.neighbors(u);
    for v in 0..tree.len() {
        let h = tree.height(v);
        if h >= tree.eta() {
            continue;
        }
        let count = tree
            .children(v)
            .iter()
            .filter(|&&w| inf.phi[w] != u && nu.contains(inf.phi[w]))
            .count();
        let threshold = infusion_threshold(tree.t(), tree.eta(), h);
        if count as u128 > threshold {
            return InfusionBadness { subject: u, witness: Some((v, count, threshold)) };
        }
    }
    InfusionBadness { subject: u, witness: None }
}

/// All host vertices that are bad for `inf`.
pub fn infusion_bad_set(g: &Graph, inf: &Infusion) -> Vec<Vertex> {
    g.vertices().filter(|&u| bad_for_infusion(g, inf, u).is_bad()).collect()
}

/// `t^{η^η}`.
pub fn infusion_bad_bound(t: usize, eta: usize) -> BoundValue {
    let exp = BigUint::from(eta).pow(eta as u32);
    capped_pow(&BigUint::from(t), &exp)
}

struct InfusionSearch<'a> {
    g: &'a Graph,
    tree: &'a TaperingTree,
    avoid: Option<&'a Bitset>,
    phi: Vec<Vertex>,
    budget: &'a mut Budget,
}

impl InfusionSearch<'_> {
    /// Fills the subtree below abstract `v` (already mapped). `blocked` is
    /// the union of closed neighbourhoods of the strict ancestors of `v`.
    /// Subtrees of distinct children never constrain each other, so every
    /// candidate is tried at most once per slot and no backtracking across
    /// siblings is needed.
    fn fill(&mut self, v: usize, blocked: &Bitset) -> Option<bool> {
        let ch = self.tree.children(v).to_vec();
        if ch.is_empty() {
            return Some(true);
        }
        let x = self.phi[v];
        let mut cands = self.g.neighbors(x).difference(blocked);
        if let Some(a) = self.avoid {
            cands.difference_with(a);
        }
        let mut below = blocked.clone();
        below.union_with(&self.g.closed_neighbors(x));
        let mut slot = 0;
        for c in cands.iter() {
            if slot == ch.len() {
                break;
            }
            if !self.budget.tick() {
                return None;
            }
            self.phi[ch[slot]] = c;
            if self.fill(ch[slot], &below)? {
                slot += 1;
            }
        }
        Some(slot == ch.len())
    }
}

/// Complete search for a `(t, η)`-infusion with root image `root` whose
/// images avoid `avoid`. Sibling images are chosen in increasing order.
pub fn find_infusion(
    g: &Graph,
    t: usize,
    eta: usize,
    root: Vertex,
    avoid: Option<&Bitset>,
    budget: &mut Budget,
) -> Result<SearchOutcome<Infusion>, HoleError> {
    if eta == 0 {
        return Err(HoleError::Parameter("eta must be positive"));
    }
    let tree = Arc::new(TaperingTree::new(t, eta)?);
    find_infusion_in(g, &tree, root, avoid, budget)
}

fn find_infusion_in(
    g: &Graph,
    tree: &Arc<TaperingTree>,
    root: Vertex,
    avoid: Option<&Bitset>,
    budget: &mut Budget,
) -> Result<SearchOutcome<Infusion>, HoleError> {
    if root >= g.vertex_count() {
        return Err(HoleError::Parameter("root out of range"));
    }
    if avoid.is_some_and(|a| a.contains(root)) {
        return Ok(SearchOutcome::NotFound);
    }
    let mut search = InfusionSearch { g, tree, avoid, phi: vec![root; tree.len()], budget };
    Ok(match search.fill(0, &Bitset::new(g.vertex_count())) {
        None => SearchOutcome::BudgetExhausted,
        Some(false) => SearchOutcome::NotFound,
        Some(true) => SearchOutcome::Found(Infusion { phi: search.phi, tree: tree.clone(), root_image: root }),
    })
}

/// Every `(1, η)`-infusion at `root` (equivalently every induced path with
/// `η + 1` vertices starting there), at most `cap` of them.
pub fn all_path_infusions(g: &Graph, eta: usize, root: Vertex, cap: usize) -> Result<Vec<Infusion>, HoleError> {
    let tree = Arc::new(TaperingTree::new(1, eta)?);
    let mut out = Vec::new();
    let mut path = vec![root];
    let mut blocked = Bitset::new(g.vertex_count());
    fn rec(g: &Graph, eta: usize, path: &mut Vec<Vertex>, blocked: &mut Bitset, cap: usize, out: &mut Vec<Vec<Vertex>>) {
        if out.len() >= cap {
            return;
        }
        if path.len() == eta + 1 {
            out.push(path.clone());
            return;
        }
        let x = *path.last().expect("nonempty");
        for c in g.neighbors(x).difference(blocked).iter() {
            let saved = blocked.clone();
            blocked.union_with(&g.closed_neighbors(x));
            path.push(c);
            rec(g, eta, path, blocked, cap, out);
            path.pop();
            *blocked = saved;
        }
    }
    let mut raw = Vec::new();
    rec(g, eta, &mut path, &mut blocked, cap, &mut raw);
    for phi in raw {
        out.push(Infusion { phi, tree: tree.clone(), root_image: root });
    }
    Ok(out)
}

/// Shrinks `part` to a `(t, η−1)`-tapering subtree avoiding the neighbours
/// of `u` below its root: at every level keep the first children (ascending
/// id) whose images miss `N(u)`. Returns the abstract vertices kept, in BFS
/// order of the smaller tree, or the first vertex where too few survive.
fn shrink_part(g: &Graph, part: &Infusion, u: Vertex, small: &TaperingTree) -> Result<Vec<usize>, usize> {
    let big = &part.tree;
    let nu = g.neighbors(u);
    let mut map = vec![0usize; small.len()];
    for a in 0..small.len() {
        let need = small.children(a);
        if need.is_empty() {
            continue;
        }
        let b = map[a];
        let keep: Vec<usize> = big
            .children(b)
            .iter()
            .copied()
            .filter(|&w| !nu.contains(part.phi[w]))
            .take(need.len())
            .collect();
        if keep.len() < need.len() {
            return Err(b);
        }
        for (&c, k) in need.iter().zip(keep) {
            map[c] = k;
        }
    }
    Ok(map)
}

/// Grafts shrunk copies of `t^η` infusions rooted at distinct neighbours of
/// `u` under a new root `u`.
pub fn derive_infusion(g: &Graph, u: Vertex, parts: &[Infusion]) -> Result<Infusion, HoleError> {
    let first = parts.first().ok_or(HoleError::PartCount { have: 0, need: 1 })?;
    let (t, eta) = (first.tree.t(), first.tree.eta());
    if eta == 0 {
        return Err(HoleError::Parameter("eta must be positive"));
    }
    let need = t.pow(eta as u32);
    if parts.len() != need {
        return Err(HoleError::PartCount { have: parts.len(), need });
    }
    if u >= g.vertex_count() {
        return Err(HoleError::Parameter("new root out of range"));
    }
    let part_err = |index, reason| HoleError::Part { index, reason };
    let mut roots = Bitset::new(g.vertex_count());
    for (i, p) in parts.iter().enumerate() {
        if *p.tree != *first.tree {
            return Err(part_err(i, PartFailure::Shape));
        }
        if let Some(v) = validate_infusion(g, p).first {
            return Err(part_err(i, PartFailure::Invalid(v)));
        }
        if !g.has_edge(u, p.root_image) {
            return Err(part_err(i, PartFailure::NotNeighbour(p.root_image)));
        }
        if !roots.insert(p.root_image) {
            return Err(part_err(i, PartFailure::DuplicateRoot(p.root_image)));
        }
        if p.phi.contains(&u) {
            return Err(part_err(i, PartFailure::ContainsCenter));
        }
        if let Some((x, _, _)) = bad_for_infusion(g, p, u).witness {
            return Err(part_err(i, PartFailure::Bad(x)));
        }
    }
    let small = TaperingTree::new(t, eta - 1)?;
    let mut phi = vec![u; first.tree.len()];
    let tree = first.tree.clone();
    for (i, p) in parts.iter().enumerate() {
        let map = shrink_part(g, p, u, &small).map_err(|x| part_err(i, PartFailure::Bad(x)))?;
        // Canonical isomorphism from the i-th branch of the new tree onto
        // the smaller tree, walking both child lists in order.
        let mut stack = vec![(tree.children(0)[i], 0usize)];
        while let Some((hv, sv)) = stack.pop() {
            phi[hv] = p.phi[map[sv]];
            for (&hc, &sc) in tree.children(hv).iter().zip(small.children(sv)) {
                stack.push((hc, sc));
            }
        }
    }
    let out = Infusion { phi, tree, root_image: u };
    match validate_infusion(g, &out).first {
        Some(v) => Err(HoleError::Postcondition(v)),
        None => Ok(out),
    }
}

/// Images of all root-to-leaf paths, root first, leaves in ascending order.
pub fn columns(inf: &Infusion) -> Vec<Vec<Vertex>> {
    inf.tree
        .leaves()
        .map(|l| inf.tree.root_path(l).into_iter().map(|x| inf.phi[x]).collect())
        .collect()
}

fn contains_run(hay: &[Vertex], needle: &[Vertex]) -> bool {
    needle.is_empty() || hay.windows(needle.len()).any(|w| w == needle)
}

/// True iff `b.1` is a column of `b.0`, `a.1` is a column of `a.0`, and
/// `a.1` minus its root is a subpath of `b.1`.
pub fn is_shift(a: (&Infusion, &[Vertex]), b: (&Infusion, &[Vertex])) -> bool {
    let cols_a = columns(a.0);
    let cols_b = columns(b.0);
    if !cols_a.iter().any(|c| c == a.1) || !cols_b.iter().any(|c| c == b.1) {
        return false;
    }
    let tail = &a.1[1..];
    let rev: Vec<Vertex> = tail.iter().rev().copied().collect();
    contains_run(b.1, tail) || contains_run(b.1, &rev)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtractError {
    #[error("chain step {0} is not a shift")]
    NotAShift(usize),
    #[error("chain too short: no root is adjacent to an earlier non-consecutive root")]
    ChainTooShort,
    #[error("roots {0:?} do not induce a cycle longer than eta")]
    Invalid(Vec<Vertex>),
}

/// Reads the roots `v_1, v_2, …` of a shift chain, takes the least `j` with
/// `v_j` adjacent to some `v_i` (`i ≤ j − 2`), the largest such `i`, and
/// returns `v_i, …, v_j`.
pub fn extract_long_cycle(g: &Graph, eta: usize, chain: &[(Infusion, Vec<Vertex>)]) -> Result<Vec<Vertex>, ExtractError> {
    for (k, pair) in chain.windows(2).enumerate() {
        if !is_shift((&pair[0].0, &pair[0].1), (&pair[1].0, &pair[1].1)) {
            return Err(ExtractError::NotAShift(k));
        }
    }
    let roots: Vec<Vertex> = chain.iter().map(|(inf, _)| inf.root_image).collect();
    for j in 2..roots.len() {
        if let Some(i) = (0..=j - 2).rev().find(|&i| g.has_edge(roots[i], roots[j])) {
            let cycle = roots[i..=j].to_vec();
            if cycle.len() > eta && g.is_induced_cycle(&cycle) {
                return Ok(cycle);
            }
            return Err(ExtractError::Invalid(cycle));
        }
    }
    Err(ExtractError::ChainTooShort)
}

// ---------------------------------------------------------------------------
// Derivability fixpoint

#[derive(Clone, Debug)]
pub struct FixpointOptions {
    /// Most infusions kept per root per layer.
    pub pool_cap: usize,
    /// Layers computed before declaring the hierarchy persistent; defaults to
    /// `|G| + 2`.
    pub max_layers: Option<usize>,
    /// Node budget for each layer-one infusion search.
    pub node_budget: Option<u64>,
}

impl Default for FixpointOptions {
    fn default() -> Self {
        FixpointOptions { pool_cap: 1024, max_layers: None, node_budget: Some(1_000_000) }
    }
}

#[derive(Clone, Debug)]
struct Node {
    inf: Infusion,
    /// `(vertex, index)` into the previous layer's pools.
    parts: Vec<(Vertex, usize)>,
}

#[derive(Clone, Debug)]
pub struct Fixpoint {
    pub t: usize,
    pub eta: usize,
    /// `layers[i]` is layer `i + 1`; nested.
    pub layers: Vec<Bitset>,
    /// Index of the part containing each vertex (`0` for `X_0`).
    pub x: Vec<usize>,
    /// The stored infusion `φ_v` for every vertex outside `X_0`.
    pub reps: Vec<Option<Infusion>>,
    /// Vertices whose layer-one search ran out of budget; placed in `X_0`.
    pub exhausted: Vec<Vertex>,
    /// True when some pool hit the cap.
    pub capped: bool,
    /// True when the last computed layer is nonempty.
    pub persistent: bool,
    pools: Vec<Vec<Vec<Node>>>,
}

impl Fixpoint {
    /// Number of computed layers.
    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    /// The part `X_i` as a vertex list.
    pub fn part(&self, i: usize) -> Vec<Vertex> {
        (0..self.x.len()).filter(|&v| self.x[v] == i).collect()
    }

    /// Follows shifts from the top layer down to layer one, starting at the
    /// first column of the smallest surviving root.
    pub fn shift_chain(&self) -> Option<Vec<(Infusion, Vec<Vertex>)>> {
        let top = self.pools.len().checked_sub(1)?;
        let start = (0..self.x.len()).find(|&v| !self.pools[top][v].is_empty())?;
        let mut node = &self.pools[top][start][0];
        let mut col = columns(&node.inf).into_iter().next()?;
        let mut chain = vec![(node.inf.clone(), col.clone())];
        for layer in (0..top).rev() {
            let mut next = None;
            'parts: for &(v, idx) in &node.parts {
                let cand = &self.pools[layer][v][idx];
                for c in columns(&cand.inf) {
                    if c[..c.len() - 1] == col[1..] {
                        next = Some((cand, c));
                        break 'parts;
                    }
                }
            }
            let (cand, c) = next?;
            node = cand;
            col = c;
            chain.push((node.inf.clone(), col.clone()));
        }
        Some(chain)
    }
}

fn push_unique(pool: &mut Vec<Node>, node: Node, cap: usize) -> bool {
    if pool.len() >= cap {
        return false;
    }
    if !pool.iter().any(|n| n.inf.phi == node.inf.phi) {
        pool.push(node);
    }
    true
}

/// Layer pools for `u`, built from the previous layer. Each derivation picks
/// one qualifying infusion per neighbour; one derivation is led by each
/// qualifying `(neighbour, infusion)` pair, and one more per neighbour `w`
/// of `u` prefers parts that keep `w` away from the result.
fn derive_pool(g: &Graph, u: Vertex, prev: &[Vec<Node>], need: usize, cap: usize) -> (Vec<Node>, bool) {
    let mut qualifying: Vec<(Vertex, Vec<usize>)> = Vec::new();
    for v in g.neighbors(u).iter() {
        let idx: Vec<usize> = prev[v]
            .iter()
            .enumerate()
            .filter(|(_, n)| !n.inf.phi.contains(&u) && !bad_for_infusion(g, &n.inf, u).is_bad())
            .map(|(i, _)| i)
            .collect();
        if !idx.is_empty() {
            qualifying.push((v, idx));
        }
    }
    let mut pool = Vec::new();
    if qualifying.len() < need {
        return (pool, false);
    }
    let mut capped = false;
    let build = |choice: &[(Vertex, usize)]| -> Option<Node> {
        let parts: Vec<Infusion> = choice.iter().map(|&(v, i)| prev[v][i].inf.clone()).collect();
        derive_infusion(g, u, &parts).ok().map(|inf| Node { inf, parts: choice.to_vec() })
    };
    'lead: for (li, (lv, lidx)) in qualifying.iter().enumerate() {
        for &m in lidx {
            let mut choice = vec![(*lv, m)];
            for (v, idx) in qualifying[li + 1..].iter().chain(&qualifying[..li]) {
                if choice.len() == need {
                    break;
                }
                choice.push((*v, idx[0]));
            }
            if let Some(node) = build(&choice) {
                if !push_unique(&mut pool, node, cap) {
                    capped = true;
                    break 'lead;
                }
            }
        }
    }
    let t = prev.iter().flatten().next().map_or(1, |n| n.inf.tree.t());
    let eta = prev.iter().flatten().next().map_or(1, |n| n.inf.tree.eta());
    let root_cap = infusion_threshold(t, eta, 0);
    for w in g.neighbors(u).iter() {
        let nw = g.closed_neighbors(w);
        let mut choice = Vec::new();
        let mut root_hits = 0u128;
        for (v, idx) in &qualifying {
            if choice.len() == need || *v == w {
                continue;
            }
            let hit = g.has_edge(*v, w);
            if hit && root_hits >= root_cap {
                continue;
            }
            let clean = idx.iter().copied().find(|&i| prev[*v][i].inf.phi[1..].iter().all(|&x| !nw.contains(x)));
            if let Some(i) = clean {
                choice.push((*v, i));
                root_hits += hit as u128;
            }
        }
        if choice.len() == need {
            if let Some(node) = build(&choice) {
                if !node.inf.phi.contains(&w) && !bad_for_infusion(g, &node.inf, w).is_bad() && !push_unique(&mut pool, node, cap) {
                    capped = true;
                    break;
                }
            }
        }
    }
    (pool, capped)
}

/// Vertex-level derivability hierarchy. Layer one holds the roots of
/// infusions; layer `i + 1` holds the roots of infusions derived from the
/// pools of layer `i`.
pub fn derivability_fixpoint(g: &Graph, t: usize, eta: usize, opts: &FixpointOptions) -> Result<Fixpoint, HoleError> {
    if t == 0 || eta == 0 {
        return Err(HoleError::Parameter("t and eta must be positive"));
    }
    let n = g.vertex_count();
    let tree = Arc::new(TaperingTree::new(t, eta)?);
    let cap = opts.pool_cap.max(1);
    let need = t.pow(eta as u32);
    let max_layers = opts.max_layers.unwrap_or(n + 2).max(1);

    let first: Vec<(Vec<Node>, bool, bool)> = g
        .vertices()
        .into_par_iter()
        .map(|v| {
            let mut pool = Vec::new();
            let mut capped = false;
            if t == 1 {
                let all = all_path_infusions(g, eta, v, cap + 1).expect("tree fits");
                capped = all.len() > cap;
                pool.extend(all.into_iter().take(cap).map(|inf| Node { inf, parts: Vec::new() }));
                return (pool, false, capped);
            }
            let mut budget = Budget::from_option(opts.node_budget);
            match find_infusion_in(g, &tree, v, None, &mut budget).expect("valid root") {
                SearchOutcome::Found(inf) => pool.push(Node { inf, parts: Vec::new() }),
                SearchOutcome::NotFound => return (pool, false, false),
                SearchOutcome::BudgetExhausted => return (pool, true, false),
            }
            for x in g.neighbors(v).iter() {
                let mut avoid = g.closed_neighbors(x);
                avoid.remove(v);
                let mut budget = Budget::from_option(opts.node_budget);
                if let SearchOutcome::Found(inf) = find_infusion_in(g, &tree, v, Some(&avoid), &mut budget).expect("valid root") {
                    if !push_unique(&mut pool, Node { inf, parts: Vec::new() }, cap) {
                        capped = true;
                        break;
                    }
                }
            }
            (pool, false, capped)
        })
        .collect();
    let exhausted: Vec<Vertex> = (0..n).filter(|&v| first[v].1).collect();
    let mut capped = first.iter().any(|f| f.2);
    let mut pools: Vec<Vec<Vec<Node>>> = vec![first.into_iter().map(|f| f.0).collect()];
    let mut layers = vec![Bitset::from_iter(n, (0..n).filter(|&v| !pools[0][v].is_empty()))];

    while layers.len() < max_layers && !layers.last().expect("nonempty").is_empty() {
        let prev = pools.last().expect("nonempty");
        let current = layers.last().expect("nonempty");
        let next: Vec<(Vec<Node>, bool)> = g
            .vertices()
            .into_par_iter()
            .map(|u| if current.contains(u) { derive_pool(g, u, prev, need, cap) } else { (Vec::new(), false) })
            .collect();
        capped |= next.iter().any(|p| p.1);
        let pool: Vec<Vec<Node>> = next.into_iter().map(|p| p.0).collect();
        layers.push(Bitset::from_iter(n, (0..n).filter(|&v| !pool[v].is_empty())));
        pools.push(pool);
    }

    let mut x = vec![0usize; n];
    let mut reps = vec![None; n];
    for (i, layer) in layers.iter().enumerate() {
        for v in layer.iter() {
            x[v] = i + 1;
            reps[v] = Some(pools[i][v][0].inf.clone());
        }
    }
    let persistent = !layers.last().expect("nonempty").is_empty() && layers.len() == max_layers;
    Ok(Fixpoint { t, eta, layers, x, reps, exhausted, capped, persistent, pools })
}

/// Runs the hierarchy and, when it persists, extracts an induced cycle with
/// more than `eta` vertices from a shift chain.
pub fn long_hole_by_fixpoint(g: &Graph, t: usize, eta: usize, opts: &FixpointOptions) -> Result<Option<Vec<Vertex>>, HoleError> {
    let fix = derivability_fixpoint(g, t, eta, opts)?;
    if !fix.persistent {
        return Ok(None);
    }
    Ok(fix.shift_chain().and_then(|chain| extract_long_cycle(g, eta, &chain).ok()))
}

// ---------------------------------------------------------------------------
// Edge audit

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HoleClassTotal {
    pub class: EdgeClass,
    pub size: usize,
    pub bound: BoundValue,
}

impl HoleClassTotal {
    pub fn within(&self) -> bool {
        self.size == 0 || self.bound.exceeds(self.size - 1)
    }
}

#[derive(Clone, Debug)]
pub struct HoleAudit {
    /// Every edge `(u, v)` with `u < v`, its head (if any) and class.
    pub edges: Vec<((Vertex, Vertex), Option<Vertex>, EdgeClass)>,
    pub totals: Vec<HoleClassTotal>,
}

impl HoleAudit {
    pub fn size(&self, class: EdgeClass) -> usize {
        self.edges.iter().filter(|e| e.2 == class).count()
    }
}

fn times_n(b: BoundValue, n: usize) -> BoundValue {
    match b {
        BoundValue::Exact(v) => BoundValue::Exact(v * BigUint::from(n)),
        huge => huge,
    }
}

/// Classifies each edge: `A` inside `X_0`; otherwise the head is the end in
/// the highest part (smaller id on ties) and the class depends on the other
/// end relative to the head's stored infusion.
pub fn longhole_edge_audit(g: &Graph, fix: &Fixpoint) -> HoleAudit {
    let (t, eta) = (fix.t, fix.eta);
    let n = g.vertex_count();
    let mut edges = Vec::with_capacity(g.edge_count());
    for (a, b) in g.edges() {
        if fix.x[a] == 0 && fix.x[b] == 0 {
            edges.push(((a, b), None, EdgeClass::A));
            continue;
        }
        let (head, other) = if fix.x[b] > fix.x[a] { (b, a) } else { (a, b) };
        let phi = fix.reps[head].as_ref().expect("head outside X_0 has an infusion");
        let class = if phi.phi.contains(&other) {
            EdgeClass::D
        } else if bad_for_infusion(g, phi, other).is_bad() {
            EdgeClass::C
        } else {
            EdgeClass::B
        };
        edges.push(((a, b), Some(head), class));
    }
    let t_big = BigUint::from(t);
    let zeta_t = t_big.pow(eta as u32 + 1);
    let fact: BigUint = (1..=eta + 1).map(BigUint::from).product();
    let bounds = [
        (EdgeClass::A, capped_pow(&zeta_t, &fact)),
        (EdgeClass::B, BoundValue::Exact(t_big.pow(eta as u32))),
        (EdgeClass::C, infusion_bad_bound(t, eta)),
        (EdgeClass::D, BoundValue::Exact(t_big.pow(eta as u32))),
    ];
    let mut audit = HoleAudit { edges, totals: Vec::new() };
    audit.totals = bounds
        .into_iter()
        .map(|(class, b)| HoleClassTotal { class, size: audit.size(class), bound: times_n(b, n) })
        .collect();
    audit
}
