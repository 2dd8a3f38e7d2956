//! Excluding `K_{s,t}`: colouring digraphs of bounded outdegree, packing
//! `v`-bags, the recursive colouring of `H`-free graphs, and building a tree
//! with bounded back-degree.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::bitset::Bitset;
use crate::certificate::{BicliqueWitness, DegeneracyCertificate, InducedEmbedding};
use crate::degeneracy::{core_at_least, degeneracy, greedy_color, Coloring};
use crate::graph::{Graph, Vertex};
use crate::search::{find_biclique_budgeted, find_induced_tree_budgeted, Budget, SearchOutcome};
use crate::tree::Pattern;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum KstError {
    #[error("vertex {vertex} has outdegree {degree}, limit is {limit}")]
    OutDegree { vertex: Vertex, degree: usize, limit: usize },
    #[error("self-arc at {0}")]
    SelfArc(Vertex),
    #[error("pattern must be a tree with at least one vertex")]
    NotATree,
    #[error("parameter out of range: {0}")]
    Parameter(&'static str),
    #[error("search budget exhausted")]
    Budget,
    #[error("supplied S does not force K_{{s,s}}: built a copy of S on {0:?} with no induced H and no K_{{s,s}}")]
    SuppliedTree(Vec<Vertex>),
    #[error("internal invariant broken: {0}")]
    Internal(&'static str),
}

/// A digraph on `0..n` with at most one arc per ordered pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalDigraph {
    out: Vec<Bitset>,
}

impl LocalDigraph {
    pub fn new(n: usize) -> Self {
        LocalDigraph { out: (0..n).map(|_| Bitset::new(n)).collect() }
    }

    pub fn vertex_count(&self) -> usize {
        self.out.len()
    }

    pub fn add_arc(&mut self, u: Vertex, v: Vertex) -> Result<bool, KstError> {
        if u == v {
            return Err(KstError::SelfArc(u));
        }
        Ok(self.out[u].insert(v))
    }

    pub fn out_neighbors(&self, v: Vertex) -> &Bitset {
        &self.out[v]
    }

    pub fn out_degree(&self, v: Vertex) -> usize {
        self.out[v].len()
    }

    pub fn max_out_degree(&self) -> usize {
        (0..self.vertex_count()).map(|v| self.out_degree(v)).max().unwrap_or(0)
    }

    /// The underlying simple graph; opposite arcs merge into one edge.
    pub fn underlying(&self) -> Graph {
        let mut g = Graph::new(self.vertex_count());
        for (u, outs) in self.out.iter().enumerate() {
            for v in outs.iter() {
                g.add_edge(u, v);
            }
        }
        g
    }
}

/// Colours the underlying graph of a digraph with outdegree at most `k`
/// using at most `2k + 1` colours, by peeling at degree `≤ 2k`.
pub fn orient_color(j: &LocalDigraph, k: usize) -> Result<Coloring, KstError> {
    for v in 0..j.vertex_count() {
        if j.out_degree(v) > k {
            return Err(KstError::OutDegree { vertex: v, degree: j.out_degree(v), limit: k });
        }
    }
    let g = j.underlying();
    let cert = degeneracy(&g);
    if cert.bound > 2 * k {
        return Err(KstError::Internal("outdegree-k digraph with degeneracy above 2k"));
    }
    greedy_color(&g, &cert).map_err(|_| KstError::Internal("fresh certificate rejected"))
}

/// True iff some isomorphism from `h_prime` onto `g[X ∪ {v}]` sends the root
/// of `h_prime` to `v`.
pub fn is_v_bag(g: &Graph, v: Vertex, x: &[Vertex], h_prime: &Pattern) -> bool {
    if x.len() + 1 != h_prime.vertex_count() || x.contains(&v) {
        return false;
    }
    let allowed = Bitset::from_iter(g.vertex_count(), x.iter().copied().chain([v]));
    if allowed.len() != h_prime.vertex_count() {
        return false;
    }
    find_induced_tree_budgeted(g, h_prime, Some(v), Some(&allowed), &mut Budget::unlimited()).is_found()
}

/// A maximal family of pairwise disjoint `v`-bags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BagFamily {
    pub center: Vertex,
    /// Each bag as the full image of `h_prime` (index = pattern vertex); the
    /// bag itself is the image minus the center.
    pub images: Vec<Vec<Vertex>>,
    /// True when the family reached `s − 1` bags.
    pub overflow: bool,
}

impl BagFamily {
    pub fn bags(&self) -> Vec<Vec<Vertex>> {
        self.images
            .iter()
            .map(|img| img.iter().copied().filter(|&x| x != self.center).collect())
            .collect()
    }

    /// The union `Y_v` of all bags.
    pub fn union(&self, n: usize) -> Bitset {
        let mut y = Bitset::new(n);
        for img in &self.images {
            for &x in img {
                if x != self.center {
                    y.insert(x);
                }
            }
        }
        y
    }
}

/// Greedily packs disjoint `v`-bags inside `within` (all vertices when
/// `None`) until no further bag fits.
pub fn pack_bags(
    g: &Graph,
    v: Vertex,
    h_prime: &Pattern,
    s: usize,
    within: Option<&Bitset>,
    budget: &mut Budget,
) -> Result<BagFamily, KstError> {
    let mut free = within.cloned().unwrap_or_else(|| Bitset::full(g.vertex_count()));
    let mut images = Vec::new();
    if h_prime.vertex_count() >= 2 && free.contains(v) {
        loop {
            match find_induced_tree_budgeted(g, h_prime, Some(v), Some(&free), budget) {
                SearchOutcome::Found(e) => {
                    for &x in &e.image {
                        if x != v {
                            free.remove(x);
                        }
                    }
                    images.push(e.image);
                }
                SearchOutcome::NotFound => break,
                SearchOutcome::BudgetExhausted => return Err(KstError::Budget),
            }
        }
    }
    let overflow = images.len() + 1 >= s;
    Ok(BagFamily { center: v, images, overflow })
}

/// `(2s|H|)^{s+|H|}`, saturating.
pub fn weak_kst_constant(s: usize, h_size: usize) -> u128 {
    ((2 * s * h_size) as u128).saturating_pow((s + h_size) as u32)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WeakOutcome {
    Coloring(Coloring),
    Embedding(InducedEmbedding),
    Biclique(BicliqueWitness),
}

/// The leaf of maximum eccentricity (ties to the smallest id) and its
/// neighbour.
pub fn pick_leaf(h: &Pattern) -> Option<(usize, usize)> {
    let adj = h.adjacency();
    let mut best: Option<(usize, usize)> = None;
    for p in 0..h.vertex_count() {
        if adj[p].len() != 1 {
            continue;
        }
        let ecc = h.with_root(p).expect("valid vertex").height();
        if best.is_none_or(|(_, e)| ecc > e) {
            best = Some((p, ecc));
        }
    }
    best.map(|(p, _)| (p, adj[p][0]))
}

enum Found {
    Embedding(InducedEmbedding),
    Biclique(BicliqueWitness),
}

/// Colours `g` with at most `(2s|H|)^{s+|H|}·t` colours when it is `H`-free
/// and has no `K_{s,t}`; otherwise may return an induced `H` or a `K_{s,t}`
/// met along the way.
pub fn weak_kst_color(g: &Graph, h: &Pattern, s: usize, tt: usize, budget: &mut Budget) -> Result<WeakOutcome, KstError> {
    if !h.is_tree() || h.vertex_count() == 0 {
        return Err(KstError::NotATree);
    }
    if s == 0 || tt == 0 {
        return Err(KstError::Parameter("s and t must be positive"));
    }
    if h.vertex_count() <= 2 {
        return match find_induced_tree_budgeted(g, h, None, None, budget) {
            SearchOutcome::Found(e) => Ok(WeakOutcome::Embedding(e)),
            SearchOutcome::BudgetExhausted => Err(KstError::Budget),
            SearchOutcome::NotFound => Ok(WeakOutcome::Coloring(Coloring { colors: vec![0; g.vertex_count()] })),
        };
    }
    let all = Bitset::full(g.vertex_count());
    let mut colors = vec![usize::MAX; g.vertex_count()];
    match color_rec(g, &all, h, s, tt, budget, &mut colors, 0)? {
        Ok(_) => Ok(WeakOutcome::Coloring(Coloring { colors })),
        Err(Found::Embedding(e)) => Ok(WeakOutcome::Embedding(e)),
        Err(Found::Biclique(w)) => Ok(WeakOutcome::Biclique(w)),
    }
}

/// Colours `w` with colours `offset..offset + returned`.
#[allow(clippy::too_many_arguments)]
fn color_rec(
    g: &Graph,
    w: &Bitset,
    h: &Pattern,
    s: usize,
    tt: usize,
    budget: &mut Budget,
    colors: &mut [usize],
    offset: usize,
) -> Result<Result<usize, Found>, KstError> {
    if w.is_empty() {
        return Ok(Ok(0));
    }
    if h.vertex_count() <= 2 {
        // Only reached on sets that are H-free by construction.
        if h.vertex_count() == 1 || g.edges_within(w) > 0 {
            return Err(KstError::Internal("recursion class contains the reduced pattern"));
        }
        for v in w.iter() {
            colors[v] = offset;
        }
        return Ok(Ok(1));
    }
    let (p, q) = pick_leaf(h).ok_or(KstError::NotATree)?;
    let (h_prime, old_ids) = h.without_vertex(p, q);
    let n = g.vertex_count();
    let mut j = LocalDigraph::new(n);
    for v in w.iter() {
        let family = pack_bags(g, v, &h_prime, s, Some(w), budget)?;
        if family.overflow {
            if let Some(found) = overflow_witness(g, w, h, &old_ids, p, &family, s, tt, budget)? {
                return Ok(Err(found));
            }
        }
        for y in family.union(n).iter() {
            j.add_arc(v, y)?;
        }
    }
    let k = j.max_out_degree();
    let classes = orient_color(&j, k)?;
    let mut by_class: BTreeMap<usize, Bitset> = BTreeMap::new();
    for v in w.iter() {
        by_class.entry(classes.colors[v]).or_insert_with(|| Bitset::new(n)).insert(v);
    }
    let mut used = 0;
    for z in by_class.values() {
        match color_rec(g, z, &h_prime, s, tt, budget, colors, offset + used)? {
            Ok(c) => used += c,
            Err(found) => return Ok(Err(found)),
        }
    }
    Ok(Ok(used))
}

/// With `s − 1` disjoint bags at `v`: a neighbour of `v` outside the bags
/// that misses some bag completes an induced `H`; a choice of one vertex per
/// bag with `t` common neighbours (together with `v`) gives `K_{s,t}`.
#[allow(clippy::too_many_arguments)]
fn overflow_witness(
    g: &Graph,
    w: &Bitset,
    h: &Pattern,
    old_ids: &[usize],
    p: usize,
    family: &BagFamily,
    s: usize,
    tt: usize,
    budget: &mut Budget,
) -> Result<Option<Found>, KstError> {
    let v = family.center;
    let n = g.vertex_count();
    let bags = &family.images[..s.saturating_sub(1).min(family.images.len())];
    let mut in_bags = Bitset::new(n);
    for img in bags {
        for &x in img {
            in_bags.insert(x);
        }
    }
    for u in g.neighbors(v).intersection(w).difference(&in_bags).iter() {
        for img in bags {
            let misses = img.iter().all(|&x| x == v || !g.has_edge(u, x));
            if misses {
                let mut image = vec![usize::MAX; h.vertex_count()];
                for (new, &old) in old_ids.iter().enumerate() {
                    image[old] = img[new];
                }
                image[p] = u;
                let e = InducedEmbedding { pattern: h.clone(), image };
                if e.check(g).is_ok() {
                    return Ok(Some(Found::Embedding(e)));
                }
            }
        }
    }
    let choices: Vec<Vec<Vertex>> = bags
        .iter()
        .map(|img| img.iter().copied().filter(|&x| x != v).collect())
        .collect();
    let mut pick = vec![0usize; choices.len()];
    loop {
        if !budget.tick() {
            return Err(KstError::Budget);
        }
        let side_a: Vec<Vertex> = std::iter::once(v).chain(pick.iter().enumerate().map(|(i, &k)| choices[i][k])).collect();
        let mut common = Bitset::full(n);
        for &a in &side_a {
            common.intersect_with(g.neighbors(a));
        }
        if common.len() >= tt {
            let side_b = common.iter().take(tt).collect();
            return Ok(Some(Found::Biclique(BicliqueWitness::new(side_a, side_b))));
        }
        let mut i = 0;
        loop {
            if i == pick.len() {
                return Ok(None);
            }
            pick[i] += 1;
            if pick[i] < choices[i].len() {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
    }
}

// ---------------------------------------------------------------------------
// Bounded back-degree trees

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BackOutcome {
    /// `image[x]` is the host vertex of pattern vertex `x`; `order` lists the
    /// host vertices so that each has at most `s − 1` earlier neighbours.
    Embedded { image: Vec<Vertex>, order: Vec<Vertex> },
    Biclique(BicliqueWitness),
    /// A vertex whose degree is below `t·|R|^s`.
    LowDegree { vertex: Vertex, degree: usize, threshold: u128 },
}

/// Checks the ordering and subgraph conditions of an `Embedded` outcome.
pub fn check_back_bounded(g: &Graph, r: &Pattern, image: &[Vertex], order: &[Vertex], s: usize) -> bool {
    if image.len() != r.vertex_count() || order.len() != image.len() {
        return false;
    }
    let set = Bitset::from_iter(g.vertex_count(), image.iter().copied());
    if set.len() != image.len() || !order.iter().all(|&v| set.contains(v)) {
        return false;
    }
    if !r.edges().iter().all(|&(a, b)| g.has_edge(image[a], image[b])) {
        return false;
    }
    let mut earlier = Bitset::new(g.vertex_count());
    for &v in order {
        if g.neighbors(v).intersection_len(&earlier) > s.saturating_sub(1) {
            return false;
        }
        earlier.insert(v);
    }
    true
}

/// Number of vertices outside `set` with at least `s` neighbours in it.
pub fn heavy_outside(g: &Graph, set: &Bitset, s: usize) -> usize {
    g.vertices()
        .filter(|&u| !set.contains(u) && g.neighbors(u).intersection_len(set) >= s)
        .count()
}

fn for_each_subset(items: &[Vertex], k: usize, f: &mut dyn FnMut(&[Vertex]) -> bool) -> bool {
    fn rec(items: &[Vertex], k: usize, start: usize, cur: &mut Vec<Vertex>, f: &mut dyn FnMut(&[Vertex]) -> bool) -> bool {
        if cur.len() == k {
            return f(cur);
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i]);
            if rec(items, k, i + 1, cur, f) {
                return true;
            }
            cur.pop();
        }
        false
    }
    rec(items, k, 0, &mut Vec::with_capacity(k), f)
}

/// Embeds the tree `r` as a subgraph one leaf at a time (BFS from its root),
/// starting at a vertex of maximum degree. Each new vertex is the smallest
/// neighbour of its parent's image with at most `s − 1` neighbours among the
/// vertices placed so far. When none exists, either some `s` placed vertices
/// have `t` common neighbours, or the parent's image has degree below
/// `t·|R|^s`.
pub fn build_back_bounded_tree(g: &Graph, r: &Pattern, s: usize, tt: usize) -> Result<BackOutcome, KstError> {
    if !r.is_tree() || r.vertex_count() == 0 {
        return Err(KstError::NotATree);
    }
    if s == 0 || tt == 0 {
        return Err(KstError::Parameter("s and t must be positive"));
    }
    let n = g.vertex_count();
    if n == 0 {
        return Err(KstError::Parameter("host graph is empty"));
    }
    let threshold = (tt as u128).saturating_mul((r.vertex_count() as u128).saturating_pow(s as u32));
    let start = g.vertices().max_by_key(|&v| (g.degree(v), std::cmp::Reverse(v))).expect("nonempty");
    let order_pat = r.bfs_with_parents();
    let mut image = vec![usize::MAX; r.vertex_count()];
    image[order_pat[0].0] = start;
    let mut order = vec![start];
    let mut placed = Bitset::from_iter(n, [start]);
    for &(x, parent) in &order_pat[1..] {
        let v = image[parent.expect("tree")];
        let pick = g
            .neighbors(v)
            .difference(&placed)
            .iter()
            .find(|&u| g.neighbors(u).intersection_len(&placed) < s);
        match pick {
            Some(u) => {
                image[x] = u;
                order.push(u);
                placed.insert(u);
            }
            None => {
                let mut witness = None;
                if order.len() >= s {
                    for_each_subset(&order, s, &mut |xs| {
                        let mut common = Bitset::full(n);
                        for &a in xs {
                            common.intersect_with(g.neighbors(a));
                        }
                        if common.len() >= tt {
                            witness = Some(BicliqueWitness::new(xs.to_vec(), common.iter().take(tt).collect()));
                            true
                        } else {
                            false
                        }
                    });
                }
                if let Some(w) = witness {
                    return Ok(BackOutcome::Biclique(w));
                }
                let degree = g.degree(v);
                if (degree as u128) >= threshold {
                    return Err(KstError::Internal("counting bound failed without a biclique"));
                }
                return Ok(BackOutcome::LowDegree { vertex: v, degree, threshold });
            }
        }
    }
    Ok(BackOutcome::Embedded { image, order })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KstOutcome {
    Certificate(DegeneracyCertificate),
    Biclique(BicliqueWitness),
    Embedding(InducedEmbedding),
}

/// `|S|^s · t`, saturating.
pub fn kst_threshold(s_tree_size: usize, s: usize, tt: usize) -> u128 {
    (s_tree_size as u128).saturating_pow(s as u32).saturating_mul(tt as u128)
}

/// Either a degeneracy certificate below `|S|^s·t`, a `K_{s,t}`, or an
/// induced copy of `h`. The tree `S` is trusted to force `K_{s,s}` in every
/// `h`-free graph containing it; when that trust is misplaced the error names
/// the copy of `S` that refutes it.
pub fn kst_pipeline(
    g: &Graph,
    s_tree: &Pattern,
    h: &Pattern,
    s: usize,
    tt: usize,
    budget: &mut Budget,
) -> Result<KstOutcome, KstError> {
    let threshold = kst_threshold(s_tree.vertex_count(), s, tt);
    let cert = degeneracy(g);
    if (cert.bound as u128) < threshold {
        return Ok(KstOutcome::Certificate(cert));
    }
    let core = core_at_least(g, usize::try_from(threshold).unwrap_or(usize::MAX));
    let (sub, old) = g.induced_subgraph(&core);
    let lift = |vs: &[Vertex]| vs.iter().map(|&v| old[v]).collect::<Vec<_>>();
    match build_back_bounded_tree(&sub, s_tree, s, tt)? {
        BackOutcome::Biclique(w) => Ok(KstOutcome::Biclique(BicliqueWitness::new(lift(&w.side_a), lift(&w.side_b)))),
        BackOutcome::LowDegree { .. } => Err(KstError::Internal("low-degree vertex inside the core")),
        BackOutcome::Embedded { image, .. } => {
            let tree_set = Bitset::from_iter(sub.vertex_count(), image.iter().copied());
            let (local, local_old) = sub.induced_subgraph(&tree_set);
            match find_biclique_budgeted(&local, s, s, budget) {
                SearchOutcome::Found(_) => return Err(KstError::Internal("K_{s,s} inside a back-bounded tree")),
                SearchOutcome::BudgetExhausted => return Err(KstError::Budget),
                SearchOutcome::NotFound => {}
            }
            match find_induced_tree_budgeted(&local, h, None, None, budget) {
                SearchOutcome::Found(e) => {
                    let image = e.image.iter().map(|&v| old[local_old[v]]).collect();
                    Ok(KstOutcome::Embedding(InducedEmbedding { pattern: e.pattern, image }))
                }
                SearchOutcome::BudgetExhausted => Err(KstError::Budget),
                SearchOutcome::NotFound => Err(KstError::SuppliedTree(lift(&image))),
            }
        }
    }
}
