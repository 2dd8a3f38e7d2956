//! Brute-force oracles shared by the integration tests. They enumerate
//! instead of searching, so they share no code paths with the library.
#![allow(dead_code)]

use polydegen::tree::Pattern;
use polydegen::Graph;

/// Every labelled graph on `n` vertices.
pub fn all_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let total = 1u64 << pairs.len();
    (0..total).map(move |mask| {
        let mut g = Graph::new(n);
        for (i, &(u, v)) in pairs.iter().enumerate() {
            if mask >> i & 1 == 1 {
                g.add_edge(u, v);
            }
        }
        g
    })
}

/// Calls `f` on every ordered `k`-tuple of distinct vertices of `0..n`; stops
/// when `f` returns true.
pub fn any_tuple(n: usize, k: usize, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    fn rec(n: usize, k: usize, cur: &mut Vec<usize>, used: &mut Vec<bool>, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if cur.len() == k {
            return f(cur);
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                let hit = rec(n, k, cur, used, f);
                cur.pop();
                used[v] = false;
                if hit {
                    return true;
                }
            }
        }
        false
    }
    rec(n, k, &mut Vec::new(), &mut vec![false; n], f)
}

/// True iff `image` maps `h` onto an induced copy in `g`.
pub fn is_induced_copy(g: &Graph, h: &Pattern, image: &[usize]) -> bool {
    (0..image.len()).all(|a| (a + 1..image.len()).all(|b| h.has_edge(a, b) == g.has_edge(image[a], image[b])))
}

/// Exhaustive over ordered tuples.
pub fn brute_has_induced(g: &Graph, h: &Pattern, root_image: Option<usize>) -> bool {
    any_tuple(g.vertex_count(), h.vertex_count(), &mut |img| {
        root_image.is_none_or(|r| img[h.root()] == r) && is_induced_copy(g, h, img)
    })
}

/// Every sequence of `len` distinct vertices starting at `root` that
/// induces a path in that order.
pub fn brute_induced_paths(g: &Graph, root: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if len == 0 {
        return out;
    }
    any_tuple(g.vertex_count(), len, &mut |seq| {
        if seq[0] == root && g.is_induced_path(seq) {
            out.push(seq.to_vec());
        }
        false
    });
    out
}

/// True iff some vertex subset of size greater than `ell` induces a
/// connected 2-regular graph.
pub fn brute_has_long_hole(g: &Graph, ell: usize) -> bool {
    let n = g.vertex_count();
    assert!(n <= 20);
    (0u32..1 << n).any(|mask| {
        let vs: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        if vs.len() <= ell || vs.len() < 3 {
            return false;
        }
        let deg = |v: usize| vs.iter().filter(|&&u| g.has_edge(u, v)).count();
        if vs.iter().any(|&v| deg(v) != 2) {
            return false;
        }
        let mut seen = vec![vs[0]];
        let mut stack = vec![vs[0]];
        while let Some(v) = stack.pop() {
            for &u in &vs {
                if g.has_edge(u, v) && !seen.contains(&u) {
                    seen.push(u);
                    stack.push(u);
                }
            }
        }
        seen.len() == vs.len()
    })
}

/// Random chordal graph: each new vertex joins a clique of the graph so far
/// (a random vertex and a random subset of its earlier neighbours that forms
/// a clique).
pub fn chordal(n: usize, seed: u64) -> Graph {
    use rand::Rng;
    let mut r = polydegen::harness::rng(seed);
    let mut g = Graph::new(n);
    for v in 1..n {
        let a = r.gen_range(0..v);
        let mut clique = vec![a];
        for u in g.neighbors(a).to_vec() {
            if u < v && r.gen_bool(0.5) && clique.iter().all(|&c| g.has_edge(c, u)) {
                clique.push(u);
            }
        }
        for c in clique {
            g.add_edge(v, c);
        }
    }
    g
}

/// Graphs on at most `max_n` vertices with arbitrary edge sets.
pub fn arb_graph(max_n: usize) -> impl proptest::strategy::Strategy<Value = Graph> {
    use proptest::prelude::*;
    (0..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * n.saturating_sub(1) / 2).prop_map(move |bits| {
            let mut g = Graph::new(n);
            let mut k = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if bits[k] {
                        g.add_edge(u, v);
                    }
                    k += 1;
                }
            }
            g
        })
    })
}

/// Disjoint `s`- and `t`-subsets with every cross pair adjacent, by
/// enumerating bitmasks.
pub fn brute_has_biclique(g: &Graph, s: usize, t: usize) -> bool {
    let n = g.vertex_count();
    assert!(n <= 16);
    let full = (1u32 << n) - 1;
    let masks: Vec<u32> = (0..=full).filter(|m| m.count_ones() as usize == s).collect();
    masks.iter().any(|&a| {
        let common = (0..n)
            .filter(|&v| a >> v & 1 == 0 && (0..n).all(|u| a >> u & 1 == 0 || g.has_edge(u, v)))
            .count();
        common >= t
    })
}

pub fn brute_tau_oracle(g: &Graph) -> usize {
    (1..=g.vertex_count() / 2).take_while(|&t| brute_has_biclique(g, t, t)).last().unwrap_or(0)
}

/// Seeded G(n, p) built directly from the test's own RNG stream.
pub fn seeded_gnp(n: usize, p: f64, seed: u64) -> Graph {
    use rand::{Rng, SeedableRng};
    let mut r = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if r.gen_bool(p) {
                g.add_edge(u, v);
            }
        }
    }
    g
}

/// `K_{2,2}` by counting common neighbours of every pair.
pub fn has_k22(g: &Graph) -> bool {
    let n = g.vertex_count();
    (0..n).any(|a| (a + 1..n).any(|b| (0..n).filter(|&c| g.has_edge(a, c) && g.has_edge(b, c)).count() >= 2))
}

/// Planted uniform tree with every `K_{t,t}` broken by deleting a non-tree
/// edge.
pub fn planted_kst_free(
    zeta: usize,
    eta: usize,
    extra: usize,
    noise: f64,
    seed: u64,
    tt: usize,
) -> (Graph, polydegen::RootedTree) {
    let p = polydegen::harness::gen_planted(zeta, eta, extra, noise, seed).unwrap();
    let mut g = p.graph;
    let tree_edge = |a: usize, b: usize| p.scaffold.parent(a) == Some(b) || p.scaffold.parent(b) == Some(a);
    while let Some(w) = polydegen::search::find_biclique(&g, tt, tt) {
        let (a, b) = w
            .side_a
            .iter()
            .flat_map(|&a| w.side_b.iter().map(move |&b| (a, b)))
            .find(|&(a, b)| !tree_edge(a, b))
            .expect("a biclique is not a forest");
        g.remove_edge(a, b);
    }
    (g, p.scaffold)
}

/// Every rooted tree on `n` vertices as a parent array with `parent[i] < i`
/// (root 0). Isomorphism classes repeat.
pub fn recursive_trees(n: usize) -> Vec<Pattern> {
    let mut out = Vec::new();
    let mut parents = vec![0usize; n];
    fn rec(i: usize, n: usize, parents: &mut Vec<usize>, out: &mut Vec<Pattern>) {
        if i == n {
            let edges = (1..n).map(|v| (parents[v], v)).collect();
            out.push(Pattern::new(n, edges, 0).unwrap());
            return;
        }
        for p in 0..i {
            parents[i] = p;
            rec(i + 1, n, parents, out);
        }
    }
    if n > 0 {
        rec(1, n, &mut parents, &mut out);
    }
    out
}
