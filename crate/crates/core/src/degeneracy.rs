//! Degeneracy by bucket-queue peeling, and greedy colouring along a
//! peeling order.

use std::collections::BTreeSet;

use crate::bitset::Bitset;
use crate::certificate::{CertificateError, DegeneracyCertificate};
use crate::graph::{Graph, Vertex};

/// Exact degeneracy with a peeling order. At every step the remaining vertex
/// of minimum degree is removed, ties going to the smallest id.
pub fn degeneracy(g: &Graph) -> DegeneracyCertificate {
    let n = g.vertex_count();
    let mut deg: Vec<usize> = g.vertices().map(|v| g.degree(v)).collect();
    let max_deg = deg.iter().copied().max().unwrap_or(0);
    let mut buckets: Vec<BTreeSet<Vertex>> = vec![BTreeSet::new(); max_deg + 1];
    for v in g.vertices() {
        buckets[deg[v]].insert(v);
    }
    let mut alive = Bitset::full(n);
    let mut ordering = Vec::with_capacity(n);
    let mut bound = 0;
    let mut low = 0;
    for _ in 0..n {
        while buckets[low].is_empty() {
            low += 1;
        }
        let v = buckets[low].pop_first().expect("nonempty bucket");
        bound = bound.max(low);
        alive.remove(v);
        ordering.push(v);
        for w in g.neighbors(v).intersection(&alive).iter() {
            buckets[deg[w]].remove(&w);
            deg[w] -= 1;
            buckets[deg[w]].insert(w);
        }
        low = low.saturating_sub(1);
    }
    DegeneracyCertificate { ordering, bound }
}

/// Vertices surviving repeated deletion of vertices with degree `< k`.
pub fn core_at_least(g: &Graph, k: usize) -> Bitset {
    let mut alive = Bitset::full(g.vertex_count());
    let mut deg: Vec<usize> = g.vertices().map(|v| g.degree(v)).collect();
    let mut stack: Vec<Vertex> = g.vertices().filter(|&v| deg[v] < k).collect();
    while let Some(v) = stack.pop() {
        if !alive.remove(v) {
            continue;
        }
        for w in g.neighbors(v).intersection(&alive).iter() {
            deg[w] -= 1;
            if deg[w] + 1 == k {
                stack.push(w);
            }
        }
    }
    alive
}

/// A vertex colouring; `colors[v]` is the colour of `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    pub colors: Vec<usize>,
}

impl Coloring {
    pub fn color_count(&self) -> usize {
        self.colors.iter().copied().collect::<BTreeSet<_>>().len()
    }

    pub fn is_proper(&self, g: &Graph) -> bool {
        self.colors.len() == g.vertex_count() && g.edges().all(|(u, v)| self.colors[u] != self.colors[v])
    }

    /// Vertices grouped by colour, in ascending colour order.
    pub fn classes(&self) -> Vec<Vec<Vertex>> {
        let k = self.colors.iter().copied().max().map_or(0, |c| c + 1);
        let mut out = vec![Vec::new(); k];
        for (v, &c) in self.colors.iter().enumerate() {
            out[c].push(v);
        }
        out.retain(|c| !c.is_empty());
        out
    }
}

/// Colours vertices in reverse peeling order with the smallest free colour,
/// so at most `cert.bound + 1` colours are used.
pub fn greedy_color(g: &Graph, cert: &DegeneracyCertificate) -> Result<Coloring, CertificateError> {
    cert.check(g)?;
    let n = g.vertex_count();
    let mut colors = vec![usize::MAX; n];
    for &v in cert.ordering.iter().rev() {
        let taken: BTreeSet<usize> = g
            .neighbors(v)
            .iter()
            .map(|w| colors[w])
            .filter(|&c| c != usize::MAX)
            .collect();
        colors[v] = (0..).find(|c| !taken.contains(c)).expect("unbounded range");
    }
    Ok(Coloring { colors })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_graph() {
        let c = degeneracy(&Graph::complete(5));
        assert_eq!(c.bound, 4);
        assert!(c.check(&Graph::complete(5)).is_ok());
    }

    #[test]
    fn trees_are_one_degenerate() {
        let g = Graph::from_edges(6, [(0, 1), (0, 2), (2, 3), (2, 4), (4, 5)]).unwrap();
        assert_eq!(degeneracy(&g).bound, 1);
        assert_eq!(degeneracy(&Graph::path(2)).bound, 1);
    }

    #[test]
    fn petersen_is_three() {
        assert_eq!(degeneracy(&Graph::petersen()).bound, 3);
    }

    #[test]
    fn empty_graph() {
        let c = degeneracy(&Graph::new(0));
        assert_eq!(c.bound, 0);
        assert!(c.ordering.is_empty());
    }

    #[test]
    fn ties_go_to_smallest_id() {
        let c = degeneracy(&Graph::cycle(5));
        assert_eq!(c.ordering[0], 0);
    }

    #[test]
    fn greedy_colourings() {
        let k4 = Graph::complete(4);
        let col = greedy_color(&k4, &degeneracy(&k4)).unwrap();
        assert_eq!(col.color_count(), 4);
        assert!(col.is_proper(&k4));

        let c5 = Graph::cycle(5);
        let col = greedy_color(&c5, &degeneracy(&c5)).unwrap();
        assert!(col.is_proper(&c5));
        assert!(col.color_count() <= 3);

        let empty = Graph::new(4);
        assert_eq!(greedy_color(&empty, &degeneracy(&empty)).unwrap().color_count(), 1);
    }

    #[test]
    fn greedy_rejects_bad_certificate() {
        let k4 = Graph::complete(4);
        let bad = DegeneracyCertificate { ordering: vec![0, 1, 2, 3], bound: 1 };
        let err = greedy_color(&k4, &bad).unwrap_err();
        assert!(err.to_string().contains("certificate violated at position 0"));
    }

    #[test]
    fn cores() {
        let mut g = Graph::complete(4);
        let mut g2 = Graph::new(6);
        for (u, v) in g.edges() {
            g2.add_edge(u, v);
        }
        g2.add_edge(3, 4);
        g2.add_edge(4, 5);
        g = g2;
        assert_eq!(core_at_least(&g, 3).to_vec(), vec![0, 1, 2, 3]);
        assert!(core_at_least(&g, 4).is_empty());
    }
}
