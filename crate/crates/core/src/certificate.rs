//! The independently checkable outputs: degeneracy orderings, induced
//! embeddings and biclique witnesses, plus their validators.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset::Bitset;
use crate::graph::{Graph, Vertex};
use crate::tree::{Pattern, RootedTree};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CertificateError {
    #[error("ordering has {got} entries, graph has {n} vertices")]
    WrongLength { got: usize, n: usize },
    #[error("ordering is not a permutation (vertex {0} repeated or out of range)")]
    NotPermutation(Vertex),
    #[error("certificate violated at position {position}: vertex {vertex} has {later} later neighbours, bound is {bound}")]
    Violated {
        position: usize,
        vertex: Vertex,
        later: usize,
        bound: usize,
    },
    #[error("embedding maps {got} vertices, pattern has {expected}")]
    EmbeddingArity { got: usize, expected: usize },
    #[error("embedding is not injective (host vertex {0} used twice)")]
    NotInjective(Vertex),
    #[error("host vertex {0} out of range")]
    OutOfRange(Vertex),
    #[error("pattern pair {0}-{1}: adjacency not preserved")]
    NotInduced(usize, usize),
    #[error("biclique sides overlap at {0}")]
    SidesOverlap(Vertex),
    #[error("biclique side sizes do not match the declared s, t")]
    SideSize,
    #[error("biclique pair {0}-{1} is not an edge")]
    MissingEdge(Vertex, Vertex),
}

/// A peeling order: each vertex has at most `bound` neighbours after it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegeneracyCertificate {
    pub ordering: Vec<Vertex>,
    pub bound: usize,
}

impl DegeneracyCertificate {
    pub fn check(&self, g: &Graph) -> Result<(), CertificateError> {
        let n = g.vertex_count();
        if self.ordering.len() != n {
            return Err(CertificateError::WrongLength {
                got: self.ordering.len(),
                n,
            });
        }
        let mut later = Bitset::full(n);
        let mut seen = Bitset::new(n);
        for &v in &self.ordering {
            if v >= n || !seen.insert(v) {
                return Err(CertificateError::NotPermutation(v));
            }
        }
        for (position, &v) in self.ordering.iter().enumerate() {
            later.remove(v);
            let count = g.neighbors(v).intersection_len(&later);
            if count > self.bound {
                return Err(CertificateError::Violated {
                    position,
                    vertex: v,
                    later: count,
                    bound: self.bound,
                });
            }
        }
        Ok(())
    }
}

/// An injective map from pattern vertices to host vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InducedEmbedding {
    pub pattern: Pattern,
    pub image: Vec<Vertex>,
}

impl InducedEmbedding {
    pub fn check(&self, g: &Graph) -> Result<(), CertificateError> {
        let k = self.pattern.vertex_count();
        if self.image.len() != k {
            return Err(CertificateError::EmbeddingArity {
                got: self.image.len(),
                expected: k,
            });
        }
        let mut used = Bitset::new(g.vertex_count());
        for &v in &self.image {
            if v >= g.vertex_count() {
                return Err(CertificateError::OutOfRange(v));
            }
            if !used.insert(v) {
                return Err(CertificateError::NotInjective(v));
            }
        }
        let pg = self.pattern.as_graph();
        for a in 0..k {
            for b in a + 1..k {
                if pg.has_edge(a, b) != g.has_edge(self.image[a], self.image[b]) {
                    return Err(CertificateError::NotInduced(a, b));
                }
            }
        }
        Ok(())
    }
}

/// A (not necessarily induced) `K_{s,t}` subgraph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BicliqueWitness {
    pub side_a: Vec<Vertex>,
    pub side_b: Vec<Vertex>,
    pub s: usize,
    pub t: usize,
}

impl BicliqueWitness {
    pub fn new(side_a: Vec<Vertex>, side_b: Vec<Vertex>) -> Self {
        let (s, t) = (side_a.len(), side_b.len());
        BicliqueWitness { side_a, side_b, s, t }
    }

    pub fn check(&self, g: &Graph) -> Result<(), CertificateError> {
        let n = g.vertex_count();
        let mut seen = Bitset::new(n);
        for &v in self.side_a.iter().chain(&self.side_b) {
            if v >= n {
                return Err(CertificateError::OutOfRange(v));
            }
            if !seen.insert(v) {
                return Err(CertificateError::SidesOverlap(v));
            }
        }
        if self.side_a.len() != self.s || self.side_b.len() != self.t {
            return Err(CertificateError::SideSize);
        }
        for &a in &self.side_a {
            for &b in &self.side_b {
                if !g.has_edge(a, b) {
                    return Err(CertificateError::MissingEdge(a, b));
                }
            }
        }
        Ok(())
    }
}

/// Any of the three pipeline outcomes, tagged by `kind` when serialised.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    Degeneracy(DegeneracyCertificate),
    InducedEmbedding(InducedEmbedding),
    Biclique(BicliqueWitness),
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::Degeneracy(_) => "degeneracy",
            Certificate::InducedEmbedding(_) => "induced_embedding",
            Certificate::Biclique(_) => "biclique",
        }
    }

    pub fn check(&self, g: &Graph) -> Result<(), CertificateError> {
        match self {
            Certificate::Degeneracy(c) => c.check(g),
            Certificate::InducedEmbedding(e) => e.check(g),
            Certificate::Biclique(w) => w.check(g),
        }
    }
}

pub fn validate_embedding(g: &Graph, e: &InducedEmbedding) -> bool {
    e.check(g).is_ok()
}

pub fn validate_biclique(g: &Graph, w: &BicliqueWitness) -> bool {
    w.check(g).is_ok()
}

/// True iff `t` lives in `g` and every root-to-vertex path of `t` is an
/// induced path of `g`.
pub fn validate_path_induced(g: &Graph, t: &RootedTree) -> bool {
    if t.check_in(g).is_err() {
        return false;
    }
    // forbidden[v] = union of neighbourhoods of v's strict ancestors other
    // than its parent; v must avoid all of it.
    let n = g.vertex_count();
    let mut stack: Vec<(Vertex, Bitset)> = vec![(t.root(), Bitset::new(n))];
    while let Some((v, above)) = stack.pop() {
        // `above` holds N[a] for every strict ancestor a of v except the parent.
        if above.contains(v) {
            return false;
        }
        let mut below = above;
        if let Some(p) = t.parent(v) {
            below.union_with(g.neighbors(p));
            below.insert(p);
        }
        for &c in t.children(v) {
            stack.push((c, below.clone()));
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degeneracy_certificate_check() {
        let g = Graph::complete(4);
        let good = DegeneracyCertificate { ordering: vec![0, 1, 2, 3], bound: 3 };
        assert!(good.check(&g).is_ok());
        let tight = DegeneracyCertificate { ordering: vec![0, 1, 2, 3], bound: 2 };
        assert!(matches!(
            tight.check(&g),
            Err(CertificateError::Violated { position: 0, .. })
        ));
        let dup = DegeneracyCertificate { ordering: vec![0, 0, 2, 3], bound: 3 };
        assert_eq!(dup.check(&g), Err(CertificateError::NotPermutation(0)));
    }

    #[test]
    fn biclique_k33() {
        let g = Graph::complete_bipartite(3, 3);
        let w = BicliqueWitness::new(vec![0, 1, 2], vec![3, 4, 5]);
        assert!(validate_biclique(&g, &w));
        let bad = BicliqueWitness::new(vec![0, 1], vec![2, 3]);
        assert!(!validate_biclique(&g, &bad));
    }

    #[test]
    fn embeddings() {
        let c4 = Pattern::new(4, vec![(0, 1), (1, 2), (2, 3)], 0).unwrap();
        let host = Graph::cycle(4);
        // P4 into C4 is not induced: the ends are adjacent.
        let e = InducedEmbedding { pattern: c4, image: vec![0, 1, 2, 3] };
        assert!(!validate_embedding(&host, &e));
        let p3 = InducedEmbedding { pattern: Pattern::path(3), image: vec![0, 1, 2] };
        assert!(validate_embedding(&host, &p3));
        assert!(!validate_embedding(&Graph::complete(3), &p3));
    }

    #[test]
    fn path_induced_trees() {
        let star = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2)]).unwrap();
        let t = RootedTree::from_parents(0, [(1, 0), (2, 0), (3, 0)]).unwrap();
        assert!(validate_path_induced(&star, &t));

        let tri = Graph::complete(3);
        let path = RootedTree::from_parents(0, [(1, 0), (2, 1)]).unwrap();
        assert!(!validate_path_induced(&tri, &path));
        assert!(validate_path_induced(&Graph::path(3), &path));
    }

    #[test]
    fn certificate_json_is_tagged() {
        let c = Certificate::Degeneracy(DegeneracyCertificate { ordering: vec![1, 0], bound: 1 });
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(s, r#"{"kind":"degeneracy","ordering":[1,0],"bound":1}"#);
        let back: Certificate = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
    }
}
