mod common;

use proptest::prelude::*;

use polydegen::certificate::{validate_biclique, validate_embedding, validate_path_induced, CertificateError};
use polydegen::degeneracy::{degeneracy, greedy_color};
use polydegen::io::{format_graph, parse_graph, CertificateFile};
use polydegen::search::brute_degeneracy;
use polydegen::tree::{is_uniform, uniform_size};
use polydegen::{BicliqueWitness, Certificate, DegeneracyCertificate, Graph, InducedEmbedding, Pattern, RootedTree};

fn star(leaves: usize) -> (Graph, RootedTree) {
    let g = Graph::from_edges(leaves + 1, (1..=leaves).map(|v| (0, v))).unwrap();
    let t = RootedTree::from_parents(0, (1..=leaves).map(|v| (v, 0))).unwrap();
    (g, t)
}

#[test]
fn degeneracy_examples() {
    assert_eq!(degeneracy(&Graph::complete(5)).bound, 4);
    assert_eq!(degeneracy(&Graph::path(6)).bound, 1);
    assert_eq!(degeneracy(&star(4).0).bound, 1);
    assert_eq!(degeneracy(&Graph::petersen()).bound, 3);
    assert_eq!(degeneracy(&Graph::new(0)).bound, 0);
}

#[test]
fn greedy_examples() {
    let k4 = Graph::complete(4);
    let c = greedy_color(&k4, &degeneracy(&k4)).unwrap();
    assert_eq!(c.color_count(), 4);
    let c5 = Graph::cycle(5);
    let c = greedy_color(&c5, &degeneracy(&c5)).unwrap();
    assert!(c.is_proper(&c5) && c.color_count() <= 3);
    let e = Graph::new(6);
    assert_eq!(greedy_color(&e, &degeneracy(&e)).unwrap().color_count(), 1);
}

#[test]
fn tampered_certificate_names_position() {
    let g = Graph::complete(4);
    let bad = DegeneracyCertificate { ordering: vec![0, 1, 2, 3], bound: 2 };
    let err = greedy_color(&g, &bad).unwrap_err();
    assert!(matches!(err, CertificateError::Violated { position: 0, .. }));
    assert!(err.to_string().starts_with("certificate violated at position 0"));
}

#[test]
fn path_induced_examples() {
    let (g, t) = star(3);
    assert!(validate_path_induced(&g, &t));
    let tri = Graph::complete(3);
    let path = RootedTree::from_parents(0, [(1, 0), (2, 1)]).unwrap();
    assert!(!validate_path_induced(&tri, &path));
    // Chords between sibling subtrees are allowed.
    let mut g = Graph::from_edges(5, [(0, 1), (0, 2), (1, 3), (2, 4)]).unwrap();
    g.add_edge(3, 4);
    g.add_edge(1, 4);
    let t = RootedTree::from_parents(0, [(1, 0), (2, 0), (3, 1), (4, 2)]).unwrap();
    assert!(validate_path_induced(&g, &t));
}

#[test]
fn uniform_examples() {
    let (_, t) = star(3);
    assert!(is_uniform(&t, 3, 1));
    assert!(!is_uniform(&t, 2, 1));
    let bin = RootedTree::from_parents(0, [(1, 0), (2, 0), (3, 1), (4, 1), (5, 2), (6, 2)]).unwrap();
    assert!(is_uniform(&bin, 2, 2));
    assert_eq!(bin.len(), uniform_size(2, 2));
}

#[test]
fn validator_examples() {
    let k33 = Graph::complete_bipartite(3, 3);
    assert!(validate_biclique(&k33, &BicliqueWitness::new(vec![0, 1, 2], vec![3, 4, 5])));
    assert!(Pattern::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0)], 0).is_err());
    let c5 = Graph::cycle(5);
    assert!(validate_embedding(&c5, &InducedEmbedding { pattern: Pattern::path(4), image: vec![0, 1, 2, 3] }));
    assert!(!validate_embedding(&Graph::cycle(4), &InducedEmbedding { pattern: Pattern::path(4), image: vec![0, 1, 2, 3] }));
    let tri = Graph::complete(3);
    assert!(!validate_embedding(&tri, &InducedEmbedding { pattern: Pattern::path(3), image: vec![0, 1, 2] }));
}

#[test]
fn certificate_json_kinds() {
    let g = Graph::complete_bipartite(2, 2);
    let certs = [
        Certificate::Degeneracy(degeneracy(&g)),
        Certificate::Biclique(BicliqueWitness::new(vec![0, 1], vec![2, 3])),
        Certificate::InducedEmbedding(InducedEmbedding { pattern: Pattern::path(3), image: vec![0, 2, 1] }),
    ];
    for (c, kind) in certs.into_iter().zip(["degeneracy", "biclique", "induced_embedding"]) {
        assert!(c.check(&g).is_ok());
        let file = CertificateFile { graph: None, certificate: c };
        let json = file.to_json();
        assert!(json.contains(&format!("\"kind\": \"{kind}\"")));
        assert_eq!(CertificateFile::from_json(&json).unwrap(), file);
    }
}

#[test]
fn degeneracy_matches_oracle_on_all_small_graphs() {
    for n in 0..=5 {
        for g in common::all_graphs(n) {
            assert_eq!(degeneracy(&g).bound, brute_degeneracy(&g).unwrap());
        }
    }
}

proptest! {
    #[test]
    fn degeneracy_is_exact(g in common::arb_graph(12)) {
        let cert = degeneracy(&g);
        prop_assert!(cert.check(&g).is_ok());
        prop_assert_eq!(cert.bound, brute_degeneracy(&g).unwrap());
    }

    #[test]
    fn greedy_is_proper_and_small(g in common::arb_graph(30)) {
        let cert = degeneracy(&g);
        let c = greedy_color(&g, &cert).unwrap();
        prop_assert!(c.is_proper(&g));
        prop_assert!(c.color_count() <= cert.bound + 1);
    }

    #[test]
    fn graph_text_roundtrip(g in common::arb_graph(15)) {
        prop_assert_eq!(parse_graph(&format_graph(&g)).unwrap().graph, g);
    }

    #[test]
    fn symmetric_and_irreflexive(g in common::arb_graph(15)) {
        for u in g.vertices() {
            prop_assert!(!g.has_edge(u, u));
            for v in g.vertices() {
                prop_assert_eq!(g.has_edge(u, v), g.has_edge(v, u));
            }
        }
    }

    #[test]
    fn uniform_size_bound(zeta in 2usize..6, eta in 0usize..5) {
        let size = uniform_size(zeta, eta);
        prop_assert_eq!(size, (0..=eta as u32).map(|i| zeta.pow(i)).sum::<usize>());
        prop_assert!(size <= zeta.pow(eta as u32 + 1));
    }

    #[test]
    fn path_induced_is_monotone(seed in 0u64..500, cut in 1usize..15) {
        let p = polydegen::harness::gen_planted(2, 3, 4, 0.4, seed).unwrap();
        prop_assert!(validate_path_induced(&p.graph, &p.scaffold));
        let v = cut % p.scaffold.len();
        // Removing the subtree at a non-root vertex leaves a rooted subtree.
        if v != p.scaffold.root() {
            let drop: Vec<usize> = p.scaffold.subtree_at(v).unwrap().members().collect();
            let pairs: Vec<(usize, usize)> = p.scaffold.parent_pairs().filter(|(c, _)| !drop.contains(c)).collect();
            let sub = RootedTree::from_parents(p.scaffold.root(), pairs).unwrap();
            prop_assert!(validate_path_induced(&p.graph, &sub));
        }
        prop_assert!(validate_path_induced(&p.graph, &p.scaffold.subtree_at(v).unwrap()));
    }
}
