mod common;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

use polydegen::certificate::{validate_biclique, validate_embedding};
use polydegen::degeneracy::degeneracy;
use polydegen::harness::{gen_projective, rng};
use polydegen::kst::{
    build_back_bounded_tree, check_back_bounded, heavy_outside, is_v_bag, kst_pipeline, kst_threshold, orient_color,
    pack_bags, weak_kst_color, weak_kst_constant, BackOutcome, KstError, KstOutcome, LocalDigraph, WeakOutcome,
};
use polydegen::search::Budget;
use polydegen::{Bitset, Graph, Pattern};

use common::{any_tuple, brute_has_biclique, seeded_gnp};

/// Orients the edges of `g` at random, flipping or dropping an edge when its
/// tail already has `k` out-neighbours.
fn random_orientation(g: &Graph, k: usize, seed: u64) -> LocalDigraph {
    let mut r = rng(seed);
    let mut edges: Vec<(usize, usize)> = g.edges().collect();
    edges.shuffle(&mut r);
    let mut j = LocalDigraph::new(g.vertex_count());
    for (mut a, mut b) in edges {
        if r.gen_bool(0.5) {
            std::mem::swap(&mut a, &mut b);
        }
        if j.out_degree(a) >= k {
            std::mem::swap(&mut a, &mut b);
        }
        if j.out_degree(a) < k {
            j.add_arc(a, b).unwrap();
        }
    }
    j
}

/// Brute isomorphism: some bijection from `h` onto `x ∪ {v}` sending the
/// root to `v` that preserves adjacency and non-adjacency.
fn oracle_v_bag(g: &Graph, v: usize, x: &[usize], h: &Pattern) -> bool {
    if x.len() + 1 != h.vertex_count() || x.contains(&v) {
        return false;
    }
    let mut verts = vec![v];
    verts.extend_from_slice(x);
    let k = verts.len();
    any_tuple(k, k, &mut |perm| {
        let img: Vec<usize> = perm.iter().map(|&i| verts[i]).collect();
        img[h.root()] == v && common::is_induced_copy(g, h, &img)
    })
}

fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        for mut rest in subsets(&items[i + 1..], k - 1) {
            rest.insert(0, items[i]);
            out.push(rest);
        }
    }
    out
}

fn binom(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

#[test]
fn orient_color_examples() {
    let mut c5 = LocalDigraph::new(5);
    for i in 0..5 {
        c5.add_arc(i, (i + 1) % 5).unwrap();
    }
    let c = orient_color(&c5, 1).unwrap();
    assert!(c.is_proper(&Graph::cycle(5)) && c.color_count() <= 3);

    // In-tree: every vertex points at its parent.
    let mut r = rng(1);
    let mut tree = LocalDigraph::new(30);
    for v in 1..30 {
        tree.add_arc(v, r.gen_range(0..v)).unwrap();
    }
    let c = orient_color(&tree, 1).unwrap();
    assert!(c.is_proper(&tree.underlying()) && c.color_count() <= 3);

    let j = random_orientation(&seeded_gnp(40, 0.1, 3), 3, 3);
    let c = orient_color(&j, 3).unwrap();
    assert!(c.is_proper(&j.underlying()) && c.color_count() <= 7);
    assert!(matches!(orient_color(&j, j.max_out_degree() - 1), Err(KstError::OutDegree { .. })));
    assert!(matches!(LocalDigraph::new(2).add_arc(1, 1), Err(KstError::SelfArc(1))));
}

#[test]
fn v_bag_examples() {
    let g = Graph::from_edges(3, [(0, 1)]).unwrap();
    let edge = Pattern::path(2);
    assert!(is_v_bag(&g, 0, &[1], &edge));
    assert!(!is_v_bag(&g, 0, &[2], &edge));
    let spider = Pattern::spider(2, 2);
    for seed in 0..6 {
        let g = seeded_gnp(9, 0.35, seed);
        for v in g.vertices() {
            let others: Vec<usize> = g.vertices().filter(|&u| u != v).collect();
            for x in subsets(&others, 4) {
                assert_eq!(is_v_bag(&g, v, &x, &spider), oracle_v_bag(&g, v, &x, &spider), "seed {seed} v {v} {x:?}");
            }
        }
    }
}

#[test]
fn pack_bags_examples() {
    let g = Graph::new(4);
    assert!(pack_bags(&g, 0, &Pattern::path(2), 5, None, &mut Budget::unlimited()).unwrap().images.is_empty());
    let star = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
    let f = pack_bags(&star, 0, &Pattern::path(2), 5, None, &mut Budget::unlimited()).unwrap();
    assert_eq!(f.bags(), vec![vec![1], vec![2], vec![3]]);
    assert!(!f.overflow);
}

#[test]
fn pack_bags_is_maximal() {
    let patterns = [Pattern::path(2), Pattern::path(3), Pattern::star(2), Pattern::spider(2, 2).with_root(1).unwrap()];
    for seed in 0..12 {
        let g = seeded_gnp(8 + (seed as usize % 5), 0.3, seed);
        for h in &patterns {
            for v in g.vertices() {
                let f = pack_bags(&g, v, h, 100, None, &mut Budget::unlimited()).unwrap();
                let bags = f.bags();
                let y = f.union(g.vertex_count());
                for (i, b) in bags.iter().enumerate() {
                    assert!(oracle_v_bag(&g, v, b, h));
                    assert!(bags[i + 1..].iter().all(|c| b.iter().all(|x| !c.contains(x))));
                }
                let others: Vec<usize> = g.vertices().filter(|&u| u != v).collect();
                for x in subsets(&others, h.vertex_count() - 1) {
                    if oracle_v_bag(&g, v, &x, h) {
                        assert!(x.iter().any(|&u| y.contains(u)), "seed {seed} v {v}: bag {x:?} misses Y_v");
                    }
                }
            }
        }
    }
}

fn check_weak(g: &Graph, h: &Pattern, s: usize, tt: usize, out: &WeakOutcome) {
    match out {
        WeakOutcome::Coloring(c) => {
            assert!(c.is_proper(g));
            assert!((c.color_count() as u128) <= weak_kst_constant(s, h.vertex_count()) * tt as u128);
        }
        WeakOutcome::Embedding(e) => {
            assert_eq!(&e.pattern, h);
            assert!(validate_embedding(g, e));
        }
        WeakOutcome::Biclique(w) => {
            assert!(w.side_a.len() >= s && w.side_b.len() >= tt);
            assert!(validate_biclique(g, w));
        }
    }
}

#[test]
fn weak_kst_examples() {
    let g = Graph::new(6);
    match weak_kst_color(&g, &Pattern::path(3), 2, 2, &mut Budget::unlimited()).unwrap() {
        WeakOutcome::Coloring(c) => assert_eq!(c.color_count(), 1),
        other => panic!("{other:?}"),
    }
    let c5 = Graph::cycle(5);
    let out = weak_kst_color(&c5, &Pattern::path(3), 2, 2, &mut Budget::unlimited()).unwrap();
    check_weak(&c5, &Pattern::path(3), 2, 2, &out);
}

#[test]
fn weak_kst_seeded_instances() {
    let targets = [Pattern::path(4), Pattern::star(3), Pattern::spider(2, 2)];
    for seed in 0..100u64 {
        let g = seeded_gnp(14, 0.15 + 0.05 * (seed % 4) as f64, seed);
        let h = &targets[seed as usize % targets.len()];
        let (s, tt) = (2 + seed as usize % 2, 2);
        let out = weak_kst_color(&g, h, s, tt, &mut Budget::unlimited()).unwrap();
        check_weak(&g, h, s, tt, &out);
    }
}

#[test]
fn back_bounded_examples() {
    let g = Graph::complete(4);
    match build_back_bounded_tree(&g, &Pattern::path(1), 2, 2).unwrap() {
        BackOutcome::Embedded { image, order } => assert!(image.len() == 1 && order.len() == 1),
        other => panic!("{other:?}"),
    }
    // Min degree 9 >= tt * 2^s = 8 with s = 2, tt = 2.
    let g = Graph::complete_bipartite(9, 9);
    match build_back_bounded_tree(&g, &Pattern::path(2), 2, 2).unwrap() {
        BackOutcome::Embedded { image, order } => assert!(check_back_bounded(&g, &Pattern::path(2), &image, &order, 2)),
        other => panic!("{other:?}"),
    }
    for s in 1..4 {
        let g = Graph::complete_bipartite(s + 1, 40);
        let r = Pattern::star(5);
        match build_back_bounded_tree(&g, &r, s, 3).unwrap() {
            BackOutcome::Embedded { image, order } => assert!(check_back_bounded(&g, &r, &image, &order, s)),
            BackOutcome::Biclique(w) => assert!(w.side_a.len() == s && w.side_b.len() == 3 && validate_biclique(&g, &w)),
            BackOutcome::LowDegree { vertex, degree, threshold } => {
                assert_eq!(g.degree(vertex), degree);
                assert!((degree as u128) < threshold);
            }
        }
    }
}

#[test]
fn heavy_outside_counting_audit() {
    let mut audited = 0;
    for seed in 0..200u64 {
        let g = seeded_gnp(12, [0.1, 0.15, 0.2][seed as usize % 3], seed);
        for (s, tt) in [(1, 2), (2, 2), (2, 3), (3, 2)] {
            if brute_has_biclique(&g, s, tt) {
                continue;
            }
            audited += 1;
            let mut r = rng(seed);
            let size = r.gen_range(1..=6);
            let mut vs: Vec<usize> = g.vertices().collect();
            vs.shuffle(&mut r);
            let set = Bitset::from_iter(g.vertex_count(), vs[..size].iter().copied());
            let direct = g
                .vertices()
                .filter(|&u| !set.contains(u) && set.iter().filter(|&x| g.has_edge(u, x)).count() >= s)
                .count();
            assert_eq!(heavy_outside(&g, &set, s), direct);
            assert!(direct as u128 <= (tt as u128 - 1) * binom(size, s));
            assert!(direct as u128 <= (tt as u128 - 1) * (size as u128).pow(s as u32));
        }
    }
    assert!(audited > 100);
}

#[test]
fn kst_pipeline_examples() {
    let mut stars = Graph::new(20);
    for c in [0, 5, 10, 15] {
        for l in 1..5 {
            stars.add_edge(c, c + l);
        }
    }
    match kst_pipeline(&stars, &Pattern::path(4), &Pattern::path(3), 2, 2, &mut Budget::unlimited()).unwrap() {
        KstOutcome::Certificate(c) => assert!(c.check(&stars).is_ok() && c.bound == 1),
        other => panic!("{other:?}"),
    }
    for q in [2, 3, 5] {
        let g = gen_projective(q).unwrap();
        let out = kst_pipeline(&g, &Pattern::path(4), &Pattern::path(3), 2, 2, &mut Budget::unlimited()).unwrap();
        match out {
            KstOutcome::Certificate(c) => {
                assert!(c.check(&g).is_ok());
                assert!((c.bound as u128) < kst_threshold(4, 2, 2));
            }
            KstOutcome::Biclique(w) => assert!(validate_biclique(&g, &w)),
            KstOutcome::Embedding(e) => assert!(validate_embedding(&g, &e)),
        }
    }
}

#[test]
fn kst_pipeline_dense_host() {
    // Degeneracy 6 >= |S|^s * t = 4, so the tree-building branch runs.
    let g = Graph::complete_bipartite(6, 6);
    match kst_pipeline(&g, &Pattern::path(2), &Pattern::path(2), 2, 1, &mut Budget::unlimited()) {
        Ok(KstOutcome::Biclique(w)) => assert!(validate_biclique(&g, &w)),
        Ok(KstOutcome::Embedding(e)) => assert!(validate_embedding(&g, &e)),
        Ok(KstOutcome::Certificate(_)) => panic!("degeneracy is above the threshold"),
        Err(e) => panic!("{e}"),
    }
}

proptest! {
    #[test]
    fn orientation_peels_within_2k(seed in 0u64..10_000, k in 1usize..5) {
        let g = seeded_gnp(25, 0.2, seed);
        let j = random_orientation(&g, k, seed);
        let u = j.underlying();
        prop_assert!(degeneracy(&u).bound <= 2 * k);
        let c = orient_color(&j, k).unwrap();
        prop_assert!(c.is_proper(&u));
        prop_assert!(c.color_count() <= 2 * k + 1);
    }

    #[test]
    fn weak_kst_outputs_validate(g in common::arb_graph(11), legs in 1usize..3, s in 2usize..4) {
        let h = Pattern::spider(legs, 2);
        let out = weak_kst_color(&g, &h, s, 2, &mut Budget::unlimited());
        if let Ok(out) = out {
            check_weak(&g, &h, s, 2, &out);
        } else {
            prop_assert!(g.vertex_count() == 0);
        }
    }
}
