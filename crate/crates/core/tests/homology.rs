mod common;

use proptest::prelude::*;
use reachhom::demo::{complex, rp2, simplex_boundary};
use reachhom::digraph::{face_graph, hasse_diagram};
use reachhom::random::{random_small_digraph, rng};
use reachhom::rcomplex::{reachability_homology, HomologyOptions};
use reachhom::{CoeffRing, DiGraph, Error, HomologySummary, Method, ReachabilityComplex};

fn opts(max_degree: usize, method: Method) -> HomologyOptions {
    HomologyOptions { max_degree, method, ..Default::default() }
}

fn assert_matches(s: &HomologySummary, oracle: &[common::Group], what: &str) {
    for (k, (b, t)) in oracle.iter().enumerate() {
        assert_eq!(s.betti_at(k), *b, "{what}: betti in degree {k}");
        assert_eq!(s.torsion_at(k), *t, "{what}: torsion in degree {k}");
    }
}

fn graph_from_mask(n: usize, mask: u64) -> DiGraph {
    let mut edges = Vec::new();
    let mut bit = 0;
    for u in 0..n {
        for v in 0..n {
            if u != v {
                if mask >> bit & 1 == 1 {
                    edges.push((u, v));
                }
                bit += 1;
            }
        }
    }
    DiGraph::from_parts((0..n).map(|i| format!("v{i}")), &edges)
}

fn small_graph() -> impl Strategy<Value = DiGraph> {
    (1usize..=5, any::<u64>()).prop_map(|(n, m)| graph_from_mask(n, m))
}

#[test]
fn integral_homology_matches_brute_force() {
    let mut r = rng(101);
    for i in 0..60 {
        let g = random_small_digraph(&mut r, 4);
        let oracle = common::rh(&g, 3, None);
        for method in [Method::Truncated, Method::Condensation] {
            let s = reachability_homology(&g, CoeffRing::Z, opts(3, method)).unwrap();
            assert_matches(&s, &oracle, &format!("graph {i} {method:?}"));
        }
    }
}

#[test]
fn mod_p_homology_matches_brute_force() {
    let mut r = rng(202);
    for i in 0..40 {
        let g = random_small_digraph(&mut r, 5);
        for p in [2u64, 3] {
            let oracle = common::rh(&g, 3, Some(p as i64));
            let s = reachability_homology(&g, CoeffRing::Fp(p), opts(3, Method::Both)).unwrap();
            assert_matches(&s, &oracle, &format!("graph {i} mod {p}"));
        }
    }
}

#[test]
fn rational_betti_is_free_rank_over_integers() {
    let mut r = rng(303);
    for _ in 0..30 {
        let g = random_small_digraph(&mut r, 5);
        let z = reachability_homology(&g, CoeffRing::Z, opts(3, Method::Both)).unwrap();
        let q = reachability_homology(&g, CoeffRing::Q, opts(3, Method::Both)).unwrap();
        for k in 0..=3 {
            assert_eq!(z.betti_at(k), q.betti_at(k));
            assert!(q.torsion_at(k).is_empty());
        }
    }
}

#[test]
fn face_and_hasse_graphs_carry_simplicial_homology() {
    let cases = [("boundary of triangle", simplex_boundary(2)), ("boundary of tetrahedron", simplex_boundary(3)), ("rp2", rp2())];
    for (name, s) in cases {
        let facets: Vec<Vec<usize>> = s.facets().to_vec();
        for p in [None, Some(2)] {
            let oracle = common::simplicial_homology(&facets, p);
            let ring = p.map_or(CoeffRing::Z, |p| CoeffRing::Fp(p as u64));
            for (kind, g) in [("face", face_graph(&s)), ("hasse", hasse_diagram(&s))] {
                let h = reachability_homology(&g, ring, opts(oracle.len(), Method::Condensation)).unwrap();
                assert_matches(&h, &oracle, &format!("{name} {kind} {p:?}"));
                assert_eq!(h.betti_at(oracle.len()), 0);
            }
        }
    }
    let rp = common::simplicial_homology(&rp2().facets().to_vec(), None);
    assert_eq!(rp, vec![(1, vec![]), (0, vec![2]), (0, vec![])]);
}

#[test]
fn disjoint_union_adds_betti_numbers() {
    let s = complex(&["01", "12", "20", "ab"]);
    let h = reachability_homology(&hasse_diagram(&s), CoeffRing::Z, opts(3, Method::Both)).unwrap();
    assert_eq!((0..=3).map(|k| h.betti_at(k)).collect::<Vec<_>>(), vec![2, 1, 0, 0]);
}

#[test]
fn cap_is_enforced() {
    let g = DiGraph::from_labeled_edges(&[("a", "b"), ("b", "c"), ("c", "a")]);
    let err = ReachabilityComplex::truncated(&g, 4, 20).unwrap_err();
    assert!(matches!(err, Error::Resource { .. }));
    let s = reachability_homology(&g, CoeffRing::Z, HomologyOptions { max_degree: 4, method: Method::Truncated, cap: 20 });
    assert_eq!(s.unwrap_err().kind(), "resource");
}

#[test]
fn empty_and_single_vertex() {
    let pt = DiGraph::from_parts(["x"], &[]);
    let s = reachability_homology(&pt, CoeffRing::Z, opts(4, Method::Both)).unwrap();
    assert_eq!(s.betti_at(0), 1);
    assert!((1..=4).all(|k| s.betti_at(k) == 0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn boundary_squares_to_zero(g in small_graph()) {
        let rc = ReachabilityComplex::truncated(&g, 4, 1_000_000).unwrap();
        for k in 2..=4 {
            let dd = rc.boundary_matrix(k - 1).mul(&rc.boundary_matrix(k)).unwrap();
            prop_assert!(dd.is_zero());
        }
    }

    #[test]
    fn generators_are_the_brute_force_tuples(g in small_graph()) {
        let rc = ReachabilityComplex::truncated(&g, 3, 1_000_000).unwrap();
        let oracle = common::tuples(&common::closure(&g), 3);
        for (k, ts) in oracle.iter().enumerate() {
            prop_assert_eq!(rc.dim(k), ts.len());
            for t in ts {
                let t: Vec<u32> = t.iter().map(|&v| v as u32).collect();
                prop_assert!(rc.is_generator(&t));
            }
        }
    }

    #[test]
    fn routes_agree(g in small_graph()) {
        let a = reachability_homology(&g, CoeffRing::Z, opts(3, Method::Truncated)).unwrap();
        let b = reachability_homology(&g, CoeffRing::Z, opts(3, Method::Condensation)).unwrap();
        for k in 0..=3 {
            prop_assert_eq!(a.betti_at(k), b.betti_at(k));
            prop_assert_eq!(a.torsion_at(k), b.torsion_at(k));
        }
    }

    #[test]
    fn depends_only_on_reachability(g in small_graph(), pick in any::<u64>()) {
        // Add one edge u → w that is already implied by a path.
        let leq = common::closure(&g);
        let implied: Vec<(usize, usize)> = (0..g.n())
            .flat_map(|u| (0..g.n()).map(move |w| (u, w)))
            .filter(|&(u, w)| u != w && leq[u][w] && !g.has_edge(u, w))
            .collect();
        prop_assume!(!implied.is_empty());
        let (u, w) = implied[pick as usize % implied.len()];
        let mut h = g.clone();
        h.add_edge(u, w);
        let a = reachability_homology(&g, CoeffRing::Fp(2), opts(3, Method::Truncated)).unwrap();
        let b = reachability_homology(&h, CoeffRing::Fp(2), opts(3, Method::Truncated)).unwrap();
        prop_assert_eq!(a.betti(), b.betti());
    }

    #[test]
    fn reversal_preserves_homology(g in small_graph()) {
        let edges: Vec<(usize, usize)> = g.edges().map(|(u, v)| (v, u)).collect();
        let rev = DiGraph::from_parts(g.labels().map(str::to_string).collect::<Vec<_>>(), &edges);
        let a = reachability_homology(&g, CoeffRing::Z, opts(3, Method::Both)).unwrap();
        let b = reachability_homology(&rev, CoeffRing::Z, opts(3, Method::Both)).unwrap();
        for k in 0..=3 {
            prop_assert_eq!(a.betti_at(k), b.betti_at(k));
            prop_assert_eq!(a.torsion_at(k), b.torsion_at(k));
        }
    }

    #[test]
    fn euler_characteristic_of_truncation(g in small_graph()) {
        // Σ(−1)^k dim C_k = Σ(−1)^k b_k on a complete complex.
        let rc = ReachabilityComplex::condensation_order_complex(&g, 1_000_000).unwrap();
        let top = rc.max_degree();
        let s = reachability_homology(&g, CoeffRing::Q, opts(top, Method::Condensation)).unwrap();
        let chi_c: i64 = (0..=top).map(|k| if k % 2 == 0 { rc.dim(k) as i64 } else { -(rc.dim(k) as i64) }).sum();
        let chi_h: i64 = (0..=top).map(|k| if k % 2 == 0 { s.betti_at(k) as i64 } else { -(s.betti_at(k) as i64) }).sum();
        prop_assert_eq!(chi_c, chi_h);
    }
}
