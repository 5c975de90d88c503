mod common;

use proptest::prelude::*;
use reachhom::digraph::{
    box_product, face_graph, hasse_diagram, parse_edge_list, parse_facet_list, parse_vertex_map, pushout,
    shortest_path_metric, strong_product, Distance,
};
use reachhom::preorder::{adjunction_check, condensation, iota, preorder_product, reachability_preorder};
use reachhom::random::{random_small_digraph, rng};
use reachhom::{DiGraph, DiGraphMap, Error, Preorder};

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

fn small_graph(max: usize) -> impl Strategy<Value = DiGraph> {
    (1usize..=max, any::<u64>()).prop_map(|(n, m)| graph_from_mask(n, m))
}

#[test]
fn edge_list_round_trip() {
    let g = parse_edge_list("# hexagon fragment\na b\nc b\n\nz\n").unwrap();
    assert_eq!(g.n(), 4);
    assert_eq!(g.edge_count(), 2);
    let again = parse_edge_list(&g.to_edge_list()).unwrap();
    assert_eq!(again.n(), g.n());
    let labeled = |h: &DiGraph| {
        let mut e: Vec<(String, String)> = h.edges().map(|(u, v)| (h.label(u).into(), h.label(v).into())).collect();
        e.sort();
        e
    };
    assert_eq!(labeled(&again), labeled(&g));
    assert!(again.index_of("z").is_some());
}

#[test]
fn malformed_edge_list_reports_line() {
    match parse_edge_list("a b\na b c\n") {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn vertex_map_syntaxes() {
    let pairs = parse_vertex_map("a ↦ x\nb -> y\nc|->z\nd w\n").unwrap();
    let want: Vec<(String, String)> =
        [("a", "x"), ("b", "y"), ("c", "z"), ("d", "w")].iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
    assert_eq!(pairs, want);
    assert!(parse_vertex_map("a b c\n").is_err());
}

#[test]
fn invalid_map_is_rejected() {
    let g = DiGraph::from_labeled_edges(&[("a", "b")]);
    let h = DiGraph::from_parts(["x", "y"], &[]);
    let m = DiGraphMap::new(g.clone(), h.clone(), vec![0, 1]).unwrap();
    assert!(!m.is_valid());
    assert!(DiGraphMap::new(g, h, vec![0, 5]).is_err());
}

#[test]
fn face_graph_and_hasse_diagram_of_triangle() {
    let s = parse_facet_list("0 1 2\n").unwrap();
    let f = face_graph(&s);
    let h = hasse_diagram(&s);
    assert_eq!(f.n(), 7);
    assert_eq!(h.n(), 7);
    // Vertices to edges (6) and edges to the face (3); the face graph adds vertex-to-face (3).
    assert_eq!(h.edge_count(), 9);
    assert_eq!(f.edge_count(), 12);
    assert_eq!(reachability_preorder(&f), reachability_preorder(&h));
}

#[test]
fn distances_match_bfs() {
    let mut r = rng(5);
    for _ in 0..30 {
        let g = random_small_digraph(&mut r, 6);
        let d = shortest_path_metric(&g);
        let oracle = common::distances(&g);
        for u in 0..g.n() {
            for v in 0..g.n() {
                assert_eq!(d[u][v].finite(), oracle[u][v]);
                if oracle[u][v].is_none() {
                    assert_eq!(d[u][v], Distance::Infinite);
                }
            }
        }
    }
}

#[test]
fn pushout_of_edge_collapse() {
    let x = DiGraph::from_labeled_edges(&[("a", "b"), ("b", "c")]);
    let a = x.induced_subgraph_in_order(&[0, 1]);
    let y = DiGraph::from_parts(["*"], &[]);
    let i = DiGraphMap::new(a.clone(), x.clone(), vec![0, 1]).unwrap();
    let f = DiGraphMap::constant(&a, &y, 0);
    let p = pushout(&i, &f).unwrap();
    assert_eq!(p.graph.n(), 2);
    assert_eq!(p.graph.edge_count(), 1);
    assert!(p.g.is_valid() && p.j.is_valid());
    // Commutes: g ∘ i = j ∘ f.
    for v in 0..a.n() {
        assert_eq!(p.g.map[i.map[v]], p.j.map[f.map[v]]);
    }
}

#[test]
fn pushout_needs_induced_inclusion() {
    let x = DiGraph::from_labeled_edges(&[("a", "b")]);
    let a = DiGraph::from_parts(["a", "b"], &[]);
    let i = DiGraphMap::new(a.clone(), x, vec![0, 1]).unwrap();
    let f = DiGraphMap::identity(&a);
    assert!(matches!(pushout(&i, &f), Err(Error::Shape(_))));
}

#[test]
fn adjunction_sets_agree_with_enumeration() {
    // Independent enumeration of both hom-sets, compared as sets.
    let mut r = rng(17);
    for _ in 0..20 {
        let g = random_small_digraph(&mut r, 4);
        let q = random_small_digraph(&mut r, 3);
        let p = reachability_preorder(&q);
        let leq_g = common::closure(&g);
        let leq_p = common::closure(&q);
        let (n, m) = (g.n(), p.len());
        let mut graph_maps = Vec::new();
        let mut monotone = Vec::new();
        for code in 0..m.pow(n as u32) {
            let f: Vec<usize> = (0..n).map(|i| code / m.pow(i as u32) % m).collect();
            if g.edges().all(|(u, v)| leq_p[f[u]][f[v]]) {
                graph_maps.push(f.clone());
            }
            if (0..n).all(|u| (0..n).all(|v| !leq_g[u][v] || leq_p[f[u]][f[v]])) {
                monotone.push(f);
            }
        }
        assert_eq!(graph_maps, monotone);
        assert!(adjunction_check(&g, &p).unwrap());
    }
}

#[test]
fn adjunction_refuses_large_inputs() {
    let g = graph_from_mask(6, 0);
    let p = reachability_preorder(&g);
    assert!(matches!(adjunction_check(&g, &p), Err(Error::Refused(_))));
}

#[test]
fn condensation_of_two_cycles() {
    let g = DiGraph::from_labeled_edges(&[("a", "b"), ("b", "a"), ("b", "c"), ("c", "d"), ("d", "c")]);
    let c = condensation(&g);
    assert_eq!(c.classes.len(), 2);
    assert!(c.poset.is_poset());
    assert!(c.quotient.is_monotone());
    assert_eq!(c.poset.strict_pairs().len(), 1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn preorder_is_transitive_closure(g in small_graph(7)) {
        let p = reachability_preorder(&g);
        let leq = common::closure(&g);
        for u in 0..g.n() {
            for v in 0..g.n() {
                prop_assert_eq!(p.leq(u, v), leq[u][v]);
            }
        }
    }

    #[test]
    fn iota_then_pre_is_identity(g in small_graph(6)) {
        let p = reachability_preorder(&g);
        prop_assert_eq!(reachability_preorder(&iota(&p)), p);
    }

    #[test]
    fn condensation_classes_are_equivalence_classes(g in small_graph(7)) {
        let c = condensation(&g);
        let leq = common::closure(&g);
        prop_assert!(c.poset.is_poset());
        for u in 0..g.n() {
            for v in 0..g.n() {
                let same = leq[u][v] && leq[v][u];
                prop_assert_eq!(c.class_of[u] == c.class_of[v], same);
                prop_assert_eq!(c.poset.leq(c.class_of[u], c.class_of[v]), leq[u][v]);
            }
        }
    }

    #[test]
    fn products_share_reachability(g in small_graph(4), h in small_graph(4)) {
        let b = box_product(&g, &h);
        let s = strong_product(&g, &h);
        let pb = reachability_preorder(&b);
        let ps = reachability_preorder(&s);
        prop_assert_eq!(pb.matrix(), ps.matrix());
        let pp: Preorder = preorder_product(&reachability_preorder(&g), &reachability_preorder(&h));
        prop_assert_eq!(pb.matrix(), pp.matrix());
        let oracle = common::box_product(&g, &h);
        let po = reachability_preorder(&oracle);
        prop_assert_eq!(pb.matrix(), po.matrix());
    }

    #[test]
    fn from_relation_closes(g in small_graph(6)) {
        let labels: Vec<String> = g.labels().map(str::to_string).collect();
        let pairs: Vec<(usize, usize)> = g.edges().collect();
        prop_assert_eq!(Preorder::from_relation(labels, &pairs), reachability_preorder(&g));
    }
}
