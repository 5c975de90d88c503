mod common;

use proptest::prelude::*;
use reachhom::demo::hexagons;
use reachhom::mpss::{
    convergence_check, length_filtration, magnitude_homology, spectral_pages, tuple_length,
};
use reachhom::digraph::shortest_path_metric;
use reachhom::random::{random_small_digraph, rng};
use reachhom::{CoeffRing, DiGraph};

const CAP: usize = 1_000_000;

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
    (1usize..=4, any::<u64>()).prop_map(|(n, m)| graph_from_mask(n, m))
}

#[test]
fn first_page_is_magnitude_homology() {
    let mut r = rng(81);
    for i in 0..40 {
        let g = random_small_digraph(&mut r, 5);
        let f = length_filtration(&g, 3, CAP).unwrap();
        let e1 = &spectral_pages(&f, 1, CoeffRing::Fp(2)).unwrap()[0];
        let mh = magnitude_homology(&g, CoeffRing::Fp(2), 3, CAP).unwrap();
        for k in 0..=3 {
            for s in 0..=f.length_bound() as usize {
                let want = mh.iter().find(|m| m.degree == k && m.length == s as u64).map_or(0, |m| m.betti);
                assert_eq!(e1.rank(s, k), want, "graph {i}, bidegree ({s},{k})");
            }
        }
        for m in &mh {
            assert_eq!(e1.rank(m.length as usize, m.degree), m.betti);
        }
    }
}

#[test]
fn pages_match_explicit_cycle_and_boundary_spaces() {
    let mut r = rng(82);
    for i in 0..25 {
        let g = random_small_digraph(&mut r, 4);
        let f = length_filtration(&g, 2, CAP).unwrap();
        let last = f.length_bound() as usize + 1;
        let pages = spectral_pages(&f, last, CoeffRing::Fp(2)).unwrap();
        for (idx, page) in pages.iter().enumerate() {
            let oracle = common::spectral_ranks(&g, 2, idx + 1);
            for (k, row) in oracle.iter().enumerate() {
                for (s, &want) in row.iter().enumerate() {
                    assert_eq!(page.rank(s, k), want, "graph {i}, page {}, bidegree ({s},{k})", idx + 1);
                }
            }
        }
    }
}

#[test]
fn hexagons_converge_to_their_homology() {
    let expected = [vec![1, 1, 0, 0], vec![1, 0, 0, 0], vec![1, 0, 0, 0]];
    for ((name, g), want) in hexagons().into_iter().zip(expected) {
        let (_, rep) = convergence_check(&g, CoeffRing::Fp(2), 3, None, CAP).unwrap();
        assert_eq!(rep.verdict, "converged", "hexagon {name}");
        assert_eq!(rep.totals.as_ref(), Some(&want), "hexagon {name}");
    }
}

#[test]
fn random_graphs_converge() {
    let mut r = rng(83);
    for i in 0..40 {
        let g = random_small_digraph(&mut r, 5);
        let (_, rep) = convergence_check(&g, CoeffRing::Fp(2), 3, None, CAP).unwrap();
        let oracle = common::betti(&common::rh(&g, 3, Some(2)));
        assert_eq!(rep.verdict, "converged", "graph {i}");
        assert_eq!(rep.totals.unwrap(), oracle, "graph {i}");
    }
}

#[test]
fn short_page_range_is_inconclusive() {
    let g = hexagons().remove(2).1;
    let (pages, rep) = convergence_check(&g, CoeffRing::Q, 2, Some(1), CAP).unwrap();
    assert_eq!(pages.len(), 1);
    assert_eq!(rep.verdict, "inconclusive");
    assert!(rep.totals.is_none());
}

#[test]
fn bidirected_graph_has_no_higher_differentials() {
    // Distances are all 0 or 1; the filtration jumps by at most one per face.
    let g = DiGraph::from_labeled_edges(&[("a", "b"), ("b", "a")]);
    let f = length_filtration(&g, 3, CAP).unwrap();
    let pages = spectral_pages(&f, f.length_bound() as usize + 1, CoeffRing::Fp(2)).unwrap();
    assert!(pages.windows(2).skip(1).all(|w| w[0].ranks == w[1].ranks));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn boundary_never_raises_length(g in small_graph()) {
        let f = length_filtration(&g, 3, CAP).unwrap();
        prop_assert!(f.is_filtered());
        let d = shortest_path_metric(&g);
        let oracle = common::distances(&g);
        for k in 0..=f.rc.max_degree() {
            for (t, &l) in f.rc.generators(k).iter().zip(&f.lengths[k]) {
                prop_assert_eq!(tuple_length(&d, t), l);
                let direct: u64 = t.windows(2).map(|w| oracle[w[0] as usize][w[1] as usize].unwrap()).sum();
                prop_assert_eq!(direct, l);
            }
        }
    }

    #[test]
    fn ranks_decrease_along_pages(g in small_graph()) {
        let f = length_filtration(&g, 3, CAP).unwrap();
        let pages = spectral_pages(&f, f.length_bound() as usize + 2, CoeffRing::Fp(3)).unwrap();
        for w in pages.windows(2) {
            for (k, row) in w[1].ranks.iter().enumerate() {
                for (s, &v) in row.iter().enumerate() {
                    prop_assert!(v <= w[0].rank(s, k));
                }
            }
        }
    }
}
