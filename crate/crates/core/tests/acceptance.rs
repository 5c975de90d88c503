//! The twelve acceptance criteria, each with its time limit. Prints one
//! `[PASS]`/`[FAIL]` line per criterion and exits nonzero on any failure.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use reachhom::cofib::{dwyer_holds, excision_check, is_long_cofibration, mayer_vietoris_check};
use reachhom::demo::{curated_gluings, hemisphere_gluing, hexagon_a, hexagons, homology_table, rp2, simplex_boundary, triangles};
use reachhom::digraph::{box_product, face_graph, hasse_diagram};
use reachhom::homalg::{same_on_homology, verify_chain_homotopy};
use reachhom::kunneth::{chain_map_defect, kunneth_check, Product};
use reachhom::mpss::{convergence_check, length_filtration, magnitude_homology, spectral_page};
use reachhom::preorder::{adjunction_check, reachability_preorder};
use reachhom::random::{perturb, random_gluing, random_homotopic_pair, random_long_cofibration, random_small_digraph, rng};
use reachhom::rcomplex::{
    induced_chain_map, induced_condensed_map, prism_homotopy, reachability_homology, Condensed, HomologyOptions,
    DEFAULT_CAP,
};
use reachhom::{CoeffRing, Method, ReachabilityComplex};

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn opts(max_degree: usize, method: Method) -> HomologyOptions {
    HomologyOptions { max_degree, method, cap: DEFAULT_CAP }
}

fn hexagon_table() -> Outcome {
    let rep = homology_table(&hexagons(), CoeffRing::Z, HomologyOptions { max_degree: 4, ..Default::default() }).map_err(|e| e.to_string())?;
    let want = [[1, 1, 0, 0, 0], [1, 0, 0, 0, 0], [1, 0, 0, 0, 0]];
    for (g, w) in rep.graphs.iter().zip(want) {
        let betti: Vec<usize> = g.groups.iter().map(|x| x.betti).collect();
        check(betti == w, || format!("hexagon {}: {betti:?}", g.name))?;
        check(g.groups.iter().all(|x| x.torsion.is_empty()), || format!("hexagon {}: torsion", g.name))?;
    }
    Ok("A = (Z, Z, 0, 0, 0), B = C = (Z, 0, 0, 0, 0)".into())
}

fn triangle_collapse() -> Outcome {
    for (name, g) in triangles() {
        let s = reachability_homology(&g, CoeffRing::Z, opts(4, Method::Both)).map_err(|e| e.to_string())?;
        let point = (0..=4).all(|k| s.betti_at(k) == usize::from(k == 0) && s.torsion_at(k).is_empty());
        check(point, || format!("{name}: {:?}", s.groups))?;
    }
    Ok("3 triangles acyclic through degree 4".into())
}

fn simplicial_oracle() -> Outcome {
    let mut n = 0;
    for (name, s) in [("∂Δ²", simplex_boundary(2)), ("∂Δ³", simplex_boundary(3)), ("RP²", rp2())] {
        let oracle = common::simplicial_homology(s.facets(), None);
        let top = oracle.len();
        for (kind, g) in [("face", face_graph(&s)), ("hasse", hasse_diagram(&s))] {
            let h = reachability_homology(&g, CoeffRing::Z, opts(top, Method::Condensation)).map_err(|e| e.to_string())?;
            for (k, (b, t)) in oracle.iter().enumerate() {
                check(h.betti_at(k) == *b && h.torsion_at(k) == *t, || format!("{name} {kind} degree {k}"))?;
            }
            check(h.betti_at(top) == 0 && h.torsion_at(top).is_empty(), || format!("{name} {kind} top"))?;
            n += 1;
        }
    }
    let rp = common::simplicial_homology(rp2().facets(), None);
    check(rp[1].1 == vec![2], || "RP² oracle lost its torsion".into())?;
    Ok(format!("{n} graphs match, H1(RP²) = Z/2"))
}

fn homotopy_invariance() -> Outcome {
    let mut r = rng(4);
    for i in 0..200 {
        let (f, g) = random_homotopic_pair(&mut r, 6);
        let e = |e: reachhom::Error| format!("pair {i}: {e}");
        let src = ReachabilityComplex::truncated(&f.source, 4, DEFAULT_CAP).map_err(e)?;
        let tgt = ReachabilityComplex::truncated(&f.target, 4, DEFAULT_CAP).map_err(e)?;
        let s = prism_homotopy(&f, &g, &src, &tgt).map_err(e)?;
        let fs = induced_chain_map(&f, &src, &tgt, CoeffRing::Z).map_err(e)?;
        let gs = induced_chain_map(&g, &src, &tgt, CoeffRing::Z).map_err(e)?;
        check(verify_chain_homotopy(&s, &fs, &gs).map_err(e)?, || format!("pair {i}: ∂s + s∂ ≠ g − f"))?;
        // Induced maps on homology, through the condensation complexes.
        let (cs, ct) = (Condensed::new(&f.source, DEFAULT_CAP).map_err(e)?, Condensed::new(&f.target, DEFAULT_CAP).map_err(e)?);
        let fc = induced_condensed_map(&f, &cs, &ct, CoeffRing::Z).map_err(e)?;
        let gc = induced_condensed_map(&g, &cs, &ct, CoeffRing::Z).map_err(e)?;
        for k in 0..=4 {
            check(same_on_homology(&fc, &gc, k).map_err(e)?, || format!("pair {i}: H_{k}(f) ≠ H_{k}(g)"))?;
        }
    }
    Ok("200 pairs".into())
}

fn eilenberg_zilber_chain_map() -> Outcome {
    let mut r = rng(5);
    let mut pairs = 0usize;
    for i in 0..50 {
        let g = random_small_digraph(&mut r, 4);
        let h = random_small_digraph(&mut r, 4);
        let (pg, ph) = (reachability_preorder(&g), reachability_preorder(&h));
        let rg = ReachabilityComplex::from_preorder(&pg, 5, DEFAULT_CAP).map_err(|e| e.to_string())?;
        let rh = ReachabilityComplex::from_preorder(&ph, 5, DEFAULT_CAP).map_err(|e| e.to_string())?;
        for p in 0..=5 {
            for q in 0..=5 - p {
                for x in rg.generators(p) {
                    for y in rh.generators(q) {
                        let d = chain_map_defect(x, y, &pg, &ph).map_err(|e| e.to_string())?;
                        check(d.is_empty(), || format!("pair {i}: defect at {x:?} ⊗ {y:?}"))?;
                        pairs += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{pairs} generator pairs"))
}

fn kunneth() -> Outcome {
    let mut r = rng(6);
    for i in 0..50 {
        let g = random_small_digraph(&mut r, 4);
        let h = random_small_digraph(&mut r, 4);
        for ring in [CoeffRing::Q, CoeffRing::Fp(2)] {
            let rep = kunneth_check(&g, &h, ring, 3, &[Product::Box, Product::Strong]).map_err(|e| e.to_string())?;
            check(rep.pass, || format!("pair {i} over {ring}"))?;
        }
    }
    let a = hexagon_a();
    let s = reachability_homology(&box_product(&a, &a), CoeffRing::Z, opts(3, Method::Condensation)).map_err(|e| e.to_string())?;
    let betti: Vec<usize> = (0..=3).map(|k| s.betti_at(k)).collect();
    check(betti == [1, 2, 1, 0], || format!("A□A: {betti:?}"))?;
    Ok("50 pairs over Q and F2, A□A = (1, 2, 1)".into())
}

fn truncation_vs_condensation() -> Outcome {
    let mut r = rng(7);
    for i in 0..200 {
        let g = random_small_digraph(&mut r, 7);
        let a = reachability_homology(&g, CoeffRing::Z, opts(4, Method::Truncated)).map_err(|e| e.to_string())?;
        let b = reachability_homology(&g, CoeffRing::Z, opts(4, Method::Condensation)).map_err(|e| e.to_string())?;
        let same = (0..=4).all(|k| a.betti_at(k) == b.betti_at(k) && a.torsion_at(k) == b.torsion_at(k));
        check(same, || format!("graph {i}"))?;
    }
    Ok("200 graphs over Z".into())
}

fn cofibration_dwyer() -> Outcome {
    let mut r = rng(8);
    let (mut pos, mut neg) = (0, 0);
    for i in 0..100 {
        let inst = random_long_cofibration(&mut r, 12);
        let bent = perturb(&mut r, &inst);
        for c in [inst, bent] {
            check(c.x.n() <= 12, || format!("instance {i} has {} vertices", c.x.n()))?;
            let lc = is_long_cofibration(&c.x, &c.a).map_err(|e| e.to_string())?.is_some();
            let dw = dwyer_holds(&c.x, &c.a).map_err(|e| e.to_string())?;
            check(lc == dw, || format!("instance {i}: long cofibration {lc}, Dwyer {dw}"))?;
            if lc {
                pos += 1;
            } else {
                neg += 1;
            }
        }
    }
    Ok(format!("{pos} positive, {neg} negative"))
}

fn excision() -> Outcome {
    let curated = curated_gluings().map_err(|e| e.to_string())?;
    for (name, g) in &curated {
        let rep = excision_check(&g.x, &g.a, &g.y, &g.f, CoeffRing::Z, 3).map_err(|e| e.to_string())?;
        check(rep.pass, || format!("{name} over Z"))?;
    }
    let mut r = rng(9);
    for i in curated.len()..100 {
        let g = random_gluing(&mut r, 6);
        let rep = excision_check(&g.x, &g.a, &g.y, &g.f, CoeffRing::Fp(2), 3).map_err(|e| e.to_string())?;
        check(rep.pass, || format!("instance {i} over F2"))?;
    }
    Ok(format!("{} curated over Z, {} over F2", curated.len(), 100 - curated.len()))
}

fn mayer_vietoris() -> Outcome {
    let mut r = rng(10);
    for i in 0..100 {
        let g = random_gluing(&mut r, 6);
        let rep = mayer_vietoris_check(&g.x, &g.a, &g.y, &g.f, CoeffRing::Fp(2), 3).map_err(|e| e.to_string())?;
        check(rep.exact && rep.pass, || format!("instance {i}: {:?}", rep.failure))?;
    }
    let g = hemisphere_gluing().map_err(|e| e.to_string())?;
    let rep = mayer_vietoris_check(&g.x, &g.a, &g.y, &g.f, CoeffRing::Fp(2), 3).map_err(|e| e.to_string())?;
    let rec = rep.recovered_betti_p.clone().unwrap_or_default();
    check(rep.pass && rec.len() >= 3 && rec[..3] == [1, 0, 1], || format!("hemisphere: {rec:?}"))?;
    Ok("100 pushouts exact, hemisphere gluing (1, 0, 1)".into())
}

fn spectral_sequence() -> Outcome {
    let mut r = rng(11);
    let ring = CoeffRing::Fp(2);
    for i in 0..100 {
        let g = random_small_digraph(&mut r, 5);
        let e = |e: reachhom::Error| format!("graph {i}: {e}");
        let f = length_filtration(&g, 3, DEFAULT_CAP).map_err(e)?;
        let e1 = spectral_page(&f, 1, ring).map_err(e)?;
        let mh = magnitude_homology(&g, ring, 3, DEFAULT_CAP).map_err(e)?;
        for k in 0..=3 {
            for s in 0..=f.length_bound() as usize {
                let want = mh.iter().find(|m| m.degree == k && m.length == s as u64).map_or(0, |m| m.betti);
                check(e1.rank(s, k) == want, || format!("graph {i}: E1 at ({s},{k})"))?;
            }
        }
        check(mh.iter().all(|m| e1.rank(m.length as usize, m.degree) == m.betti), || format!("graph {i}: MH outside range"))?;
        let (_, rep) = convergence_check(&g, ring, 3, None, DEFAULT_CAP).map_err(e)?;
        check(rep.verdict == "converged", || format!("graph {i}: {rep:?}"))?;
    }
    Ok("100 graphs: E1 = MH, E∞ totals = Betti".into())
}

fn adjunction() -> Outcome {
    let mut r = rng(12);
    for i in 0..50 {
        let g = random_small_digraph(&mut r, 4);
        let q = random_small_digraph(&mut r, 4);
        let p = reachability_preorder(&q);
        check(adjunction_check(&g, &p).map_err(|e| e.to_string())?, || format!("instance {i}"))?;
        // Independent enumeration of both hom-sets.
        let (lg, lp) = (common::closure(&g), common::closure(&q));
        let (n, m) = (g.n(), q.n());
        for code in 0..m.pow(n as u32) {
            let f: Vec<usize> = (0..n).map(|v| code / m.pow(v as u32) % m).collect();
            let graph_map = g.edges().all(|(u, v)| lp[f[u]][f[v]]);
            let monotone = (0..n).all(|u| (0..n).all(|v| !lg[u][v] || lp[f[u]][f[v]]));
            check(graph_map == monotone, || format!("instance {i}: map {f:?}"))?;
        }
    }
    Ok("50 instances".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, u64, fn() -> Outcome); 12] = [
        ("hexagon table", 1, hexagon_table),
        ("triangle collapse", 1, triangle_collapse),
        ("simplicial oracle", 10, simplicial_oracle),
        ("homotopy invariance", 60, homotopy_invariance),
        ("Eilenberg-Zilber chain map", 60, eilenberg_zilber_chain_map),
        ("Kunneth", 120, kunneth),
        ("truncation vs condensation", 120, truncation_vs_condensation),
        ("long cofibration vs Dwyer", 60, cofibration_dwyer),
        ("excision", 120, excision),
        ("Mayer-Vietoris", 120, mayer_vietoris),
        ("magnitude-path spectral sequence", 180, spectral_sequence),
        ("adjunction", 30, adjunction),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let in_time = took < Duration::from_secs(*limit);
        let (tag, detail) = match (&outcome, in_time) {
            (Ok(d), true) => ("PASS", d.clone()),
            (Ok(d), false) => ("FAIL", format!("{d}; over the {limit} s limit")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if tag == "FAIL" {
            failed += 1;
        }
        println!("[{tag}] criterion {:>2} {name}: {detail} ({:.2} s, limit {limit} s)", i + 1, took.as_secs_f64());
    }
    println!("acceptance: {} of 12 criteria passed", 12 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
