//! Named example digraphs and gluing data.

use serde::Serialize;

use crate::digraph::{hasse_diagram, DiGraph, DiGraphMap, SimplicialComplex};
use crate::error::Result;
use crate::homalg::{CoeffRing, GroupSummary};
use crate::random::GluingInstance;
use crate::rcomplex::{padded_groups, reachability_homology, HomologyOptions};

/// Alternating orientation: the face graph of the boundary of a triangle.
pub fn hexagon_a() -> DiGraph {
    DiGraph::from_labeled_edges(&[("a", "b"), ("c", "b"), ("c", "d"), ("e", "d"), ("e", "f"), ("a", "f")])
}

/// Every vertex reaches the sink `a`.
pub fn hexagon_b() -> DiGraph {
    DiGraph::from_labeled_edges(&[("b", "a"), ("c", "b"), ("d", "c"), ("d", "e"), ("e", "f"), ("f", "a")])
}

/// The directed 6-cycle.
pub fn hexagon_c() -> DiGraph {
    DiGraph::from_labeled_edges(&[("a", "b"), ("b", "c"), ("c", "d"), ("d", "e"), ("e", "f"), ("f", "a")])
}

pub fn hexagons() -> Vec<(&'static str, DiGraph)> {
    vec![("A", hexagon_a()), ("B", hexagon_b()), ("C", hexagon_c())]
}

/// Three strongly connected graphs on `a, c, e`.
pub fn triangles() -> Vec<(&'static str, DiGraph)> {
    let both = |pairs: &[(&'static str, &'static str)]| {
        let e: Vec<(&str, &str)> = pairs.iter().flat_map(|&(u, v)| [(u, v), (v, u)]).collect();
        DiGraph::from_labeled_edges(&e)
    };
    vec![
        ("cycle", DiGraph::from_labeled_edges(&[("a", "e"), ("e", "c"), ("c", "a")])),
        ("path", both(&[("e", "a"), ("c", "e")])),
        ("complete", both(&[("e", "a"), ("a", "c"), ("c", "e")])),
    ]
}

/// The six-vertex triangulation of the real projective plane.
pub fn rp2() -> SimplicialComplex {
    let facets = ["123", "134", "145", "156", "126", "235", "245", "246", "346", "356"];
    complex(&facets)
}

/// The boundary of the `n`-simplex on vertices `0..=n`.
pub fn simplex_boundary(n: usize) -> SimplicialComplex {
    let facets: Vec<String> = (0..=n)
        .map(|skip| (0..=n).filter(|&v| v != skip).map(|v| v.to_string()).collect())
        .collect();
    let refs: Vec<&str> = facets.iter().map(String::as_str).collect();
    complex(&refs)
}

/// Facets written as strings of one-character vertex names.
pub fn complex(facets: &[&str]) -> SimplicialComplex {
    let f: Vec<Vec<String>> = facets.iter().map(|s| s.chars().map(String::from).collect()).collect();
    SimplicialComplex::from_facets(&f).expect("nonempty facets")
}

#[derive(Debug, Clone, Serialize)]
pub struct DemoGraph {
    pub name: String,
    pub edges: Vec<[String; 2]>,
    pub groups: Vec<GroupSummary>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DemoReport {
    pub ring: String,
    pub graphs: Vec<DemoGraph>,
}

/// Homology through `max_degree` for a list of named graphs.
pub fn homology_table(graphs: &[(&str, DiGraph)], ring: CoeffRing, opts: HomologyOptions) -> Result<DemoReport> {
    let graphs = graphs
        .iter()
        .map(|(name, g)| {
            let s = reachability_homology(g, ring, opts)?;
            Ok(DemoGraph {
                name: name.to_string(),
                edges: g.edges().map(|(u, v)| [g.label(u).to_string(), g.label(v).to_string()]).collect(),
                groups: padded_groups(&s, opts.max_degree),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DemoReport { ring: ring.to_string(), graphs })
}

/// Where the subgraph `A` is sent when gluing.
#[derive(Debug, Clone, Copy)]
pub enum GlueTarget {
    /// Collapse `A` to a single vertex.
    Point,
    /// Glue along an isomorphic copy of `A`.
    Copy,
}

/// `X` = Hasse diagram of `s`, `A` = Hasse diagram of its full subcomplex on `keep`.
pub fn subcomplex_gluing(s: &SimplicialComplex, keep: &[&str], target: GlueTarget) -> Result<GluingInstance> {
    let x = hasse_diagram(s);
    let sub = s.full_subcomplex(keep)?;
    let labels: Vec<String> = sub.simplices().iter().map(|t| sub.simplex_label(t)).collect();
    let a = x.resolve(&labels)?;
    let a_graph = x.induced_subgraph_in_order(&a);
    let (y, f) = match target {
        GlueTarget::Point => {
            let y = DiGraph::from_parts(["*"], &[]);
            let f = DiGraphMap::constant(&a_graph, &y, 0);
            (y, f)
        }
        GlueTarget::Copy => {
            let y = hasse_diagram(&sub);
            let pairs: Vec<(String, String)> = labels.iter().map(|l| (l.clone(), l.clone())).collect();
            let f = DiGraphMap::from_pairs(&a_graph, &y, &pairs)?;
            (y, f)
        }
    };
    Ok(GluingInstance { x, a, y, f })
}

/// One hemisphere of `∂Δ³` glued to a disc along the equator `∂{0,1,2}`:
/// the result is a Hasse-diagram model of the 2-sphere.
pub fn hemisphere_gluing() -> Result<GluingInstance> {
    let x_complex = complex(&["013", "023", "123"]);
    let x = hasse_diagram(&x_complex);
    let equator = x_complex.full_subcomplex(&["0", "1", "2"])?;
    let labels: Vec<String> = equator.simplices().iter().map(|t| equator.simplex_label(t)).collect();
    let a = x.resolve(&labels)?;
    let a_graph = x.induced_subgraph_in_order(&a);
    let y = hasse_diagram(&complex(&["012"]));
    let pairs: Vec<(String, String)> = labels.iter().map(|l| (l.clone(), l.clone())).collect();
    let f = DiGraphMap::from_pairs(&a_graph, &y, &pairs)?;
    Ok(GluingInstance { x, a, y, f })
}

/// Ten gluing instances for integral excision checks, several with 2-torsion.
pub fn curated_gluings() -> Result<Vec<(String, GluingInstance)>> {
    use GlueTarget::{Copy, Point};
    let rp = rp2();
    let hemi = complex(&["013", "023", "123"]);
    let mut out = vec![
        ("rp2/disc->point".to_string(), subcomplex_gluing(&rp, &["1", "2", "3"], Point)?),
        ("rp2/edge->point".into(), subcomplex_gluing(&rp, &["1", "2"], Point)?),
        ("rp2/vertex->point".into(), subcomplex_gluing(&rp, &["1"], Point)?),
        ("rp2/1234->point".into(), subcomplex_gluing(&rp, &["1", "2", "3", "4"], Point)?),
        ("rp2/disc copy".into(), subcomplex_gluing(&rp, &["1", "2", "3"], Copy)?),
        ("hemisphere/equator->point".into(), subcomplex_gluing(&hemi, &["0", "1", "2"], Point)?),
        ("hemisphere+disc".into(), hemisphere_gluing()?),
        ("sphere/triangle->point".into(), subcomplex_gluing(&simplex_boundary(3), &["0", "1", "2"], Point)?),
    ];
    let edge = DiGraph::from_labeled_edges(&[("a", "b")]);
    let pt = DiGraph::from_parts(["*"], &[]);
    let sub = edge.induced_subgraph_in_order(&[0]);
    out.push((
        "edge/source->point".into(),
        GluingInstance { x: edge.clone(), a: vec![0], y: pt.clone(), f: DiGraphMap::constant(&sub, &pt, 0) },
    ));
    let hex = hexagon_a();
    let a = hex.index_of("a").expect("vertex a");
    let sub = hex.induced_subgraph_in_order(&[a]);
    out.push((
        "hexagon A/source->point".into(),
        GluingInstance { x: hex.clone(), a: vec![a], y: pt.clone(), f: DiGraphMap::constant(&sub, &pt, 0) },
    ));
    Ok(out)
}
