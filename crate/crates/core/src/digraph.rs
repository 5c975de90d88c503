//! Directed graphs, graph maps, products, pushouts and the two digraphs
//! attached to a simplicial complex.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use indexmap::IndexSet;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A finite directed graph with string labels. Loops are allowed; parallel
/// edges are not representable.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DiGraph {
    vertices: IndexSet<String>,
    edges: BTreeSet<(usize, usize)>,
}

impl DiGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a graph from labels and index pairs.
    pub fn from_parts<S: Into<String>>(labels: impl IntoIterator<Item = S>, edges: &[(usize, usize)]) -> Self {
        let mut g = DiGraph::new();
        for l in labels {
            g.add_vertex(l);
        }
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    /// Builds a graph from label pairs, declaring vertices in order of appearance.
    pub fn from_labeled_edges(edges: &[(&str, &str)]) -> Self {
        let mut g = DiGraph::new();
        for (u, v) in edges {
            let a = g.add_vertex(*u);
            let b = g.add_vertex(*v);
            g.add_edge(a, b);
        }
        g
    }

    /// Adds a vertex if missing and returns its index.
    pub fn add_vertex(&mut self, label: impl Into<String>) -> usize {
        self.vertices.insert_full(label.into()).0
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u < self.n() && v < self.n(), "edge endpoint out of range");
        self.edges.insert((u, v));
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn label(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.vertices.iter().map(String::as_str)
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.vertices.get_index_of(label)
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u, v))
    }

    pub fn has_loops(&self) -> bool {
        self.edges.iter().any(|&(u, v)| u == v)
    }

    /// Out-neighbour lists with loops removed.
    pub fn successors(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n()];
        for &(u, v) in &self.edges {
            if u != v {
                out[u].push(v);
            }
        }
        out
    }

    /// The same graph with every loop removed.
    pub fn without_loops(&self) -> DiGraph {
        DiGraph {
            vertices: self.vertices.clone(),
            edges: self.edges.iter().copied().filter(|&(u, v)| u != v).collect(),
        }
    }

    /// Induced subgraph on the given vertices, kept in the order of `self`.
    pub fn induced_subgraph(&self, keep: &[usize]) -> DiGraph {
        let mut mask = vec![false; self.n()];
        for &v in keep {
            mask[v] = true;
        }
        let mut pos = vec![usize::MAX; self.n()];
        let mut g = DiGraph::new();
        for v in 0..self.n() {
            if mask[v] {
                pos[v] = g.add_vertex(self.label(v));
            }
        }
        for &(u, v) in &self.edges {
            if mask[u] && mask[v] {
                g.add_edge(pos[u], pos[v]);
            }
        }
        g
    }

    /// Induced subgraph whose vertex `i` is `keep[i]`.
    pub fn induced_subgraph_in_order(&self, keep: &[usize]) -> DiGraph {
        let mut pos = vec![usize::MAX; self.n()];
        let mut g = DiGraph::new();
        for &v in keep {
            pos[v] = g.add_vertex(self.label(v));
        }
        for &(u, v) in &self.edges {
            if pos[u] != usize::MAX && pos[v] != usize::MAX {
                g.add_edge(pos[u], pos[v]);
            }
        }
        g
    }

    /// Vertex indices for a list of labels.
    pub fn resolve(&self, labels: &[String]) -> Result<Vec<usize>> {
        labels
            .iter()
            .map(|l| self.index_of(l).ok_or_else(|| Error::Domain(format!("unknown vertex '{l}'"))))
            .collect()
    }

    /// Serializes back to the edge-list format. Isolated vertices get their own line.
    pub fn to_edge_list(&self) -> String {
        let mut touched = vec![false; self.n()];
        for &(u, v) in &self.edges {
            touched[u] = true;
            touched[v] = true;
        }
        let mut out = String::new();
        for v in 0..self.n() {
            if !touched[v] {
                out.push_str(self.label(v));
                out.push('\n');
            }
        }
        for &(u, v) in &self.edges {
            out.push_str(self.label(u));
            out.push(' ');
            out.push_str(self.label(v));
            out.push('\n');
        }
        out
    }
}

/// Parses the edge-list format: one `u v` edge or one `v` vertex per line,
/// `#` starts a comment line.
pub fn parse_edge_list(text: &str) -> Result<DiGraph> {
    let mut g = DiGraph::new();
    for (lineno, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = t.split_whitespace().collect();
        match tokens.as_slice() {
            [v] => {
                g.add_vertex(*v);
            }
            [u, v] => {
                let a = g.add_vertex(*u);
                let b = g.add_vertex(*v);
                g.add_edge(a, b);
            }
            _ => {
                return Err(Error::Parse {
                    line: lineno + 1,
                    message: format!("expected 1 or 2 tokens, found {}", tokens.len()),
                })
            }
        }
    }
    Ok(g)
}

/// Parses a whitespace separated list of vertex labels (comments allowed).
pub fn parse_vertex_list(text: &str) -> Vec<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.starts_with('#'))
        .flat_map(|l| l.split_whitespace())
        .map(str::to_string)
        .collect()
}

/// A vertex function between two digraphs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiGraphMap {
    pub source: DiGraph,
    pub target: DiGraph,
    pub map: Vec<usize>,
}

impl DiGraphMap {
    /// Wraps a vertex function; fails with a domain error unless it is total.
    pub fn new(source: DiGraph, target: DiGraph, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.n() {
            return Err(Error::Domain(format!(
                "vertex map defined on {} of {} source vertices",
                map.len(),
                source.n()
            )));
        }
        if let Some(&bad) = map.iter().find(|&&t| t >= target.n()) {
            return Err(Error::Domain(format!("image index {bad} is not a target vertex")));
        }
        Ok(DiGraphMap { source, target, map })
    }

    pub fn identity(g: &DiGraph) -> Self {
        DiGraphMap { source: g.clone(), target: g.clone(), map: (0..g.n()).collect() }
    }

    /// The constant map onto vertex `v` of `target`.
    pub fn constant(source: &DiGraph, target: &DiGraph, v: usize) -> Self {
        DiGraphMap { source: source.clone(), target: target.clone(), map: vec![v; source.n()] }
    }

    /// Builds a map from label pairs; every source vertex must be assigned.
    pub fn from_pairs(source: &DiGraph, target: &DiGraph, pairs: &[(String, String)]) -> Result<Self> {
        let mut map = vec![None; source.n()];
        for (a, b) in pairs {
            let s = source
                .index_of(a)
                .ok_or_else(|| Error::Domain(format!("'{a}' is not a source vertex")))?;
            let t = target
                .index_of(b)
                .ok_or_else(|| Error::Domain(format!("'{b}' is not a target vertex")))?;
            if let Some(prev) = map[s] {
                if prev != t {
                    return Err(Error::Domain(format!("'{a}' assigned twice")));
                }
            }
            map[s] = Some(t);
        }
        let map = map
            .into_iter()
            .enumerate()
            .map(|(i, t)| t.ok_or_else(|| Error::Domain(format!("no image for '{}'", source.label(i)))))
            .collect::<Result<Vec<_>>>()?;
        DiGraphMap::new(source.clone(), target.clone(), map)
    }

    pub fn apply(&self, v: usize) -> usize {
        self.map[v]
    }

    /// Whether every edge is contracted or sent to an edge.
    pub fn is_valid(&self) -> bool {
        validate_map(self)
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &DiGraphMap) -> Result<DiGraphMap> {
        if self.target != other.source {
            return Err(Error::Domain("maps are not composable".into()));
        }
        let map = self.map.iter().map(|&v| other.map[v]).collect();
        DiGraphMap::new(self.source.clone(), other.target.clone(), map)
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.n()];
        self.map.iter().all(|&t| !std::mem::replace(&mut seen[t], true))
    }

    /// Injective, and an edge between images forces an edge between preimages.
    pub fn is_induced_inclusion(&self) -> bool {
        if !self.is_injective() {
            return false;
        }
        let n = self.source.n();
        (0..n).all(|a| (0..n).all(|b| self.source.has_edge(a, b) == self.target.has_edge(self.map[a], self.map[b])))
    }
}

/// True iff every source edge is contracted or lands on a target edge.
pub fn validate_map(m: &DiGraphMap) -> bool {
    m.map.len() == m.source.n()
        && m.source.edges().all(|(u, v)| {
            let (a, b) = (m.map[u], m.map[v]);
            a == b || m.target.has_edge(a, b)
        })
}

/// Parses a vertex map: one assignment per line written `a ↦ y`, `a -> y`,
/// `a |-> y` or `a y`.
pub fn parse_vertex_map(text: &str) -> Result<Vec<(String, String)>> {
    let mut pairs = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = t
            .split_whitespace()
            .filter(|tok| !matches!(*tok, "↦" | "->" | "|->" | "=>" | "⟼"))
            .collect();
        let tokens: Vec<String> = if tokens.len() == 1 {
            let s = tokens[0];
            let split = ["↦", "|->", "->", "=>"].iter().find_map(|sep| s.split_once(sep));
            match split {
                Some((a, b)) if !a.is_empty() && !b.is_empty() => vec![a.to_string(), b.to_string()],
                _ => vec![s.to_string()],
            }
        } else {
            tokens.iter().map(|s| s.to_string()).collect()
        };
        if tokens.len() != 2 {
            return Err(Error::Parse { line: lineno + 1, message: "expected 'source ↦ target'".into() });
        }
        pairs.push((tokens[0].clone(), tokens[1].clone()));
    }
    Ok(pairs)
}

fn product_with(g: &DiGraph, h: &DiGraph, diagonal: bool) -> DiGraph {
    let nh = h.n();
    let mut p = DiGraph::new();
    for a in g.labels() {
        for b in h.labels() {
            p.add_vertex(format!("{a}|{b}"));
        }
    }
    for gv in 0..g.n() {
        for (h1, h2) in h.edges() {
            p.add_edge(gv * nh + h1, gv * nh + h2);
        }
    }
    for (g1, g2) in g.edges() {
        for hv in 0..nh {
            p.add_edge(g1 * nh + hv, g2 * nh + hv);
        }
        if diagonal {
            for (h1, h2) in h.edges() {
                p.add_edge(g1 * nh + h1, g2 * nh + h2);
            }
        }
    }
    p
}

/// Box product G□H; vertex (g,h) has index `g·|H| + h` and label `g|h`.
pub fn box_product(g: &DiGraph, h: &DiGraph) -> DiGraph {
    product_with(g, h, false)
}

/// Strong product G⊠H: the box product plus the diagonal edges.
pub fn strong_product(g: &DiGraph, h: &DiGraph) -> DiGraph {
    product_with(g, h, true)
}

/// A path-length distance; `Infinite` when no directed path exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Distance {
    Finite(u64),
    Infinite,
}

impl Distance {
    pub fn finite(self) -> Option<u64> {
        match self {
            Distance::Finite(d) => Some(d),
            Distance::Infinite => None,
        }
    }
}

impl std::ops::Add for Distance {
    type Output = Distance;
    fn add(self, rhs: Distance) -> Distance {
        match (self, rhs) {
            (Distance::Finite(a), Distance::Finite(b)) => Distance::Finite(a + b),
            _ => Distance::Infinite,
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(d) => write!(f, "{d}"),
            Distance::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Distance {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Distance::Finite(d) => s.serialize_u64(*d),
            Distance::Infinite => s.serialize_str("inf"),
        }
    }
}

/// All-pairs shortest directed path lengths by repeated BFS.
pub fn shortest_path_metric(g: &DiGraph) -> Vec<Vec<Distance>> {
    let succ = g.successors();
    let n = g.n();
    let mut out = vec![vec![Distance::Infinite; n]; n];
    let mut queue = VecDeque::new();
    for s in 0..n {
        let row = &mut out[s];
        row[s] = Distance::Finite(0);
        queue.push_back((s, 0u64));
        while let Some((u, d)) = queue.pop_front() {
            for &v in &succ[u] {
                if row[v] == Distance::Infinite {
                    row[v] = Distance::Finite(d + 1);
                    queue.push_back((v, d + 1));
                }
            }
        }
    }
    out
}

/// Result of gluing X and Y along A.
#[derive(Debug, Clone)]
pub struct Pushout {
    pub graph: DiGraph,
    pub g: DiGraphMap,
    pub j: DiGraphMap,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Pushout of `X ← A → Y` along an induced inclusion `i: A → X`.
///
/// Vertices of X and Y are tagged `X:v` and `Y:v`; each glued class is named
/// after its first member in the order X then Y.
pub fn pushout(i: &DiGraphMap, f: &DiGraphMap) -> Result<Pushout> {
    if i.source != f.source {
        return Err(Error::Shape("the two maps have different sources".into()));
    }
    if !i.is_valid() || !f.is_valid() {
        return Err(Error::InvalidMap("pushout legs must be digraph maps".into()));
    }
    if !i.is_induced_inclusion() {
        return Err(Error::Shape("pushouts are supported only along induced-subgraph inclusions".into()));
    }
    let (x, y) = (&i.target, &f.target);
    let nx = x.n();
    let total = nx + y.n();
    let mut parent: Vec<usize> = (0..total).collect();
    for a in 0..i.source.n() {
        let ra = find(&mut parent, i.map[a]);
        let rb = find(&mut parent, nx + f.map[a]);
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            parent[hi] = lo;
        }
    }
    let mut graph = DiGraph::new();
    let mut class_vertex: HashMap<usize, usize> = HashMap::new();
    let mut to_p = vec![0usize; total];
    for node in 0..total {
        let root = find(&mut parent, node);
        let idx = *class_vertex.entry(root).or_insert_with(|| {
            let label = if root < nx { format!("X:{}", x.label(root)) } else { format!("Y:{}", y.label(root - nx)) };
            graph.add_vertex(label)
        });
        to_p[node] = idx;
    }
    for (u, v) in x.edges() {
        let (a, b) = (to_p[u], to_p[v]);
        if a != b || u == v {
            graph.add_edge(a, b);
        }
    }
    for (u, v) in y.edges() {
        let (a, b) = (to_p[nx + u], to_p[nx + v]);
        if a != b || u == v {
            graph.add_edge(a, b);
        }
    }
    let g = DiGraphMap::new(x.clone(), graph.clone(), to_p[..nx].to_vec())?;
    let j = DiGraphMap::new(y.clone(), graph.clone(), to_p[nx..].to_vec())?;
    Ok(Pushout { graph, g, j })
}

/// A finite abstract simplicial complex stored through its facets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertices: IndexSet<String>,
    facets: Vec<Vec<usize>>,
    simplices: Vec<Vec<usize>>,
}

impl SimplicialComplex {
    /// Builds the complex generated by the given facets (vertex labels).
    /// Non-maximal entries are dropped from the facet list.
    pub fn from_facets<S: AsRef<str>>(facets: &[Vec<S>]) -> Result<Self> {
        let mut vertices = IndexSet::new();
        let mut raw: Vec<Vec<usize>> = Vec::new();
        for f in facets {
            if f.is_empty() {
                return Err(Error::Domain("empty facet".into()));
            }
            let mut s: Vec<usize> = f.iter().map(|l| vertices.insert_full(l.as_ref().to_string()).0).collect();
            s.sort_unstable();
            s.dedup();
            raw.push(s);
        }
        raw.sort();
        raw.dedup();
        let maximal: Vec<Vec<usize>> = raw
            .iter()
            .filter(|s| !raw.iter().any(|t| t.len() > s.len() && is_subset(s, t)))
            .cloned()
            .collect();
        let mut all: BTreeSet<(usize, Vec<usize>)> = BTreeSet::new();
        for f in &maximal {
            let k = f.len();
            for mask in 1u64..(1u64 << k) {
                let face: Vec<usize> = (0..k).filter(|b| mask >> b & 1 == 1).map(|b| f[b]).collect();
                all.insert((face.len(), face));
            }
        }
        let simplices = all.into_iter().map(|(_, s)| s).collect();
        Ok(SimplicialComplex { vertices, facets: maximal, simplices })
    }

    pub fn vertex_labels(&self) -> impl Iterator<Item = &str> {
        self.vertices.iter().map(String::as_str)
    }

    pub fn facets(&self) -> &[Vec<usize>] {
        &self.facets
    }

    /// All simplices, sorted by dimension then lexicographically.
    pub fn simplices(&self) -> &[Vec<usize>] {
        &self.simplices
    }

    pub fn simplex_label(&self, s: &[usize]) -> String {
        let names: Vec<&str> = s.iter().map(|&v| self.vertices[v].as_str()).collect();
        format!("{{{}}}", names.join(","))
    }

    /// The subcomplex of all simplices whose vertices lie in `keep`.
    pub fn full_subcomplex(&self, keep: &[&str]) -> Result<SimplicialComplex> {
        let ids: BTreeSet<usize> = keep
            .iter()
            .map(|l| self.vertices.get_index_of(*l).ok_or_else(|| Error::Domain(format!("unknown vertex '{l}'"))))
            .collect::<Result<_>>()?;
        let faces: Vec<Vec<&str>> = self
            .simplices
            .iter()
            .filter(|s| s.iter().all(|v| ids.contains(v)))
            .map(|s| s.iter().map(|&v| self.vertices[v].as_str()).collect())
            .collect();
        SimplicialComplex::from_facets(&faces)
    }

    fn poset_graph(&self, codim_one: bool) -> DiGraph {
        let mut g = DiGraph::new();
        for s in &self.simplices {
            g.add_vertex(self.simplex_label(s));
        }
        for (a, s) in self.simplices.iter().enumerate() {
            for (b, t) in self.simplices.iter().enumerate() {
                let ok = if codim_one { t.len() == s.len() + 1 } else { t.len() > s.len() };
                if ok && is_subset(s, t) {
                    g.add_edge(a, b);
                }
            }
        }
        g
    }
}

fn is_subset(s: &[usize], t: &[usize]) -> bool {
    s.iter().all(|v| t.binary_search(v).is_ok())
}

/// Parses a facet list: one facet per line, labels separated by whitespace.
pub fn parse_facet_list(text: &str) -> Result<SimplicialComplex> {
    let mut facets = Vec::new();
    for line in text.lines() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        facets.push(t.split_whitespace().collect::<Vec<_>>());
    }
    SimplicialComplex::from_facets(&facets)
}

/// Edge σ→τ whenever σ is a proper face of τ.
pub fn face_graph(s: &SimplicialComplex) -> DiGraph {
    s.poset_graph(false)
}

/// Edge σ→τ whenever σ is a codimension-one face of τ.
pub fn hasse_diagram(s: &SimplicialComplex) -> DiGraph {
    s.poset_graph(true)
}
