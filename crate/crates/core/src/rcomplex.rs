//! The reachability complex of a digraph, its homology, induced maps,
//! relative complexes and the prism homotopy.

use std::sync::Arc;

use crate::digraph::{DiGraph, DiGraphMap};
use crate::error::{Error, Result};
use crate::homalg::{
    homology_summary, quotient_complex, ChainMap, CoeffRing, FreeChainComplex, GroupSummary, HomologySummary,
    SparseMatrix,
};
use crate::preorder::{condensation, reachability_preorder, CondensationPoset, Preorder};

/// Default number of degrees reported by homology computations.
pub const DEFAULT_MAX_DEGREE: usize = 6;
/// Default cap on the number of generators in a single degree.
pub const DEFAULT_CAP: usize = 1_000_000;

/// Tuples `(v_0,…,v_k)` with `v_{j-1} ≠ v_j` and `v_{j-1} ≤ v_j`, stored
/// per degree in lexicographic order of vertex indices.
#[derive(Debug, Clone)]
pub struct ReachabilityComplex {
    labels: Vec<String>,
    pre: Preorder,
    gens: Vec<Vec<Vec<u32>>>,
    complete: bool,
}

impl ReachabilityComplex {
    /// Generators in degrees `0..=top` (fewer when the complex ends earlier).
    pub fn from_preorder(pre: &Preorder, top: usize, cap: usize) -> Result<Self> {
        let n = pre.len();
        let succ: Vec<Vec<u32>> =
            (0..n).map(|v| (0..n).filter(|&w| w != v && pre.leq(v, w)).map(|w| w as u32).collect()).collect();
        if n > cap {
            return Err(Error::Resource { degree: 0, count: n, cap });
        }
        let mut gens: Vec<Vec<Vec<u32>>> = vec![(0..n as u32).map(|v| vec![v]).collect()];
        let mut complete = n == 0;
        for k in 1..=top {
            if complete {
                break;
            }
            let prev = &gens[k - 1];
            let count: usize = prev.iter().map(|t| succ[*t.last().expect("nonempty") as usize].len()).sum();
            if count > cap {
                return Err(Error::Resource { degree: k, count, cap });
            }
            if count == 0 {
                complete = true;
                break;
            }
            let mut next = Vec::with_capacity(count);
            for t in prev {
                for &w in &succ[*t.last().expect("nonempty") as usize] {
                    let mut u = Vec::with_capacity(k + 1);
                    u.extend_from_slice(t);
                    u.push(w);
                    next.push(u);
                }
            }
            gens.push(next);
        }
        if !complete {
            complete = gens.last().expect("degree 0").iter().all(|t| succ[*t.last().expect("nonempty") as usize].is_empty());
        }
        Ok(ReachabilityComplex { labels: pre.labels().to_vec(), pre: pre.clone(), gens, complete })
    }

    /// `RC(G)` with generators up to degree `max_degree + 1`, so that homology
    /// through `max_degree` is exact.
    pub fn truncated(g: &DiGraph, max_degree: usize, cap: usize) -> Result<Self> {
        Self::from_preorder(&reachability_preorder(g), max_degree + 1, cap)
    }

    /// Strict chains of the condensation poset; finite and complete.
    pub fn condensation_order_complex(g: &DiGraph, cap: usize) -> Result<Self> {
        let c = condensation(g);
        Self::from_preorder(&c.poset, c.poset.len(), cap)
    }

    pub fn preorder(&self) -> &Preorder {
        &self.pre
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn max_degree(&self) -> usize {
        self.gens.len() - 1
    }

    pub fn generators(&self, k: usize) -> &[Vec<u32>] {
        self.gens.get(k).map_or(&[], |g| g.as_slice())
    }

    pub fn dim(&self, k: usize) -> usize {
        self.generators(k).len()
    }

    pub fn index_of(&self, t: &[u32]) -> Option<usize> {
        let k = t.len().checked_sub(1)?;
        self.gens.get(k)?.binary_search_by(|probe| probe.as_slice().cmp(t)).ok()
    }

    pub fn generator_label(&self, t: &[u32]) -> String {
        let names: Vec<&str> = t.iter().map(|&v| self.labels[v as usize].as_str()).collect();
        format!("({})", names.join(","))
    }

    /// Whether `t` is a generator of the (untruncated) complex.
    pub fn is_generator(&self, t: &[u32]) -> bool {
        !t.is_empty()
            && t.iter().all(|&v| (v as usize) < self.pre.len())
            && t.windows(2).all(|w| w[0] != w[1] && self.pre.leq(w[0] as usize, w[1] as usize))
    }

    /// `∂_k` as an integer matrix.
    pub fn boundary_matrix(&self, k: usize) -> SparseMatrix {
        if k == 0 {
            return SparseMatrix::zeros(0, self.dim(0));
        }
        let cols = self.generators(k).iter().map(|t| self.boundary_terms(t)).collect();
        SparseMatrix::from_columns(self.dim(k - 1), cols)
    }

    fn boundary_terms(&self, t: &[u32]) -> Vec<(u32, i64)> {
        let k = t.len() - 1;
        let mut out = Vec::with_capacity(k + 1);
        let mut face = Vec::with_capacity(k);
        for j in 0..=k {
            if j > 0 && j < k && t[j - 1] == t[j + 1] {
                continue;
            }
            face.clear();
            face.extend(t.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, &v)| v));
            let idx = self.index_of(&face).expect("faces of generators are generators");
            out.push((idx as u32, if j % 2 == 0 { 1 } else { -1 }));
        }
        out
    }

    /// The complex with coefficients in `ring`.
    pub fn chain_complex(&self, ring: CoeffRing) -> Result<FreeChainComplex> {
        let basis = self.gens.iter().map(|d| d.iter().map(|t| self.generator_label(t)).collect()).collect();
        let diff = (0..=self.max_degree()).map(|k| self.boundary_matrix(k)).collect();
        FreeChainComplex::new(ring, basis, diff, self.complete)
    }

    /// Matrices of the chain map induced by a vertex function into `target`
    /// (tuples with a repeated adjacent image go to zero).
    pub fn map_matrices(&self, target: &ReachabilityComplex, vertex_map: &[usize]) -> Result<Vec<SparseMatrix>> {
        let top = self.max_degree().min(target.max_degree());
        let mut out = Vec::with_capacity(top + 1);
        let mut img = Vec::new();
        for k in 0..=top {
            let mut cols = Vec::with_capacity(self.dim(k));
            for t in self.generators(k) {
                img.clear();
                img.extend(t.iter().map(|&v| vertex_map[v as usize] as u32));
                if img.windows(2).any(|w| w[0] == w[1]) {
                    cols.push(Vec::new());
                    continue;
                }
                let idx = target
                    .index_of(&img)
                    .ok_or_else(|| Error::InvalidMap(format!("{} has no image generator", self.generator_label(t))))?;
                cols.push(vec![(idx as u32, 1)]);
            }
            out.push(SparseMatrix::from_columns(target.dim(k), cols));
        }
        Ok(out)
    }
}

/// Which complex a homology computation runs on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Condensation,
    Truncated,
    Both,
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "condensation" => Ok(Method::Condensation),
            "truncated" => Ok(Method::Truncated),
            "both" => Ok(Method::Both),
            other => Err(Error::Domain(format!("unknown method '{other}'"))),
        }
    }
}

/// Degree window, route and resource cap for homology computations.
#[derive(Debug, Clone, Copy)]
pub struct HomologyOptions {
    pub max_degree: usize,
    pub method: Method,
    pub cap: usize,
}

impl Default for HomologyOptions {
    fn default() -> Self {
        HomologyOptions { max_degree: DEFAULT_MAX_DEGREE, method: Method::Condensation, cap: DEFAULT_CAP }
    }
}

/// Compares two summaries degree by degree through `max_degree`.
pub fn summaries_agree(a: &HomologySummary, b: &HomologySummary, max_degree: usize) -> bool {
    (0..=max_degree).all(|k| a.betti_at(k) == b.betti_at(k) && a.torsion_at(k) == b.torsion_at(k))
}

/// `RH_*(G)` in degrees `0..=max_degree`.
pub fn reachability_homology(g: &DiGraph, ring: CoeffRing, opts: HomologyOptions) -> Result<HomologySummary> {
    let k = opts.max_degree;
    let cond = || -> Result<HomologySummary> {
        let rc = ReachabilityComplex::condensation_order_complex(g, opts.cap)?;
        homology_summary(&rc.chain_complex(ring)?, k)
    };
    let trunc = || -> Result<HomologySummary> {
        let rc = ReachabilityComplex::truncated(g, k, opts.cap)?;
        homology_summary(&rc.chain_complex(ring)?, k)
    };
    match opts.method {
        Method::Condensation => cond(),
        Method::Truncated => trunc(),
        Method::Both => {
            let a = cond()?;
            let b = trunc()?;
            if !summaries_agree(&a, &b, k) {
                return Err(Error::Verification("truncated and condensation homology disagree".into()));
            }
            Ok(a)
        }
    }
}

/// A digraph together with its condensation and the order complex on it.
#[derive(Debug, Clone)]
pub struct Condensed {
    pub graph: DiGraph,
    pub cond: CondensationPoset,
    pub rc: ReachabilityComplex,
}

impl Condensed {
    pub fn new(g: &DiGraph, cap: usize) -> Result<Self> {
        let cond = condensation(g);
        let rc = ReachabilityComplex::from_preorder(&cond.poset, cond.poset.len(), cap)?;
        Ok(Condensed { graph: g.clone(), cond, rc })
    }

    /// Class-level function induced by a vertex function into `target`.
    pub fn class_map(&self, target: &Condensed, vertex_map: &[usize]) -> Vec<usize> {
        self.cond.classes.iter().map(|c| target.cond.class_of[vertex_map[c[0]]]).collect()
    }

    pub fn chain_complex(&self, ring: CoeffRing) -> Result<FreeChainComplex> {
        self.rc.chain_complex(ring)
    }
}

fn check_graph_map(m: &DiGraphMap) -> Result<()> {
    if !m.is_valid() {
        return Err(Error::InvalidMap("vertex function does not respect edges".into()));
    }
    Ok(())
}

/// `f_*: RC(G) → RC(H)` between the given (compatible) complexes.
pub fn induced_chain_map(
    m: &DiGraphMap,
    source: &ReachabilityComplex,
    target: &ReachabilityComplex,
    ring: CoeffRing,
) -> Result<ChainMap> {
    check_graph_map(m)?;
    if source.pre.len() != m.source.n() || target.pre.len() != m.target.n() {
        return Err(Error::Dimension("complexes do not belong to the map's graphs".into()));
    }
    let mats = source.map_matrices(target, &m.map)?;
    let top = source.max_degree().min(target.max_degree());
    let src = Arc::new(source.chain_complex(ring)?);
    let tgt = Arc::new(target.chain_complex(ring)?);
    let mats = pad_maps(mats, &src, &tgt, top);
    ChainMap::new(src, tgt, mats)
}

/// `f_*` between condensation order complexes.
pub fn induced_condensed_map(m: &DiGraphMap, source: &Condensed, target: &Condensed, ring: CoeffRing) -> Result<ChainMap> {
    check_graph_map(m)?;
    let cm = source.class_map(target, &m.map);
    let top = source.rc.max_degree().min(target.rc.max_degree());
    let mats = source.rc.map_matrices(&target.rc, &cm)?;
    let src = Arc::new(source.chain_complex(ring)?);
    let tgt = Arc::new(target.chain_complex(ring)?);
    let mats = pad_maps(mats, &src, &tgt, top);
    ChainMap::new(src, tgt, mats)
}

// Chain maps cover every degree stored on both sides.
fn pad_maps(mut mats: Vec<SparseMatrix>, src: &FreeChainComplex, tgt: &FreeChainComplex, top: usize) -> Vec<SparseMatrix> {
    let want = src.max_degree().min(tgt.max_degree());
    for k in top + 1..=want {
        mats.push(SparseMatrix::zeros(tgt.dim(k), src.dim(k)));
    }
    mats
}

/// Whether `f(v)` reaches `g(v)` for every vertex.
pub fn long_homotopy_exists(f: &DiGraphMap, g: &DiGraphMap) -> Result<bool> {
    if f.source != g.source || f.target != g.target {
        return Err(Error::Domain("maps have different sources or targets".into()));
    }
    let pre = reachability_preorder(&f.target);
    Ok(f.map.iter().zip(&g.map).all(|(&a, &b)| pre.leq(a, b)))
}

/// The prism homotopy `s_i: RC_i(G) → RC_{i+1}(H)` with
/// `s(x_0,…,x_i) = Σ_j (−1)^j (f x_0,…,f x_j, g x_j,…,g x_i)`,
/// satisfying `∂s + s∂ = g_* − f_*`.
pub fn prism_homotopy(
    f: &DiGraphMap,
    g: &DiGraphMap,
    source: &ReachabilityComplex,
    target: &ReachabilityComplex,
) -> Result<Vec<SparseMatrix>> {
    if !long_homotopy_exists(f, g)? {
        return Err(Error::Precondition("no long homotopy from f to g".into()));
    }
    check_graph_map(f)?;
    check_graph_map(g)?;
    let top = source.max_degree().min(target.max_degree().saturating_sub(1));
    let mut out = Vec::with_capacity(top + 1);
    let mut tuple = Vec::new();
    for i in 0..=top {
        let mut cols = Vec::with_capacity(source.dim(i));
        for x in source.generators(i) {
            let mut col = Vec::new();
            for j in 0..=i {
                tuple.clear();
                tuple.extend(x[..=j].iter().map(|&v| f.map[v as usize] as u32));
                tuple.extend(x[j..].iter().map(|&v| g.map[v as usize] as u32));
                if tuple.windows(2).any(|w| w[0] == w[1]) {
                    continue;
                }
                let idx = target.index_of(&tuple).ok_or_else(|| Error::InvalidMap("prism tuple is not a generator".into()))?;
                col.push((idx as u32, if j % 2 == 0 { 1 } else { -1 }));
            }
            cols.push(col);
        }
        out.push(SparseMatrix::from_columns(target.dim(i + 1), cols));
    }
    Ok(out)
}

/// `RC(G)/RC(A)` together with the positions of the surviving generators.
#[derive(Debug, Clone)]
pub struct RelativeComplex {
    pub complex: FreeChainComplex,
    /// Per degree, indices (in the ambient complex) of generators not in `RC(A)`.
    pub kept: Vec<Vec<usize>>,
    /// Per degree, indices of the generators of `RC(A)`.
    pub sub: Vec<Vec<usize>>,
}

/// Generators of the ambient complex lying in the subcomplex spanned by `members`
/// whose consecutive entries are related in `sub_order`.
fn subcomplex_selection(
    rc: &ReachabilityComplex,
    member_pos: &[Option<usize>],
    sub_order: &Preorder,
) -> Vec<Vec<usize>> {
    (0..=rc.max_degree())
        .map(|k| {
            rc.generators(k)
                .iter()
                .enumerate()
                .filter(|(_, t)| {
                    t.iter().all(|&v| member_pos[v as usize].is_some())
                        && t.windows(2).all(|w| {
                            sub_order.leq(member_pos[w[0] as usize].expect("member"), member_pos[w[1] as usize].expect("member"))
                        })
                })
                .map(|(i, _)| i)
                .collect()
        })
        .collect()
}

fn relative_from(rc: &ReachabilityComplex, ring: CoeffRing, sub: Vec<Vec<usize>>) -> Result<RelativeComplex> {
    let full = rc.chain_complex(ring)?;
    let complex = quotient_complex(&full, &sub)?;
    let kept = (0..=rc.max_degree())
        .map(|k| {
            let mut mask = vec![true; rc.dim(k)];
            for &i in &sub[k] {
                mask[i] = false;
            }
            (0..rc.dim(k)).filter(|&i| mask[i]).collect()
        })
        .collect();
    Ok(RelativeComplex { complex, kept, sub })
}

/// `RC(G, A)` for the induced subgraph on the vertices `a`, computed on the
/// truncated complex (degrees through `max_degree` trusted).
pub fn relative_complex_truncated(
    g: &DiGraph,
    a: &[usize],
    ring: CoeffRing,
    max_degree: usize,
    cap: usize,
) -> Result<RelativeComplex> {
    let rc = ReachabilityComplex::truncated(g, max_degree, cap)?;
    let mut pos = vec![None; g.n()];
    for (i, &v) in a.iter().enumerate() {
        if v >= g.n() {
            return Err(Error::Domain(format!("vertex {v} is not in the graph")));
        }
        pos[v] = Some(i);
    }
    let sub_order = reachability_preorder(&g.induced_subgraph_in_order(a));
    relative_from(&rc, ring, subcomplex_selection(&rc, &pos, &sub_order))
}

/// `RC(G, A)` on condensation order complexes. Needs the classes of `A` to
/// map injectively and order-reflectingly into those of `G`.
pub fn relative_complex_condensed(g: &Condensed, a: &[usize], ring: CoeffRing) -> Result<RelativeComplex> {
    let sub_graph = g.graph.induced_subgraph_in_order(a);
    let ca = condensation(&sub_graph);
    let image: Vec<usize> = ca.classes.iter().map(|c| g.cond.class_of[a[c[0]]]).collect();
    let mut pos = vec![None; g.cond.poset.len()];
    for (i, &x) in image.iter().enumerate() {
        if pos[x].is_some() {
            return Err(Error::Shape("two classes of A merge in G".into()));
        }
        pos[x] = Some(i);
    }
    for (i, &x) in image.iter().enumerate() {
        for (j, &y) in image.iter().enumerate() {
            if ca.poset.leq(i, j) != g.cond.poset.leq(x, y) {
                return Err(Error::Shape("A's reachability is not the restriction of G's".into()));
            }
        }
    }
    relative_from(&g.rc, ring, subcomplex_selection(&g.rc, &pos, &ca.poset))
}

/// `RH_*(G, A)` through `max_degree`.
pub fn relative_homology(g: &DiGraph, a: &[usize], ring: CoeffRing, opts: HomologyOptions) -> Result<HomologySummary> {
    let k = opts.max_degree;
    let cond = || -> Result<HomologySummary> {
        let c = Condensed::new(g, opts.cap)?;
        homology_summary(&relative_complex_condensed(&c, a, ring)?.complex, k)
    };
    let trunc = || -> Result<HomologySummary> {
        homology_summary(&relative_complex_truncated(g, a, ring, k, opts.cap)?.complex, k)
    };
    match opts.method {
        Method::Condensation => cond(),
        Method::Truncated => trunc(),
        Method::Both => {
            let (x, y) = (cond()?, trunc()?);
            if !summaries_agree(&x, &y, k) {
                return Err(Error::Verification("relative homology routes disagree".into()));
            }
            Ok(x)
        }
    }
}

/// Homology groups through `max_degree`, padded with zeros for a complete
/// complex that ends earlier.
pub fn padded_groups(s: &HomologySummary, max_degree: usize) -> Vec<GroupSummary> {
    (0..=max_degree)
        .map(|k| GroupSummary { degree: k, betti: s.betti_at(k), torsion: s.torsion_at(k) })
        .collect()
}
