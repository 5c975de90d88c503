//! Long cofibrations, pushouts along them, excision and the Mayer–Vietoris
//! sequence.

use std::sync::Arc;

use serde::Serialize;

use crate::digraph::{pushout, DiGraph, DiGraphMap, Pushout};
use crate::error::{Error, Result};
use crate::homalg::exact::{check_exact_sequence, PresentedGroup};
use crate::homalg::presentation::{dense_rank, induced_matrix, solve};
use crate::homalg::{
    homology, homology_basis_of, induced_homology_map, ChainMap, CoeffRing, DenseMatrix, FreeChainComplex,
    GroupSummary, HomologyBasis, Ring, SparseMatrix,
};
use crate::preorder::{is_dwyer, reachability_preorder, MonotoneMap, Preorder, DWYER_EXHAUSTIVE_MAX};
use crate::rcomplex::{relative_complex_condensed, Condensed, RelativeComplex, DEFAULT_CAP};
use crate::with_ring;

fn check_subset(x: &DiGraph, a: &[usize]) -> Result<()> {
    let mut seen = vec![false; x.n()];
    for &v in a {
        if v >= x.n() {
            return Err(Error::Domain(format!("vertex index {v} is not in the graph")));
        }
        if std::mem::replace(&mut seen[v], true) {
            return Err(Error::Domain(format!("vertex '{}' listed twice", x.label(v))));
        }
    }
    Ok(())
}

/// Vertices reachable from some vertex of `a`, in vertex order.
pub fn reach_set(x: &DiGraph, a: &[usize]) -> Result<Vec<usize>> {
    check_subset(x, a)?;
    let pre = reachability_preorder(x);
    Ok((0..x.n()).filter(|&v| a.iter().any(|&s| pre.leq(s, v))).collect())
}

/// The induced subgraph `rA` on [`reach_set`].
pub fn reach_subgraph(x: &DiGraph, a: &[usize]) -> Result<DiGraph> {
    Ok(x.induced_subgraph(&reach_set(x, a)?))
}

/// The data exhibiting `A ↪ X` as a long cofibration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LongCofibrationWitness {
    pub a: Vec<usize>,
    /// Vertices of `rA`, in vertex order.
    pub reach: Vec<usize>,
    /// `pi[k]` is `π(reach[k])`.
    pub pi: Vec<usize>,
}

impl LongCofibrationWitness {
    pub fn pi_of(&self, x: usize) -> Option<usize> {
        self.reach.iter().position(|&r| r == x).map(|k| self.pi[k])
    }

    /// `(x, π(x))` label pairs.
    pub fn labeled(&self, x: &DiGraph) -> Vec<[String; 2]> {
        self.reach.iter().zip(&self.pi).map(|(&r, &p)| [x.label(r).to_string(), x.label(p).to_string()]).collect()
    }

    /// Rechecks both defining conditions against `x`.
    pub fn verify(&self, x: &DiGraph) -> bool {
        let pre = reachability_preorder(x);
        let mut in_a = vec![false; x.n()];
        for &v in &self.a {
            in_a[v] = true;
        }
        let no_inward = x.edges().all(|(u, v)| in_a[u] || !in_a[v]);
        no_inward
            && self.reach.iter().zip(&self.pi).all(|(&r, &p)| {
                in_a[p] && (!in_a[r] || p == r) && self.a.iter().all(|&b| pre.leq(b, r) == pre.leq(b, p))
            })
    }
}

/// Decides whether the induced subgraph on `a` is a long cofibration in `x`;
/// `π(x)` is the first vertex of `A` (in vertex order) that works.
pub fn is_long_cofibration(x: &DiGraph, a: &[usize]) -> Result<Option<LongCofibrationWitness>> {
    check_subset(x, a)?;
    let mut in_a = vec![false; x.n()];
    for &v in a {
        in_a[v] = true;
    }
    if x.edges().any(|(u, v)| !in_a[u] && in_a[v]) {
        return Ok(None);
    }
    let pre = reachability_preorder(x);
    let mut sorted_a = a.to_vec();
    sorted_a.sort_unstable();
    let reach: Vec<usize> = (0..x.n()).filter(|&v| sorted_a.iter().any(|&s| pre.leq(s, v))).collect();
    let mut pi = Vec::with_capacity(reach.len());
    for &r in &reach {
        if in_a[r] {
            pi.push(r);
            continue;
        }
        let found = sorted_a
            .iter()
            .copied()
            .find(|&c| pre.leq(c, r) && sorted_a.iter().all(|&b| pre.leq(b, r) == pre.leq(b, c)));
        match found {
            Some(c) => pi.push(c),
            None => return Ok(None),
        }
    }
    Ok(Some(LongCofibrationWitness { a: a.to_vec(), reach, pi }))
}

/// The inclusion `Pre(A) ↪ Pre(X)` for the induced subgraph on `a`.
pub fn preorder_inclusion(x: &DiGraph, a: &[usize]) -> Result<MonotoneMap> {
    check_subset(x, a)?;
    let sub: Preorder = reachability_preorder(&x.induced_subgraph_in_order(a));
    MonotoneMap::new(sub, reachability_preorder(x), a.to_vec())
}

/// Whether `Pre(A) ↪ Pre(X)` is a Dwyer morphism; an inclusion that is not
/// full counts as not Dwyer.
pub fn dwyer_holds(x: &DiGraph, a: &[usize]) -> Result<bool> {
    match is_dwyer(&preorder_inclusion(x, a)?) {
        Ok(w) => Ok(w.is_some()),
        Err(Error::Shape(_)) => Ok(false),
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CofibrationReport {
    pub long_cofibration: bool,
    /// `(x, π(x))` pairs when a witness exists.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pi: Option<Vec<[String; 2]>>,
    /// Present when the graph is small enough for the cross-check.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dwyer: Option<bool>,
    pub pass: bool,
}

/// Detection plus the Dwyer cross-check (for at most 12 vertices).
pub fn cofib_check(x: &DiGraph, a: &[usize]) -> Result<CofibrationReport> {
    let w = is_long_cofibration(x, a)?;
    let dwyer = if x.n() <= DWYER_EXHAUSTIVE_MAX { Some(dwyer_holds(x, a)?) } else { None };
    let verified = w.as_ref().map_or(true, |w| w.verify(x));
    let pass = verified && dwyer.map_or(true, |d| d == w.is_some());
    Ok(CofibrationReport { long_cofibration: w.is_some(), pi: w.map(|w| w.labeled(x)), dwyer, pass })
}

/// `X ∪_A Y` for a long cofibration `A ↪ X` and a map `f: A → Y`.
#[derive(Debug, Clone)]
pub struct Gluing {
    pub x: DiGraph,
    pub a: Vec<usize>,
    pub y: DiGraph,
    /// `i: A → X`.
    pub i: DiGraphMap,
    pub f: DiGraphMap,
    pub pushout: Pushout,
    pub witness: LongCofibrationWitness,
}

impl Gluing {
    /// Fails with a precondition error unless `A ↪ X` is a long cofibration.
    pub fn new(x: &DiGraph, a: &[usize], y: &DiGraph, f: &DiGraphMap) -> Result<Self> {
        let witness = is_long_cofibration(x, a)?
            .ok_or_else(|| Error::Precondition("A is not a long cofibration in X".into()))?;
        let sub = x.induced_subgraph_in_order(a);
        if f.source != sub || &f.target != y {
            return Err(Error::Domain("f must map the induced subgraph on A into Y".into()));
        }
        let i = DiGraphMap::new(sub, x.clone(), a.to_vec())?;
        let po = pushout(&i, f)?;
        Ok(Gluing { x: x.clone(), a: a.to_vec(), y: y.clone(), i, f: f.clone(), pushout: po, witness })
    }

    pub fn subgraph(&self) -> &DiGraph {
        &self.i.source
    }

    /// Vertices of `P` in the image of `j`.
    pub fn y_in_p(&self) -> Vec<usize> {
        self.pushout.j.map.clone()
    }
}

// Submatrices of a full class-level chain map between relative complexes,
// padded to degree `top`.
fn relative_chain_map(
    src: &Condensed,
    src_rel: &RelativeComplex,
    tgt: &Condensed,
    tgt_rel: &RelativeComplex,
    vertex_map: &[usize],
    top: usize,
) -> Result<ChainMap> {
    let cm = src.class_map(tgt, vertex_map);
    let full = src.rc.map_matrices(&tgt.rc, &cm)?;
    for (k, m) in full.iter().enumerate() {
        let mut in_sub = vec![false; tgt.rc.dim(k)];
        for &t in &tgt_rel.sub[k] {
            in_sub[t] = true;
        }
        if src_rel.sub[k].iter().any(|&c| m.column(c).iter().any(|&(r, _)| !in_sub[r as usize])) {
            return Err(Error::Verification("the map does not send the subcomplex into the subcomplex".into()));
        }
    }
    let s = Arc::new(src_rel.complex.extended(top));
    let t = Arc::new(tgt_rel.complex.extended(top));
    let mats = (0..=top)
        .map(|k| match full.get(k) {
            Some(m) if k < src_rel.kept.len() && k < tgt_rel.kept.len() => m.submatrix(&tgt_rel.kept[k], &src_rel.kept[k]),
            _ => SparseMatrix::zeros(t.dim(k), s.dim(k)),
        })
        .collect();
    ChainMap::new(s, t, mats)
}

#[derive(Debug, Clone, Serialize)]
pub struct ExcisionDegree {
    pub degree: usize,
    pub source: GroupSummary,
    pub target: GroupSummary,
    pub isomorphism: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExcisionReport {
    pub ring: String,
    pub pushout_vertices: Vec<String>,
    pub j_long_cofibration: bool,
    pub degrees: Vec<ExcisionDegree>,
    pub pass: bool,
}

/// Checks that `g_*: RH_k(X, A) → RH_k(P, Y)` is an isomorphism for `k ≤ max_degree`
/// and that `j: Y → P` is a long cofibration.
pub fn excision_check(
    x: &DiGraph,
    a: &[usize],
    y: &DiGraph,
    f: &DiGraphMap,
    ring: CoeffRing,
    max_degree: usize,
) -> Result<ExcisionReport> {
    let gl = Gluing::new(x, a, y, f)?;
    let p = &gl.pushout.graph;
    let y_in_p = gl.y_in_p();
    let j_cofib = is_long_cofibration(p, &y_in_p)?.is_some();
    let cx = Condensed::new(x, DEFAULT_CAP)?;
    let cp = Condensed::new(p, DEFAULT_CAP)?;
    let rel_x = relative_complex_condensed(&cx, a, ring)?;
    let rel_p = relative_complex_condensed(&cp, &y_in_p, ring)?;
    let top = max_degree.max(rel_x.complex.max_degree()).max(rel_p.complex.max_degree());
    let phi = relative_chain_map(&cx, &rel_x, &cp, &rel_p, &gl.pushout.g.map, top)?;
    let mut degrees = Vec::new();
    for k in 0..=max_degree {
        let iso = with_ring!(ring, |r| induced_homology_map(&r, &phi, k)?.is_isomorphism(&r));
        degrees.push(ExcisionDegree {
            degree: k,
            source: homology(&phi.source, k)?,
            target: homology(&phi.target, k)?,
            isomorphism: iso,
        });
    }
    let pass = j_cofib && degrees.iter().all(|d| d.isomorphism);
    Ok(ExcisionReport {
        ring: ring.to_string(),
        pushout_vertices: p.labels().map(str::to_string).collect(),
        j_long_cofibration: j_cofib,
        degrees,
        pass,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SequenceNode {
    /// `"A"`, `"X+Y"` or `"P"`.
    pub group: &'static str,
    pub degree: usize,
    pub rank: usize,
    pub torsion: Vec<u64>,
    pub exact: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct MayerVietorisReport {
    pub ring: String,
    /// From `RH_max(A)` down to `RH_0(P)`.
    pub nodes: Vec<SequenceNode>,
    pub betti_a: Vec<usize>,
    pub betti_x: Vec<usize>,
    pub betti_y: Vec<usize>,
    pub betti_p: Vec<usize>,
    /// `dim coker α_k + dim ker α_{k-1}`, which equals `betti_p` when the sequence is exact (fields only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub recovered_betti_p: Option<Vec<usize>>,
    /// Why the connecting map could not be formed, if it could not.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
    pub exact: bool,
    pub pass: bool,
}

struct Leg {
    mats: Vec<SparseMatrix>,
}

impl Leg {
    fn new(src: &Condensed, tgt: &Condensed, vertex_map: &[usize], top: usize) -> Result<Self> {
        let cm = src.class_map(tgt, vertex_map);
        let mut mats = src.rc.map_matrices(&tgt.rc, &cm)?;
        for k in mats.len()..=top {
            mats.push(SparseMatrix::zeros(tgt.rc.dim(k), src.rc.dim(k)));
        }
        Ok(Leg { mats })
    }
}

fn block_diag<R: Ring>(ring: &R, a: &DenseMatrix<R::Elem>, b: &DenseMatrix<R::Elem>) -> DenseMatrix<R::Elem> {
    let top = a.hcat(&DenseMatrix::zeros(ring, a.rows(), b.cols()));
    let bottom = DenseMatrix::zeros(ring, b.rows(), a.cols()).hcat(b);
    top.vcat(&bottom)
}

fn neg_reduced<R: Ring>(ring: &R, m: &DenseMatrix<R::Elem>, orders: &[R::Elem]) -> DenseMatrix<R::Elem> {
    let mut out = m.clone();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            out.set(i, j, ring.reduce(&ring.neg(m.get(i, j)), &orders[i]));
        }
    }
    out
}

/// Assembles `… → RH_k(A) → RH_k(X)⊕RH_k(Y) → RH_k(P) → RH_{k-1}(A) → …`
/// with `α = (i_*, −f_*)`, `β = g_* + j_*` and the zig-zag connecting map,
/// and checks exactness at every node of degree `≤ max_degree`.
pub fn mayer_vietoris_check(
    x: &DiGraph,
    a: &[usize],
    y: &DiGraph,
    f: &DiGraphMap,
    ring: CoeffRing,
    max_degree: usize,
) -> Result<MayerVietorisReport> {
    let gl = Gluing::new(x, a, y, f)?;
    with_ring!(ring, |r| mv_generic(&r, ring, &gl, max_degree))
}

fn mv_generic<R: Ring>(ring: &R, coeff: CoeffRing, gl: &Gluing, max_degree: usize) -> Result<MayerVietorisReport> {
    let top = max_degree + 2;
    let ca = Condensed::new(gl.subgraph(), DEFAULT_CAP)?;
    let cx = Condensed::new(&gl.x, DEFAULT_CAP)?;
    let cy = Condensed::new(&gl.y, DEFAULT_CAP)?;
    let cp = Condensed::new(&gl.pushout.graph, DEFAULT_CAP)?;
    let cc = |c: &Condensed| -> Result<FreeChainComplex> { Ok(c.chain_complex(coeff)?.extended(top)) };
    let (ka, kx, ky, kp) = (cc(&ca)?, cc(&cx)?, cc(&cy)?, cc(&cp)?);
    let li = Leg::new(&ca, &cx, &gl.i.map, top)?;
    let lf = Leg::new(&ca, &cy, &gl.f.map, top)?;
    let lg = Leg::new(&cx, &cp, &gl.pushout.g.map, top)?;
    let lj = Leg::new(&cy, &cp, &gl.pushout.j.map, top)?;

    let bases = |c: &FreeChainComplex| -> Result<Vec<HomologyBasis<R::Elem>>> {
        (0..=max_degree + 1).map(|k| homology_basis_of(ring, c, k)).collect()
    };
    let (ha, hx, hy, hp) = (bases(&ka)?, bases(&kx)?, bases(&ky)?, bases(&kp)?);
    let dense = |m: &SparseMatrix| m.to_dense(ring);

    let mut alpha = Vec::new();
    let mut beta = Vec::new();
    for k in 0..=max_degree {
        let ik = induced_matrix(ring, &dense(&li.mats[k]), &ha[k], &hx[k]);
        let fk = induced_matrix(ring, &dense(&lf.mats[k]), &ha[k], &hy[k]);
        alpha.push(ik.vcat(&neg_reduced(ring, &fk, &hy[k].orders)));
        let gk = induced_matrix(ring, &dense(&lg.mats[k]), &hx[k], &hp[k]);
        let jk = induced_matrix(ring, &dense(&lj.mats[k]), &hy[k], &hp[k]);
        beta.push(gk.hcat(&jk));
    }

    // δ_k: RH_k(P) → RH_{k-1}(A) for 1 ≤ k ≤ max_degree + 1.
    let mut delta: Vec<Option<DenseMatrix<R::Elem>>> = vec![None];
    let mut failure = None;
    for k in 1..=max_degree + 1 {
        let b = dense(&lg.mats[k]).hcat(&dense(&lj.mats[k]));
        let dp = dense(&kp.differential(k + 1));
        let dxy = block_diag(ring, &dense(&kx.differential(k)), &dense(&ky.differential(k)));
        let a_prev = dense(&li.mats[k - 1]).vcat(&dense(&lf.mats[k - 1]).map(ring, |r, v| r.neg(v)));
        let (nu, nb, na) = (b.cols(), dp.cols(), a_prev.cols());
        let neg = |m: &DenseMatrix<R::Elem>| m.map(ring, |r, v| r.neg(v));
        let upper = b.hcat(&neg(&dp)).hcat(&DenseMatrix::zeros(ring, b.rows(), na));
        let lower = dxy.hcat(&DenseMatrix::zeros(ring, dxy.rows(), nb)).hcat(&neg(&a_prev));
        let system = upper.vcat(&lower);
        let mut cols = Vec::new();
        for z in &hp[k].reps {
            let mut rhs = z.clone();
            rhs.extend(std::iter::repeat(ring.zero()).take(dxy.rows()));
            match solve(ring, &system, &rhs) {
                Some(sol) => cols.push(ha[k - 1].coordinates(ring, &sol[nu + nb..])),
                None => {
                    failure.get_or_insert_with(|| format!("no lift for a class in degree {k}"));
                    cols.push(vec![ring.zero(); ha[k - 1].rank()]);
                }
            }
        }
        delta.push(Some(DenseMatrix::from_columns(ring, ha[k - 1].rank(), &cols)));
    }

    let group = |b: &HomologyBasis<R::Elem>| PresentedGroup { orders: b.orders.clone() };
    let mut groups = vec![group(&hp[max_degree + 1])];
    let mut maps = Vec::new();
    let mut labels = Vec::new();
    for k in (0..=max_degree).rev() {
        maps.push(delta[k + 1].clone().expect("k + 1 ≥ 1"));
        groups.push(group(&ha[k]));
        labels.push(("A", k, &ha[k]));
        maps.push(alpha[k].clone());
        let xy = group(&hx[k]).direct_sum(&group(&hy[k]));
        groups.push(xy);
        labels.push(("X+Y", k, &hx[k]));
        maps.push(beta[k].clone());
        groups.push(group(&hp[k]));
        labels.push(("P", k, &hp[k]));
    }
    maps.push(DenseMatrix::zeros(ring, 0, hp[0].rank()));
    groups.push(PresentedGroup { orders: Vec::new() });
    let exactness = check_exact_sequence(ring, &groups, &maps)?;

    let summary = |b: &HomologyBasis<R::Elem>| -> (usize, Vec<u64>) {
        let torsion = b.orders.iter().filter(|d| !ring.is_zero(d)).map(|d| ring.to_order(d)).collect();
        (b.betti(ring), torsion)
    };
    let nodes: Vec<SequenceNode> = labels
        .iter()
        .zip(&exactness)
        .map(|(&(name, k, basis), &exact)| {
            let (rank, torsion) = if name == "X+Y" {
                let (bx, tx) = summary(basis);
                let (by, ty) = summary(&hy[k]);
                (bx + by, tx.into_iter().chain(ty).collect())
            } else {
                summary(basis)
            };
            SequenceNode { group: name, degree: k, rank, torsion, exact }
        })
        .collect();
    let betti = |h: &[HomologyBasis<R::Elem>]| h[..=max_degree].iter().map(|b| b.betti(ring)).collect::<Vec<_>>();
    let recovered = ring.is_field().then(|| {
        (0..=max_degree)
            .map(|k| {
                let coker = hx[k].rank() + hy[k].rank() - dense_rank(ring, &alpha[k]);
                let ker = if k == 0 { 0 } else { ha[k - 1].rank() - dense_rank(ring, &alpha[k - 1]) };
                coker + ker
            })
            .collect::<Vec<_>>()
    });
    let exact = failure.is_none() && exactness.iter().all(|&e| e);
    let betti_p = betti(&hp);
    let pass = exact && recovered.as_ref().map_or(true, |r| *r == betti_p);
    Ok(MayerVietorisReport {
        ring: coeff.to_string(),
        nodes,
        betti_a: betti(&ha),
        betti_x: betti(&hx),
        betti_y: betti(&hy),
        betti_p,
        recovered_betti_p: recovered,
        failure,
        exact,
        pass,
    })
}
