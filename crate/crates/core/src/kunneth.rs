//! The Eilenberg–Zilber map on reachability complexes and Künneth checks for
//! box and strong products.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::digraph::{box_product, strong_product, DiGraph};
use crate::error::{Error, Result};
use crate::homalg::{
    induced_homology_map, tensor_complex, ChainMap, CoeffRing, GroupSummary, HomologySummary, SparseMatrix,
    TensorLayout,
};
use crate::preorder::{condensation, preorder_product, Preorder};
use crate::rcomplex::{padded_groups, reachability_homology, HomologyOptions, ReachabilityComplex, DEFAULT_CAP};
use crate::with_ring;

/// A lattice path from `(0,0)` to `(p,q)` in unit steps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StaircaseShuffle {
    pub steps: Vec<(usize, usize)>,
    pub sign: i64,
}

/// All `binomial(p+q, p)` staircases. The sign is `(−1)^m` where `m` counts
/// pairs of a second-coordinate step taken before a first-coordinate step.
pub fn enumerate_shuffles(p: usize, q: usize) -> Vec<StaircaseShuffle> {
    let mut out = Vec::new();
    let mut path = vec![(0, 0)];
    fn go(p: usize, q: usize, path: &mut Vec<(usize, usize)>, inversions: usize, out: &mut Vec<StaircaseShuffle>) {
        let (i, j) = *path.last().expect("starts at origin");
        if i == p && j == q {
            out.push(StaircaseShuffle { steps: path.clone(), sign: if inversions % 2 == 0 { 1 } else { -1 } });
            return;
        }
        if i < p {
            path.push((i + 1, j));
            go(p, q, path, inversions + j, out);
            path.pop();
        }
        if j < q {
            path.push((i, j + 1));
            go(p, q, path, inversions, out);
            path.pop();
        }
    }
    go(p, q, &mut path, 0, &mut out);
    out
}

/// A finite formal sum of tuples.
pub type FormalChain = HashMap<Vec<u32>, i64>;

fn add_term(c: &mut FormalChain, t: Vec<u32>, v: i64) {
    let e = c.entry(t).or_insert(0);
    *e += v;
    if *e == 0 {
        c.retain(|_, v| *v != 0);
    }
}

/// `∇(x ⊗ y)` as a formal chain on product vertices `g·n_h + h`.
/// `x` and `y` must be generators of the reachability complexes of the given preorders.
pub fn eilenberg_zilber(x: &[u32], y: &[u32], pg: &Preorder, ph: &Preorder) -> Result<FormalChain> {
    let valid = |t: &[u32], p: &Preorder| {
        !t.is_empty()
            && t.iter().all(|&v| (v as usize) < p.len())
            && t.windows(2).all(|w| w[0] != w[1] && p.leq(w[0] as usize, w[1] as usize))
    };
    if !valid(x, pg) || !valid(y, ph) {
        return Err(Error::Domain("not a generator of the reachability complex".into()));
    }
    let nh = ph.len() as u32;
    let mut out = FormalChain::new();
    for s in enumerate_shuffles(x.len() - 1, y.len() - 1) {
        let t = s.steps.iter().map(|&(i, j)| x[i] * nh + y[j]).collect();
        add_term(&mut out, t, s.sign);
    }
    Ok(out)
}

/// Boundary of a formal chain (terms with equal adjacent entries dropped).
pub fn formal_boundary(c: &FormalChain) -> FormalChain {
    let mut out = FormalChain::new();
    for (t, &v) in c {
        let k = t.len() - 1;
        for j in 0..=k {
            if k == 0 || (j > 0 && j < k && t[j - 1] == t[j + 1]) {
                continue;
            }
            let face: Vec<u32> = t.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, &w)| w).collect();
            add_term(&mut out, face, if j % 2 == 0 { v } else { -v });
        }
    }
    out
}

/// `∂∇(x⊗y) − ∇(∂x⊗y) − (−1)^p ∇(x⊗∂y)`, which must vanish.
pub fn chain_map_defect(x: &[u32], y: &[u32], pg: &Preorder, ph: &Preorder) -> Result<FormalChain> {
    let mut lhs = formal_boundary(&eilenberg_zilber(x, y, pg, ph)?);
    let p = x.len() - 1;
    let single = |t: &[u32]| FormalChain::from([(t.to_vec(), 1)]);
    for (fx, v) in formal_boundary(&single(x)) {
        for (t, w) in eilenberg_zilber(&fx, y, pg, ph)? {
            add_term(&mut lhs, t, -v * w);
        }
    }
    let sign = if p % 2 == 0 { 1 } else { -1 };
    for (fy, v) in formal_boundary(&single(y)) {
        for (t, w) in eilenberg_zilber(x, &fy, pg, ph)? {
            add_term(&mut lhs, t, -sign * v * w);
        }
    }
    Ok(lhs)
}

/// `∇: OC(P) ⊗ OC(Q) → OC(P × Q)` between order complexes of posets, both
/// sides padded to degree `top`.
pub fn nabla_chain_map(pg: &Preorder, ph: &Preorder, ring: CoeffRing, top: usize) -> Result<ChainMap> {
    if !pg.is_poset() || !ph.is_poset() {
        return Err(Error::Shape("∇ is built on order complexes of posets".into()));
    }
    let rg = ReachabilityComplex::from_preorder(pg, pg.len(), DEFAULT_CAP)?;
    let rh = ReachabilityComplex::from_preorder(ph, ph.len(), DEFAULT_CAP)?;
    let prod = preorder_product(pg, ph);
    let rp = ReachabilityComplex::from_preorder(&prod, prod.len(), DEFAULT_CAP)?;
    let (cg, ch) = (rg.chain_complex(ring)?, rh.chain_complex(ring)?);
    let tensor = tensor_complex(&cg, &ch)?;
    let top = top.max(tensor.max_degree()).max(rp.max_degree());
    let layout = TensorLayout::new(&cg, &ch, tensor.max_degree());
    let target = rp.chain_complex(ring)?.extended(top);
    let source = tensor.extended(top);
    let mut maps = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let mut cols = vec![Vec::new(); source.dim(n)];
        if n <= tensor.max_degree() {
            for i in layout.blocks(n) {
                for (a, x) in rg.generators(i).iter().enumerate() {
                    for (b, y) in rh.generators(n - i).iter().enumerate() {
                        let chain = eilenberg_zilber(x, y, pg, ph)?;
                        let mut col: Vec<(u32, i64)> = chain
                            .into_iter()
                            .map(|(t, v)| {
                                let idx = rp.index_of(&t).expect("shuffled chains are chains of the product");
                                (idx as u32, v)
                            })
                            .collect();
                        col.sort_unstable();
                        cols[layout.index(n, i, a, b)] = col;
                    }
                }
            }
        }
        maps.push(SparseMatrix::from_columns(target.dim(n), cols));
    }
    ChainMap::new(Arc::new(source), Arc::new(target), maps)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Product {
    Box,
    Strong,
}

impl Product {
    pub fn build(self, g: &DiGraph, h: &DiGraph) -> DiGraph {
        match self {
            Product::Box => box_product(g, h),
            Product::Strong => strong_product(g, h),
        }
    }
}

impl std::str::FromStr for Product {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "box" => Ok(Product::Box),
            "strong" => Ok(Product::Strong),
            other => Err(Error::Domain(format!("unknown product '{other}'"))),
        }
    }
}

/// Prime-power decomposition of `⊕ ℤ/d`, sorted.
pub fn elementary_divisors(torsion: &[u64]) -> Vec<u64> {
    let mut out = Vec::new();
    for &d in torsion {
        let mut n = d;
        let mut p = 2;
        while p * p <= n {
            if n % p == 0 {
                let mut q = 1;
                while n % p == 0 {
                    n /= p;
                    q *= p;
                }
                out.push(q);
            }
            p += 1;
        }
        if n > 1 {
            out.push(n);
        }
    }
    out.sort_unstable();
    out
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// The group predicted in degree `k` by the Künneth sequence, as Betti
/// number and elementary divisors. Over a field the torsion is empty.
pub fn kunneth_prediction(g: &[GroupSummary], h: &[GroupSummary], k: usize) -> (usize, Vec<u64>) {
    let at = |s: &[GroupSummary], i: usize| s.get(i).cloned().unwrap_or(GroupSummary { degree: i, betti: 0, torsion: vec![] });
    let mut betti = 0;
    let mut torsion = Vec::new();
    for i in 0..=k {
        let (a, b) = (at(g, i), at(h, k - i));
        betti += a.betti * b.betti;
        torsion.extend(std::iter::repeat(a.torsion.iter().copied()).take(b.betti).flatten());
        torsion.extend(std::iter::repeat(b.torsion.iter().copied()).take(a.betti).flatten());
        for &m in &a.torsion {
            for &n in &b.torsion {
                torsion.push(gcd(m, n));
            }
        }
    }
    if k > 0 {
        for i in 0..k {
            let (a, b) = (at(g, i), at(h, k - 1 - i));
            for &m in &a.torsion {
                for &n in &b.torsion {
                    torsion.push(gcd(m, n));
                }
            }
        }
    }
    (betti, elementary_divisors(&torsion))
}

#[derive(Debug, Clone, Serialize)]
pub struct KunnethDegree {
    pub degree: usize,
    pub expected_betti: usize,
    /// Elementary divisors.
    pub expected_torsion: Vec<u64>,
    pub betti: usize,
    pub torsion: Vec<u64>,
    pub agree: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProductReport {
    pub product: Product,
    pub degrees: Vec<KunnethDegree>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct KunnethReport {
    pub ring: String,
    pub g: Vec<GroupSummary>,
    pub h: Vec<GroupSummary>,
    pub products: Vec<ProductReport>,
    /// Per degree, whether `∇` induces an isomorphism; absent when skipped.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nabla_isomorphism: Option<Vec<bool>>,
    pub pass: bool,
}

/// Limit on the number of generators of the ∇ source or target in a single
/// degree for which the homology-level isomorphism is checked.
pub const NABLA_CHECK_MAX: usize = 4000;

/// Compares `RH_k(G ∘ H)` with the Künneth prediction for `k ≤ max_degree`
/// and checks that `∇` is a quasi-isomorphism in that range.
pub fn kunneth_check(
    g: &DiGraph,
    h: &DiGraph,
    ring: CoeffRing,
    max_degree: usize,
    products: &[Product],
) -> Result<KunnethReport> {
    let opts = HomologyOptions { max_degree, ..Default::default() };
    let hg = padded_groups(&reachability_homology(g, ring, opts)?, max_degree);
    let hh = padded_groups(&reachability_homology(h, ring, opts)?, max_degree);
    let mut reports = Vec::new();
    for &prod in products {
        let s: HomologySummary = reachability_homology(&prod.build(g, h), ring, opts)?;
        let degrees: Vec<KunnethDegree> = (0..=max_degree)
            .map(|k| {
                let (eb, et) = kunneth_prediction(&hg, &hh, k);
                let (b, t) = (s.betti_at(k), elementary_divisors(&s.torsion_at(k)));
                KunnethDegree { degree: k, agree: eb == b && et == t, expected_betti: eb, expected_torsion: et, betti: b, torsion: t }
            })
            .collect();
        let pass = degrees.iter().all(|d| d.agree);
        reports.push(ProductReport { product: prod, degrees, pass });
    }
    let (cg, ch) = (condensation(g), condensation(h));
    let nabla = nabla_chain_map(&cg.poset, &ch.poset, ring, max_degree)?;
    let small = (0..=max_degree).all(|k| nabla.source.dim(k) <= NABLA_CHECK_MAX && nabla.target.dim(k) <= NABLA_CHECK_MAX);
    let nabla_iso = if small {
        let mut v = Vec::new();
        for k in 0..=max_degree {
            v.push(with_ring!(ring, |r| induced_homology_map(&r, &nabla, k)?.is_isomorphism(&r)));
        }
        Some(v)
    } else {
        None
    };
    let pass = reports.iter().all(|r| r.pass) && nabla_iso.as_ref().map_or(true, |v| v.iter().all(|&b| b));
    Ok(KunnethReport { ring: ring.to_string(), g: hg, h: hh, products: reports, nabla_isomorphism: nabla_iso, pass })
}
