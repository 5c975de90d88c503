//! The length filtration of the reachability complex, the pages of its
//! spectral sequence over a field, and magnitude homology.
//!
//! Indexing: `E^r_{s,k}` has filtration (length) `s` and total degree `k`, so
//! that `E¹_{s,k}` is the magnitude homology group `MH_{k,s}`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::digraph::{shortest_path_metric, DiGraph, Distance};
use crate::error::{Error, Result};
use crate::homalg::{homology, CoeffRing, FreeChainComplex, Ring, SparseMatrix};
use crate::rcomplex::{padded_groups, reachability_homology, HomologyOptions, ReachabilityComplex};
use crate::with_ring;

fn dist(d: &[Vec<Distance>], u: usize, v: usize) -> u64 {
    d[u][v].finite().expect("adjacent entries of a generator are reachable")
}

/// Length of a tuple: the sum of the distances between consecutive entries.
pub fn tuple_length(d: &[Vec<Distance>], t: &[u32]) -> u64 {
    t.windows(2).map(|w| dist(d, w[0] as usize, w[1] as usize)).sum()
}

/// The truncated reachability complex with a length attached to every generator.
#[derive(Debug, Clone)]
pub struct FilteredComplex {
    pub rc: ReachabilityComplex,
    /// `lengths[k][i]` is the length of generator `i` in degree `k`.
    pub lengths: Vec<Vec<u64>>,
    /// Largest length per stored degree.
    pub max_length: Vec<u64>,
    /// Lengths are finite and attained in every stored degree.
    pub bounded: bool,
}

/// `RC(G)` through degree `max_degree + 1`, filtered by length.
pub fn length_filtration(g: &DiGraph, max_degree: usize, cap: usize) -> Result<FilteredComplex> {
    let rc = ReachabilityComplex::truncated(g, max_degree, cap)?;
    let d = shortest_path_metric(g);
    let lengths: Vec<Vec<u64>> =
        (0..=rc.max_degree()).map(|k| rc.generators(k).iter().map(|t| tuple_length(&d, t)).collect()).collect();
    let max_length = lengths.iter().map(|l| l.iter().copied().max().unwrap_or(0)).collect();
    Ok(FilteredComplex { rc, lengths, max_length, bounded: true })
}

impl FilteredComplex {
    /// Highest total degree whose pages are exact.
    pub fn trusted_degree(&self) -> usize {
        if self.rc.is_complete() {
            self.rc.max_degree()
        } else {
            self.rc.max_degree() - 1
        }
    }

    /// Whether no boundary term has larger length than its generator.
    pub fn is_filtered(&self) -> bool {
        (1..=self.rc.max_degree()).all(|k| {
            let m = self.rc.boundary_matrix(k);
            m.columns().iter().enumerate().all(|(j, col)| col.iter().all(|&(i, _)| self.lengths[k - 1][i as usize] <= self.lengths[k][j]))
        })
    }

    /// Number of generators of length exactly `s` in degree `k`.
    pub fn graded_dim(&self, s: u64, k: usize) -> usize {
        self.lengths.get(k).map_or(0, |l| l.iter().filter(|&&x| x == s).count())
    }

    /// Largest length among the degrees that enter pages through `trusted_degree`.
    pub fn length_bound(&self) -> u64 {
        self.max_length.iter().copied().max().unwrap_or(0)
    }
}

/// Pivot positions of a persistence-style column reduction of `∂_k`, as
/// `(row length, column length)` pairs. The rank of the block with columns
/// of length `≤ b` and rows of length `> a` is the number of pairs inside it.
fn pivot_pairs<R: Ring>(ring: &R, m: &SparseMatrix, row_len: &[u64], col_len: &[u64]) -> Vec<(u64, u64)> {
    let mut row_order: Vec<usize> = (0..m.nrows()).collect();
    row_order.sort_by_key(|&i| row_len[i]);
    let mut row_pos = vec![0u32; m.nrows()];
    for (p, &i) in row_order.iter().enumerate() {
        row_pos[i] = p as u32;
    }
    let mut col_order: Vec<usize> = (0..m.ncols()).collect();
    col_order.sort_by_key(|&j| col_len[j]);
    let mut reduced: Vec<Vec<(u32, R::Elem)>> = Vec::with_capacity(m.ncols());
    let mut pivot_of: Vec<Option<usize>> = vec![None; m.nrows()];
    let mut pairs = Vec::new();
    for &j in &col_order {
        let mut col: Vec<(u32, R::Elem)> = m
            .column(j)
            .iter()
            .map(|&(i, v)| (row_pos[i as usize], ring.from_i64(v)))
            .filter(|(_, v)| !ring.is_zero(v))
            .collect();
        col.sort_by_key(|e| e.0);
        while let Some((low, lv)) = col.last().cloned() {
            let Some(other) = pivot_of[low as usize] else { break };
            let (_, ov) = reduced[other].last().expect("pivot column is nonzero");
            let factor = ring.mul(&lv, &ring.unit_inverse(ov).expect("field"));
            col = axpy(ring, &col, &reduced[other], &factor);
        }
        if let Some(&(low, _)) = col.last() {
            pivot_of[low as usize] = Some(reduced.len());
            pairs.push((row_len[row_order[low as usize]], col_len[j]));
        }
        reduced.push(col);
    }
    pairs
}

// a − factor·b on sorted sparse vectors.
fn axpy<R: Ring>(ring: &R, a: &[(u32, R::Elem)], b: &[(u32, R::Elem)], factor: &R::Elem) -> Vec<(u32, R::Elem)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, ring.neg(&ring.mul(factor, &b[j].1))));
            j += 1;
        } else {
            let v = ring.sub(&a[i].1, &ring.mul(factor, &b[j].1));
            if !ring.is_zero(&v) {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// One page: `ranks[k][s] = dim E^r_{s,k}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectralPage {
    pub r: usize,
    pub ranks: Vec<Vec<usize>>,
}

impl SpectralPage {
    pub fn rank(&self, s: usize, k: usize) -> usize {
        self.ranks.get(k).and_then(|row| row.get(s)).copied().unwrap_or(0)
    }

    /// `Σ_s dim E^r_{s,k}`.
    pub fn total(&self, k: usize) -> usize {
        self.ranks.get(k).map_or(0, |row| row.iter().sum())
    }
}

struct RankData {
    pairs: Vec<Vec<(u64, u64)>>,
}

impl RankData {
    fn new(f: &FilteredComplex, ring: CoeffRing) -> Result<Self> {
        if !ring.is_field() {
            return Err(Error::Precondition("spectral pages are computed over fields only".into()));
        }
        let pairs = (0..=f.rc.max_degree())
            .map(|k| {
                if k == 0 {
                    return Vec::new();
                }
                let m = f.rc.boundary_matrix(k);
                with_ring!(ring, |r| pivot_pairs(&r, &m, &f.lengths[k - 1], &f.lengths[k]))
            })
            .collect();
        Ok(RankData { pairs })
    }

    // rank of ∂_k on columns of length ≤ b, rows of length > a
    fn rho(&self, k: usize, a: i64, b: i64) -> usize {
        if b < 0 {
            return 0;
        }
        self.pairs.get(k).map_or(0, |p| p.iter().filter(|&&(row, col)| row as i64 > a && col as i64 <= b).count())
    }

    fn page(&self, f: &FilteredComplex, r: usize) -> SpectralPage {
        let top = f.trusted_degree();
        let smax = f.length_bound() as i64;
        let r = r as i64;
        let ranks = (0..=top)
            .map(|k| {
                (0..=smax)
                    .map(|s| {
                        let dim = f.graded_dim(s as u64, k) as i64;
                        let v = dim - self.rho(k, s - r, s) as i64 + self.rho(k, s - r, s - 1) as i64
                            + self.rho(k + 1, s, s + r - 1) as i64
                            - self.rho(k + 1, s - 1, s + r - 1) as i64;
                        debug_assert!(v >= 0);
                        v as usize
                    })
                    .collect()
            })
            .collect();
        SpectralPage { r: r as usize, ranks }
    }
}

/// `E^r` for a single page `r ≥ 1`.
pub fn spectral_page(f: &FilteredComplex, r: usize, ring: CoeffRing) -> Result<SpectralPage> {
    if r == 0 {
        return Err(Error::Domain("pages start at r = 1".into()));
    }
    Ok(RankData::new(f, ring)?.page(f, r))
}

/// `E^1, …, E^{max_page}`.
pub fn spectral_pages(f: &FilteredComplex, max_page: usize, ring: CoeffRing) -> Result<Vec<SpectralPage>> {
    if max_page == 0 {
        return Err(Error::Domain("pages start at r = 1".into()));
    }
    let data = RankData::new(f, ring)?;
    Ok((1..=max_page).map(|r| data.page(f, r)).collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceReport {
    pub ring: String,
    pub max_degree: usize,
    /// Highest page computed.
    pub pages_computed: usize,
    /// Page after which `d^r` vanishes for every reason of length; pages from here on are `E^∞`.
    pub infinity_page: usize,
    /// First page from which all computed pages agree.
    pub stabilization_page: usize,
    /// `Σ_s dim E^∞_{s,k}` per degree (absent when inconclusive).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub totals: Option<Vec<usize>>,
    pub betti: Vec<usize>,
    /// `"converged"`, `"failed"` or `"inconclusive"`.
    pub verdict: &'static str,
}

/// Pages up to `max_page` (default: enough to reach `E^∞`) and the comparison
/// of `E^∞` with reachability homology in degrees `≤ max_degree`.
pub fn convergence_check(
    g: &DiGraph,
    ring: CoeffRing,
    max_degree: usize,
    max_page: Option<usize>,
    cap: usize,
) -> Result<(Vec<SpectralPage>, ConvergenceReport)> {
    let f = length_filtration(g, max_degree, cap)?;
    let infinity_page = f.length_bound() as usize + 1;
    let last = max_page.unwrap_or(infinity_page).max(1);
    let pages = spectral_pages(&f, last, ring)?;
    let cut = |p: &SpectralPage| p.ranks.iter().take(max_degree + 1).cloned().collect::<Vec<_>>();
    let final_ranks = cut(pages.last().expect("at least one page"));
    let stabilization_page = pages.iter().position(|p| cut(p) == final_ranks).expect("last page matches itself") + 1;
    let summary = reachability_homology(g, ring, HomologyOptions { max_degree, cap, ..Default::default() })?;
    let betti: Vec<usize> = padded_groups(&summary, max_degree).iter().map(|g| g.betti).collect();
    let conclusive = last >= infinity_page;
    let totals = conclusive.then(|| (0..=max_degree).map(|k| pages.last().expect("nonempty").total(k)).collect::<Vec<_>>());
    let verdict = match &totals {
        None => "inconclusive",
        Some(t) if *t == betti => "converged",
        Some(_) => "failed",
    };
    let report = ConvergenceReport {
        ring: ring.to_string(),
        max_degree,
        pages_computed: last,
        infinity_page,
        stabilization_page,
        totals,
        betti,
        verdict,
    };
    Ok((pages, report))
}

/// The magnitude complex split by length: `pieces[ℓ]` is the chain complex
/// of tuples of length `ℓ` with the length-preserving part of `∂`.
/// Built from the distance matrix, independently of [`ReachabilityComplex`].
#[derive(Debug, Clone)]
pub struct MagnitudeComplex {
    pub max_degree: usize,
    pub pieces: BTreeMap<u64, FreeChainComplex>,
}

/// Magnitude chains in degrees `0..=max_degree + 1`.
pub fn magnitude_complex(g: &DiGraph, ring: CoeffRing, max_degree: usize, cap: usize) -> Result<MagnitudeComplex> {
    let n = g.n();
    let d = shortest_path_metric(g);
    let finite = |u: usize, v: usize| u != v && d[u][v].finite().is_some();
    // tuples[k] grouped by length
    let mut by_len: Vec<BTreeMap<u64, Vec<Vec<u32>>>> = Vec::new();
    let mut layer: Vec<(Vec<u32>, u64)> = (0..n as u32).map(|v| (vec![v], 0)).collect();
    for k in 0..=max_degree + 1 {
        if layer.len() > cap {
            return Err(Error::Resource { degree: k, count: layer.len(), cap });
        }
        let mut m: BTreeMap<u64, Vec<Vec<u32>>> = BTreeMap::new();
        for (t, l) in &layer {
            m.entry(*l).or_default().push(t.clone());
        }
        by_len.push(m);
        if k == max_degree + 1 {
            break;
        }
        let mut next = Vec::new();
        for (t, l) in &layer {
            let last = *t.last().expect("nonempty") as usize;
            for w in 0..n {
                if finite(last, w) {
                    let mut u = t.clone();
                    u.push(w as u32);
                    next.push((u, l + dist(&d, last, w)));
                }
            }
        }
        layer = next;
    }
    let lengths: std::collections::BTreeSet<u64> = by_len.iter().flat_map(|m| m.keys().copied()).collect();
    let label = |t: &[u32]| format!("({})", t.iter().map(|&v| g.label(v as usize)).collect::<Vec<_>>().join(","));
    let mut pieces = BTreeMap::new();
    for &l in &lengths {
        let gens: Vec<Vec<Vec<u32>>> =
            by_len.iter().map(|m| m.get(&l).cloned().unwrap_or_default()).collect();
        let index: Vec<std::collections::HashMap<&[u32], u32>> = gens
            .iter()
            .map(|ts| ts.iter().enumerate().map(|(i, t)| (t.as_slice(), i as u32)).collect())
            .collect();
        let mut diff = vec![SparseMatrix::zeros(0, gens[0].len())];
        for k in 1..gens.len() {
            let cols = gens[k]
                .iter()
                .map(|t| {
                    let mut col = Vec::new();
                    for j in 1..k {
                        let (a, b, c) = (t[j - 1] as usize, t[j] as usize, t[j + 1] as usize);
                        if a != c && finite(a, c) && dist(&d, a, c) == dist(&d, a, b) + dist(&d, b, c) {
                            let face: Vec<u32> = t.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, &v)| v).collect();
                            let idx = index[k - 1][face.as_slice()];
                            col.push((idx, if j % 2 == 0 { 1 } else { -1 }));
                        }
                    }
                    col
                })
                .collect();
            diff.push(SparseMatrix::from_columns(gens[k - 1].len(), cols));
        }
        let basis = gens.iter().map(|ts| ts.iter().map(|t| label(t)).collect()).collect();
        // tuples of length ℓ have degree at most ℓ
        let complete = l as usize <= max_degree + 1;
        pieces.insert(l, FreeChainComplex::new(ring, basis, diff, complete)?);
    }
    Ok(MagnitudeComplex { max_degree, pieces })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MagnitudeGroup {
    pub degree: usize,
    pub length: u64,
    pub betti: usize,
    pub torsion: Vec<u64>,
}

/// Nonzero `MH_{k,ℓ}` for `k ≤ max_degree`.
pub fn magnitude_homology(g: &DiGraph, ring: CoeffRing, max_degree: usize, cap: usize) -> Result<Vec<MagnitudeGroup>> {
    let mc = magnitude_complex(g, ring, max_degree, cap)?;
    let mut out = Vec::new();
    for (&l, c) in &mc.pieces {
        for k in 0..=max_degree.min(c.max_degree()) {
            let h = homology(c, k)?;
            if !h.is_zero() {
                out.push(MagnitudeGroup { degree: k, length: l, betti: h.betti, torsion: h.torsion });
            }
        }
    }
    Ok(out)
}
