//! Free chain complexes over ℤ, ℚ or 𝔽ₚ and their homology.

pub mod exact;
pub mod matrix;
pub mod presentation;
pub mod ring;
pub mod snf;
pub mod sparse;

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
pub use exact::{check_exact_sequence, PresentedGroup};
pub use matrix::{DenseMatrix, SparseMatrix};
pub use presentation::{homology_basis, induced_matrix, is_isomorphism, HomologyBasis};
pub use ring::{CoeffRing, Integers, PrimeField, Rationals, Ring};
pub use snf::smith_normal_form;
pub use sparse::{sparse_invariant_factors, sparse_rank};

use crate::with_ring;

/// A free chain complex stored in degrees `0..=max_degree()`.
///
/// When `complete` is set every group above the stored window is zero, so
/// homology is exact in all degrees; otherwise only degrees below the top of
/// the window are trustworthy.
#[derive(Debug, Clone, PartialEq)]
pub struct FreeChainComplex {
    pub ring: CoeffRing,
    basis: Vec<Vec<String>>,
    diff: Vec<SparseMatrix>,
    complete: bool,
}

impl FreeChainComplex {
    /// `diff[k]` maps degree `k` to degree `k-1`; `diff[0]` may be omitted.
    /// Checks shapes and `∂∂ = 0`.
    pub fn new(ring: CoeffRing, basis: Vec<Vec<String>>, mut diff: Vec<SparseMatrix>, complete: bool) -> Result<Self> {
        if basis.is_empty() {
            return Err(Error::Dimension("a complex needs at least degree 0".into()));
        }
        if diff.len() + 1 == basis.len() {
            diff.insert(0, SparseMatrix::zeros(0, basis[0].len()));
        }
        if diff.len() != basis.len() {
            return Err(Error::Dimension(format!("{} degrees but {} differentials", basis.len(), diff.len())));
        }
        for k in 0..basis.len() {
            let rows = if k == 0 { 0 } else { basis[k - 1].len() };
            if diff[k].shape() != (rows, basis[k].len()) {
                return Err(Error::Dimension(format!(
                    "differential in degree {k} is {:?}, expected ({rows}, {})",
                    diff[k].shape(),
                    basis[k].len()
                )));
            }
        }
        let c = FreeChainComplex { ring, basis, diff, complete };
        for k in 2..c.basis.len() {
            let dd = c.diff[k - 1].mul(&c.diff[k])?;
            if !dd.is_zero_in_ring(ring) {
                return Err(Error::Verification(format!("∂∂ ≠ 0 in degree {k}")));
            }
        }
        Ok(c)
    }

    /// Same constructor without the `∂∂ = 0` check, for callers that already verified it.
    pub(crate) fn new_unchecked(ring: CoeffRing, basis: Vec<Vec<String>>, diff: Vec<SparseMatrix>, complete: bool) -> Self {
        debug_assert_eq!(basis.len(), diff.len());
        FreeChainComplex { ring, basis, diff, complete }
    }

    pub fn max_degree(&self) -> usize {
        self.basis.len() - 1
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    /// A complete complex stored through degree `top`, padded with zero groups.
    pub fn extended(&self, top: usize) -> FreeChainComplex {
        debug_assert!(self.complete, "only complete complexes can be padded");
        let mut c = self.clone();
        while c.max_degree() < top {
            let below = c.dim(c.max_degree());
            c.basis.push(Vec::new());
            c.diff.push(SparseMatrix::zeros(below, 0));
        }
        c
    }

    /// Highest degree whose homology is exact (`None` when all are).
    pub fn trusted_max(&self) -> Option<usize> {
        if self.complete {
            None
        } else {
            self.max_degree().checked_sub(1)
        }
    }

    pub fn is_trusted(&self, k: usize) -> bool {
        self.complete || k < self.max_degree()
    }

    pub fn dim(&self, k: usize) -> usize {
        self.basis.get(k).map_or(0, Vec::len)
    }

    pub fn basis(&self, k: usize) -> &[String] {
        self.basis.get(k).map_or(&[], |b| b.as_slice())
    }

    /// `∂_k: C_k → C_{k-1}`; zero matrices outside the stored window.
    pub fn differential(&self, k: usize) -> SparseMatrix {
        match self.diff.get(k) {
            Some(d) => d.clone(),
            None => SparseMatrix::zeros(self.dim(k.wrapping_sub(1)), self.dim(k)),
        }
    }

    pub fn differential_ref(&self, k: usize) -> Option<&SparseMatrix> {
        self.diff.get(k)
    }

    /// Highest degree with a nonzero group.
    pub fn top_nonzero(&self) -> Option<usize> {
        (0..self.basis.len()).rev().find(|&k| !self.basis[k].is_empty())
    }

    /// The same complex with coefficients in another ring.
    pub fn with_ring(&self, ring: CoeffRing) -> FreeChainComplex {
        FreeChainComplex { ring, ..self.clone() }
    }

    fn range_error(&self, k: usize) -> Error {
        Error::Range { degree: k, max: self.trusted_max().unwrap_or(usize::MAX) }
    }
}

impl SparseMatrix {
    pub fn is_zero_in_ring(&self, ring: CoeffRing) -> bool {
        match ring {
            CoeffRing::Fp(p) => self.columns().iter().all(|c| c.iter().all(|&(_, v)| v.rem_euclid(p as i64) == 0)),
            _ => self.is_zero(),
        }
    }
}

/// One degree of a homology computation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupSummary {
    pub degree: usize,
    pub betti: usize,
    pub torsion: Vec<u64>,
}

impl GroupSummary {
    pub fn is_zero(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }
}

/// Betti numbers and torsion per degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologySummary {
    pub ring: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    pub groups: Vec<GroupSummary>,
}

impl HomologySummary {
    pub fn new(ring: CoeffRing, groups: Vec<GroupSummary>) -> Self {
        HomologySummary { ring: ring.name(), p: ring.prime(), groups }
    }

    pub fn betti(&self) -> Vec<usize> {
        self.groups.iter().map(|g| g.betti).collect()
    }

    pub fn group(&self, k: usize) -> Option<&GroupSummary> {
        self.groups.iter().find(|g| g.degree == k)
    }

    /// Betti number in degree `k`, zero when the degree is absent.
    pub fn betti_at(&self, k: usize) -> usize {
        self.group(k).map_or(0, |g| g.betti)
    }

    pub fn torsion_at(&self, k: usize) -> Vec<u64> {
        self.group(k).map_or_else(Vec::new, |g| g.torsion.clone())
    }
}

/// Rank and non-unit invariant factors of a differential.
#[derive(Debug, Clone)]
struct DiffData {
    rank: usize,
    torsion: Vec<u64>,
}

fn diff_data(ring: CoeffRing, m: &SparseMatrix) -> DiffData {
    match ring {
        CoeffRing::Z | CoeffRing::Q => {
            let e = sparse_invariant_factors(&Integers, m);
            let torsion = if ring == CoeffRing::Z { e.torsion.iter().map(|d| Integers.to_order(d)).collect() } else { Vec::new() };
            DiffData { rank: e.rank, torsion }
        }
        CoeffRing::Fp(p) => {
            let f = PrimeField::new(p).expect("validated prime");
            DiffData { rank: sparse_rank(&f, m), torsion: Vec::new() }
        }
    }
}

/// Homology in one degree.
pub fn homology(c: &FreeChainComplex, k: usize) -> Result<GroupSummary> {
    if !c.is_trusted(k) {
        return Err(c.range_error(k));
    }
    let here = diff_data(c.ring, &c.differential(k));
    let next = diff_data(c.ring, &c.differential(k + 1));
    Ok(GroupSummary { degree: k, betti: c.dim(k) - here.rank - next.rank, torsion: next.torsion })
}

/// Homology in degrees `0..=max_degree`, stopping at the top nonzero
/// degree of a complete complex.
pub fn homology_summary(c: &FreeChainComplex, max_degree: usize) -> Result<HomologySummary> {
    let last = if c.complete { max_degree.min(c.top_nonzero().unwrap_or(0)) } else { max_degree };
    if !c.is_trusted(last) {
        return Err(c.range_error(last));
    }
    let data: Vec<DiffData> = (0..=last + 1).map(|k| diff_data(c.ring, &c.differential(k))).collect();
    let groups = (0..=last)
        .map(|k| GroupSummary {
            degree: k,
            betti: c.dim(k) - data[k].rank - data[k + 1].rank,
            torsion: data[k + 1].torsion.clone(),
        })
        .collect();
    Ok(HomologySummary::new(c.ring, groups))
}

/// Degreewise matrices between two complexes over the same ring.
#[derive(Debug, Clone)]
pub struct ChainMap {
    pub source: Arc<FreeChainComplex>,
    pub target: Arc<FreeChainComplex>,
    maps: Vec<SparseMatrix>,
}

impl ChainMap {
    /// `maps[k]: C_k → D_k` for every degree stored in both complexes.
    pub fn new(source: Arc<FreeChainComplex>, target: Arc<FreeChainComplex>, maps: Vec<SparseMatrix>) -> Result<Self> {
        if source.ring != target.ring {
            return Err(Error::RingMismatch(format!("{} vs {}", source.ring, target.ring)));
        }
        let top = source.max_degree().min(target.max_degree());
        if maps.len() != top + 1 {
            return Err(Error::Dimension(format!("expected {} degree maps, got {}", top + 1, maps.len())));
        }
        for (k, m) in maps.iter().enumerate() {
            if m.shape() != (target.dim(k), source.dim(k)) {
                return Err(Error::Dimension(format!("degree {k} map has shape {:?}", m.shape())));
            }
        }
        Ok(ChainMap { source, target, maps })
    }

    pub fn identity(c: Arc<FreeChainComplex>) -> Self {
        let maps = (0..=c.max_degree()).map(|k| SparseMatrix::identity(c.dim(k))).collect();
        ChainMap { source: c.clone(), target: c, maps }
    }

    pub fn zero(source: Arc<FreeChainComplex>, target: Arc<FreeChainComplex>) -> Result<Self> {
        let top = source.max_degree().min(target.max_degree());
        let maps = (0..=top).map(|k| SparseMatrix::zeros(target.dim(k), source.dim(k))).collect();
        ChainMap::new(source, target, maps)
    }

    pub fn degree(&self, k: usize) -> &SparseMatrix {
        &self.maps[k]
    }

    pub fn max_degree(&self) -> usize {
        self.maps.len() - 1
    }

    pub fn maps(&self) -> &[SparseMatrix] {
        &self.maps
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &ChainMap) -> Result<ChainMap> {
        let top = self.max_degree().min(other.max_degree());
        let mut maps = (0..=top).map(|k| other.maps[k].mul(&self.maps[k])).collect::<Result<Vec<_>>>()?;
        let top_all = self.source.max_degree().min(other.target.max_degree());
        if top < top_all {
            // Factoring through a complex that has ended gives zero.
            if !self.target.is_complete() {
                return Err(Error::Dimension("composite is not defined on the common window".into()));
            }
            maps.extend((top + 1..=top_all).map(|k| SparseMatrix::zeros(other.target.dim(k), self.source.dim(k))));
        }
        ChainMap::new(self.source.clone(), other.target.clone(), maps)
    }
}

/// Whether `∂φ = φ∂` in every stored degree.
pub fn verify_chain_map(phi: &ChainMap) -> Result<bool> {
    if phi.source.ring != phi.target.ring {
        return Err(Error::RingMismatch("chain map between complexes over different rings".into()));
    }
    let ring = phi.source.ring;
    for k in 1..=phi.max_degree() {
        let lhs = phi.target.differential(k).mul(&phi.maps[k])?;
        let rhs = phi.maps[k - 1].mul(&phi.source.differential(k))?;
        if !lhs.sub(&rhs)?.is_zero_in_ring(ring) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether `∂s + s∂ = ψ − φ`, with `s[k]: C_k → D_{k+1}`, in every degree
/// where both sides are stored.
pub fn verify_chain_homotopy(s: &[SparseMatrix], phi: &ChainMap, psi: &ChainMap) -> Result<bool> {
    if phi.source.ring != psi.source.ring {
        return Err(Error::RingMismatch("homotopic maps over different rings".into()));
    }
    let (c, d) = (&phi.source, &phi.target);
    let ring = c.ring;
    if s.is_empty() {
        return Err(Error::Dimension("empty homotopy".into()));
    }
    let d_top = if d.complete { d.max_degree() } else { d.max_degree().saturating_sub(1) };
    let top = phi.max_degree().min(psi.max_degree()).min(s.len() - 1).min(d_top);
    for (k, sk) in s.iter().enumerate() {
        if sk.shape() != (d.dim(k + 1), c.dim(k)) {
            return Err(Error::Dimension(format!("homotopy in degree {k} has shape {:?}", sk.shape())));
        }
    }
    for k in 0..=top {
        let mut lhs = d.differential(k + 1).mul(&s[k])?;
        if k > 0 {
            lhs = lhs.add(&s[k - 1].mul(&c.differential(k))?)?;
        }
        let rhs = psi.maps[k].sub(&phi.maps[k])?;
        if !lhs.sub(&rhs)?.is_zero_in_ring(ring) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `C ⊗ D` with `∂(c⊗d) = ∂c⊗d + (−1)^{deg c} c⊗∂d`. Degree `n` lists the
/// blocks `(i, n−i)` by increasing `i`, each block in row-major order.
pub fn tensor_complex(c: &FreeChainComplex, d: &FreeChainComplex) -> Result<FreeChainComplex> {
    if c.ring != d.ring {
        return Err(Error::RingMismatch(format!("{} vs {}", c.ring, d.ring)));
    }
    let (sc, sd) = (c.max_degree(), d.max_degree());
    let top = match (c.complete, d.complete) {
        (true, true) => sc + sd,
        (true, false) => sd,
        (false, true) => sc,
        (false, false) => sc.min(sd),
    };
    let layout = TensorLayout::new(c, d, top);
    let mut basis = Vec::with_capacity(top + 1);
    let mut diff = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let mut labels = Vec::with_capacity(layout.dim(n));
        let mut cols = Vec::with_capacity(layout.dim(n));
        for i in layout.blocks(n) {
            let j = n - i;
            let (dc, dd) = (c.differential(i), d.differential(j));
            let sign = if i % 2 == 0 { 1 } else { -1 };
            for a in 0..c.dim(i) {
                for b in 0..d.dim(j) {
                    labels.push(format!("{}⊗{}", c.basis(i)[a], d.basis(j)[b]));
                    let mut col = Vec::new();
                    if i > 0 {
                        for &(r, v) in dc.column(a) {
                            col.push((layout.index(n - 1, i - 1, r as usize, b) as u32, v));
                        }
                    }
                    if j > 0 {
                        for &(r, v) in dd.column(b) {
                            col.push((layout.index(n - 1, i, a, r as usize) as u32, sign * v));
                        }
                    }
                    cols.push(col);
                }
            }
        }
        let rows = if n == 0 { 0 } else { layout.dim(n - 1) };
        basis.push(labels);
        diff.push(SparseMatrix::from_columns(rows, cols));
    }
    FreeChainComplex::new(c.ring, basis, diff, c.complete && d.complete)
}

/// Index bookkeeping for tensor products.
#[derive(Debug, Clone)]
pub struct TensorLayout {
    dims_c: Vec<usize>,
    dims_d: Vec<usize>,
    offsets: Vec<Vec<usize>>,
    totals: Vec<usize>,
}

impl TensorLayout {
    pub fn new(c: &FreeChainComplex, d: &FreeChainComplex, top: usize) -> Self {
        let dims_c: Vec<usize> = (0..=top).map(|i| c.dim(i)).collect();
        let dims_d: Vec<usize> = (0..=top).map(|j| d.dim(j)).collect();
        let mut offsets = Vec::new();
        let mut totals = Vec::new();
        for n in 0..=top {
            let mut off = vec![0; n + 1];
            let mut acc = 0;
            for i in 0..=n {
                off[i] = acc;
                acc += dims_c[i] * dims_d[n - i];
            }
            offsets.push(off);
            totals.push(acc);
        }
        TensorLayout { dims_c, dims_d, offsets, totals }
    }

    pub fn dim(&self, n: usize) -> usize {
        self.totals[n]
    }

    pub fn blocks(&self, n: usize) -> impl Iterator<Item = usize> {
        0..=n
    }

    /// Position of `c_a ⊗ d_b` with `deg c = i` in total degree `n`.
    pub fn index(&self, n: usize, i: usize, a: usize, b: usize) -> usize {
        self.offsets[n][i] + a * self.dims_d[n - i] + b
    }

    pub fn dims_c(&self) -> &[usize] {
        &self.dims_c
    }
}

/// `C / S` where `S` is spanned by the selected generators (per degree).
pub fn quotient_complex(c: &FreeChainComplex, selection: &[Vec<usize>]) -> Result<FreeChainComplex> {
    let mut keep_sets = Vec::new();
    let mut selected = Vec::new();
    for k in 0..=c.max_degree() {
        let mut mask = vec![false; c.dim(k)];
        for &g in selection.get(k).map_or(&[][..], |s| s.as_slice()) {
            if g >= c.dim(k) {
                return Err(Error::Dimension(format!("generator {g} out of range in degree {k}")));
            }
            mask[g] = true;
        }
        selected.push(mask);
    }
    for k in 1..=c.max_degree() {
        let d = c.differential(k);
        for (j, col) in d.columns().iter().enumerate() {
            if selected[k][j] && col.iter().any(|&(r, _)| !selected[k - 1][r as usize]) {
                return Err(Error::Subcomplex(format!("boundary of '{}' leaves the selection", c.basis(k)[j])));
            }
        }
    }
    for mask in &selected {
        keep_sets.push((0..mask.len()).filter(|&i| !mask[i]).collect::<Vec<_>>());
    }
    let basis = (0..=c.max_degree()).map(|k| keep_sets[k].iter().map(|&i| c.basis(k)[i].clone()).collect()).collect();
    let diff = (0..=c.max_degree())
        .map(|k| {
            if k == 0 {
                SparseMatrix::zeros(0, keep_sets[0].len())
            } else {
                c.differential(k).submatrix(&keep_sets[k - 1], &keep_sets[k])
            }
        })
        .collect();
    Ok(FreeChainComplex::new_unchecked(c.ring, basis, diff, c.complete))
}

/// Dense boundary matrix reduced into `ring`.
pub fn dense_differential<R: Ring>(ring: &R, c: &FreeChainComplex, k: usize) -> DenseMatrix<R::Elem> {
    c.differential(k).to_dense(ring)
}

/// Explicit homology basis in degree `k`.
pub fn homology_basis_of<R: Ring>(ring: &R, c: &FreeChainComplex, k: usize) -> Result<HomologyBasis<R::Elem>> {
    if !c.is_trusted(k) {
        return Err(c.range_error(k));
    }
    Ok(homology_basis(ring, k, &dense_differential(ring, c, k), &dense_differential(ring, c, k + 1)))
}

/// The map induced on homology in degree `k`, in the bases of
/// [`homology_basis_of`].
#[derive(Debug, Clone)]
pub struct InducedMap<E> {
    pub source: HomologyBasis<E>,
    pub target: HomologyBasis<E>,
    pub matrix: DenseMatrix<E>,
}

impl<E: Clone> InducedMap<E> {
    pub fn is_isomorphism<R: Ring<Elem = E>>(&self, ring: &R) -> bool {
        is_isomorphism(ring, &self.matrix, &self.source.orders, &self.target.orders)
    }
}

/// Induced map on homology; fails on inputs that are not chain maps.
pub fn induced_homology_map<R: Ring>(ring: &R, phi: &ChainMap, k: usize) -> Result<InducedMap<R::Elem>> {
    if !verify_chain_map(phi)? {
        return Err(Error::InvalidMap("input is not a chain map".into()));
    }
    // Above the stored range the map is zero when one side has run out of chains.
    let beyond = k > phi.max_degree();
    let ended = |c: &FreeChainComplex| c.is_complete() && k > c.max_degree();
    if beyond && !ended(&phi.source) && !ended(&phi.target) {
        return Err(Error::Range { degree: k, max: phi.max_degree() });
    }
    let source = homology_basis_of(ring, &phi.source, k)?;
    let target = homology_basis_of(ring, &phi.target, k)?;
    let chain = if beyond { SparseMatrix::zeros(phi.target.dim(k), phi.source.dim(k)) } else { phi.degree(k).clone() };
    let matrix = induced_matrix(ring, &chain.to_dense(ring), &source, &target);
    Ok(InducedMap { source, target, matrix })
}

/// Whether `phi` induces an isomorphism in degree `k`, over the complexes' ring.
pub fn is_quasi_iso_in_degree(phi: &ChainMap, k: usize) -> Result<bool> {
    with_ring!(phi.source.ring, |r| Ok(induced_homology_map(&r, phi, k)?.is_isomorphism(&r)))
}

/// Whether two chain maps induce the same map on homology in degree `k`.
pub fn same_on_homology(phi: &ChainMap, psi: &ChainMap, k: usize) -> Result<bool> {
    with_ring!(phi.source.ring, |r| {
        let a = induced_homology_map(&r, phi, k)?;
        let b = induced_homology_map(&r, psi, k)?;
        let diff: Vec<_> = (0..a.matrix.rows())
            .flat_map(|i| (0..a.matrix.cols()).map(move |j| (i, j)))
            .map(|(i, j)| r.reduce(&r.sub(a.matrix.get(i, j), b.matrix.get(i, j)), &a.target.orders[i]))
            .collect();
        Ok(diff.iter().all(|x| r.is_zero(x)))
    })
}
