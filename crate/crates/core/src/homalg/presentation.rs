//! Explicit homology bases, induced maps on homology and linear solving.

use crate::homalg::matrix::DenseMatrix;
use crate::homalg::ring::Ring;
use crate::homalg::snf::smith;

/// `H ≅ ⊕ R/(orders[i])`, with a representing cycle per summand and a
/// coordinate functional valid on cycles.
#[derive(Debug, Clone)]
pub struct HomologyBasis<E> {
    pub degree: usize,
    /// Zero for a free summand, otherwise a non-unit torsion order.
    pub orders: Vec<E>,
    /// Representative cycles, one column per summand.
    pub reps: Vec<Vec<E>>,
    coords: DenseMatrix<E>,
}

impl<E: Clone> HomologyBasis<E> {
    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    /// Coordinates of the class of a cycle `w` (entries reduced mod the orders).
    pub fn coordinates<R: Ring<Elem = E>>(&self, ring: &R, w: &[E]) -> Vec<E> {
        self.coords.mul_vec(ring, w).iter().zip(&self.orders).map(|(y, d)| ring.reduce(y, d)).collect()
    }

    pub fn betti<R: Ring<Elem = E>>(&self, ring: &R) -> usize {
        self.orders.iter().filter(|d| ring.is_zero(d)).count()
    }
}

/// Homology at the middle of `C_{k+1} --d_next--> C_k --d_k--> C_{k-1}`.
pub fn homology_basis<R: Ring>(
    ring: &R,
    degree: usize,
    d_k: &DenseMatrix<R::Elem>,
    d_next: &DenseMatrix<R::Elem>,
) -> HomologyBasis<R::Elem> {
    let n = d_k.cols();
    assert_eq!(d_next.rows(), n, "boundary shapes do not chain");
    let s1 = smith(ring, d_k, true);
    let r = s1.rank;
    let kernel_cols: Vec<usize> = (r..n).collect();
    let kernel = s1.v.select_cols(&kernel_cols);
    let kernel_inv = s1.v_inv.select_rows(&kernel_cols);
    let m = kernel_inv.mul(ring, d_next).expect("shapes checked");
    let s2 = smith(ring, &m, true);
    let dim = n - r;
    let mut keep = Vec::new();
    let mut orders = Vec::new();
    for i in 0..dim {
        let d = if i < s2.rank { s2.d.get(i, i).clone() } else { ring.zero() };
        if !ring.is_unit(&d) {
            keep.push(i);
            orders.push(d);
        }
    }
    let gens = kernel.mul(ring, &s2.u_inv).expect("shapes");
    let reps = keep.iter().map(|&i| gens.column(i)).collect();
    let coords = s2.u.mul(ring, &kernel_inv).expect("shapes").select_rows(&keep);
    HomologyBasis { degree, orders, reps, coords }
}

/// Matrix of the map on homology induced by a chain-level map `phi: C_k → D_k`.
pub fn induced_matrix<R: Ring>(
    ring: &R,
    phi: &DenseMatrix<R::Elem>,
    source: &HomologyBasis<R::Elem>,
    target: &HomologyBasis<R::Elem>,
) -> DenseMatrix<R::Elem> {
    let cols: Vec<Vec<R::Elem>> =
        source.reps.iter().map(|rep| target.coordinates(ring, &phi.mul_vec(ring, rep))).collect();
    DenseMatrix::from_columns(ring, target.rank(), &cols)
}

/// Whether `map: ⊕R/(src) → ⊕R/(tgt)` is an isomorphism.
pub fn is_isomorphism<R: Ring>(ring: &R, map: &DenseMatrix<R::Elem>, src: &[R::Elem], tgt: &[R::Elem]) -> bool {
    let mut a: Vec<u64> = src.iter().map(|d| ring.to_order(d)).collect();
    let mut b: Vec<u64> = tgt.iter().map(|d| ring.to_order(d)).collect();
    a.sort_unstable();
    b.sort_unstable();
    if a != b {
        return false;
    }
    // Equal invariants: surjectivity suffices (finitely generated modules are Hopfian).
    let n = tgt.len();
    let mut rel = DenseMatrix::zeros(ring, n, n);
    for (i, d) in tgt.iter().enumerate() {
        rel.set(i, i, d.clone());
    }
    let s = smith(ring, &map.hcat(&rel), false);
    s.rank == n && s.invariant_factors().iter().all(|d| ring.is_unit(d))
}

/// Some `x` with `a·x = b`, if one exists over the ring.
pub fn solve<R: Ring>(ring: &R, a: &DenseMatrix<R::Elem>, b: &[R::Elem]) -> Option<Vec<R::Elem>> {
    assert_eq!(a.rows(), b.len(), "right-hand side length");
    let s = smith(ring, a, true);
    let ub = s.u.mul_vec(ring, b);
    let mut y = vec![ring.zero(); a.cols()];
    for (i, val) in ub.iter().enumerate() {
        if i < s.rank {
            let (q, r) = ring.div_rem(val, s.d.get(i, i));
            if !ring.is_zero(&r) {
                return None;
            }
            y[i] = q;
        } else if !ring.is_zero(val) {
            return None;
        }
    }
    Some(s.v.mul_vec(ring, &y))
}

/// A basis of the kernel of `a` (saturated over ℤ), one column per vector.
pub fn kernel_basis<R: Ring>(ring: &R, a: &DenseMatrix<R::Elem>) -> Vec<Vec<R::Elem>> {
    let s = smith(ring, a, true);
    (s.rank..a.cols()).map(|j| s.v.column(j)).collect()
}

/// Rank of a dense matrix.
pub fn dense_rank<R: Ring>(ring: &R, a: &DenseMatrix<R::Elem>) -> usize {
    smith(ring, a, false).rank
}
