//! Sparse elimination with unit pivots. Whatever cannot be pivoted on a unit
//! is handed to the dense Smith normal form.

use crate::homalg::matrix::{DenseMatrix, SparseMatrix};
use crate::homalg::ring::Ring;
use crate::homalg::snf::smith;

/// Rank and the non-unit invariant factors of a matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Elimination<E> {
    pub rank: usize,
    pub torsion: Vec<E>,
    /// Size of the block passed to the dense fallback.
    pub residual_shape: (usize, usize),
}

type Row<E> = Vec<(u32, E)>;

fn entry<E>(row: &Row<E>, c: u32) -> Option<&E> {
    row.binary_search_by_key(&c, |e| e.0).ok().map(|k| &row[k].1)
}

/// Invariant factors of `m` reduced into `ring`.
pub fn sparse_invariant_factors<R: Ring>(ring: &R, m: &SparseMatrix) -> Elimination<R::Elem> {
    let ncols = m.ncols();
    let mut rows: Vec<Row<R::Elem>> = vec![Vec::new(); m.nrows()];
    let mut col_rows: Vec<Vec<u32>> = vec![Vec::new(); ncols];
    for (j, col) in m.columns().iter().enumerate() {
        for &(i, v) in col {
            let x = ring.from_i64(v);
            if !ring.is_zero(&x) {
                rows[i as usize].push((j as u32, x));
                col_rows[j].push(i);
            }
        }
    }
    let mut alive = vec![true; rows.len()];
    let mut order: Vec<usize> = (0..ncols).collect();
    // Sparsest columns first, later columns first among equals; on
    // reachability complexes the latter cuts fill-in severalfold.
    order.sort_by_key(|&c| (col_rows[c].len(), std::cmp::Reverse(c)));
    let mut rank = 0;
    let mut pending = order;
    loop {
        let mut deferred = Vec::new();
        let before = rank;
        for &c in &pending {
            let cu = c as u32;
            let mut cand: Vec<u32> = std::mem::take(&mut col_rows[c]);
            cand.sort_unstable();
            cand.dedup();
            cand.retain(|&r| alive[r as usize] && entry(&rows[r as usize], cu).is_some());
            if cand.is_empty() {
                continue;
            }
            let pivot = cand
                .iter()
                .copied()
                .filter(|&r| ring.is_unit(entry(&rows[r as usize], cu).expect("present")))
                .min_by_key(|&r| rows[r as usize].len());
            let Some(p) = pivot else {
                col_rows[c] = cand;
                deferred.push(c);
                continue;
            };
            let prow = std::mem::take(&mut rows[p as usize]);
            alive[p as usize] = false;
            let inv = ring.unit_inverse(entry(&prow, cu).expect("pivot")).expect("unit pivot");
            for &r in &cand {
                if r == p {
                    continue;
                }
                let row = std::mem::take(&mut rows[r as usize]);
                let factor = ring.mul(entry(&row, cu).expect("candidate"), &inv);
                rows[r as usize] = axpy(ring, row, &prow, &factor, r, &mut col_rows);
            }
            rank += 1;
        }
        if deferred.is_empty() || rank == before {
            pending = deferred;
            break;
        }
        pending = deferred;
    }
    if pending.is_empty() {
        return Elimination { rank, torsion: Vec::new(), residual_shape: (0, 0) };
    }
    pending.sort_unstable();
    let mut pos = vec![usize::MAX; ncols];
    for (k, &c) in pending.iter().enumerate() {
        pos[c] = k;
    }
    let live: Vec<&Row<R::Elem>> = rows.iter().zip(&alive).filter(|(r, a)| **a && !r.is_empty()).map(|(r, _)| r).collect();
    let mut dense = DenseMatrix::zeros(ring, live.len(), pending.len());
    for (i, row) in live.iter().enumerate() {
        for (c, v) in row.iter() {
            let k = pos[*c as usize];
            debug_assert!(k != usize::MAX, "entry outside the residual block");
            dense.set(i, k, v.clone());
        }
    }
    let s = smith(ring, &dense, false);
    let torsion = s.invariant_factors().into_iter().filter(|d| !ring.is_unit(d)).collect();
    Elimination { rank: rank + s.rank, torsion, residual_shape: (live.len(), pending.len()) }
}

// row - factor·prow, registering fill-in positions for row index `r`.
fn axpy<R: Ring>(
    ring: &R,
    row: Row<R::Elem>,
    prow: &Row<R::Elem>,
    factor: &R::Elem,
    r: u32,
    col_rows: &mut [Vec<u32>],
) -> Row<R::Elem> {
    let mut out = Vec::with_capacity(row.len() + prow.len());
    let mut a = row.into_iter().peekable();
    let mut b = prow.iter().peekable();
    loop {
        match (a.peek(), b.peek()) {
            (Some(x), Some(y)) if x.0 == y.0 => {
                let (c, v) = a.next().expect("peeked");
                let (_, w) = b.next().expect("peeked");
                let nv = ring.sub(&v, &ring.mul(factor, w));
                if !ring.is_zero(&nv) {
                    out.push((c, nv));
                }
            }
            (Some(x), Some(y)) if x.0 < y.0 => out.push(a.next().expect("peeked")),
            (_, Some(_)) => {
                let (c, w) = b.next().expect("peeked");
                let nv = ring.neg(&ring.mul(factor, w));
                if !ring.is_zero(&nv) {
                    col_rows[*c as usize].push(r);
                    out.push((*c, nv));
                }
            }
            (Some(_), None) => out.push(a.next().expect("peeked")),
            (None, None) => break,
        }
    }
    out
}

/// Rank of `m` over `ring` (for ℤ this is the rank over ℚ).
pub fn sparse_rank<R: Ring>(ring: &R, m: &SparseMatrix) -> usize {
    sparse_invariant_factors(ring, m).rank
}
