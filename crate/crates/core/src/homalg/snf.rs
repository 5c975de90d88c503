//! Dense Smith normal form over a Euclidean ring, with optional transforms.

use dashu_int::IBig;

use crate::homalg::matrix::{DenseMatrix, SparseMatrix};
use crate::homalg::ring::{Integers, Ring};

/// `u · m · v = d` with `d` diagonal and `d[0] | d[1] | …`. The inverses of
/// `u` and `v` are kept as well.
#[derive(Debug, Clone)]
pub struct Smith<E> {
    pub d: DenseMatrix<E>,
    pub u: DenseMatrix<E>,
    pub u_inv: DenseMatrix<E>,
    pub v: DenseMatrix<E>,
    pub v_inv: DenseMatrix<E>,
    pub rank: usize,
}

impl<E: Clone> Smith<E> {
    /// Nonzero diagonal entries.
    pub fn invariant_factors(&self) -> Vec<E> {
        (0..self.rank).map(|i| self.d.get(i, i).clone()).collect()
    }
}

struct Work<'a, R: Ring> {
    ring: &'a R,
    m: DenseMatrix<R::Elem>,
    track: bool,
    u: DenseMatrix<R::Elem>,
    u_inv: DenseMatrix<R::Elem>,
    v: DenseMatrix<R::Elem>,
    v_inv: DenseMatrix<R::Elem>,
}

impl<R: Ring> Work<'_, R> {
    // row a += c·row b
    fn row_add(&mut self, a: usize, b: usize, c: &R::Elem) {
        self.m.add_row_multiple(self.ring, a, b, c);
        if self.track {
            self.u.add_row_multiple(self.ring, a, b, c);
            let nc = self.ring.neg(c);
            self.u_inv.add_col_multiple(self.ring, b, a, &nc);
        }
    }

    // col a += c·col b
    fn col_add(&mut self, a: usize, b: usize, c: &R::Elem) {
        self.m.add_col_multiple(self.ring, a, b, c);
        if self.track {
            self.v.add_col_multiple(self.ring, a, b, c);
            let nc = self.ring.neg(c);
            self.v_inv.add_row_multiple(self.ring, b, a, &nc);
        }
    }

    fn row_swap(&mut self, a: usize, b: usize) {
        self.m.swap_rows(a, b);
        if self.track {
            self.u.swap_rows(a, b);
            self.u_inv.swap_cols(a, b);
        }
    }

    fn col_swap(&mut self, a: usize, b: usize) {
        self.m.swap_cols(a, b);
        if self.track {
            self.v.swap_cols(a, b);
            self.v_inv.swap_rows(a, b);
        }
    }

    fn row_scale(&mut self, a: usize, unit: &R::Elem) {
        self.m.scale_row(self.ring, a, unit);
        if self.track {
            self.u.scale_row(self.ring, a, unit);
            let inv = self.ring.unit_inverse(unit).expect("unit");
            self.u_inv.scale_col(self.ring, a, &inv);
        }
    }
}

/// Smith normal form over any [`Ring`]; transforms are tracked when `track` is set.
pub fn smith<R: Ring>(ring: &R, m: &DenseMatrix<R::Elem>, track: bool) -> Smith<R::Elem> {
    let (rows, cols) = (m.rows(), m.cols());
    let (u, v) = if track {
        (DenseMatrix::identity(ring, rows), DenseMatrix::identity(ring, cols))
    } else {
        (DenseMatrix::zeros(ring, 0, 0), DenseMatrix::zeros(ring, 0, 0))
    };
    let mut w = Work { ring, m: m.clone(), track, u_inv: u.clone(), u, v_inv: v.clone(), v };
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = min_entry(ring, &w.m, t, t..rows, t..cols) else { break };
        w.row_swap(t, pi);
        w.col_swap(t, pj);
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if ring.is_zero(w.m.get(i, t)) {
                    continue;
                }
                let (q, r) = ring.div_rem(w.m.get(i, t), w.m.get(t, t));
                w.row_add(i, t, &ring.neg(&q));
                if !ring.is_zero(&r) {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if ring.is_zero(w.m.get(t, j)) {
                    continue;
                }
                let (q, r) = ring.div_rem(w.m.get(t, j), w.m.get(t, t));
                w.col_add(j, t, &ring.neg(&q));
                if !ring.is_zero(&r) {
                    clean = false;
                }
            }
            if !clean {
                let a = min_entry(ring, &w.m, t, t..rows, t..t + 1);
                let b = min_entry(ring, &w.m, t, t..t + 1, t..cols);
                let (i, j) = match (a, b) {
                    (Some(x), Some(y)) => {
                        if ring.cmp_size(w.m.get(x.0, x.1), w.m.get(y.0, y.1)).is_le() {
                            x
                        } else {
                            y
                        }
                    }
                    (Some(x), None) | (None, Some(x)) => x,
                    (None, None) => unreachable!("pivot row and column cannot both vanish"),
                };
                w.row_swap(t, i);
                w.col_swap(t, j);
                continue;
            }
            let mut bad = None;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    let x = w.m.get(i, j);
                    if !ring.is_zero(x) && !ring.is_zero(&ring.div_rem(x, w.m.get(t, t)).1) {
                        bad = Some(i);
                        break 'scan;
                    }
                }
            }
            match bad {
                Some(i) => {
                    let one = ring.one();
                    w.row_add(t, i, &one);
                }
                None => break,
            }
        }
        let unit = ring.normalizing_unit(w.m.get(t, t));
        if !ring.is_one(&unit) {
            w.row_scale(t, &unit);
        }
        t += 1;
    }
    Smith { d: w.m, u: w.u, u_inv: w.u_inv, v: w.v, v_inv: w.v_inv, rank: t }
}

fn min_entry<R: Ring>(
    ring: &R,
    m: &DenseMatrix<R::Elem>,
    _t: usize,
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in rows {
        for j in cols.clone() {
            let x = m.get(i, j);
            if ring.is_zero(x) {
                continue;
            }
            match best {
                Some((bi, bj)) if ring.cmp_size(x, m.get(bi, bj)).is_ge() => {}
                _ => {
                    if ring.is_unit(x) {
                        return Some((i, j));
                    }
                    best = Some((i, j));
                }
            }
        }
    }
    best
}

/// Smith normal form of an integer matrix: returns `(U, D, V)` with `U·M·V = D`.
pub fn smith_normal_form(m: &SparseMatrix) -> (DenseMatrix<IBig>, DenseMatrix<IBig>, DenseMatrix<IBig>) {
    let s = smith(&Integers, &m.to_dense(&Integers), true);
    (s.u, s.d, s.v)
}
