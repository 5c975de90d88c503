//! Sparse integer matrices (chain-level data) and dense matrices over a ring.

use crate::error::{Error, Result};
use crate::homalg::ring::Ring;

/// Column-major sparse matrix with `i64` entries. Columns are kept sorted by
/// row index and never store zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    nrows: usize,
    cols: Vec<Vec<(u32, i64)>>,
}

impl SparseMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        SparseMatrix { nrows, cols: vec![Vec::new(); ncols] }
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix { nrows: n, cols: (0..n).map(|i| vec![(i as u32, 1)]).collect() }
    }

    /// Builds from unsorted `(row, value)` columns, merging duplicates.
    pub fn from_columns(nrows: usize, cols: Vec<Vec<(u32, i64)>>) -> Self {
        let cols = cols.into_iter().map(normalize_column).collect::<Vec<_>>();
        debug_assert!(cols.iter().all(|c| c.iter().all(|&(r, _)| (r as usize) < nrows)));
        SparseMatrix { nrows, cols }
    }

    pub fn from_dense(rows: &[Vec<i64>], ncols: usize) -> Self {
        let mut cols = vec![Vec::new(); ncols];
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v != 0 {
                    cols[j].push((i as u32, v));
                }
            }
        }
        SparseMatrix { nrows: rows.len(), cols }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.nrows, self.cols.len())
    }

    pub fn column(&self, j: usize) -> &[(u32, i64)] {
        &self.cols[j]
    }

    pub fn columns(&self) -> &[Vec<(u32, i64)>] {
        &self.cols
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        let c = &self.cols[j];
        match c.binary_search_by_key(&(i as u32), |e| e.0) {
            Ok(k) => c[k].1,
            Err(_) => 0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }

    pub fn to_dense_i64(&self) -> Vec<Vec<i64>> {
        let mut out = vec![vec![0; self.ncols()]; self.nrows];
        for (j, c) in self.cols.iter().enumerate() {
            for &(i, v) in c {
                out[i as usize][j] = v;
            }
        }
        out
    }

    /// Product `self · rhs`.
    pub fn mul(&self, rhs: &SparseMatrix) -> Result<SparseMatrix> {
        if self.ncols() != rhs.nrows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.nrows,
                self.ncols(),
                rhs.nrows,
                rhs.ncols()
            )));
        }
        let mut acc = vec![0i64; self.nrows];
        let mut touched: Vec<u32> = Vec::new();
        let mut cols = Vec::with_capacity(rhs.ncols());
        for rc in &rhs.cols {
            for &(k, b) in rc {
                for &(i, a) in &self.cols[k as usize] {
                    let slot = &mut acc[i as usize];
                    if *slot == 0 {
                        touched.push(i);
                    }
                    *slot = slot.checked_add(a.checked_mul(b).expect("i64 overflow")).expect("i64 overflow");
                }
            }
            touched.sort_unstable();
            touched.dedup();
            let mut col = Vec::with_capacity(touched.len());
            for &i in &touched {
                let v = std::mem::take(&mut acc[i as usize]);
                if v != 0 {
                    col.push((i, v));
                }
            }
            touched.clear();
            cols.push(col);
        }
        Ok(SparseMatrix { nrows: self.nrows, cols })
    }

    /// `a·self + b·rhs`.
    pub fn lin_comb(&self, a: i64, rhs: &SparseMatrix, b: i64) -> Result<SparseMatrix> {
        if self.shape() != rhs.shape() {
            return Err(Error::Dimension(format!("shapes {:?} and {:?} differ", self.shape(), rhs.shape())));
        }
        let cols = self
            .cols
            .iter()
            .zip(&rhs.cols)
            .map(|(x, y)| {
                let mut c: Vec<(u32, i64)> = x.iter().map(|&(i, v)| (i, a * v)).chain(y.iter().map(|&(i, v)| (i, b * v))).collect();
                c.sort_unstable_by_key(|e| e.0);
                normalize_column(c)
            })
            .collect();
        Ok(SparseMatrix { nrows: self.nrows, cols })
    }

    pub fn add(&self, rhs: &SparseMatrix) -> Result<SparseMatrix> {
        self.lin_comb(1, rhs, 1)
    }

    pub fn sub(&self, rhs: &SparseMatrix) -> Result<SparseMatrix> {
        self.lin_comb(1, rhs, -1)
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut cols = vec![Vec::new(); self.nrows];
        for (j, c) in self.cols.iter().enumerate() {
            for &(i, v) in c {
                cols[i as usize].push((j as u32, v));
            }
        }
        SparseMatrix { nrows: self.ncols(), cols }
    }

    /// Keeps the listed rows (in that order) and columns.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> SparseMatrix {
        let mut pos = vec![u32::MAX; self.nrows];
        for (k, &r) in rows.iter().enumerate() {
            pos[r] = k as u32;
        }
        let cols = cols
            .iter()
            .map(|&j| {
                let mut c: Vec<(u32, i64)> =
                    self.cols[j].iter().filter(|e| pos[e.0 as usize] != u32::MAX).map(|&(i, v)| (pos[i as usize], v)).collect();
                c.sort_unstable_by_key(|e| e.0);
                c
            })
            .collect();
        SparseMatrix { nrows: rows.len(), cols }
    }

    /// Matrix reduced into a ring, as a dense matrix.
    pub fn to_dense<R: Ring>(&self, ring: &R) -> DenseMatrix<R::Elem> {
        let mut m = DenseMatrix::zeros(ring, self.nrows, self.ncols());
        for (j, c) in self.cols.iter().enumerate() {
            for &(i, v) in c {
                m.set(i as usize, j, ring.from_i64(v));
            }
        }
        m
    }

    /// Whether every entry vanishes in the ring (e.g. is divisible by p).
    pub fn is_zero_in<R: Ring>(&self, ring: &R) -> bool {
        self.cols.iter().all(|c| c.iter().all(|&(_, v)| ring.is_zero(&ring.from_i64(v))))
    }
}

fn normalize_column(mut c: Vec<(u32, i64)>) -> Vec<(u32, i64)> {
    c.sort_unstable_by_key(|e| e.0);
    let mut out: Vec<(u32, i64)> = Vec::with_capacity(c.len());
    for (i, v) in c {
        match out.last_mut() {
            Some(last) if last.0 == i => last.1 += v,
            _ => out.push((i, v)),
        }
    }
    out.retain(|e| e.1 != 0);
    out
}

/// Row-major dense matrix over a ring.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> DenseMatrix<E> {
    pub fn zeros<R: Ring<Elem = E>>(ring: &R, rows: usize, cols: usize) -> Self {
        DenseMatrix { rows, cols, data: vec![ring.zero(); rows * cols] }
    }

    pub fn identity<R: Ring<Elem = E>>(ring: &R, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, ring.one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<E>>, cols: usize) -> Self {
        let r = rows.len();
        let data: Vec<E> = rows.into_iter().flatten().collect();
        assert_eq!(data.len(), r * cols, "ragged rows");
        DenseMatrix { rows: r, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<E> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// Row `dst += c · row src`.
    pub fn add_row_multiple<R: Ring<Elem = E>>(&mut self, ring: &R, dst: usize, src: usize, c: &E) {
        if ring.is_zero(c) {
            return;
        }
        for j in 0..self.cols {
            let s = self.get(src, j);
            if ring.is_zero(s) {
                continue;
            }
            let v = ring.add(self.get(dst, j), &ring.mul(c, s));
            self.set(dst, j, v);
        }
    }

    /// Column `dst += c · column src`.
    pub fn add_col_multiple<R: Ring<Elem = E>>(&mut self, ring: &R, dst: usize, src: usize, c: &E) {
        if ring.is_zero(c) {
            return;
        }
        for i in 0..self.rows {
            let s = self.get(i, src);
            if ring.is_zero(s) {
                continue;
            }
            let v = ring.add(self.get(i, dst), &ring.mul(c, s));
            self.set(i, dst, v);
        }
    }

    pub fn scale_row<R: Ring<Elem = E>>(&mut self, ring: &R, i: usize, c: &E) {
        for j in 0..self.cols {
            let v = ring.mul(c, self.get(i, j));
            self.set(i, j, v);
        }
    }

    pub fn scale_col<R: Ring<Elem = E>>(&mut self, ring: &R, j: usize, c: &E) {
        for i in 0..self.rows {
            let v = ring.mul(c, self.get(i, j));
            self.set(i, j, v);
        }
    }

    pub fn mul<R: Ring<Elem = E>>(&self, ring: &R, rhs: &DenseMatrix<E>) -> Result<DenseMatrix<E>> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = DenseMatrix::zeros(ring, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if ring.is_zero(a) {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if ring.is_zero(b) {
                        continue;
                    }
                    let v = ring.add(out.get(i, j), &ring.mul(a, b));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec<R: Ring<Elem = E>>(&self, ring: &R, v: &[E]) -> Vec<E> {
        assert_eq!(v.len(), self.cols, "vector length");
        (0..self.rows)
            .map(|i| {
                let mut acc = ring.zero();
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !ring.is_zero(a) && !ring.is_zero(x) {
                        acc = ring.add(&acc, &ring.mul(a, x));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn select_rows(&self, rows: &[usize]) -> DenseMatrix<E> {
        let data = rows.iter().flat_map(|&i| self.row(i).iter().cloned()).collect();
        DenseMatrix { rows: rows.len(), cols: self.cols, data }
    }

    pub fn select_cols(&self, cols: &[usize]) -> DenseMatrix<E> {
        let data = (0..self.rows).flat_map(|i| cols.iter().map(move |&j| self.get(i, j).clone())).collect();
        DenseMatrix { rows: self.rows, cols: cols.len(), data }
    }

    /// `[self | rhs]`.
    pub fn hcat(&self, rhs: &DenseMatrix<E>) -> DenseMatrix<E> {
        assert_eq!(self.rows, rhs.rows, "hcat row mismatch");
        let data = (0..self.rows).flat_map(|i| self.row(i).iter().chain(rhs.row(i)).cloned()).collect();
        DenseMatrix { rows: self.rows, cols: self.cols + rhs.cols, data }
    }

    /// `[self ; rhs]`.
    pub fn vcat(&self, rhs: &DenseMatrix<E>) -> DenseMatrix<E> {
        assert_eq!(self.cols, rhs.cols, "vcat column mismatch");
        let mut data = self.data.clone();
        data.extend(rhs.data.iter().cloned());
        DenseMatrix { rows: self.rows + rhs.rows, cols: self.cols, data }
    }

    pub fn is_zero<R: Ring<Elem = E>>(&self, ring: &R) -> bool {
        self.data.iter().all(|x| ring.is_zero(x))
    }

    pub fn map<F, R: Ring<Elem = E>>(&self, ring: &R, f: F) -> DenseMatrix<E>
    where
        F: Fn(&R, &E) -> E,
    {
        DenseMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| f(ring, x)).collect() }
    }

    pub fn from_columns<R: Ring<Elem = E>>(ring: &R, rows: usize, cols: &[Vec<E>]) -> DenseMatrix<E> {
        let mut m = DenseMatrix::zeros(ring, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length");
            for (i, v) in c.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }
}
