//! Exactness of a sequence of maps between finitely presented modules.

use crate::error::{Error, Result};
use crate::homalg::matrix::DenseMatrix;
use crate::homalg::presentation::{kernel_basis, solve};
use crate::homalg::ring::Ring;

/// A module `⊕ R/(orders[i])`; a zero order is a free summand.
#[derive(Debug, Clone)]
pub struct PresentedGroup<E> {
    pub orders: Vec<E>,
}

impl<E: Clone> PresentedGroup<E> {
    pub fn free<R: Ring<Elem = E>>(ring: &R, rank: usize) -> Self {
        PresentedGroup { orders: vec![ring.zero(); rank] }
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    fn relations<R: Ring<Elem = E>>(&self, ring: &R) -> DenseMatrix<E> {
        let n = self.orders.len();
        let mut m = DenseMatrix::zeros(ring, n, n);
        for (i, d) in self.orders.iter().enumerate() {
            m.set(i, i, d.clone());
        }
        m
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        PresentedGroup { orders: self.orders.iter().chain(&other.orders).cloned().collect() }
    }
}

/// Exactness at every interior node of `G_0 → G_1 → … → G_n`, where
/// `maps[i]: G_i → G_{i+1}`. Entry `i` of the result refers to node `i+1`.
pub fn check_exact_sequence<R: Ring>(
    ring: &R,
    groups: &[PresentedGroup<R::Elem>],
    maps: &[DenseMatrix<R::Elem>],
) -> Result<Vec<bool>> {
    if maps.len() + 1 != groups.len() {
        return Err(Error::Dimension(format!("{} groups need {} maps, got {}", groups.len(), groups.len() - 1, maps.len())));
    }
    for (i, m) in maps.iter().enumerate() {
        if m.cols() != groups[i].rank() || m.rows() != groups[i + 1].rank() {
            return Err(Error::Dimension(format!(
                "map {i} is {}x{}, expected {}x{}",
                m.rows(),
                m.cols(),
                groups[i + 1].rank(),
                groups[i].rank()
            )));
        }
    }
    let mut out = Vec::new();
    for node in 1..groups.len().saturating_sub(1) {
        out.push(exact_at(ring, &maps[node - 1], &groups[node], &maps[node], &groups[node + 1]));
    }
    Ok(out)
}

fn exact_at<R: Ring>(
    ring: &R,
    a: &DenseMatrix<R::Elem>,
    g: &PresentedGroup<R::Elem>,
    b: &DenseMatrix<R::Elem>,
    h: &PresentedGroup<R::Elem>,
) -> bool {
    let rel_h = h.relations(ring);
    let ba = b.mul(ring, a).expect("checked shapes");
    for j in 0..ba.cols() {
        if solve(ring, &rel_h, &ba.column(j)).is_none() {
            return false;
        }
    }
    // ker b = {x : b x ∈ relations of H}; every such x must lie in im a + relations of G.
    let n = g.rank();
    let stacked = b.hcat(&rel_h);
    let span = a.hcat(&g.relations(ring));
    kernel_basis(ring, &stacked).into_iter().all(|v| solve(ring, &span, &v[..n]).is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homalg::ring::{Integers, PrimeField};
    use dashu_int::IBig;

    fn z(rows: &[&[i64]], cols: usize) -> DenseMatrix<IBig> {
        DenseMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| IBig::from(v)).collect()).collect(), cols)
    }

    #[test]
    fn multiplication_by_two() {
        let r = Integers;
        let groups = vec![
            PresentedGroup { orders: vec![] },
            PresentedGroup::free(&r, 1),
            PresentedGroup::free(&r, 1),
            PresentedGroup { orders: vec![IBig::from(2)] },
            PresentedGroup { orders: vec![] },
        ];
        let maps = vec![DenseMatrix::zeros(&r, 1, 0), z(&[&[2]], 1), z(&[&[1]], 1), DenseMatrix::zeros(&r, 0, 1)];
        assert_eq!(check_exact_sequence(&r, &groups, &maps).unwrap(), vec![true, true, true]);
        let bad = vec![maps[0].clone(), z(&[&[3]], 1), maps[2].clone(), maps[3].clone()];
        assert!(check_exact_sequence(&r, &groups, &bad).unwrap().contains(&false));
    }

    #[test]
    fn identity_over_field() {
        let f = PrimeField::new(2).unwrap();
        let g = PresentedGroup::free(&f, 2);
        let zero = PresentedGroup::free(&f, 0);
        let id = DenseMatrix::identity(&f, 2);
        let groups = vec![zero.clone(), g.clone(), g.clone(), zero];
        let maps = vec![DenseMatrix::zeros(&f, 2, 0), id.clone(), DenseMatrix::zeros(&f, 0, 2)];
        assert_eq!(check_exact_sequence(&f, &groups, &maps).unwrap(), vec![true, true]);
        let mut skew = id.clone();
        skew.set(0, 1, 1);
        skew.set(1, 1, 0);
        let maps = vec![DenseMatrix::zeros(&f, 2, 0), skew, DenseMatrix::zeros(&f, 0, 2)];
        assert!(check_exact_sequence(&f, &groups, &maps).unwrap().contains(&false));
    }
}
