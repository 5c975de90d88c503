//! Independent brute-force oracles. Nothing here calls into the library's
//! linear algebra or complex construction; graphs are read only through
//! `n()` and `edges()`.
#![allow(dead_code)]

use std::collections::{HashMap, VecDeque};

use reachhom::DiGraph;

/// Per-degree result: Betti number and non-unit invariant factors.
pub type Group = (usize, Vec<u64>);

/// Reflexive-transitive closure by Floyd–Warshall.
pub fn closure(g: &DiGraph) -> Vec<Vec<bool>> {
    let n = g.n();
    let mut r = vec![vec![false; n]; n];
    for (i, row) in r.iter_mut().enumerate() {
        row[i] = true;
    }
    for (u, v) in g.edges() {
        r[u][v] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if r[i][k] {
                for j in 0..n {
                    if r[k][j] {
                        r[i][j] = true;
                    }
                }
            }
        }
    }
    r
}

/// Tuples of length `k+1` with distinct, successively related neighbours, for `k ≤ top`.
pub fn tuples(leq: &[Vec<bool>], top: usize) -> Vec<Vec<Vec<usize>>> {
    let n = leq.len();
    let mut out: Vec<Vec<Vec<usize>>> = vec![(0..n).map(|v| vec![v]).collect()];
    for k in 1..=top {
        let mut next = Vec::new();
        for t in &out[k - 1] {
            let last = *t.last().unwrap();
            for v in 0..n {
                if v != last && leq[last][v] {
                    let mut s = t.clone();
                    s.push(v);
                    next.push(s);
                }
            }
        }
        out.push(next);
    }
    out
}

/// Dense boundary `C_k → C_{k-1}` of the normalized nerve: faces that acquire
/// a repeated neighbour are degenerate and dropped.
pub fn nerve_boundary(src: &[Vec<usize>], dst: &[Vec<usize>]) -> Vec<Vec<i64>> {
    let index: HashMap<&Vec<usize>, usize> = dst.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let mut m = vec![vec![0i64; src.len()]; dst.len()];
    for (c, t) in src.iter().enumerate() {
        for j in 0..t.len() {
            let mut f = t.clone();
            f.remove(j);
            if f.windows(2).any(|w| w[0] == w[1]) {
                continue;
            }
            let r = index[&f];
            m[r][c] += if j % 2 == 0 { 1 } else { -1 };
        }
    }
    m
}

/// Smith diagonal (nonzero entries, divisibility chain) of an integer matrix.
pub fn smith_diagonal(m: &[Vec<i64>]) -> Vec<i128> {
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // Smallest nonzero entry of the remaining block.
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if a[i][j] != 0 && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        for row in a.iter_mut() {
            row.swap(t, bj);
        }
        loop {
            let p = a[t][t];
            let mut dirty = false;
            for i in t + 1..rows {
                let q = a[i][t] / p;
                if q != 0 {
                    for j in t..cols {
                        a[i][j] = a[i][j].checked_sub(q * a[t][j]).expect("overflow");
                    }
                }
                dirty |= a[i][t] != 0;
            }
            for j in t + 1..cols {
                let q = a[t][j] / p;
                if q != 0 {
                    for row in a.iter_mut().skip(t) {
                        row[j] = row[j].checked_sub(q * row[t]).expect("overflow");
                    }
                }
                dirty |= a[t][j] != 0;
            }
            if !dirty {
                // Enforce divisibility against the rest of the block.
                let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| a[i][j] % p != 0));
                match bad {
                    Some(i) => {
                        for j in t..cols {
                            a[t][j] += a[i][j];
                        }
                        continue;
                    }
                    None => break,
                }
            }
            // Move the smallest nonzero entry of row t / column t to the pivot.
            let mut best = (t, t);
            for i in t..rows {
                if a[i][t] != 0 && a[i][t].abs() < a[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..cols {
                if a[t][j] != 0 && a[t][j].abs() < a[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            a.swap(t, best.0);
            for row in a.iter_mut() {
                row.swap(t, best.1);
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    diag
}

/// Rank modulo a prime `p`.
pub fn rank_mod(m: &[Vec<i64>], p: i64) -> usize {
    let mut a: Vec<Vec<i64>> = m.iter().map(|r| r.iter().map(|&x| x.rem_euclid(p)).collect()).collect();
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let inv = |x: i64| {
        let mut r = 1i64;
        let (mut b, mut e) = (x, p - 2);
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    };
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&i| a[i][c] != 0) else { continue };
        a.swap(rank, piv);
        let s = inv(a[rank][c]);
        for j in c..cols {
            a[rank][j] = a[rank][j] * s % p;
        }
        for i in 0..rows {
            if i != rank && a[i][c] != 0 {
                let f = a[i][c];
                for j in c..cols {
                    a[i][j] = (a[i][j] - f * a[rank][j]).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Which coefficients to use: `None` for ℤ, `Some(p)` for 𝔽ₚ.
/// ℚ agrees with the free part over ℤ.
pub fn homology_from(dims: &[usize], bd: &[Vec<Vec<i64>>], p: Option<i64>, top: usize) -> Vec<Group> {
    // bd[k] : C_k → C_{k-1}, bd[0] empty; dims has length ≥ top + 2.
    let rank = |k: usize| -> (usize, Vec<u64>) {
        if k == 0 || k >= bd.len() || bd[k].is_empty() || dims[k] == 0 {
            return (0, Vec::new());
        }
        match p {
            Some(p) => (rank_mod(&bd[k], p), Vec::new()),
            None => {
                let d = smith_diagonal(&bd[k]);
                (d.len(), d.iter().filter(|&&x| x > 1).map(|&x| x as u64).collect())
            }
        }
    };
    (0..=top)
        .map(|k| {
            let (rk, _) = rank(k);
            let (rk1, tors) = rank(k + 1);
            (dims[k] - rk - rk1, tors)
        })
        .collect()
}

/// Reachability homology in degrees `≤ top`, built from scratch.
pub fn rh(g: &DiGraph, top: usize, p: Option<i64>) -> Vec<Group> {
    let leq = closure(g);
    let gens = tuples(&leq, top + 1);
    let dims: Vec<usize> = gens.iter().map(Vec::len).collect();
    let mut bd = vec![Vec::new()];
    for k in 1..=top + 1 {
        bd.push(nerve_boundary(&gens[k], &gens[k - 1]));
    }
    homology_from(&dims, &bd, p, top)
}

/// Simplicial homology of the complex generated by `facets` (vertex ids), all degrees.
pub fn simplicial_homology(facets: &[Vec<usize>], p: Option<i64>) -> Vec<Group> {
    let mut by_dim: Vec<Vec<Vec<usize>>> = Vec::new();
    for f in facets {
        let mut f = f.clone();
        f.sort();
        for mask in 1u32..(1 << f.len()) {
            let s: Vec<usize> = (0..f.len()).filter(|&i| mask >> i & 1 == 1).map(|i| f[i]).collect();
            let d = s.len() - 1;
            if by_dim.len() <= d {
                by_dim.resize(d + 1, Vec::new());
            }
            by_dim[d].push(s);
        }
    }
    for v in by_dim.iter_mut() {
        v.sort();
        v.dedup();
    }
    let top = by_dim.len() - 1;
    by_dim.push(Vec::new());
    let dims: Vec<usize> = by_dim.iter().map(Vec::len).collect();
    let mut bd = vec![Vec::new()];
    for k in 1..by_dim.len() {
        let index: HashMap<&Vec<usize>, usize> = by_dim[k - 1].iter().enumerate().map(|(i, s)| (s, i)).collect();
        let mut m = vec![vec![0i64; by_dim[k].len()]; by_dim[k - 1].len()];
        for (c, s) in by_dim[k].iter().enumerate() {
            for j in 0..s.len() {
                let mut f = s.clone();
                f.remove(j);
                m[index[&f]][c] += if j % 2 == 0 { 1 } else { -1 };
            }
        }
        bd.push(m);
    }
    homology_from(&dims, &bd, p, top)
}

/// Unweighted directed distances; `None` when unreachable.
pub fn distances(g: &DiGraph) -> Vec<Vec<Option<u64>>> {
    let n = g.n();
    let mut adj = vec![Vec::new(); n];
    for (u, v) in g.edges() {
        if u != v {
            adj[u].push(v);
        }
    }
    (0..n)
        .map(|s| {
            let mut d = vec![None; n];
            d[s] = Some(0);
            let mut q = VecDeque::from([s]);
            while let Some(u) = q.pop_front() {
                for &v in &adj[u] {
                    if d[v].is_none() {
                        d[v] = Some(d[u].unwrap() + 1);
                        q.push_back(v);
                    }
                }
            }
            d
        })
        .collect()
}

// Bit-packed vectors over 𝔽₂.
type Bits = Vec<u64>;

fn bits(n: usize) -> Bits {
    vec![0; n.div_ceil(64)]
}

fn get(b: &Bits, i: usize) -> bool {
    b[i / 64] >> (i % 64) & 1 == 1
}

fn flip(b: &mut Bits, i: usize) {
    b[i / 64] ^= 1 << (i % 64);
}

/// Reduced row-echelon span; returns a basis.
fn span(vs: impl IntoIterator<Item = Bits>) -> Vec<(usize, Bits)> {
    let mut basis: Vec<(usize, Bits)> = Vec::new();
    for mut v in vs {
        for (p, b) in &basis {
            if get(&v, *p) {
                v.iter_mut().zip(b).for_each(|(x, y)| *x ^= y);
            }
        }
        let lead = v.iter().enumerate().find(|(_, w)| **w != 0).map(|(i, w)| i * 64 + w.trailing_zeros() as usize);
        if let Some(p) = lead {
            for (_, b) in basis.iter_mut() {
                if get(b, p) {
                    b.iter_mut().zip(&v).for_each(|(x, y)| *x ^= y);
                }
            }
            basis.push((p, v));
        }
    }
    basis
}

/// Kernel of the linear map given by the images of the standard basis vectors `cols`.
fn kernel(cols: &[Bits], dom: usize) -> Vec<Bits> {
    // Gaussian elimination on the augmented columns [image | identity].
    let mut rows: Vec<(Bits, Bits)> = cols
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let mut e = bits(dom);
            flip(&mut e, i);
            (c.clone(), e)
        })
        .collect();
    let mut out = Vec::new();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    for i in 0..rows.len() {
        for &(p, r) in &pivots {
            if get(&rows[i].0, p) {
                let (a, b) = (rows[r].0.clone(), rows[r].1.clone());
                rows[i].0.iter_mut().zip(&a).for_each(|(x, y)| *x ^= y);
                rows[i].1.iter_mut().zip(&b).for_each(|(x, y)| *x ^= y);
            }
        }
        match rows[i].0.iter().enumerate().find(|(_, w)| **w != 0) {
            Some((k, w)) => pivots.push((k * 64 + w.trailing_zeros() as usize, i)),
            None => out.push(rows[i].1.clone()),
        }
    }
    out
}

/// dim E^r_{s,k} over 𝔽₂ for the length filtration, from
/// `E^r_s = Z^r_s / (Z^{r-1}_{s-1} + ∂Z^{r-1}_{s+r-1})`,
/// `Z^r_s = {x ∈ F_s : ∂x ∈ F_{s-r}}`. Returns `ranks[k][s]` for `k ≤ top`.
pub fn spectral_ranks(g: &DiGraph, top: usize, r: usize) -> Vec<Vec<usize>> {
    let leq = closure(g);
    let d = distances(g);
    let gens = tuples(&leq, top + 1);
    let len = |t: &Vec<usize>| -> i64 { t.windows(2).map(|w| d[w[0]][w[1]].unwrap() as i64).sum() };
    let lens: Vec<Vec<i64>> = gens.iter().map(|v| v.iter().map(len).collect()).collect();
    let max_s = lens.iter().flatten().copied().max().unwrap_or(0);
    // Boundary of each generator as a bit vector in degree k-1.
    let bd: Vec<Vec<Bits>> = (0..gens.len())
        .map(|k| {
            if k == 0 {
                return vec![bits(0); gens[0].len()];
            }
            let m = nerve_boundary(&gens[k], &gens[k - 1]);
            (0..gens[k].len())
                .map(|c| {
                    let mut b = bits(gens[k - 1].len());
                    for (row, line) in m.iter().enumerate() {
                        if line[c] % 2 != 0 {
                            flip(&mut b, row);
                        }
                    }
                    b
                })
                .collect()
        })
        .collect();
    // Z^r_s in degree k as a list of vectors in C_k.
    let z = |k: usize, s: i64, r: i64| -> Vec<Bits> {
        let dom: Vec<usize> = (0..gens[k].len()).filter(|&i| lens[k][i] <= s).collect();
        if dom.is_empty() {
            return Vec::new();
        }
        // Components of ∂x that must vanish: those of length > s - r.
        let images: Vec<Bits> = dom
            .iter()
            .map(|&i| {
                let mut b = bd[k][i].clone();
                if k > 0 {
                    for (j, &l) in lens[k - 1].iter().enumerate() {
                        if l <= s - r && get(&b, j) {
                            flip(&mut b, j);
                        }
                    }
                }
                b
            })
            .collect();
        kernel(&images, dom.len())
            .into_iter()
            .map(|c| {
                let mut v = bits(gens[k].len());
                for (pos, &i) in dom.iter().enumerate() {
                    if get(&c, pos) {
                        flip(&mut v, i);
                    }
                }
                v
            })
            .collect()
    };
    let apply_bd = |k: usize, v: &Bits| -> Bits {
        let mut out = bits(gens[k - 1].len());
        for i in 0..gens[k].len() {
            if get(v, i) {
                out.iter_mut().zip(&bd[k][i]).for_each(|(x, y)| *x ^= y);
            }
        }
        out
    };
    let r = r as i64;
    (0..=top)
        .map(|k| {
            (0..=max_s)
                .map(|s| {
                    let num = span(z(k, s, r)).len();
                    let mut den = z(k, s - 1, r - 1);
                    den.extend(z(k + 1, s + r - 1, r - 1).iter().map(|v| apply_bd(k + 1, v)));
                    num - span(den).len()
                })
                .collect()
        })
        .collect()
}

/// The box product, built from the definition: `(g,h) → (g',h)` for edges of G
/// and `(g,h) → (g,h')` for edges of H. Vertex `(g,h)` has index `g·|H| + h`.
pub fn box_product(g: &DiGraph, h: &DiGraph) -> DiGraph {
    let m = h.n();
    let mut edges = Vec::new();
    for (a, b) in g.edges() {
        for c in 0..m {
            edges.push((a * m + c, b * m + c));
        }
    }
    for (c, d) in h.edges() {
        for a in 0..g.n() {
            edges.push((a * m + c, a * m + d));
        }
    }
    let labels: Vec<String> = (0..g.n() * m).map(|i| format!("p{i}")).collect();
    DiGraph::from_parts(labels, &edges)
}

/// Betti-number convolution `Σ_{i+j=k} b_i(G) b_j(H)` (field coefficients).
pub fn convolve(a: &[usize], b: &[usize], k: usize) -> usize {
    (0..=k).map(|i| a.get(i).copied().unwrap_or(0) * b.get(k - i).copied().unwrap_or(0)).sum()
}

pub fn betti(groups: &[Group]) -> Vec<usize> {
    groups.iter().map(|g| g.0).collect()
}
