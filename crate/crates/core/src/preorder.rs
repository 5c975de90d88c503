//! Reachability preorders, condensation posets and Dwyer morphisms.

use serde::Serialize;

use crate::digraph::DiGraph;
use crate::error::{Error, Result};

/// Square boolean matrix packed into 64-bit words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitMatrix {
    n: usize,
    words: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        BitMatrix { n, words, data: vec![0; n * words] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize) {
        self.data[i * self.words + j / 64] |= 1 << (j % 64);
    }

    /// Row `dst |= row src`.
    pub fn or_row(&mut self, dst: usize, src: usize) {
        if dst == src {
            return;
        }
        let w = self.words;
        let (d, s) = (dst * w, src * w);
        for k in 0..w {
            let bits = self.data[s + k];
            self.data[d + k] |= bits;
        }
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&j| self.get(i, j))
    }
}

/// A reflexive transitive relation on labelled elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Preorder {
    labels: Vec<String>,
    leq: BitMatrix,
}

impl Preorder {
    /// Reflexive-transitive closure of the given relation.
    pub fn from_relation(labels: Vec<String>, pairs: &[(usize, usize)]) -> Self {
        let mut g = DiGraph::new();
        for l in &labels {
            g.add_vertex(l.clone());
        }
        assert_eq!(g.n(), labels.len(), "duplicate preorder labels");
        for &(a, b) in pairs {
            g.add_edge(a, b);
        }
        reachability_preorder(&g)
    }

    /// Wraps a matrix that is already reflexive and transitive.
    pub fn from_matrix(labels: Vec<String>, leq: BitMatrix) -> Result<Self> {
        let p = Preorder { labels, leq };
        let n = p.len();
        for x in 0..n {
            if !p.leq(x, x) {
                return Err(Error::Domain("relation is not reflexive".into()));
            }
            for y in 0..n {
                if p.leq(x, y) && (0..n).any(|z| p.leq(y, z) && !p.leq(x, z)) {
                    return Err(Error::Domain("relation is not transitive".into()));
                }
            }
        }
        Ok(p)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq.get(x, y)
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.leq
    }

    pub fn equivalent(&self, x: usize, y: usize) -> bool {
        self.leq(x, y) && self.leq(y, x)
    }

    pub fn is_poset(&self) -> bool {
        (0..self.len()).all(|x| (0..self.len()).all(|y| x == y || !self.equivalent(x, y)))
    }

    /// Comparable pairs `x ≤ y` with `x ≠ y`.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n).flat_map(|x| (0..n).filter(move |&y| x != y).map(move |y| (x, y))).filter(|&(x, y)| self.leq(x, y)).collect()
    }

    /// Restriction to a subset, in the given order.
    pub fn restrict(&self, keep: &[usize]) -> Preorder {
        let mut m = BitMatrix::new(keep.len());
        for (a, &x) in keep.iter().enumerate() {
            for (b, &y) in keep.iter().enumerate() {
                if self.leq(x, y) {
                    m.set(a, b);
                }
            }
        }
        Preorder { labels: keep.iter().map(|&x| self.labels[x].clone()).collect(), leq: m }
    }
}

/// Strongly connected components of the loop-free part of `g`. Classes are
/// numbered by their smallest vertex; `reach[c]` holds the classes reachable
/// from class `c`.
struct Scc {
    class_of: Vec<usize>,
    classes: Vec<Vec<usize>>,
    reach: BitMatrix,
}

fn scc(g: &DiGraph) -> Scc {
    let n = g.n();
    let succ = g.successors();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comp = vec![usize::MAX; n];
    let mut order: Vec<Vec<usize>> = Vec::new();
    let mut next = 0usize;
    let mut call: Vec<(usize, usize)> = Vec::new();
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        call.push((root, 0));
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if *pos < succ[v].len() {
                let w = succ[v][*pos];
                *pos += 1;
                if index[w] == usize::MAX {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut members = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        comp[w] = order.len();
                        members.push(w);
                        if w == v {
                            break;
                        }
                    }
                    members.sort_unstable();
                    order.push(members);
                }
            }
        }
    }
    // Tarjan emits components sinks first, so successors are finished before
    // their sources.
    let c = order.len();
    let mut reach_t = BitMatrix::new(c);
    for k in 0..c {
        reach_t.set(k, k);
        for &v in &order[k] {
            for &w in &succ[v] {
                let t = comp[w];
                if t != k {
                    reach_t.or_row(k, t);
                }
            }
        }
    }
    let mut perm: Vec<usize> = (0..c).collect();
    perm.sort_by_key(|&k| order[k][0]);
    let mut rank = vec![0usize; c];
    for (new, &old) in perm.iter().enumerate() {
        rank[old] = new;
    }
    let mut reach = BitMatrix::new(c);
    for old in 0..c {
        for t in reach_t.row(old) {
            reach.set(rank[old], rank[t]);
        }
    }
    Scc {
        class_of: comp.iter().map(|&k| rank[k]).collect(),
        classes: perm.iter().map(|&k| order[k].clone()).collect(),
        reach,
    }
}

/// `u ≤ v` iff a directed path runs from `u` to `v` (loops are ignored).
pub fn reachability_preorder(g: &DiGraph) -> Preorder {
    let s = scc(g);
    let n = g.n();
    let mut leq = BitMatrix::new(n);
    for u in 0..n {
        for c in s.reach.row(s.class_of[u]) {
            for &v in &s.classes[c] {
                leq.set(u, v);
            }
        }
    }
    Preorder { labels: g.labels().map(str::to_string).collect(), leq }
}

/// The digraph with an edge `p → q` (loops included) whenever `p ≤ q`.
pub fn iota(p: &Preorder) -> DiGraph {
    let mut g = DiGraph::new();
    for l in p.labels() {
        g.add_vertex(l.clone());
    }
    for x in 0..p.len() {
        for y in 0..p.len() {
            if p.leq(x, y) {
                g.add_edge(x, y);
            }
        }
    }
    g
}

/// Largest domain accepted by [`adjunction_check`].
pub const ADJUNCTION_MAX: usize = 5;

/// Compares, function by function, digraph maps `G → ι(P)` with monotone
/// maps `Pre(G) → P`. Returns true iff the two sets of vertex functions agree.
pub fn adjunction_check(g: &DiGraph, p: &Preorder) -> Result<bool> {
    if g.n() > ADJUNCTION_MAX || p.len() > ADJUNCTION_MAX {
        return Err(Error::Refused(format!(
            "exhaustive enumeration limited to {ADJUNCTION_MAX} elements per side"
        )));
    }
    let pre = reachability_preorder(g);
    let ip = iota(p);
    let n = g.n();
    let m = p.len();
    if m == 0 {
        return Ok(true);
    }
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let mut f = vec![0usize; n];
    loop {
        let graph_map = edges.iter().all(|&(u, v)| f[u] == f[v] || ip.has_edge(f[u], f[v]));
        let monotone = (0..n).all(|u| (0..n).all(|v| !pre.leq(u, v) || p.leq(f[u], f[v])));
        if graph_map != monotone {
            return Ok(false);
        }
        let mut k = 0;
        while k < n {
            f[k] += 1;
            if f[k] < m {
                break;
            }
            f[k] = 0;
            k += 1;
        }
        if k == n {
            return Ok(true);
        }
    }
}

/// An order-preserving function between preorders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotoneMap {
    pub source: Preorder,
    pub target: Preorder,
    pub map: Vec<usize>,
}

impl MonotoneMap {
    pub fn new(source: Preorder, target: Preorder, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.len() || map.iter().any(|&t| t >= target.len()) {
            return Err(Error::Domain("map is not a total function between the preorders".into()));
        }
        let m = MonotoneMap { source, target, map };
        if !m.is_monotone() {
            return Err(Error::InvalidMap("map does not preserve the order".into()));
        }
        Ok(m)
    }

    pub fn is_monotone(&self) -> bool {
        let n = self.source.len();
        (0..n).all(|x| (0..n).all(|y| !self.source.leq(x, y) || self.target.leq(self.map[x], self.map[y])))
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.len()];
        self.map.iter().all(|&t| !std::mem::replace(&mut seen[t], true))
    }

    /// Order-reflecting: `f x ≤ f y` implies `x ≤ y`.
    pub fn is_full(&self) -> bool {
        let n = self.source.len();
        (0..n).all(|x| (0..n).all(|y| self.source.leq(x, y) == self.target.leq(self.map[x], self.map[y])))
    }
}

/// Strongly connected components as a poset.
#[derive(Debug, Clone)]
pub struct CondensationPoset {
    pub poset: Preorder,
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    pub quotient: MonotoneMap,
}

#[derive(Debug, Clone, Serialize)]
pub struct CondensationReport {
    pub classes: Vec<Vec<String>>,
    pub order: Vec<[usize; 2]>,
}

impl CondensationPoset {
    /// Classes as label lists and the strict order as index pairs.
    pub fn report(&self, g: &DiGraph) -> CondensationReport {
        CondensationReport {
            classes: self.classes.iter().map(|c| c.iter().map(|&v| g.label(v).to_string()).collect()).collect(),
            order: self.poset.strict_pairs().into_iter().map(|(a, b)| [a, b]).collect(),
        }
    }
}

/// Collapses each strongly connected component of `g` to a point. Singleton
/// classes keep the vertex label; larger ones are written `{a,b,…}`.
pub fn condensation(g: &DiGraph) -> CondensationPoset {
    let s = scc(g);
    let labels: Vec<String> = s
        .classes
        .iter()
        .map(|c| {
            if c.len() == 1 {
                g.label(c[0]).to_string()
            } else {
                format!("{{{}}}", c.iter().map(|&v| g.label(v)).collect::<Vec<_>>().join(","))
            }
        })
        .collect();
    let poset = Preorder { labels, leq: s.reach };
    let quotient = MonotoneMap { source: reachability_preorder(g), target: poset.clone(), map: s.class_of.clone() };
    CondensationPoset { poset, classes: s.classes, class_of: s.class_of, quotient }
}

/// Componentwise order on `P × Q`; `(p,q)` has index `p·|Q| + q` and label `p|q`.
pub fn preorder_product(p: &Preorder, q: &Preorder) -> Preorder {
    let (n, m) = (p.len(), q.len());
    let mut leq = BitMatrix::new(n * m);
    for a in 0..n {
        for b in 0..n {
            if !p.leq(a, b) {
                continue;
            }
            for c in 0..m {
                for d in 0..m {
                    if q.leq(c, d) {
                        leq.set(a * m + c, b * m + d);
                    }
                }
            }
        }
    }
    let labels = p.labels().iter().flat_map(|a| q.labels().iter().map(move |b| format!("{a}|{b}"))).collect();
    Preorder { labels, leq }
}

/// Whether `f(x) ≤ g(x)` for every `x`.
pub fn nat_trans_exists(f: &MonotoneMap, g: &MonotoneMap) -> Result<bool> {
    if f.source != g.source || f.target != g.target {
        return Err(Error::Domain("maps have different sources or targets".into()));
    }
    Ok(f.map.iter().zip(&g.map).all(|(&a, &b)| f.target.leq(a, b)))
}

/// An up-closed `U ⊇ P` with a retraction `p: U → P` below the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DwyerWitness {
    /// Elements of `U`, as indices into the target preorder.
    pub u: Vec<usize>,
    /// `p[k]` is the source index of `p(u[k])`.
    pub p: Vec<usize>,
}

/// Largest target for which [`is_dwyer`] falls back to exhaustive search.
pub const DWYER_EXHAUSTIVE_MAX: usize = 12;

impl DwyerWitness {
    /// Checks the three defining conditions against `inc: P ↪ Q`.
    pub fn verify(&self, inc: &MonotoneMap) -> bool {
        let (q, src) = (&inc.target, &inc.source);
        let n = q.len();
        let mut in_p = vec![false; n];
        for &x in &inc.map {
            in_p[x] = true;
        }
        let mut in_u = vec![usize::MAX; n];
        for (k, &x) in self.u.iter().enumerate() {
            in_u[x] = k;
        }
        let sieve = (0..n).all(|x| !(0..n).any(|y| in_p[y] && q.leq(x, y) && !in_p[x]));
        let contains_p = inc.map.iter().all(|&x| in_u[x] != usize::MAX);
        let cosieve = self.u.iter().all(|&u| (0..n).all(|x| !q.leq(u, x) || in_u[x] != usize::MAX));
        let retraction = contains_p && (0..src.len()).all(|a| self.p[in_u[inc.map[a]]] == a);
        let below = self.u.iter().enumerate().all(|(k, &u)| q.leq(inc.map[self.p[k]], u));
        let monotone = self.u.iter().enumerate().all(|(k, &u)| {
            self.u.iter().enumerate().all(|(l, &v)| !q.leq(u, v) || src.leq(self.p[k], self.p[l]))
        });
        sieve && contains_p && cosieve && retraction && below && monotone
    }
}

/// Decides whether a full injective inclusion `P ↪ Q` is a Dwyer morphism,
/// returning a witness with `U` the up-closure of `P`.
pub fn is_dwyer(inc: &MonotoneMap) -> Result<Option<DwyerWitness>> {
    if !inc.is_injective() || !inc.is_full() {
        return Err(Error::Shape("Dwyer detection needs a full injective inclusion".into()));
    }
    let (q, src) = (&inc.target, &inc.source);
    let n = q.len();
    let mut pre_image = vec![usize::MAX; n];
    for (a, &x) in inc.map.iter().enumerate() {
        pre_image[x] = a;
    }
    for y in inc.map.iter().copied() {
        if (0..n).any(|x| q.leq(x, y) && pre_image[x] == usize::MAX) {
            return Ok(None);
        }
    }
    let u: Vec<usize> = (0..n).filter(|&x| inc.map.iter().any(|&y| q.leq(y, x))).collect();
    // Any admissible p(u) is a greatest element of D(u) = {a : a ≤ u}; points
    // outside the up-closure have D(u) empty, so U is forced.
    let below: Vec<Vec<usize>> =
        u.iter().map(|&x| (0..src.len()).filter(|&a| q.leq(inc.map[a], x)).collect()).collect();
    let mut p = Vec::with_capacity(u.len());
    for (k, &x) in u.iter().enumerate() {
        let choice = if pre_image[x] != usize::MAX {
            Some(pre_image[x])
        } else {
            below[k].iter().copied().find(|&a| below[k].iter().all(|&b| src.leq(b, a)))
        };
        match choice {
            Some(a) => p.push(a),
            None => {
                p.clear();
                break;
            }
        }
    }
    if p.len() == u.len() {
        let w = DwyerWitness { u: u.clone(), p };
        if w.verify(inc) {
            return Ok(Some(w));
        }
    }
    if n <= DWYER_EXHAUSTIVE_MAX {
        return Ok(exhaustive_retraction(inc, &u, &below, &pre_image));
    }
    Ok(None)
}

fn exhaustive_retraction(inc: &MonotoneMap, u: &[usize], below: &[Vec<usize>], pre_image: &[usize]) -> Option<DwyerWitness> {
    let (q, src) = (&inc.target, &inc.source);
    let mut p = vec![usize::MAX; u.len()];
    fn go(
        k: usize,
        u: &[usize],
        below: &[Vec<usize>],
        pre_image: &[usize],
        q: &Preorder,
        src: &Preorder,
        p: &mut Vec<usize>,
    ) -> bool {
        if k == u.len() {
            return true;
        }
        let options: Vec<usize> = if pre_image[u[k]] != usize::MAX { vec![pre_image[u[k]]] } else { below[k].clone() };
        for a in options {
            let ok = (0..k).all(|l| {
                (!q.leq(u[l], u[k]) || src.leq(p[l], a)) && (!q.leq(u[k], u[l]) || src.leq(a, p[l]))
            });
            if ok {
                p[k] = a;
                if go(k + 1, u, below, pre_image, q, src, p) {
                    return true;
                }
            }
        }
        false
    }
    if go(0, u, below, pre_image, q, src, &mut p) {
        let w = DwyerWitness { u: u.to_vec(), p };
        if w.verify(inc) {
            return Some(w);
        }
    }
    None
}
