//! Seeded generators of small digraphs, maps and gluing data for fuzzing.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cofib::is_long_cofibration;
use crate::digraph::{DiGraph, DiGraphMap};
use crate::preorder::reachability_preorder;

/// Deterministic generator used throughout the test suites.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` vertices `v0, v1, …`, each ordered pair an edge with probability `p`.
pub fn random_digraph<R: Rng>(rng: &mut R, n: usize, p: f64) -> DiGraph {
    random_labeled(rng, n, p, "v")
}

fn random_labeled<R: Rng>(rng: &mut R, n: usize, p: f64, prefix: &str) -> DiGraph {
    let mut g = DiGraph::new();
    for i in 0..n {
        g.add_vertex(format!("{prefix}{i}"));
    }
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.gen_bool(p) {
                g.add_edge(u, v);
            }
        }
    }
    g
}

/// Between 1 and `max_n` vertices with an edge density drawn from `[0.1, 0.6]`.
pub fn random_small_digraph<R: Rng>(rng: &mut R, max_n: usize) -> DiGraph {
    let n = rng.gen_range(1..=max_n.max(1));
    let p = rng.gen_range(0.1..0.6);
    random_digraph(rng, n, p)
}

// Backtracking search for a digraph map whose value at `v` lies in `allowed(v)`.
fn search_map<R: Rng>(rng: &mut R, g: &DiGraph, h: &DiGraph, allowed: &dyn Fn(usize) -> Vec<usize>) -> Option<Vec<usize>> {
    let n = g.n();
    let options: Vec<Vec<usize>> = (0..n)
        .map(|v| {
            let mut c = allowed(v);
            c.shuffle(rng);
            c
        })
        .collect();
    let ok = |map: &[usize], v: usize, c: usize| {
        g.edges().all(|(s, t)| {
            let (fs, ft) = if s == v && t == v {
                (c, c)
            } else if s == v && t < v {
                (c, map[t])
            } else if t == v && s < v {
                (map[s], c)
            } else {
                return true;
            };
            fs == ft || h.has_edge(fs, ft)
        })
    };
    let mut map = vec![usize::MAX; n];
    let mut cursor = vec![0usize; n];
    let mut v = 0;
    while v < n {
        let mut placed = false;
        while cursor[v] < options[v].len() {
            let c = options[v][cursor[v]];
            cursor[v] += 1;
            if ok(&map, v, c) {
                map[v] = c;
                placed = true;
                break;
            }
        }
        if placed {
            v += 1;
        } else {
            cursor[v] = 0;
            map[v] = usize::MAX;
            if v == 0 {
                return None;
            }
            v -= 1;
        }
    }
    Some(map)
}

/// A uniformly shuffled search for some digraph map `g → h`; `None` only when `h` is empty and `g` is not.
pub fn random_map<R: Rng>(rng: &mut R, g: &DiGraph, h: &DiGraph) -> Option<DiGraphMap> {
    let all: Vec<usize> = (0..h.n()).collect();
    let map = search_map(rng, g, h, &|_| all.clone())?;
    Some(DiGraphMap { source: g.clone(), target: h.clone(), map })
}

/// Maps `f, g: G → H` with `f(v)` reaching `g(v)` for every vertex.
pub fn random_homotopic_pair<R: Rng>(rng: &mut R, max_n: usize) -> (DiGraphMap, DiGraphMap) {
    let g = random_small_digraph(rng, max_n);
    let h = random_small_digraph(rng, max_n);
    let f = random_map(rng, &g, &h).expect("nonempty target");
    let pre = reachability_preorder(&h);
    let up = |v: usize| (0..h.n()).filter(|&w| pre.leq(f.map[v], w)).collect::<Vec<_>>();
    let map = search_map(rng, &g, &h, &up).expect("f itself qualifies");
    let second = DiGraphMap { source: g, target: h, map };
    (f, second)
}

/// An induced subgraph on `a` inside `x`.
#[derive(Debug, Clone)]
pub struct CofibrationInstance {
    pub x: DiGraph,
    pub a: Vec<usize>,
}

/// A long cofibration `A ↪ X` with `|X| ≤ max_n`.
///
/// `A` is a random digraph on the first vertices. Every further vertex is
/// either unrelated to `A` or assigned a target `π = a`, meaning exactly the
/// vertices of `A` below `a` reach it; edges only run from `u` to `v` when
/// the target set of `u` is contained in that of `v`, and never into `A`.
pub fn random_long_cofibration<R: Rng>(rng: &mut R, max_n: usize) -> CofibrationInstance {
    loop {
        let inst = long_cofibration_attempt(rng, max_n);
        if is_long_cofibration(&inst.x, &inst.a).expect("valid subset").is_some() {
            return inst;
        }
    }
}

fn long_cofibration_attempt<R: Rng>(rng: &mut R, max_n: usize) -> CofibrationInstance {
    let n = rng.gen_range(1..=max_n.max(1));
    let na = rng.gen_range(1..=n);
    let density = rng.gen_range(0.1..0.6);
    let base = random_labeled(rng, na, density, "a");
    let pre_a = reachability_preorder(&base);
    let mut x = base.clone();
    // below[v]: the vertices of A that should reach v.
    let mut below: Vec<Vec<bool>> = (0..na).map(|v| (0..na).map(|b| pre_a.leq(b, v)).collect()).collect();
    let mut target: Vec<Option<usize>> = (0..na).map(Some).collect();
    for k in na..n {
        x.add_vertex(format!("x{}", k - na));
        let t = if rng.gen_bool(0.25) { None } else { Some(rng.gen_range(0..na)) };
        below.push(match t {
            Some(a) => (0..na).map(|b| pre_a.leq(b, a)).collect(),
            None => vec![false; na],
        });
        target.push(t);
    }
    let subset = |u: usize, v: usize| below[u].iter().zip(&below[v]).all(|(&p, &q)| !p || q);
    let p = rng.gen_range(0.15..0.6);
    for u in 0..n {
        for v in na..n {
            if u != v && subset(u, v) && rng.gen_bool(p) {
                x.add_edge(u, v);
            }
        }
    }
    for v in na..n {
        if let Some(a) = target[v] {
            let pre = reachability_preorder(&x);
            if !pre.leq(a, v) {
                x.add_edge(a, v);
            }
        }
    }
    CofibrationInstance { x, a: (0..na).collect() }
}

/// A small random change to a long cofibration: an edge into `A` from
/// outside, an edge out of `A` to an unrelated vertex, or a vertex of `A`
/// dropped from the subset. The result may or may not still be one, and has
/// more vertices only when `X` is a single vertex.
pub fn perturb<R: Rng>(rng: &mut R, inst: &CofibrationInstance) -> CofibrationInstance {
    let mut x = inst.x.clone();
    let mut a = inst.a.clone();
    let n = x.n();
    let outside: Vec<usize> = (0..n).filter(|v| !a.contains(v)).collect();
    let mut moves = Vec::new();
    if !outside.is_empty() {
        moves.extend([0, 1]);
    }
    if a.len() > 1 {
        moves.push(2);
    }
    match moves.choose(rng) {
        Some(0) => {
            let u = *outside.choose(rng).expect("nonempty");
            let v = *a.choose(rng).expect("A is nonempty");
            x.add_edge(u, v);
        }
        Some(1) => {
            let u = *a.choose(rng).expect("A is nonempty");
            let v = *outside.choose(rng).expect("nonempty");
            x.add_edge(u, v);
        }
        Some(_) => {
            let k = rng.gen_range(0..a.len());
            a.remove(k);
        }
        // A single vertex: grow an edge into it.
        None => {
            let v = x.add_vertex("z");
            x.add_edge(v, a[0]);
        }
    }
    CofibrationInstance { x, a }
}

/// Data for a pushout `X ∪_A Y` along a long cofibration.
#[derive(Debug, Clone)]
pub struct GluingInstance {
    pub x: DiGraph,
    pub a: Vec<usize>,
    pub y: DiGraph,
    pub f: DiGraphMap,
}

/// `|X|, |Y| ≤ max_n`. `Y` contains the image of `f` (which may identify
/// vertices of `A`) plus extra vertices and random edges.
pub fn random_gluing<R: Rng>(rng: &mut R, max_n: usize) -> GluingInstance {
    let CofibrationInstance { x, a } = random_long_cofibration(rng, max_n);
    let sub = x.induced_subgraph_in_order(&a);
    let images = rng.gen_range(1..=a.len().min(max_n));
    let ny = rng.gen_range(images..=max_n.max(images));
    let density = rng.gen_range(0.1..0.5);
    let mut y = random_labeled(rng, ny, density, "y");
    let map: Vec<usize> = (0..a.len()).map(|_| rng.gen_range(0..images)).collect();
    for (u, v) in sub.edges() {
        if map[u] != map[v] {
            y.add_edge(map[u], map[v]);
        }
    }
    let f = DiGraphMap::new(sub, y.clone(), map).expect("total map");
    debug_assert!(f.is_valid());
    GluingInstance { x, a, y, f }
}
