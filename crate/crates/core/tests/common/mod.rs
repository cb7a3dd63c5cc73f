#![allow(dead_code)]

use std::collections::VecDeque;

use dynls::{Graph, Vertex, Weight};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `G(n, p)` with weights uniform on `1..=200`.
pub fn gnp(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    let weights = (0..n).map(|_| rng.gen_range(1..=200)).collect();
    Graph::new(n, &edges, weights).unwrap()
}

/// `m` distinct random edges, weights uniform on `1..=200`. Fast for large sparse graphs.
pub fn gnm(rng: &mut ChaCha8Rng, n: usize, m: usize) -> Graph {
    let mut seen = std::collections::HashSet::with_capacity(m);
    let mut edges = Vec::with_capacity(m);
    while edges.len() < m {
        let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if u != v && seen.insert((u.min(v), u.max(v))) {
            edges.push((u, v));
        }
    }
    let weights = (0..n).map(|_| rng.gen_range(1..=200)).collect();
    Graph::new(n, &edges, weights).unwrap()
}

/// A random maximal independent set: scan vertices in shuffled order.
pub fn random_maximal_is(rng: &mut ChaCha8Rng, g: &Graph) -> Vec<Vertex> {
    let mut order: Vec<Vertex> = g.vertices().collect();
    order.shuffle(rng);
    let mut blocked = vec![false; g.num_vertices()];
    let mut set = Vec::new();
    for v in order {
        if !blocked[v] {
            set.push(v);
            blocked[v] = true;
            for &u in g.neighbors(v) {
                blocked[u] = true;
            }
        }
    }
    set.sort_unstable();
    set
}

/// Pairwise independence check over every pair, no adjacency shortcuts.
pub fn independent_full_scan(g: &Graph, set: &[Vertex]) -> bool {
    let edges: std::collections::HashSet<(Vertex, Vertex)> = g.edges().collect();
    for (i, &a) in set.iter().enumerate() {
        for &b in &set[i + 1..] {
            if a == b || edges.contains(&(a.min(b), a.max(b))) {
                return false;
            }
        }
    }
    true
}

pub fn weight(g: &Graph, set: &[Vertex]) -> Weight {
    set.iter().map(|&v| g.weight(v)).sum()
}

/// BFS distances from `source`, `usize::MAX` when unreachable.
pub fn distances(g: &Graph, source: Vertex) -> Vec<usize> {
    let mut dist = vec![usize::MAX; g.num_vertices()];
    dist[source] = 0;
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        for &w in g.neighbors(u) {
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

pub fn median(xs: &mut [f64]) -> f64 {
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        (xs[n / 2 - 1] + xs[n / 2]) / 2.0
    }
}
