//! Initial solutions and the density parameter that picks between them.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_bigint::BigUint;

use crate::graph::{Graph, Vertex, Weight};
use crate::reduce::{Reducer, RuleSet};

/// `r_G = min { ℓ : Σ_{i=0..ℓ} d̄^i ≥ n / 10 }` with `d̄ = 2m / n`.
///
/// The threshold test is done in exact integer arithmetic. When the series
/// converges below the threshold (only possible for `d̄ < 1`) the result is
/// capped at `n`.
pub fn compute_radius_parameter(g: &Graph) -> usize {
    let n = g.num_vertices();
    if n == 0 {
        return 0;
    }
    let (p, q) = g.average_degree_ratio();
    // For p < q the partial sums approach q / (q - p) from below and never
    // reach n / 10 when q - p >= 10.
    if p < q && q - p >= 10 {
        return n;
    }
    let reaches = |l: usize| series_reaches_threshold(p, q, l);
    if reaches(0) {
        return 0;
    }
    let (mut lo, mut hi) = (0usize, 1usize);
    while !reaches(hi) {
        if hi >= n {
            return n;
        }
        lo = hi;
        hi = (hi * 2).min(n);
    }
    // reaches(lo) is false, reaches(hi) is true.
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if reaches(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Whether `Σ_{i=0..l} (p/q)^i ≥ q / 10`, where `q = n`.
fn series_reaches_threshold(p: u64, q: u64, l: usize) -> bool {
    let l = u32::try_from(l).unwrap_or(u32::MAX);
    let (bp, bq) = (BigUint::from(p), BigUint::from(q));
    let ten = BigUint::from(10u32);
    if p == q {
        // Each term is one.
        return ten * BigUint::from(l as u64 + 1) >= bq;
    }
    // Σ (p/q)^i = (p^{l+1} − q^{l+1}) / (q^l (p − q)); both signs flip together.
    let pl = bp.pow(l + 1);
    let ql = bq.pow(l);
    let ql1 = &ql * &bq;
    if p > q {
        ten * (pl - ql1) >= &bq * ql * (&bp - &bq)
    } else {
        ten * (ql1 - pl) >= &bq * ql * (&bq - &bp)
    }
}

/// `σ(v) / √deg(v)` compared exactly as `σ(a)² · deg(b)` vs `σ(b)² · deg(a)`.
/// Degree zero compares above everything else.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct GreedyScore {
    weight: Weight,
    degree: usize,
    vertex: Vertex,
}

impl Ord for GreedyScore {
    fn cmp(&self, other: &Self) -> Ordering {
        let by_score = match (self.degree, other.degree) {
            (0, 0) => Ordering::Equal,
            (0, _) => Ordering::Greater,
            (_, 0) => Ordering::Less,
            (da, db) => {
                let lhs = (self.weight as i128).pow(2) * db as i128;
                let rhs = (other.weight as i128).pow(2) * da as i128;
                lhs.cmp(&rhs)
            }
        };
        // Max-heap: the smaller id wins ties.
        by_score.then_with(|| other.vertex.cmp(&self.vertex))
    }
}

impl PartialOrd for GreedyScore {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Repeatedly takes the surviving vertex with the highest `σ(v)/√deg(v)`
/// (degree measured in the shrinking graph) and deletes its closed
/// neighborhood. Returns a maximal independent set, sorted.
pub fn greedy_initial(g: &Graph) -> Vec<Vertex> {
    let n = g.num_vertices();
    let mut degree: Vec<usize> = g.vertices().map(|v| g.degree(v)).collect();
    let mut alive = vec![true; n];
    let mut heap: BinaryHeap<GreedyScore> =
        g.vertices().map(|v| GreedyScore { weight: g.weight(v), degree: degree[v], vertex: v }).collect();
    let mut solution = Vec::new();
    while let Some(top) = heap.pop() {
        let v = top.vertex;
        if !alive[v] || degree[v] != top.degree {
            continue;
        }
        solution.push(v);
        alive[v] = false;
        for &u in g.neighbors(v) {
            if !alive[u] {
                continue;
            }
            alive[u] = false;
            for &w in g.neighbors(u) {
                if alive[w] {
                    degree[w] -= 1;
                    heap.push(GreedyScore { weight: g.weight(w), degree: degree[w], vertex: w });
                }
            }
        }
    }
    solution.sort_unstable();
    solution
}

/// Reduce-and-tie-break construction: apply the degree-zero, degree-one and
/// neighborhood-removal rules exhaustively; when they stall, take the vertex
/// maximizing `σ(v) − σ(N(v))` and delete its neighborhood; repeat.
pub fn rtbf_initial(g: &Graph) -> Vec<Vertex> {
    let mut reducer = Reducer::new(g, RuleSet::CHEAP);
    loop {
        reducer.run_to_fixpoint(None);
        match reducer.tie_break_vertex() {
            Some(v) => reducer.force_take(v),
            None => break,
        }
    }
    debug_assert!(reducer.is_empty());
    reducer.into_kernel().lift(&[]).expect("empty kernel solution")
}

/// Picks the reduce-and-tie-break constructor for sparse graphs
/// (`r_G > 2`) and the greedy one otherwise.
pub fn cis(g: &Graph, radius_parameter: usize) -> Vec<Vertex> {
    if radius_parameter > 2 {
        rtbf_initial(g)
    } else {
        greedy_initial(g)
    }
}
