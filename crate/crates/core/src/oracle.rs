//! Exact maximum weighted independent set for small graphs.
//!
//! Both solvers return the optimum that is lexicographically smallest as a
//! sorted vertex list. For sets of equal weight this is the set that
//! contains the smallest vertex of their symmetric difference.

use thiserror::Error;

use crate::graph::{Graph, Vertex, Weight};

pub const MAX_BRANCH_AND_BOUND_VERTICES: usize = 32;
pub const MAX_EXHAUSTIVE_VERTICES: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("exact solver supports at most {limit} vertices, graph has {n}")]
pub struct TooLarge {
    pub n: usize,
    pub limit: usize,
}

/// `a` precedes `b` when the lowest vertex on which they differ belongs to `a`.
fn lex_smaller(a: u32, b: u32) -> bool {
    let diff = a ^ b;
    diff != 0 && a & (diff & diff.wrapping_neg()) != 0
}

fn mask_to_vec(mask: u32) -> Vec<Vertex> {
    (0..32).filter(|&i| mask & (1 << i) != 0).collect()
}

fn adjacency_masks(g: &Graph) -> Vec<u32> {
    g.vertices()
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &u| m | (1 << u)))
        .collect()
}

struct BranchAndBound<'a> {
    adj: &'a [u32],
    weights: &'a [Weight],
    best_mask: u32,
    best_weight: Weight,
}

impl BranchAndBound<'_> {
    fn mask_weight(&self, mut mask: u32) -> Weight {
        let mut total = 0;
        while mask != 0 {
            let v = mask.trailing_zeros() as usize;
            total += self.weights[v];
            mask &= mask - 1;
        }
        total
    }

    fn offer(&mut self, mask: u32, weight: Weight) {
        if weight > self.best_weight || (weight == self.best_weight && lex_smaller(mask, self.best_mask)) {
            self.best_weight = weight;
            self.best_mask = mask;
        }
    }

    fn search(&mut self, mut candidates: u32, mut chosen: u32, mut weight: Weight) {
        // Vertices without candidate neighbors belong to every optimum of the
        // remaining subproblem.
        loop {
            let mut isolated = 0u32;
            let mut rest = candidates;
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                if self.adj[v] & candidates == 0 {
                    isolated |= 1 << v;
                }
            }
            if isolated == 0 {
                break;
            }
            candidates &= !isolated;
            chosen |= isolated;
            weight += self.mask_weight(isolated);
        }
        if candidates == 0 {
            self.offer(chosen, weight);
            return;
        }
        // Ties have to be explored for the lexicographic rule, so only a
        // strictly smaller bound prunes.
        if weight + self.mask_weight(candidates) < self.best_weight {
            return;
        }
        let mut pivot = candidates.trailing_zeros() as usize;
        let mut pivot_degree = 0;
        let mut rest = candidates;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let d = (self.adj[v] & candidates).count_ones();
            if d > pivot_degree {
                pivot = v;
                pivot_degree = d;
            }
        }
        let bit = 1u32 << pivot;
        self.search(candidates & !bit & !self.adj[pivot], chosen | bit, weight + self.weights[pivot]);
        self.search(candidates & !bit, chosen, weight);
    }
}

/// Exact optimum by branch and bound on the highest-degree candidate with a
/// weight-sum bound. Graphs with more than 32 vertices are rejected.
pub fn brute_force_mwis(g: &Graph) -> Result<(Vec<Vertex>, Weight), TooLarge> {
    let n = g.num_vertices();
    if n > MAX_BRANCH_AND_BOUND_VERTICES {
        return Err(TooLarge { n, limit: MAX_BRANCH_AND_BOUND_VERTICES });
    }
    let adj = adjacency_masks(g);
    let mut bb = BranchAndBound { adj: &adj, weights: g.weights(), best_mask: 0, best_weight: 0 };
    let all = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    bb.search(all, 0, 0);
    Ok((mask_to_vec(bb.best_mask), bb.best_weight))
}

/// Enumerates all `2^n` subsets. Only meant to check [`brute_force_mwis`].
pub fn exhaustive_mwis(g: &Graph) -> Result<(Vec<Vertex>, Weight), TooLarge> {
    let n = g.num_vertices();
    if n > MAX_EXHAUSTIVE_VERTICES {
        return Err(TooLarge { n, limit: MAX_EXHAUSTIVE_VERTICES });
    }
    let adj = adjacency_masks(g);
    let (mut best_mask, mut best_weight) = (0u32, 0);
    for mask in 0u32..(1u32 << n) {
        let independent = (0..n).all(|v| mask & (1 << v) == 0 || adj[v] & mask == 0);
        if !independent {
            continue;
        }
        let weight: Weight = (0..n).filter(|&v| mask & (1 << v) != 0).map(|v| g.weight(v)).sum();
        if weight > best_weight || (weight == best_weight && lex_smaller(mask, best_mask)) {
            best_mask = mask;
            best_weight = weight;
        }
    }
    Ok((mask_to_vec(best_mask), best_weight))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
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

    #[test]
    fn small_examples() {
        let p3 = Graph::new(3, &[(0, 1), (1, 2)], vec![1, 5, 1]).unwrap();
        assert_eq!(brute_force_mwis(&p3).unwrap(), (vec![1], 5));
        let c4 = Graph::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0)], vec![3, 1, 3, 1]).unwrap();
        assert_eq!(brute_force_mwis(&c4).unwrap(), (vec![0, 2], 6));
        let edgeless = Graph::new(3, &[], vec![1, 2, 3]).unwrap();
        assert_eq!(brute_force_mwis(&edgeless).unwrap(), (vec![0, 1, 2], 6));
        let k3 = Graph::new(3, &[(0, 1), (1, 2), (0, 2)], vec![1, 2, 3]).unwrap();
        assert_eq!(exhaustive_mwis(&k3).unwrap(), (vec![2], 3));
        let empty = Graph::new(0, &[], vec![]).unwrap();
        assert_eq!(exhaustive_mwis(&empty).unwrap(), (vec![], 0));
        assert_eq!(brute_force_mwis(&empty).unwrap(), (vec![], 0));
    }

    #[test]
    fn size_guards() {
        let big = Graph::new(33, &[], vec![1; 33]).unwrap();
        assert_eq!(brute_force_mwis(&big), Err(TooLarge { n: 33, limit: 32 }));
        let mid = Graph::new(21, &[], vec![1; 21]).unwrap();
        assert!(exhaustive_mwis(&mid).is_err());
        let full = Graph::new(32, &[], vec![2; 32]).unwrap();
        assert_eq!(brute_force_mwis(&full).unwrap().1, 64);
    }

    #[test]
    fn ties_pick_lexicographically_smallest() {
        // 0 and 1 are interchangeable; {0, 2} beats {1, 2}.
        let g = Graph::new(3, &[(0, 1)], vec![4, 4, 1]).unwrap();
        assert_eq!(brute_force_mwis(&g).unwrap(), (vec![0, 2], 5));
        // {0} vs {1, 2} with equal weight: 0 is the smallest differing vertex.
        let g = Graph::new(3, &[(0, 1), (0, 2)], vec![2, 1, 1]).unwrap();
        assert_eq!(brute_force_mwis(&g).unwrap(), (vec![0], 2));
        assert_eq!(exhaustive_mwis(&g).unwrap(), (vec![0], 2));
    }

    #[test]
    fn agrees_with_exhaustive_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for i in 0..1000 {
            let n = rng.gen_range(0..=16);
            let p = [0.1, 0.2, 0.3, 0.4, 0.5][i % 5];
            let g = random_graph(&mut rng, n, p);
            let (set, weight) = brute_force_mwis(&g).unwrap();
            assert_eq!((set.clone(), weight), exhaustive_mwis(&g).unwrap());
            assert!(g.is_independent(&set));
            assert_eq!(g.weight_of(&set), weight);
        }
    }
}
