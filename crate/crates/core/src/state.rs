//! Current-solution bookkeeping for the local search.
//!
//! Every vertex carries its tightness (number of solution neighbors) and the
//! weight of its solution neighbors, so `loss(v) = σ(N(v) ∩ CS) − σ(v)` is
//! available in O(1). Adding or removing a vertex costs O(deg).

use thiserror::Error;

use crate::graph::{Graph, Vertex, VertexSet, Weight};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StateError {
    #[error("vertex {0} is already in the solution")]
    AlreadyInSolution(Vertex),
    #[error("vertex {0} is not in the solution")]
    NotInSolution(Vertex),
    #[error("vertex {v} is not free (tightness {tightness})")]
    NotFree { v: Vertex, tightness: u32 },
    #[error("initial set is not independent: {0} and {1} are adjacent")]
    NotIndependent(Vertex, Vertex),
    #[error("vertex {0} is out of range")]
    OutOfRange(Vertex),
}

/// Per-vertex search statistics consumed by the perturbation scores and
/// the region locator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct VertexStats {
    /// Number of times the vertex entered or left the solution.
    pub freq: u64,
    /// Iterations since the vertex last changed state.
    pub age: u64,
    /// Adds minus removes.
    pub change: i64,
}

#[derive(Debug, Clone)]
pub struct SolutionState<'g> {
    graph: &'g Graph,
    cs: VertexSet,
    outside: VertexSet,
    free: VertexSet,
    improving: VertexSet,
    cs_weight: Weight,
    tightness: Vec<u32>,
    adjacent_weight: Vec<Weight>,
    freq: Vec<u64>,
    last_visit: Vec<u64>,
    change: Vec<i64>,
    iter: u64,
    uiter: u64,
}

impl<'g> SolutionState<'g> {
    pub fn new(graph: &'g Graph, initial: &[Vertex]) -> Result<Self, StateError> {
        let n = graph.num_vertices();
        let mut state = SolutionState {
            graph,
            cs: VertexSet::new(n),
            outside: VertexSet::full(n),
            free: VertexSet::full(n),
            improving: VertexSet::full(n),
            cs_weight: 0,
            tightness: vec![0; n],
            adjacent_weight: vec![0; n],
            freq: vec![0; n],
            last_visit: vec![0; n],
            change: vec![0; n],
            iter: 0,
            uiter: 0,
        };
        state.assign(initial)?;
        Ok(state)
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    /// Replaces the solution with `solution`, recomputing every derived field.
    /// Statistics and iteration counters are kept.
    pub fn assign(&mut self, solution: &[Vertex]) -> Result<(), StateError> {
        let g = self.graph;
        let n = g.num_vertices();
        let mut member = vec![false; n];
        for &v in solution {
            if v >= n {
                return Err(StateError::OutOfRange(v));
            }
            member[v] = true;
        }
        for &v in solution {
            if let Some(&u) = g.neighbors(v).iter().find(|&&u| member[u]) {
                return Err(StateError::NotIndependent(v.min(u), v.max(u)));
            }
        }
        self.cs.clear();
        self.outside.clear();
        self.free.clear();
        self.improving.clear();
        self.cs_weight = 0;
        self.tightness.iter_mut().for_each(|t| *t = 0);
        self.adjacent_weight.iter_mut().for_each(|w| *w = 0);
        for v in g.vertices() {
            if member[v] {
                self.cs.insert(v);
                self.cs_weight += g.weight(v);
                for &u in g.neighbors(v) {
                    self.tightness[u] += 1;
                    self.adjacent_weight[u] += g.weight(v);
                }
            }
        }
        for v in g.vertices() {
            if !member[v] {
                self.outside.insert(v);
                self.refresh(v);
            }
        }
        Ok(())
    }

    #[inline]
    fn refresh(&mut self, v: Vertex) {
        if self.cs.contains(v) {
            self.free.remove(v);
            self.improving.remove(v);
            return;
        }
        if self.tightness[v] == 0 {
            self.free.insert(v);
        } else {
            self.free.remove(v);
        }
        if self.adjacent_weight[v] < self.graph.weight(v) {
            self.improving.insert(v);
        } else {
            self.improving.remove(v);
        }
    }

    #[inline]
    fn visit(&mut self, v: Vertex) {
        self.freq[v] += 1;
        self.last_visit[v] = self.iter;
    }

    pub fn add_vertex(&mut self, v: Vertex) -> Result<(), StateError> {
        if v >= self.graph.num_vertices() {
            return Err(StateError::OutOfRange(v));
        }
        if self.cs.contains(v) {
            return Err(StateError::AlreadyInSolution(v));
        }
        if self.tightness[v] != 0 {
            return Err(StateError::NotFree { v, tightness: self.tightness[v] });
        }
        let w = self.graph.weight(v);
        self.cs.insert(v);
        self.outside.remove(v);
        self.cs_weight += w;
        for &u in self.graph.neighbors(v) {
            self.tightness[u] += 1;
            self.adjacent_weight[u] += w;
            self.refresh(u);
        }
        self.refresh(v);
        self.visit(v);
        self.change[v] += 1;
        Ok(())
    }

    pub fn remove_vertex(&mut self, v: Vertex) -> Result<(), StateError> {
        if !self.cs.contains(v) {
            return Err(StateError::NotInSolution(v));
        }
        let w = self.graph.weight(v);
        self.cs.remove(v);
        self.outside.insert(v);
        self.cs_weight -= w;
        for &u in self.graph.neighbors(v) {
            self.tightness[u] -= 1;
            self.adjacent_weight[u] -= w;
            self.refresh(u);
        }
        self.refresh(v);
        self.visit(v);
        self.change[v] -= 1;
        Ok(())
    }

    /// Evicts the solution neighbors of `v` and adds `v`. Returns the evicted
    /// vertices in ascending order. The weight changes by `−loss(v)`.
    pub fn insert_with_removal(&mut self, v: Vertex) -> Result<Vec<Vertex>, StateError> {
        if v >= self.graph.num_vertices() {
            return Err(StateError::OutOfRange(v));
        }
        if self.cs.contains(v) {
            return Err(StateError::AlreadyInSolution(v));
        }
        let removed: Vec<Vertex> = self.graph.neighbors(v).iter().copied().filter(|&u| self.cs.contains(u)).collect();
        for &u in &removed {
            self.remove_vertex(u)?;
        }
        self.add_vertex(v)?;
        Ok(removed)
    }

    /// Adds free vertices heaviest first (ties by smallest id) until none is
    /// left. Returns the number added.
    pub fn maximize(&mut self) -> usize {
        if self.free.is_empty() {
            return 0;
        }
        let g = self.graph;
        let mut order = self.free.as_slice().to_vec();
        order.sort_unstable_by_key(|&v| (std::cmp::Reverse(g.weight(v)), v));
        let mut added = 0;
        for v in order {
            if self.tightness[v] == 0 && !self.cs.contains(v) {
                self.add_vertex(v).expect("free vertex");
                added += 1;
            }
        }
        added
    }

    /// Ends an iteration: every vertex not visited since the last tick ages by one.
    pub fn tick(&mut self, improved: bool) {
        self.iter += 1;
        self.uiter = if improved { 0 } else { self.uiter + 1 };
    }

    #[inline]
    pub fn contains(&self, v: Vertex) -> bool {
        self.cs.contains(v)
    }

    pub fn solution(&self) -> &VertexSet {
        &self.cs
    }

    pub fn sorted_solution(&self) -> Vec<Vertex> {
        self.cs.to_sorted_vec()
    }

    /// Vertices outside the solution.
    pub fn outside(&self) -> &VertexSet {
        &self.outside
    }

    pub fn free_pool(&self) -> &VertexSet {
        &self.free
    }

    /// Non-solution vertices with negative loss.
    pub fn improving(&self) -> &VertexSet {
        &self.improving
    }

    #[inline]
    pub fn weight(&self) -> Weight {
        self.cs_weight
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.cs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cs.is_empty()
    }

    /// Number of solution neighbors of `v`.
    #[inline]
    pub fn tightness(&self, v: Vertex) -> u32 {
        self.tightness[v]
    }

    /// `σ(N(v) ∩ CS) − σ(v)`.
    #[inline]
    pub fn loss(&self, v: Vertex) -> Weight {
        self.adjacent_weight[v] - self.graph.weight(v)
    }

    #[inline]
    pub fn freq(&self, v: Vertex) -> u64 {
        self.freq[v]
    }

    #[inline]
    pub fn age(&self, v: Vertex) -> u64 {
        self.iter - self.last_visit[v]
    }

    #[inline]
    pub fn change(&self, v: Vertex) -> i64 {
        self.change[v]
    }

    pub fn stats(&self, v: Vertex) -> VertexStats {
        VertexStats { freq: self.freq[v], age: self.age(v), change: self.change[v] }
    }

    pub fn iter(&self) -> u64 {
        self.iter
    }

    pub fn uiter(&self) -> u64 {
        self.uiter
    }

    /// Recomputes every derived field from scratch and compares it with the
    /// incremental values. Returns a description of the first mismatch.
    pub fn check_consistency(&self) -> Result<(), String> {
        let g = self.graph;
        let sol = self.cs.as_slice();
        if !g.is_independent(sol) {
            return Err("solution is not independent".into());
        }
        if g.weight_of(sol) != self.cs_weight {
            return Err(format!("cs_weight {} != {}", self.cs_weight, g.weight_of(sol)));
        }
        for v in g.vertices() {
            let t = g.neighbors(v).iter().filter(|&&u| self.cs.contains(u)).count() as u32;
            let aw: Weight = g.neighbors(v).iter().filter(|&&u| self.cs.contains(u)).map(|&u| g.weight(u)).sum();
            if t != self.tightness[v] || aw != self.adjacent_weight[v] {
                return Err(format!("vertex {v}: tightness/adjacent weight drifted"));
            }
            let inside = self.cs.contains(v);
            if self.outside.contains(v) == inside {
                return Err(format!("vertex {v}: outside set drifted"));
            }
            if self.free.contains(v) != (!inside && t == 0) {
                return Err(format!("vertex {v}: free pool drifted"));
            }
            if self.improving.contains(v) != (!inside && aw < g.weight(v)) {
                return Err(format!("vertex {v}: improving set drifted"));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p3() -> Graph {
        Graph::new(3, &[(0, 1), (1, 2)], vec![1, 5, 1]).unwrap()
    }

    fn c4() -> Graph {
        Graph::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0)], vec![3, 1, 3, 1]).unwrap()
    }

    #[test]
    fn construction_examples() {
        let g = p3();
        let s = SolutionState::new(&g, &[0, 2]).unwrap();
        assert_eq!(s.weight(), 2);
        assert_eq!(s.tightness(1), 2);
        assert_eq!(s.loss(1), -3);
        assert!(s.free_pool().is_empty());

        let s = SolutionState::new(&g, &[]).unwrap();
        assert_eq!(s.free_pool().to_sorted_vec(), vec![0, 1, 2]);
        assert!(g.vertices().all(|v| s.loss(v) == -g.weight(v)));
        assert!(g.vertices().all(|v| s.stats(v) == VertexStats::default()));

        let g = c4();
        let s = SolutionState::new(&g, &[0, 2]).unwrap();
        assert_eq!(s.weight(), 6);
        assert_eq!((s.tightness(1), s.tightness(3)), (2, 2));

        assert_eq!(SolutionState::new(&g, &[0, 1]).unwrap_err(), StateError::NotIndependent(0, 1));
    }

    #[test]
    fn add_remove_examples() {
        let g = p3();
        let mut s = SolutionState::new(&g, &[]).unwrap();
        s.add_vertex(1).unwrap();
        assert_eq!(s.weight(), 5);
        assert_eq!((s.tightness(0), s.tightness(2)), (1, 1));

        let mut s = SolutionState::new(&g, &[0]).unwrap();
        s.add_vertex(2).unwrap();
        assert_eq!(s.weight(), 2);

        let mut s = SolutionState::new(&g, &[0]).unwrap();
        assert_eq!(s.add_vertex(1), Err(StateError::NotFree { v: 1, tightness: 1 }));
        assert_eq!(s.add_vertex(0), Err(StateError::AlreadyInSolution(0)));

        let mut s = SolutionState::new(&g, &[1]).unwrap();
        s.remove_vertex(1).unwrap();
        assert!(s.is_empty());
        assert_eq!(s.free_pool().len(), 3);

        let g4 = c4();
        let mut s = SolutionState::new(&g4, &[0, 2]).unwrap();
        s.remove_vertex(0).unwrap();
        assert_eq!((s.tightness(1), s.tightness(3)), (1, 1));

        let mut s = SolutionState::new(&g, &[]).unwrap();
        assert_eq!(s.remove_vertex(0), Err(StateError::NotInSolution(0)));
    }

    #[test]
    fn insert_with_removal_examples() {
        let g = p3();
        let mut s = SolutionState::new(&g, &[0, 2]).unwrap();
        assert_eq!(s.insert_with_removal(1).unwrap(), vec![0, 2]);
        assert_eq!(s.sorted_solution(), vec![1]);
        assert_eq!(s.weight(), 5);

        let mut s = SolutionState::new(&g, &[]).unwrap();
        assert!(s.insert_with_removal(0).unwrap().is_empty());
        assert_eq!(s.sorted_solution(), vec![0]);

        let g4 = c4();
        let mut s = SolutionState::new(&g4, &[1, 3]).unwrap();
        assert_eq!(s.insert_with_removal(0).unwrap(), vec![1, 3]);
        assert_eq!(s.weight(), 3);
        assert_eq!(s.insert_with_removal(0), Err(StateError::AlreadyInSolution(0)));
    }

    #[test]
    fn maximize_examples() {
        let g = p3();
        let mut s = SolutionState::new(&g, &[]).unwrap();
        assert_eq!(s.maximize(), 1);
        assert_eq!(s.sorted_solution(), vec![1]);
        assert_eq!(s.maximize(), 0);

        let g4 = c4();
        let mut s = SolutionState::new(&g4, &[]).unwrap();
        assert_eq!(s.maximize(), 2);
        assert_eq!(s.weight(), 6);
    }

    #[test]
    fn tick_examples() {
        let g = p3();
        let mut s = SolutionState::new(&g, &[]).unwrap();
        for _ in 0..3 {
            s.tick(false);
        }
        assert_eq!(s.uiter(), 3);
        assert!(g.vertices().all(|v| s.age(v) == 3));
        s.tick(true);
        assert_eq!(s.uiter(), 0);

        s.add_vertex(0).unwrap();
        s.tick(false);
        assert_eq!(s.age(0), 1);
        assert_eq!(s.age(1), 5);
    }

    #[test]
    fn random_operation_sequences_stay_consistent() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let n = rng.gen_range(1..=50);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.15) {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::new(n, &edges, (0..n).map(|_| rng.gen_range(1..=200)).collect()).unwrap();
            let mut s = SolutionState::new(&g, &[]).unwrap();
            let mut adds = vec![0i64; n];
            let mut removes = vec![0i64; n];
            for _ in 0..1000 {
                let v = rng.gen_range(0..n);
                match rng.gen_range(0..4) {
                    0 => {
                        if s.add_vertex(v).is_ok() {
                            adds[v] += 1;
                        }
                    }
                    1 => {
                        if s.remove_vertex(v).is_ok() {
                            removes[v] += 1;
                        }
                    }
                    2 => {
                        if !s.contains(v) {
                            let before = s.weight();
                            let loss = s.loss(v);
                            for u in s.insert_with_removal(v).unwrap() {
                                removes[u] += 1;
                            }
                            adds[v] += 1;
                            assert_eq!(s.weight() - before, -loss);
                        }
                    }
                    _ => {
                        let before = s.weight();
                        let snapshot: Vec<_> = s.free_pool().to_sorted_vec();
                        s.maximize();
                        for u in snapshot.into_iter().filter(|&u| s.contains(u)) {
                            adds[u] += 1;
                        }
                        assert!(s.weight() >= before);
                        assert!(s.free_pool().is_empty());
                    }
                }
                s.check_consistency().unwrap();
            }
            for v in 0..n {
                assert_eq!(s.change(v), adds[v] - removes[v]);
            }
        }
    }
}
