//! Immutable vertex-weighted undirected graphs and dense vertex sets.

use std::collections::VecDeque;

use thiserror::Error;

/// Dense 0-based vertex identifier.
pub type Vertex = usize;

/// Vertex weights and solution weights. 64 bits keep sums exact on every
/// benchmark-sized instance.
pub type Weight = i64;

/// A subgraph with its old→new and new→old vertex maps.
pub type InducedSubgraph = (Graph, Vec<Option<Vertex>>, Vec<Vertex>);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edge ({0}, {1}) has an endpoint outside 0..{2}")]
    EndpointOutOfRange(usize, usize, usize),
    #[error("vertex {0} has non-positive weight {1}")]
    NonPositiveWeight(Vertex, Weight),
    #[error("expected {expected} weights, got {got}")]
    WeightCountMismatch { expected: usize, got: usize },
    #[error("vertex {0} is out of range for a graph with {1} vertices")]
    VertexOutOfRange(Vertex, usize),
}

/// A simple undirected graph with positive integer vertex weights, stored in
/// compressed adjacency form. Neighbor lists are sorted and duplicate free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<Vertex>,
    weights: Vec<Weight>,
}

impl Graph {
    /// Builds a graph from an edge list. Duplicate edges (in either
    /// orientation) are collapsed and self-loops are dropped.
    pub fn new(n: usize, edges: &[(Vertex, Vertex)], weights: Vec<Weight>) -> Result<Self, GraphError> {
        if weights.len() != n {
            return Err(GraphError::WeightCountMismatch { expected: n, got: weights.len() });
        }
        if let Some((v, &w)) = weights.iter().enumerate().find(|(_, &w)| w < 1) {
            return Err(GraphError::NonPositiveWeight(v, w));
        }
        let mut adj: Vec<Vec<Vertex>> = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::EndpointOutOfRange(u, v, n));
            }
            if u != v {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        Ok(Self::from_adjacency(adj, weights))
    }

    /// Builds a graph from per-vertex neighbor lists that are already known to
    /// be symmetric and in range. Lists are sorted and deduplicated here.
    pub(crate) fn from_adjacency(mut adj: Vec<Vec<Vertex>>, weights: Vec<Weight>) -> Self {
        debug_assert_eq!(adj.len(), weights.len());
        let mut offsets = Vec::with_capacity(adj.len() + 1);
        offsets.push(0);
        let mut targets = Vec::new();
        for (v, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            list.dedup();
            list.retain(|&u| u != v);
            targets.extend_from_slice(list);
            offsets.push(targets.len());
        }
        Self { offsets, targets, weights }
    }

    pub fn num_vertices(&self) -> usize {
        self.weights.len()
    }

    pub fn num_edges(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.num_vertices()
    }

    #[inline]
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Checked variant of [`Graph::neighbors`].
    pub fn try_neighbors(&self, v: Vertex) -> Result<&[Vertex], GraphError> {
        self.check_vertex(v)?;
        Ok(self.neighbors(v))
    }

    #[inline]
    pub fn degree(&self, v: Vertex) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn max_degree(&self) -> usize {
        self.vertices().map(|v| self.degree(v)).max().unwrap_or(0)
    }

    #[inline]
    pub fn weight(&self, v: Vertex) -> Weight {
        self.weights[v]
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    pub fn total_weight(&self) -> Weight {
        self.weights.iter().sum()
    }

    /// Sum of the weights of `vertices`.
    pub fn weight_of<'a>(&self, vertices: impl IntoIterator<Item = &'a Vertex>) -> Weight {
        vertices.into_iter().map(|&v| self.weights[v]).sum()
    }

    #[inline]
    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        let (a, b) = if self.degree(u) <= self.degree(v) { (u, v) } else { (v, u) };
        self.neighbors(a).binary_search(&b).is_ok()
    }

    /// Average degree `2m / n` as a reduced-free fraction `(2m, n)`.
    pub fn average_degree_ratio(&self) -> (u64, u64) {
        (self.targets.len() as u64, self.num_vertices() as u64)
    }

    /// Average degree `2m / n`; zero for the empty graph.
    pub fn average_degree(&self) -> f64 {
        if self.is_empty() {
            0.0
        } else {
            self.targets.len() as f64 / self.num_vertices() as f64
        }
    }

    /// Unweighted BFS distances from `source`, `None` for unreachable vertices.
    pub fn bfs_distances(&self, source: Vertex) -> Result<Vec<Option<usize>>, GraphError> {
        self.check_vertex(source)?;
        let mut dist = vec![None; self.num_vertices()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap_or(0);
            for &w in self.neighbors(u) {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        Ok(dist)
    }

    /// Vertices at BFS distance exactly `level` from `source`, ascending.
    pub fn level_neighborhood(&self, source: Vertex, level: usize) -> Result<Vec<Vertex>, GraphError> {
        self.check_vertex(source)?;
        let mut seen = vec![false; self.num_vertices()];
        seen[source] = true;
        let mut frontier = vec![source];
        for _ in 0..level {
            let mut next = Vec::new();
            for &u in &frontier {
                for &w in self.neighbors(u) {
                    if !seen[w] {
                        seen[w] = true;
                        next.push(w);
                    }
                }
            }
            if next.is_empty() {
                return Ok(next);
            }
            frontier = next;
        }
        frontier.sort_unstable();
        Ok(frontier)
    }

    /// Subgraph induced by `keep`. Returns the subgraph, the old→new map
    /// (`None` for dropped vertices) and the new→old map. New ids follow the
    /// order of `keep`.
    pub fn induced_subgraph(&self, keep: &[Vertex]) -> Result<InducedSubgraph, GraphError> {
        let mut to_new = vec![None; self.num_vertices()];
        let mut to_old = Vec::with_capacity(keep.len());
        for &v in keep {
            self.check_vertex(v)?;
            if to_new[v].is_none() {
                to_new[v] = Some(to_old.len());
                to_old.push(v);
            }
        }
        let adj = to_old
            .iter()
            .map(|&v| self.neighbors(v).iter().filter_map(|&u| to_new[u]).collect())
            .collect();
        let weights = to_old.iter().map(|&v| self.weights[v]).collect();
        Ok((Graph::from_adjacency(adj, weights), to_new, to_old))
    }

    /// Whether `set` contains no edge. Vertices outside the graph make the
    /// answer `false`.
    pub fn is_independent(&self, set: &[Vertex]) -> bool {
        let mut member = vec![false; self.num_vertices()];
        for &v in set {
            if v >= self.num_vertices() || member[v] {
                return false;
            }
            member[v] = true;
        }
        set.iter().all(|&v| self.neighbors(v).iter().all(|&u| !member[u]))
    }

    /// Whether `set` is independent and no vertex outside it could be added.
    pub fn is_maximal_independent(&self, set: &[Vertex]) -> bool {
        if !self.is_independent(set) {
            return false;
        }
        let mut covered = vec![false; self.num_vertices()];
        for &v in set {
            covered[v] = true;
            for &u in self.neighbors(v) {
                covered[u] = true;
            }
        }
        covered.into_iter().all(|c| c)
    }

    /// All undirected edges `(u, v)` with `u < v`, ascending.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.vertices()
            .flat_map(move |u| self.neighbors(u).iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    /// Replaces the weight vector, keeping the structure.
    pub fn with_weights(&self, weights: Vec<Weight>) -> Result<Graph, GraphError> {
        if weights.len() != self.num_vertices() {
            return Err(GraphError::WeightCountMismatch { expected: self.num_vertices(), got: weights.len() });
        }
        if let Some((v, &w)) = weights.iter().enumerate().find(|(_, &w)| w < 1) {
            return Err(GraphError::NonPositiveWeight(v, w));
        }
        Ok(Graph { offsets: self.offsets.clone(), targets: self.targets.clone(), weights })
    }

    fn check_vertex(&self, v: Vertex) -> Result<(), GraphError> {
        if v < self.num_vertices() {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange(v, self.num_vertices()))
        }
    }
}

/// A subset of `0..capacity` with O(1) membership, insertion and removal.
///
/// Backed by a dense member list plus a position index. Removal swaps the
/// last member into the vacated slot, so iteration follows insertion order
/// only until the first removal. Callers that need a canonical order use
/// [`VertexSet::to_sorted_vec`].
#[derive(Debug, Clone)]
pub struct VertexSet {
    members: Vec<Vertex>,
    position: Vec<usize>,
}

const ABSENT: usize = usize::MAX;

impl VertexSet {
    pub fn new(capacity: usize) -> Self {
        Self { members: Vec::new(), position: vec![ABSENT; capacity] }
    }

    pub fn full(capacity: usize) -> Self {
        Self { members: (0..capacity).collect(), position: (0..capacity).collect() }
    }

    pub fn from_vertices(capacity: usize, vertices: impl IntoIterator<Item = Vertex>) -> Self {
        let mut set = Self::new(capacity);
        for v in vertices {
            set.insert(v);
        }
        set
    }

    pub fn capacity(&self) -> usize {
        self.position.len()
    }

    #[inline]
    pub fn contains(&self, v: Vertex) -> bool {
        self.position.get(v).is_some_and(|&p| p != ABSENT)
    }

    /// Returns `true` if `v` was not already present.
    #[inline]
    pub fn insert(&mut self, v: Vertex) -> bool {
        if self.position[v] != ABSENT {
            return false;
        }
        self.position[v] = self.members.len();
        self.members.push(v);
        true
    }

    /// Returns `true` if `v` was present.
    #[inline]
    pub fn remove(&mut self, v: Vertex) -> bool {
        let p = match self.position.get(v) {
            Some(&p) if p != ABSENT => p,
            _ => return false,
        };
        let last = self.members.pop().expect("non-empty set");
        if last != v {
            self.members[p] = last;
            self.position[last] = p;
        }
        self.position[v] = ABSENT;
        true
    }

    pub fn clear(&mut self) {
        for &v in &self.members {
            self.position[v] = ABSENT;
        }
        self.members.clear();
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.members.iter().copied()
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.members
    }

    /// Member at dense index `i` (`i < len()`), for uniform sampling.
    #[inline]
    pub fn nth(&self, i: usize) -> Vertex {
        self.members[i]
    }

    pub fn to_sorted_vec(&self) -> Vec<Vertex> {
        let mut v = self.members.clone();
        v.sort_unstable();
        v
    }
}

impl PartialEq for VertexSet {
    fn eq(&self, other: &Self) -> bool {
        self.len() == other.len() && self.iter().all(|v| other.contains(v))
    }
}

impl Eq for VertexSet {}
