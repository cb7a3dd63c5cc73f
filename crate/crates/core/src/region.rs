//! Region location: re-solve small induced neighborhoods ("local graphs")
//! around rarely visited solution vertices and splice improvements back in.
//!
//! A `(v, r, CS)`-local graph is the radius-`r` BFS ball around `v`, minus
//! those boundary vertices (distance exactly `r`) that touch a solution
//! vertex at distance `r + 1`. Every vertex that survives has no solution
//! neighbor outside the ball, so any independent set of the local graph can
//! replace `CS ∩ D` without breaking independence.

use crate::graph::{Graph, Vertex};
use crate::sadpls::{sadpls, SadplsConfig};
use crate::search::SearchContext;
use crate::state::SolutionState;

#[derive(Debug, Clone)]
pub struct LocalGraph {
    pub graph: Graph,
    /// Local id → global id.
    pub to_global: Vec<Vertex>,
    pub center: Vertex,
    pub radius: usize,
    /// Solution vertices inside the region, as local ids.
    pub solu1: Vec<Vertex>,
}

impl LocalGraph {
    pub fn len(&self) -> usize {
        self.to_global.len()
    }

    pub fn is_empty(&self) -> bool {
        self.to_global.is_empty()
    }

    /// Local ids → global ids.
    pub fn globalize(&self, local: &[Vertex]) -> Vec<Vertex> {
        local.iter().map(|&v| self.to_global[v]).collect()
    }
}

/// BFS levels `0..=max_level` around `center`, truncated when the component
/// is exhausted.
fn bfs_levels(g: &Graph, center: Vertex, max_level: usize, level_of: &mut Vec<usize>) -> Vec<Vec<Vertex>> {
    const UNSEEN: usize = usize::MAX;
    level_of.clear();
    level_of.resize(g.num_vertices(), UNSEEN);
    level_of[center] = 0;
    let mut levels = vec![vec![center]];
    while levels.len() <= max_level {
        let mut next = Vec::new();
        for &u in levels.last().expect("non-empty") {
            for &w in g.neighbors(u) {
                if level_of[w] == UNSEEN {
                    level_of[w] = levels.len();
                    next.push(w);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        levels.push(next);
    }
    levels
}

/// Builds the `(v, r, CS)`-local graph for the solution `cs` (given as a
/// membership test).
pub fn build_local_graph(g: &Graph, in_cs: impl Fn(Vertex) -> bool, center: Vertex, radius: usize) -> LocalGraph {
    let mut level_of = Vec::new();
    let levels = bfs_levels(g, center, radius + 1, &mut level_of);
    let mut region: Vec<Vertex> = Vec::new();
    for (l, members) in levels.iter().enumerate().take(radius + 1) {
        for &u in members {
            let excluded = l == radius
                && g.neighbors(u).iter().any(|&w| level_of[w] == radius + 1 && in_cs(w));
            if !excluded {
                region.push(u);
            }
        }
    }
    region.sort_unstable();
    let (graph, _, to_global) = g.induced_subgraph(&region).expect("region vertices in range");
    let solu1 = (0..to_global.len()).filter(|&i| in_cs(to_global[i])).collect();
    LocalGraph { graph, to_global, center, radius, solu1 }
}

/// Greedy maximal independent set, heaviest first, ties by smallest id.
pub fn greedy_by_weight(g: &Graph) -> Vec<Vertex> {
    let mut s = SolutionState::new(g, &[]).expect("empty set");
    s.maximize();
    s.sorted_solution()
}

/// Segment length `max(1, ⌊|CS| / 100⌋)`.
pub fn segment_length(cs_len: usize) -> usize {
    (cs_len / 100).max(1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegionConfig {
    pub search: SadplsConfig,
    /// Stagnation budget of the local searches.
    pub search_depth: u64,
    /// Radius growth stops once the region would exceed this many vertices.
    pub max_region: usize,
}

impl RegionConfig {
    pub fn for_graph(g: &Graph, search: SadplsConfig, search_depth: u64) -> Self {
        RegionConfig { search, search_depth, max_region: 10_000.max(g.num_vertices() / 5) }
    }
}

/// One round of the region location mechanism on the global state `s`,
/// whose solution must equal the current best. Returns the new best (equal
/// to the final solution of `s`) and whether any local graph improved.
pub fn region_search(
    s: &mut SolutionState<'_>,
    radius_parameter: usize,
    cfg: &RegionConfig,
    ctx: &mut SearchContext,
) -> (Vec<Vertex>, bool) {
    let g = s.graph();
    let mut improve_false = vec![0usize; g.num_vertices()];
    let mut list = s.sorted_solution();
    let mut segment = segment_length(s.len());
    let mut visited = 0usize;
    let mut flag = false;
    while visited <= s.len().min(segment) && !list.is_empty() && !ctx.should_stop() {
        let pos = (0..list.len()).min_by_key(|&i| (s.freq(list[i]), list[i])).expect("non-empty list");
        let center = list.swap_remove(pos);
        visited += 1;

        let mut radius = radius_parameter + improve_false[center];
        let mut lg = build_local_graph(g, |u| s.contains(u), center, radius);
        while lg.len() > cfg.max_region && radius > radius_parameter {
            radius -= 1;
            lg = build_local_graph(g, |u| s.contains(u), center, radius);
        }

        let start = greedy_by_weight(&lg.graph);
        let mut local = SolutionState::new(&lg.graph, &start).expect("greedy set is independent");
        let solu2 = sadpls(&mut local, &lg.solu1, Some(cfg.search_depth), &cfg.search, ctx, false);
        if lg.graph.weight_of(&solu2) > lg.graph.weight_of(&lg.solu1) {
            splice(s, &lg, &solu2);
            ctx.record(s.weight());
            flag = true;
        } else {
            improve_false[center] += 1;
        }
        if !flag && visited == segment {
            segment += segment_length(s.len());
        }
    }
    (s.sorted_solution(), flag)
}

/// Replaces `CS ∩ D` by the local solution `solu2` (local ids).
pub fn splice(s: &mut SolutionState<'_>, lg: &LocalGraph, solu2: &[Vertex]) {
    for &v in &lg.solu1 {
        s.remove_vertex(lg.to_global[v]).expect("region solution vertex");
    }
    for &v in solu2 {
        s.add_vertex(lg.to_global[v]).expect("region vertex is free after removal");
    }
}
