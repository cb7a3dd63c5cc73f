//! Exactness-preserving weighted reductions and solution lifting.
//!
//! The reducer works on a mutable copy of the graph whose vertex ids start
//! out equal to the input ids. Degree-two folds append fresh ids past the
//! original range. Every rule application is recorded so that a solution of
//! the kernel can be replayed back onto the input graph.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::graph::{Graph, Vertex, Weight};

/// Rule identifiers, in the order they are tried on a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    DegreeZero,
    DegreeOne,
    NeighborhoodRemoval,
    Domination,
    DegreeTwoFold,
    /// Not an exact reduction: a forced choice made by the reduce-and-tie-break
    /// constructor when no rule applies.
    TieBreak,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Rule::DegreeZero => "degree-zero",
            Rule::DegreeOne => "degree-one",
            Rule::NeighborhoodRemoval => "neighborhood-removal",
            Rule::Domination => "domination",
            Rule::DegreeTwoFold => "degree-two-fold",
            Rule::TieBreak => "tie-break",
        };
        f.write_str(name)
    }
}

/// One recorded rule application. Ids are reducer ids: ids below the input
/// vertex count are input vertices, larger ids are fold vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reduction {
    /// Isolated vertex taken.
    Isolated { vertex: usize },
    /// Degree-one vertex at least as heavy as its neighbor taken.
    PendantTake { vertex: usize, neighbor: usize },
    /// Degree-one vertex lighter than its neighbor removed; its weight was
    /// subtracted from the neighbor. The leaf is taken on lifting iff the
    /// neighbor is not.
    PendantFold { leaf: usize, neighbor: usize },
    /// Vertex at least as heavy as its whole neighborhood taken.
    NeighborhoodRemoval { vertex: usize },
    /// `removed` deleted because `N[dominator] ⊆ N[removed]` and it is not heavier.
    Domination { removed: usize, dominator: usize },
    /// Path `left - middle - right` folded into `merged`.
    DegreeTwoFold { left: usize, middle: usize, right: usize, merged: usize },
    TieBreak { vertex: usize },
}

impl Reduction {
    pub fn rule(&self) -> Rule {
        match self {
            Reduction::Isolated { .. } => Rule::DegreeZero,
            Reduction::PendantTake { .. } | Reduction::PendantFold { .. } => Rule::DegreeOne,
            Reduction::NeighborhoodRemoval { .. } => Rule::NeighborhoodRemoval,
            Reduction::Domination { .. } => Rule::Domination,
            Reduction::DegreeTwoFold { .. } => Rule::DegreeTwoFold,
            Reduction::TieBreak { .. } => Rule::TieBreak,
        }
    }
}

/// Which rules the reducer may apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RuleSet {
    pub degree_zero: bool,
    pub degree_one: bool,
    pub neighborhood_removal: bool,
    pub domination: bool,
    pub degree_two_fold: bool,
}

impl RuleSet {
    pub const ALL: RuleSet = RuleSet {
        degree_zero: true,
        degree_one: true,
        neighborhood_removal: true,
        domination: true,
        degree_two_fold: true,
    };

    /// Degree-zero, degree-one and neighborhood removal only.
    pub const CHEAP: RuleSet = RuleSet {
        degree_zero: true,
        degree_one: true,
        neighborhood_removal: true,
        domination: false,
        degree_two_fold: false,
    };
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LiftError {
    #[error("vertex {0} is not a kernel vertex")]
    OutOfRange(Vertex),
    #[error("kernel solution is not independent: {0} and {1} are adjacent")]
    NotIndependent(Vertex, Vertex),
}

/// A reduced graph together with everything needed to map its solutions back.
///
/// For every independent set `S` of `graph`, [`Kernel::lift`] returns an
/// independent set of the input graph weighing `σ(S) + offset`, and the
/// optimum of the input equals the kernel optimum plus `offset`.
#[derive(Debug, Clone)]
pub struct Kernel {
    pub graph: Graph,
    pub offset: Weight,
    pub trace: Vec<Reduction>,
    kernel_ids: Vec<usize>,
    origin: Vec<Option<Vertex>>,
    original_n: usize,
}

impl Kernel {
    /// The trivial kernel: the input itself with no reductions applied.
    pub fn identity(g: &Graph) -> Kernel {
        let n = g.num_vertices();
        Kernel {
            graph: g.clone(),
            offset: 0,
            trace: Vec::new(),
            kernel_ids: (0..n).collect(),
            origin: (0..n).map(Some).collect(),
            original_n: n,
        }
    }

    /// The input vertex a kernel vertex stands for, `None` for fold vertices.
    pub fn original_vertex(&self, kernel_vertex: Vertex) -> Option<Vertex> {
        self.origin[self.kernel_ids[kernel_vertex]]
    }

    pub fn original_num_vertices(&self) -> usize {
        self.original_n
    }

    /// Number of recorded applications per rule.
    pub fn rule_counts(&self) -> Vec<(Rule, usize)> {
        let mut counts: Vec<(Rule, usize)> = Vec::new();
        for r in &self.trace {
            match counts.iter_mut().find(|(rule, _)| *rule == r.rule()) {
                Some((_, c)) => *c += 1,
                None => counts.push((r.rule(), 1)),
            }
        }
        counts.sort();
        counts
    }

    /// Replays the trace backwards to turn a kernel independent set into an
    /// independent set of the input graph. The result is sorted.
    pub fn lift(&self, kernel_solution: &[Vertex]) -> Result<Vec<Vertex>, LiftError> {
        let kn = self.graph.num_vertices();
        let mut in_kernel = vec![false; kn];
        for &v in kernel_solution {
            if v >= kn {
                return Err(LiftError::OutOfRange(v));
            }
            in_kernel[v] = true;
        }
        for &v in kernel_solution {
            if let Some(&u) = self.graph.neighbors(v).iter().find(|&&u| in_kernel[u]) {
                return Err(LiftError::NotIndependent(v.min(u), v.max(u)));
            }
        }
        let mut taken = vec![false; self.origin.len()];
        for &v in kernel_solution {
            taken[self.kernel_ids[v]] = true;
        }
        for step in self.trace.iter().rev() {
            match *step {
                Reduction::Isolated { vertex }
                | Reduction::PendantTake { vertex, .. }
                | Reduction::NeighborhoodRemoval { vertex }
                | Reduction::TieBreak { vertex } => taken[vertex] = true,
                Reduction::PendantFold { leaf, neighbor } => taken[leaf] = !taken[neighbor],
                Reduction::Domination { .. } => {}
                Reduction::DegreeTwoFold { left, middle, right, merged } => {
                    if taken[merged] {
                        taken[left] = true;
                        taken[right] = true;
                    } else {
                        taken[middle] = true;
                    }
                }
            }
        }
        Ok(taken
            .iter()
            .enumerate()
            .filter(|&(_, &t)| t)
            .filter_map(|(id, _)| self.origin[id])
            .collect())
    }
}

/// Applies the full rule set to a fixpoint or until `time_cap` has elapsed.
/// `None` means no cap. The cap is checked before every rule application.
pub fn reduce_graph(g: &Graph, time_cap: Option<Duration>) -> Kernel {
    let mut reducer = Reducer::new(g, RuleSet::ALL);
    reducer.run_to_fixpoint(time_cap.map(|cap| (Instant::now(), cap)));
    reducer.into_kernel()
}

/// Lifts `kernel_solution` through `kernel`; see [`Kernel::lift`].
pub fn lift_solution(kernel: &Kernel, kernel_solution: &[Vertex]) -> Result<Vec<Vertex>, LiftError> {
    kernel.lift(kernel_solution)
}

/// Mutable working graph for the reduction rules.
pub(crate) struct Reducer {
    adj: Vec<BTreeSet<usize>>,
    weight: Vec<Weight>,
    alive: Vec<bool>,
    alive_count: usize,
    origin: Vec<Option<Vertex>>,
    trace: Vec<Reduction>,
    offset: Weight,
    queue: VecDeque<usize>,
    queued: Vec<bool>,
    rules: RuleSet,
    original_n: usize,
}

impl Reducer {
    pub(crate) fn new(g: &Graph, rules: RuleSet) -> Self {
        let n = g.num_vertices();
        Reducer {
            adj: g.vertices().map(|v| g.neighbors(v).iter().copied().collect()).collect(),
            weight: g.weights().to_vec(),
            alive: vec![true; n],
            alive_count: n,
            origin: (0..n).map(Some).collect(),
            trace: Vec::new(),
            offset: 0,
            queue: (0..n).collect(),
            queued: vec![true; n],
            rules,
            original_n: n,
        }
    }

    pub(crate) fn is_empty(&self) -> bool {
        self.alive_count == 0
    }

    pub(crate) fn run_to_fixpoint(&mut self, cap: Option<(Instant, Duration)>) {
        while let Some(v) = self.queue.pop_front() {
            self.queued[v] = false;
            if !self.alive[v] {
                continue;
            }
            if let Some((start, cap)) = cap {
                if start.elapsed() >= cap {
                    self.queue.push_front(v);
                    self.queued[v] = true;
                    return;
                }
            }
            self.apply_first_rule(v);
        }
    }

    /// Tries each enabled rule on `v` in order; returns whether one fired.
    fn apply_first_rule(&mut self, v: usize) -> bool {
        let degree = self.adj[v].len();
        if degree == 0 {
            if self.rules.degree_zero {
                self.take(v, Reduction::Isolated { vertex: v });
                return true;
            }
        } else if degree == 1 && self.rules.degree_one {
            let u = *self.adj[v].first().expect("degree one");
            if self.weight[v] >= self.weight[u] {
                self.take(v, Reduction::PendantTake { vertex: v, neighbor: u });
            } else {
                self.weight[u] -= self.weight[v];
                self.offset += self.weight[v];
                self.trace.push(Reduction::PendantFold { leaf: v, neighbor: u });
                self.delete(v);
                self.enqueue_closed(u);
            }
            return true;
        }
        if degree > 0 && self.rules.neighborhood_removal {
            let around: Weight = self.adj[v].iter().map(|&u| self.weight[u]).sum();
            if self.weight[v] >= around {
                self.take(v, Reduction::NeighborhoodRemoval { vertex: v });
                return true;
            }
        }
        if self.rules.domination && self.try_domination(v) {
            return true;
        }
        if degree == 2 && self.rules.degree_two_fold && self.try_fold(v) {
            return true;
        }
        false
    }

    /// `N[small] ⊆ N[large]` for adjacent `small`, `large`.
    fn closed_subset(&self, small: usize, large: usize) -> bool {
        self.adj[small].len() <= self.adj[large].len()
            && self.adj[small].iter().all(|&w| w == large || self.adj[large].contains(&w))
    }

    fn try_domination(&mut self, v: usize) -> bool {
        let neighbors: Vec<usize> = self.adj[v].iter().copied().collect();
        // v itself is dominated by some neighbor.
        for &u in &neighbors {
            if self.weight[v] <= self.weight[u] && self.closed_subset(u, v) {
                self.trace.push(Reduction::Domination { removed: v, dominator: u });
                self.delete(v);
                return true;
            }
        }
        // v dominates a neighbor.
        for &u in &neighbors {
            if self.weight[u] <= self.weight[v] && self.closed_subset(v, u) {
                self.trace.push(Reduction::Domination { removed: u, dominator: v });
                self.delete(u);
                self.enqueue(v);
                return true;
            }
        }
        false
    }

    fn try_fold(&mut self, v: usize) -> bool {
        let mut it = self.adj[v].iter().copied();
        let (a, b) = (it.next().expect("degree two"), it.next().expect("degree two"));
        let (wa, wb, wv) = (self.weight[a], self.weight[b], self.weight[v]);
        if self.adj[a].contains(&b) || wv < wa.max(wb) || wv >= wa + wb {
            return false;
        }
        let merged = self.adj.len();
        let mut merged_adj: BTreeSet<usize> = self.adj[a].union(&self.adj[b]).copied().collect();
        merged_adj.remove(&v);
        self.offset += wv;
        self.trace.push(Reduction::DegreeTwoFold { left: a, middle: v, right: b, merged });
        self.delete(v);
        self.delete(a);
        self.delete(b);
        for &x in &merged_adj {
            self.adj[x].insert(merged);
        }
        self.adj.push(merged_adj);
        self.weight.push(wa + wb - wv);
        self.alive.push(true);
        self.alive_count += 1;
        self.origin.push(None);
        self.queued.push(false);
        self.enqueue_closed(merged);
        true
    }

    /// Records a taken vertex and removes its closed neighborhood.
    fn take(&mut self, v: usize, record: Reduction) {
        self.offset += self.weight[v];
        self.trace.push(record);
        let neighbors: Vec<usize> = self.adj[v].iter().copied().collect();
        self.delete(v);
        for u in neighbors {
            self.delete(u);
        }
    }

    /// Forces `v` into the solution regardless of the rules.
    pub(crate) fn force_take(&mut self, v: usize) {
        self.take(v, Reduction::TieBreak { vertex: v });
    }

    fn delete(&mut self, v: usize) {
        if !self.alive[v] {
            return;
        }
        self.alive[v] = false;
        self.alive_count -= 1;
        let neighbors = std::mem::take(&mut self.adj[v]);
        for &u in &neighbors {
            self.adj[u].remove(&v);
        }
        for u in neighbors {
            self.enqueue(u);
        }
    }

    /// Queues `v` and its neighbors, whose rule conditions read `σ(v)`.
    fn enqueue_closed(&mut self, v: usize) {
        self.enqueue(v);
        let around: Vec<usize> = self.adj[v].iter().copied().collect();
        for x in around {
            self.enqueue(x);
        }
    }

    fn enqueue(&mut self, v: usize) {
        if self.alive[v] && !self.queued[v] {
            self.queued[v] = true;
            self.queue.push_back(v);
        }
    }

    /// Vertex maximizing `σ(v) − σ(N(v))` on the current working graph,
    /// ties by smallest id.
    pub(crate) fn tie_break_vertex(&self) -> Option<usize> {
        let mut best: Option<(Weight, usize)> = None;
        for v in (0..self.adj.len()).filter(|&v| self.alive[v]) {
            let score = self.weight[v] - self.adj[v].iter().map(|&u| self.weight[u]).sum::<Weight>();
            if best.is_none_or(|(s, _)| score > s) {
                best = Some((score, v));
            }
        }
        best.map(|(_, v)| v)
    }

    pub(crate) fn into_kernel(self) -> Kernel {
        let kernel_ids: Vec<usize> = (0..self.adj.len()).filter(|&v| self.alive[v]).collect();
        let mut index = vec![usize::MAX; self.adj.len()];
        for (k, &id) in kernel_ids.iter().enumerate() {
            index[id] = k;
        }
        let adj = kernel_ids.iter().map(|&id| self.adj[id].iter().map(|&u| index[u]).collect()).collect();
        let weights = kernel_ids.iter().map(|&id| self.weight[id]).collect();
        Kernel {
            graph: Graph::from_adjacency(adj, weights),
            offset: self.offset,
            trace: self.trace,
            kernel_ids,
            origin: self.origin,
            original_n: self.original_n,
        }
    }
}
