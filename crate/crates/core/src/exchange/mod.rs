//! Vertex-exchange neighborhoods and their composition into exchange modules.
//!
//! Every move here is first-improvement and strictly increases the solution
//! weight, which bounds the number of moves of any descent by `Σσ`.

mod comls;
mod modules;
mod reward;

pub use comls::{comls, simcomls, ComlsConfig};
pub use modules::{run_module_a, run_module_b, run_module_em};
pub use reward::{EmModule, Outcome, RewardTable, EM_MODULES};

use crate::graph::{Vertex, Weight};
use crate::state::{SolutionState, StateError};

/// Candidate lists for `(x, y)`-exchanges keep this many of the heaviest
/// tightness-one and tightness-two neighbors.
pub const XY_CANDIDATE_CAP: usize = 16;

/// One pass of `(ω,1)`-swaps: every non-solution vertex with negative loss,
/// in ascending id order, is inserted and its solution neighbors evicted.
pub fn omega_one_pass(s: &mut SolutionState<'_>) -> bool {
    let candidates = s.improving().to_sorted_vec();
    let mut applied = false;
    for v in candidates {
        if !s.contains(v) && s.loss(v) < 0 {
            s.insert_with_removal(v).expect("non-solution vertex");
            applied = true;
        }
    }
    applied
}

/// Tightness-one neighbors of the solution vertex `v`, ascending id.
fn tight_neighbors(s: &SolutionState<'_>, v: Vertex, tightness: u32) -> Vec<Vertex> {
    s.graph().neighbors(v).iter().copied().filter(|&u| s.tightness(u) == tightness).collect()
}

/// One pass of 2-improvements: each solution vertex `v` is replaced by two
/// non-adjacent tightness-one neighbors whose weights sum to more than `σ(v)`.
pub fn two_improvement_pass(s: &mut SolutionState<'_>) -> bool {
    let g = s.graph();
    let mut applied = false;
    for v in s.sorted_solution() {
        if !s.contains(v) {
            continue;
        }
        let wv = g.weight(v);
        let cands = tight_neighbors(s, v, 1);
        if cands.len() < 2 {
            continue;
        }
        let heaviest = cands.iter().map(|&u| g.weight(u)).max().unwrap_or(0);
        let mut found = None;
        'outer: for (i, &a) in cands.iter().enumerate() {
            if g.weight(a) + heaviest <= wv {
                continue;
            }
            for &b in &cands[i + 1..] {
                if g.weight(a) + g.weight(b) > wv && !g.has_edge(a, b) {
                    found = Some((a, b));
                    break 'outer;
                }
            }
        }
        if let Some((a, b)) = found {
            s.remove_vertex(v).expect("solution vertex");
            s.add_vertex(a).expect("freed vertex");
            s.add_vertex(b).expect("freed vertex");
            applied = true;
        }
    }
    applied
}

struct XySearch<'a> {
    t1: &'a [Vertex],
    t2: &'a [Vertex],
    /// The solution neighbor other than the center, per `t2` entry.
    t2_other: &'a [Vertex],
    weights: &'a [Weight],
    x: usize,
    y: usize,
    chosen: Vec<Vertex>,
    others: Vec<Vertex>,
    adjacent: &'a dyn Fn(Vertex, Vertex) -> bool,
}

impl XySearch<'_> {
    fn bound(list: &[Vertex], from: usize, k: usize, weights: &[Weight]) -> Weight {
        list[from..].iter().take(k).map(|&u| weights[u]).sum()
    }

    /// Depth-first over `y` picks from `t2` then `x` picks from `t1`.
    /// `gain_so_far` = σ(chosen) − σ(others); the center's weight is
    /// included in `center_cost`.
    fn search(&mut self, from: usize, in_t2: bool, gain_so_far: Weight, center_cost: Weight) -> bool {
        let picked_t2 = self.chosen.len().min(self.y);
        let picked_t1 = self.chosen.len() - picked_t2;
        let (need_t2, need_t1) = (self.y - picked_t2, self.x - picked_t1);
        if need_t2 == 0 && need_t1 == 0 {
            return gain_so_far - center_cost > 0;
        }
        if in_t2 && need_t2 == 0 {
            return self.search(0, false, gain_so_far, center_cost);
        }
        let list = if in_t2 { self.t2 } else { self.t1 };
        let need = if in_t2 { need_t2 } else { need_t1 };
        for i in from..list.len() {
            if list.len() - i < need {
                break;
            }
            let mut upper = gain_so_far + Self::bound(list, i, need, self.weights) - center_cost;
            if in_t2 {
                upper += Self::bound(self.t1, 0, need_t1, self.weights);
            }
            if upper <= 0 {
                // Lists are sorted by descending weight.
                break;
            }
            let u = list[i];
            if self.chosen.iter().any(|&c| (self.adjacent)(c, u)) {
                continue;
            }
            let mut gain = gain_so_far + self.weights[u];
            let mut new_other = None;
            if in_t2 {
                let o = self.t2_other[i];
                if !self.others.contains(&o) {
                    gain -= self.weights[o];
                    new_other = Some(o);
                }
            }
            self.chosen.push(u);
            if let Some(o) = new_other {
                self.others.push(o);
            }
            if self.search(i + 1, in_t2, gain, center_cost) {
                return true;
            }
            self.chosen.pop();
            if new_other.is_some() {
                self.others.pop();
            }
        }
        false
    }
}

fn by_weight_desc(s: &SolutionState<'_>, mut list: Vec<Vertex>) -> Vec<Vertex> {
    let g = s.graph();
    list.sort_unstable_by_key(|&u| (std::cmp::Reverse(g.weight(u)), u));
    list
}

/// `(v; x, y)`-exchange: look for an independent `S ⊆ N(v)` with exactly `x`
/// tightness-one and `y` tightness-two vertices whose weight exceeds that of
/// `N(S) ∩ CS`. The first such `S` replaces its solution neighbors and the
/// solution is then maximized.
pub fn xy_exchange(s: &mut SolutionState<'_>, v: Vertex, x: usize, y: usize) -> Result<bool, StateError> {
    if !s.contains(v) {
        return Err(StateError::NotInSolution(v));
    }
    if x + y == 0 {
        return Ok(false);
    }
    let g = s.graph();
    let mut t1 = by_weight_desc(s, tight_neighbors(s, v, 1));
    let mut t2 = by_weight_desc(s, tight_neighbors(s, v, 2));
    t1.truncate(XY_CANDIDATE_CAP);
    t2.truncate(XY_CANDIDATE_CAP);
    if t1.len() < x || t2.len() < y {
        return Ok(false);
    }
    let t2_other: Vec<Vertex> = t2
        .iter()
        .map(|&u| *g.neighbors(u).iter().find(|&&w| w != v && s.contains(w)).expect("tightness two"))
        .collect();
    let adjacent = |a: Vertex, b: Vertex| g.has_edge(a, b);
    let mut search = XySearch {
        t1: &t1,
        t2: &t2,
        t2_other: &t2_other,
        weights: g.weights(),
        x,
        y,
        chosen: Vec::with_capacity(x + y),
        others: Vec::with_capacity(y),
        adjacent: &adjacent,
    };
    if !search.search(0, y > 0, 0, g.weight(v)) {
        return Ok(false);
    }
    let (chosen, others) = (search.chosen, search.others);
    s.remove_vertex(v)?;
    for o in others {
        s.remove_vertex(o)?;
    }
    for u in chosen {
        s.add_vertex(u)?;
    }
    s.maximize();
    Ok(true)
}

/// `(x, 0)`-exchange with unbounded `x`: greedily collect tightness-one
/// neighbors of `v` heaviest first, skipping any adjacent to one already
/// collected, and swap them in if they outweigh `v`.
pub fn x0_exchange(s: &mut SolutionState<'_>, v: Vertex) -> Result<bool, StateError> {
    if !s.contains(v) {
        return Err(StateError::NotInSolution(v));
    }
    let g = s.graph();
    let mut set: Vec<Vertex> = Vec::new();
    let mut total = 0;
    for u in by_weight_desc(s, tight_neighbors(s, v, 1)) {
        if set.iter().all(|&c| !g.has_edge(c, u)) {
            set.push(u);
            total += g.weight(u);
        }
    }
    if total <= g.weight(v) {
        return Ok(false);
    }
    s.remove_vertex(v)?;
    for u in set {
        s.add_vertex(u)?;
    }
    Ok(true)
}

/// `(2, 3)`-swaps: for a tightness-two vertex `w` with solution neighbors
/// `u` and `v`, add `w`, a tightness-one neighbor of `u` and one of `v`
/// (mutually non-adjacent) in place of `u` and `v`, if heavier.
pub fn two_three_pass(s: &mut SolutionState<'_>) -> bool {
    let g = s.graph();
    let mut applied = false;
    for w in s.outside().to_sorted_vec() {
        if s.contains(w) || s.tightness(w) != 2 {
            continue;
        }
        let mut pair = g.neighbors(w).iter().copied().filter(|&z| s.contains(z));
        let (u, v) = (pair.next().expect("tightness two"), pair.next().expect("tightness two"));
        let cost = g.weight(u) + g.weight(v);
        let side = |c: Vertex| -> Vec<Vertex> {
            by_weight_desc(s, tight_neighbors(s, c, 1).into_iter().filter(|&a| !g.has_edge(a, w)).collect())
        };
        let (left, right) = (side(u), side(v));
        let (Some(&best_right), false) = (right.first(), left.is_empty()) else {
            continue;
        };
        let mut found = None;
        'outer: for &a in &left {
            if g.weight(w) + g.weight(a) + g.weight(best_right) <= cost {
                break;
            }
            for &b in &right {
                if g.weight(w) + g.weight(a) + g.weight(b) <= cost {
                    break;
                }
                if !g.has_edge(a, b) {
                    found = Some((a, b));
                    break 'outer;
                }
            }
        }
        if let Some((a, b)) = found {
            s.remove_vertex(u).expect("solution vertex");
            s.remove_vertex(v).expect("solution vertex");
            for z in [w, a, b] {
                s.add_vertex(z).expect("freed vertex");
            }
            applied = true;
        }
    }
    applied
}

/// Runs `(x, y)`-exchanges around every solution vertex, ascending id.
pub fn xy_exchange_pass(s: &mut SolutionState<'_>, x: usize, y: usize) -> bool {
    let mut applied = false;
    for v in s.sorted_solution() {
        if s.contains(v) && xy_exchange(s, v, x, y).expect("solution vertex") {
            applied = true;
        }
    }
    applied
}

/// Runs `(x, 0)`-exchanges around every solution vertex, ascending id.
pub fn x0_exchange_pass(s: &mut SolutionState<'_>) -> bool {
    let mut applied = false;
    for v in s.sorted_solution() {
        if s.contains(v) && x0_exchange(s, v).expect("solution vertex") {
            applied = true;
        }
    }
    applied
}
