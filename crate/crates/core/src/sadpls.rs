//! Iterated local search alternating module-`A` descent with scores-based
//! perturbation, stopped by a stagnation budget.

use crate::exchange::run_module_a;
use crate::graph::Vertex;
use crate::perturb::{pick_strategy, sample_insert_count, savp_perturb, PerturbConfig};
use crate::search::SearchContext;
use crate::state::SolutionState;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SadplsConfig {
    /// Stagnation window after which the perturbation base number grows.
    pub m1: u64,
    /// Stagnation budget in global mode.
    pub m2: u64,
    pub bms_t: usize,
}

impl Default for SadplsConfig {
    fn default() -> Self {
        SadplsConfig { m1: 100, m2: 3000, bms_t: 50 }
    }
}

/// Stagnation budget: `None` selects global mode (budget `m2`).
pub type SearchDepth = Option<u64>;

/// Improves `s`, returning the best solution seen (never lighter than `bs`).
///
/// Each iteration descends with module `A`, compares against the best, then
/// perturbs with a uniformly drawn score strategy. The loop ends once the
/// best has not improved for `depth` consecutive iterations (`m2` when
/// `depth` is `None`) or the context asks to stop. Only improvements made
/// with `report` set are logged in the context's trace.
pub fn sadpls(
    s: &mut SolutionState<'_>,
    bs: &[Vertex],
    depth: SearchDepth,
    cfg: &SadplsConfig,
    ctx: &mut SearchContext,
    report: bool,
) -> Vec<Vertex> {
    let g = s.graph();
    let budget = depth.unwrap_or(cfg.m2).max(1);
    let base = PerturbConfig { base_num: 1, bms_t: cfg.bms_t, escalate_every: cfg.m1, max_base_num: 8 };
    let mut best = bs.to_vec();
    let mut best_weight = g.weight_of(bs);
    let mut uiter = 0u64;
    while uiter < budget && !ctx.should_stop() {
        run_module_a(s, ctx.deadline);
        let improved = s.weight() > best_weight;
        if improved {
            best_weight = s.weight();
            best = s.sorted_solution();
            uiter = 0;
            if report {
                ctx.record(best_weight);
            }
        } else {
            uiter += 1;
        }
        let perturb = base.escalated(uiter);
        let strategy = pick_strategy(&mut ctx.rng);
        let num = sample_insert_count(&perturb, &mut ctx.rng);
        savp_perturb(s, strategy, num, &perturb, &mut ctx.rng);
        s.tick(improved);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::search::Deadline;

    #[test]
    fn p3_global_mode() {
        let g = Graph::new(3, &[(0, 1), (1, 2)], vec![1, 5, 1]).unwrap();
        let mut s = SolutionState::new(&g, &[0, 2]).unwrap();
        let mut ctx = SearchContext::new(1, Deadline::never());
        let cfg = SadplsConfig { m2: 50, ..Default::default() };
        assert_eq!(sadpls(&mut s, &[0, 2], None, &cfg, &mut ctx, true), vec![1]);
        assert_eq!(ctx.best(), 5);
    }

    #[test]
    fn depth_one_perturbs_once() {
        let g = Graph::new(3, &[(0, 1), (1, 2)], vec![1, 5, 1]).unwrap();
        let mut s = SolutionState::new(&g, &[1]).unwrap();
        let mut ctx = SearchContext::new(1, Deadline::never());
        let out = sadpls(&mut s, &[1], Some(1), &SadplsConfig::default(), &mut ctx, false);
        assert_eq!(out, vec![1]);
        // One tick per iteration, one iteration per perturbation.
        assert_eq!(s.iter(), 1);
        assert!(ctx.trace().is_empty());
    }

    #[test]
    fn result_is_monotone_and_independent() {
        let n = 60;
        let edges: Vec<_> = (0..n).flat_map(|u| [(u, (u + 1) % n), (u, (u + 9) % n)]).collect();
        let g = Graph::new(n, &edges, (0..n).map(|v| (v as i64 * 29) % 200 + 1).collect()).unwrap();
        let mut s = SolutionState::new(&g, &[]).unwrap();
        s.maximize();
        let start = s.sorted_solution();
        let mut ctx = SearchContext::new(8, Deadline::never());
        let cfg = SadplsConfig { m2: 200, ..Default::default() };
        let out = sadpls(&mut s, &start, None, &cfg, &mut ctx, true);
        assert!(g.is_independent(&out));
        assert!(g.weight_of(&out) >= g.weight_of(&start));
        s.check_consistency().unwrap();
    }
}
