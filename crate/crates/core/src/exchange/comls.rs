use crate::graph::{Vertex, Weight};
use crate::perturb::{pick_strategy, sample_insert_count, savp_perturb, PerturbConfig};
use crate::search::SearchContext;
use crate::state::SolutionState;

use super::{run_module_a, run_module_b, run_module_em, Outcome, RewardTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ComlsConfig {
    pub perturb: PerturbConfig,
    /// Upper bound on perturbation rounds in [`simcomls`]; `None` runs to the deadline.
    pub max_rounds: Option<u64>,
}

struct Best {
    solution: Vec<Vertex>,
    weight: Weight,
}

impl Best {
    fn offer(&mut self, s: &SolutionState<'_>, ctx: &mut SearchContext) -> bool {
        if s.weight() > self.weight {
            self.weight = s.weight();
            self.solution = s.sorted_solution();
            ctx.record(self.weight);
            true
        } else {
            false
        }
    }
}

/// Reward-guided complex local search. Each round runs module `A`, then an
/// `EM` module drawn by roulette wheel, rewards it by outcome, and falls back
/// to module `B` when the `EM` module found nothing. Stops once `sum_Re` has
/// dropped back to its initial value. Returns the best solution seen, which
/// is never lighter than `bs`.
pub fn comls(s: &mut SolutionState<'_>, bs: &[Vertex], rewards: &mut RewardTable, ctx: &mut SearchContext) -> Vec<Vertex> {
    let g = s.graph();
    let mut best = Best { solution: bs.to_vec(), weight: g.weight_of(bs) };
    rewards.reset_sum();
    while !ctx.should_stop() {
        run_module_a(s, ctx.deadline);
        best.offer(s, ctx);
        let module = rewards.select_module(&mut ctx.rng);
        let before = s.weight();
        let global = best.weight;
        let moved = run_module_em(s, module, ctx.deadline);
        let outcome = if s.weight() > global {
            Outcome::NewGlobalBest
        } else if s.weight() > before {
            Outcome::ImprovedCurrent
        } else if moved {
            Outcome::ImprovedMovesOnly
        } else {
            Outcome::None
        };
        rewards.update_reward(module, outcome);
        if outcome == Outcome::None {
            run_module_b(s, ctx.deadline);
        }
        best.offer(s, ctx);
        if rewards.sum_re() <= RewardTable::initial_sum() {
            break;
        }
    }
    best.solution
}

/// Complex local search with perturbation restarts, for dense graphs: repeat
/// [`comls`] and perturb the current solution whenever a round brings no
/// improvement, until the deadline or `max_rounds`.
pub fn simcomls(
    s: &mut SolutionState<'_>,
    bs: &[Vertex],
    rewards: &mut RewardTable,
    cfg: &ComlsConfig,
    ctx: &mut SearchContext,
) -> Vec<Vertex> {
    let g = s.graph();
    let mut best = bs.to_vec();
    let mut best_weight = g.weight_of(bs);
    let mut stagnant = 0u64;
    let mut rounds = 0u64;
    while !ctx.should_stop() && cfg.max_rounds.is_none_or(|m| rounds < m) {
        rounds += 1;
        let found = comls(s, &best, rewards, ctx);
        let improved = g.weight_of(&found) > best_weight;
        if improved {
            best_weight = g.weight_of(&found);
            best = found;
            stagnant = 0;
        } else {
            stagnant += 1;
            let perturb = cfg.perturb.escalated(stagnant);
            let strategy = pick_strategy(&mut ctx.rng);
            let num = sample_insert_count(&perturb, &mut ctx.rng);
            savp_perturb(s, strategy, num, &perturb, &mut ctx.rng);
        }
        s.tick(improved);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::oracle::brute_force_mwis;
    use crate::search::Deadline;
    use std::time::Duration;

    #[test]
    fn comls_on_p3() {
        let g = Graph::new(3, &[(0, 1), (1, 2)], vec![1, 5, 1]).unwrap();
        let mut s = SolutionState::new(&g, &[0, 2]).unwrap();
        let mut ctx = SearchContext::new(1, Deadline::never());
        let mut rt = RewardTable::new();
        assert_eq!(comls(&mut s, &[0, 2], &mut rt, &mut ctx), vec![1]);
    }

    #[test]
    fn comls_stops_after_one_round_at_optimum() {
        let g = Graph::new(3, &[(0, 1), (1, 2)], vec![1, 5, 1]).unwrap();
        let mut s = SolutionState::new(&g, &[1]).unwrap();
        let mut ctx = SearchContext::new(1, Deadline::never());
        let mut rt = RewardTable::new();
        assert_eq!(comls(&mut s, &[1], &mut rt, &mut ctx), vec![1]);
        assert_eq!(rt.sum_re(), 5);
    }

    #[test]
    fn comls_is_seeded() {
        let n = 40;
        let edges: Vec<_> = (0..n).flat_map(|u| [(u, (u + 1) % n), (u, (u + 5) % n), (u, (u * 3 + 1) % n)]).collect();
        let g = Graph::new(n, &edges, (0..n).map(|v| (v as i64 * 71) % 150 + 1).collect()).unwrap();
        let run = |seed| {
            let mut s = SolutionState::new(&g, &[]).unwrap();
            s.maximize();
            let bs = s.sorted_solution();
            let mut ctx = SearchContext::new(seed, Deadline::never());
            let mut rt = RewardTable::new();
            let cfg = ComlsConfig { max_rounds: Some(30), ..Default::default() };
            simcomls(&mut s, &bs, &mut rt, &cfg, &mut ctx)
        };
        assert_eq!(run(3), run(3));
    }

    #[test]
    fn simcomls_zero_budget_returns_input() {
        let g = Graph::new(3, &[(0, 1), (1, 2)], vec![1, 5, 1]).unwrap();
        let mut s = SolutionState::new(&g, &[0, 2]).unwrap();
        let mut ctx = SearchContext::new(1, Deadline::after(Duration::ZERO));
        let mut rt = RewardTable::new();
        assert_eq!(simcomls(&mut s, &[0, 2], &mut rt, &ComlsConfig::default(), &mut ctx), vec![0, 2]);
    }

    fn cycle(weights: &[i64]) -> Graph {
        let n = weights.len();
        Graph::new(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>(), weights.to_vec()).unwrap()
    }

    fn maximal_independent_sets(g: &Graph) -> Vec<Vec<Vertex>> {
        let n = g.num_vertices();
        (0u32..1 << n)
            .map(|mask| (0..n).filter(|&v| mask >> v & 1 == 1).collect::<Vec<_>>())
            .filter(|set| g.is_maximal_independent(set))
            .collect()
    }

    #[test]
    fn comls_solves_small_paths_cycles_and_stars_from_every_maximal_start() {
        let mut graphs = Vec::new();
        for n in 3..=10 {
            let w: Vec<i64> = (0..n).map(|i| ((i * 37 + 11) % 17 + 1) as i64).collect();
            graphs.push(cycle(&w));
            graphs.push(Graph::new(n, &(1..n).map(|i| (i - 1, i)).collect::<Vec<_>>(), w.clone()).unwrap());
            graphs.push(Graph::new(n, &(1..n).map(|i| (0, i)).collect::<Vec<_>>(), w).unwrap());
        }
        let mut misses = Vec::new();
        for (gi, g) in graphs.iter().enumerate() {
            let opt = brute_force_mwis(g).unwrap().1;
            for start in maximal_independent_sets(g) {
                let mut s = SolutionState::new(g, &start).unwrap();
                let mut ctx = SearchContext::new(0, Deadline::never());
                let found = comls(&mut s, &start, &mut RewardTable::new(), &mut ctx);
                assert!(g.is_independent(&found));
                assert!(g.weight_of(&found) <= opt);
                if g.weight_of(&found) != opt {
                    misses.push((gi, start, g.weight_of(&found), opt));
                }
            }
        }
        assert!(misses.is_empty(), "{} misses, first: {:?}", misses.len(), misses.first());
    }
}
