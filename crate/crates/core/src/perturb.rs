//! Scores-based vertex perturbation: forced insertions chosen by one of four
//! per-vertex scores through best-from-multiple-selection sampling.

use rand::Rng;

use crate::graph::Vertex;
use crate::search::SearchRng;
use crate::state::SolutionState;

/// The four perturbation scores. Each has a fixed preferred direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScoreStrategy {
    /// Fewest visits first.
    Freq,
    /// Longest unchanged first.
    Age,
    /// Largest add/remove balance first.
    Change,
    /// Smallest `loss` (largest gain) first.
    Loss,
}

impl ScoreStrategy {
    pub const ALL: [ScoreStrategy; 4] = [ScoreStrategy::Freq, ScoreStrategy::Age, ScoreStrategy::Change, ScoreStrategy::Loss];

    /// Key to minimize.
    fn key(self, s: &SolutionState<'_>, v: Vertex) -> i128 {
        match self {
            ScoreStrategy::Freq => s.freq(v) as i128,
            ScoreStrategy::Age => -(s.age(v) as i128),
            ScoreStrategy::Change => -(s.change(v) as i128),
            ScoreStrategy::Loss => s.loss(v) as i128,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PerturbConfig {
    pub base_num: usize,
    /// Sample size of the best-from-multiple selection.
    pub bms_t: usize,
    /// Stagnant iterations per base-number increment.
    pub escalate_every: u64,
    pub max_base_num: usize,
}

impl Default for PerturbConfig {
    fn default() -> Self {
        PerturbConfig { base_num: 1, bms_t: 50, escalate_every: 100, max_base_num: 8 }
    }
}

impl PerturbConfig {
    /// Base number after `uiter` non-improving iterations: one more for each
    /// full `escalate_every` window, capped.
    pub fn escalated(&self, uiter: u64) -> PerturbConfig {
        let steps = (uiter / self.escalate_every.max(1)).min(self.max_base_num as u64) as usize;
        PerturbConfig { base_num: (1 + steps).min(self.max_base_num), ..*self }
    }
}

/// Number of insertions for one perturbation: `base_num + pro_num` where
/// `pro_num = i + 1` with probability `2^-i` for `i >= 1`.
pub fn sample_insert_count(cfg: &PerturbConfig, rng: &mut SearchRng) -> usize {
    let mut i = 1;
    while i < 64 && rng.gen::<bool>() {
        i += 1;
    }
    cfg.base_num + i + 1
}

pub fn pick_strategy(rng: &mut SearchRng) -> ScoreStrategy {
    ScoreStrategy::ALL[rng.gen_range(0..4u32) as usize]
}

/// Best of up to `t` uniformly sampled non-solution vertices, skipping
/// `exclude`d ones. Scans the whole pool when it has at most `t` members.
fn bms_pick(
    s: &SolutionState<'_>,
    strategy: ScoreStrategy,
    t: usize,
    exclude: &[bool],
    rng: &mut SearchRng,
) -> Option<Vertex> {
    let pool = s.outside();
    let better = |best: Option<(i128, Vertex)>, v: Vertex| {
        let cand = (strategy.key(s, v), v);
        match best {
            Some(b) if b <= cand => Some(b),
            _ => Some(cand),
        }
    };
    let mut best = None;
    if pool.len() <= t {
        for v in pool.iter().filter(|&v| !exclude[v]) {
            best = better(best, v);
        }
    } else {
        for _ in 0..t {
            let v = pool.nth(rng.gen_range(0..pool.len() as u64) as usize);
            if !exclude[v] {
                best = better(best, v);
            }
        }
    }
    best.map(|(_, v)| v)
}

/// Forces `num` vertices into the solution (evicting their solution
/// neighbors), each chosen by BMS under `strategy`, then maximizes. A vertex
/// is inserted at most once per call.
pub fn savp_perturb(
    s: &mut SolutionState<'_>,
    strategy: ScoreStrategy,
    num: usize,
    cfg: &PerturbConfig,
    rng: &mut SearchRng,
) {
    let mut inserted = vec![false; s.graph().num_vertices()];
    for _ in 0..num {
        if s.outside().is_empty() {
            break;
        }
        let Some(v) = bms_pick(s, strategy, cfg.bms_t.max(1), &inserted, rng) else {
            continue;
        };
        s.insert_with_removal(v).expect("non-solution vertex");
        inserted[v] = true;
    }
    s.maximize();
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::search::seeded_rng;

    #[test]
    fn insert_count_support() {
        let mut rng = seeded_rng(1);
        let cfg = PerturbConfig::default();
        for _ in 0..10_000 {
            assert!(sample_insert_count(&cfg, &mut rng) >= 3);
        }
        let cfg = PerturbConfig { base_num: 4, ..cfg };
        let mean = (0..100_000).map(|_| sample_insert_count(&cfg, &mut rng)).sum::<usize>() as f64 / 100_000.0;
        assert!((mean - 7.0).abs() < 0.05, "mean {mean}");
    }

    #[test]
    fn escalation_schedule() {
        let cfg = PerturbConfig::default();
        assert_eq!(cfg.escalated(0).base_num, 1);
        assert_eq!(cfg.escalated(99).base_num, 1);
        assert_eq!(cfg.escalated(100).base_num, 2);
        assert_eq!(cfg.escalated(250).base_num, 3);
        assert_eq!(cfg.escalated(100_000).base_num, 8);
    }

    #[test]
    fn strategy_draws_are_uniform_and_seeded() {
        let mut a = seeded_rng(9);
        let mut b = seeded_rng(9);
        let xs: Vec<_> = (0..100).map(|_| pick_strategy(&mut a)).collect();
        let ys: Vec<_> = (0..100).map(|_| pick_strategy(&mut b)).collect();
        assert_eq!(xs, ys);
        let mut counts = [0usize; 4];
        for _ in 0..10_000 {
            let drawn = pick_strategy(&mut a);
            let k = ScoreStrategy::ALL.iter().position(|&s| s == drawn).unwrap();
            counts[k] += 1;
        }
        for c in counts {
            let f = c as f64 / 10_000.0;
            assert!((0.22..=0.28).contains(&f), "{f}");
        }
        assert_eq!(ScoreStrategy::ALL.len(), 4);
    }

    #[test]
    fn loss_strategy_on_p3() {
        let g = Graph::new(3, &[(0, 1), (1, 2)], vec![1, 5, 1]).unwrap();
        let mut s = SolutionState::new(&g, &[0, 2]).unwrap();
        let mut rng = seeded_rng(0);
        savp_perturb(&mut s, ScoreStrategy::Loss, 1, &PerturbConfig::default(), &mut rng);
        assert_eq!(s.sorted_solution(), vec![1]);
    }

    #[test]
    fn age_ties_go_to_smallest_id() {
        let g = Graph::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0)], vec![1, 1, 1, 1]).unwrap();
        let mut s = SolutionState::new(&g, &[1, 3]).unwrap();
        let mut rng = seeded_rng(0);
        savp_perturb(&mut s, ScoreStrategy::Age, 1, &PerturbConfig::default(), &mut rng);
        assert_eq!(s.sorted_solution(), vec![0, 2]);
    }

    #[test]
    fn more_insertions_than_candidates() {
        let g = Graph::new(3, &[(0, 1), (1, 2)], vec![1, 5, 1]).unwrap();
        let mut s = SolutionState::new(&g, &[1]).unwrap();
        let mut rng = seeded_rng(0);
        savp_perturb(&mut s, ScoreStrategy::Freq, 50, &PerturbConfig::default(), &mut rng);
        assert!(g.is_maximal_independent(&s.sorted_solution()));
        s.check_consistency().unwrap();
    }

    #[test]
    fn deterministic_per_seed() {
        let n = 40;
        let edges: Vec<_> = (0..n).flat_map(|u| [(u, (u + 1) % n), (u, (u + 7) % n)]).collect();
        let g = Graph::new(n, &edges, (0..n).map(|v| (v as i64 * 37) % 200 + 1).collect()).unwrap();
        let run = |seed| {
            let mut s = SolutionState::new(&g, &[]).unwrap();
            s.maximize();
            let mut rng = seeded_rng(seed);
            for strategy in ScoreStrategy::ALL {
                savp_perturb(&mut s, strategy, 5, &PerturbConfig { bms_t: 5, ..Default::default() }, &mut rng);
                s.tick(false);
            }
            s.sorted_solution()
        };
        assert_eq!(run(4), run(4));
        let s = run(5);
        assert!(g.is_maximal_independent(&s));
    }
}
