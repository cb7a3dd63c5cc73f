//! The top-level solver: reduce, construct, then search until the deadline.

use std::time::{Duration, Instant};

use log::{debug, info};
use serde::Serialize;
use thiserror::Error;

use crate::construct::{cis, compute_radius_parameter};
use crate::exchange::{comls, simcomls, ComlsConfig, RewardTable};
use crate::graph::{Graph, Vertex, Weight};
use crate::perturb::PerturbConfig;
use crate::reduce::{reduce_graph, Kernel, LiftError};
use crate::region::{region_search, RegionConfig};
use crate::sadpls::{sadpls, SadplsConfig};
use crate::search::{Deadline, SearchContext};
use crate::state::SolutionState;

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub time_limit: Duration,
    pub seed: u64,
    /// Budget of the reduction phase; also bounded by `time_limit`.
    pub reduce_cap: Duration,
    pub m1: u64,
    pub m2: u64,
    pub search_depth: u64,
    pub bms_t: usize,
    pub no_reduce: bool,
    /// Stop after this many outer iterations (perturbation rounds in the
    /// dense regime). Seeded runs bounded this way replay exactly.
    pub max_iterations: Option<u64>,
    /// Stop as soon as the best weight reaches this value.
    pub target: Option<Weight>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            time_limit: Duration::from_secs(1000),
            seed: 1,
            reduce_cap: Duration::from_secs(200),
            m1: 100,
            m2: 3000,
            search_depth: 100,
            bms_t: 50,
            no_reduce: false,
            max_iterations: None,
            target: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("lifting the kernel solution failed: {0}")]
    Lift(#[from] LiftError),
    #[error("solver produced a dependent set: {0} and {1} are adjacent")]
    NotIndependent(Vertex, Vertex),
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), SolveError> {
        let bad = |msg: &str| Err(SolveError::InvalidConfig(msg.to_owned()));
        if self.time_limit.is_zero() {
            return bad("time limit must be positive");
        }
        if self.m1 == 0 {
            return bad("m1 must be at least 1");
        }
        if self.m2 < self.m1 {
            return bad("m2 must be at least m1");
        }
        if self.search_depth == 0 {
            return bad("search depth must be at least 1");
        }
        if self.bms_t == 0 {
            return bad("BMS sample size must be at least 1");
        }
        Ok(())
    }

    fn sadpls_config(&self) -> SadplsConfig {
        SadplsConfig { m1: self.m1, m2: self.m2, bms_t: self.bms_t }
    }

    fn perturb_config(&self) -> PerturbConfig {
        PerturbConfig { bms_t: self.bms_t, escalate_every: self.m1, ..PerturbConfig::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveResult {
    /// Sorted vertex ids of the input graph.
    pub best_set: Vec<Vertex>,
    pub best_weight: Weight,
    pub time_to_best: f64,
    pub iterations: u64,
    /// `(seconds, weight)` at each improvement of the best solution.
    pub trace: Vec<(f64, Weight)>,
    /// Weight of the constructed initial solution, lifted to the input graph.
    pub initial_weight: Weight,
    pub kernel_n: usize,
    pub kernel_m: usize,
    pub radius_parameter: usize,
    /// Wall-clock seconds of each outer iteration in the sparse regime.
    pub iteration_seconds: Vec<f64>,
}

/// Solves MWIS heuristically on `g` within `cfg.time_limit`.
///
/// Graphs with `r_G ≤ 2` go to the perturbed complex local search; sparser
/// ones alternate global iterated search, region re-solving and, when the
/// regions bring nothing, complex local search. The returned set is checked
/// for independence on `g`.
pub fn solve(g: &Graph, cfg: &SolverConfig) -> Result<SolveResult, SolveError> {
    cfg.validate()?;
    let started = Instant::now();
    let mut ctx = SearchContext::new(cfg.seed, Deadline::at(started + cfg.time_limit));

    let kernel = if cfg.no_reduce {
        Kernel::identity(g)
    } else {
        reduce_graph(g, Some(cfg.reduce_cap.min(cfg.time_limit)))
    };
    let kg = &kernel.graph;
    info!(
        "kernel: {} -> {} vertices, {} -> {} edges, offset {}",
        g.num_vertices(),
        kg.num_vertices(),
        g.num_edges(),
        kg.num_edges(),
        kernel.offset
    );
    ctx.set_offset(kernel.offset);
    ctx.set_target(cfg.target);

    let radius_parameter = compute_radius_parameter(kg);
    let initial = cis(kg, radius_parameter);
    let initial_weight = kg.weight_of(&initial) + kernel.offset;
    ctx.record(kg.weight_of(&initial));
    debug!("r_G = {radius_parameter}, initial weight {initial_weight}");

    let mut iterations = 0u64;
    let mut iteration_seconds = Vec::new();
    let mut bs = initial;
    if !kg.is_empty() {
        let mut s = SolutionState::new(kg, &bs).expect("constructed set is independent");
        let mut rewards = RewardTable::new();
        let more = |i: u64| cfg.max_iterations.is_none_or(|m| i < m);
        if radius_parameter <= 2 {
            let ccfg = ComlsConfig { perturb: cfg.perturb_config(), max_rounds: cfg.max_iterations };
            bs = simcomls(&mut s, &bs, &mut rewards, &ccfg, &mut ctx);
            debug_assert_eq!(s.check_consistency(), Ok(()));
            iterations = s.iter();
        } else {
            let scfg = cfg.sadpls_config();
            let rcfg = RegionConfig::for_graph(kg, scfg, cfg.search_depth);
            while !ctx.should_stop() && more(iterations) {
                let t = Instant::now();
                bs = sadpls(&mut s, &bs, None, &scfg, &mut ctx, true);
                debug_assert_eq!(s.check_consistency(), Ok(()));
                s.assign(&bs).expect("best set is independent");
                let flag;
                (bs, flag) = region_search(&mut s, radius_parameter, &rcfg, &mut ctx);
                debug_assert_eq!(s.check_consistency(), Ok(()));
                if !flag {
                    bs = comls(&mut s, &bs, &mut rewards, &mut ctx);
                    debug_assert_eq!(s.check_consistency(), Ok(()));
                    s.assign(&bs).expect("best set is independent");
                }
                iterations += 1;
                iteration_seconds.push(t.elapsed().as_secs_f64());
                debug!("iteration {iterations}: best {}", ctx.best());
            }
        }
    }

    let best_set = kernel.lift(&bs)?;
    if let Some((u, v)) = first_conflict(g, &best_set) {
        return Err(SolveError::NotIndependent(u, v));
    }
    let best_weight = g.weight_of(&best_set);
    debug_assert_eq!(best_weight, ctx.best());
    let time_to_best = ctx.time_to_best().as_secs_f64();
    Ok(SolveResult {
        best_set,
        best_weight,
        time_to_best,
        iterations,
        trace: ctx.into_trace(),
        initial_weight,
        kernel_n: kg.num_vertices(),
        kernel_m: kg.num_edges(),
        radius_parameter,
        iteration_seconds,
    })
}

fn first_conflict(g: &Graph, set: &[Vertex]) -> Option<(Vertex, Vertex)> {
    let mut member = vec![false; g.num_vertices()];
    for &v in set {
        member[v] = true;
    }
    set.iter().find_map(|&v| g.neighbors(v).iter().find(|&&u| member[u]).map(|&u| (v.min(u), v.max(u))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::brute_force_mwis;

    fn quick() -> SolverConfig {
        SolverConfig { time_limit: Duration::from_secs(1), ..Default::default() }
    }

    #[test]
    fn p3() {
        let g = Graph::new(3, &[(0, 1), (1, 2)], vec![1, 5, 1]).unwrap();
        for seed in 0..3 {
            let r = solve(&g, &SolverConfig { seed, ..quick() }).unwrap();
            assert_eq!(r.best_weight, 5);
            assert_eq!(r.best_set, vec![1]);
        }
    }

    #[test]
    fn edgeless_takes_everything() {
        let g = Graph::new(5, &[], vec![1, 2, 3, 4, 5]).unwrap();
        let r = solve(&g, &quick()).unwrap();
        assert_eq!(r.best_weight, 15);
        assert_eq!(r.best_set, vec![0, 1, 2, 3, 4]);
        let r = solve(&g, &SolverConfig { no_reduce: true, max_iterations: Some(3), ..quick() }).unwrap();
        assert_eq!(r.best_weight, 15);
    }

    #[test]
    fn empty_graph() {
        let g = Graph::new(0, &[], vec![]).unwrap();
        let r = solve(&g, &quick()).unwrap();
        assert_eq!((r.best_weight, r.best_set.len()), (0, 0));
    }

    #[test]
    fn rejects_bad_config() {
        let g = Graph::new(1, &[], vec![1]).unwrap();
        for cfg in [
            SolverConfig { time_limit: Duration::ZERO, ..quick() },
            SolverConfig { m1: 0, ..quick() },
            SolverConfig { m2: 10, ..quick() },
            SolverConfig { search_depth: 0, ..quick() },
        ] {
            assert!(matches!(solve(&g, &cfg), Err(SolveError::InvalidConfig(_))));
        }
    }

    #[test]
    fn unreduced_small_graphs_hit_the_optimum() {
        let n = 16;
        let edges: Vec<_> = (0..n).flat_map(|u| [(u, (u + 1) % n), (u, (u + 5) % n)]).collect();
        let g = Graph::new(n, &edges, (0..n).map(|v| (v as i64 * 37) % 200 + 1).collect()).unwrap();
        let opt = brute_force_mwis(&g).unwrap().1;
        let cfg = SolverConfig { no_reduce: true, target: Some(opt), ..quick() };
        let r = solve(&g, &cfg).unwrap();
        assert_eq!(r.best_weight, opt);
        assert!(r.trace.windows(2).all(|w| w[0].1 < w[1].1));
    }

    #[test]
    fn bounded_runs_replay() {
        let n = 300;
        let edges: Vec<_> = (0..n).flat_map(|u| [(u, (u + 1) % n), (u, (u * 7 + 3) % n)]).collect();
        let g = Graph::new(n, &edges, (0..n).map(|v| (v as i64 * 13) % 200 + 1).collect()).unwrap();
        let cfg = SolverConfig { max_iterations: Some(2), m2: 200, time_limit: Duration::from_secs(60), ..quick() };
        let a = solve(&g, &cfg).unwrap();
        let b = solve(&g, &cfg).unwrap();
        assert_eq!(a.best_set, b.best_set);
        assert!(a.best_weight >= a.initial_weight);
    }
}
