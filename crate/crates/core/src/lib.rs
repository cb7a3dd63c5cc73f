//! Dynamic local search for the maximum weighted independent set problem.
//!
//! The pipeline is: [`reduce`] the input to a kernel, build an initial
//! solution with [`construct`], then improve it with the [`sadpls`] iterated
//! local search, [`region`] re-solving and the reward-guided
//! [`exchange::comls`] until the deadline. [`solve`] runs all of it.
//!
//! ```
//! use dynls::{solve, Graph, SolverConfig};
//! use std::time::Duration;
//!
//! let g = Graph::new(3, &[(0, 1), (1, 2)], vec![1, 5, 1]).unwrap();
//! let cfg = SolverConfig { time_limit: Duration::from_millis(200), ..Default::default() };
//! let result = solve(&g, &cfg).unwrap();
//! assert_eq!(result.best_set, vec![1]);
//! assert_eq!(result.best_weight, 5);
//! ```

pub mod construct;
pub mod exchange;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod perturb;
pub mod reduce;
pub mod region;
pub mod sadpls;
pub mod search;
pub mod solver;
pub mod state;

pub use graph::{Graph, GraphError, Vertex, VertexSet, Weight};
pub use oracle::brute_force_mwis;
pub use reduce::{reduce_graph, Kernel};
pub use search::{Deadline, SearchContext};
pub use solver::{solve, SolveError, SolveResult, SolverConfig};
pub use state::SolutionState;

// Compiles and runs the guide's snippets as doc-tests.
#[cfg(doctest)]
mod book {
    macro_rules! chapter {
        ($name:ident, $file:literal) => {
            #[doc = include_str!(concat!("../../../book/src/", $file))]
            mod $name {}
        };
    }
    chapter!(introduction, "introduction.md");
    chapter!(graphs, "graphs.md");
    chapter!(reductions, "reductions.md");
    chapter!(construction, "construction.md");
    chapter!(local_search, "local-search.md");
    chapter!(exchange, "exchange.md");
    chapter!(regions, "regions.md");
    chapter!(solver, "solver.md");
    chapter!(cli, "cli.md");
}
