//! Graph files, weight families and the benchmark harness.

mod bench;
mod parse;
mod weights;

pub use bench::{
    read_runs, report_table, run_benchmark, summarize, BenchError, BenchRow, BenchSpec, InstanceSpec, RunRow,
    CSV_HEADER,
};
pub use parse::{parse_edgelist, parse_graph, parse_metis, write_metis, Format, ParseError, ParseErrorKind, ParsedGraph};
pub use weights::{
    apply_weights, assign_weights_family_a, assign_weights_family_b, family_a_weight, MissingWeights, WeightMode,
    FAMILY_MAX_WEIGHT,
};
